"""``polycert`` command line.

Exit codes: 0 success / holds / accept, 1 disproved / reject, 2 usage or
input error, 3 inconclusive (search caps exhausted), 4 invalid certificate.
Every report carries a manifest; ``polycert replay FILE`` re-runs it and
reproduces the output byte for byte.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

import yaml

from . import __version__, certfile
from .certfile import CertificateDocument, FormatError
from .certificates import BoundContext, InvalidCertificate
from .poly import ParseError, max_var_index, parse
from .search import (
    DEFAULT_C_MAX,
    DEFAULT_J_MAX,
    DEFAULT_K_MAX,
    DEFAULT_N_MAX,
    SearchExhausted,
    asymptotic_search,
    closure_from_polya,
    ideal_search,
)
from .semiring import NONNEG_RATIONALS, SemiringInstance, is_member
from .spectrum import GridConfig, RateOptions, pointwise_check, rate, variety_check

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_INVALID = 4

log = logging.getLogger("polycert")


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} (use a or a/b)") from None


def _add_grid(p):
    p.add_argument("--grid", type=int, default=64, help="samples per axis (default 64)")
    p.add_argument("--seed", type=int, default=0, help="seed for extra random sample points")
    p.add_argument("--samples", type=int, default=0, help="extra seeded random sample points")


def _add_instance(p):
    p.add_argument("--domain", choices=["N", "Q+"], default=NONNEG_RATIONALS, help="coefficient domain")
    p.add_argument("--prime", choices=["auto", "yes", "no"], default="auto",
                   help="restrict to positive constant term (auto: when every input has one)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polycert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"polycert {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and timing to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="look for an exact point with x(s) < y(s)")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    _add_grid(p)
    _add_instance(p)
    p.add_argument("--out")

    p = sub.add_parser("certify", help="search for a certificate of x >= y (or f >= 0 on an ideal)")
    p.add_argument("--form", choices=["closure", "asymptotic", "ideal"], default="closure")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--f")
    p.add_argument("--ideal", action="append", default=[], help="ideal generator (repeatable)")
    p.add_argument("--r", type=rational, default=Fraction(1))
    p.add_argument("--eps", type=rational, default=Fraction(1, 10))
    p.add_argument("--delta", type=rational, help="Pólya gap (closure form)")
    p.add_argument("--kmax", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--jmax", type=int, default=DEFAULT_J_MAX)
    p.add_argument("--cmax", type=int, default=DEFAULT_C_MAX)
    p.add_argument("--deg-h", type=int)
    p.add_argument("--deg-mult", type=int)
    _add_grid(p)
    _add_instance(p)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("file")

    p = sub.add_parser("rate", help="estimate the regularized rate from x to y")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--rounds", type=int, default=3, help="zoom refinement rounds")
    p.add_argument("--seed", type=int, default=0)
    _add_instance(p)
    p.add_argument("--out")

    p = sub.add_parser("replay", help="re-run the manifest stored in an output file")
    p.add_argument("file")
    p.add_argument("--out")
    return parser


def _strip_out(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--out":
            skip = True
        elif a.startswith("--out=") or a in ("-v", "--verbose"):
            continue
        else:
            out.append(a)
    return out


def _parse_inputs(named: dict) -> tuple:
    texts = {k: v for k, v in named.items() if v is not None}
    try:
        d = max([1] + [max_var_index(t) for t in texts.values()])
    except ParseError as exc:
        raise UsageError(f"malformed polynomial: {exc}") from None
    polys = {}
    for name, text in texts.items():
        try:
            polys[name] = parse(text, nvars=d)
        except ParseError as exc:
            raise UsageError(f"--{name}: {exc}") from None
    return d, polys


def _instance(args, d, polys) -> SemiringInstance:
    laurent = any(p.is_laurent() for p in polys)
    if args.prime == "auto":
        prime = not laurent and all(p.constant_term > 0 for p in polys)
    else:
        prime = args.prime == "yes"
    try:
        inst = SemiringInstance(d, args.domain, laurent, prime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for p in polys:
        if p.is_zero():
            raise UsageError("inputs must be nonzero")
        if not is_member(inst, p):
            raise UsageError(f"{p} is not a member of {inst}")
    return inst


def _manifest(args, argv, inst, inputs, ctx=None, caps=None) -> dict:
    out = {"tool": "polycert", "version": __version__, "command": args.command, "argv": _strip_out(argv),
           "instance": inst.to_dict(), "inputs": inputs}
    if ctx is not None:
        out["context"] = {"r": str(ctx.r), "eps": str(ctx.eps)}
    out["caps"] = caps or {}
    out["seed"] = getattr(args, "seed", 0)
    return out


def _grid(args) -> GridConfig:
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    return GridConfig(points_per_axis=args.grid, random_points=args.samples, seed=args.seed)


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        log.info("wrote %s", out_path)
    else:
        sys.stdout.write(text)


def cmd_check(args, argv) -> int:
    d, polys = _parse_inputs({"x": args.x, "y": args.y})
    x, y = polys["x"], polys["y"]
    inst = _instance(args, d, [x, y])
    grid = _grid(args)
    res = pointwise_check(inst, x, y, grid)
    report = {"command": "check", "status": "holds_on_samples" if res.holds_on_samples else "counterexample"}
    if res.counterexample is not None:
        report["witness"] = str(res.counterexample)
    report["result"] = res.to_dict()
    report["manifest"] = _manifest(args, argv, inst, {"x": str(x), "y": str(y)}, caps={"grid": grid.to_dict()})
    _emit(certfile.dump_yaml(report), args.out)
    return EXIT_OK if res.holds_on_samples else EXIT_FAIL


def cmd_certify(args, argv) -> int:
    grid = _grid(args)
    try:
        ctx = BoundContext(args.r, args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.form == "ideal":
        if args.f is None or not args.ideal:
            raise UsageError("--form ideal needs --f and at least one --ideal")
        named = {"f": args.f}
        named.update({f"ideal[{i}]": g for i, g in enumerate(args.ideal)})
        d, polys = _parse_inputs(named)
        f = polys.pop("f")
        gens = list(polys.values())
        if f.is_laurent() or any(g.is_laurent() for g in gens):
            raise UsageError("ideal certificates need ordinary (non-Laurent) polynomials")
        inst = SemiringInstance(d, NONNEG_RATIONALS, False, False)
        inputs = {"f": str(f), "ideal": [str(g) for g in gens]}
        caps = {"deg_h": args.deg_h, "deg_mult": args.deg_mult, "grid": grid.to_dict()}
        manifest = _manifest(args, argv, inst, inputs, ctx, caps)
        check = variety_check(f, gens, grid)
        if not check.holds_on_samples:
            return _disproved(args, check, manifest)
        search = lambda: ideal_search(f, gens, ctx, args.deg_h, args.deg_mult)  # noqa: E731
        doc_inputs = {"f": f}
    else:
        if args.x is None or args.y is None:
            raise UsageError(f"--form {args.form} needs --x and --y")
        d, polys = _parse_inputs({"x": args.x, "y": args.y})
        x, y = polys["x"], polys["y"]
        inst = _instance(args, d, [x, y])
        inputs = {"x": str(x), "y": str(y)}
        if args.form == "closure":
            if inst.laurent:
                raise UsageError("the closure search needs ordinary (non-Laurent) polynomials")
            caps = {"kmax": args.kmax, "delta": None if args.delta is None else str(args.delta)}
            search = lambda: closure_from_polya(inst, x, y, ctx, args.kmax, args.delta)  # noqa: E731
        else:
            caps = {"nmax": args.nmax, "jmax": args.jmax, "cmax": args.cmax}
            search = lambda: asymptotic_search(inst, x, y, ctx, args.nmax, args.jmax, args.cmax)  # noqa: E731
        caps["grid"] = grid.to_dict()
        manifest = _manifest(args, argv, inst, inputs, ctx, caps)
        check = pointwise_check(inst, x, y, grid)
        if not check.holds_on_samples:
            return _disproved(args, check, manifest)
        doc_inputs = {"x": x, "y": y}
    try:
        res = search()
    except SearchExhausted as exc:
        log.info("search exhausted after %.3fs", exc.report.elapsed)
        report = {"command": "certify", "status": "inconclusive", "reason": str(exc),
                  "report": exc.report.to_dict(), "manifest": manifest}
        _emit(certfile.dump_yaml(report), args.out)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log.info("certificate found in %.3fs", res.report.elapsed)
    doc = CertificateDocument(inst, ctx, res.certificate, report=res.report.to_dict(), manifest=manifest, **doc_inputs)
    _emit(certfile.dumps(doc), args.out)
    return EXIT_OK


def _disproved(args, check, manifest) -> int:
    report = {"command": manifest["command"], "status": "disproved", "witness": str(check.counterexample),
              "gap": str(check.gap), "result": check.to_dict(), "manifest": manifest}
    _emit(certfile.dump_yaml(report), args.out)
    return EXIT_FAIL


def cmd_verify(args, argv) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    try:
        doc = certfile.loads(text)
    except FormatError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidCertificate as exc:
        sys.stdout.write(certfile.dump_yaml({"command": "verify", "status": "invalid", "reason": str(exc)}))
        return EXIT_INVALID
    try:
        ok = doc.verify()
    except ValueError as exc:  # includes InvalidCertificate; bad x or y makes the document invalid too
        sys.stdout.write(certfile.dump_yaml({"command": "verify", "status": "invalid", "reason": str(exc)}))
        return EXIT_INVALID
    sys.stdout.write(certfile.dump_yaml({"command": "verify", "status": "accept" if ok else "reject",
                                         "form": doc.certificate.form}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rate(args, argv) -> int:
    d, polys = _parse_inputs({"x": args.x, "y": args.y})
    x, y = polys["x"], polys["y"]
    inst = _instance(args, d, [x, y])
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    opts = RateOptions(points_per_axis=args.grid, refine_rounds=args.rounds)
    try:
        res = rate(inst, x, y, opts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"command": "rate", "rate": res.to_dict(),
              "manifest": _manifest(args, argv, inst, {"x": str(x), "y": str(y)}, caps=opts.to_dict())}
    _emit(certfile.dump_yaml(report), args.out)
    return EXIT_OK


def cmd_replay(args, argv) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        replay_argv = list(data["manifest"]["argv"])
    except (OSError, yaml.YAMLError, KeyError, TypeError) as exc:
        raise UsageError(f"no replayable manifest in {args.file}: {exc}") from None
    if args.out:
        replay_argv += ["--out", args.out]
    return main(replay_argv)


COMMANDS = {"check": cmd_check, "certify": cmd_certify, "verify": cmd_verify,
            "rate": cmd_rate, "replay": cmd_replay}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # a handler of our own, so -v works even when the root logger is already configured
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
