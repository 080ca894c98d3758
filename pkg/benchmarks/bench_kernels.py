"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--points N]

Times a Pólya-style repeated product (packed sparse multiplication) and
float / log-domain evaluation on random points.  Backends are taken from
``polycert.kernels.backends()``, so a build without the extension only
reports the Python numbers.
"""
import argparse
import time

import numpy as np

from polycert import kernels
from polycert.poly import pack, pack_base, parse
from polycert.semiring import SemiringInstance, universal_element


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def polya_workload(d=3, steps=12):
    q = parse("X1^2 - X1*X2 + X2^2 + 1/4*X3^2 + 1", d)
    u = universal_element(SemiringInstance(d, prime=False))
    base = pack_base(q.degree + steps)
    keys = [pack(e, base) for e in q.terms]
    coefs = [int(c * 4) for c in q.terms.values()]
    ukeys = [pack(e, base) for e in u.terms]

    def run(backend):
        k, c = keys, coefs
        for _ in range(steps):
            k, c = backend.mul_packed(k, c, ukeys, [1] * len(ukeys))
            backend.first_negative(c)
        return len(k)

    return run


def eval_workload(npoints):
    rng = np.random.default_rng(0)
    exps = rng.integers(0, 6, size=(40, 3))
    coefs = rng.uniform(0.1, 5.0, size=40)
    pts = rng.uniform(0.0, 4.0, size=(npoints, 3))
    logpts = np.log(pts)
    fexps = exps.astype(float)
    logcoefs = np.log(coefs)
    return (lambda b: b.eval_float(exps, coefs, pts)), (lambda b: b.log_eval(fexps, logcoefs, logpts))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=100_000)
    args = ap.parse_args()
    backends = kernels.backends()
    polya = polya_workload()
    ev, lg = eval_workload(args.points)
    rows = [("mul_packed x12 (Pólya, d=3)", polya), (f"eval_float ({args.points} pts)", ev),
            (f"log_eval ({args.points} pts)", lg)]
    names = sorted(backends)
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'workload':32s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in rows:
        times = {n: best_of(lambda: fn(backends[n]), args.repeat) for n in names}
        line = f"{label:32s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            line += f"{times['python'] / times['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
