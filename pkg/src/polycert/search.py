"""Certificate searchers: Pólya powers, asymptotic brute force, ideal-constrained LP.

Each searcher either returns a :class:`SearchResult` whose certificate has
already passed its verifier, or raises :class:`SearchExhausted`.  Exhaustion
means the caps ran out; it is never evidence that no certificate exists.
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .certificates import (
    Asymptotic,
    BoundContext,
    Closure,
    Ideal,
    UnivariateCoeffPoly,
    verify_asymptotic,
    verify_closure,
    verify_ideal,
)
from .lp import FeasibilityProblem, solve_feasibility
from .poly import Polynomial, _format_monomial, as_fraction, lcm_denominator, pack, pack_base, unpack
from .semiring import NATURALS, SemiringInstance, require_member, universal_element

log = logging.getLogger(__name__)

DEFAULT_K_MAX = 60
DEFAULT_N_MAX = 12
DEFAULT_J_MAX = 8
DEFAULT_C_MAX = 4
_PACK_LIMIT = 1 << 62


@dataclass
class SearchReport:
    search: str
    caps: dict
    iterations: int = 0
    elapsed: float = 0.0
    last_negative: tuple | None = None  # (monomial text, coefficient)
    note: str = ""

    def to_dict(self) -> dict:
        # elapsed time is left out so that reports are reproducible
        out = {"search": self.search, "caps": self.caps, "iterations": self.iterations}
        if self.last_negative is not None:
            out["last_negative"] = {"monomial": self.last_negative[0], "value": str(self.last_negative[1])}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SearchResult:
    certificate: object
    report: SearchReport


class SearchExhausted(Exception):
    """Caps exhausted without a certificate (inconclusive)."""

    def __init__(self, message: str, report: SearchReport):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class PolyaQuery:
    q: Polynomial
    delta: Fraction = Fraction(0)
    k_max: int = DEFAULT_K_MAX

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.k_max < 0:
            raise ValueError("k_max must be nonnegative")


def _monomial_text(exps) -> str:
    return _format_monomial(exps) or "1"


def polya_search(query: PolyaQuery) -> SearchResult:
    """Least ``k <= k_max`` with ``u^k (q + delta u^deg q)`` coefficientwise >= 0.

    ``u = 1 + sum X_i``.  The certificate slot of the result holds ``k``.
    """
    q, delta, k_max = query.q, query.delta, query.k_max
    if q.is_zero():
        raise ValueError("polya_search needs a nonzero q")
    if q.is_laurent():
        raise ValueError("polya_search does not handle Laurent polynomials")
    d = q.nvars
    t0 = time.perf_counter()
    u = universal_element(SemiringInstance(d, prime=False))
    deg = q.degree
    target = q + delta * u ** deg if delta else q
    report = SearchReport("polya", {"k_max": k_max, "delta": str(delta)})
    if target.is_zero():
        report.elapsed = time.perf_counter() - t0
        return SearchResult(0, report)

    den = lcm_denominator(target.terms.values())
    base = pack_base(deg + k_max)
    if base ** d < _PACK_LIMIT:
        exps = list(target.terms)
        keys = [pack(e, base) for e in exps]
        coefs = [int(c * den) for c in target.terms.values()]
        ukeys = [pack(e, base) for e in u.terms]
        ucoefs = [1] * len(ukeys)
        for k in range(k_max + 1):
            report.iterations = k + 1
            if kernels.first_negative(coefs) < 0:
                report.elapsed = time.perf_counter() - t0
                return SearchResult(k, report)
            if k < k_max:
                keys, coefs = kernels.mul_packed(keys, coefs, ukeys, ucoefs)
        worst = min(range(len(coefs)), key=lambda i: (coefs[i], _glex_sort(unpack(int(keys[i]), base, d))))
        report.last_negative = (_monomial_text(unpack(int(keys[worst]), base, d)), Fraction(coefs[worst], den))
    else:
        cur = target
        for k in range(k_max + 1):
            report.iterations = k + 1
            if cur.is_nonneg():
                report.elapsed = time.perf_counter() - t0
                return SearchResult(k, report)
            if k < k_max:
                cur = cur * u
        exps, c = min(cur.items(), key=lambda kv: kv[1])
        report.last_negative = (_monomial_text(exps), c)
    report.elapsed = time.perf_counter() - t0
    report.note = "k_max exhausted"
    raise SearchExhausted(f"no Pólya exponent k <= {k_max}", report)


def _glex_sort(exps):
    return (sum(exps), tuple(-e for e in exps))


def _require_pair(inst, x, y):
    require_member(inst, x, "x")
    require_member(inst, y, "y")
    if x.is_zero() or y.is_zero():
        raise ValueError("x and y must be nonzero")


def closure_from_polya(inst: SemiringInstance, x: Polynomial, y: Polynomial, ctx: BoundContext,
                       k_max: int = DEFAULT_K_MAX, delta=None) -> SearchResult:
    """Closure certificate ``{p = M delta X^D, z = u^k, m = M}`` from a Pólya exponent.

    ``D = deg(x - y)`` and ``delta`` defaults to ``eps / max(1, r^D)`` so
    that ``p(r) <= eps m``.  ``M`` clears the denominator of ``delta`` in
    natural-number instances and is 1 otherwise.
    """
    _require_pair(inst, x, y)
    if inst.laurent:
        raise ValueError("the Pólya path needs a non-Laurent instance")
    q = x - y
    if q.is_nonneg():
        cert = Closure(UnivariateCoeffPoly(), Polynomial.one(inst.d), 1)
        report = SearchReport("closure-polya", {"k_max": k_max, "delta": "0"}, note="x >= y coefficientwise")
        return SearchResult(cert, report)
    deg = q.degree
    if delta is None:
        delta = ctx.eps / max(Fraction(1), ctx.r ** deg)
    else:
        delta = as_fraction(delta)
        if delta <= 0 or delta * ctx.r ** deg > ctx.eps:
            raise ValueError(f"delta = {delta} must be positive with delta * r^{deg} <= eps")
    try:
        res = polya_search(PolyaQuery(q, delta, k_max))
    except SearchExhausted as exc:
        exc.report.search = "closure-polya"
        raise
    scale = delta.denominator if inst.domain == NATURALS else 1
    u = universal_element(inst)
    cert = Closure(UnivariateCoeffPoly.monomial(scale * delta, deg), u ** res.certificate, scale)
    report = res.report
    report.search = "closure-polya"
    report.caps["k"] = res.certificate
    if not verify_closure(inst, x, y, cert, ctx):
        raise AssertionError("Pólya closure certificate failed verification")
    return SearchResult(cert, report)


def asymptotic_search(inst: SemiringInstance, x: Polynomial, y: Polynomial, ctx: BoundContext,
                      n_max: int = DEFAULT_N_MAX, j_max: int = DEFAULT_J_MAX,
                      c_max: int = DEFAULT_C_MAX) -> SearchResult:
    """First ``{p = c X^j, n, m}`` accepted by :func:`verify_asymptotic`.

    Enumerates ``n`` ascending, then ``j``, then ``c``, then ``m``.  For
    fixed ``(n, j, c)`` the inequality only gets harder as ``m`` grows, so
    the least ``m`` allowed by the scalar bound is the only one tried.
    """
    _require_pair(inst, x, y)
    t0 = time.perf_counter()
    caps = {"n_max": n_max, "j_max": j_max, "c_max": c_max}
    report = SearchReport("asymptotic", caps)
    u = universal_element(inst)
    if x == y:
        cert = Asymptotic(UnivariateCoeffPoly.constant(1), 1, 1)
        if verify_asymptotic(inst, x, y, cert, ctx):
            report.iterations = 1
            return SearchResult(cert, report)
    upow = [Polynomial.one(inst.d)]
    for _ in range(j_max):
        upow.append(upow[-1] * u)
    worst = None
    xn, yn = Polynomial.one(inst.d), Polynomial.one(inst.d)
    for n in range(1, n_max + 1):
        xn, yn = xn * x, yn * y
        budget = (1 + ctx.eps) ** n
        for j in range(j_max + 1):
            base = upow[j] * xn
            for c in range(1, c_max + 1):
                report.iterations += 1
                pr = c * ctx.r ** j
                m = max(1, math.ceil(pr / budget))
                diff = c * base - m * yn
                if diff.is_nonneg():
                    cert = Asymptotic(UnivariateCoeffPoly.monomial(c, j), n, m)
                    if not verify_asymptotic(inst, x, y, cert, ctx):
                        raise AssertionError("asymptotic candidate failed verification")
                    report.elapsed = time.perf_counter() - t0
                    return SearchResult(cert, report)
                exps, val = min(diff.items(), key=lambda kv: kv[1])
                worst = (_monomial_text(exps), val)
    report.last_negative = worst
    report.elapsed = time.perf_counter() - t0
    report.note = "caps exhausted"
    raise SearchExhausted("no asymptotic certificate within caps", report)


def monomials_upto(d: int, degree: int):
    """Exponent tuples of total degree <= degree, graded order."""
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(d), total):
            exps = [0] * d
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def default_delta_schedule(ctx: BoundContext, degree: int) -> list:
    first = ctx.eps / (1 + ctx.r) ** degree
    return [first, first / 2, first / 4]


def build_ideal_problem(f: Polynomial, gens: Sequence[Polynomial], delta: Fraction,
                        deg_h: int, deg_mult: int):
    """Linear system for ``h (f + delta u^D) + sum q_i g_i >= 0`` with ``sum h = 1``."""
    d = f.nvars
    D = f.degree
    u = universal_element(SemiringInstance(d, prime=False))
    shifted = f + delta * u ** D
    prob = FeasibilityProblem()
    hvars = {}
    for beta in monomials_upto(d, deg_h):
        hvars[beta] = prob.add_variable("h" + ",".join(map(str, beta)), nonneg=True)
    mvars = []
    for i in range(len(gens)):
        mv = {}
        for gamma in monomials_upto(d, deg_mult):
            mv[gamma] = prob.add_variable(f"q{i}:" + ",".join(map(str, gamma)))
        mvars.append(mv)
    rows = {}
    for beta, hv in hvars.items():
        for e, c in shifted.terms.items():
            alpha = tuple(a + b for a, b in zip(beta, e))
            row = rows.setdefault(alpha, {})
            row[hv] = row.get(hv, 0) + c
    for g, mv in zip(gens, mvars):
        for gamma, qv in mv.items():
            for e, c in g.terms.items():
                alpha = tuple(a + b for a, b in zip(gamma, e))
                row = rows.setdefault(alpha, {})
                row[qv] = row.get(qv, 0) + c
    for alpha in sorted(rows, key=_glex_sort):
        prob.add_constraint(rows[alpha], ">=", 0)
    prob.add_constraint({v: 1 for v in hvars.values()}, "==", 1)
    return prob, hvars, mvars


def ideal_search(f: Polynomial, gens: Sequence[Polynomial], ctx: BoundContext,
                 deg_h: int | None = None, deg_mult: int | None = None,
                 delta_schedule: Sequence | None = None) -> SearchResult:
    """Ideal-constrained certificate by exact LP over bounded-degree ``h`` and multipliers.

    ``p`` is fixed to ``delta X^D`` with ``D = deg f`` so the problem stays
    linear.  Degree levels are tried from 0 up to the caps, and the delta
    schedule inside each level.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("at least one ideal generator is required")
    d = f.nvars
    for g in gens:
        if g.nvars != d:
            raise ValueError("generators must live in the variables of f")
    if f.is_laurent() or any(g.is_laurent() for g in gens):
        raise ValueError("ideal search does not handle Laurent polynomials")
    t0 = time.perf_counter()
    zero = Polynomial.zero(d)
    if f.is_nonneg():
        cert = Ideal(Polynomial.one(d), UnivariateCoeffPoly(), [zero] * len(gens), gens)
        report = SearchReport("ideal", {"deg_h": 0, "deg_mult": 0}, iterations=0, note="f has nonnegative coefficients")
        return SearchResult(cert, report)
    D = f.degree
    if deg_h is None:
        deg_h = 2 * D
    if deg_mult is None:
        deg_mult = 2 * D
    if delta_schedule is None:
        delta_schedule = default_delta_schedule(ctx, D)
    delta_schedule = [as_fraction(v) for v in delta_schedule]
    caps = {"deg_h": deg_h, "deg_mult": deg_mult, "delta_schedule": [str(v) for v in delta_schedule]}
    report = SearchReport("ideal", caps)
    seen = set()
    for level in range(max(deg_h, deg_mult) + 1):
        dh, dm = min(level, deg_h), min(level, deg_mult)
        if (dh, dm) in seen:
            continue
        seen.add((dh, dm))
        for delta in delta_schedule:
            if delta <= 0:
                raise ValueError("delta values must be positive")
            p = UnivariateCoeffPoly.monomial(delta, D)
            if p.at(ctx.r) > ctx.eps:
                continue
            report.iterations += 1
            prob, hvars, mvars = build_ideal_problem(f, gens, delta, dh, dm)
            sol = solve_feasibility(prob)
            log.debug("ideal LP deg_h=%d deg_mult=%d delta=%s: %s", dh, dm, delta,
                      "feasible" if sol else "infeasible")
            if sol is None:
                continue
            h = Polynomial({b: sol[v] for b, v in hvars.items()}, d)
            mults = [Polynomial({g: sol[v] for g, v in mv.items()}, d) for mv in mvars]
            cert = Ideal(h, p, mults, gens)
            if not verify_ideal(f, cert, ctx):
                raise AssertionError("LP solution failed ideal verification")
            report.caps["found_at"] = {"deg_h": dh, "deg_mult": dm, "delta": str(delta)}
            report.elapsed = time.perf_counter() - t0
            return SearchResult(cert, report)
    report.elapsed = time.perf_counter() - t0
    report.note = "LP infeasible at every cap (inconclusive)"
    raise SearchExhausted("no ideal certificate within caps", report)
