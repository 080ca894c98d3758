import random
from fractions import Fraction

import pytest

from polycert.certificates import BoundContext, Closure, verify_asymptotic, verify_closure, verify_ideal
from polycert.lp import solve_feasibility
from polycert.poly import Polynomial, parse
from polycert.search import (
    PolyaQuery,
    SearchExhausted,
    asymptotic_search,
    build_ideal_problem,
    closure_from_polya,
    ideal_search,
    polya_search,
)
from polycert.semiring import SemiringInstance, universal_element

Q1 = SemiringInstance(1)
X = parse("2 + X1 + 2*X1^2")
Y = parse("1 + 2*X1 + X1^2")

# minimal exponents from an independent sympy brute force (expand, test, increment k)
FROZEN_POLYA = [
    ("X1^2 - X1 + 1", 1, 0, 1),
    ("(X1 - X2)^2", 2, Fraction(1, 2), 1),
    ("(X1 - X2)^2", 2, Fraction(1, 10), 9),
]


def ctx(r, eps):
    return BoundContext(Fraction(r), Fraction(eps))


def coeffwise_ok(q, delta, k):
    u = universal_element(SemiringInstance(q.nvars, prime=False))
    return (u ** k * (q + delta * u ** q.degree)).is_nonneg()


@pytest.mark.parametrize("text,d,delta,k", FROZEN_POLYA)
def test_polya_frozen_values(text, d, delta, k):
    q = parse(text, d)
    assert polya_search(PolyaQuery(q, delta, 60)).certificate == k
    assert coeffwise_ok(q, delta, k)
    if k:
        assert not coeffwise_ok(q, delta, k - 1)


def test_polya_against_sympy():
    sympy = pytest.importorskip("sympy")
    x1, x2 = sympy.symbols("x1 x2")
    u = 1 + x1 + x2
    cases = [((x1 - x2) ** 2, 2, Fraction(1, 10)), (1 + x1 ** 2 - x1 * x2 + x2 ** 2, 2, 0),
             ((x1 - 2 * x2) ** 2, 2, Fraction(1, 4))]
    for expr, d, delta in cases:
        target = sympy.expand(expr + sympy.Rational(delta.numerator, delta.denominator) * u ** sympy.Poly(expr, x1, x2).total_degree())
        k = 0
        while k < 60 and any(c < 0 for c in sympy.Poly(sympy.expand(u ** k * target), x1, x2).coeffs()):
            k += 1
        q = parse(str(expr).replace("**", "^").replace("x1", "X1").replace("x2", "X2"), d)
        assert polya_search(PolyaQuery(q, delta, 60)).certificate == k


def test_polya_trivial_and_exhaustion():
    assert polya_search(PolyaQuery(parse("1 + X1^2"), Fraction(3), 5)).certificate == 0
    with pytest.raises(SearchExhausted) as info:
        polya_search(PolyaQuery(parse("(X1 - X2)^2", 2), 0, 25))
    rep = info.value.report
    assert rep.iterations == 26 and rep.last_negative[1] < 0
    assert "last_negative" in rep.to_dict() and "elapsed" not in rep.to_dict()


def test_polya_rejects_bad_queries():
    with pytest.raises(ValueError):
        polya_search(PolyaQuery(Polynomial.zero(1)))
    with pytest.raises(ValueError):
        polya_search(PolyaQuery(parse("X1^-1 - 1")))
    with pytest.raises(ValueError):
        PolyaQuery(parse("X1"), Fraction(-1))


def test_polya_minimality_random():
    rng = random.Random(7)
    for _ in range(15):
        d = rng.randint(1, 2)
        terms = {tuple(rng.randint(0, 3) for _ in range(d)): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                 for _ in range(4)}
        q = Polynomial(terms, d)
        if q.is_zero():
            continue
        delta = Fraction(rng.randint(1, 4), 2)
        try:
            k = polya_search(PolyaQuery(q, delta, 20)).certificate
        except SearchExhausted:
            continue
        assert coeffwise_ok(q, delta, k)
        if k:
            assert not coeffwise_ok(q, delta, k - 1)


def test_polya_large_degree_uses_fallback():
    # packed keys overflow here, so the dict path is exercised
    q = parse("X1^2 - X1 + 1 + X1*X2 + X1*X3 + X1*X4 + X1*X5 + X1*X6", 6)
    res = polya_search(PolyaQuery(q, 0, 700))
    assert res.certificate == 1


# -- closure ---------------------------------------------------------------

def test_closure_from_polya_example():
    c = ctx(10, Fraction(1, 10))
    res = closure_from_polya(Q1, X, Y, c)
    cert = res.certificate
    assert cert.z in [parse("1 + X1") ** k for k in range(4)]
    assert cert.p.at(10) <= c.eps * cert.m
    assert verify_closure(Q1, X, Y, cert, c)


def test_closure_trivial_and_failure():
    res = closure_from_polya(Q1, X, X, ctx(1, 1))
    assert res.certificate == Closure(res.certificate.p, Polynomial.one(1), 1) and res.certificate.p.is_zero()
    with pytest.raises(SearchExhausted):
        closure_from_polya(Q1, parse("1 + 2*X1"), parse("2 + X1"), ctx(1, Fraction(1, 10)), k_max=15)


def test_closure_naturals_clears_denominators():
    inst = SemiringInstance(1, "N")
    c = ctx(3, Fraction(1, 10))
    cert = closure_from_polya(inst, X, Y, c).certificate
    assert cert.p.has_integer_coefficients() and cert.m > 1
    assert verify_closure(inst, X, Y, cert, c)


def test_closure_explicit_delta_checked():
    with pytest.raises(ValueError):
        closure_from_polya(Q1, X, Y, ctx(10, Fraction(1, 10)), delta=1)


# -- asymptotic ------------------------------------------------------------

def test_asymptotic_identity():
    cert = asymptotic_search(Q1, X, X, ctx(5, Fraction(1, 10))).certificate
    assert (cert.p.coeffs, cert.n, cert.m) == ((1,), 1, 1)


def test_asymptotic_example_and_order():
    c = ctx(10, Fraction(1, 10))
    res = asymptotic_search(Q1, X, Y, c)
    assert verify_asymptotic(Q1, X, Y, res.certificate, c)
    assert res.certificate.n == 2
    # nothing earlier in the enumeration works: n = 1 fails for every (j, c)
    with pytest.raises(SearchExhausted):
        asymptotic_search(Q1, X, Y, c, n_max=1)


def test_asymptotic_constants_fail():
    for caps in [(3, 2, 2), (6, 4, 4)]:
        with pytest.raises(SearchExhausted):
            asymptotic_search(Q1, parse("1"), parse("2"), ctx(1, Fraction(1, 2)), *caps)


# -- ideal -----------------------------------------------------------------

GEN = parse("X1*X2 - 1")


def test_ideal_trivial():
    res = ideal_search(parse("X1 + X2 + 1"), [GEN], ctx(1, 1))
    assert res.certificate.h == Polynomial.one(2) and res.certificate.p.is_zero()
    assert res.certificate.multipliers == (Polynomial.zero(2),)


def test_ideal_am_gm():
    f = parse("X1 + X2 - 2")
    c = ctx(1, 1)
    res = ideal_search(f, [GEN], c, deg_h=6, deg_mult=6)
    assert verify_ideal(f, res.certificate, c)
    assert sum(res.certificate.h.terms.values()) == 1


def test_ideal_infeasible_is_inconclusive():
    # with eps = 1 the shift p = 1 makes f + p = 0, which is a valid certificate
    assert ideal_search(parse("-1", 2), [GEN], ctx(1, 1)).certificate.p.at(1) == 1
    with pytest.raises(SearchExhausted) as info:
        ideal_search(parse("-1", 2), [GEN], ctx(1, Fraction(1, 2)), deg_h=2, deg_mult=2)
    assert "inconclusive" in info.value.report.note


def test_ideal_problem_solution_checks_by_substitution():
    f = parse("X1 + X2 - 2")
    prob, hvars, mvars = build_ideal_problem(f, [GEN], Fraction(1, 2), 1, 1)
    sol = solve_feasibility(prob)
    assert sol is not None and prob.check(sol)
    h = Polynomial({b: sol[v] for b, v in hvars.items()}, 2)
    q = Polynomial({g: sol[v] for g, v in mvars[0].items()}, 2)
    total = h * (f + Fraction(1, 2) * parse("1 + X1 + X2") ** 1) + q * GEN
    assert total.is_nonneg()


def test_ideal_search_is_deterministic():
    f = parse("X1 + X2 - 2")
    a = ideal_search(f, [GEN], ctx(1, 1)).certificate
    b = ideal_search(f, [GEN], ctx(1, 1)).certificate
    assert a == b


# -- round trip on generated pairs ----------------------------------------

def test_searchers_round_trip_random_pairs():
    rng = random.Random(11)
    found = 0
    for _ in range(20):
        y = Polynomial({(i,): rng.randint(1, 4) for i in range(3)}, 1)
        x = y + Polynomial({(rng.randint(0, 3),): rng.randint(-1, 3)}, 1)
        if not x.constant_term > 0 or not x.is_nonneg():
            continue
        c = ctx(rng.choice([1, 2, 5]), Fraction(1, rng.choice([2, 5, 10])))
        for search in (closure_from_polya, asymptotic_search):
            try:
                cert = search(Q1, x, y, c).certificate
            except SearchExhausted:
                continue
            found += 1
            if isinstance(cert, Closure):
                assert verify_closure(Q1, x, y, cert, c)
            else:
                assert verify_asymptotic(Q1, x, y, cert, c)
    assert found >= 10
