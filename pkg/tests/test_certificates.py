from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import polynomials
from polycert.certificates import (
    Asymptotic,
    BoundContext,
    Catalytic,
    Closure,
    Ideal,
    InvalidCertificate,
    RateWitness,
    Strassen,
    UnivariateCoeffPoly as P,
    strassen_to_asymptotic,
    verify,
    verify_asymptotic,
    verify_catalytic,
    verify_closure,
    verify_ideal,
    verify_rate_witness,
    verify_strassen,
)
from polycert.poly import Polynomial, parse
from polycert.search import asymptotic_search
from polycert.semiring import SemiringInstance

Q1 = SemiringInstance(1)
Q2 = SemiringInstance(2)
X = parse("2 + X1 + 2*X1^2")
Y = parse("1 + 2*X1 + X1^2")


def ctx(r, eps):
    return BoundContext(Fraction(r), Fraction(eps))


def test_univariate_payload():
    p = P((1, 0, 2, 0, 0))
    assert p.coeffs == (1, 0, 2)
    assert p.at(3) == 19
    assert p.of(parse("1 + X1")) == parse("3 + 4*X1 + 2*X1^2")
    assert P().at(5) == 0 and P().is_zero()
    with pytest.raises(InvalidCertificate):
        P((1, -1))


def test_context_validation():
    with pytest.raises(ValueError):
        BoundContext(Fraction(1), Fraction(0))
    with pytest.raises(ValueError):
        BoundContext(Fraction(-1), Fraction(1))


# -- closure ---------------------------------------------------------------

def test_closure_examples():
    c = ctx(10, Fraction(1, 10))
    assert verify_closure(Q1, X, Y, Closure(P(), parse("1 + X1"), 1), c)
    assert not verify_closure(Q1, X, Y, Closure(P(), Polynomial.one(1), 1), c)
    # p(0) = 1 > 1/100
    assert not verify_closure(Q1, X, Y, Closure(P((1,)), Polynomial.one(1), 1), ctx(0, Fraction(1, 100)))


def test_closure_invalid_catalyst():
    c = ctx(1, 1)
    with pytest.raises(InvalidCertificate):
        verify_closure(Q1, X, Y, Closure(P(), Polynomial.zero(1), 1), c)
    with pytest.raises(InvalidCertificate):
        verify_closure(Q1, X, Y, Closure(P(), parse("X1"), 1), c)
    with pytest.raises(InvalidCertificate):
        verify_closure(Q1, X, Y, Closure(P(), parse("1 + X1"), 0), c)
    with pytest.raises(InvalidCertificate):
        verify_closure(SemiringInstance(1, "N"), X, Y, Closure(P((Fraction(1, 2),)), Polynomial.one(1), 1), c)


def test_nonmember_inputs_rejected_as_errors():
    with pytest.raises(ValueError):
        verify_closure(Q1, parse("X1"), Y, Closure(P(), Polynomial.one(1), 1), ctx(1, 1))


# -- catalytic -------------------------------------------------------------

def test_catalytic_examples():
    assert verify_catalytic(Q1, X, X, Catalytic(P((1,)), Polynomial.one(1), 1), ctx(3, Fraction(1, 7)))
    assert not verify_catalytic(Q1, parse("1"), parse("2"), Catalytic(P((1,)), Polynomial.one(1), 1), ctx(1, 1))
    # p = X so p(u) = u; (1+X)(2+X+2X^2) = 2+3X+3X^2+2X^3 >= y
    assert verify_catalytic(Q1, X, Y, Catalytic(P((0, 1)), Polynomial.one(1), 1), ctx(0, 1))
    assert not verify_catalytic(Q1, X, Y, Catalytic(P((0, 1)), Polynomial.one(1), 1), ctx(3, 1))


# -- asymptotic ------------------------------------------------------------

def test_asymptotic_examples():
    assert verify_asymptotic(Q1, parse("2"), parse("1"), Asymptotic(P((1,)), 1, 2), ctx(1, 1))
    assert not verify_asymptotic(Q1, parse("1"), parse("2"), Asymptotic(P((1,)), 3, 1), ctx(1, 1))
    c = ctx(10, Fraction(1, 10))
    cert = asymptotic_search(Q1, X, Y, c).certificate
    # independent recheck: expand p(u) x^n - m y^n term by term
    lhs = cert.p.of(parse("1 + X1")) * X ** cert.n - cert.m * Y ** cert.n
    assert all(v >= 0 for v in lhs.terms.values())
    assert cert.p.at(10) <= Fraction(11, 10) ** cert.n * cert.m
    assert verify_asymptotic(Q1, X, Y, cert, c)


def test_asymptotic_bound_is_exact():
    # p(r) = (1+eps)^n m exactly is allowed, a hair above is not
    c = ctx(1, Fraction(1, 3))
    x = parse("5")
    assert verify_asymptotic(Q1, x, x, Asymptotic(P((Fraction(16, 9),)), 2, 1), c)
    assert not verify_asymptotic(Q1, x, x, Asymptotic(P((Fraction(16, 9) + Fraction(1, 10 ** 30),)), 2, 1), c)


# -- strassen --------------------------------------------------------------

def test_strassen_examples():
    assert verify_strassen(Q1, parse("3"), parse("2"), Strassen(1, 1), 1)
    assert not verify_strassen(Q1, parse("1"), parse("2"), Strassen(0, 5), 1)
    for eps in (Fraction(1, 1000), 1, 50):
        assert verify_strassen(SemiringInstance(1, prime=False), parse("1 + X1"), parse("X1"), Strassen(0, 1), eps)
    assert not verify_strassen(Q1, parse("3"), parse("2"), Strassen(1, 1), Fraction(1, 2))


# -- ideal -----------------------------------------------------------------

GEN = parse("X1*X2 - 1")


def test_ideal_examples():
    c = ctx(1, 1)
    assert verify_ideal(parse("X1 + X2 + 1"), Ideal(Polynomial.one(2), P(), [Polynomial.zero(2)], [GEN]), c)
    assert not verify_ideal(parse("-1", 2), Ideal(Polynomial.one(2), P(), [Polynomial.zero(2)], [GEN]), c)
    # hand-made AM-GM certificate with p(u) = u/2:
    # (1+X1)/2 * 3/2 (X1 + X2 - 1) - 3/4 (X1 X2 - 1) = 3/4 (X1^2 + X2)
    h = parse("1/2 + 1/2*X1", 2)
    cert = Ideal(h, P((0, Fraction(1, 2))), [parse("-3/4", 2)], [GEN])
    total = h * (parse("X1 + X2 - 2") + parse("1 + X1 + X2") * Fraction(1, 2)) - Fraction(3, 4) * GEN
    assert total == parse("3/4*X2 + 3/4*X1^2")
    assert verify_ideal(parse("X1 + X2 - 2"), cert, c)


def test_ideal_invalid():
    c = ctx(1, 1)
    f = parse("X1 + X2 - 2")
    with pytest.raises(InvalidCertificate):
        verify_ideal(f, Ideal(Polynomial.zero(2), P(), [Polynomial.zero(2)], [GEN]), c)
    with pytest.raises(InvalidCertificate):
        verify_ideal(f, Ideal(parse("-1", 2), P(), [Polynomial.zero(2)], [GEN]), c)
    with pytest.raises(InvalidCertificate):
        verify_ideal(f, Ideal(Polynomial.one(2), P(), [], [GEN]), c)
    with pytest.raises(InvalidCertificate):
        verify_ideal(f, Ideal(Polynomial.one(2), P(), [], []), c)


# -- rate ------------------------------------------------------------------

def test_rate_witness_examples():
    y = parse("1 + X1")
    assert verify_rate_witness(Q1, y, y, 1, RateWitness(1, 1, 1, P((1,))), ctx(1, 1))
    assert verify_rate_witness(Q1, y ** 2, y, 2, RateWitness(2, 1, 1, P((1,))), ctx(1, 1))
    assert not verify_rate_witness(Q1, y ** 2, y, 3, RateWitness(3, 1, 1, P((1,))), ctx(1, Fraction(1, 2)))
    # m/n too small for lambda
    assert not verify_rate_witness(Q1, y ** 2, y, 3, RateWitness(2, 1, 1, P((1,))), ctx(1, Fraction(1, 2)))


def test_rate_witness_precondition():
    with pytest.raises(ValueError):
        verify_rate_witness(SemiringInstance(1, prime=False), parse("X1"), parse("1 + X1"), 1,
                            RateWitness(1, 1, 1, P((1,))), ctx(1, 1))


# -- dispatch and transport ------------------------------------------------

def test_dispatch():
    c = ctx(10, Fraction(1, 10))
    assert verify(Q1, X, Y, Closure(P(), parse("1 + X1"), 1), c)
    assert verify(Q1, X, Y, Strassen(0, 1), ctx(1, 1)) is False
    with pytest.raises(ValueError):
        verify(Q1, X, Y, RateWitness(1, 1, 1, P((1,))), c)
    with pytest.raises(InvalidCertificate):
        verify(Q1, X, Y, object(), c)


def test_verifiers_are_pure():
    c = ctx(10, Fraction(1, 10))
    cert = Closure(P(), parse("1 + X1"), 1)
    assert [verify_closure(Q1, X, Y, cert, c) for _ in range(3)] == [True] * 3
    assert X == parse("2 + X1 + 2*X1^2")


member = polynomials(nvars=1, nonneg=True, positive_constant=True, max_exp=3)


@given(member, member, st.integers(0, 6), st.integers(1, 6),
       st.sampled_from([Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(3)]))
def test_strassen_transports_to_asymptotic(x, y, k, n, eps):
    cert = Strassen(k, n)
    if not verify_strassen(Q1, x, y, cert, eps):
        return
    if 2 ** k <= (1 + eps) ** n:
        for r in (0, 1, 7):
            assert verify_asymptotic(Q1, x, y, strassen_to_asymptotic(cert), BoundContext(Fraction(r), eps))


@given(member, st.integers(0, 4), st.integers(1, 5))
def test_strassen_transport_accepts_scaled(x, k, n):
    # 2^k (2^k x)^n >= ... build accepted Strassen pairs on purpose
    y = x
    eps = Fraction(k, n) if k else Fraction(1, n)
    assert verify_strassen(Q1, x, y, Strassen(k, n), eps)
    if 2 ** k <= (1 + eps) ** n:
        assert verify_asymptotic(Q1, x, y, strassen_to_asymptotic(Strassen(k, n)), BoundContext(Fraction(1), eps))
