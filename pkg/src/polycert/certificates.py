"""Certificate types for ``x >= y`` in the spectrum order, with exact verifiers.

Every verifier returns True (accept) or False (reject).  Structurally broken
certificates, such as a zero catalyst or a non-integer power, raise
:class:`InvalidCertificate` instead; a bad ``x`` or ``y`` raises ValueError.
All scalar bounds are compared in exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar

from .poly import Polynomial, as_fraction
from .semiring import NATURALS, SemiringInstance, is_member, require_member, universal_element


class InvalidCertificate(ValueError):
    """The certificate is malformed (as opposed to merely not holding)."""


@dataclass(frozen=True)
class UnivariateCoeffPoly:
    """Univariate polynomial with nonnegative rational coefficients, lowest degree first."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if any(c < 0 for c in cs):
            raise InvalidCertificate(f"polynomial p has a negative coefficient: {cs}")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, coef, power: int) -> "UnivariateCoeffPoly":
        return cls((0,) * power + (coef,))

    @classmethod
    def constant(cls, c) -> "UnivariateCoeffPoly":
        return cls((c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def at(self, r) -> Fraction:
        """p(r) for a rational r."""
        r = as_fraction(r)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * r + c
        return acc

    def of(self, u: Polynomial) -> Polynomial:
        """p(u) for a polynomial u (Horner)."""
        acc = Polynomial.zero(u.nvars)
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "" if j == 0 else ("X" if j == 1 else f"X^{j}")
                parts.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)


@dataclass(frozen=True)
class BoundContext:
    """The quantified pair (r, eps): a bound on u and a tolerance."""

    r: Fraction
    eps: Fraction

    def __post_init__(self):
        r, eps = as_fraction(self.r), as_fraction(self.eps)
        if r < 0:
            raise ValueError("r must be nonnegative")
        if eps <= 0:
            raise ValueError("eps must be positive")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "eps", eps)


@dataclass(frozen=True)
class Closure:
    """``m z x + p(u) z >= m z y`` with ``p(r) <= eps m``."""

    p: UnivariateCoeffPoly
    z: Polynomial
    m: int
    form: ClassVar[str] = "closure"


@dataclass(frozen=True)
class Catalytic:
    """``p(u) z x >= m z y`` with ``p(r) <= (1 + eps) m``."""

    p: UnivariateCoeffPoly
    z: Polynomial
    m: int
    form: ClassVar[str] = "catalytic"


@dataclass(frozen=True)
class Asymptotic:
    """``p(u) x^n >= m y^n`` with ``p(r) <= (1 + eps)^n m``."""

    p: UnivariateCoeffPoly
    n: int
    m: int
    form: ClassVar[str] = "asymptotic"


@dataclass(frozen=True)
class Strassen:
    """``2^k x^n >= y^n`` with ``k <= eps n``."""

    k: int
    n: int
    form: ClassVar[str] = "strassen"


@dataclass(frozen=True)
class Ideal:
    """``h (f + p(u)) + sum_i multipliers[i] * ideal_gens[i]`` has nonnegative coefficients."""

    h: Polynomial
    p: UnivariateCoeffPoly
    multipliers: tuple = field(default=())
    ideal_gens: tuple = field(default=())
    form: ClassVar[str] = "ideal"

    def __post_init__(self):
        object.__setattr__(self, "multipliers", tuple(self.multipliers))
        object.__setattr__(self, "ideal_gens", tuple(self.ideal_gens))


@dataclass(frozen=True)
class RateWitness:
    """``p(u) x^n >= ell y^m`` with ``m/n >= lambda - eps`` and ``p(r) <= (1 + eps)^n ell``."""

    m: int
    n: int
    ell: int
    p: UnivariateCoeffPoly
    form: ClassVar[str] = "rate"


CERTIFICATE_TYPES = {cls.form: cls for cls in (Closure, Catalytic, Asymptotic, Strassen, Ideal, RateWitness)}


def _positive_int(name, value, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, int) or value < (0 if allow_zero else 1):
        kind = "a natural number" if allow_zero else "a positive integer"
        raise InvalidCertificate(f"{name} must be {kind}, got {value!r}")


def _check_p(inst: SemiringInstance | None, p):
    if not isinstance(p, UnivariateCoeffPoly):
        raise InvalidCertificate("p must be a UnivariateCoeffPoly")
    if inst is not None and inst.domain == NATURALS and not p.has_integer_coefficients():
        raise InvalidCertificate(f"p = {p} must have natural-number coefficients in {inst}")


def _check_catalyst(inst: SemiringInstance, z):
    if not isinstance(z, Polynomial) or z.nvars != inst.d:
        raise InvalidCertificate("catalyst z must be a polynomial in the instance variables")
    if z.is_zero():
        raise InvalidCertificate("catalyst z must be nonzero")
    if not is_member(inst, z):
        raise InvalidCertificate(f"catalyst z = {z} is not a member of {inst}")


def _check_pair(inst, x, y):
    require_member(inst, x, "x")
    require_member(inst, y, "y")
    if x.is_zero() or y.is_zero():
        raise ValueError("x and y must be nonzero")


def verify_closure(inst: SemiringInstance, x: Polynomial, y: Polynomial, c: Closure, ctx: BoundContext) -> bool:
    _check_pair(inst, x, y)
    _check_p(inst, c.p)
    _check_catalyst(inst, c.z)
    _positive_int("m", c.m)
    if c.p.at(ctx.r) > ctx.eps * c.m:
        return False
    u = universal_element(inst)
    # m z x + p(u) z - m z y, factored through z
    return (c.z * (c.m * (x - y) + c.p.of(u))).is_nonneg()


def verify_catalytic(inst: SemiringInstance, x: Polynomial, y: Polynomial, c: Catalytic, ctx: BoundContext) -> bool:
    _check_pair(inst, x, y)
    _check_p(inst, c.p)
    _check_catalyst(inst, c.z)
    _positive_int("m", c.m)
    if c.p.at(ctx.r) > (1 + ctx.eps) * c.m:
        return False
    u = universal_element(inst)
    return (c.z * (c.p.of(u) * x - c.m * y)).is_nonneg()


def verify_asymptotic(inst: SemiringInstance, x: Polynomial, y: Polynomial, c: Asymptotic, ctx: BoundContext) -> bool:
    _check_pair(inst, x, y)
    _check_p(inst, c.p)
    _positive_int("n", c.n)
    _positive_int("m", c.m)
    if c.p.at(ctx.r) > (1 + ctx.eps) ** c.n * c.m:
        return False
    u = universal_element(inst)
    return (c.p.of(u) * x ** c.n - c.m * y ** c.n).is_nonneg()


def verify_strassen(inst: SemiringInstance, x: Polynomial, y: Polynomial, c: Strassen, eps) -> bool:
    _check_pair(inst, x, y)
    _positive_int("k", c.k, allow_zero=True)
    _positive_int("n", c.n)
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if c.k > eps * c.n:
        return False
    return (2 ** c.k * x ** c.n - y ** c.n).is_nonneg()


def verify_ideal(f: Polynomial, c: Ideal, ctx: BoundContext) -> bool:
    d = f.nvars
    if not isinstance(c.h, Polynomial) or c.h.nvars != d:
        raise InvalidCertificate("h must be a polynomial in the variables of f")
    if c.h.is_zero():
        raise InvalidCertificate("h must be nonzero")
    if not c.h.is_nonneg() or c.h.is_laurent():
        raise InvalidCertificate(f"h = {c.h} must have nonnegative coefficients")
    _check_p(None, c.p)
    if not c.ideal_gens:
        raise InvalidCertificate("at least one ideal generator is required")
    if len(c.multipliers) != len(c.ideal_gens):
        raise InvalidCertificate("need exactly one multiplier per ideal generator")
    for g in (*c.multipliers, *c.ideal_gens):
        if not isinstance(g, Polynomial) or g.nvars != d:
            raise InvalidCertificate("multipliers and generators must be polynomials in the variables of f")
    if c.p.at(ctx.r) > ctx.eps:
        return False
    u = universal_element(SemiringInstance(d, prime=False))
    total = c.h * (f + c.p.of(u))
    for g, q in zip(c.ideal_gens, c.multipliers):
        total = total + q * g
    return total.is_nonneg()


def check_rate_precondition(x: Polynomial, y: Polynomial):
    one = Polynomial.one(x.nvars)
    if not (x - one).is_nonneg():
        raise ValueError(f"x = {x} is not >= 1 coefficientwise")
    if not (y - one).is_nonneg():
        raise ValueError(f"y = {y} is not >= 1 coefficientwise")


def verify_rate_witness(inst: SemiringInstance, x: Polynomial, y: Polynomial, lam, c: RateWitness, ctx: BoundContext) -> bool:
    _check_pair(inst, x, y)
    check_rate_precondition(x, y)
    lam = as_fraction(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    _check_p(inst, c.p)
    for name in ("m", "n", "ell"):
        _positive_int(name, getattr(c, name))
    if Fraction(c.m, c.n) < lam - ctx.eps:
        return False
    if c.p.at(ctx.r) > (1 + ctx.eps) ** c.n * c.ell:
        return False
    u = universal_element(inst)
    return (c.p.of(u) * x ** c.n - c.ell * y ** c.m).is_nonneg()


def verify(inst, x, y, cert, ctx: BoundContext, *, lam=None, f=None) -> bool:
    """Dispatch on the certificate type."""
    if isinstance(cert, Closure):
        return verify_closure(inst, x, y, cert, ctx)
    if isinstance(cert, Catalytic):
        return verify_catalytic(inst, x, y, cert, ctx)
    if isinstance(cert, Asymptotic):
        return verify_asymptotic(inst, x, y, cert, ctx)
    if isinstance(cert, Strassen):
        return verify_strassen(inst, x, y, cert, ctx.eps)
    if isinstance(cert, Ideal):
        if f is None:
            raise ValueError("ideal certificates need the target polynomial f")
        return verify_ideal(f, cert, ctx)
    if isinstance(cert, RateWitness):
        if lam is None:
            raise ValueError("rate witnesses need lambda")
        return verify_rate_witness(inst, x, y, lam, cert, ctx)
    raise InvalidCertificate(f"unknown certificate type {type(cert).__name__}")


def strassen_to_asymptotic(c: Strassen) -> Asymptotic:
    """The asymptotic certificate ``{p = 2^k, n, m = 1}`` carried by a Strassen pair."""
    return Asymptotic(UnivariateCoeffPoly.constant(2 ** c.k), c.n, 1)

