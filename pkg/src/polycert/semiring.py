"""Concrete preordered polynomial semirings and their universal elements."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .poly import Polynomial, coeffwise_geq

NATURALS = "N"
NONNEG_RATIONALS = "Q+"
DOMAINS = (NATURALS, NONNEG_RATIONALS)


@dataclass(frozen=True)
class SemiringInstance:
    """Polynomials in ``d`` variables with coefficients in ``domain``.

    ``prime`` restricts to polynomials with positive constant term (plus
    zero); it cannot be combined with ``laurent``.
    """

    d: int
    domain: str = NONNEG_RATIONALS
    laurent: bool = False
    prime: bool = True

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown coefficient domain {self.domain!r}; expected one of {DOMAINS}")
        if self.laurent and self.prime:
            raise ValueError("the positive-constant restriction does not apply to Laurent instances")

    def to_dict(self) -> dict:
        return {"d": self.d, "domain": self.domain, "laurent": self.laurent, "prime": self.prime}

    @classmethod
    def from_dict(cls, data: dict) -> "SemiringInstance":
        try:
            return cls(int(data["d"]), str(data["domain"]), bool(data["laurent"]), bool(data["prime"]))
        except KeyError as exc:
            raise ValueError(f"instance descriptor is missing {exc.args[0]!r}") from None

    def __str__(self):
        base = "N" if self.domain == NATURALS else "Q+"
        xs = ",".join(f"X{i + 1}" for i in range(self.d))
        if self.laurent:
            inv = ",".join(f"X{i + 1}^-1" for i in range(self.d))
            return f"{base}[{xs},{inv}]"
        return f"{base}[{xs}]" + ("'" if self.prime else "")


def universal_element(inst: SemiringInstance) -> Polynomial:
    """``1 + sum X_i``, or ``1 + sum (X_i + X_i^-1)`` for Laurent instances."""
    d = inst.d
    u = Polynomial.one(d)
    for i in range(d):
        u = u + Polynomial.variable(i, d)
        if inst.laurent:
            u = u + Polynomial.variable(i, d, -1)
    return u


def is_member(inst: SemiringInstance, p: Polynomial) -> bool:
    if p.nvars != inst.d:
        return False
    if p.is_zero():
        return True
    for exps, c in p.terms.items():
        if c < 0:
            return False
        if inst.domain == NATURALS and c.denominator != 1:
            return False
        if not inst.laurent and any(e < 0 for e in exps):
            return False
    if inst.prime and p.constant_term <= 0:
        return False
    return True


def require_member(inst: SemiringInstance, p: Polynomial, name: str = "argument"):
    if p.nvars != inst.d:
        raise ValueError(f"{name} has {p.nvars} variables, instance has {inst.d}")
    if not is_member(inst, p):
        raise ValueError(f"{name} = {p} is not a member of {inst}")


def leq(inst: SemiringInstance, a: Polynomial, b: Polynomial) -> bool:
    """``a <= b`` in the coefficientwise preorder of ``inst``."""
    require_member(inst, a, "left operand")
    require_member(inst, b, "right operand")
    return coeffwise_geq(b, a)


def power_universal_bound(inst: SemiringInstance, x: Polynomial) -> int:
    """An exponent ``k`` for which :func:`power_universal_witness` must succeed.

    With base ``2u`` every monomial of total absolute degree ``D`` appears in
    ``(2u)^k`` for ``k >= D`` with coefficient at least ``2^k``, which bounds
    both the domination and the inverse condition.
    """
    coefs = [abs(c) for c in x.terms.values()]
    degree = max((sum(abs(e) for e in exps) for exps in x.terms), default=0)
    k = degree + 1 + math.ceil(math.log2(max(coefs)))
    smallest = min(coefs)
    if smallest < 1:
        k += math.ceil(math.log2(1 / smallest))
    return max(k, 0)


def power_universal_witness(inst: SemiringInstance, x: Polynomial, k_max: int | None = None, base: Polynomial | None = None):
    """Least ``k`` with ``base^k >= x`` and (when it applies) ``base^k * x >= 1``.

    ``base`` defaults to ``2u``: ``u`` itself is only polynomially universal
    in the non-Laurent instances (it never dominates the constant 2).
    The lower-bound condition is checked in prime and Laurent instances,
    the ones in which ``u`` is universal.  Returns None if no ``k <= k_max``
    works.
    """
    if x.is_zero():
        raise ValueError("universality is only asked of nonzero elements")
    if base is None:
        base = 2 * universal_element(inst)
    if k_max is None:
        k_max = power_universal_bound(inst, x)
    one = Polynomial.one(inst.d)
    check_lower = inst.prime or inst.laurent
    power = one
    for k in range(k_max + 1):
        if coeffwise_geq(power, x) and (not check_lower or coeffwise_geq(power * x, one)):
            return k
        power = power * base
    return None

