"""Exact multivariate (Laurent) polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients.  Negative exponents are allowed at
this level; whether they are admissible is decided by the ambient
:class:`~polycert.semiring.SemiringInstance`.

Text form::

    2 + 3*X1*X2^2 - 1/2*X1^-1

Variables are ``X1 .. Xd``.  The parser additionally accepts parentheses and
integer powers of parenthesized expressions, e.g. ``(1+X1)^2``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from . import kernels

NEG_INF = float("-inf")

# packed monomial keys must stay inside int64 with headroom for key sums
_PACK_LIMIT = 1 << 62


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _glex_key(exps):
    return (sum(exps), tuple(-e for e in exps))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None, nvars: int | None = None):
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if nvars is None:
                nvars = len(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} does not have length {nvars}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        if nvars is None:
            raise ValueError("nvars is required for the zero polynomial")
        self._terms = clean
        self._nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # trusted constructor: tuple keys of the right length, nonzero Fractions
        p = object.__new__(cls)
        p._terms = terms
        p._nvars = nvars
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = as_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coef=1) -> "Polynomial":
        return cls({tuple(exps): coef}, len(exps))

    @classmethod
    def variable(cls, index: int, nvars: int, power: int = 1) -> "Polynomial":
        """``X_{index+1}^power`` (``index`` is 0-based)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = power
        return cls._raw({tuple(exps): Fraction(1)}, nvars)

    # -- inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """(exponents, coefficient) pairs in graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _glex_key(kv[0]))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self._nvars)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_laurent(self) -> bool:
        """True if some exponent is negative."""
        return any(e < 0 for exps in self._terms for e in exps)

    def is_nonneg(self) -> bool:
        """True if every coefficient is >= 0."""
        return all(c > 0 for c in self._terms.values())

    @property
    def degree(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def max_abs_exponent(self) -> int:
        return max((abs(e) for exps in self._terms for e in exps), default=0)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise ValueError(
                    f"dimension mismatch: {self._nvars} vs {other._nvars} variables")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other, self._nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for k, c in other._terms.items():
            s = terms.get(k, 0) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return Polynomial._raw(terms, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({k: -c for k, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self._nvars)
            return Polynomial._raw({k: v * c for k, v in self._terms.items()}, self._nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.one(self._nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Polynomial.constant(other, self._nvars)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, nvars={self._nvars})"

    def substitute_last(self, value) -> "Polynomial":
        """Set the last variable to ``value`` and drop it."""
        value = as_fraction(value)
        out = {}
        for exps, c in self._terms.items():
            k = exps[:-1]
            out[k] = out.get(k, 0) + c * value ** exps[-1]
        return Polynomial(out, self._nvars - 1)


# -- packed multiplication -------------------------------------------------

def _scaled_ints(p: Polynomial):
    den = 1
    for c in p._terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return den, [int(c * den) for c in p._terms.values()]


def pack_base(*max_abs: int) -> int:
    """Balanced-digit base large enough for sums of the given exponent bounds."""
    return 2 * sum(max_abs) + 1


def pack(exps: Sequence[int], base: int) -> int:
    key = 0
    for e in reversed(exps):
        key = key * base + e
    return key


def unpack(key: int, base: int, nvars: int) -> tuple:
    half = base // 2
    out = []
    for _ in range(nvars):
        r = key % base
        if r > half:
            r -= base
        out.append(r)
        key = (key - r) // base
    return tuple(out)


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact product of two polynomials in the same variables."""
    if a._nvars != b._nvars:
        raise ValueError(f"dimension mismatch: {a._nvars} vs {b._nvars} variables")
    d = a._nvars
    if not a._terms or not b._terms:
        return Polynomial.zero(d)
    da, ca = _scaled_ints(a)
    db, cb = _scaled_ints(b)
    base = pack_base(a.max_abs_exponent(), b.max_abs_exponent())
    den = da * db
    if d == 0 or base ** d >= _PACK_LIMIT:
        acc = {}
        for (ea, x), (eb, y) in ((p, q) for p in zip(a._terms, ca) for q in zip(b._terms, cb)):
            k = tuple(i + j for i, j in zip(ea, eb))
            acc[k] = acc.get(k, 0) + x * y
        return Polynomial._raw({k: Fraction(c, den) for k, c in acc.items() if c}, d)
    ka = [pack(e, base) for e in a._terms]
    kb = [pack(e, base) for e in b._terms]
    keys, coefs = kernels.mul_packed(ka, ca, kb, cb)
    return Polynomial._raw(
        {unpack(int(k), base, d): Fraction(c, den) for k, c in zip(keys, coefs)}, d)


# -- evaluation, order, homogenization -------------------------------------

def evaluate(p: Polynomial, s: Sequence) -> Fraction:
    """Exact value of ``p`` at the rational point ``s``.

    Raises ValueError on a zero coordinate carrying a negative exponent.
    """
    s = [as_fraction(v) for v in s]
    if len(s) != p.nvars:
        raise ValueError(f"point has {len(s)} coordinates, polynomial has {p.nvars} variables")
    if any(v < 0 for v in s):
        raise ValueError("evaluation points must lie in the nonnegative orthant")
    total = Fraction(0)
    cache = {}
    for exps, c in p._terms.items():
        term = c
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if e < 0 and s[i] == 0:
                raise ValueError(f"coordinate {i + 1} is zero but the polynomial has a negative exponent there")
            key = (i, e)
            if key not in cache:
                cache[key] = s[i] ** e
            term *= cache[key]
        total += term
    return total


def coeffwise_geq(a: Polynomial, b: Polynomial) -> bool:
    """True iff every coefficient of ``a - b`` is nonnegative."""
    if a.nvars != b.nvars:
        raise ValueError(f"dimension mismatch: {a.nvars} vs {b.nvars} variables")
    return (a - b).is_nonneg()


def homogenize(p: Polynomial) -> Polynomial:
    """Pad every term with a new last variable up to the total degree of ``p``.

    The homogenizing variable is appended as ``X_{d+1}``.
    """
    if p.is_laurent():
        raise ValueError("cannot homogenize a Laurent polynomial")
    d = p.nvars
    if p.is_zero():
        return Polynomial.zero(d + 1)
    deg = p.degree
    return Polynomial._raw({exps + (deg - sum(exps),): c for exps, c in p._terms.items()}, d + 1)


def dehomogenize(p: Polynomial) -> Polynomial:
    """Inverse of :func:`homogenize`: set the last variable to 1."""
    return p.substitute_last(1)


def embezzlement_element(n: int) -> Polynomial:
    """``sum_{j=-n}^{n} (1 - |j|/n) X^j`` in one Laurent variable."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Polynomial({(j,): 1 - Fraction(abs(j), n) for j in range(-n, n + 1)}, 1)


def embezzlement_identity(n: int) -> bool:
    """Check ``(X + X^-1) z + 2/n == 2 z + (X^-n + X^n)/n`` exactly."""
    z = embezzlement_element(n)
    x = Polynomial({(1,): 1, (-1,): 1}, 1)
    lhs = x * z + Fraction(2, n)
    rhs = 2 * z + Polynomial({(-n,): Fraction(1, n), (n,): Fraction(1, n)}, 1)
    return lhs == rhs


# -- text form -------------------------------------------------------------

class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _format_monomial(exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"X{i + 1}")
        elif e:
            parts.append(f"X{i + 1}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    out = []
    for exps, c in p.items():
        mono = _format_monomial(exps)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif ch in "Xx":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable needs an index, e.g. X1", i, text)
            idx = int(text[i + 1:j])
            if idx < 1:
                raise ParseError("variable indices start at 1", i, text)
            toks.append(("var", idx, i))
            i = j
        elif ch in "+-*/^()":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, nvars):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "a number" if kind == "int" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(self.text[tok[2]])
            raise ParseError(f"expected {want}, got {got}", tok[2], self.text)
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(msg, self.peek()[2], self.text)

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        self.take()
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        pos = self.peek()[2]
        e = self.take("int")[1]
        if not neg:
            return base ** e
        if len(base) != 1:
            raise ParseError("negative powers are only allowed on monomials", pos, self.text)
        (exps, c), = base.items()
        if e and c != 1:
            raise ParseError("negative powers are only allowed on monomials", pos, self.text)
        return Polynomial._raw({tuple(-x * e for x in exps): Fraction(1)}, self.nvars)

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                dpos = self.peek()[2]
                den = self.take("int")[1]
                if den == 0:
                    raise ParseError("zero denominator", dpos, self.text)
                return Polynomial.constant(Fraction(val, den), self.nvars)
            return Polynomial.constant(val, self.nvars)
        if kind == "var":
            self.take()
            return Polynomial.variable(val - 1, self.nvars)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {self.text[pos]!r}")


def max_var_index(text: str) -> int:
    """Largest ``Xi`` index mentioned in ``text`` (0 if none)."""
    return max((v for k, v, _ in _tokenize(text) if k == "var"), default=0)


def parse(text: str, nvars: int | None = None, laurent: bool = True) -> Polynomial:
    """Parse the text form.  ``nvars`` defaults to the largest index used (at least 1)."""
    if not isinstance(text, str):
        raise TypeError("expected a string")
    top = max_var_index(text)
    if nvars is None:
        nvars = max(top, 1)
    elif top > nvars:
        raise ParseError(f"X{top} used but only {nvars} variables declared", 0, text)
    parser = _Parser(text, nvars)
    if parser.peek()[0] == "end":
        raise ParseError("empty polynomial", 0, text)
    p = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {text[tok[2]]!r}", tok[2], text)
    if not laurent and p.is_laurent():
        raise ParseError("negative exponents require Laurent mode", 0, text)
    return p


def lcm_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den
