"""YAML certificate documents.

Rationals are written as ``"a/b"`` strings and polynomials in the text form of
:mod:`polycert.poly`, so a load/dump round trip is lossless.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import yaml

from .certificates import (
    CERTIFICATE_TYPES,
    Asymptotic,
    BoundContext,
    Catalytic,
    Closure,
    Ideal,
    InvalidCertificate,
    RateWitness,
    Strassen,
    UnivariateCoeffPoly,
    verify,
)
from .poly import ParseError, Polynomial, as_fraction, format_poly, parse
from .semiring import SemiringInstance

FORMAT_VERSION = 1


class FormatError(ValueError):
    """The document could not be read (syntax, missing fields, bad values)."""


@dataclass
class CertificateDocument:
    instance: SemiringInstance
    context: BoundContext
    certificate: object
    x: Polynomial | None = None
    y: Polynomial | None = None
    f: Polynomial | None = None
    lam: Fraction | None = None
    report: dict | None = None
    manifest: dict | None = None
    version: int = FORMAT_VERSION

    def verify(self) -> bool:
        return verify(self.instance, self.x, self.y, self.certificate, self.context, lam=self.lam, f=self.f)


def _upoly(p: UnivariateCoeffPoly) -> list:
    return [str(c) for c in p.coeffs]


def certificate_to_dict(cert) -> dict:
    out = {"form": cert.form}
    if isinstance(cert, (Closure, Catalytic)):
        out.update(p=_upoly(cert.p), z=format_poly(cert.z), m=cert.m)
    elif isinstance(cert, Asymptotic):
        out.update(p=_upoly(cert.p), n=cert.n, m=cert.m)
    elif isinstance(cert, Strassen):
        out.update(k=cert.k, n=cert.n)
    elif isinstance(cert, Ideal):
        out.update(h=format_poly(cert.h), p=_upoly(cert.p),
                   multipliers=[format_poly(q) for q in cert.multipliers],
                   ideal_gens=[format_poly(g) for g in cert.ideal_gens])
    elif isinstance(cert, RateWitness):
        out.update(m=cert.m, n=cert.n, ell=cert.ell, p=_upoly(cert.p))
    else:
        raise TypeError(f"not a certificate: {cert!r}")
    return out


def document_to_dict(doc: CertificateDocument) -> dict:
    out = {"version": doc.version, "instance": doc.instance.to_dict()}
    if doc.f is not None:
        out["f"] = format_poly(doc.f)
    if doc.x is not None:
        out["x"] = format_poly(doc.x)
    if doc.y is not None:
        out["y"] = format_poly(doc.y)
    if doc.lam is not None:
        out["lambda"] = str(doc.lam)
    out["context"] = {"r": str(doc.context.r), "eps": str(doc.context.eps)}
    out["certificate"] = certificate_to_dict(doc.certificate)
    if doc.report is not None:
        out["report"] = doc.report
    if doc.manifest is not None:
        out["manifest"] = doc.manifest
    return out


def dump_yaml(data) -> str:
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None, allow_unicode=True, width=100)


def dumps(doc: CertificateDocument) -> str:
    return dump_yaml(document_to_dict(doc))


# -- loading ---------------------------------------------------------------

def _get(data, key, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise FormatError(f"missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return value


def _int(data, key) -> int:
    value = _get(data, key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"field {key!r} must be an integer")
    return value


def _rational(value, key) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"field {key!r}: {exc}") from None


def _poly(text, d, key) -> Polynomial:
    if not isinstance(text, str):
        text = str(text) if isinstance(text, int) and not isinstance(text, bool) else None
    if text is None:
        raise FormatError(f"field {key!r} must be a polynomial string")
    try:
        return parse(text, nvars=d)
    except ParseError as exc:
        raise FormatError(f"field {key!r}: {exc}") from None


def _upoly_load(value) -> UnivariateCoeffPoly:
    if not isinstance(value, list):
        raise FormatError("field 'p' must be a list of coefficients")
    return UnivariateCoeffPoly(tuple(_rational(v, "p") for v in value))


def certificate_from_dict(data: dict, d: int):
    form = _get(data, "form", str)
    if form not in CERTIFICATE_TYPES:
        raise FormatError(f"unknown certificate form {form!r}")
    if form in ("closure", "catalytic"):
        cls = Closure if form == "closure" else Catalytic
        return cls(_upoly_load(_get(data, "p")), _poly(_get(data, "z"), d, "z"), _int(data, "m"))
    if form == "asymptotic":
        return Asymptotic(_upoly_load(_get(data, "p")), _int(data, "n"), _int(data, "m"))
    if form == "strassen":
        return Strassen(_int(data, "k"), _int(data, "n"))
    if form == "ideal":
        mults = [_poly(q, d, "multipliers") for q in _get(data, "multipliers", list)]
        gens = [_poly(g, d, "ideal_gens") for g in _get(data, "ideal_gens", list)]
        return Ideal(_poly(_get(data, "h"), d, "h"), _upoly_load(_get(data, "p")), mults, gens)
    return RateWitness(_int(data, "m"), _int(data, "n"), _int(data, "ell"), _upoly_load(_get(data, "p")))


def loads(text: str) -> CertificateDocument:
    """Parse a certificate document.

    Raises FormatError when the document cannot be read and
    InvalidCertificate when it reads but is structurally malformed.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise FormatError(f"not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("certificate document must be a mapping")
    version = _int(data, "version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    try:
        inst = SemiringInstance.from_dict(_get(data, "instance", dict))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad instance descriptor: {exc}") from None
    ctx_data = _get(data, "context", dict)
    try:
        ctx = BoundContext(_rational(_get(ctx_data, "r"), "r"), _rational(_get(ctx_data, "eps"), "eps"))
    except ValueError as exc:
        raise FormatError(f"bad context: {exc}") from None
    cert_data = _get(data, "certificate", dict)
    cert = certificate_from_dict(cert_data, inst.d)
    doc = CertificateDocument(inst, ctx, cert, version=version,
                              report=data.get("report"), manifest=data.get("manifest"))
    if cert.form == "ideal":
        doc.f = _poly(_get(data, "f"), inst.d, "f")
    else:
        doc.x = _poly(_get(data, "x"), inst.d, "x")
        doc.y = _poly(_get(data, "y"), inst.d, "y")
    if cert.form == "rate":
        doc.lam = _rational(_get(data, "lambda"), "lambda")
    return doc


def load(path) -> CertificateDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(doc: CertificateDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


__all__ = ["CertificateDocument", "FormatError", "InvalidCertificate", "dump", "dumps", "load", "loads"]
