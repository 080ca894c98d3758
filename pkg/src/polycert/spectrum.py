"""Evaluation points on the orthant: pointwise order checks and regularized rates.

Sampling is one-sided.  A returned counterexample is confirmed in exact
rational arithmetic and disproves ``x >= y``; "holds on samples" is only
evidence.  Floats are used for screening and for the rate objective.
"""
from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .certificates import check_rate_precondition
from .poly import Polynomial, as_fraction, evaluate
from .semiring import SemiringInstance, require_member

SCREEN_TOL = 1e-9
_CHUNK = 8192


def thread_count() -> int:
    """Worker threads for sample evaluation, capped by ``POLYCERT_THREADS``."""
    raw = os.environ.get("POLYCERT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class EvaluationPoint:
    coords: tuple

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if any(c < 0 for c in coords):
            raise ValueError("evaluation points lie in the nonnegative orthant")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return "s=(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class GridConfig:
    """Per-axis samples: ``i*box/n`` for ``0 <= i <= n`` and ``i/(n-i)`` for ``0 <= i < n``.

    The second family is ``t/(1-t)`` on the grid ``t = i/n`` and reaches far
    into the orthant.  When the product grid would exceed ``max_points``,
    ``n`` is lowered for that dimension.
    """

    points_per_axis: int = 64
    box: Fraction = Fraction(4)
    max_points: int = 200_000
    random_points: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {"points_per_axis": self.points_per_axis, "box": str(self.box),
                "max_points": self.max_points, "random_points": self.random_points, "seed": self.seed}


def axis_values(n: int, box, laurent: bool = False) -> list:
    box = as_fraction(box)
    vals = {box * i / n for i in range(n + 1)}
    vals.update(Fraction(i, n - i) for i in range(n))
    if laurent:
        vals.discard(Fraction(0))
    return sorted(vals)


def sample_points(d: int, cfg: GridConfig, laurent: bool = False) -> tuple[list, int]:
    """Grid points in lexicographic order, then seeded random points.

    Returns the points and the per-axis ``n`` actually used.
    """
    n = cfg.points_per_axis
    vals = axis_values(n, cfg.box, laurent)
    while n > 1 and len(vals) ** d > cfg.max_points:
        n = max(1, int(n * (cfg.max_points ** (1 / d)) / len(vals)))
        vals = axis_values(n, cfg.box, laurent)
    pts = [tuple(p) for p in itertools.product(vals, repeat=d)]
    if cfg.random_points:
        rng = random.Random(cfg.seed)
        lo = 1 if laurent else 0
        for _ in range(cfg.random_points):
            pts.append(tuple(Fraction(rng.randint(lo, 4000), rng.randint(1, 1000)) for _ in range(d)))
    return pts, n


def _poly_arrays(p: Polynomial):
    items = p.items()
    exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), p.nvars)
    coefs = np.array([float(c) for _, c in items], dtype=np.float64)
    return exps, coefs


def _chunked(fn, points: np.ndarray) -> np.ndarray:
    if points.shape[0] <= _CHUNK:
        return fn(points)
    chunks = [points[i:i + _CHUNK] for i in range(0, points.shape[0], _CHUNK)]
    workers = thread_count()
    if workers == 1:
        return np.concatenate([fn(c) for c in chunks])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(fn, chunks)))


def eval_float_many(p: Polynomial, points: np.ndarray) -> np.ndarray:
    exps, coefs = _poly_arrays(p)
    return _chunked(lambda chunk: kernels.eval_float(exps, coefs, chunk), points)


def log_eval_many(p: Polynomial, logpoints: np.ndarray) -> np.ndarray:
    """``log p(s)`` for a polynomial with nonnegative coefficients."""
    items = p.items()
    exps = np.array([e for e, _ in items], dtype=np.float64).reshape(len(items), p.nvars)
    logc = np.array([math.log(c.numerator) - math.log(c.denominator) for _, c in items])
    return _chunked(lambda chunk: kernels.log_eval(exps, logc, chunk), logpoints)


def _to_float(points: Sequence[tuple]) -> np.ndarray:
    d = len(points[0]) if points else 0
    return np.array([[float(c) for c in p] for p in points], dtype=np.float64).reshape(len(points), d)


@dataclass
class PointwiseResult:
    holds_on_samples: bool
    counterexample: EvaluationPoint | None = None
    gap: Fraction | None = None  # exact x(s) - y(s) at the counterexample
    min_gap: float = math.inf
    argmin: EvaluationPoint | None = None
    samples: int = 0
    resolution: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"holds_on_samples": self.holds_on_samples}
        if self.counterexample is not None:
            out["counterexample"] = [str(c) for c in self.counterexample.coords]
            out["gap"] = str(self.gap)
        out["min_gap"] = repr(float(self.min_gap))
        if self.argmin is not None:
            out["argmin"] = [str(c) for c in self.argmin.coords]
        out["samples"] = self.samples
        out["resolution"] = self.resolution
        return out


def _first_exact_negative(gap: Polynomial, points, values, scale):
    for i in np.flatnonzero(~(values > SCREEN_TOL * np.maximum(scale, 1.0))):
        v = evaluate(gap, points[i])
        if v < 0:
            return int(i), v
    return None


def pointwise_check(inst: SemiringInstance, x: Polynomial, y: Polynomial,
                    grid: GridConfig | None = None) -> PointwiseResult:
    """Search the sample grid for an exact point with ``x(s) < y(s)``."""
    require_member(inst, x, "x")
    require_member(inst, y, "y")
    grid = grid or GridConfig()
    gap = x - y
    points, n_used = sample_points(inst.d, grid, inst.laurent)
    fpts = _to_float(points)
    values = eval_float_many(gap, fpts)
    absgap = Polynomial({e: abs(c) for e, c in gap.terms.items()}, inst.d)
    scale = eval_float_many(absgap, fpts)
    resolution = dict(grid.to_dict(), points_per_axis_used=n_used)
    res = PointwiseResult(True, samples=len(points), resolution=resolution)
    if len(points):
        finite = np.where(np.isnan(values), np.inf, values)
        k = int(np.argmin(finite))
        res.min_gap = float(finite[k])
        res.argmin = EvaluationPoint(points[k])
    hit = _first_exact_negative(gap, points, values, scale)
    if hit is not None:
        i, v = hit
        res.holds_on_samples = False
        res.counterexample = EvaluationPoint(points[i])
        res.gap = v
    return res


def _height(point) -> int:
    return max((max(abs(c.numerator), c.denominator) for c in point), default=0)


def variety_check(f: Polynomial, gens: Sequence[Polynomial], grid: GridConfig | None = None) -> PointwiseResult:
    """Look for a grid point on the common zero set of ``gens`` where ``f < 0``.

    Points on the zero set are scanned by increasing height (largest
    numerator or denominator), so the reported witness is the simplest one.
    """
    grid = grid or GridConfig()
    d = f.nvars
    points, n_used = sample_points(d, grid)
    fpts = _to_float(points)
    mask = np.ones(len(points), dtype=bool)
    for g in gens:
        gv = eval_float_many(g, fpts)
        ga = eval_float_many(Polynomial({e: abs(c) for e, c in g.terms.items()}, d), fpts)
        mask &= ~(np.abs(gv) > SCREEN_TOL * np.maximum(ga, 1.0))
    res = PointwiseResult(True, resolution=dict(grid.to_dict(), points_per_axis_used=n_used))
    on = [i for i in np.flatnonzero(mask) if all(evaluate(g, points[i]) == 0 for g in gens)]
    # simplest witnesses first
    on.sort(key=lambda i: (_height(points[i]), points[i]))
    res.samples = len(on)
    for i in on:
        v = evaluate(f, points[i])
        if v < res.min_gap:
            res.min_gap = float(v)
            res.argmin = EvaluationPoint(points[i])
        if v < 0:
            res.holds_on_samples = False
            res.counterexample = EvaluationPoint(points[i])
            res.gap = v
            break
    return res


# -- regularized rate ------------------------------------------------------

@dataclass(frozen=True)
class RateOptions:
    points_per_axis: int = 64
    refine_rounds: int = 3
    zoom: int = 10
    max_points: int = 200_000
    max_power: int = 16

    def to_dict(self) -> dict:
        return {"points_per_axis": self.points_per_axis, "refine_rounds": self.refine_rounds,
                "zoom": self.zoom, "max_points": self.max_points}


@dataclass
class RateResult:
    value: float
    exact: Fraction | None = None
    argmin: EvaluationPoint | None = None
    resolution: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"value": "inf" if math.isinf(self.value) else repr(self.value)}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        out["argmin"] = None if self.argmin is None else [str(c) for c in self.argmin.coords]
        out["resolution"] = self.resolution
        return out


def constant_ratio(x: Polynomial, y: Polynomial, max_power: int = 16) -> Fraction | None:
    """``a/b`` if ``x^b == y^a`` exactly with ``a/b = deg x / deg y``, else None."""
    if x.is_constant() or y.is_constant():
        return None
    c = Fraction(x.degree, y.degree)
    if c.denominator > max_power or c.numerator > 4 * max_power:
        return None
    return c if x ** c.denominator == y ** c.numerator else None


def _ratios(logx: np.ndarray, logy: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        r = logx / logy
    # log f(y) = 0: either 0/0 or c/0, both read as +inf
    r[~(logy > 0)] = np.inf
    return r


def _t_to_s(t: Fraction) -> Fraction:
    return t / (1 - t)


def rate(inst: SemiringInstance, x: Polynomial, y: Polynomial, opts: RateOptions | None = None) -> RateResult:
    """Estimate ``inf_s log x(s) / log y(s)`` over the orthant.

    Exact short cuts: ``y == 1`` gives +inf, and ``x^b == y^a`` gives
    ``a/b``.  Otherwise the objective is sampled on ``s = t/(1-t)`` for a
    grid of ``t`` in ``[0, 1)`` per axis and refined by zooming around the
    incumbent.
    """
    require_member(inst, x, "x")
    require_member(inst, y, "y")
    check_rate_precondition(x, y)
    opts = opts or RateOptions()
    resolution = opts.to_dict()
    d = inst.d
    if y == 1:
        return RateResult(math.inf, None, None, dict(resolution, method="y == 1"))
    if y.is_constant() and x.is_constant():
        val = math.log(x.constant_term) / math.log(y.constant_term)
        return RateResult(val, None, None, dict(resolution, method="constants"))
    c = constant_ratio(x, y, opts.max_power)
    if c is not None:
        return RateResult(float(c), c, None, dict(resolution, method="constant ratio"))

    n = opts.points_per_axis
    while n > 2 and n ** d > opts.max_points:
        n //= 2
    lo = 1 if inst.laurent else 0
    axis = [Fraction(i, n) for i in range(lo, n)]
    tpoints = list(itertools.product(axis, repeat=d))
    best_val, best_t = _evaluate_rate(x, y, tpoints)
    spacing = Fraction(1, n)
    for _ in range(opts.refine_rounds):
        spacing /= opts.zoom
        per_axis = []
        for tc in best_t:
            cand = {tc + j * spacing for j in range(-opts.zoom, opts.zoom + 1)}
            per_axis.append(sorted(t for t in cand if (0 < t if inst.laurent else 0 <= t) and t < 1))
        val, t = _evaluate_rate(x, y, list(itertools.product(*per_axis)))
        if val < best_val:
            best_val, best_t = val, t
    argmin = EvaluationPoint(tuple(_t_to_s(t) for t in best_t))
    resolution.update(method="sampling", points_per_axis_used=n, final_spacing=str(spacing))
    return RateResult(best_val, None, argmin, resolution)


def _evaluate_rate(x: Polynomial, y: Polynomial, tpoints: list):
    spts = [tuple(_t_to_s(t) for t in tp) for tp in tpoints]
    with np.errstate(divide="ignore"):
        logs = np.log(_to_float(spts))
    r = _ratios(log_eval_many(x, logs), log_eval_many(y, logs))
    k = int(np.argmin(r))
    return float(r[k]), tpoints[k]
