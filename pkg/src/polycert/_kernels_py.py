"""Pure-Python kernels, used when the compiled ``_kernels`` module is absent.

Every function here has a twin with an identical signature in ``_kernels.pyx``.
"""
import numpy as np


def mul_packed(akeys, acoefs, bkeys, bcoefs):
    """Sparse product of two polynomials in packed-monomial form.

    Keys are integers encoding exponent vectors (so that adding keys multiplies
    monomials); coefficients are Python ints.  Returns ``(keys, coefs)`` sorted
    by key with zero coefficients dropped.
    """
    acc = {}
    get = acc.get
    bpairs = list(zip(bkeys, bcoefs))
    for ka, ca in zip(akeys, acoefs):
        ka = int(ka)
        for kb, cb in bpairs:
            k = ka + int(kb)
            acc[k] = get(k, 0) + ca * cb
    keys = sorted(k for k, c in acc.items() if c)
    return keys, [acc[k] for k in keys]


def first_negative(coefs):
    """Index of the first negative entry, or -1."""
    for i, c in enumerate(coefs):
        if c < 0:
            return i
    return -1


def eval_float(exps, coefs, points):
    exps = np.asarray(exps, dtype=np.int64)
    coefs = np.asarray(coefs, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    out = np.empty(points.shape[0])
    if exps.shape[0] == 0:
        out[:] = 0.0
        return out
    step = max(1, 2_000_000 // max(1, exps.size))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for lo in range(0, points.shape[0], step):
            p = points[lo:lo + step]
            mon = np.prod(np.where(exps[None] == 0, 1.0, p[:, None, :] ** exps[None]), axis=2)
            out[lo:lo + step] = mon @ coefs
    return out


def log_eval(exps, logcoefs, logpoints):
    """log(sum_t exp(logcoefs[t] + exps[t] . logpoints[i])) per point.

    ``0 * -inf`` is read as 0 so that zero coordinates are allowed for
    exponents that vanish.  The dominant term is factored out and the rest is
    summed through ``log1p`` to stay accurate near ``log 1 = 0``.
    """
    exps = np.asarray(exps, dtype=np.float64)
    logcoefs = np.asarray(logcoefs, dtype=np.float64)
    logpoints = np.asarray(logpoints, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        prod = exps[None, :, :] * logpoints[:, None, :]
    prod = np.where(exps[None, :, :] == 0, 0.0, prod)
    v = prod.sum(axis=2) + logcoefs[None, :]
    vmax = v.max(axis=1)
    out = np.full(v.shape[0], -np.inf)
    ok = np.isfinite(vmax)
    if ok.any():
        vv = v[ok]
        m = vmax[ok]
        arg = np.argmax(vv, axis=1)
        rest = np.exp(vv - m[:, None])
        rest[np.arange(vv.shape[0]), arg] = 0.0
        out[ok] = m + np.log1p(rest.sum(axis=1))
    out[vmax == np.inf] = np.inf
    return out
