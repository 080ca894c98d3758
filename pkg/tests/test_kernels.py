import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polycert import kernels

BACKENDS = kernels.backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


def test_selected_backend_is_listed():
    assert kernels.BACKEND in BACKENDS


def test_mul_packed_small(backend):
    # (1 + 2t)(3 - t) with key = exponent of t
    keys, coefs = backend.mul_packed([0, 1], [1, 2], [0, 1], [3, -1])
    assert list(keys) == [0, 1, 2]
    assert list(coefs) == [3, 5, -2]


def test_mul_packed_cancellation_and_big_ints(backend):
    big = 10 ** 30
    keys, coefs = backend.mul_packed([0, 1], [big, big], [0, 1], [1, -1])
    assert list(keys) == [0, 2]
    assert list(coefs) == [big, -big]


def test_mul_packed_negative_keys(backend):
    keys, coefs = backend.mul_packed([-5, 3], [1, 1], [-2], [4])
    assert list(keys) == [-7, 1]
    assert list(coefs) == [4, 4]


def test_first_negative(backend):
    assert backend.first_negative([1, 0, 2]) == -1
    assert backend.first_negative([1, -3, -2]) == 1
    assert backend.first_negative([]) == -1


def test_eval_float(backend):
    exps = np.array([[0, 0], [1, 0], [0, 2]])
    coefs = np.array([1.0, 2.0, 3.0])
    pts = np.array([[0.0, 0.0], [1.0, 2.0], [0.5, 0.0]])
    assert np.allclose(backend.eval_float(exps, coefs, pts), [1.0, 15.0, 2.0])


def test_log_eval_zero_coordinates(backend):
    exps = np.array([[0], [1]], dtype=float)
    logcoefs = np.log([1.0, 1.0])
    out = backend.log_eval(exps, logcoefs, np.array([[-np.inf], [0.0], [math.log(3.0)]]))
    assert out[0] == 0.0
    assert out[1] == pytest.approx(math.log(2.0), abs=1e-15)
    assert out[2] == pytest.approx(math.log(4.0), abs=1e-15)


def test_log_eval_accurate_near_one(backend):
    # log(1 + 1e-12) must not round to 0
    exps = np.array([[0], [1]], dtype=float)
    out = backend.log_eval(exps, np.log([1.0, 1e-12]), np.array([[0.0]]))
    assert out[0] == pytest.approx(1e-12, rel=1e-9)


int_lists = st.lists(st.tuples(st.integers(-1000, 1000), st.integers(-10 ** 6, 10 ** 6)),
                     max_size=12, unique_by=lambda kv: kv[0])


@given(int_lists, int_lists)
def test_backends_agree_on_products(a, b):
    a.sort()
    b.sort()
    results = [b_.mul_packed([k for k, _ in a], [c for _, c in a], [k for k, _ in b], [c for _, c in b])
               for b_ in BACKENDS.values()]
    for keys, coefs in results[1:]:
        assert list(keys) == list(results[0][0])
        assert list(coefs) == list(results[0][1])


@given(st.integers(0, 2 ** 31))
def test_backends_agree_on_floats(seed):
    rng = np.random.default_rng(seed)
    exps = rng.integers(0, 4, size=(6, 3))
    coefs = rng.uniform(0.1, 3.0, size=6)
    pts = rng.uniform(0.0, 4.0, size=(20, 3))
    ref_v = BACKENDS["python"].eval_float(exps, coefs, pts)
    ref_l = BACKENDS["python"].log_eval(exps.astype(float), np.log(coefs), np.log(pts))
    for b_ in BACKENDS.values():
        assert np.allclose(b_.eval_float(exps, coefs, pts), ref_v, rtol=1e-12)
        assert np.allclose(b_.log_eval(exps.astype(float), np.log(coefs), np.log(pts)), ref_l, rtol=1e-12)
        assert np.allclose(np.exp(ref_l), ref_v, rtol=1e-9)
