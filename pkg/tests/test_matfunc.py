import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from oracles import det3_cofactor
from szego_lab.fourier import TrigPoly, trig_exp
from szego_lab.matfunc import (
    ConvergenceError,
    SingularMatrixError,
    central_log_block,
    default_buffer,
    logdet_lu,
    matrix_log,
    mercator_log,
    spectral_radius_estimate,
)
from szego_lab.operator import OpMatrix, build_psdo, build_toeplitz

B0 = trig_exp(TrigPoly.from_dict({1: 0.1, -1: 0.1}))
# a fixture whose truncation drift is visible for small buffers
DRIFT_B0 = trig_exp(TrigPoly.from_dict({1: 0.3, -1: 0.3}))
DRIFT_BSUB = TrigPoly.from_dict({0: 0.3, 1: 0.1, -1: 0.1})


def same_mod_2pi_i(a: complex, b: complex, tol: float) -> bool:
    d = a - b
    return abs(d.real) <= tol and abs(math.remainder(d.imag, 2 * math.pi)) <= tol


def gated_matrix(seed: int, size: int = 12, complex_entries: bool = True) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((size, size))
    if complex_entries:
        X = X + 1j * rng.standard_normal((size, size))
    X *= 0.5 / np.max(np.abs(np.linalg.eigvals(X)))
    scale = rng.uniform(0.5, 3.0) * (cmath.exp(1j * rng.uniform(-2.5, 2.5)) if complex_entries else 1.0)
    return scale * (np.eye(size) - X)


# ---------------------------------------------------------------- logdet_lu


def test_logdet_examples():
    assert logdet_lu(np.eye(5)).value == 0
    assert logdet_lu(np.diag([2.0, 2.0])).value == pytest.approx(2 * math.log(2), abs=1e-15)
    assert logdet_lu(np.zeros((0, 0))).value == 0


def test_logdet_cofactor_oracle():
    T = build_toeplitz(B0, 1)
    assert abs(logdet_lu(T).value - cmath.log(det3_cofactor(T.data))) < 1e-13


def test_logdet_sign_from_swaps():
    res = logdet_lu(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert res.value.real == pytest.approx(0, abs=1e-15)
    assert res.value.imag == pytest.approx(math.pi)


def test_logdet_singular():
    with pytest.raises(SingularMatrixError):
        logdet_lu(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_logdet_reports_condition_and_pivot():
    res = logdet_lu(np.diag([1.0, 1e-3]))
    assert res.condition == pytest.approx(1e3)
    assert res.min_pivot == pytest.approx(1e-3)


@given(st.integers(0, 10_000))
def test_logdet_multiplicative(seed):
    rng = np.random.default_rng(seed)
    A = np.eye(8) + 0.3 * rng.standard_normal((8, 8))
    B = np.eye(8) + 0.3 * (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
    lhs = logdet_lu(A @ B).value
    rhs = logdet_lu(A).value + logdet_lu(B).value
    assert same_mod_2pi_i(lhs, rhs, 1e-10)


# ---------------------------------------------------------------- matrix_log


def test_matrix_log_examples():
    assert np.array_equal(matrix_log(np.eye(4)), np.zeros((4, 4)))
    assert np.allclose(matrix_log(math.e * np.eye(2)), np.eye(2), atol=1e-15)
    M = OpMatrix(np.eye(11) + 0.1 * build_toeplitz(TrigPoly.from_dict({1: 0.5, -1: 0.5}), 5).data)
    L = matrix_log(M)
    assert isinstance(L, OpMatrix)
    assert np.max(np.abs(expm(L.data) - M.data)) < 1e-10


def test_matrix_log_gate():
    with pytest.raises(ConvergenceError):
        matrix_log(np.diag([1.0, 30.0]))
    with pytest.raises(ConvergenceError):
        mercator_log(np.diag([1.0, 1.5]), gate=0.1)


def test_spectral_radius_estimate():
    X = np.diag([0.2, -0.7, 0.1])
    assert spectral_radius_estimate(X) == pytest.approx(0.7, rel=1e-3)


@given(st.integers(0, 10_000), st.booleans())
def test_trace_log_is_logdet(seed, cplx):
    M = gated_matrix(seed, complex_entries=cplx)
    L = matrix_log(M, tol=1e-15)
    assert same_mod_2pi_i(complex(np.trace(L)), logdet_lu(M).value, 1e-9)
    assert np.max(np.abs(expm(L) - M)) <= 1e-9 * max(1.0, np.max(np.abs(M)))


def test_series_reports_terms_and_tail():
    res = mercator_log(build_psdo(B0, 0.1 * B0, 20).data, tol=1e-14)
    assert res.terms > 1 and res.tail <= 1e-14 * max(1.0, np.linalg.norm(res.matrix) / math.sqrt(41))
    assert res.radius < 0.9


# ---------------------------------------------------------------- central_log_block


def test_central_block_identity():
    r = central_log_block(TrigPoly.constant(1.0), TrigPoly.zero(), 6, 8)
    assert np.array_equal(r.block.data, np.zeros((13, 13)))
    assert r.drift == 0


def test_central_block_toeplitz_log():
    r = central_log_block(B0, TrigPoly.zero(), 12, 32)
    ref = build_toeplitz(TrigPoly.from_dict({1: 0.1, -1: 0.1}), 12).data
    assert np.max(np.abs(r.block.data - ref)) < 1e-8
    assert r.buffer == 32 and r.block.N == 12


def test_default_buffer():
    assert default_buffer(B0, TrigPoly.zero()) >= 32
    wide = TrigPoly.from_dict({12: 0.01, -12: 0.01})
    assert default_buffer(wide, TrigPoly.zero()) == 48


def test_drift_decreases_with_buffer():
    drifts = [central_log_block(DRIFT_B0, DRIFT_BSUB, 8, b).drift for b in (2, 4, 8, 16, 32, 64)]
    floor = 1e-13
    for prev, cur in zip(drifts, drifts[1:]):
        if prev > floor:
            assert cur < prev
        else:
            assert cur <= floor
    assert drifts[0] > 1e-8  # the fixture really does feel the truncation edge
