"""Log-determinants and matrix logarithms for the Szegő comparison."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .fourier import TrigPoly
from .operator import OpMatrix, build_psdo

SINGULAR_PIVOT = 1e-300
SPECTRAL_GATE = 0.9
MAX_SERIES_TERMS = 2000


class SingularMatrixError(ArithmeticError):
    pass


class ConvergenceError(ArithmeticError):
    """Series or iteration failed to converge (exit code 3 at the CLI)."""


def _array(M) -> np.ndarray:
    return M.data if isinstance(M, OpMatrix) else np.asarray(M)


@dataclass(frozen=True)
class LogDetResult:
    value: complex
    min_pivot: float
    condition: float


def logdet_lu(M) -> LogDetResult:
    """``log det M`` from an LU factorization with partial pivoting.

    The value is the principal branch: ``sum log(pivot)`` plus ``i pi`` per row
    interchange, with the imaginary part wrapped into ``(-pi, pi]``.
    ``condition`` is LAPACK's 1-norm condition estimate.
    """
    a = _array(M)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"logdet_lu needs a square matrix, got {a.shape}")
    if a.shape[0] == 0:
        return LogDetResult(0j, math.inf, 1.0)
    with warnings.catch_warnings():
        # an exactly singular factor is reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=True)
    pivots = np.diagonal(lu)
    min_pivot = float(np.min(np.abs(pivots)))
    if min_pivot < SINGULAR_PIVOT:
        raise SingularMatrixError(f"pivot of size {min_pivot:.3g} below {SINGULAR_PIVOT}")
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    value = complex(np.sum(np.log(pivots.astype(complex)))) + 1j * math.pi * (swaps % 2)
    value = complex(value.real, math.remainder(value.imag, 2 * math.pi))
    if value.imag == -math.pi:
        value = complex(value.real, math.pi)

    gecon, = lapack.get_lapack_funcs(("gecon",), (lu,))
    anorm = float(np.max(np.sum(np.abs(a), axis=0)))
    rcond, _ = gecon(lu, anorm, norm="1")
    condition = math.inf if rcond == 0 else 1.0 / rcond
    return LogDetResult(value, min_pivot, condition)


def spectral_radius_estimate(X: np.ndarray, iters: int = 80, seed: int = 0) -> float:
    """Growth rate ``||X^k v||^(1/k)`` of a random start vector."""
    n = X.shape[0]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + (1j * rng.standard_normal(n) if np.iscomplexobj(X) else 0)
    v /= np.linalg.norm(v)
    logs = []
    for _ in range(iters):
        v = X @ v
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        logs.append(math.log(nv))
        v /= nv
    half = logs[len(logs) // 2 :]
    return math.exp(sum(half) / len(half))


@dataclass(frozen=True)
class SeriesLog:
    matrix: np.ndarray
    terms: int
    tail: float
    radius: float
    shift: complex


def mercator_log(M, tol: float = 1e-14, gate: float = SPECTRAL_GATE) -> SeriesLog:
    """Principal ``log M`` by ``log c + log(M/c)`` and ``log(I - X) = -sum X^p / p``.

    ``c`` is the mean diagonal entry.  Raises :class:`ConvergenceError` when the
    estimated spectral radius of ``X = I - M/c`` reaches ``gate``.
    """
    a = _array(M)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix_log needs a square matrix")
    if n == 0:
        return SeriesLog(a.copy(), 0, 0.0, 0.0, 1)
    c = complex(np.trace(a)) / n
    if c == 0:
        raise ConvergenceError("zero mean diagonal; no scalar shift available")
    if c.imag == 0 and c.real > 0:
        c = c.real
    X = np.eye(n) - a / c
    rho = spectral_radius_estimate(X)
    if rho >= gate:
        raise ConvergenceError(f"spectral radius of I - M/c is about {rho:.3f} >= {gate}")

    log_c = cmath.log(c)
    if isinstance(c, float) or log_c.imag == 0:
        log_c = log_c.real
    out = np.eye(n, dtype=np.result_type(X, type(log_c))) * log_c
    power = X.copy()
    scale = max(1.0, abs(log_c))
    prev_norm = np.linalg.norm(power)
    tail = math.inf
    for p in range(1, MAX_SERIES_TERMS + 1):
        out = out - power / p
        norm = np.linalg.norm(power)
        ratio = max(rho, norm / prev_norm if prev_norm > 0 else 0.0)
        prev_norm = norm
        tail = norm * ratio / ((p + 1) * (1 - ratio)) if ratio < 1 else math.inf
        scale = max(scale, np.linalg.norm(out) / math.sqrt(n))
        if tail <= tol * scale or norm == 0:
            return SeriesLog(out, p, tail, rho, c)
        power = power @ X
    raise ConvergenceError(f"series did not reach tol={tol} in {MAX_SERIES_TERMS} terms (tail {tail:.3g})")


def matrix_log(M, tol: float = 1e-14):
    """Principal matrix logarithm; returns the same kind (OpMatrix or array) as ``M``."""
    res = mercator_log(M, tol)
    if isinstance(M, OpMatrix):
        return OpMatrix(res.matrix, M.truncated)
    return res.matrix


@dataclass(frozen=True)
class LogBlockResult:
    block: OpMatrix
    terms: int
    tail: float
    buffer: int
    drift: float
    full: OpMatrix


def _central(a: np.ndarray, n: int) -> np.ndarray:
    N = (a.shape[0] - 1) // 2
    return a[N - n : N + n + 1, N - n : N + n + 1]


def default_buffer(b0: TrigPoly, bsub: TrigPoly) -> int:
    band = max(b0.effective_degree(1e-16), bsub.effective_degree(1e-16))
    return max(32, 4 * band)


def central_log_block(
    b0: TrigPoly,
    bsub: TrigPoly,
    n: int,
    buffer: int | None = None,
    tol: float = 1e-14,
    drift_check: bool = True,
) -> LogBlockResult:
    """Central ``(2n+1)`` block of ``log B_N``, ``N = n + buffer``.

    ``log`` does not commute with truncation; the block is read far from the
    truncation edge, and ``drift`` is the largest entry change when the buffer
    grows by half.
    """
    if buffer is None:
        buffer = default_buffer(b0, bsub)
    N = n + buffer
    res = mercator_log(build_psdo(b0, bsub, N), tol)
    block = _central(res.matrix, n)
    drift = 0.0
    if drift_check:
        bigger = buffer + max(1, buffer // 2)
        res2 = mercator_log(build_psdo(b0, bsub, n + bigger), tol)
        drift = float(np.max(np.abs(_central(res2.matrix, n) - block))) if block.size else 0.0
    return LogBlockResult(OpMatrix(block), res.terms, res.tail, buffer, drift, OpMatrix(res.matrix))
