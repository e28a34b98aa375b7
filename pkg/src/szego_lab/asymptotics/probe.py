"""Constant term of ``Tr P_n log(I - D^(1/2) T(c1) D^(1/2)) P_n``.

The determinant of ``P_n (T(b0) + T(c1) D) P_n`` factors through
``I - X`` with ``X = D^(1/2) C1 D^(1/2)`` once the Toeplitz part is divided out,
so the constant coefficient of this trace isolates how the subprincipal
symbol enters the constant of the determinant expansion.
"""

from __future__ import annotations

import numpy as np

from ..fourier import TrigPoly
from ..matfunc import SPECTRAL_GATE, ConvergenceError, mercator_log, spectral_radius_estimate
from ..operator import build_toeplitz, smoothing_weights
from .fitting import DEFAULT_BASIS, ExpansionFit, fit_expansion

DEFAULT_PROBE_BUFFER = 64


def probe_matrix(c1: TrigPoly, N: int) -> np.ndarray:
    """``X = D^(1/2) T(c1) D^(1/2)`` on modes ``-N..N``."""
    h = np.sqrt(smoothing_weights(N))
    return h[:, None] * build_toeplitz(c1, N).data * h[None, :]


def probe_partial_sums(c1: TrigPoly, n_grid, buffer: int = DEFAULT_PROBE_BUFFER, tol: float = 1e-14) -> np.ndarray:
    """``Tr P_n log(I - X) P_n`` for each ``n`` in ``n_grid``, one logarithm at ``N = max(n) + buffer``."""
    ns = np.asarray(n_grid, dtype=int)
    if ns.size == 0 or np.any(np.diff(ns) <= 0) or ns[0] < 1:
        raise ValueError("n_grid must be a strictly increasing list of positive integers")
    N = int(ns[-1]) + int(buffer)
    X = probe_matrix(c1, N)
    rho = spectral_radius_estimate(X)
    if rho >= SPECTRAL_GATE:
        raise ConvergenceError(f"spectral radius of D^(1/2) C1 D^(1/2) is about {rho:.3f} >= {SPECTRAL_GATE}")
    diag = np.diagonal(mercator_log(np.eye(2 * N + 1) - X, tol).matrix)
    if np.iscomplexobj(diag):
        diag = diag.real
    # cumulative sums over |k| <= n, centred on the k = 0 entry
    folded = diag[N:].copy()
    folded[1:] += diag[:N][::-1]
    cumulative = np.cumsum(folded)
    return cumulative[ns]


def constant_term_fit(
    c1: TrigPoly, n_grid, buffer: int = DEFAULT_PROBE_BUFFER, basis=DEFAULT_BASIS, tol: float = 1e-14
) -> ExpansionFit:
    return fit_expansion(n_grid, probe_partial_sums(c1, n_grid, buffer, tol), basis)


def constant_term_probe(c1: TrigPoly, n_grid, buffer: int = DEFAULT_PROBE_BUFFER, tol: float = 1e-14) -> float:
    """Fitted constant coefficient of ``Tr P_n log(I - D^(1/2) T(c1) D^(1/2)) P_n``.

    Raises :class:`ConvergenceError` when ``X`` fails the spectral gate.
    """
    return constant_term_fit(c1, n_grid, buffer, tol=tol)["1"]
