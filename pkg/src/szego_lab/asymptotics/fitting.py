"""Least-squares extraction of asymptotic-expansion coefficients."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coefficients import basis_function

DEFAULT_BASIS = ("n", "log n", "1", "1/n")


class RankDeficientFit(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExpansionFit:
    labels: tuple[str, ...]
    coefficients: dict[str, float]
    ns: np.ndarray
    residuals: np.ndarray
    max_residual_n2: float
    condition: float

    def __getitem__(self, label: str) -> float:
        return self.coefficients[label]


def design_matrix(ns, basis) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    return np.stack([basis_function(label)(ns) for label in basis], axis=1)


def fit_expansion(ns, values, basis=DEFAULT_BASIS) -> ExpansionFit:
    """Fit ``values[i] ~ sum_b c_b * b(ns[i])`` by column-scaled least squares.

    ``residuals`` are ``values - fit``; ``max_residual_n2`` is the largest
    ``|residual| * n^2`` and ``condition`` the 2-norm condition number of the
    column-scaled design.
    """
    basis = tuple(basis)
    ns = np.asarray(ns, dtype=float)
    v = np.asarray(values)
    if np.iscomplexobj(v):
        v = v.real
    if len(ns) != len(v):
        raise ValueError("ns and values differ in length")
    if len(ns) < len(basis):
        raise RankDeficientFit(f"{len(ns)} points cannot determine {len(basis)} coefficients")
    if len(ns) < 2 * len(basis):
        warnings.warn(f"only {len(ns)} points for {len(basis)} basis functions", stacklevel=2)
    A = design_matrix(ns, basis)
    col = np.linalg.norm(A, axis=0)
    if np.any(col == 0):
        raise RankDeficientFit("a basis column vanishes on the grid")
    As = A / col
    sol, _, rank, sv = np.linalg.lstsq(As, v, rcond=None)
    if rank < len(basis):
        raise RankDeficientFit(f"design rank {rank} < {len(basis)}")
    cond = float(sv[0] / sv[-1])
    coeffs = sol / col
    resid = v - A @ coeffs
    return ExpansionFit(
        basis,
        {b: float(c) for b, c in zip(basis, coeffs)},
        ns,
        resid,
        float(np.max(np.abs(resid) * ns**2)),
        cond,
    )
