"""Predicted expansion coefficients of ``Tr P_n G P_n`` and ``log det P_n B P_n``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fourier import TrigPoly, szego_pairing, trig_exp, trig_product, trig_quotient
from .residues import ResidueTable
from .special import euler_gamma, zeta_int


def power_label(p: int) -> str:
    if p == 0:
        return "1"
    if p == 1:
        return "n"
    if p == -1:
        return "1/n"
    if p < 0:
        return f"1/n^{-p}"
    return f"n^{p}"


@dataclass(frozen=True)
class PredictedCoefficients:
    """Coefficients keyed by basis label (``"n^2"``, ``"n"``, ``"log n"``, ``"1"``, ``"1/n"``)."""

    values: dict[str, float]
    zeta_tail: float = 0.0
    notes: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, label: str) -> float:
        return self.values[label]

    def labels(self) -> list[str]:
        return list(self.values)

    def evaluate(self, n) -> np.ndarray:
        """Value of the truncated expansion at ``n`` (unknown labels are an error)."""
        n = np.asarray(n, dtype=float)
        total = np.zeros_like(n)
        for label, c in self.values.items():
            total = total + c * basis_function(label)(n)
        return total


def basis_function(label: str):
    if label == "1":
        return lambda n: np.ones_like(np.asarray(n, dtype=float))
    if label == "log n":
        return np.log
    if label == "n":
        return lambda n: np.asarray(n, dtype=float)
    if label.startswith("1/n"):
        p = 1 if label == "1/n" else int(label[4:])
        return lambda n, p=p: np.asarray(n, dtype=float) ** -p
    if label.startswith("n^"):
        p = int(label[2:])
        return lambda n, p=p: np.asarray(n, dtype=float) ** p
    raise ValueError(f"unknown basis label {label!r}")


def _zeta_series(residues: ResidueTable, offset: int) -> tuple[float, float]:
    """``sum_{l>=2} zeta(l) R_{l+offset}`` over the table, and the last term's size."""
    terms = [zeta_int(l) * residues[l + offset] for l in range(2, residues.L - offset + 1)]
    return float(sum(terms)), (abs(terms[-1]) if terms else 0.0)


def prop3_coeffs(d: int, residues: ResidueTable, C: float = 0.0) -> PredictedCoefficients:
    """Coefficients of ``Tr P_n G P_n = sum_{k<=n} Tr(pi_k G)`` from residues and ``C``.

    The zeta series in the constant term is cut at the end of the residue
    table; ``zeta_tail`` is the size of its last retained term plus the fit
    residual, a working error bar rather than a bound.
    """
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    R = residues
    gamma = euler_gamma()
    if d == 1:
        zeta_sum, last = _zeta_series(R, 0)
        values = {
            "n": R[0],
            "log n": R[1],
            "1": C + gamma * R[1] + zeta_sum,
            "1/n": 0.5 * R[1] - R[2],
        }
    elif d == 2:
        zeta_sum, last = _zeta_series(R, 1)
        values = {
            "n^2": 0.5 * R[0],
            "n": 0.5 * R[0] + R[1],
            "log n": R[2],
            "1": C + gamma * R[2] + zeta_sum,
        }
    else:
        last = 0.0
        values = {
            power_label(d): R[0] / d,
            power_label(d - 1): 0.5 * R[0] + R[1] / (d - 1),
            power_label(d - 2): (d - 1) / 12 * R[0] + 0.5 * R[1] + R[2] / (d - 2),
            "log n": R[d],
        }
    return PredictedCoefficients(values, zeta_tail=last + R.residual)


def predicted_cor4(
    log_b0: TrigPoly,
    bsub: TrigPoly,
    C_logB: float,
    residues_logB: ResidueTable,
    b0: TrigPoly | None = None,
) -> PredictedCoefficients:
    """Four-term prediction for ``log det P_n B P_n``, ``B = T(b0) + T(bsub) D``.

    ``b0 = exp(log_b0)``; the quotient ``q = bsub / b0`` is formed on a grid.
    Returns labels ``n``, ``log n``, ``1``, ``1/n``::

        n     : 2 (log b0)_0
        log n : 2 q_0
        1     : sum k |(log b0)_k|^2 + C(log B) + gamma R_1 + sum zeta(l) R_l
        1/n   : sum k (log b0)_k q_{-k} + mean(q + q^2)

    The residue-based alternatives (``R_0``, ``R_1``, ``R_1/2 - R_2``) are kept in
    ``notes`` for comparison.
    """
    if b0 is None:
        b0 = trig_exp(log_b0)
    q = trig_quotient(bsub, b0)
    q_sq = trig_product(q, q)
    const = prop3_coeffs(1, residues_logB, C_logB)
    values = {
        "n": 2 * log_b0.mean().real,
        "log n": 2 * q.mean().real,
        "1": szego_pairing(log_b0, log_b0).real + const["1"],
        "1/n": szego_pairing(log_b0, q).real + (q.mean() + q_sq.mean()).real,
    }
    notes = {
        "residue n": const["n"],
        "residue log n": const["log n"],
        "residue 1/n": const["1/n"],
        "pairing": szego_pairing(log_b0, log_b0).real,
        "pairing 1/n": szego_pairing(log_b0, q).real,
    }
    return PredictedCoefficients(values, zeta_tail=const.zeta_tail, notes=notes)
