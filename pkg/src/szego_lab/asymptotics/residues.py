"""Residues from eigenspace traces, and the deviation series ``eps_k`` / ``C``.

For an order-zero operator ``G`` the traces ``t_k = Tr(pi_k G)`` admit an
expansion ``t_k ~ sum_l k^(d-1-l) R_l``.  The residues are recovered by least
squares; ``eps_k`` is what the truncated expansion misses and ``C`` its sum
(plus the zero mode, which carries the ``k = 0`` diagonal entry on the circle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_CONDITION = 1e12


class IllConditionedFit(ArithmeticError):
    pass


class NonDecayingSeries(ArithmeticError):
    """Deviations do not decay fast enough for their sum to converge."""


@dataclass(frozen=True)
class ResidueTable:
    d: int
    values: tuple[float, ...]
    residual: float
    condition: float = 1.0

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("residue table needs at least R_0")

    def __getitem__(self, l: int) -> float:
        return self.values[l] if 0 <= l < len(self.values) else 0.0

    @property
    def L(self) -> int:
        return len(self.values) - 1


def _real(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(x.real), initial=0.0)):
            raise ValueError("traces have a non-negligible imaginary part")
        return x.real
    return x.astype(float)


def residues_fit(ks, traces, d: int, L: int) -> ResidueTable:
    """Least-squares fit of ``Tr(pi_k G)`` against ``{k^(d-1-l)}_{l=0..L}``."""
    ks = np.asarray(ks, dtype=float)
    t = _real(traces)
    if len(ks) != len(t):
        raise ValueError("ks and traces differ in length")
    if len(set(ks.tolist())) != len(ks):
        raise ValueError("sample points must be distinct")
    if len(ks) < 2 * (L + 1):
        raise ValueError(f"need at least {2 * (L + 1)} samples for L={L}, got {len(ks)}")
    A = np.stack([ks ** (d - 1 - l) for l in range(L + 1)], axis=1)
    col = np.linalg.norm(A, axis=0)
    As = A / col
    cond = float(np.linalg.cond(As))
    if cond > MAX_CONDITION:
        raise IllConditionedFit(f"residue design condition number {cond:.3g} > {MAX_CONDITION:g}")
    sol, *_ = np.linalg.lstsq(As, t, rcond=None)
    R = sol / col
    resid = float(np.max(np.abs(A @ R - t)))
    return ResidueTable(d, tuple(float(r) for r in R), resid, cond)


@dataclass(frozen=True)
class EpsilonSeries:
    ks: np.ndarray
    eps: np.ndarray
    zero_mode: float
    C: float
    k_max: int
    tail_bound: float
    decade_ratio: float


def expansion_values(residues: ResidueTable, ks) -> np.ndarray:
    ks = np.asarray(ks, dtype=float)
    return sum(residues[l] * ks ** (residues.d - 1 - l) for l in range(residues.L + 1))


def epsilon_C(ks, traces, residues: ResidueTable, zero_mode: float, noise_floor: float = 1e-13) -> EpsilonSeries:
    """``eps_k = Tr(pi_k G) - sum_l k^(d-1-l) R_l`` and ``C = zero_mode + sum eps_k``.

    ``ks`` must be ``1..k_max``.  The tail beyond ``k_max`` is bounded decade
    by decade: with ``q`` the ratio of the largest ``|eps|`` on the last decade
    ``(k_max/10, k_max]`` to that on the one before, decade ``i`` past ``k_max``
    holds at most ``9 k_max 10^(i-1)`` terms of size ``q^i max|eps|``, a
    geometric series that converges iff ``10 q < 1``.  Deviations already at
    the noise floor are summed at their face value.
    """
    ks = np.asarray(ks)
    k_max = int(ks[-1])
    if not np.array_equal(ks, np.arange(1, k_max + 1)):
        raise ValueError("epsilon_C needs samples at k = 1..k_max")
    if k_max < 10:
        raise ValueError("need k_max >= 10 to compare two decades")
    t = _real(traces)
    eps = t - expansion_values(residues, ks)
    scale = max(1.0, float(np.max(np.abs(t))))
    last = float(np.max(np.abs(eps[ks > k_max // 10])))
    prev = float(np.max(np.abs(eps[(ks > k_max // 100) & (ks <= k_max // 10)])))
    q = last / prev if prev > 0 else 0.0
    if last <= noise_floor * scale:
        tail = 9 * k_max * last
    elif 10 * q < 1:
        tail = 9 * k_max * last * q / (1 - 10 * q)
    else:
        raise NonDecayingSeries(
            f"eps_k decays by only {q:.3g} per decade (max {last:.3g} on the last decade); "
            "the residue series assumption looks violated"
        )
    C = zero_mode + float(np.sum(eps))
    return EpsilonSeries(ks, eps, zero_mode, C, k_max, tail, q)
