"""The ``W[log]`` and ``Phi[log]`` kernels of the third-order coefficient.

The bracket under the ``Phi`` integral is the second divided difference of
``g(u) = log(1 - u) / u`` at the nodes ``(u1, u2, y3)``.  Where two nodes nearly
coincide the three-term formula cancels catastrophically, so there we switch
to the integral representation (divided differences of ``1/(1 - t u)``)::

    g[x0, x1, x2] = -integral_0^1 t^2 / ((1 - t x0)(1 - t x1)(1 - t x2)) dt,

which has no removable singularities at all.
"""

from __future__ import annotations

import math

import numpy as np

NEAR_NODES = 0.05
PATCH_ORDER = 64
MAX_ORDER = 512


class QuadratureError(ArithmeticError):
    pass


def w_log(y1: float, y2: float) -> float:
    """``W[log](y1, y2) = -1/2 log(y1) log(y2)``."""
    if y1 <= 0 or y2 <= 0:
        raise ValueError("W[log] needs y1, y2 > 0")
    return -0.5 * math.log(y1) * math.log(y2)


def _g(u: np.ndarray) -> np.ndarray:
    small = np.abs(u) < 1e-8
    safe = np.where(small, 0.5, u)
    return np.where(small, -1.0 - u / 2, np.log1p(-safe) / safe)


_T_NODES, _T_WEIGHTS = np.polynomial.legendre.leggauss(PATCH_ORDER)
_T_NODES = 0.5 * (_T_NODES + 1)
_T_WEIGHTS = 0.5 * _T_WEIGHTS


def _dd_patch(x0, x1, x2) -> np.ndarray:
    t = _T_NODES
    den = (1 - np.multiply.outer(x0, t)) * (1 - np.multiply.outer(x1, t)) * (1 - np.multiply.outer(x2, t))
    return -(t**2 / den) @ _T_WEIGHTS


def divided_difference(x0, x1, x2) -> np.ndarray:
    """``g[x0, x1, x2]`` for ``g(u) = log(1-u)/u``, all nodes ``< 1``."""
    x0, x1, x2 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (x0, x1, x2)))
    gap = np.minimum(np.minimum(np.abs(x0 - x1), np.abs(x0 - x2)), np.abs(x1 - x2))
    near = gap < NEAR_NODES
    out = np.empty(x0.shape)
    far = ~near
    if far.any():
        a, b, c = x0[far], x1[far], x2[far]
        out[far] = _g(a) / ((a - b) * (a - c)) + _g(b) / ((b - a) * (b - c)) + _g(c) / ((c - a) * (c - b))
    if near.any():
        out[near] = _dd_patch(x0[near], x1[near], x2[near])
    return out


def _gauss(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1), half * w


def _adaptive(estimate, tol: float) -> float:
    """Double the Gauss order until successive estimates agree to ``tol``."""
    order = 8
    prev = estimate(order)
    change = math.inf
    while order < MAX_ORDER:
        order *= 2
        cur = estimate(order)
        change = abs(cur - prev)
        if change <= tol:
            return cur
        prev = cur
    raise QuadratureError(f"no convergence to tol={tol:g} by Gauss order {MAX_ORDER} (last change {change:.3g})")


def phi_log(y1: float, y2: float, y3: float, tol: float = 1e-13, reading: str = "y3") -> float:
    """``Phi[log](y1, y2, y3)`` for ``y1, y2, y3 < 1``.

    ``reading="y3"`` (default) evaluates::

        y3 * int_0^y1 int_0^y2 g[u1, u2, y3] du2 du1

    ``reading="u3"`` treats the third node as a further integration variable,
    ``int_0^y1 int_0^y2 int_0^y3 g[u1, u2, u3] du3 du2 du1``.
    """
    if max(y1, y2, y3) >= 1:
        raise ValueError("Phi[log] is defined for y1, y2, y3 < 1")
    if reading not in ("y3", "u3"):
        raise ValueError(f"unknown reading {reading!r}")
    if y1 == 0 or y2 == 0 or y3 == 0:
        return 0.0

    if reading == "y3":

        def estimate(order):
            u1, w1 = _gauss(0.0, y1, order)
            u2, w2 = _gauss(0.0, y2, order)
            vals = divided_difference(u1[:, None], u2[None, :], y3)
            return y3 * float(w1 @ vals @ w2)

    else:

        def estimate(order):
            order = min(order, 128)
            u1, w1 = _gauss(0.0, y1, order)
            u2, w2 = _gauss(0.0, y2, order)
            u3, w3 = _gauss(0.0, y3, order)
            vals = divided_difference(u1[:, None, None], u2[None, :, None], u3[None, None, :])
            return float(np.einsum("ijk,i,j,k->", vals, w1, w2, w3))

    return _adaptive(estimate, tol)
