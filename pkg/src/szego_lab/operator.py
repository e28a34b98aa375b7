"""Truncated matrix model of an order-zero operator on the circle.

Matrices act on ``span{e^{ikx} : |k| <= N}`` and are indexed by ``k`` in
``-N..N`` (row/column ``k`` sits at array position ``k + N``).  The operator
``A`` with spectrum ``{0, 1, 2, ...}`` is ``A e^{ikx} = |k| e^{ikx}``, so its
eigenprojection ``pi_p`` picks the modes ``+-p`` and ``P_n = pi_0 + ... + pi_n``
is the projection onto ``|k| <= n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fourier import TrigPoly


class WindowError(ValueError):
    """Requested index window does not fit inside the truncation."""


@dataclass(frozen=True)
class OpMatrix:
    """Dense square matrix on the symmetric index range ``-N..N``."""

    data: np.ndarray
    truncated: bool = False

    def __post_init__(self):
        a = np.array(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2 != 1:
            raise ValueError(f"expected a (2N+1)x(2N+1) matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def N(self) -> int:
        return (self.data.shape[0] - 1) // 2

    def __getitem__(self, rc):
        r, c = rc
        N = self.N
        if abs(r) > N or abs(c) > N:
            raise IndexError(f"({r}, {c}) outside -{N}..{N}")
        return self.data[r + N, c + N]

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix(self.data + other.data, self.truncated or other.truncated)

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix(self.data @ other.data, self.truncated or other.truncated)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    @classmethod
    def identity(cls, N: int) -> "OpMatrix":
        return cls(np.eye(2 * N + 1))


def mode_indices(N: int) -> np.ndarray:
    return np.arange(-N, N + 1)


def build_toeplitz(b: TrigPoly, N: int) -> OpMatrix:
    """``T(b)``: entry ``(r, c) = b_{r-c}``.

    The ``truncated`` flag is set when ``N`` is below the symbol degree.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    k = mode_indices(N)
    diff = k[:, None] - k[None, :]
    table = b.padded(2 * N)
    data = table[diff + 2 * N]
    if np.all(data.imag == 0):
        data = data.real
    return OpMatrix(data, truncated=N < b.degree)


def smoothing_weights(N: int) -> np.ndarray:
    k = np.abs(mode_indices(N)).astype(float)
    out = np.zeros_like(k)
    out[k > 0] = 1.0 / k[k > 0]
    return out


def build_smoothing_diag(N: int) -> OpMatrix:
    """``D = diag(..., 1/3, 1/2, 1, 0, 1, 1/2, 1/3, ...)``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return OpMatrix(np.diag(smoothing_weights(N)))


def build_psdo(b0: TrigPoly, bsub: TrigPoly, N: int) -> OpMatrix:
    """``T(b0) + T(bsub) D``, the matrix model with symbols ``b0`` and ``bsub/|xi|``."""
    t0 = build_toeplitz(b0, N)
    ts = build_toeplitz(bsub, N)
    # right-multiplying by a diagonal scales columns
    return OpMatrix(t0.data + ts.data * smoothing_weights(N)[None, :], t0.truncated or ts.truncated)


def block_shift(N: int) -> np.ndarray:
    """Matrix of ``|r| - |c|``, the ``A``-eigenvalue shift of each entry."""
    a = np.abs(mode_indices(N))
    return a[:, None] - a[None, :]


def fourier_block(G: OpMatrix, j: int) -> OpMatrix:
    """``G_j``: the part of ``G`` mapping eigenspace ``p`` of ``A`` to ``p + j``."""
    if abs(j) > 2 * G.N:
        raise WindowError(f"|j| = {abs(j)} exceeds 2N = {2 * G.N}")
    mask = block_shift(G.N) == j
    return OpMatrix(np.where(mask, G.data, 0), G.truncated)


def nonzero_blocks(G: OpMatrix) -> dict[int, OpMatrix]:
    """All nonvanishing Fourier blocks of ``G`` keyed by shift."""
    shift = block_shift(G.N)
    present = np.unique(shift[G.data != 0])
    return {int(j): fourier_block(G, int(j)) for j in present}


def projection(N: int, n: int) -> OpMatrix:
    """``P_n`` inside the ``-N..N`` space; ``P_n = 0`` for ``n < 0``, ``I`` for ``n >= N``."""
    return OpMatrix(np.diag((np.abs(mode_indices(N)) <= n).astype(float)))


def verify_commutation(G: OpMatrix, j: int, n: int, N: int | None = None) -> bool:
    """Check ``G_j P_n == P_{n+j} G_j`` entrywise (exact comparison)."""
    N = G.N if N is None else N
    if N != G.N:
        raise ValueError(f"N={N} does not match the matrix half-width {G.N}")
    if n < 0 or n + abs(j) > N:
        raise WindowError(f"window n + |j| = {n + abs(j)} exceeds N = {N}")
    Gj = fourier_block(G, j).data
    left = Gj * (np.abs(mode_indices(N)) <= n)[None, :]
    right = Gj * (np.abs(mode_indices(N)) <= n + j)[:, None]
    return bool(np.array_equal(left, right))


def pi_trace(G: OpMatrix, k: int) -> complex:
    """``Tr(pi_k G)``: ``G[k,k] + G[-k,-k]`` for ``k >= 1``, ``G[0,0]`` for ``k = 0``."""
    if k < 0:
        return 0j
    if k > G.N:
        raise WindowError(f"k = {k} exceeds N = {G.N}")
    if k == 0:
        return complex(G[0, 0])
    return complex(G[k, k] + G[-k, -k])


def pi_traces(G: OpMatrix) -> np.ndarray:
    """Vector of ``Tr(pi_k G)`` for ``k = 0..N``."""
    d = np.diagonal(G.data)
    N = G.N
    out = d[N:].astype(complex)
    out[1:] += d[:N][::-1]
    return out


def truncate(G: OpMatrix, n: int) -> OpMatrix:
    """``P_n G P_n`` as a ``(2n+1) x (2n+1)`` block."""
    N = G.N
    if not 0 <= n <= N:
        raise WindowError(f"n = {n} outside 0..{N}")
    return OpMatrix(G.data[N - n : N + n + 1, N - n : N + n + 1], G.truncated)


def min_partial_sum(js) -> int:
    """``min(0, j_1, j_1 + j_2, ..., j_1 + ... + j_m)``."""
    best = s = 0
    for j in js:
        s += j
        best = min(best, s)
    return best


def trace_identity_sides(b0: TrigPoly, bsub: TrigPoly, m: int, n: int, N: int) -> tuple[complex, complex]:
    """Both sides of the projector-moving trace identity for ``B = T(b0) + T(bsub) D``.

    Left: ``Tr (P_n B P_n)^m - Tr P_n B^m P_n``.  Right::

        - sum_{j_1+...+j_m = 0} sum_{k = M(j)+1}^{0} Tr(pi_{n+k} B_{j_1} ... B_{j_m})

    with ``M(j) = min(0, j_1, j_1 + j_2, ...)``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= n <= N:
        raise WindowError(f"n = {n} outside 0..{N}")
    B = build_psdo(b0, bsub, N)
    Pn = truncate(B, n).data
    left = np.trace(np.linalg.matrix_power(Pn, m)) - np.trace(truncate(OpMatrix(np.linalg.matrix_power(B.data, m)), n).data)

    blocks = nonzero_blocks(B)
    shifts = sorted(blocks)
    right = 0j
    for js in itertools.product(shifts, repeat=m):
        if sum(js) != 0:
            continue
        low = min_partial_sum(js)
        if low == 0:
            continue
        prod = blocks[js[0]].data
        for j in js[1:]:
            prod = prod @ blocks[j].data
        X = OpMatrix(prod)
        right -= sum(pi_trace(X, n + k) for k in range(low + 1, 1))
    return complex(left), complex(right)
