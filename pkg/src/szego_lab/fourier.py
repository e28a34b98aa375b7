"""Trigonometric data on the circle and the Szegő pairing.

Fourier coefficients use the normalized measure ``dx / 2pi``::

    f_k = (1/2pi) * integral_0^{2pi} f(x) exp(-i k x) dx.

Symbols are stored as finite coefficient tables (:class:`TrigPoly`).  Derived
quantities (``log b``, ``b_sub / b_0``, ``exp(log b_0)``) are computed by
sampling on an equispaced grid, acting pointwise, and transforming back with the
FFT; the trapezoid rule is spectrally accurate for smooth periodic data.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

TAIL_WARN = 1e-10
# Auto-truncation stops once coefficients are below this fraction of the largest.
AUTO_REL_CUTOFF = 1e-16


class DomainError(ValueError):
    """Pointwise operation applied outside its domain (e.g. log of b <= 0)."""


class TailWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TrigPoly:
    """Finite Fourier coefficient table ``{k: c_k}``, ``|k| <= degree``.

    ``coeffs[k + degree]`` holds ``c_k``.  ``tail`` records the magnitude of the
    largest discarded coefficient when the table came from truncating a
    non-polynomial function (0 for exact data).
    """

    coeffs: np.ndarray
    tail: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).copy()
        if c.ndim != 1 or len(c) % 2 != 1:
            raise ValueError("coefficient table must have odd length 2K+1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dict(cls, table: dict[int, complex], degree: int | None = None) -> "TrigPoly":
        K = max((abs(k) for k in table), default=0) if degree is None else degree
        c = np.zeros(2 * K + 1, dtype=complex)
        for k, v in table.items():
            if abs(k) > K:
                raise ValueError(f"coefficient index {k} exceeds degree {K}")
            c[k + K] += v
        return cls(c)

    @classmethod
    def constant(cls, value: complex) -> "TrigPoly":
        return cls(np.array([value], dtype=complex))

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls.constant(0.0)

    @property
    def degree(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coeff(self, k: int) -> complex:
        K = self.degree
        return complex(self.coeffs[k + K]) if abs(k) <= K else 0j

    def to_dict(self, atol: float = 0.0) -> dict[int, complex]:
        K = self.degree
        return {k - K: complex(v) for k, v in enumerate(self.coeffs) if abs(v) > atol}

    def effective_degree(self, atol: float = 0.0) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > atol)[0]
        if len(nz) == 0:
            return 0
        K = self.degree
        return int(max(abs(nz[0] - K), abs(nz[-1] - K)))

    def padded(self, K: int) -> np.ndarray:
        """Coefficients as a length ``2K+1`` array (zero padded or cut)."""
        out = np.zeros(2 * K + 1, dtype=complex)
        d = self.degree
        lo = min(d, K)
        out[K - lo : K + lo + 1] = self.coeffs[d - lo : d + lo + 1]
        return out

    def is_real_valued(self, atol: float = 1e-13) -> bool:
        return bool(np.allclose(self.coeffs, np.conj(self.coeffs[::-1]), rtol=0, atol=atol))

    def mean(self) -> complex:
        return self.coeff(0)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        K = max(self.degree, other.degree)
        return TrigPoly(self.padded(K) + other.padded(K), tail=self.tail + other.tail)

    def __mul__(self, scalar) -> "TrigPoly":
        if isinstance(scalar, TrigPoly):
            return trig_product(self, scalar)
        return TrigPoly(self.coeffs * scalar, tail=abs(scalar) * self.tail)

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPoly":
        return self * -1

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def samples(self, N: int) -> "GridSamples":
        """Values at ``x_j = 2 pi j / N``."""
        if N <= 2 * self.degree:
            raise ValueError(f"grid N={N} aliases a degree-{self.degree} polynomial")
        spectrum = np.zeros(N, dtype=complex)
        K = self.degree
        for k in range(-K, K + 1):
            spectrum[k % N] += self.coeffs[k + K]
        return GridSamples(np.fft.ifft(spectrum) * N)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(-self.degree, self.degree + 1)
        return np.exp(1j * np.multiply.outer(x, k)) @ self.coeffs


@dataclass(frozen=True)
class GridSamples:
    """Complex samples on the equispaced grid ``x_j = 2 pi j / N``."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        N = len(v)
        if N < 4 or N & (N - 1):
            raise ValueError(f"grid size must be a power of two >= 4, got {N}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return len(self.values)

    @staticmethod
    def nodes(N: int) -> np.ndarray:
        return 2 * np.pi * np.arange(N) / N

    @classmethod
    def from_function(cls, f, N: int) -> "GridSamples":
        return cls(f(cls.nodes(N)))


def default_grid(K: int) -> int:
    N = max(256, 8 * K)
    return 1 << (N - 1).bit_length()


def dft_coeffs(s: GridSamples, K: int) -> TrigPoly:
    """Trapezoid-rule Fourier coefficients ``c_k``, ``|k| <= K``."""
    N = s.N
    if not 0 <= K < N // 2:
        raise ValueError(f"K={K} too large for grid N={N} (need K < N/2)")
    F = np.fft.fft(s.values) / N
    k = np.arange(-K, K + 1)
    return TrigPoly(F[k % N])


def _auto_coeffs(s: GridSamples, K: int | None, min_K: int) -> TrigPoly:
    """Coefficients with a reported tail; ``K=None`` truncates automatically."""
    N = s.N
    F = np.fft.fft(s.values) / N
    mags = np.abs(F)
    half = N // 2 - 1
    if K is None:
        scale = mags.max() if mags.size else 0.0
        K = min_K
        while K < half and max(mags[(K + 1) % N], mags[-(K + 1) % N]) > AUTO_REL_CUTOFF * scale:
            K += 1
    K = min(K, half)
    k = np.arange(-K, K + 1)
    tail = float(max(mags[(K + 1) % N], mags[-(K + 1) % N])) if K + 1 <= N // 2 else 0.0
    if tail > TAIL_WARN:
        warnings.warn(f"truncation at degree {K} leaves a coefficient of size {tail:.3g}", TailWarning, stacklevel=3)
    return TrigPoly(F[k % N], tail=tail)


def _pointwise(f: TrigPoly, op, K: int | None, N: int | None, *others: TrigPoly) -> TrigPoly:
    deg = max([f.degree] + [g.degree for g in others])
    target = 4 * deg if K is None else K
    if N is None:
        N = default_grid(max(target, deg))
    vals = op(f.samples(N).values, *(g.samples(N).values for g in others))
    return _auto_coeffs(GridSamples(vals), K, min(target, N // 2 - 1))


def _require_positive(values: np.ndarray, what: str) -> None:
    if np.max(np.abs(values.imag)) > 1e-12 * max(1.0, np.max(np.abs(values))):
        raise DomainError(f"{what} is not real-valued on the grid")
    if np.min(values.real) <= 0:
        raise DomainError(f"{what} has a nonpositive sample (min {np.min(values.real):.3g})")


def trig_log(b: TrigPoly, K: int | None = None, N: int | None = None) -> TrigPoly:
    """Fourier coefficients of ``log b`` for a real, strictly positive ``b``."""

    def op(v):
        _require_positive(v, "b")
        return np.log(v.real)

    return _pointwise(b, op, K, N)


def trig_exp(f: TrigPoly, K: int | None = None, N: int | None = None) -> TrigPoly:
    """Coefficients of ``exp f``; materializes ``b_0`` from ``log b_0``."""
    return _pointwise(f, np.exp, K, N)


def trig_quotient(f: TrigPoly, g: TrigPoly, K: int | None = None, N: int | None = None) -> TrigPoly:
    """Coefficients of ``f / g`` with ``g`` real and strictly positive."""

    def op(fv, gv):
        _require_positive(gv, "denominator")
        return fv / gv.real

    return _pointwise(f, op, K, N, g)


def trig_product(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Exact product of two coefficient tables (discrete convolution)."""
    return TrigPoly(np.convolve(f.coeffs, g.coeffs), tail=f.tail + g.tail)


def szego_pairing(f: TrigPoly, g: TrigPoly) -> complex:
    """``sum_{k >= 1} k f_k g_{-k}``."""
    K = min(f.degree, g.degree)
    return complex(sum(k * f.coeff(k) * g.coeff(-k) for k in range(1, K + 1)))
