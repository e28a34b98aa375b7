"""Riemann zeta at integers and Euler's constant."""

from __future__ import annotations

import math
from fractions import Fraction

# 30 significant digits; cross-checked against a harmonic-sum extrapolation in the tests.
EULER_GAMMA_STR = "0.577215664901532860606512090082"
EULER_GAMMA = float(EULER_GAMMA_STR)

# B_2, B_4, ..., B_16
_BERNOULLI_EVEN = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
]


def euler_gamma() -> float:
    return EULER_GAMMA


def zeta_int(l: int, cutoff: int = 16) -> float:
    """``zeta(l)`` for an integer ``l >= 2``.

    Direct summation of ``k**-l`` for ``k < cutoff`` plus the Euler--Maclaurin
    tail at ``cutoff``; with the default cutoff the correction terms through
    ``B_16`` bring the error below 1e-16 relative for every ``l >= 2``.
    """
    if int(l) != l or l < 2:
        raise ValueError(f"zeta_int needs an integer l >= 2, got {l!r}")
    l = int(l)
    K = cutoff
    terms = [k ** -float(l) for k in range(1, K)]
    terms.append(K ** (1.0 - l) / (l - 1))
    terms.append(0.5 * K ** -float(l))
    rising = float(l)  # l (l+1) ... (l + 2j - 2)
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        terms.append(float(b) / math.factorial(2 * j) * rising * K ** (-float(l) - 2 * j + 1))
        rising *= (l + 2 * j - 1) * (l + 2 * j)
    return math.fsum(terms)
