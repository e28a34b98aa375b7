"""Exact diagonal sums of T(b0) + T(bsub) D against the four-term harmonic expansion.

The expansion stops at 1/n, so the error should approach -R1 / (12 n^2) with
R1 = 2 (bsub)_0; the printed ratio tends to 1.
"""

import math

import numpy as np

from szego_lab.asymptotics import ResidueTable, prop3_coeffs
from szego_lab.fourier import TrigPoly, trig_exp
from szego_lab.operator import build_psdo


def main():
    b0 = trig_exp(TrigPoly.from_dict({1: 0.1, -1: 0.1}))
    bsub = 0.1 * b0
    N = 2000
    diag = np.diag(build_psdo(b0, bsub, N).data).real
    R1 = 2 * bsub.coeff(0).real
    P = prop3_coeffs(1, ResidueTable(1, (2 * b0.coeff(0).real, R1, 0.0), 0.0), C=b0.coeff(0).real)
    print(f"{'n':>5} {'error':>11} {'error*n^2':>12} {'/(-R1/12)':>10}")
    for n in (10, 30, 100, 300, 1000, 2000):
        err = math.fsum(diag[N - n : N + n + 1]) - float(P.evaluate(n))
        print(f"{n:>5} {err:>11.3e} {err * n * n:>12.8f} {err * n * n / (-R1 / 12):>10.6f}")


if __name__ == "__main__":
    main()
