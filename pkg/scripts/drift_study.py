"""How far the central block of log B_N moves as the truncation buffer grows."""

import argparse

from szego_lab.fourier import TrigPoly, trig_exp
from szego_lab.matfunc import central_log_block


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--amp", type=float, default=0.3, help="log b0 = 2*amp*cos x")
    args = ap.parse_args()

    b0 = trig_exp(TrigPoly.from_dict({1: args.amp, -1: args.amp}))
    bsub = TrigPoly.from_dict({0: 0.3, 1: 0.1, -1: 0.1})
    print(f"{'buffer':>6} {'drift':>10} {'terms':>6}")
    for buffer in (2, 4, 8, 16, 32, 64):
        r = central_log_block(b0, bsub, args.n, buffer)
        print(f"{buffer:>6} {r.drift:>10.2e} {r.terms:>6}")


if __name__ == "__main__":
    main()
