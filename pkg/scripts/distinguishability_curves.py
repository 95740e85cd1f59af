"""Pointer distinguishability D_10 against strength for all three pointer
families, plus the located zero crossings and weak echoes."""
import argparse
import csv

import numpy as np

from weakvalues.analysis import distinguishability_sweep, echo_scan, zero_crossings
from weakvalues.hilbert import MeasuredObservable
from weakvalues.pointers import PointerFamily


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--eta-max", type=float, default=3.0)
    parser.add_argument("--step", type=float, default=0.01)
    parser.add_argument("--out", default="distinguishability.csv")
    args = parser.parse_args()

    A = MeasuredObservable.projector()
    etas = np.round(np.arange(0, args.eta_max + args.step / 2, args.step), 10)
    families = [PointerFamily.gaussian(), PointerFamily.pulse(), PointerFamily.qubit()]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["family", "eta", "D10_re", "D10_im", "D10_abs"])
        for fam in families:
            for row in distinguishability_sweep(fam, A, etas):
                writer.writerow([row.family, row.eta, row.D10.real, row.D10.imag, abs(row.D10)])
    print(f"wrote {args.out}")
    for fam in families:
        zeros = zero_crossings(fam, A, 0.0, args.eta_max)
        echoes = echo_scan(fam, A, (0.0, args.eta_max))
        print(f"{fam.name}: zeros {[round(z, 4) for z in zeros]}, "
              f"echoes {[(round(e.eta_star, 4), round(e.D_value.real, 3)) for e in echoes]}")


if __name__ == "__main__":
    main()
