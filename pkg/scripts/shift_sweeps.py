"""Normalized conditional shifts of the pulse pointer across input states,
at a weak strength, at the first D_10 zero crossing and at the first echo."""
import argparse
import csv

import numpy as np

from weakvalues.analysis import nearest_zero_crossing, shift_sweep
from weakvalues.hilbert import MeasuredObservable, SystemState
from weakvalues.pointers import PointerFamily


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=181)
    parser.add_argument("--prefix", default="shift_sweep")
    args = parser.parse_args()

    A = MeasuredObservable.projector()
    fam = PointerFamily.pulse()
    f = SystemState([np.cos(-np.pi / 8), np.sin(-np.pi / 8)])
    strengths = {"weak": 0.12, "strong": nearest_zero_crossing(fam, A, 0.39), "echo": 0.75}
    ranges = {"theta": np.pi, "phi": 2 * np.pi}
    for param, top in ranges.items():
        values = np.linspace(0, top, args.points)
        for label, eta in strengths.items():
            rows = shift_sweep(fam, A, eta, values, f, parametrization=param)
            path = f"{args.prefix}_{param}_{label}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow([param, "norm_chi", "norm_mu", "ref_re", "ref_im", "status"])
                for r in rows:
                    ref = r.reference if r.reference is not None else complex("nan")
                    writer.writerow([r.param, r.norm_chi, r.norm_mu, ref.real, ref.imag, r.status])
            chi = [r.norm_chi for r in rows if r.norm_chi is not None]
            mu = [r.norm_mu for r in rows if r.norm_mu is not None]
            print(f"{param} {label:6s} eta={eta:.4f}: norm_chi in [{min(chi):.3f}, {max(chi):.3f}], "
                  f"norm_mu in [{min(mu):.3f}, {max(mu):.3f}] -> {path}")


if __name__ == "__main__":
    main()
