"""The qubit pointer at eta = pi + delta behaves like a weak measurement of
strength 2 delta with a flipped post-selection.  Compares the complex shift
with the echo weak value for a few random state pairs."""
import argparse

import numpy as np

from weakvalues.analysis import echo_weak_value
from weakvalues.entangler import von_neumann_entangle
from weakvalues.errors import ZeroPostSelection
from weakvalues.hilbert import MeasuredObservable, random_state, weak_value
from weakvalues.pointers import PointerFamily
from weakvalues.readout import full_readout


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta", type=float, default=0.05)
    parser.add_argument("--pairs", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    A = MeasuredObservable.projector()
    fam = PointerFamily.qubit()
    rng = np.random.default_rng(args.seed)
    print(f"{'shift':>24s} {'echo weak value':>24s} {'plain weak value':>24s}")
    shown = 0
    while shown < args.pairs:
        psi, f = random_state(2, rng), random_state(2, rng)
        state = von_neumann_entangle(psi, A, fam, np.pi + args.delta)
        try:
            shift = full_readout(state, f, A, psi).complex_shift
            echo = echo_weak_value(psi, f, A, flipped=True)
            plain = weak_value(psi, f, A)
        except ZeroPostSelection:
            continue
        print(f"{shift:24.5f} {echo:24.5f} {plain:24.5f}")
        shown += 1


if __name__ == "__main__":
    main()
