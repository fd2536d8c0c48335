"""Real energies of H(a, z) against the coupling, and where reality is lost.

    python demos/spectra_demo.py [--outdir figures]
"""

import argparse
import math

import numpy as np

from _plot import pyplot, save
from ptlattice.lattice import HamiltonianSpec
from ptlattice.reference import ALPHA_Z3
from ptlattice.spectra import find_alpha, reality_intervals, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()

    print("Edge of the all-real coupling interval at z = 3")
    print(f"{'n':>3} {'alpha':>16} {'reference':>12} {'energy':>10}")
    for n in sorted(ALPHA_Z3):
        ep = find_alpha(n, 3.0, tol=1e-14)
        print(f"{n:>3} {ep.alpha:>16.12f} {ALPHA_Z3[n][0]:>12.9f} {ep.degenerate_energy:>10.4f}")
    print(f"n = 4 exact value 1/2 - sqrt(69)/18 = {0.5 - math.sqrt(69) / 18:.15f}")

    print("\nn = 4, z = 0: intervals with a constant number of real levels")
    for iv in reality_intervals(HamiltonianSpec(4, 0.0, 0.0), 1.0):
        print(f"  [{iv.lo:.9f}, {iv.hi:.9f}]  {iv.n_real} real")
    print(f"  sqrt(5)/4 = {math.sqrt(5) / 4:.9f}")

    plt = pyplot()
    if plt is None:
        print("matplotlib not installed; skipping figures")
        return
    panels = [(2, 3.0, 1.0), (4, 3.0, 0.05), (6, 3.0, 0.015), (8, 3.0, 0.005)]
    fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 4))
    for ax, (n, z, a_max) in zip(axes, panels):
        res = sweep(HamiltonianSpec(n, 0.0, z), -a_max, a_max, 2001)
        a, e = res.real_points()
        ax.plot(a, e, ",k")
        ax.set_title(f"n = {n}, z = {z:g}")
        ax.ticklabel_format(axis="x", style="sci", scilimits=(0, 0))
        ax.set_xlabel("a")
    axes[0].set_ylabel("real energies")
    save(fig, args.outdir, "spectra_z3.png")


if __name__ == "__main__":
    main()
