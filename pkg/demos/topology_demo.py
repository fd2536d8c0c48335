"""Topology of the real spectral locus as the exponent z varies.

    python demos/topology_demo.py [--outdir figures] [--n 8]
"""

import argparse

from _plot import pyplot, save
from ptlattice.lattice import HamiltonianSpec
from ptlattice.spectra import find_alpha, sweep
from ptlattice.topology import critical_exponents, detect_anomalies, enumerate_patterns, extract_locus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--n", type=int, default=8)
    args = ap.parse_args()

    print("Admissible arrangements of k circles")
    for k in range(1, 7):
        pats = enumerate_patterns(k)
        print(f"  k = {k}: {len(pats):>2}  {' '.join(map(str, pats)) if k <= 4 else '...'}")

    print(f"\nCritical exponents at n = {args.n} on [0.5, 5]")
    rep = critical_exponents(args.n, 0.5, 5.0, tol=1e-5)
    print(f"  z > {rep.boundaries[0]:.4f}: {rep.patterns[0]}" if rep.boundaries else f"  {rep.patterns[0]}")
    for z_c, p in zip(rep.boundaries, rep.patterns[1:]):
        print(f"  below {z_c:.4f}: {p}")

    print("\nLocus components at n = 4, z = 3 (a >= 0 half)")
    for c in extract_locus(4, 3.0):
        print(f"  levels {c.levels}  energies {c.energy_interval[0]:.4f}..{c.energy_interval[1]:.4f}"
              f"  closes at a = {c.a_merge:.6f}")

    print("\nPartial-reality islands at n = 4 just below the n = 4 critical exponent")
    for z in (84 / 64, 81 / 64, 1.0):
        found = detect_anomalies(4, z, 1.0)
        text = ", ".join(f"[{x.lo:.4f}, {x.hi:.4f}] ({x.n_real} real)" for x in found) or "none"
        print(f"  z = {z:.6f}: {text}")

    plt = pyplot()
    if plt is None:
        print("matplotlib not installed; skipping figures")
        return
    zs = [4.5, 3.5, 2.0, 1.3, 0.5]
    fig, axes = plt.subplots(1, len(zs), figsize=(4 * len(zs), 4))
    for ax, z in zip(axes, zs):
        a_max = 3 * find_alpha(args.n, z).alpha
        res = sweep(HamiltonianSpec(args.n, 0.0, z), -a_max, a_max, 3001)
        a, e = res.real_points()
        ax.plot(a, e, ",k")
        ax.set_title(f"z = {z:g}")
        ax.ticklabel_format(axis="x", style="sci", scilimits=(0, 0))
    save(fig, args.outdir, f"topology_n{args.n}.png")


if __name__ == "__main__":
    main()
