"""Metrics: the solution family, positivity of the unit-diagonal member, slopes at small a.

    python demos/metric_demo.py [--outdir figures]
"""

import argparse

import numpy as np

from _plot import pyplot, save
from ptlattice.lattice import HamiltonianSpec
from ptlattice.linalg import poly_real_roots
from ptlattice.metric import (
    beta,
    beta_linear_estimate,
    dieudonne_basis,
    linearized_metric,
    pseudometric_n6,
    secular_polynomial,
    special_pseudometric,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()

    print("Dimension of the Hermitian solution space of H^dagger T = T H")
    for n in (2, 4, 6, 8, 10):
        fam = dieudonne_basis(HamiltonianSpec(n, 1e-3, 0.0))
        print(f"  n = {n:>2}: {fam.dimension}  max residual {max(fam.residuals):.1e}")

    print("\nFirst-order coefficient T at n = 6 (entries times -i)")
    print((-linearized_metric(6).imag).astype(int))

    print("\nSecular polynomials and positivity edges")
    for n in (2, 4, 6, 8, 10):
        p = secular_polynomial(n)
        top = np.max(poly_real_roots(p))
        print(f"  n = {n:>2}: {p}")
        print(f"          largest slope {top:.9f}  1/slope {beta_linear_estimate(n):.4f}  exact edge {beta(n):.7f}")

    plt = pyplot()
    if plt is None:
        print("matplotlib not installed; skipping figures")
        return
    a_grid = np.linspace(0, 0.3, 301)
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, build, title in [
        (axes[0], lambda a: special_pseudometric(6, a), "unit-diagonal member, n = 6"),
        (axes[1], lambda a: pseudometric_n6(0.1, 0, 0, a), "m = 0.1, n = 6"),
    ]:
        ax.plot(a_grid, [np.linalg.eigvalsh(build(a)) for a in a_grid], "k")
        ax.axhline(0, color="grey", lw=0.5)
        ax.set_title(title)
        ax.set_xlabel("a")
    save(fig, args.outdir, "metric_n6.png")


if __name__ == "__main__":
    main()
