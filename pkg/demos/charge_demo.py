"""The CPT charge and the observables of the two-level model.

    python demos/charge_demo.py
"""

import numpy as np

from ptlattice.lattice import HamiltonianSpec, build_parity, hamiltonian
from ptlattice.metric import pseudometric_n2
from ptlattice.observables import (
    ObservableParamsN2,
    cpt_charge_general,
    cpt_charge_n2,
    observable_basis,
    observable_n2,
    observable_residual,
)


def report(c, h, p):
    cp = c @ p
    print(f"    |C^2 - I| = {np.linalg.norm(c @ c - np.eye(len(c))):.1e}"
          f"   |[C, H]| = {np.linalg.norm(c @ h - h @ c):.1e}"
          f"   min eig CP = {np.linalg.eigvalsh(0.5 * (cp + cp.conj().T))[0]:.4f}")


def main():
    np.set_printoptions(precision=4, suppress=True)
    for a in (0.0, 0.6, 0.9):
        print(f"n = 2, a = {a}")
        c = cpt_charge_n2(a)
        print(c)
        report(c, hamiltonian(2, a, 3.0), build_parity(2))

    for n, a in ((4, 0.01), (6, 0.005)):
        print(f"n = {n}, a = {a}, z = 3 (eigenvector construction)")
        c = cpt_charge_general(HamiltonianSpec(n, a, 3.0))
        report(c, hamiltonian(n, a, 3.0), build_parity(n))
        print(f"    eigenvalues of C: {np.sort(np.linalg.eigvals(c).real)}")

    a, m = 0.4, 0.2
    theta = pseudometric_n2(1.0, m, a)
    basis = observable_basis(theta)
    print(f"\nObservables for the two-level metric (k, m) = (1, {m}), a = {a}: real dimension {len(basis)}")
    lam = observable_n2(ObservableParamsN2(2.0, 0.0, 0.0, -a, m, a))
    print(f"  (D, b, c, g) = (2, 0, 0, -a) gives H: {np.allclose(lam, hamiltonian(2, a, 3.0))}")
    lam = observable_n2(ObservableParamsN2(0.3, -0.2, 0.5, 0.1, m, a))
    print(f"  a generic member has residual {observable_residual(lam, theta):.1e}")


if __name__ == "__main__":
    main()
