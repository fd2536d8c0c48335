import math

import numpy as np
import pytest

from ptlattice.exceptions import ConstructionError, ContractViolationError
from ptlattice.lattice import HamiltonianSpec, build_parity, hamiltonian
from ptlattice.metric import dieudonne_residual, pseudometric_n2
from ptlattice.observables import (
    ObservableParamsN2,
    cpt_charge_general,
    cpt_charge_n2,
    cpt_metric,
    is_observable,
    observable_basis,
    observable_n2,
    observable_residual,
)

rng = np.random.default_rng(3)


def charge_checks(c, h, p):
    n = c.shape[0]
    cp = c @ p
    return (
        np.linalg.norm(c @ c - np.eye(n), 2),
        np.linalg.norm(c @ h - h @ c, 2),
        np.linalg.norm(cp - cp.conj().T, 2),
        np.linalg.eigvalsh(0.5 * (cp + cp.conj().T))[0],
    )


def span_residual(basis, target):
    mat = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis]).T
    t = np.concatenate([target.real.ravel(), target.imag.ravel()])
    coef, *_ = np.linalg.lstsq(mat, t, rcond=None)
    return float(np.max(np.abs(mat @ coef - t)))


def test_basis_identity_metric():
    basis = observable_basis(np.eye(3))
    assert len(basis) == 9
    assert all(np.allclose(b, b.conj().T) for b in basis)


@pytest.mark.parametrize("n,a,z", [(2, 0.3, 3.0), (4, 0.01, 3.0), (6, 0.004, 3.0), (4, 0.2, 0.0)])
def test_basis_dimension_and_hamiltonian(n, a, z):
    spec = HamiltonianSpec(n, a, z)
    theta = cpt_metric(spec)
    basis = observable_basis(theta)
    assert len(basis) == n * n
    assert all(observable_residual(b, theta) <= 1e-10 for b in basis)
    assert span_residual(basis, hamiltonian(n, a, z)) <= 1e-10


def test_basis_rejects_bad_metric():
    with pytest.raises(ContractViolationError):
        observable_basis(np.diag([1.0, -1.0]))
    with pytest.raises(ContractViolationError):
        observable_basis(np.array([[1, 1], [0, 1]], dtype=complex))


def test_closure_of_symmetrized_products():
    theta = pseudometric_n2(1.0, 0.2, 0.5)
    basis = observable_basis(theta)
    inv = np.linalg.inv(theta)
    for _ in range(5):
        l1 = sum(c * b for c, b in zip(rng.standard_normal(4), basis))
        l2 = sum(c * b for c, b in zip(rng.standard_normal(4), basis))
        prod = 0.5 * (l1 @ l2 + inv @ l2.conj().T @ l1.conj().T @ theta)
        assert observable_residual(prod, theta) <= 1e-9


def test_scale_invariance():
    theta = pseudometric_n2(1.0, 0.1, 0.4)
    lam = observable_basis(theta)[2]
    for k in (0.5, 3.0):
        assert observable_residual(lam, k * theta) == pytest.approx(k * observable_residual(lam, theta), abs=1e-15)
        assert is_observable(lam, k * theta)


def test_n2_observable_formula_is_observable_for_every_k():
    for _ in range(5):
        D, b, c, g, m = rng.uniform(-1, 1, 5)
        a = rng.uniform(0.1, 0.6)
        lam = observable_n2(ObservableParamsN2(D, b, c, g, m, a))
        for k in (0.3, 1.0, 4.0):
            assert observable_residual(lam, pseudometric_n2(k, m, a)) <= 1e-12


def test_n2_observable_formula_spans_the_basis():
    m, a = 0.2, 0.45
    gens = [observable_n2(ObservableParamsN2(*e, m, a)) for e in np.eye(4)]
    vecs = np.array([np.concatenate([x.real.ravel(), x.imag.ravel()]) for x in gens])
    assert np.linalg.matrix_rank(vecs) == 4
    basis = observable_basis(pseudometric_n2(1.0, m, a))
    for x in gens:
        assert span_residual(basis, x) <= 1e-10
    for b in basis:
        assert span_residual(gens, b) <= 1e-10


def test_n2_observable_formula_special_values():
    a, m = 0.35, 0.1
    assert np.allclose(observable_n2(ObservableParamsN2(2, 0, 0, -a, m, a)), hamiltonian(2, a, 3.0))
    assert np.allclose(observable_n2(ObservableParamsN2(1, 0, 0, 0, m, a)), np.eye(2))
    with pytest.raises(ContractViolationError):
        ObservableParamsN2(1, 0, 0, 0, m, 0.0)


def test_n2_observable_formula_gives_charge_up_to_factor():
    beta_angle = 1.1
    a, k = math.cos(beta_angle), 1 / math.sin(beta_angle)
    lam = observable_n2(ObservableParamsN2(0, 0, 0, -math.sqrt(k * k - 1), 0.0, a))
    c = cpt_charge_n2(a)
    ratio = lam[0, 1] / c[0, 1]
    assert np.allclose(lam, ratio * c)


@pytest.mark.parametrize("a", [0.0, 0.3, -0.3, 0.9, -0.9])
def test_charge_n2(a):
    c = cpt_charge_n2(a)
    inv, comm, herm, low = charge_checks(c, hamiltonian(2, a, 3.0), build_parity(2))
    assert inv <= 1e-12 and comm <= 1e-12 and herm <= 1e-12 and low > 0
    assert np.trace(c @ build_parity(2)).real > 0


def test_charge_n2_examples():
    assert np.allclose(cpt_charge_n2(0.0), build_parity(2))
    # entries match the printed magnitudes; the sign of the imaginary part is
    # the one that commutes with H for this diagonal ordering
    c = cpt_charge_n2(0.6)
    assert np.allclose(c, 1.25 * np.array([[0.6j, 1], [1, -0.6j]]))
    printed = 1.25 * np.array([[-0.6j, 1], [1, 0.6j]])
    h = hamiltonian(2, 0.6, 3.0)
    assert np.linalg.norm(printed @ h - h @ printed) > 0.1
    with pytest.raises(ConstructionError):
        cpt_charge_n2(1.0)


@pytest.mark.parametrize("a", [0.0, 0.3, -0.3, 0.6, 0.9, -0.9])
def test_charge_general_matches_n2(a):
    assert np.allclose(cpt_charge_general(HamiltonianSpec(2, a, 3.0)), cpt_charge_n2(a), atol=1e-12)


@pytest.mark.parametrize("n,a,z", [(4, 0.01, 3.0), (4, 0.03, 3.0), (6, 0.005, 3.0), (6, 0.2, 0.0), (8, 0.002, 3.0)])
def test_charge_general_checks(n, a, z):
    spec = HamiltonianSpec(n, a, z)
    c = cpt_charge_general(spec)
    inv, comm, herm, low = charge_checks(c, hamiltonian(n, a, z), build_parity(n))
    assert inv <= 1e-10 and comm <= 1e-10 and herm <= 1e-10 and low > 0
    assert np.allclose(np.sort(np.linalg.eigvals(c).real), [-1] * (n // 2) + [1] * (n // 2), atol=1e-10)


def test_charge_general_a0_is_parity():
    assert np.array_equal(cpt_charge_general(HamiltonianSpec(4, 0.0, 3.0)), build_parity(4))


def test_charge_general_complex_spectrum():
    with pytest.raises(ConstructionError):
        cpt_charge_general(HamiltonianSpec(4, 0.1, 3.0))


def test_cpt_metric_is_a_metric():
    spec = HamiltonianSpec(6, 0.005, 3.0)
    theta = cpt_metric(spec)
    assert np.allclose(theta, theta.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(theta)[0] > 0
    h = hamiltonian(6, 0.005, 3.0)
    assert dieudonne_residual(h, theta) <= 1e-10 * np.linalg.norm(h, 2) * np.linalg.norm(theta, 2)
