"""Observables and the CPT charge.

An operator Lambda is observable in the Hilbert space with metric Theta when
Lambda^dagger Theta = Theta Lambda.  For n = 2 the general solution is
written in closed form; for any n the solutions are found numerically.

Charge convention: C is the involution with C^2 = I, [C, H] = 0 and C P
positive definite.  Since H^dagger = P H P, the product P C (unitarily
equivalent to C P) then solves H^dagger Theta = Theta H and is the CPT
metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConstructionError, ContractViolationError
from .lattice import HamiltonianSpec, build_hamiltonian, build_parity
from .linalg import DEFAULT_NULL_TOL, eig_general, eig_hermitian, is_real_eigenvalue, nullspace_real

__all__ = [
    "ObservableParamsN2",
    "observable_basis",
    "observable_residual",
    "is_observable",
    "observable_n2",
    "cpt_charge_n2",
    "cpt_charge_general",
    "cpt_metric",
]


def observable_residual(lam: np.ndarray, theta: np.ndarray) -> float:
    return float(np.linalg.norm(lam.conj().T @ theta - theta @ lam, 2))


def is_observable(lam: np.ndarray, theta: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(np.linalg.norm(lam, 2) * np.linalg.norm(theta, 2), 1.0)
    return observable_residual(lam, theta) <= tol * scale


def observable_basis(theta: np.ndarray, tol: float = DEFAULT_NULL_TOL) -> list:
    """Real basis of {Lambda : Lambda^dagger Theta = Theta Lambda}.

    Each complex entry of Lambda contributes two real unknowns; the map is
    real-linear and its nullspace has dimension n^2 for positive Theta
    (Lambda = Theta^{-1/2} K Theta^{1/2} with K Hermitian).
    """
    theta = np.asarray(theta, dtype=complex)
    n = theta.shape[0]
    if np.linalg.norm(theta - theta.conj().T) > 1e-12 * max(np.linalg.norm(theta), 1.0):
        raise ContractViolationError("theta must be Hermitian")
    if eig_hermitian(theta).eigenvalues[0] <= tol:
        raise ContractViolationError("theta must be positive definite")
    cols = []
    units = []
    for j in range(n):
        for k in range(n):
            for unit in (1.0, 1j):
                e = np.zeros((n, n), complex)
                e[j, k] = unit
                units.append(e)
                r = e.conj().T @ theta - theta @ e
                cols.append(np.concatenate([r.real.ravel(), r.imag.ravel()]))
    vecs = nullspace_real(np.array(cols).T, tol)
    return [sum(c * e for c, e in zip(v, units)) for v in vecs]


@dataclass(frozen=True)
class ObservableParamsN2:
    """Free parameters D, b, c, g of the n = 2 observable, in the context (m, a)."""

    D: float
    b: float
    c: float
    g: float
    m: float
    a: float

    def __post_init__(self):
        if self.a == 0:
            raise ContractViolationError("the n = 2 observable formula is singular at a = 0")


def observable_n2(p: ObservableParamsN2) -> np.ndarray:
    """(1/a) [[Da - b - c + iga, g - bm + iba], [g + cm + ica, Da - iga]]."""
    D, b, c, g, m, a = p.D, p.b, p.c, p.g, p.m, p.a
    return np.array([
        [D * a - b - c + 1j * g * a, g - b * m + 1j * b * a],
        [g + c * m + 1j * c * a, D * a - 1j * g * a],
    ]) / a


def cpt_charge_n2(a: float) -> np.ndarray:
    """Charge of H(2, a): k [[ia, 1], [1, -ia]] with k = 1/sqrt(1 - a^2)."""
    if abs(a) >= 1.0:
        raise ConstructionError(f"no real spectrum, hence no charge, for |a| = {abs(a)} >= 1")
    k = 1.0 / math.sqrt(1.0 - a * a)
    return k * np.array([[1j * a, 1.0], [1.0, -1j * a]])


def cpt_charge_general(spec: HamiltonianSpec, tol: float = 1e-10) -> np.ndarray:
    """Charge C = sum_k s_k r_k l_k^dagger from a biorthonormal eigenbasis.

    Right vectors are normalised to unit length and the left ones scaled so
    that l_k^dagger r_k = 1.  The sign s_k is that of the indefinite norm
    r_k^dagger P r_k; with that choice P C = sum_k |r_k^dagger P r_k|^-1
    (P r_k)(P r_k)^dagger is positive.  At a = 0 the answer is P itself.
    """
    p = build_parity(spec.n)
    if spec.a == 0:
        return p.astype(complex)
    h = build_hamiltonian(spec)
    right = eig_general(h, vectors=True)
    ev = right.eigenvalues
    if not np.all(is_real_eigenvalue(ev)):
        raise ConstructionError(f"spectrum of {spec} is not real")
    if np.min(np.diff(np.sort(ev.real))) < 1e-10:
        raise ConstructionError(f"spectrum of {spec} is degenerate")
    r = right.eigenvectors / np.linalg.norm(right.eigenvectors, axis=0)
    # rows of inv(R) are the left vectors already scaled to l_k^dagger r_k = 1
    l_dag = np.linalg.inv(r)
    c = np.zeros_like(h)
    for k in range(spec.n):
        pnorm = np.real(np.vdot(r[:, k], p @ r[:, k]))
        if abs(pnorm) < 1e-12:
            raise ConstructionError(f"eigenvector {k} is P-null; no definite sign")
        c += np.sign(pnorm) * np.outer(r[:, k], l_dag[k])
    theta = p @ c
    theta_h = 0.5 * (theta + theta.conj().T)
    if np.linalg.norm(theta - theta_h, 2) > 1e-8 * np.linalg.norm(theta, 2):
        raise ConstructionError("P C is not Hermitian")
    if eig_hermitian(theta_h).eigenvalues[0] <= 0:
        raise ConstructionError("no sign choice makes P C positive")
    return c


def cpt_metric(spec: HamiltonianSpec) -> np.ndarray:
    """Positive metric Theta = P C belonging to the charge."""
    p = build_parity(spec.n)
    return p @ cpt_charge_general(spec)
