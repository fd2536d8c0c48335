"""Metrics that make H(a, z) self-adjoint.

A Hermitian Theta with H^dagger Theta = Theta H is a pseudometric; a
positive definite one is a metric and defines the physical inner product
<x|Theta|y>.  For an N by N matrix with real simple spectrum the Hermitian
solutions form a real N-dimensional space.  This module computes that space
numerically, reproduces the explicit low-dimensional families, measures how
far in a the special unit-diagonal member stays positive, and builds its
first-order expansion in a together with the integer secular polynomial of
the slopes.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import BracketError, ContractViolationError, ExactnessError
from .lattice import HamiltonianSpec, build_hamiltonian, check_dimension, site_weights
from .linalg import (
    DEFAULT_NULL_TOL,
    SecularPolynomial,
    eig_general,
    eig_hermitian,
    is_real_eigenvalue,
    nullspace_real,
    poly_real_roots,
)

log = logging.getLogger(__name__)

__all__ = [
    "PseudometricFamily",
    "N2MetricParams",
    "N4PseudometricParams",
    "hermitian_basis",
    "dieudonne_residual",
    "dieudonne_basis",
    "pseudometric_n2",
    "angle_metric_n2",
    "pseudometric_n4",
    "n4_theta_closed_form",
    "pseudometric_n6",
    "special_pseudometric",
    "min_eigenvalue",
    "positivity_beta",
    "beta",
    "linearized_metric",
    "linearized_metric_pattern",
    "secular_polynomial",
    "beta_linear_estimate",
]


def hermitian_basis(n: int) -> list:
    """Trace-orthonormal basis of the n^2-dimensional real space of Hermitian matrices.

    Order: diagonal units E_jj, then for every j < k the symmetric
    (E_jk + E_kj)/sqrt2 followed by the antisymmetric (-i E_jk + i E_kj)/sqrt2.
    """
    out = []
    for j in range(n):
        e = np.zeros((n, n), complex)
        e[j, j] = 1.0
        out.append(e)
    s = 1.0 / math.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), complex)
            e[j, k] = e[k, j] = s
            out.append(e)
            e = np.zeros((n, n), complex)
            e[j, k], e[k, j] = -1j * s, 1j * s
            out.append(e)
    return out


def dieudonne_residual(h: np.ndarray, theta: np.ndarray) -> float:
    """Spectral norm of H^dagger Theta - Theta H."""
    return float(np.linalg.norm(h.conj().T @ theta - theta @ h, 2))


def _operator_matrix(h: np.ndarray, basis: list) -> np.ndarray:
    cols = []
    for e in basis:
        r = h.conj().T @ e - e @ h
        cols.append(np.concatenate([r.real.ravel(), r.imag.ravel()]))
    return np.array(cols).T


@dataclass
class PseudometricFamily:
    """Real span of all Hermitian solutions of H^dagger Theta = Theta H."""

    n: int
    spec: HamiltonianSpec
    basis: list
    tol: float
    residuals: list = field(default_factory=list)
    warning: Optional[str] = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.size != self.dimension:
            raise ValueError(f"expected {self.dimension} coefficients, got {coeffs.size}")
        return sum(c * b for c, b in zip(coeffs, self.basis))

    def project(self, theta: np.ndarray):
        """Coordinates of the nearest span member and the Frobenius distance to it."""
        coeffs = np.array([np.real(np.vdot(b, theta)) for b in self.basis])
        near = self.combine(coeffs) if self.basis else np.zeros_like(theta)
        return coeffs, float(np.linalg.norm(theta - near))

    def as_dict(self) -> dict:
        """JSON-ready export; matrices as row-major [re, im] pairs."""
        return {
            "n": self.n,
            "a": self.spec.a,
            "z": self.spec.z,
            "dimension": self.dimension,
            "tol": self.tol,
            "warning": self.warning,
            "residuals": [float(r) for r in self.residuals],
            "basis": [[[[float(x.real), float(x.imag)] for x in row] for row in b] for b in self.basis],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def dieudonne_basis(spec: HamiltonianSpec, tol: float = DEFAULT_NULL_TOL) -> PseudometricFamily:
    """Canonical basis of the pseudometric family of H(spec).

    The real-linear map Theta -> H^dagger Theta - Theta H is written on the
    Hermitian basis and its numerical nullspace taken; the result is mapped
    back to trace-orthonormal Hermitian matrices.  If the spectrum is complex
    or degenerate the dimension can differ from n; the family then carries a
    warning instead of raising.
    """
    h = build_hamiltonian(spec)
    hb = hermitian_basis(spec.n)
    vecs = nullspace_real(_operator_matrix(h, hb), tol)
    basis = [sum(c * e for c, e in zip(v, hb)) for v in vecs]
    hnorm = np.linalg.norm(h, 2)
    residuals = [dieudonne_residual(h, b) / (hnorm * np.linalg.norm(b, 2)) for b in basis]
    warning = None
    ev = eig_general(h).eigenvalues
    distinct = ev.size < 2 or np.min(np.abs(np.diff(np.sort_complex(ev)))) > 1e-8
    if not (np.all(is_real_eigenvalue(ev)) and distinct):
        warning = "spectrum is complex or degenerate; the family dimension need not equal n"
    if len(basis) != spec.n:
        warning = (warning or "") + f" (found dimension {len(basis)}, expected {spec.n})"
        log.warning("pseudometric family of %s has dimension %d", spec, len(basis))
    return PseudometricFamily(spec.n, spec, basis, tol, residuals, warning)


# ---------------------------------------------------------------------------
# N = 2


@dataclass(frozen=True)
class N2MetricParams:
    """Scale k and off-diagonal real part m of the two-level metric."""

    k: float
    m: float

    def positive(self, a: float) -> bool:
        return self.k > 0 and self.m ** 2 + a ** 2 < 1.0

    @staticmethod
    def from_angles(k: float, beta: float, gamma: float):
        """(params, a) with a = cos(beta) sin(gamma), m = cos(beta) cos(gamma)."""
        c = math.cos(beta)
        return N2MetricParams(k, c * math.cos(gamma)), c * math.sin(gamma)

    def angles(self, a: float):
        """(beta, gamma) in (0, pi) x [0, pi) reproducing (m, a); requires a >= 0."""
        r = math.hypot(self.m, a)
        if r >= 1.0:
            raise ValueError("angles exist only inside the positivity disc m^2 + a^2 < 1")
        if a < 0:
            raise ValueError("the angle parametrisation covers a >= 0 only")
        return math.acos(r), math.atan2(a, self.m) if r > 0 else 0.0


def pseudometric_n2(k: float, m: float, a: float) -> np.ndarray:
    """[[k, k(m - ia)], [k(m + ia), k]]; eigenvalues k(1 +- sqrt(m^2 + a^2))."""
    return np.array([[k, k * (m - 1j * a)], [k * (m + 1j * a), k]])


def angle_metric_n2(k: float, beta: float, gamma: float) -> np.ndarray:
    """Angle form k [[1, e^{-i gamma} cos beta], [e^{i gamma} cos beta, 1]]."""
    c = math.cos(beta)
    return k * np.array([[1.0, np.exp(-1j * gamma) * c], [np.exp(1j * gamma) * c, 1.0]])


# ---------------------------------------------------------------------------
# N = 4


@dataclass(frozen=True)
class N4PseudometricParams:
    k: float
    m: float
    r: float
    h: float

    def w(self, a: float, z: float) -> float:
        return 3.0 ** z * a

    def big_w(self, a: float, z: float) -> complex:
        w, k, m, r = self.w(a, z), self.k, self.m, self.r
        return -w * w * k + r - k - k * w * a + 1j * (w * m + m * a)

    def big_z(self, a: float, z: float) -> complex:
        w, k, m, r, h = self.w(a, z), self.k, self.m, self.r, self.h
        return m * a * a - w * w * m - m + h - 1j * (k * w - k * a - k * w * a * a - r * w + w ** 3 * k)


def pseudometric_n4(p: N4PseudometricParams, a: float, z: float) -> np.ndarray:
    """Four-parameter pseudometric of H(4, a, z), persymmetric and Hermitian."""
    w = p.w(a, z)
    wc, zc = np.conj(p.big_w(a, z)), np.conj(p.big_z(a, z))
    big_w, big_z = p.big_w(a, z), p.big_z(a, z)
    k, m, r, h = p.k, p.m, p.r, p.h
    return np.array([
        [k, m - 1j * k * w, wc, zc],
        [m + 1j * k * w, r, h - 1j * (k * w + r * a), wc],
        [big_w, h + 1j * (k * w + r * a), r, m - 1j * k * w],
        [big_z, big_w, m + 1j * k * w, k],
    ])


def n4_theta_closed_form(a: float, z: float) -> np.ndarray:
    """Eigenvalues of the (k, m, r, h) = (1, 0, 1, 0) member, ascending.

    theta = 1 +- q +- sqrt(Delta_+-)/2 with q = (w - a^2 w + w^3)/2.
    """
    w = 3.0 ** z * a

    def disc(s):
        return (w ** 6 + (2 - 2 * a * a) * w ** 4 + (8 * s + 4 * a) * w ** 3
                + (5 + 8 * s * a + 6 * a * a + a ** 4) * w * w + (4 * a + 4 * a ** 3) * w + 4 * a * a)

    q = 0.5 * (w - a * a * w + w ** 3)
    dp, dm = math.sqrt(disc(1)), math.sqrt(disc(-1))
    return np.sort([1 + q + dp / 2, 1 + q - dp / 2, 1 - q + dm / 2, 1 - q - dm / 2])


# ---------------------------------------------------------------------------
# N = 6 at z = 0


def pseudometric_n6(m: float, d: float, r: float, a: float) -> np.ndarray:
    """Unit-diagonal three-parameter pseudometric of H(6, a, 0)."""
    a2, a3 = a * a, a ** 3
    low = {
        (2, 1): m + 1j * a,
        (6, 5): m + 1j * a,
        (3, 2): 4 * m * a2 + m + d + 2j * a,
        (5, 4): 4 * m * a2 + m + d + 2j * a,
        (4, 3): d + 4 * m * a2 + m + r + 3j * a,
        (3, 1): -2 * a2 + 2j * m * a,
        (6, 4): -2 * a2 + 2j * m * a,
        (4, 2): -6 * a2 - 1j * (-8 * m * a3 - 4 * m * a - 2 * d * a),
        (5, 3): -6 * a2 - 1j * (-8 * m * a3 - 4 * m * a - 2 * d * a),
        (4, 1): d - 1j * (4 * a3 - a),
        (6, 3): d - 1j * (4 * a3 - a),
        (5, 2): r + d - 1j * (-2 * a + 4 * a3),
        (5, 1): -4 * a2 - 1j * (-2 * m * a - 8 * m * a3 - 2 * d * a),
        (6, 2): -4 * a2 - 1j * (-2 * m * a - 8 * m * a3 - 2 * d * a),
        (6, 1): r + 1j * a,
    }
    t = np.eye(6, dtype=complex)
    for (i, j), v in low.items():
        t[i - 1, j - 1] = v
        t[j - 1, i - 1] = np.conj(v)
    return t


# ---------------------------------------------------------------------------
# special member and positivity


def special_pseudometric(n: int, a: float, z: float = 0.0, tol: float = DEFAULT_NULL_TOL) -> np.ndarray:
    """Unit-diagonal pseudometric with the remaining freedom switched off.

    Among family members with Theta_jj = 1 the one with the smallest
    coordinate vector in the trace-orthonormal basis is taken.  At n = 4 and
    6 this is the (k, m, r, h) = (1, 0, 1, 0) and (m, d, r) = 0 member.
    """
    n = check_dimension(n)
    fam = dieudonne_basis(HamiltonianSpec(n, a, z), tol)
    diag = np.array([[b[j, j].real for b in fam.basis] for j in range(n)])
    coeffs = np.linalg.pinv(diag) @ np.ones(n)
    miss = np.max(np.abs(diag @ coeffs - 1.0))
    if miss > 1e-8:
        raise ContractViolationError(f"no family member has a unit diagonal (miss {miss:.2e})")
    return fam.combine(coeffs)


def min_eigenvalue(theta: np.ndarray) -> float:
    return float(eig_hermitian(0.5 * (theta + theta.conj().T)).eigenvalues[0])


def positivity_beta(builder: Callable[[float], np.ndarray], tol: float = 1e-10, a_cap: float = 10.0,
                    a_start: float = 1e-3) -> float:
    """Edge of the positivity interval [0, beta) of ``builder(a)``.

    The bracket grows geometrically from ``a_start`` in 5 % steps so a short
    dip below zero is not jumped over, then is bisected on the sign of the
    smallest eigenvalue.
    """
    def positive(a):
        return min_eigenvalue(builder(a)) > 0.0

    if not positive(0.0):
        raise ContractViolationError("pseudometric is not positive at a = 0")
    lo, hi = 0.0, a_start
    while positive(hi):
        if hi >= a_cap:
            raise BracketError(f"positive on the whole scan up to a = {a_cap}")
        lo, hi = hi, min(hi * 1.05, a_cap)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def beta(n: int, z: float = 0.0, tol: float = 1e-10) -> float:
    """Positivity edge of :func:`special_pseudometric`."""
    n = check_dimension(n)
    return positivity_beta(lambda a: special_pseudometric(n, a, z), tol)


# ---------------------------------------------------------------------------
# first order in a


def linearized_metric(n: int) -> np.ndarray:
    """First-order coefficient T of the special metric, Theta(a) = I + a T + O(a^2), at z = 0.

    Writing H = H0 + i a W, the Dieudonne equation at order a reads
    [H0, T] = 2 i W.  With T = i S, S real antisymmetric, the solution is
    unique.  Entries are integers times i; they are rounded and the rounding
    checked.
    """
    n = check_dimension(n)
    h0 = build_hamiltonian(HamiltonianSpec(n, 0.0, 0.0)).real
    w = np.diag(site_weights(n, 0.0))
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    cols = []
    for j, k in pairs:
        s = np.zeros((n, n))
        s[j, k], s[k, j] = 1.0, -1.0
        cols.append((h0 @ s - s @ h0).ravel())
    coeffs, *_ = np.linalg.lstsq(np.array(cols).T, 2.0 * w.ravel(), rcond=None)
    s = np.zeros((n, n))
    for (j, k), c in zip(pairs, coeffs):
        s[j, k], s[k, j] = c, -c
    if np.linalg.norm(h0 @ s - s @ h0 - 2.0 * w) > 1e-9 * n:
        raise ExactnessError("first-order equation has no antisymmetric solution")
    exact = np.round(s)
    if np.max(np.abs(exact - s)) > 1e-6:
        raise ExactnessError(f"first-order coefficients are not integers (off by {np.max(np.abs(exact - s)):.2e})")
    return 1j * exact


def linearized_metric_pattern(n: int) -> np.ndarray:
    """Closed pattern of :func:`linearized_metric`.

    For 1-based j < k with k - j odd, T_jk = -i min(j, n + 1 - k); the lower
    triangle is the conjugate; all else vanishes.
    """
    n = check_dimension(n)
    t = np.zeros((n, n), complex)
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1, 2):
            t[j - 1, k - 1] = -1j * min(j, n + 1 - k)
            t[k - 1, j - 1] = 1j * min(j, n + 1 - k)
    return t


def secular_polynomial(n: int) -> SecularPolynomial:
    """Characteristic polynomial det(h I - T) of the linearized metric, integer coefficients."""
    t = linearized_metric(n)
    slopes = eig_hermitian(t).eigenvalues
    raw = np.real(np.poly(slopes))
    coeffs = np.round(raw)
    resid = float(np.max(np.abs(coeffs - raw)))
    if resid >= 1e-6:
        raise ExactnessError(f"secular coefficients miss integers by {resid:.2e}")
    return SecularPolynomial(tuple(int(c) for c in coeffs))


def beta_linear_estimate(n: int) -> float:
    """First-order guess 1 / max |h_j| of the positivity edge."""
    roots = poly_real_roots(secular_polynomial(n))
    return float(1.0 / np.max(np.abs(roots)))
