"""Discrete Hamiltonians of the deformed imaginary cubic lattice.

The central object is the N by N tridiagonal matrix

    H(a, z) = 2 I - J + i a diag(-(N-1)^z, ..., -3^z, -1, +1, +3^z, ..., +(N-1)^z)

where J has ones on the two off-diagonals.  At z = 3 it is the Runge-Kutta
discretisation of -d^2/dx^2 + i x^3 on N interior points of [-L, L] with the
coupling a = h^5 / 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import InvalidDimensionError

__all__ = [
    "HamiltonianSpec",
    "GridSpec",
    "check_dimension",
    "site_weights",
    "build_hamiltonian",
    "hamiltonian",
    "build_parity",
    "coupling_from_grid",
    "discretize_potential",
    "real_form",
]


def check_dimension(n) -> int:
    """Return ``n`` as an int, raising InvalidDimensionError unless it is even and >= 2."""
    if isinstance(n, bool) or int(n) != n:
        raise InvalidDimensionError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 2 or n % 2:
        raise InvalidDimensionError(f"dimension must be even and >= 2, got {n}")
    return n


@dataclass(frozen=True)
class HamiltonianSpec:
    """One member (N, a, z) of the two-parameter family."""

    n: int
    a: float = 0.0
    z: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "n", check_dimension(self.n))
        for name in ("a", "z"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def k(self) -> int:
        return self.n // 2

    def with_a(self, a: float) -> "HamiltonianSpec":
        return HamiltonianSpec(self.n, a, self.z)

    def with_z(self, z: float) -> "HamiltonianSpec":
        return HamiltonianSpec(self.n, self.a, z)


@dataclass(frozen=True)
class GridSpec:
    """Equidistant grid x_k = -L + k h, k = 0..N+1, with Dirichlet ends."""

    lam: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"half-width must be positive, got {self.lam}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"number of interior points must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return 2.0 * self.lam / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        """Interior grid points x_1..x_N."""
        k = np.arange(1, self.n + 1)
        return -self.lam + k * self.h


def site_weights(n: int, z: float) -> np.ndarray:
    """Signed diagonal weights -(N-1)^z, ..., -1, +1, ..., +(N-1)^z."""
    n = check_dimension(n)
    odd = np.arange(n - 1, 0, -2, dtype=float) ** float(z)
    return np.concatenate([-odd, odd[::-1]])


def _tridiagonal(diagonal: np.ndarray) -> np.ndarray:
    n = diagonal.size
    m = np.diag(diagonal.astype(complex))
    off = -np.ones(n - 1)
    m[np.arange(n - 1), np.arange(1, n)] = off
    m[np.arange(1, n), np.arange(n - 1)] = off
    return m


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Dense complex matrix H(a, z) of dimension ``spec.n``."""
    return _tridiagonal(2.0 + 1j * spec.a * site_weights(spec.n, spec.z))


def hamiltonian(n: int, a: float, z: float = 3.0) -> np.ndarray:
    """Shorthand for ``build_hamiltonian(HamiltonianSpec(n, a, z))``."""
    return build_hamiltonian(HamiltonianSpec(n, a, z))


def build_parity(n: int) -> np.ndarray:
    """Anti-diagonal involution P with P[m, n] = 1 iff m + n = N + 1."""
    n = check_dimension(n)
    return np.fliplr(np.eye(n))


def coupling_from_grid(grid: GridSpec) -> float:
    """Coupling a = h^5 / 8 belonging to the grid spacing h = 2L / (N + 1)."""
    return grid.h ** 5 / 8.0


def discretize_potential(potential: Callable[[np.ndarray], np.ndarray], grid: GridSpec) -> np.ndarray:
    """Rescaled finite-difference Hamiltonian h^2 (-Laplacian + V) on ``grid``.

    Works for any dimension, odd or even; ``potential`` is evaluated on the
    interior points and may be complex.
    """
    v = np.asarray(potential(grid.points), dtype=complex)
    return _tridiagonal(2.0 + grid.h ** 2 * v)


def real_form(spec: HamiltonianSpec) -> np.ndarray:
    """Real matrix similar to H(a, z).

    PT symmetry (P H P = conj H) makes U^dagger H U real for the unitary
    U = (I + iP)/sqrt(2).  Working it out gives 2 I - J plus the anti-diagonal
    -a w_j, with w the signed site weights.  Real eigensolvers then report
    real eigenvalues with an exactly vanishing imaginary part, which keeps
    reality counts crisp right up to an exceptional point.
    """
    n = spec.n
    r = _tridiagonal(np.full(n, 2.0)).real
    j = np.arange(n)
    r[j, n - 1 - j] += -spec.a * site_weights(n, spec.z)
    return r
