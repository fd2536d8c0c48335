"""Energy spectra of H(a, z) as functions of the coupling.

Everything here evaluates eigenvalues through the real similarity transform
of :func:`ptlattice.lattice.real_form`; real energies then carry an exactly
zero imaginary part and the reality count is insensitive to roundoff until
one is within a few ulps of an exceptional point.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import ConvergenceError, ResolutionError
from .lattice import HamiltonianSpec, real_form, site_weights
from .linalg import DEFAULT_TOL_REAL, Spectrum, bisect, bisect_bracket, eig_general, is_real_eigenvalue, sort_eigenvalues

log = logging.getLogger(__name__)

__all__ = [
    "SweepResult",
    "ExceptionalPoint",
    "RealityInterval",
    "spectrum",
    "real_energies",
    "count_real",
    "all_real",
    "sweep",
    "track_branches",
    "find_alpha",
    "reality_intervals",
    "free_laplacian_energies",
]

DEFAULT_ALPHA_TOL = 1e-10
DEFAULT_A_CAP = 1e6
ALPHA_SCAN_RATIO = 1.01


def free_laplacian_energies(n: int) -> np.ndarray:
    """Eigenvalues 2 - 2 cos(k pi / (N + 1)), k = 1..N, ascending."""
    k = np.arange(1, n + 1)
    return np.sort(2.0 - 2.0 * np.cos(k * np.pi / (n + 1)))


class RealFormFamily:
    """Cheap repeated evaluation of the real form at fixed (n, z)."""

    def __init__(self, n: int, z: float):
        self.n, self.z = n, float(z)
        self.base = real_form(HamiltonianSpec(n, 0.0, z))
        self.anti = -site_weights(n, z)
        self._idx = (np.arange(n), np.arange(n)[::-1])

    def matrix(self, a: float) -> np.ndarray:
        m = self.base.copy()
        m[self._idx] += a * self.anti
        return m

    def eigvals(self, a: float) -> np.ndarray:
        return np.linalg.eigvals(self.matrix(a))

    def real_values(self, a: float, tol_real: float = DEFAULT_TOL_REAL) -> np.ndarray:
        ev = self.eigvals(a)
        return np.sort(ev[is_real_eigenvalue(ev, tol_real)].real)

    def safe_coupling(self) -> float:
        """Coupling below which the spectrum is provably real.

        The a = 0 form is symmetric with simple eigenvalues; by Bauer-Fike a
        perturbation of norm below half the smallest gap keeps one
        eigenvalue in each disjoint disc, and conjugate pairs cannot share
        a disc centred on the real axis.
        """
        gap = np.min(np.diff(free_laplacian_energies(self.n)))
        return 0.99 * 0.5 * gap / np.max(np.abs(self.anti))


def _eigvals(n: int, a: float, z: float) -> np.ndarray:
    return np.linalg.eigvals(real_form(HamiltonianSpec(n, a, z)))


def spectrum(spec: HamiltonianSpec, vectors: bool = False) -> Spectrum:
    """Sorted spectrum of H(spec); eigenvectors (if asked) belong to H itself."""
    if not vectors:
        return eig_general(real_form(spec))
    from .lattice import build_hamiltonian

    return eig_general(build_hamiltonian(spec), vectors=True)


def real_energies(n: int, a: float, z: float, tol_real: float = DEFAULT_TOL_REAL) -> np.ndarray:
    """Ascending real eigenvalues of H(a, z)."""
    ev = _eigvals(n, a, z)
    return np.sort(ev[is_real_eigenvalue(ev, tol_real)].real)


def count_real(n: int, a: float, z: float, tol_real: float = DEFAULT_TOL_REAL) -> int:
    return int(np.count_nonzero(is_real_eigenvalue(_eigvals(n, a, z), tol_real)))


def all_real(n: int, a: float, z: float, tol_real: float = DEFAULT_TOL_REAL) -> bool:
    return count_real(n, a, z, tol_real) == n


@dataclass
class SweepResult:
    """Sorted spectra on a grid of couplings.

    ``eigenvalues[i]`` is the (real part, imaginary part)-sorted spectrum at
    ``a_grid[i]``; ``is_real[i]`` flags the real ones.
    """

    spec_base: HamiltonianSpec
    a_grid: np.ndarray
    eigenvalues: np.ndarray
    is_real: np.ndarray

    @property
    def branches(self):
        return [list(zip(ev, flags)) for ev, flags in zip(self.eigenvalues, self.is_real)]

    def real_points(self):
        """(a, energy) pairs of the real spectral locus on the grid."""
        idx = np.nonzero(self.is_real)
        return self.a_grid[idx[0]], self.eigenvalues[idx].real


def sweep(spec_base: HamiltonianSpec, a_min: float, a_max: float, steps: int,
          tol_real: float = DEFAULT_TOL_REAL, threads: int = 1) -> SweepResult:
    """Spectra at ``steps`` equidistant couplings in [a_min, a_max]."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not a_min < a_max:
        raise ValueError("a_min must be smaller than a_max")
    grid = np.linspace(a_min, a_max, steps)

    def one(a):
        try:
            return eig_general(real_form(spec_base.with_a(a))).eigenvalues
        except ConvergenceError as exc:
            raise ConvergenceError(f"eigensolver failed at a={a!r}: {exc}", partial=exc.partial) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, grid))
    else:
        rows = [one(a) for a in grid]
    ev = np.array(rows)
    return SweepResult(spec_base, grid, ev, is_real_eigenvalue(ev, tol_real))


def track_branches(spec_base: HamiltonianSpec, a_grid, max_refine: int = 12) -> np.ndarray:
    """Follow individual eigenvalue branches across ``a_grid``.

    Consecutive spectra are matched by minimum-cost assignment in the complex
    plane.  When some eigenvalue moves by more than half the smallest gap of
    the previous spectrum the step is subdivided (up to ``max_refine``
    halvings); exceptional points, where gaps close, are exempt once that
    budget is spent.  Returns an array (len(a_grid), n) of eigenvalues with
    column j following one branch.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    n = spec_base.n

    def ev_at(a):
        return _eigvals(n, a, spec_base.z)

    def match(prev, cur):
        cost = np.abs(prev[:, None] - cur[None, :])
        _, cols = linear_sum_assignment(cost)
        return cur[cols]

    def min_gap(ev):
        d = np.abs(ev[:, None] - ev[None, :])
        d[np.diag_indices_from(d)] = np.inf
        return d.min()

    out = np.empty((a_grid.size, n), dtype=complex)
    cur = ev_at(a_grid[0])
    out[0] = cur[sort_eigenvalues(cur)]
    for i in range(1, a_grid.size):
        a0, a1 = a_grid[i - 1], a_grid[i]
        prev = out[i - 1]
        nsub = 1
        for _ in range(max_refine + 1):
            p = prev
            ok = True
            for s in range(1, nsub + 1):
                nxt = match(p, ev_at(a0 + (a1 - a0) * s / nsub))
                if np.max(np.abs(nxt - p)) >= 0.5 * min_gap(p):
                    ok = False
                p = nxt
            if ok:
                break
            nsub *= 2
        out[i] = p
    return out


@dataclass
class ExceptionalPoint:
    """Edge of the all-real interval around a = 0."""

    n: int
    z: float
    alpha: float
    degenerate_energy: float
    merged_pair: tuple
    merged_pairs: list = field(default_factory=list)
    bounded: bool = True

    def as_dict(self):
        return {
            "n": self.n,
            "z": self.z,
            "alpha": self.alpha,
            "degenerate_energy": self.degenerate_energy,
            "merged_pair": list(self.merged_pair),
            "merged_pairs": [list(p) for p in self.merged_pairs],
            "bounded": self.bounded,
        }


def _smallest_gap_pairs(values: np.ndarray, count: int) -> list:
    """Indices (i, i + 1) of the ``count`` disjoint adjacent pairs with smallest gaps."""
    gaps = np.diff(values)
    chosen = []
    for g in np.argsort(gaps, kind="stable"):
        if all(abs(int(g) - c) > 1 for c in chosen):
            chosen.append(int(g))
        if len(chosen) == count:
            break
    return sorted((g, g + 1) for g in chosen)


def find_alpha(n: int, z: float, tol: float = DEFAULT_ALPHA_TOL, a_cap: float = DEFAULT_A_CAP,
               tol_real: float = DEFAULT_TOL_REAL) -> ExceptionalPoint:
    """Exceptional point bounding the all-real interval (-alpha, alpha).

    The coupling is scanned upwards on a geometric grid with 1 % steps,
    starting from a provably all-real value, until the spectrum stops being
    real; the bracket is then bisected.
    Doubling would be cheaper but can jump over a short complex window that
    is followed by a return to full reality.  If the spectrum stays real up
    to ``a_cap`` an unbounded report (``bounded=False``, ``alpha=inf``) is
    returned.
    """
    fam = RealFormFamily(n, z)

    def real(a):
        return bool(np.all(is_real_eigenvalue(fam.eigvals(a), tol_real)))

    lo = 0.0
    hi = min(fam.safe_coupling(), a_cap)
    while real(hi):
        if hi >= a_cap:
            return ExceptionalPoint(n, z, float("inf"), float("nan"), (), [], bounded=False)
        lo, hi = hi, min(hi * ALPHA_SCAN_RATIO, a_cap)
    alpha = bisect(real, lo, hi, tol)
    # degenerate energy and merging pair(s), read off just below / above alpha
    below = real_energies(n, alpha * (1.0 - 1e-6), z, tol_real)
    if below.size != n:
        below = real_energies(n, max(alpha - 2 * tol, 0.0), z, tol_real)
    lost = n - count_real(n, alpha * (1.0 + 1e-6) + tol, z, tol_real)
    pairs = _smallest_gap_pairs(below, max(lost // 2, 1))
    i, j = pairs[0]
    energy = 0.5 * (below[i] + below[j])
    return ExceptionalPoint(n, float(z), float(alpha), float(energy), (i, j), pairs)


@dataclass(frozen=True)
class RealityInterval:
    """Maximal a-interval on which the number of real eigenvalues is constant."""

    lo: float
    hi: float
    n_real: int

    def as_dict(self):
        return {"lo": self.lo, "hi": self.hi, "n_real": self.n_real}


def scan_grid(a_max: float, steps: int, a_min_log: Optional[float] = None) -> np.ndarray:
    """Union of a linear grid on [0, a_max] and a geometric one below it."""
    lin = np.linspace(0.0, a_max, steps)
    lo = a_min_log if a_min_log is not None else a_max * 1e-8
    geo = np.geomspace(lo, a_max, steps)
    return np.unique(np.concatenate([lin, geo]))


def reality_intervals(spec_base: HamiltonianSpec, a_max_scan: float, steps: int = 2000,
                      tol: float = 1e-8, tol_real: float = DEFAULT_TOL_REAL) -> list:
    """Partition [0, a_max_scan] by the number of real eigenvalues.

    The scan grid combines linear and geometric spacing so that features at
    very small couplings (large N or large z) are not skipped; boundaries are
    refined by bisection to ``tol``.
    """
    if a_max_scan <= 0:
        raise ValueError("a_max_scan must be positive")
    n, z = spec_base.n, spec_base.z
    grid = scan_grid(a_max_scan, steps)
    counts = [count_real(n, a, z, tol_real) for a in grid]
    out = []
    start = 0.0
    for i in range(1, grid.size):
        if counts[i] == counts[i - 1]:
            continue
        c0 = counts[i - 1]
        lo, hi = bisect_bracket(lambda a: count_real(n, a, z, tol_real) == c0, grid[i - 1], grid[i], tol)
        edge = 0.5 * (lo + hi)
        out.append(RealityInterval(float(start), float(edge), int(c0)))
        start = edge
    out.append(RealityInterval(float(start), float(a_max_scan), int(counts[-1])))
    return out
