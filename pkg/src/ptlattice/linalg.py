"""Dense numerical kernels.

Thin, contract-checking wrappers around LAPACK (through scipy) plus the few
small algorithms the rest of the package leans on: a real nullspace with a
deterministic basis, real polynomial roots with Newton polishing and a
guarded bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .exceptions import BracketError, ContractViolationError, ConvergenceError

__all__ = [
    "DEFAULT_TOL_REAL",
    "DEFAULT_NULL_TOL",
    "Spectrum",
    "SecularPolynomial",
    "is_real_eigenvalue",
    "sort_eigenvalues",
    "eig_general",
    "eig_hermitian",
    "nullspace_real",
    "poly_real_roots",
    "bisect",
]

DEFAULT_TOL_REAL = 1e-9
DEFAULT_NULL_TOL = 1e-10
MAX_DIM = 64


def is_real_eigenvalue(ev, tol_real: float = DEFAULT_TOL_REAL):
    """Reality test |Im e| <= tol * (1 + |e|); vectorised."""
    ev = np.asarray(ev)
    return np.abs(ev.imag) <= tol_real * (1.0 + np.abs(ev))


def sort_eigenvalues(ev: np.ndarray) -> np.ndarray:
    """Indices ordering ``ev`` by real part, then imaginary part."""
    ev = np.asarray(ev)
    return np.lexsort((ev.imag, ev.real))


@dataclass
class Spectrum:
    """Sorted eigenvalues, optionally with eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    residual_bound: float = float("nan")

    def __len__(self):
        return self.eigenvalues.size

    def real_mask(self, tol_real: float = DEFAULT_TOL_REAL) -> np.ndarray:
        return is_real_eigenvalue(self.eigenvalues, tol_real)

    def n_real(self, tol_real: float = DEFAULT_TOL_REAL) -> int:
        return int(np.count_nonzero(self.real_mask(tol_real)))

    def all_real(self, tol_real: float = DEFAULT_TOL_REAL) -> bool:
        return bool(np.all(self.real_mask(tol_real)))

    def real_values(self, tol_real: float = DEFAULT_TOL_REAL) -> np.ndarray:
        """Ascending real parts of the eigenvalues classified as real."""
        return np.sort(self.eigenvalues[self.real_mask(tol_real)].real)


@dataclass(frozen=True)
class SecularPolynomial:
    """Polynomial with coefficients in descending degree order."""

    coefficients: tuple
    variable: str = "h"

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if not coeffs or coeffs[0] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polyval(np.asarray(self.coefficients, dtype=float), x)

    def __str__(self):
        terms = []
        for power, c in zip(range(self.degree, -1, -1), self.coefficients):
            if c == 0:
                continue
            mono = {0: "", 1: self.variable}.get(power, f"{self.variable}^{power}")
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else f"{mag}")
            terms.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(terms)
        return "-" + text[2:] if text.startswith("- ") else text[2:]


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ContractViolationError(f"dense kernels are limited to dim <= {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ContractViolationError("matrix has non-finite entries")
    return m


def eig_general(m, vectors: bool = False) -> Spectrum:
    """Eigenvalues (and right eigenvectors) of a general square matrix.

    LAPACK geev: balancing, Hessenberg reduction and shifted QR.  Real input
    stays real so that real eigenvalues come back with zero imaginary part.
    """
    m = _as_square(m)
    if m.size == 0:
        return Spectrum(np.zeros(0, complex), np.zeros((0, 0), complex) if vectors else None, 0.0)
    try:
        if vectors:
            w, v = sla.eig(m, check_finite=False)
        else:
            w = sla.eigvals(m, check_finite=False)
            v = None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR iteration failed: {exc}", partial=None) from exc
    order = sort_eigenvalues(w)
    w = np.asarray(w, dtype=complex)[order]
    if v is None:
        return Spectrum(w)
    v = np.asarray(v, dtype=complex)[:, order]
    scale = max(np.linalg.norm(m, 2), np.finfo(float).tiny)
    resid = float(np.max(np.linalg.norm(m @ v - v * w, axis=0)) / scale)
    spec = Spectrum(w, v, resid)
    if resid > 1e-10:
        raise ConvergenceError(f"eigenpair residual {resid:.2e} exceeds 1e-10", partial=spec)
    return spec


def eig_hermitian(m, vectors: bool = False) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    m = _as_square(m)
    scale = np.linalg.norm(m, 2) if m.size else 0.0
    if np.linalg.norm(m - m.conj().T, 2) > 1e-12 * max(scale, 1.0):
        raise ContractViolationError("matrix is not Hermitian")
    if vectors:
        w, v = sla.eigh(m, check_finite=False)
        resid = float(np.max(np.linalg.norm(m @ v - v * w, axis=0), initial=0.0) / max(scale, 1e-300))
        return Spectrum(w.astype(float), v, resid)
    return Spectrum(sla.eigvalsh(m, check_finite=False).astype(float))


def nullspace_real(a, tol: float = DEFAULT_NULL_TOL) -> list:
    """Orthonormal basis of the numerical nullspace of a real matrix.

    Singular values below ``tol * s_max`` count as zero.  The raw SVD basis
    is only defined up to a rotation, so the returned vectors are obtained by
    Gram-Schmidt on the columns of the nullspace projector in index order;
    that makes the basis a function of the subspace alone.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if tol <= 0:
        raise ValueError("tol must be positive")
    ncols = a.shape[1]
    if a.size == 0 or not np.any(a):
        raw = np.eye(ncols)
    else:
        _, s, vt = np.linalg.svd(a, full_matrices=True)
        rank = int(np.count_nonzero(s > tol * s[0]))
        raw = vt[rank:].T
    if raw.shape[1] == 0:
        return []
    proj = raw @ raw.T
    basis = []
    for j in range(ncols):
        v = proj[:, j].copy()
        for _ in range(2):
            for b in basis:
                v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            basis.append(v / norm)
        if len(basis) == raw.shape[1]:
            break
    return basis


def poly_real_roots(p, imag_tol: float = 1e-6) -> np.ndarray:
    """Real roots (with multiplicity) of a real polynomial, ascending.

    Companion-matrix roots whose imaginary part is below ``imag_tol`` in
    relative terms are kept and polished with Newton's method.
    """
    coeffs = np.asarray(p.coefficients if isinstance(p, SecularPolynomial) else p, dtype=float)
    coeffs = np.trim_zeros(coeffs, "f")
    if coeffs.size < 2:
        raise ValueError("polynomial degree must be >= 1")
    deriv = np.polyder(coeffs)
    roots = np.roots(coeffs)
    keep = np.abs(roots.imag) <= imag_tol * (1.0 + np.abs(roots))
    out = []
    for r in np.sort(roots[keep].real):
        x = r
        for _ in range(50):
            d = np.polyval(deriv, x)
            if d == 0:
                break
            step = np.polyval(coeffs, x) / d
            x_new = x - step
            # Newton may wander near multiple roots; keep the better point.
            if abs(np.polyval(coeffs, x_new)) >= abs(np.polyval(coeffs, x)):
                break
            x = x_new
            if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
                break
        out.append(x)
    return np.sort(np.array(out, dtype=float))


def bisect(predicate: Callable[[float], bool], lo: float, hi: float, tol: float, max_iter: int = 400) -> float:
    """Locate the switching point of a monotone boolean predicate.

    Returns x with |x - x*| <= tol.  ``predicate(lo)`` and ``predicate(hi)``
    must differ.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p_lo = bool(predicate(lo))
    if p_lo == bool(predicate(hi)):
        raise BracketError(f"predicate has the same value {p_lo} at both ends of [{lo}, {hi}]")
    for _ in range(max_iter):
        if abs(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if bool(predicate(mid)) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_bracket(predicate: Callable[[float], bool], lo: float, hi: float, tol: float,
                   rel_tol: float = 0.0, max_iter: int = 400) -> tuple:
    """Like :func:`bisect` but return the final bracket (lo, hi).

    Stops when hi - lo <= max(tol, rel_tol * |hi|).
    """
    p_lo = bool(predicate(lo))
    if p_lo == bool(predicate(hi)):
        raise BracketError(f"predicate has the same value {p_lo} at both ends of [{lo}, {hi}]")
    for _ in range(max_iter):
        if abs(hi - lo) <= max(tol, rel_tol * abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if bool(predicate(mid)) == p_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_matrix_eigvals(m: np.ndarray) -> np.ndarray:
    """Unsorted eigenvalues of a small real matrix; the hot path of parameter scans."""
    return np.linalg.eigvals(m)
