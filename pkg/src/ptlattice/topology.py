"""Topology of the real spectral locus {(a, e): e real eigenvalue of H(a, z)}.

Each of the N levels present at a = 0 stays real and keeps its place in the
ordering until it meets a neighbour at an exceptional point; the two
branches then close into one "deformed circle".  Which level pairs with
which fixes the topology: circles whose energy intervals at a = 0 are nested
encircle one another, disjoint ones are stacked vertically.

The locus is traced for a >= 0 only; it is mirror symmetric in a.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DegenerateTopologyError, ResolutionError
from .lattice import check_dimension
from .linalg import DEFAULT_TOL_REAL, bisect_bracket
from .spectra import RealFormFamily, find_alpha, free_laplacian_energies

log = logging.getLogger(__name__)

__all__ = [
    "Pattern",
    "Circle",
    "Encircle",
    "VStack",
    "vstack",
    "parse_pattern",
    "enumerate_patterns",
    "fibonacci_count",
    "LocusComponent",
    "AnomalyInterval",
    "CriticalExponentReport",
    "extract_locus",
    "pattern_from_pairs",
    "classify",
    "critical_exponents",
    "detect_anomalies",
]


# ---------------------------------------------------------------------------
# pattern grammar


class Pattern:
    """Recursive circle arrangement; ``str(p)`` is the canonical serialization."""

    @property
    def leaves(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Circle(Pattern):
    @property
    def leaves(self) -> int:
        return 1

    def __str__(self):
        return "C"


@dataclass(frozen=True)
class Encircle(Pattern):
    inner: Pattern

    @property
    def leaves(self) -> int:
        return 1 + self.inner.leaves

    def __str__(self):
        return f"E({self.inner})"


@dataclass(frozen=True)
class VStack(Pattern):
    """Vertically ordered arrangement, bottom to top."""

    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("a vertical stack needs at least two members")
        if any(isinstance(c, VStack) for c in self.children):
            raise ValueError("nested VStack; build stacks with vstack() to flatten")

    @property
    def leaves(self) -> int:
        return sum(c.leaves for c in self.children)

    def __str__(self):
        return "V(" + ",".join(str(c) for c in self.children) + ")"


def vstack(*parts: Optional[Pattern]) -> Pattern:
    """Canonical vertical stack: flattens nested stacks and drops empty parts."""
    flat = []
    for p in parts:
        if p is None:
            continue
        flat.extend(p.children if isinstance(p, VStack) else (p,))
    if len(flat) == 1:
        return flat[0]
    return VStack(tuple(flat))


def parse_pattern(text: str) -> Pattern:
    """Inverse of ``str(pattern)``."""
    text = text.strip()
    pos = 0

    def parse():
        nonlocal pos
        head = text[pos:pos + 1]
        if head == "C":
            pos += 1
            return Circle()
        if head in ("E", "V") and text[pos + 1:pos + 2] == "(":
            pos += 2
            items = [parse()]
            while text[pos:pos + 1] == ",":
                pos += 1
                items.append(parse())
            if text[pos:pos + 1] != ")":
                raise ValueError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            if head == "E":
                if len(items) != 1:
                    raise ValueError(f"E() takes one argument in {text!r}")
                return Encircle(items[0])
            return VStack(tuple(items))
        raise ValueError(f"unexpected token at {pos} in {text!r}")

    out = parse()
    if pos != len(text):
        raise ValueError(f"trailing characters in {text!r}")
    return out


def enumerate_patterns(k: int) -> list:
    """All arrangements of k circles reachable by the two growth rules.

    T_k = {E(p) : p in T_(k-1)}  +  {V(C, p, C) : p in T_(k-2)}, with
    T_1 = {C} and T_0 = {empty}.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    levels = {0: [None], 1: [Circle()]}
    for j in range(2, k + 1):
        out = [Encircle(p) for p in levels[j - 1]]
        out += [vstack(Circle(), p, Circle()) for p in levels[j - 2]]
        seen, uniq = set(), []
        for p in out:
            if str(p) not in seen:
                seen.add(str(p))
                uniq.append(p)
        levels[j] = uniq
    return list(levels[k])


def fibonacci_count(k: int) -> int:
    """F_(k-1) in the convention F_0 = 1, F_1 = 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f_prev, f = 1, 1  # F_(-1) = 1 keeps F_1 = F_0 + F_(-1) = 2
    for _ in range(k - 1):
        f_prev, f = f, f + f_prev
    return f


# ---------------------------------------------------------------------------
# locus tracing


@dataclass
class LocusComponent:
    """One closed curve of the real locus (a >= 0 half).

    ``levels`` lists the levels at a = 0 that the curve passes through, as
    indices into the ascending free spectrum; for a circle anchored at a = 0
    these are the two levels that eventually merge.  A curve can pass through
    a stretch of complex-conjugate pairs and re-emerge as an island before
    closing; ``islands`` counts such detached pieces and ``a_emerge`` is where
    the first one appears.  Curves with no level at a = 0 are ``anomalous``;
    their ``energy_interval`` spans the energies where they appear.
    """

    levels: tuple
    energy_interval: tuple
    a_merge: Optional[float]
    a_emerge: float = 0.0
    anomalous: bool = False
    islands: int = 0

    @property
    def closed(self) -> bool:
        return self.a_merge is not None

    def as_dict(self):
        return {
            "levels": list(self.levels),
            "energy_interval": list(self.energy_interval),
            "a_emerge": self.a_emerge,
            "a_merge": self.a_merge,
            "anomalous": self.anomalous,
            "islands": self.islands,
        }


@dataclass
class _Level:
    born: float
    energy: float
    died: Optional[float] = None


class _Trace:
    """Labelled levels glued into curves by merge and emergence events."""

    def __init__(self, e0: np.ndarray):
        self.n = e0.size
        self.levels = [_Level(0.0, float(e)) for e in e0]
        self.parent = list(range(self.n))
        self.live = list(range(self.n))  # labels of current real levels, ascending energy
        self.a_end = 0.0

    def root(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def glue(self, x, y):
        rx, ry = self.root(x), self.root(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def new_level(self, a, energy):
        self.levels.append(_Level(float(a), float(energy)))
        self.parent.append(len(self.parent))
        return len(self.levels) - 1

    def anchored_open(self) -> bool:
        """True while some curve through a = 0 has not closed yet."""
        return any(self.root(x) < self.n for x in self.live)

    def groups(self) -> dict:
        out = {}
        for x in range(len(self.levels)):
            out.setdefault(self.root(x), []).append(x)
        return out

    def components(self, e0: np.ndarray) -> list:
        comps = []
        for members in self.groups().values():
            orig = tuple(x for x in members if x < self.n)
            isl = [x for x in members if x >= self.n]
            deaths = [self.levels[x].died for x in members]
            a_merge = None if any(d is None for d in deaths) else float(max(deaths))
            if orig:
                comps.append(LocusComponent(orig, tuple(float(e0[x]) for x in orig), a_merge,
                                            min((self.levels[x].born for x in isl), default=0.0),
                                            False, len(isl) // 2))
            else:
                births = [self.levels[x].energy for x in isl]
                comps.append(LocusComponent(tuple(isl), (min(births), max(births)), a_merge,
                                            min(self.levels[x].born for x in isl), True, len(isl) // 2))
        return comps


DEFAULT_STEPS = 200
GAP_SEPARATION = 0.2
MAX_REFINE_DEPTH = 12
A_LIMIT = 1e8
EVENT_GROUPING = 1e-9


class _Tracer(RealFormFamily):
    """Real levels at a given coupling, memoised for the bisections."""

    def __init__(self, n: int, z: float, tol_real: float):
        super().__init__(n, z)
        self.tol_real = tol_real
        self._cache = {}

    def real_at(self, a: float) -> np.ndarray:
        hit = self._cache.get(a)
        if hit is None:
            if len(self._cache) > 4096:
                self._cache.clear()
            hit = self._cache[a] = self.real_values(a, self.tol_real)
        return hit


def _pick_pairs(values: np.ndarray, count: int, what: str, where: float) -> list:
    """Disjoint adjacent pairs with the smallest gaps; refuse ambiguous picks."""
    gaps = np.diff(values)
    chosen = []
    for g in np.argsort(gaps, kind="stable"):
        g = int(g)
        if all(abs(g - c) > 1 for c in chosen):
            chosen.append(g)
        if len(chosen) == count:
            break
    if len(chosen) < count:
        raise ResolutionError(f"cannot identify {count} {what} pair(s) at a={where!r}")
    rest = [gaps[g] for g in range(gaps.size) if g not in chosen]
    if rest and max(gaps[c] for c in chosen) > GAP_SEPARATION * min(rest):
        raise DegenerateTopologyError(
            f"ambiguous {what} at a={where!r}: gaps {sorted(gaps)[:count + 1]} do not separate"
        )
    return sorted(chosen)


def _trace(n: int, z: float, a_cap: Optional[float], steps: int, tol_real: float,
           stop_when_closed: bool) -> _Trace:
    n = check_dimension(n)
    ep = find_alpha(n, z, tol=1e-13, a_cap=A_LIMIT, tol_real=tol_real)
    if not ep.bounded:
        raise ResolutionError(f"spectrum of n={n}, z={z} stays real up to a={A_LIMIT:g}")
    tracer = _Tracer(n, z, tol_real)
    e0 = free_laplacian_energies(n)
    trace = _Trace(e0)
    a0 = ep.alpha * (1.0 - 1e-9)
    if tracer.real_at(a0).size != n:
        a0 = ep.alpha * (1.0 - 1e-6)
    cap = a_cap if a_cap is not None else 3.0 * ep.alpha
    ratio = (cap / a0) ** (1.0 / max(steps, 2))
    ratio = min(max(ratio, 1.0 + 1e-4), 1.05)

    def merge(hi, before, after):
        lost = before.size - after.size
        if lost % 2:
            raise ResolutionError(f"odd number of levels lost near a={hi!r}")
        picks = _pick_pairs(before, lost // 2, "merging", hi)
        for g in picks:
            i, j = trace.live[g], trace.live[g + 1]
            trace.glue(i, j)
            trace.levels[i].died = trace.levels[j].died = float(hi)
        drop = {g for p in picks for g in (p, p + 1)}
        trace.live = [x for q, x in enumerate(trace.live) if q not in drop]

    def emerge(hi, before, after):
        gained = after.size - before.size
        if gained % 2:
            raise ResolutionError(f"odd number of levels gained near a={hi!r}")
        picks = _pick_pairs(after, gained // 2, "emerging", hi)
        old = iter(trace.live)
        live = []
        for q in range(after.size):
            live.append(trace.new_level(hi, after[q]) if q in {p for p in picks} | {p + 1 for p in picks}
                        else next(old))
        for g in picks:
            trace.glue(live[g], live[g + 1])
        trace.live = live

    def local_gaps(v):
        g = np.diff(v)
        return np.minimum(np.append(g, np.inf), np.insert(g, 0, np.inf))

    def process(a, b, depth=0):
        va, vb = tracer.real_at(a), tracer.real_at(b)
        if va.size == vb.size:
            if va.size == 0:
                return
            # near an exceptional point the pair gap goes like sqrt(a - a_ep):
            # each member moves by about half the change of that gap, plus a
            # drift of the pair centre, so measure against the wider end
            room = 0.75 * np.maximum(local_gaps(va), local_gaps(vb))
            if np.all(np.abs(vb - va) < room):
                return
            if depth >= MAX_REFINE_DEPTH:
                raise ResolutionError(f"branch matching ambiguous on [{a!r}, {b!r}] after refinement")
            mid = 0.5 * (a + b)
            process(a, mid, depth + 1)
            process(mid, b, depth + 1)
            return
        lo = a
        for _ in range(4 * n + 8):
            c_lo = tracer.real_at(lo).size
            if c_lo == vb.size:
                process(lo, b, depth + 1)
                return
            l, h = bisect_bracket(lambda x: tracer.real_at(x).size == c_lo, lo, b, tol=0.0, rel_tol=1e-12)
            before, after = tracer.real_at(l), tracer.real_at(h)
            # mirror-image events coincide in exact arithmetic but are split
            # by rounding; absorb a same-direction change right behind this one
            h2 = min(h * (1.0 + EVENT_GROUPING), b)
            later = tracer.real_at(h2)
            if (later.size - after.size) * (after.size - before.size) > 0:
                after, h = later, h2
            if after.size < before.size:
                merge(h, before, after)
            else:
                emerge(h, before, after)
            lo = h
        raise ResolutionError(f"too many events on [{a!r}, {b!r}]")

    a = a0
    while True:
        b = a * ratio
        process(a, b)
        a = b
        if stop_when_closed and not trace.anchored_open():
            break
        if a >= cap:
            if stop_when_closed and a < A_LIMIT:
                cap *= 3.0
                continue
            break
    trace.a_end = a
    return trace, e0


def extract_locus(n: int, z: float, a_cap: Optional[float] = None, steps: int = DEFAULT_STEPS,
                  tol_real: float = DEFAULT_TOL_REAL) -> list:
    """Closed components of the real locus.

    ``a_cap`` defaults to three times the central exceptional point and is
    grown until every level present at a = 0 has merged.  ``steps`` sets the
    geometric grid density on [alpha, a_cap]; steps are refined automatically
    where levels move too fast relative to their gaps.  Components from
    anomalous islands met on the way are included with ``anomalous=True``.
    """
    trace, e0 = _trace(n, z, a_cap, steps, tol_real, stop_when_closed=True)
    return sorted(trace.components(e0), key=lambda c: (c.anomalous, c.energy_interval, c.a_emerge))


def pattern_from_pairs(pairs, n: Optional[int] = None) -> Pattern:
    """Nesting forest of level pairs (i, j) turned into a canonical pattern.

    Levels at a = 0 are distinct and sorted, so comparing indices is the same
    as comparing the energy intervals.
    """
    ivs = sorted((min(p), max(p)) for p in pairs)
    for x in range(len(ivs)):
        for y in range(x + 1, len(ivs)):
            (a0, a1), (b0, b1) = ivs[x], ivs[y]
            if a0 < b0 < a1 < b1:
                raise DegenerateTopologyError(f"crossing circles {ivs[x]} and {ivs[y]}")
    if n is not None and sorted(i for p in ivs for i in p) != list(range(n)):
        raise DegenerateTopologyError("level pairing does not cover every level exactly once")

    def build(group):
        roots = [iv for iv in group if not any(o[0] < iv[0] and iv[1] < o[1] for o in group)]
        nodes = []
        for r in roots:
            inner = [iv for iv in group if r[0] < iv[0] and iv[1] < r[1]]
            nodes.append(Encircle(build(inner)) if inner else Circle())
        return vstack(*nodes)

    return build(ivs)


def classify(n: int, z: float, steps: int = DEFAULT_STEPS, tol_real: float = DEFAULT_TOL_REAL) -> Pattern:
    """Topology class of the real locus at exponent z (anomalous islands ignored)."""
    comps = extract_locus(n, z, steps=steps, tol_real=tol_real)
    pairs = [c.levels for c in comps if not c.anomalous]
    if any(len(p) != 2 for p in pairs):
        raise DegenerateTopologyError(f"a curve through a=0 meets {max(map(len, pairs))} levels at n={n}, z={z}")
    pattern = pattern_from_pairs(pairs, n)
    if pattern.leaves != n // 2:
        raise DegenerateTopologyError(f"found {pattern.leaves} circles, expected {n // 2}")
    return pattern


@dataclass
class CriticalExponentReport:
    """Boundaries (descending) and the pattern on each interval between them."""

    n: int
    boundaries: list
    patterns: list

    def __post_init__(self):
        if len(self.patterns) != len(self.boundaries) + 1:
            raise ValueError("need exactly one more pattern than boundaries")

    def as_dict(self):
        return {
            "n": self.n,
            "boundaries": list(self.boundaries),
            "patterns": [str(p) for p in self.patterns],
        }


def _classify_retry(n, z, tol, steps):
    try:
        return classify(n, z, steps=steps)
    except (DegenerateTopologyError, ResolutionError):
        for dz in (10 * tol, -10 * tol):
            try:
                return classify(n, z + dz, steps=steps)
            except (DegenerateTopologyError, ResolutionError):
                pass
        raise


def critical_exponents(n: int, z_min: float, z_max: float, tol: float = 1e-6, z_step: float = 0.05,
                       steps: int = DEFAULT_STEPS) -> CriticalExponentReport:
    """Exponents in (z_min, z_max) where the locus topology changes.

    A coarse scan with spacing ``z_step`` brackets each change; bisection
    compares canonical serializations.  A bracket holding several changes is
    resolved recursively.
    """
    if not z_min < z_max:
        raise ValueError("z_min must be smaller than z_max")
    n = check_dimension(n)
    num = max(int(np.ceil((z_max - z_min) / z_step)), 1) + 1
    zs = np.linspace(z_max, z_min, num)
    pats = [classify(n, zs[0], steps=steps)]
    pats += [_classify_retry(n, z, tol, steps) for z in zs[1:-1]]
    pats.append(classify(n, zs[-1], steps=steps) if num > 1 else pats[0])

    def split(hi, p_hi, lo, p_lo):
        # hi > lo; returns [(boundary, pattern_below)] in descending order
        if str(p_hi) == str(p_lo):
            return []
        top, bottom, p_bottom = hi, lo, p_lo
        while top - bottom > tol:
            mid = 0.5 * (top + bottom)
            p_mid = _classify_retry(n, mid, tol, steps)
            if str(p_mid) == str(p_hi):
                top = mid
            else:
                bottom, p_bottom = mid, p_mid
        b = 0.5 * (top + bottom)
        return [(b, p_bottom)] + split(bottom, p_bottom, lo, p_lo)

    boundaries, patterns = [], [pats[0]]
    for i in range(1, num):
        for b, p in split(zs[i - 1], pats[i - 1], zs[i], pats[i]):
            boundaries.append(float(b))
            patterns.append(p)
    return CriticalExponentReport(n, boundaries, patterns)


@dataclass(frozen=True)
class AnomalyInterval:
    """Coupling range of a partial-reality island detached from a = 0."""

    lo: float
    hi: float
    n_real: int
    island_levels: int

    def as_dict(self):
        return {"lo": self.lo, "hi": self.hi, "n_real": self.n_real, "island_levels": self.island_levels}


def detect_anomalies(n: int, z: float, a_cap: float, steps: int = 2000,
                     tol_real: float = DEFAULT_TOL_REAL) -> list:
    """Partial-reality islands with 0 < a <= a_cap.

    Overlapping islands are merged into one interval; ``n_real`` is the
    number of real eigenvalues at the interval midpoint and
    ``island_levels`` how many levels emerged inside the interval.
    """
    if a_cap <= 0:
        raise ValueError("a_cap must be positive")
    trace, _ = _trace(n, z, a_cap, steps, tol_real, stop_when_closed=False)
    spans = []
    for x in range(n, len(trace.levels)):
        lvl = trace.levels[x]
        spans.append((lvl.born, a_cap if lvl.died is None else min(lvl.died, a_cap)))
    spans.sort()
    merged = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            m = merged[-1]
            merged[-1] = [m[0], max(m[1], hi), m[2] + 1]
        else:
            merged.append([lo, hi, 1])
    tracer = _Tracer(n, z, tol_real)
    out = []
    for lo, hi, k in merged:
        mid = 0.5 * (lo + hi)
        out.append(AnomalyInterval(float(lo), float(hi), int(tracer.real_at(mid).size), int(k)))
    return out
