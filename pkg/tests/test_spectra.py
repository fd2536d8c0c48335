import math

import numpy as np
import pytest

from oracles import energies_n2, energies_n4_z0, energies_n4_z3, exact_eigenvalues, free_laplacian
from ptlattice.lattice import HamiltonianSpec
from ptlattice.reference import ALPHA_TOL, ALPHA_Z3, ENERGY_TOL
from ptlattice.spectra import (
    RealFormFamily,
    all_real,
    count_real,
    find_alpha,
    free_laplacian_energies,
    real_energies,
    reality_intervals,
    spectrum,
    sweep,
    track_branches,
)


def test_spectrum_matches_exact_charpoly():
    for n, a in [(4, 0.02), (6, 0.005), (8, 0.004)]:
        ev = spectrum(HamiltonianSpec(n, a, 3.0)).eigenvalues
        ex = np.sort_complex(exact_eigenvalues(n, a, 3))
        assert np.allclose(np.sort_complex(ev), ex, atol=1e-10)


def test_spectrum_vectors_are_for_h():
    spec = HamiltonianSpec(4, 0.02, 3.0)
    s = spectrum(spec, vectors=True)
    assert s.residual_bound <= 1e-10


def test_free_laplacian():
    assert np.allclose(free_laplacian_energies(6), free_laplacian(6))
    assert np.allclose(real_energies(6, 0.0, 3.0), free_laplacian(6), atol=1e-12)


def test_sweep_n2_circle():
    res = sweep(HamiltonianSpec(2, 0.0, 3.0), -1.0, 1.0, 101)
    assert res.eigenvalues.shape == (101, 2)
    a, e = res.real_points()
    assert a.size > 0
    assert np.max(np.abs((e - 2) ** 2 + a**2 - 1)) <= 1e-9


def test_sweep_n4_z0_point():
    res = sweep(HamiltonianSpec(4, 0.0, 0.0), 0.3, 0.4, 2)
    assert np.all(res.is_real[0])
    assert np.allclose(res.eigenvalues[0].real, energies_n4_z0(0.3), atol=1e-12)


def test_sweep_validation():
    with pytest.raises(ValueError):
        sweep(HamiltonianSpec(2, 0.0, 3.0), 0, 1, 1)
    with pytest.raises(ValueError):
        sweep(HamiltonianSpec(2, 0.0, 3.0), 1, 0, 5)


def test_sweep_threads_identical():
    base = HamiltonianSpec(6, 0.0, 2.0)
    r1 = sweep(base, -0.1, 0.1, 41, threads=1)
    r4 = sweep(base, -0.1, 0.1, 41, threads=4)
    assert np.array_equal(r1.eigenvalues, r4.eigenvalues)
    assert len(r1.branches) == 41 and len(r1.branches[0]) == 6


@pytest.mark.parametrize("a", [0.0, 0.01, 0.03])
def test_closed_form_n4_z3(a):
    assert np.allclose(real_energies(4, a, 3.0), energies_n4_z3(a), atol=1e-10)


def test_closed_form_n2():
    for a in (0.0, 0.5, 0.99):
        assert np.allclose(real_energies(2, a, 7.0), energies_n2(a), atol=1e-12)


def test_alpha_n2():
    ep = find_alpha(2, 3.0, tol=1e-13)
    assert ep.alpha == pytest.approx(1.0, abs=1e-12)
    assert ep.degenerate_energy == pytest.approx(2.0, abs=1e-3)


def test_alpha_n4_exact():
    ep = find_alpha(4, 3.0, tol=1e-15)
    assert abs(ep.alpha - (0.5 - math.sqrt(69) / 18)) <= 1e-12
    assert ep.degenerate_energy == pytest.approx(2.0, abs=1e-3)
    assert ep.merged_pair == (1, 2)


def test_alpha_n4_z0_edge():
    ep = find_alpha(4, 0.0, tol=1e-14)
    assert abs(ep.alpha - math.sqrt(5) / 4) <= 1e-9


def test_alpha_n8_two_pairs():
    ep = find_alpha(8, 3.0)
    assert abs(ep.alpha - ALPHA_Z3[8][0]) <= ALPHA_TOL
    assert abs(ep.degenerate_energy - ALPHA_Z3[8][1]) <= ENERGY_TOL
    assert len(ep.merged_pairs) == 2
    (i, j), (k, m) = ep.merged_pairs
    # up-down partners: indices mirror about the centre
    assert (i + m, j + k) == (7, 7)


def test_alpha_decreasing_in_n():
    alphas = [find_alpha(n, 3.0).alpha for n in range(2, 16, 2)]
    assert all(x > y for x, y in zip(alphas, alphas[1:]))


def test_alpha_brackets_reality():
    ep = find_alpha(6, 3.0, tol=1e-13)
    assert all_real(6, ep.alpha * (1 - 1e-8), 3.0)
    assert not all_real(6, ep.alpha * (1 + 1e-8), 3.0)
    assert all_real(6, -ep.alpha * (1 - 1e-8), 3.0)


def test_alpha_skips_no_complex_window():
    # a short complex window near a = 0.000667 precedes a return to full reality
    ep = find_alpha(8, 3.95)
    assert not all_real(8, ep.alpha * 1.001, 3.95)
    grid = np.linspace(0, ep.alpha * 0.999, 400)
    assert all(all_real(8, a, 3.95) for a in grid)


def test_alpha_unbounded_report():
    ep = find_alpha(2, 3.0, a_cap=0.5)
    assert not ep.bounded and math.isinf(ep.alpha)


def test_safe_coupling_is_real():
    for n, z in [(4, 3.0), (10, 0.0), (14, 5.0)]:
        fam = RealFormFamily(n, z)
        assert fam.real_values(fam.safe_coupling()).size == n


def test_reality_intervals_n2():
    ivs = reality_intervals(HamiltonianSpec(2, 0.0, 3.0), 2.0)
    assert [iv.n_real for iv in ivs] == [2, 0]
    assert ivs[0].hi == pytest.approx(1.0, abs=1e-8)
    assert ivs[0].lo == 0.0 and ivs[-1].hi == 2.0


def test_reality_intervals_n4_z0():
    ivs = reality_intervals(HamiltonianSpec(4, 0.0, 0.0), 1.0)
    assert ivs[0].n_real == 4
    assert ivs[0].hi == pytest.approx(math.sqrt(5) / 4, abs=1e-8)
    assert all(iv.n_real < 4 for iv in ivs[1:])


def test_reality_intervals_anomaly_window():
    ivs = reality_intervals(HamiltonianSpec(4, 0.0, 81 / 64), 1.0)
    counts = [iv.n_real for iv in ivs]
    assert counts[0] == 4 and counts[-1] == 0
    window = [iv for iv in ivs if iv.n_real == 2 and iv.lo > 0.3]
    assert window and window[0].lo < 0.5 < window[0].hi


def test_reality_intervals_cover():
    ivs = reality_intervals(HamiltonianSpec(6, 0.0, 2.0), 0.5)
    for x, y in zip(ivs, ivs[1:]):
        assert x.hi == y.lo and x.n_real != y.n_real


def test_track_branches_continuity():
    grid = np.linspace(0, 0.03, 31)
    tr = track_branches(HamiltonianSpec(4, 0.0, 3.0), grid)
    assert tr.shape == (31, 4)
    # each branch moves continuously
    assert np.max(np.abs(np.diff(tr, axis=0))) < 0.1


def test_count_real_past_alpha():
    assert count_real(4, 0.05, 3.0) == 2
    assert count_real(4, 10.0, 3.0) == 0
