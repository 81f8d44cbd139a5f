import numpy as np
import pytest

from nhmf_dimer import ModelParams
from nhmf_dimer.errors import InputError, PoleError
from nhmf_dimer.numerics import projective_distance
from nhmf_dimer.ssp_transport import (
    SSPConfig,
    exact_reflection_roots,
    exact_transmission_curve,
    gamma_of_r,
    mf_reflection,
    mf_transmission_curves,
    ssp_one_particle_matrix,
    transmission_from_r,
)
from oracles import local_maxima, one_particle_reflection

P = ModelParams(u=0.5)
BETA = 0.1


@pytest.fixture(scope="module")
def ssp_cfg():
    return SSPConfig(beta=BETA, e_grid=np.arange(-3.0, 3.0 + 1e-12, 0.005))


@pytest.fixture(scope="module")
def mf_curves(ssp_cfg, search_cfg):
    return mf_transmission_curves(P, ssp_cfg, search_cfg)


def test_gamma_of_r_examples():
    assert gamma_of_r(1.0, 0.0) == pytest.approx(1.0)
    assert gamma_of_r(0.1, 0.0) == pytest.approx(0.1)
    assert gamma_of_r(1.0, 1j) == pytest.approx(1j)
    with pytest.raises(PoleError):
        gamma_of_r(0.5, 1.0)


def test_one_particle_matrix_examples():
    m = ssp_one_particle_matrix(0.0, 0.0, 1.0, 1.0, 0.0)
    assert np.allclose(m, [[1j, -1.0], [-1.0, -1j]])
    assert abs(np.linalg.det(m - 0.0 * np.eye(2))) < 1e-14
    m = ssp_one_particle_matrix(0.3, -0.2, 1.0, 1e-12, 0.1)
    assert np.allclose(m, [[0.3, -1.0], [-1.0, -0.2]], atol=1e-11)


def test_transmission_from_r():
    assert transmission_from_r(0.0) == 1.0
    assert transmission_from_r(np.exp(0.7j)) == pytest.approx(0.0, abs=1e-15)
    assert transmission_from_r(0.6) == pytest.approx(0.64)


def test_config_validation():
    with pytest.raises(InputError):
        SSPConfig(beta=0.0)
    with pytest.raises(InputError):
        SSPConfig(beta=0.1, e_grid=[1.0, 0.5])


def test_exact_roots_residuals_and_count():
    from nhmf_dimer.ssp_transport import _det_dressed

    for e in (-2.0, 0.0, 0.5, 1.7):
        roots = exact_reflection_roots(P, BETA, e)
        assert 1 <= len(roots) <= 2
        for r in roots:
            g = gamma_of_r(BETA, r)
            res = abs(_det_dressed(P, BETA, np.array([g]), np.array([e]))[0])
            assert res <= 1e-9


def test_exact_roots_u0_factorization():
    p0 = P.with_u(0.0)
    eps_dn = np.linalg.eigvalsh(p0.one_particle_matrices()[1])
    for e in np.arange(-3.0, 3.0001, 0.5):
        roots = sorted(exact_reflection_roots(p0, BETA, float(e)), key=lambda z: (z.real, z.imag))
        ref = sorted(
            (one_particle_reflection(0.25, -0.25, 1.0, BETA, e - eps) for eps in eps_dn),
            key=lambda z: (z.real, z.imag),
        )
        assert max(abs(a - b) for a, b in zip(roots, ref)) <= 1e-9


def test_exact_roots_disconnected_molecule():
    p = ModelParams(t=1e-6, u=0.5)
    for e in (-0.7, 0.4):
        roots = exact_reflection_roots(p, BETA, e)
        physical = min(roots, key=lambda r: abs(abs(r) - 1.0))
        assert abs(physical) == pytest.approx(1.0, abs=1e-6)
        assert transmission_from_r(physical) == pytest.approx(0.0, abs=1e-6)


def test_exact_ground_curve_two_maxima(ssp_cfg, search_cfg):
    curve = exact_transmission_curve(P, ssp_cfg, "ground", search_cfg)
    peaks = local_maxima(curve.energies, curve.transmissions)
    assert len(peaks) == 2
    assert all(p.branch_flag for p in curve.points)
    dT = np.abs(np.diff(curve.transmissions))
    assert np.max(dT) <= 0.2


def test_exact_excited_curve_single_low_peak(ssp_cfg, search_cfg):
    curve = exact_transmission_curve(P, ssp_cfg, "excited", search_cfg)
    peaks = local_maxima(curve.energies, curve.transmissions)
    window = [p for p in peaks if abs(p) <= 0.2]
    assert len(window) == 1
    energies = curve.energies
    assert np.all(np.diff(energies) > 0)


def test_exact_curve_flag_invariant(ssp_cfg, search_cfg):
    curve = exact_transmission_curve(P, ssp_cfg, "ground", search_cfg)
    for pt in curve.points:
        if pt.branch_flag:
            assert -1e-9 <= pt.transmission <= 1 + 1e-9
            assert pt.transmission == pytest.approx(1 - abs(pt.r) ** 2, abs=1e-12)


def test_exact_curve_fixed_shift_and_index_pick(search_cfg):
    cfg = SSPConfig(beta=BETA, e_grid=np.arange(-1.0, 1.0 + 1e-12, 0.1), shift_mode=0.25)
    curve = exact_transmission_curve(P, cfg, "ground", search_cfg)
    assert curve.shift == 0.25
    assert curve.energies[0] == pytest.approx(-1.25)
    cfg2 = SSPConfig(beta=BETA, e_grid=np.arange(-1.0, 1.0 + 1e-12, 0.1), root_pick=0)
    curve2 = exact_transmission_curve(P, cfg2, "excited", search_cfg)
    assert len(curve2.points) == len(cfg2.e_grid)


def test_mf_reflection_beta_limit(census05):
    ground = min(
        (p for p in census05 if p.point_class == "real-representable"),
        key=lambda p: p.nh_energy.real,
    )
    # at the channel resonance the required dressing vanishes with beta
    e_res = float(np.linalg.eigvals(ground.fock.up).real.max())
    pt, sol = mf_reflection(P, 1e-5, e_res, ground)
    d = max(
        projective_distance(pt.orb.up, ground.orb.up),
        projective_distance(pt.orb.dn, ground.orb.dn),
    )
    assert d <= 1e-6


def test_mf_reflection_residuals(census05):
    from nhmf_dimer.ssp_transport import _dressed_params, gamma_of_r
    from nhmf_dimer.meanfield import nhmf_gradient

    ground = min(
        (p for p in census05 if p.point_class == "real-representable"),
        key=lambda p: p.nh_energy.real,
    )
    for e in (-1.5, 0.3, 1.1):
        pt, sol = mf_reflection(P, BETA, e, ground)
        assert pt.grad_residual <= 1e-10
        dressed = _dressed_params(P, BETA, gamma_of_r(BETA, sol.r))
        assert np.max(np.abs(nhmf_gradient(dressed, pt.orb))) <= 1e-10
        fock_up = np.array(pt.fock.up)
        assert abs(np.linalg.det(fock_up - e * np.eye(2))) <= 1e-10


def test_mf_four_curves(mf_curves):
    labels = [c.state_label for c in mf_curves]
    assert labels == ["mf_standard_1", "mf_standard_2", "mf_complex_1", "mf_complex_2"]
    for c in mf_curves:
        T = c.transmissions
        ok = np.isfinite(T)
        assert ok.mean() > 0.98
        flagged_ok = [p for p in c.points if p.branch_flag]
        assert all(-1e-9 <= p.transmission <= 1 + 1e-9 for p in flagged_ok)
        assert np.nanmax(np.abs(np.diff(T[ok]))) <= 0.2


def test_mf_complex_pair_peaks_at_zero(mf_curves):
    for c in mf_curves:
        if not c.state_label.startswith("mf_complex"):
            continue
        peaks = local_maxima(c.energies, c.transmissions)
        assert peaks, f"{c.state_label} has no maxima"
        top = max(peaks, key=lambda e: c.transmissions[np.argmin(np.abs(c.energies - e))])
        assert abs(top) <= 0.15


def test_mf_standard_pair_peaks_at_orbital_energies(mf_curves, census05):
    # the standard channels resonate at the self-consistent orbital energies
    # of the isolated ground state (-0.785 and +1.285 at U = 1/2)
    for c in mf_curves:
        if not c.state_label.startswith("mf_standard"):
            continue
        peaks = sorted(local_maxima(c.energies, c.transmissions))
        assert len(peaks) == 2
        assert peaks[0] == pytest.approx(-0.785, abs=0.05)
        assert peaks[1] == pytest.approx(1.285, abs=0.05)


def test_mf_standard_pair_away_from_zero_channel(mf_curves):
    # the zero-energy channel exists only through the complex branches
    for c in mf_curves:
        if not c.state_label.startswith("mf_standard"):
            continue
        for p in local_maxima(c.energies, c.transmissions):
            assert abs(p) > 0.5


def test_mf_curves_above_bifurcation(search_cfg):
    cfg = SSPConfig(beta=BETA, e_grid=np.arange(-2.0, 2.0 + 1e-12, 0.05))
    labels = [c.state_label for c in mf_transmission_curves(P.with_u(4.0), cfg, search_cfg)]
    assert labels == ["mf_standard_1", "mf_standard_2"]
