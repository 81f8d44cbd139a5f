import numpy as np
import pytest

from nhmf_dimer import ModelParams, build_exact_hamiltonian, exact_spectrum, exact_sweep
from nhmf_dimer.errors import InputError
from oracles import kronecker_u0_energies, symmetric_dimer_energies


def test_params_validation():
    with pytest.raises(InputError):
        ModelParams(t=0.0)
    with pytest.raises(InputError):
        ModelParams(u=-1.0)
    with pytest.raises(InputError):
        ModelParams(h_up_a=np.nan)


def test_is_isolated():
    assert ModelParams(u=1.0).is_isolated
    assert not ModelParams(u=1.0, h_up_a=0.25 + 0.1j).is_isolated


def test_hamiltonian_structure_study_params():
    h = build_exact_hamiltonian(ModelParams(u=0.0))
    assert np.allclose(np.diag(h), [0.25, -0.25, 0.25, -0.25])
    t = 1.0
    expected = np.array(
        [
            [0.25, 0, -t, t],
            [0, -0.25, -t, t],
            [-t, -t, 0.25, 0],
            [t, t, 0, -0.25],
        ]
    )
    assert np.allclose(h, expected)


def test_hamiltonian_symmetric_case_diagonal():
    p = ModelParams(u=3.0, h_up_a=0.0, h_up_b=0.0)
    h = build_exact_hamiltonian(p)
    assert np.allclose(np.diag(h), [3.0, 3.0, 0.0, 0.0])


def test_hamiltonian_transpose_symmetric():
    p = ModelParams(u=2.0, h_up_a=0.3 + 0.2j, h_dn_b=-0.1)
    h = build_exact_hamiltonian(p)
    assert np.max(np.abs(h - h.T)) == 0.0


def test_spectrum_u0_kronecker_oracle():
    p = ModelParams(u=0.0)
    got = exact_spectrum(p).energies
    expected = kronecker_u0_energies(p)
    assert np.max(np.abs(np.sort_complex(got) - expected)) < 1e-9
    ref = np.array([-2.030776406, -0.030776406, 0.030776406, 2.030776406])
    assert np.max(np.abs(np.sort(got.real) - ref)) < 1e-9


def test_spectrum_u_half_first_excited():
    got = np.sort(exact_spectrum(ModelParams(u=0.5)).energies.real)
    assert got[1] == pytest.approx(0.006, abs=1e-3)


@pytest.mark.parametrize("u", [0.0, 1.0, 4.0])
def test_spectrum_symmetric_closed_form(u):
    p = ModelParams(u=u, h_up_a=0.0, h_up_b=0.0)
    got = np.sort(exact_spectrum(p).energies.real)
    assert np.max(np.abs(got - symmetric_dimer_energies(u))) < 1e-9


def test_spectrum_real_for_isolated():
    for u in (0.0, 0.5, 3.0, 10.0):
        spec = exact_spectrum(ModelParams(u=u))
        assert np.max(np.abs(spec.energies.imag)) < 1e-9
        for pair in spec.eigenpairs:
            v = pair.vector * np.exp(-1j * np.angle(pair.vector[np.argmax(np.abs(pair.vector))]))
            assert np.max(np.abs(v.imag)) < 1e-8


def test_trace_identity_along_sweep():
    p = ModelParams()
    for spec in exact_sweep(p, np.linspace(0.0, 10.0, 11)):
        h = build_exact_hamiltonian(spec.params)
        assert abs(np.sum(spec.energies) - np.trace(h)) < 1e-9


def test_sweep_slope_and_perturbative_tails():
    p = ModelParams()
    specs = exact_sweep(p, [8.0, 10.0])
    # top two eigenvalues grow ~linearly in U with unit slope
    top8 = np.sort(specs[0].energies.real)[2:]
    top10 = np.sort(specs[1].energies.real)[2:]
    slopes = (top10 - top8) / 2.0
    assert np.all(np.abs(slopes - 1.0) < 0.05)
    # second-order perturbation theory pins the large-U asymptotes
    e100 = np.sort(exact_spectrum(p.with_u(100.0)).energies.real)
    assert -0.28 <= e100[0] <= -0.26
    assert abs(e100[1] - 0.25) <= 0.03


def test_sweep_branch_continuity():
    p = ModelParams()
    grid = np.round(np.arange(1.0, 1.2001, 0.01), 10)
    energies = np.array([np.sort(s.energies.real) for s in exact_sweep(p, grid)])
    assert np.max(np.abs(np.diff(energies, axis=0))) <= 0.1


def test_sweep_grid_validation():
    p = ModelParams()
    with pytest.raises(InputError):
        exact_sweep(p, [])
    with pytest.raises(InputError):
        exact_sweep(p, [1.0, 0.5])
