"""Cross-module invariant suite: every check is an independent oracle.

Each check returns its measured worst-case value so failures are diagnosable
from the report alone.  The gradient checks look up ``meanfield.nhmf_gradient``
through the module at call time, so a corrupted gradient (however injected)
is caught here even though the stationary search carries its own binding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import meanfield
from .hubbard_exact import ModelParams, build_exact_hamiltonian, exact_spectrum
from .meanfield import (
    OrbitalPair,
    bond_current,
    hmf_energy,
    nh_fock,
    nh_site_densities,
    nhmf_energy,
)
from .numerics import projective_distance
from .ssp_transport import SSPConfig, exact_reflection_roots, mf_transmission_curves
from .stationary_search import SearchConfig, find_hmf_stationary, find_nhmf_stationary


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str


def _random_orbitals(rng: np.random.Generator, n: int, real: bool = False) -> list[OrbitalPair]:
    out = []
    while len(out) < n:
        v = rng.uniform(-2.0, 2.0, size=8)
        if real:
            orb = OrbitalPair(v[0], v[1], v[2], v[3])
        else:
            orb = OrbitalPair(
                complex(v[0], v[4]), complex(v[1], v[5]), complex(v[2], v[6]), complex(v[3], v[7])
            )
        if orb.nh_evaluable(1e-3):  # keep clear of exceptional points
            out.append(orb)
    return out


def _check(name, passed, measured) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), measured=measured)


def check_gauge_invariance(params: ModelParams, rng, n=1000) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        lam = complex(*rng.uniform(0.3, 1.7, 2))
        mu = complex(*rng.uniform(0.3, 1.7, 2))
        scaled = OrbitalPair(lam * orb.a, lam * orb.b, mu * orb.c, mu * orb.d)
        e1, e2 = nhmf_energy(params, orb), nhmf_energy(params, scaled)
        worst = max(worst, abs(e1.nh_energy - e2.nh_energy) / max(1.0, abs(e1.nh_energy)))
        worst = max(worst, abs(e1.h_energy - e2.h_energy) / max(1.0, abs(e1.h_energy)))
    return _check("gauge_invariance", worst <= 1e-12, f"max rel dev {worst:.2e} (tol 1e-12)")


def check_reduction_real(params: ModelParams, rng, n=1000) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n, real=True):
        en = nhmf_energy(params, orb)
        worst = max(
            worst,
            abs(en.nh_energy - en.h_energy) / max(1.0, abs(en.nh_energy)),
        )
    return _check("nh_reduces_to_h_on_reals", worst <= 1e-12, f"max rel dev {worst:.2e} (tol 1e-12)")


def check_h_energy_real(params: ModelParams, rng, n=500) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        fock = meanfield.h_fock(params, orb)
        ray_up = np.vdot(orb.up, fock.up @ orb.up) / np.vdot(orb.up, orb.up)
        ray_dn = np.vdot(orb.dn, fock.dn @ orb.dn) / np.vdot(orb.dn, orb.dn)
        worst = max(worst, abs(np.imag(ray_up + ray_dn)))
    return _check("hermitian_energy_real", worst <= 1e-12, f"max imag {worst:.2e} (tol 1e-12)")


def check_conjugation_covariance(params: ModelParams, rng, n=500) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        en = nhmf_energy(params, orb).nh_energy
        enc = nhmf_energy(params, orb.conjugate()).nh_energy
        worst = max(worst, abs(np.conj(en) - enc) / max(1.0, abs(en)))
        f, fc = nh_fock(params, orb), nh_fock(params, orb.conjugate())
        worst = max(worst, float(np.max(np.abs(np.conj(f.up) - fc.up))))
        worst = max(worst, float(np.max(np.abs(np.conj(f.dn) - fc.dn))))
    return _check("conjugation_covariance", worst <= 1e-12, f"max dev {worst:.2e} (tol 1e-12)")


def check_energy_decomposition(params: ModelParams, rng, n=500) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        en = nhmf_energy(params, orb)
        fock = nh_fock(params, orb)
        eps = meanfield.orbital_energies(fock, orb)
        resid = abs(en.nh_energy - (eps[0] + eps[1] - en.nh_hartree))
        worst = max(worst, resid / max(1.0, abs(en.nh_energy)))
    return _check("energy_decomposition", worst <= 1e-12, f"max rel dev {worst:.2e} (tol 1e-12)")


def check_gradient_fd(params: ModelParams, rng, n=200) -> CheckResult:
    h = 1e-6
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        grad = meanfield.nhmf_gradient(params, orb)
        coeffs = [orb.a, orb.b, orb.c, orb.d]
        e0 = nhmf_energy(params, orb).nh_energy
        for k in range(4):
            for step in (h, 1j * h):
                shifted = list(coeffs)
                shifted[k] += step
                e1 = nhmf_energy(params, OrbitalPair(*shifted)).nh_energy
                fd = (e1 - e0) / step
                worst = max(worst, abs(fd - grad[k]) / max(1e-6, abs(grad[k])))
    return _check("gradient_vs_difference_quotients", worst <= 1e-4, f"max rel dev {worst:.2e} (tol 1e-4)")


def check_gauge_direction_derivative(params: ModelParams, rng, n=500) -> CheckResult:
    worst = 0.0
    for orb in _random_orbitals(rng, n):
        g = meanfield.nhmf_gradient(params, orb)
        worst = max(worst, abs(orb.a * g[0] + orb.b * g[1]))
        worst = max(worst, abs(orb.c * g[2] + orb.d * g[3]))
    return _check("gauge_direction_derivative", worst <= 1e-10, f"max |dE| {worst:.2e} (tol 1e-10)")


def check_trace_identity(params: ModelParams) -> CheckResult:
    worst = 0.0
    for u in np.linspace(0.0, 10.0, 21):
        h = build_exact_hamiltonian(params.with_u(float(u)))
        lam = exact_spectrum(params.with_u(float(u))).energies
        worst = max(worst, abs(np.trace(h) - np.sum(lam)))
    return _check("exact_trace_identity", worst <= 1e-9, f"max dev {worst:.2e} (tol 1e-9)")


def check_u0_kronecker(params: ModelParams) -> CheckResult:
    p0 = params.with_u(0.0)
    h_up, h_dn = p0.one_particle_matrices()
    eps_up = np.linalg.eigvalsh(h_up) if p0.is_isolated else np.linalg.eigvals(h_up)
    eps_dn = np.linalg.eigvalsh(h_dn) if p0.is_isolated else np.linalg.eigvals(h_dn)
    sums = np.sort(np.add.outer(eps_up, eps_dn).ravel())
    lam = np.sort(exact_spectrum(p0).energies.real)
    worst = float(np.max(np.abs(sums - lam)))
    return _check("exact_u0_kronecker_sum", worst <= 1e-9, f"max dev {worst:.2e} (tol 1e-9)")


def check_h0_closed_form(params: ModelParams) -> CheckResult:
    worst = 0.0
    sym = ModelParams(t=params.t, u=0.0, h_up_a=0.0, h_up_b=0.0, h_dn_a=0.0, h_dn_b=0.0)
    for u in (0.0, 1.0, 4.0):
        lam = np.sort(exact_spectrum(sym.with_u(u)).energies.real)
        root = np.sqrt(u * u + 16.0 * sym.t**2)
        ref = np.sort([(u - root) / 2.0, 0.0, u, (u + root) / 2.0])
        worst = max(worst, float(np.max(np.abs(lam - ref))))
    return _check("exact_h0_closed_form", worst <= 1e-9, f"max dev {worst:.2e} (tol 1e-9)")


def check_censuses(params: ModelParams, cfg: SearchConfig) -> tuple[CheckResult, list]:
    counts = {}
    points_all = []
    for u, n_complex in ((0.5, 4), (4.0, 0)):
        pts = find_nhmf_stationary(params.with_u(u), cfg)
        points_all.extend(pts)
        counts[u] = (len(pts), sum(1 for p in pts if p.point_class == "complex"), n_complex)
    hmf_counts = (
        len(find_hmf_stationary(params.with_u(0.5), cfg)),
        len(find_hmf_stationary(params.with_u(4.0), cfg)),
    )
    ok = (
        counts[0.5][0] == 8
        and counts[0.5][1] == 4
        and counts[4.0][0] == 8
        and counts[4.0][1] == 0
        and hmf_counts == (4, 8)
    )
    measured = (
        f"NHMF U=0.5: {counts[0.5][0]} pts ({counts[0.5][1]} complex); "
        f"U=4: {counts[4.0][0]} pts ({counts[4.0][1]} complex); HMF: {hmf_counts}"
    )
    return _check("solution_censuses", ok, measured), points_all


def check_self_consistency(points) -> CheckResult:
    worst = max((p.sc_residual for p in points), default=0.0)
    return _check("self_consistency_residuals", worst <= 1e-8, f"max residual {worst:.2e} (tol 1e-8)")


def check_complex_currents(params: ModelParams, points) -> CheckResult:
    worst = float("inf")
    found = False
    for p in points:
        if p.point_class != "complex":
            continue
        found = True
        j = bond_current(p.orb, params.t)
        worst = min(worst, max(abs(j[0]), abs(j[1])))
    if not found:
        return _check("complex_point_currents", True, "no complex points in sample")
    return _check("complex_point_currents", worst >= 1e-6, f"min current {worst:.2e} (floor 1e-6)")


def check_conjugation_closure(points) -> CheckResult:
    worst = 0.0
    for p in points:
        conj = p.orb.conjugate()
        best = min(
            max(
                projective_distance(conj.up, q.orb.up),
                projective_distance(conj.dn, q.orb.dn),
            )
            for q in points
        )
        worst = max(worst, best)
    return _check("conjugation_closure", worst <= 1e-6, f"max partner distance {worst:.2e} (tol 1e-6)")


def check_hmf_subset(params: ModelParams, cfg: SearchConfig) -> CheckResult:
    worst = 0.0
    for u in (0.5, 4.0):
        for p in find_hmf_stationary(params.with_u(u), cfg):
            g = meanfield.nhmf_gradient(params.with_u(u), p.orb)
            worst = max(worst, float(np.max(np.abs(g))))
    return _check("hmf_subset_of_nhmf", worst <= 1e-10, f"max NH gradient {worst:.2e} (tol 1e-10)")


def check_symmetric_case(params: ModelParams, cfg: SearchConfig) -> CheckResult:
    sym = ModelParams(t=params.t, u=0.5, h_up_a=0.0, h_up_b=0.0, h_dn_a=0.0, h_dn_b=0.0)
    pts = [p for p in find_nhmf_stationary(sym, cfg) if p.point_class == "complex"]
    if not pts:
        return _check("symmetric_case", False, "no complex branch found at h=0, U=0.5")
    worst_im = max(abs(p.nh_energy.imag) for p in pts)
    # the mean-field potential U*n must be genuinely complex even though the
    # total energy is real
    pot = 0.0
    for p in pts:
        dens = nh_site_densities(p.orb)
        pot = max(pot, max(abs(np.imag(sym.u * d)) for d in dens))
    ok = worst_im <= 1e-8 and pot >= 1e-6
    return _check(
        "symmetric_case_real_energy_complex_potential",
        ok,
        f"max |Im E| {worst_im:.2e} (tol 1e-8); max |Im U n| {pot:.2e} (floor 1e-6)",
    )


def check_ssp_u0_factorization(params: ModelParams, beta: float = 0.1) -> CheckResult:
    p0 = params.with_u(0.0)
    t = p0.t
    worst = 0.0

    def one_particle_root(h_a, h_b, energy):
        y = h_b - 1j * beta - energy
        g = -1j * (t * t / y - (h_a - energy))
        return (g - beta) / (g + beta)

    eps_dn = np.linalg.eigvalsh(p0.one_particle_matrices()[1])
    for e in np.arange(-3.0, 3.0001, 0.25):
        roots4 = sorted(exact_reflection_roots(p0, beta, float(e)), key=lambda z: (z.real, z.imag))
        roots1 = sorted(
            (one_particle_root(p0.h_up_a, p0.h_up_b, e - eps) for eps in eps_dn),
            key=lambda z: (z.real, z.imag),
        )
        worst = max(worst, max(abs(a - b) for a, b in zip(roots4, roots1)))
    return _check("ssp_u0_factorization", worst <= 1e-9, f"max root dev {worst:.2e} (tol 1e-9)")


def check_reflection_residuals(params: ModelParams, beta: float = 0.1) -> CheckResult:
    from .ssp_transport import _det_dressed, gamma_of_r

    worst = 0.0
    for e in np.arange(-3.0, 3.0001, 0.5):
        for r in exact_reflection_roots(params, beta, float(e)):
            g = gamma_of_r(beta, r)
            worst = max(
                worst, abs(_det_dressed(params, beta, np.array([g]), np.array([float(e)]))[0])
            )
    return _check("reflection_root_residuals", worst <= 1e-9, f"max |det| {worst:.2e} (tol 1e-9)")


def check_transmission_bounds(params: ModelParams, cfg: SearchConfig) -> CheckResult:
    ssp = SSPConfig(beta=0.1, e_grid=np.arange(-3.0, 3.0001, 0.05))
    worst = 0.0
    for curve in mf_transmission_curves(params, ssp, cfg):
        for pt in curve.points:
            if pt.branch_flag:
                worst = max(worst, max(-pt.transmission, pt.transmission - 1.0))
    return _check("transmission_bounds", worst <= 1e-9, f"max T excursion {worst:.2e} (tol 1e-9)")


def run_invariant_suite(
    params: ModelParams | None = None, cfg: SearchConfig | None = None
) -> list[CheckResult]:
    """The full cross-module suite at the given (default: study) parameters."""
    params = params or ModelParams(u=0.5)
    cfg = cfg or SearchConfig()
    rng = np.random.default_rng(cfg.rng_seed + 20240803)
    results = [
        check_gauge_invariance(params, rng),
        check_reduction_real(params, rng),
        check_h_energy_real(params, rng),
        check_conjugation_covariance(params, rng),
        check_energy_decomposition(params, rng),
        check_gradient_fd(params, rng),
        check_gauge_direction_derivative(params, rng),
        check_trace_identity(params),
        check_u0_kronecker(params),
        check_h0_closed_form(params),
    ]
    census_result, points = check_censuses(params, cfg)
    results.append(census_result)
    results.append(check_self_consistency(points))
    results.append(check_complex_currents(params, points))
    results.append(check_conjugation_closure([p for p in points if p.point_class == "complex"]))
    results.append(check_hmf_subset(params, cfg))
    results.append(check_symmetric_case(params, cfg))
    results.append(check_ssp_u0_factorization(params))
    results.append(check_reflection_residuals(params))
    results.append(check_transmission_bounds(params, cfg))
    return results
