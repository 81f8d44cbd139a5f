"""Source-sink-potential reflection and transmission, exact and mean-field.

The left contact injects with the complex on-site potential +i Gamma_a,
Gamma_a = beta (1 + r)/(1 - r); the right contact extracts with -i beta.
For the exact two-electron Hamiltonian, both E1 and E3 of the 4x4 carry the
dressed up-spin on-site energy, so det(H(r) - E) = 0 cleared by (1 - r)^2 is
a quadratic in r: two root branches, i.e. two conduction channels whose
resonances sit at the eigenvalues of the isolated system (weak coupling).

For the mean field, the dressing enters the up-spin (transport) channel only
and the stationarity conditions must hold simultaneously with
det(F_up(r) - E) = 0, giving a three-complex-unknown Newton solve per grid
energy.  Distinct transmission curves through the same device correspond to
distinct self-consistent spectator (down-spin) orbitals, so each curve is
anchored to the down orbital of its seeding isolated stationary point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    CensusError,
    ConvergenceError,
    DegenerateRootsError,
    InputError,
    PoleError,
)
from .hubbard_exact import ModelParams, build_exact_hamiltonian, exact_spectrum
from .meanfield import OrbitalPair
from .numerics import projective_distance
from .stationary_search import (
    SearchConfig,
    StationaryPoint,
    _make_point,
    find_nhmf_stationary,
    first_excited_point,
)

PHYSICAL_R_TOL = 1e-9
ROOT_RESIDUAL_TOL = 1e-9
FAMILY_IM_SPLIT = 0.5
FAMILY_IM_MIN = 0.25
STEP_DRIFT_TOL = 0.2

EXACT_LABELS = ("ground", "excited")
MF_LABELS = ("mf_standard_1", "mf_standard_2", "mf_complex_1", "mf_complex_2")


@dataclass(frozen=True)
class SSPConfig:
    beta: float = 0.1
    e_grid: np.ndarray = None
    shift_mode: str | float = "auto"
    root_pick: str | int = "continuity"

    def __post_init__(self):
        if not self.beta > 0:
            raise InputError(f"contact coupling must be positive, got beta = {self.beta}")
        grid = self.e_grid if self.e_grid is not None else np.arange(-3.0, 3.0 + 1e-12, 0.005)
        grid = np.asarray(grid, dtype=float)
        if grid.size == 0:
            raise InputError("empty energy grid")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise InputError("energy grid must be strictly ascending")
        object.__setattr__(self, "e_grid", grid)


@dataclass(frozen=True)
class ReflectionSolution:
    energy: float
    r: complex
    transmission: float
    branch_flag: bool


@dataclass(frozen=True)
class TransmissionCurve:
    state_label: str
    shift: float
    points: list[ReflectionSolution]

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.points])

    @property
    def transmissions(self) -> np.ndarray:
        return np.array([p.transmission for p in self.points])


def gamma_of_r(beta: float, r: complex) -> complex:
    """Source strength beta (1 + r)/(1 - r); poles at full transmission feedback r = 1."""
    if r == 1:
        raise PoleError("gamma is undefined at r = 1")
    return beta * (1 + r) / (1 - r)


def transmission_from_r(r: complex) -> float:
    return 1.0 - abs(r) ** 2


def ssp_one_particle_matrix(h_a, h_b, t: float, beta: float, r: complex) -> np.ndarray:
    """The dressed diatomic matrix [[h_a + i Gamma_a, -t], [-t, h_b - i beta]]."""
    g = gamma_of_r(beta, r)
    return np.array([[h_a + 1j * g, -t], [-t, h_b - 1j * beta]], dtype=complex)


def _dressed_params(params: ModelParams, beta: float, gamma_a: complex) -> ModelParams:
    return replace(
        params,
        h_up_a=params.h_up_a + 1j * gamma_a,
        h_up_b=params.h_up_b - 1j * beta,
    )


def _det_dressed(params: ModelParams, beta: float, gamma_a, e) -> np.ndarray:
    """det(H(gamma_a) - E), vectorized over matching gamma_a / E arrays."""
    gamma_a = np.asarray(gamma_a, dtype=complex)
    e = np.asarray(e, dtype=complex)
    h = build_exact_hamiltonian(params)
    m = np.broadcast_to(h, gamma_a.shape + (4, 4)).copy()
    m[..., 0, 0] += 1j * gamma_a
    m[..., 2, 2] += 1j * gamma_a
    m[..., 1, 1] += -1j * beta
    m[..., 3, 3] += -1j * beta
    m[..., np.arange(4), np.arange(4)] -= e[..., None]
    return np.linalg.det(m)


def _reflection_quadratics(params: ModelParams, beta: float, e_grid) -> np.ndarray:
    """Coefficients (c2, c1, c0) of the cleared quadratic in r, per grid energy.

    det is degree <= 2 in Gamma_a (it enters two diagonal slots), so three
    evaluations fix the polynomial; substituting Gamma_a = beta (1+r)/(1-r)
    and clearing (1-r)^2 gives the quadratic.
    """
    e = np.asarray(e_grid, dtype=float)
    d0 = _det_dressed(params, beta, np.zeros_like(e, dtype=complex), e)
    dp = _det_dressed(params, beta, np.ones_like(e, dtype=complex), e)
    dm = _det_dressed(params, beta, -np.ones_like(e, dtype=complex), e)
    a = 0.5 * (dp + dm) - d0
    b = 0.5 * (dp - dm)
    c = d0
    c2 = a * beta**2 - b * beta + c
    c1 = 2 * a * beta**2 - 2 * c
    c0 = a * beta**2 + b * beta + c
    return np.stack([c2, c1, c0], axis=-1)


def exact_reflection_roots(params: ModelParams, beta: float, energy: float) -> list[complex]:
    """All r with det(H(r) - E) = 0, r != 1, residual-checked."""
    if not beta > 0:
        raise InputError(f"contact coupling must be positive, got beta = {beta}")
    c2, c1, c0 = _reflection_quadratics(params, beta, np.array([energy]))[0]
    scale = max(abs(c2), abs(c1), abs(c0))
    if scale == 0.0:
        raise DegenerateRootsError("cleared reflection polynomial vanishes identically")
    roots: list[complex]
    if abs(c2) <= 1e-14 * scale:
        if abs(c1) <= 1e-14 * scale:
            raise DegenerateRootsError("cleared reflection polynomial is constant")
        roots = [complex(-c0 / c1)]
    else:
        disc = np.sqrt(complex(c1 * c1 - 4 * c2 * c0))
        roots = [complex((-c1 + disc) / (2 * c2)), complex((-c1 - disc) / (2 * c2))]
    out = []
    for r in roots:
        if abs(r - 1.0) <= 1e-12:
            continue
        res = abs(_det_dressed(params, beta, np.array([gamma_of_r(beta, r)]), np.array([energy]))[0])
        if res <= ROOT_RESIDUAL_TOL:
            out.append(r)
    return sorted(out, key=lambda z: (z.real, z.imag))


def _trace_root_branches(params: ModelParams, beta: float, e_grid) -> np.ndarray:
    """Two continuity-tracked root branches over the grid, shape (2, n)."""
    coeffs = _reflection_quadratics(params, beta, e_grid)
    out = np.empty((2, len(e_grid)), dtype=complex)
    prev = None
    for k in range(len(e_grid)):
        c2, c1, c0 = coeffs[k]
        disc = np.sqrt(complex(c1 * c1 - 4 * c2 * c0))
        if abs(c2) <= 1e-14 * max(abs(c1), abs(c0)):
            r = [complex(-c0 / c1)] * 2
        else:
            r = [complex((-c1 + disc) / (2 * c2)), complex((-c1 - disc) / (2 * c2))]
        if prev is None:
            r = sorted(r, key=lambda z: (z.real, z.imag))
        elif abs(r[0] - prev[0]) + abs(r[1] - prev[1]) > abs(r[1] - prev[0]) + abs(r[0] - prev[1]):
            r = [r[1], r[0]]
        out[0, k], out[1, k] = r
        prev = r
    return out


def _isolated_reference_points(
    params: ModelParams, cfg: SearchConfig | None = None
) -> dict[str, StationaryPoint]:
    """Ground / first-excited / standard-partner stationary points at beta = 0."""
    points = find_nhmf_stationary(params, cfg)
    real = [p for p in points if p.point_class == "real-representable"]
    cplx = [p for p in points if p.point_class == "complex"]
    if not real:
        raise CensusError("no real stationary point found; cannot anchor channels")
    ground = min(real, key=lambda p: p.nh_energy.real)
    refs = {"ground": ground}
    # the standard partner shares the ground's up orbital but occupies the
    # other self-consistent down orbital
    partner = None
    for p in real:
        if p is ground:
            continue
        if projective_distance(p.orb.up, ground.orb.up) < 0.3:
            if partner is None or projective_distance(p.orb.dn, ground.orb.dn) > projective_distance(
                partner.orb.dn, ground.orb.dn
            ):
                partner = p
    if partner is not None:
        refs["standard_partner"] = partner
    first = first_excited_point(params, points)
    refs["excited"] = first
    if first.point_class == "complex":
        refs["excited_partner"] = points[first.partner]
    return refs


def _resolve_shift(
    cfg: SSPConfig, state_label: str, refs: dict[str, StationaryPoint]
) -> float:
    if cfg.shift_mode != "auto":
        return float(cfg.shift_mode)
    key = "ground" if state_label == "ground" else "excited"
    if key not in refs:
        raise CensusError(f"no isolated reference state for label {state_label!r}")
    return float(refs[key].occ_energies[1].real)


def exact_transmission_curve(
    params: ModelParams,
    cfg: SSPConfig,
    state_label: str,
    search_cfg: SearchConfig | None = None,
) -> TransmissionCurve:
    """T(E) of one exact channel, abscissa shifted per the configured mode.

    With continuity root picking, the two quadratic branches are traced over
    the grid; the branch resonating at the exact ground eigenvalue is the
    ground-derived channel, the other derives from the first excited state.
    """
    if state_label not in EXACT_LABELS:
        raise InputError(f"state_label must be one of {EXACT_LABELS}")
    grid = cfg.e_grid
    refs = _isolated_reference_points(params, search_cfg)
    shift = _resolve_shift(cfg, state_label, refs)
    if isinstance(cfg.root_pick, int):
        rs = []
        for e in grid:
            roots = exact_reflection_roots(params, cfg.beta, float(e))
            rs.append(roots[min(cfg.root_pick, len(roots) - 1)])
        rs = np.array(rs)
    else:
        branches = _trace_root_branches(params, cfg.beta, grid)
        e_ground = float(np.sort(exact_spectrum(params).energies.real)[0])
        k0 = int(np.argmin(np.abs(grid - e_ground)))
        ground_idx = int(np.argmin(np.abs(branches[:, k0])))
        idx = ground_idx if state_label == "ground" else 1 - ground_idx
        rs = branches[idx]
    points = [
        ReflectionSolution(
            energy=float(grid[k] - shift),
            r=complex(rs[k]),
            transmission=transmission_from_r(rs[k]),
            branch_flag=bool(abs(rs[k]) <= 1 + PHYSICAL_R_TOL),
        )
        for k in range(len(grid))
    ]
    return TransmissionCurve(state_label=state_label, shift=shift, points=points)


# --- mean-field channel ------------------------------------------------------


def _mf_system(params: ModelParams, beta: float, energy: float, z: np.ndarray) -> np.ndarray:
    """Residuals (stationarity up/dn, cleared det) in chart b = d = 1."""
    x, y, r = z
    t, u = params.t, params.u
    ga = beta * (1 + r) / (1 - r)
    dup = (params.h_up_a + 1j * ga) - (params.h_up_b - 1j * beta)
    ddn = params.h_dn_a - params.h_dn_b
    g1 = (dup * x + t * (x * x - 1)) * (y * y + 1) + u * x * (y * y - 1)
    g2 = (ddn * y + t * (y * y - 1)) * (x * x + 1) + u * y * (x * x - 1)
    p = (params.h_up_a + 1j * ga - energy) * (y * y + 1) + u * y * y
    q = (params.h_up_b - 1j * beta - energy) * (y * y + 1) + u
    g3 = p * q - t * t * (y * y + 1) ** 2
    return np.array([g1, g2, g3])


def _mf_jacobian(params: ModelParams, beta: float, energy: float, z: np.ndarray) -> np.ndarray:
    x, y, r = z
    t, u = params.t, params.u
    ga = beta * (1 + r) / (1 - r)
    dga = 2 * beta / (1 - r) ** 2
    dup = (params.h_up_a + 1j * ga) - (params.h_up_b - 1j * beta)
    ddn = params.h_dn_a - params.h_dn_b
    p = (params.h_up_a + 1j * ga - energy) * (y * y + 1) + u * y * y
    q = (params.h_up_b - 1j * beta - energy) * (y * y + 1) + u
    jac = np.empty((3, 3), dtype=complex)
    jac[0, 0] = (dup + 2 * t * x) * (y * y + 1) + u * (y * y - 1)
    jac[0, 1] = 2 * y * (dup * x + t * (x * x - 1)) + 2 * u * x * y
    jac[0, 2] = 1j * dga * x * (y * y + 1)
    jac[1, 0] = 2 * x * (ddn * y + t * (y * y - 1)) + 2 * u * x * y
    jac[1, 1] = (ddn + 2 * t * y) * (x * x + 1) + u * (x * x - 1)
    jac[1, 2] = 0.0
    jac[2, 0] = 0.0
    jac[2, 1] = (
        (2 * y * (params.h_up_a + 1j * ga - energy) + 2 * u * y) * q
        + p * 2 * y * (params.h_up_b - 1j * beta - energy)
        - 4 * t * t * y * (y * y + 1)
    )
    jac[2, 2] = 1j * dga * (y * y + 1) * q
    return jac


def _seed_r(params: ModelParams, beta: float, energy: float, y: complex) -> complex:
    """r solving the det condition at frozen down orbital (y, 1)."""
    t, u = params.t, params.u
    q = (params.h_up_b - 1j * beta - energy) * (y * y + 1) + u
    p_needed = t * t * (y * y + 1) ** 2 / q
    i_gamma = p_needed / (y * y + 1) - (params.h_up_a - energy) - u * y * y / (y * y + 1)
    ga = -1j * i_gamma
    return complex((ga - beta) / (ga + beta))


def _mf_newton(
    params: ModelParams, beta: float, energy: float, z0: np.ndarray, tol: float = 1e-12
) -> np.ndarray | None:
    z = np.array(z0, dtype=complex)
    f = _mf_system(params, beta, energy, z)
    for _ in range(60):
        if abs(1 - z[2]) < 1e-10:
            return None
        try:
            step = np.linalg.solve(_mf_jacobian(params, beta, energy, z), f)
        except np.linalg.LinAlgError:
            return None
        lam, n0 = 1.0, float(np.sum(np.abs(f)))
        fn = f
        for _ in range(20):
            fn = _mf_system(params, beta, energy, z - lam * step)
            if np.sum(np.abs(fn)) <= n0 or lam * np.sum(np.abs(step)) < 1e-15:
                break
            lam /= 2
        z = z - lam * step
        f = fn
        if lam * np.sum(np.abs(step)) <= tol * max(1.0, float(np.sum(np.abs(z)))):
            if not np.all(np.isfinite(z.view(float))):
                return None
            return z
    return None


def mf_reflection(
    params: ModelParams,
    beta: float,
    energy: float,
    seed: StationaryPoint,
    r_guess: complex | None = None,
) -> tuple[StationaryPoint, ReflectionSolution]:
    """One self-consistent transmission solution seeded from an isolated point.

    Solves the coupled system (up/down stationarity with dressed up-spin
    on-site energies, det(F_up(r) - E) = 0) by Newton in (x, y, r).  Returns
    the dressed stationary point and the reflection solution.
    """
    x0 = seed.orb.a / seed.orb.b
    y0 = seed.orb.c / seed.orb.d
    if r_guess is None:
        r_guess = _seed_r(params, beta, energy, y0)
    z = _mf_newton(params, beta, energy, np.array([x0, y0, r_guess]))
    if z is None:
        raise ConvergenceError(f"transmission solve failed at E = {energy}", float("nan"))
    x, y, r = z
    orb = OrbitalPair(x, 1.0, y, 1.0)
    dressed = _dressed_params(params, beta, gamma_of_r(beta, r))
    point = _make_point(dressed, orb, "bd")
    sol = ReflectionSolution(
        energy=float(energy),
        r=complex(r),
        transmission=transmission_from_r(r),
        branch_flag=bool(abs(r) <= 1 + PHYSICAL_R_TOL),
    )
    return point, sol


def _ratio_family(ratio: complex) -> int:
    """Channel family of a coefficient ratio: -1/+1 for the lower/upper half
    plane (exceptional-point-like orbitals), 0 for near-real ones."""
    if abs(ratio.imag) <= FAMILY_IM_SPLIT:
        return 0
    return 1 if ratio.imag > 0 else -1


def _in_family(ratio: complex, family: int) -> bool:
    if family == 0:
        return abs(ratio.imag) <= FAMILY_IM_SPLIT
    return family * ratio.imag >= FAMILY_IM_MIN


def _mf_curve(
    params: ModelParams, cfg: SSPConfig, seed: StationaryPoint, label: str
) -> TransmissionCurve:
    """Continuation of one channel over the grid.

    A channel is identified by the half-plane families of its two coefficient
    ratios a/b, c/d (gauge invariant): near-real for the standard channels,
    strictly upper/lower half plane for the conjugate-pair ones.  Candidate
    solutions that leave the seed's family are sheet jumps and are rejected;
    unsolvable grid energies are emitted as flagged gaps.
    """
    grid = cfg.e_grid
    x0 = seed.orb.a / seed.orb.b
    y0 = seed.orb.c / seed.orb.d
    dn_family = _ratio_family(y0)
    n = len(grid)
    sols: list[np.ndarray | None] = [None] * n
    # at the channel's own resonance the required dressing shrinks to the
    # bare contact coupling, so the solution provably sits next to the
    # isolated seed: anchor there and continue outward
    k0 = int(np.argmin(np.abs(grid - seed.occ_energies[0].real)))

    def _solve(e: float, z0: np.ndarray, z_ref: np.ndarray | None) -> np.ndarray | None:
        z = _mf_newton(params, cfg.beta, e, z0)
        if z is None or not _in_family(z[1], dn_family):
            return None
        if max(abs(z[0]), abs(z[1])) > 50.0:
            return None
        if z_ref is not None:
            drift = max(
                projective_distance(np.array([z[0], 1.0]), np.array([z_ref[0], 1.0])),
                projective_distance(np.array([z[1], 1.0]), np.array([z_ref[1], 1.0])),
            )
            if drift > STEP_DRIFT_TOL:
                return None
        return z

    z_anchor = _solve(float(grid[k0]), np.array([x0, y0, _seed_r(params, cfg.beta, float(grid[k0]), y0)]), None)
    sols[k0] = z_anchor
    for sweep in (range(k0 + 1, n), range(k0 - 1, -1, -1)):
        z_prev = z_anchor
        for k in sweep:
            if z_prev is None:
                break
            sols[k] = _solve(float(grid[k]), z_prev, z_prev)
            z_prev = sols[k] if sols[k] is not None else z_prev
    points: list[ReflectionSolution] = []
    for k in range(n):
        e = float(grid[k])
        if sols[k] is None:
            points.append(
                ReflectionSolution(energy=e, r=complex("nan"), transmission=float("nan"), branch_flag=False)
            )
            continue
        r = complex(sols[k][2])
        points.append(
            ReflectionSolution(
                energy=e,
                r=r,
                transmission=transmission_from_r(r),
                branch_flag=bool(abs(r) <= 1 + PHYSICAL_R_TOL),
            )
        )
    return TransmissionCurve(state_label=label, shift=0.0, points=points)


def mf_transmission_curves(
    params: ModelParams,
    cfg: SSPConfig,
    search_cfg: SearchConfig | None = None,
) -> list[TransmissionCurve]:
    """The four mean-field channel curves: standard pair plus complex pair.

    The standard pair shares the ground state's up channel with the two
    self-consistent spectator (down) orbitals; the complex pair consists of
    the two conjugate members of the lowest complex branch.  Mean-field
    curves are plotted against the orbital-energy axis (no shift).
    """
    refs = _isolated_reference_points(params, search_cfg)
    curves = []
    seeds = [("mf_standard_1", refs["ground"])]
    if "standard_partner" in refs:
        seeds.append(("mf_standard_2", refs["standard_partner"]))
    if "excited" in refs and refs["excited"].point_class == "complex":
        seeds.append(("mf_complex_1", refs["excited"]))
        if "excited_partner" in refs:
            seeds.append(("mf_complex_2", refs["excited_partner"]))
    for label, seed in seeds:
        curves.append(_mf_curve(params, cfg, seed, label))
    return curves
