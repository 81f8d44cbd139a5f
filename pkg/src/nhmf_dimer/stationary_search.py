"""Enumeration and continuation of mean-field stationary points.

Strategy: gauge freedom is removed by projective charts that pin one
coefficient of each spin to 1 (four charts in total), leaving a holomorphic
two-complex-variable system.  Clearing c-norm denominators turns the
stationarity conditions into the polynomial pair

    S_up = [(h_a^up - h_b^up) a b + t (a^2 - b^2)] (c^2 + d^2) + U a b (c^2 - d^2)
    S_dn = [(h_a^dn - h_b^dn) c d + t (c^2 - d^2)] (a^2 + b^2) + U c d (a^2 - b^2)

which stays finite arbitrarily close to exceptional points, where the raw
gradient blows up.  A batched damped Newton runs from a deterministic seed
grid in every chart simultaneously; converged iterates are deduplicated by
per-spin projective distance and post-validated against the independent
gradient, Fock self-consistency and classification invariants.

The Hermitian search is the real-orbital restriction, parametrized by two
angles and scanned/refined on a dense grid, which is complete for real
stationary points because the real slice of the holomorphic gradient is the
gradient of the restricted functional.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BracketError, CensusError, ConvergenceError, InputError, PairingError
from .hubbard_exact import ModelParams
from .meanfield import (
    FockPair,
    OrbitalPair,
    nh_fock,
    nhmf_energy,
    nhmf_gradient,
    stationarity_defects,
)
from .numerics import projective_distance

EPS = float(np.finfo(float).eps)

# charts: (up pinned coefficient, down pinned coefficient)
CHARTS = ("bd", "ad", "bc", "ac")

REAL_REP_TOL = 1e-8
PARTNER_TOL = 1e-6
SELF_CONSISTENCY_TOL = 1e-8
BRANCH_MATCH_TOL = 0.2
# gradient-residual acceptance floor: near an exceptional point the
# chart-free gradient is a catastrophic cancellation of terms ~1/cnorm^2,
# so the achievable residual scales like eps / ep_proximity^2
FLOOR_SAFETY = 4096.0


@dataclass(frozen=True)
class SearchConfig:
    """Deterministic multi-start Newton settings.

    ``seed_values`` are used for both the real and imaginary parts of each
    chart coordinate, for both spins; ``random_starts`` adds that many extra
    rng-seeded complex seed pairs per chart.
    """

    newton_tol: float = 1e-12
    max_iter: int = 100
    seed_values: tuple[float, ...] = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    dedupe_tol: float = 1e-8
    rng_seed: int = 0
    random_starts: int = 0
    grad_tol: float = 1e-10
    hmf_grid: int = 360


@dataclass(frozen=True)
class StationaryPoint:
    """A converged, validated stationary point of the NH mean-field energy."""

    orb: OrbitalPair
    nh_energy: complex
    h_energy_at_point: float
    gamma: float
    fock: FockPair
    occ_energies: tuple[complex, complex]
    grad_residual: float
    sc_residual: float
    chart: str
    point_class: str = "complex"
    partner: int | None = None

    @property
    def is_real_representable(self) -> bool:
        return self.point_class == "real-representable"


@dataclass
class BranchFamily:
    """One stationary point followed over a U grid; None marks a gap."""

    u_values: np.ndarray
    points: list[StationaryPoint | None]
    label: str


def _chart_orbitals(chart: str, x, y):
    """Coefficient arrays (a, b, c, d) for chart coordinates (x, y)."""
    one = np.ones_like(x)
    a, b = (x, one) if chart[0] == "b" else (one, x)
    c, d = (y, one) if chart[1] == "d" else (one, y)
    return a, b, c, d


def _cleared_system(params: ModelParams, chart: str, x, y):
    """Cleared stationarity residuals (s_up, s_dn) and their chart Jacobian."""
    t, u = params.t, params.u
    dup = complex(params.h_up_a - params.h_up_b)
    ddn = complex(params.h_dn_a - params.h_dn_b)
    a, b, c, d = _chart_orbitals(chart, x, y)
    cn_up, cn_dn = a * a + b * b, c * c + d * d
    df_up, df_dn = a * a - b * b, c * c - d * d
    q_up = dup * a * b + t * df_up
    q_dn = ddn * c * d + t * df_dn
    s_up = q_up * cn_dn + u * a * b * df_dn
    s_dn = q_dn * cn_up + u * c * d * df_up

    dsup_da = (dup * b + 2 * t * a) * cn_dn + u * b * df_dn
    dsup_db = (dup * a - 2 * t * b) * cn_dn + u * a * df_dn
    dsup_dc = 2 * c * (q_up + u * a * b)
    dsup_dd = 2 * d * (q_up - u * a * b)
    dsdn_dc = (ddn * d + 2 * t * c) * cn_up + u * d * df_up
    dsdn_dd = (ddn * c - 2 * t * d) * cn_up + u * c * df_up
    dsdn_da = 2 * a * (q_dn + u * c * d)
    dsdn_db = 2 * b * (q_dn - u * c * d)

    j11 = dsup_da if chart[0] == "b" else dsup_db
    j21 = dsdn_da if chart[0] == "b" else dsdn_db
    j12 = dsup_dc if chart[1] == "d" else dsup_dd
    j22 = dsdn_dc if chart[1] == "d" else dsdn_dd
    return s_up, s_dn, j11, j12, j21, j22


def _batch_newton(params: ModelParams, chart: str, x0, y0, cfg: SearchConfig):
    """Damped Newton on the cleared system for every seed simultaneously.

    Active seeds are compacted out of the batch as they converge.  Divergent
    or stalled seeds simply end up unconverged and are discarded by the
    caller.
    """
    x = np.array(x0, dtype=complex)
    y = np.array(y0, dtype=complex)
    done = np.zeros(x.shape, dtype=bool)
    active = np.arange(x.size)
    ax, ay = x.copy(), y.copy()
    for _ in range(cfg.max_iter):
        s_up, s_dn, j11, j12, j21, j22 = _cleared_system(params, chart, ax, ay)
        res = np.abs(s_up) + np.abs(s_dn)
        det = j11 * j22 - j12 * j21
        bad = (det == 0) | ~np.isfinite(det)
        det = np.where(bad, 1.0, det)
        dx = np.where(bad, 0.0, (j22 * s_up - j12 * s_dn) / det)
        dy = np.where(bad, 0.0, (-j21 * s_up + j11 * s_dn) / det)
        lam = np.ones(ax.shape)
        for _ in range(20):
            s1n, s2n, *_ = _cleared_system(params, chart, ax - lam * dx, ay - lam * dy)
            worse = (np.abs(s1n) + np.abs(s2n) > res) & (lam * (np.abs(dx) + np.abs(dy)) > 1e-15)
            if not np.any(worse):
                break
            lam = np.where(worse, lam / 2, lam)
        ax = ax - lam * dx
        ay = ay - lam * dy
        step = lam * (np.abs(dx) + np.abs(dy))
        fin = step <= cfg.newton_tol * np.maximum(1.0, np.abs(ax) + np.abs(ay))
        x[active], y[active] = ax, ay
        if np.any(fin):
            done[active[fin]] = True
            keep = ~fin
            active, ax, ay = active[keep], ax[keep], ay[keep]
        if active.size == 0:
            break
    # polish pass on the converged set: plain full steps while the cleared
    # residual still improves, which matters close to exceptional points
    # where the Jacobian is nearly singular and the damped loop stops early
    conv = np.flatnonzero(done)
    if conv.size:
        px, py = x[conv], y[conv]
        best_x, best_y = px.copy(), py.copy()
        s_up, s_dn, *_ = _cleared_system(params, chart, px, py)
        best = np.abs(s_up) + np.abs(s_dn)
        for _ in range(8):
            s_up, s_dn, j11, j12, j21, j22 = _cleared_system(params, chart, px, py)
            det = j11 * j22 - j12 * j21
            bad = (det == 0) | ~np.isfinite(det)
            det = np.where(bad, 1.0, det)
            px = px - np.where(bad, 0.0, (j22 * s_up - j12 * s_dn) / det)
            py = py - np.where(bad, 0.0, (-j21 * s_up + j11 * s_dn) / det)
            s1n, s2n, *_ = _cleared_system(params, chart, px, py)
            cur = np.abs(s1n) + np.abs(s2n)
            better = cur < best
            best_x = np.where(better, px, best_x)
            best_y = np.where(better, py, best_y)
            best = np.where(better, cur, best)
        x[conv], y[conv] = best_x, best_y
    finite = np.isfinite(x) & np.isfinite(y)
    return x, y, done & finite


def _ep_proximity(orb: OrbitalPair) -> float:
    """min over spins of |v.v| / <v|v>, a gauge-invariant exceptional-point distance."""
    up = abs(orb.a**2 + orb.b**2) / (abs(orb.a) ** 2 + abs(orb.b) ** 2)
    dn = abs(orb.c**2 + orb.d**2) / (abs(orb.c) ** 2 + abs(orb.d) ** 2)
    return min(up, dn)


def _grad_floor(params: ModelParams, orb: OrbitalPair) -> float:
    scale = 2 * params.t + abs(params.h_up_a - params.h_up_b) + abs(params.h_dn_a - params.h_dn_b) + 2 * params.u
    prox = max(_ep_proximity(orb), 1e-300)
    return FLOOR_SAFETY * EPS * scale / prox**2


def _free_gradient_residual(params: ModelParams, orb: OrbitalPair, chart: str) -> float:
    """Max modulus of the gradient components along the chart's free coordinates."""
    g = nhmf_gradient(params, orb)
    i_up = 0 if chart[0] == "b" else 1
    i_dn = 2 if chart[1] == "d" else 3
    return float(max(abs(g[i_up]), abs(g[i_dn])))


def _self_consistency_residual(params: ModelParams, orb: OrbitalPair) -> float:
    """Eigen-equation residual of each occupied orbital in its Fock matrix.

    Uses min_eps ||F v - eps v|| on normalized v, which stays well conditioned
    at exceptional points where explicit eigenvectors are not.
    """
    fock = nh_fock(params, orb)
    worst = 0.0
    for f, v in ((fock.up, orb.up), (fock.dn, orb.dn)):
        v = v / np.linalg.norm(v)
        fv = f @ v
        eps_h = np.vdot(v, fv)
        r = np.linalg.norm(fv - eps_h * v) / max(1.0, float(np.linalg.norm(f)))
        worst = max(worst, float(r))
    return worst


def _make_point(params: ModelParams, orb: OrbitalPair, chart: str) -> StationaryPoint:
    orb = orb.normalized()
    en = nhmf_energy(params, orb)
    fock = nh_fock(params, orb)
    occ_up = np.dot(orb.up, fock.up @ orb.up) / np.dot(orb.up, orb.up)
    occ_dn = np.dot(orb.dn, fock.dn @ orb.dn) / np.dot(orb.dn, orb.dn)
    real_rep = (
        projective_distance(orb.up, np.conj(orb.up)) <= REAL_REP_TOL
        and projective_distance(orb.dn, np.conj(orb.dn)) <= REAL_REP_TOL
    )
    return StationaryPoint(
        orb=orb,
        nh_energy=complex(en.nh_energy),
        h_energy_at_point=en.h_energy,
        gamma=en.gamma,
        fock=fock,
        occ_energies=(complex(occ_up), complex(occ_dn)),
        grad_residual=_free_gradient_residual(params, orb, chart),
        sc_residual=_self_consistency_residual(params, orb),
        chart=chart,
        point_class="real-representable" if real_rep else "complex",
    )


def _orbital_key(orb: OrbitalPair) -> tuple:
    vals = np.array([orb.a, orb.b, orb.c, orb.d])
    return tuple(np.round(np.concatenate([vals.real, vals.imag]), 6))


def _canonical_batch(a, b, c, d) -> np.ndarray:
    """Vectorized canonical (normalized, phase-fixed) coefficient rows."""
    up = np.stack([a, b], axis=1)
    dn = np.stack([c, d], axis=1)
    cols = []
    for v in (up, dn):
        nrm = np.linalg.norm(v, axis=1, keepdims=True)
        nrm[nrm == 0.0] = 1.0
        v = v / nrm
        piv = np.take_along_axis(v, np.argmax(np.abs(v), axis=1)[:, None], axis=1)
        piv_abs = np.abs(piv)
        piv_abs[piv_abs == 0.0] = 1.0
        cols.append(v * (np.conj(piv) / piv_abs))
    return np.concatenate(cols, axis=1)


def _same_point(o1: OrbitalPair, o2: OrbitalPair, tol: float) -> bool:
    return (
        projective_distance(o1.up, o2.up) <= tol
        and projective_distance(o1.dn, o2.dn) <= tol
    )


def _seed_pairs(cfg: SearchConfig):
    v = np.asarray(cfg.seed_values, dtype=float)
    base = (v[:, None] + 1j * v[None, :]).ravel()
    x = np.repeat(base, base.size)
    y = np.tile(base, base.size)
    if cfg.random_starts > 0:
        rng = np.random.default_rng(cfg.rng_seed)
        extra = rng.uniform(-2, 2, size=(4, cfg.random_starts))
        x = np.concatenate([x, extra[0] + 1j * extra[1]])
        y = np.concatenate([y, extra[2] + 1j * extra[3]])
    return x, y


def find_nhmf_stationary(
    params: ModelParams, cfg: SearchConfig | None = None
) -> list[StationaryPoint]:
    """All stationary points of the NH energy, deduplicated and classified.

    Multi-start Newton over the four gauge charts; every returned point has
    passed the gradient-residual and Fock self-consistency checks.  Output
    order is canonical: ascending (Re E, Im E).
    """
    cfg = cfg or SearchConfig()
    sx, sy = _seed_pairs(cfg)
    candidates: list[tuple[OrbitalPair, str]] = []
    for chart in CHARTS:
        x, y, ok = _batch_newton(params, chart, sx, sy, cfg)
        if not np.any(ok):
            continue
        a, b, c, d = _chart_orbitals(chart, x[ok], y[ok])
        rows = _canonical_batch(a, b, c, d)
        good = np.all(np.isfinite(rows.view(float)), axis=1)
        rows = rows[good]
        # cheap first-stage dedupe on rounded canonical coefficients
        keys = np.round(rows.view(float).reshape(rows.shape[0], 8), 6)
        _, first = np.unique(keys, axis=0, return_index=True)
        for idx in sorted(first):
            try:
                orb = OrbitalPair(*(complex(v) for v in rows[idx]))
            except InputError:
                continue
            candidates.append((orb, chart))
    accepted: list[StationaryPoint] = []
    for orb, chart in candidates:
        point = _try_accept(params, orb, chart, cfg)
        if point is None:
            continue
        dup = next(
            (i for i, p in enumerate(accepted) if _same_point(orb, p.orb, cfg.dedupe_tol)),
            None,
        )
        if dup is None:
            accepted.append(point)
        elif point.grad_residual < accepted[dup].grad_residual:
            accepted[dup] = point
    accepted.sort(key=lambda p: (round(p.nh_energy.real, 10), round(p.nh_energy.imag, 10)))
    return classify_points(accepted)


def _try_accept(
    params: ModelParams, orb: OrbitalPair, chart: str, cfg: SearchConfig
) -> StationaryPoint | None:
    try:
        point = _make_point(params, orb, chart)
    except (InputError, ArithmeticError):
        return None
    tol = max(cfg.grad_tol, _grad_floor(params, orb))
    if point.grad_residual > tol or point.sc_residual > SELF_CONSISTENCY_TOL:
        return None
    return point


def first_excited_point(params: ModelParams, points: list[StationaryPoint]) -> StationaryPoint:
    """The member of the stationary set that represents the first excited state.

    Below the Hermitian bifurcation this is the decaying member (canonical
    first, by ascending Im) of the lowest complex branch; above it, where all
    points are real, it is the point whose Hermitian energy tracks the exact
    first-excited eigenvalue.
    """
    from .hubbard_exact import exact_spectrum

    cplx = [p for p in points if p.point_class == "complex"]
    if cplx:
        return min(cplx, key=lambda p: (round(p.nh_energy.real, 9), p.nh_energy.imag))
    if not points:
        raise CensusError("empty stationary-point set")
    e1 = float(np.sort(exact_spectrum(params).energies.real)[1])
    return min(points, key=lambda p: abs(p.h_energy_at_point - e1))


def classify_points(points: list[StationaryPoint]) -> list[StationaryPoint]:
    """Populate class/partner via conjugation pairing.

    Real-representable points are self-paired; every complex point must find
    the point whose orbitals match its conjugate, else the search was
    incomplete and PairingError is raised.
    """
    out = list(points)
    for i, p in enumerate(out):
        if p.point_class == "real-representable":
            out[i] = replace(p, partner=i)
            continue
        conj = p.orb.conjugate()
        match = next(
            (j for j, q in enumerate(out) if _same_point(conj, q.orb, PARTNER_TOL)),
            None,
        )
        if match is None:
            raise PairingError(
                f"no conjugate partner for stationary point with E = {p.nh_energy:.6f}"
            )
        out[i] = replace(p, partner=match)
    return out


def refine_newton(
    params: ModelParams,
    point: StationaryPoint | OrbitalPair,
    cfg: SearchConfig | None = None,
) -> StationaryPoint:
    """Polish a single starting point to a validated stationary point.

    The chart is re-selected whenever the pinned coordinate loses dominance
    (chart coordinate modulus above 10), keeping the Newton system finite.
    """
    cfg = cfg or SearchConfig()
    orb = point.orb if isinstance(point, StationaryPoint) else point
    a, b, c, d = orb.a, orb.b, orb.c, orb.d
    chart = ("b" if abs(a) <= abs(b) else "a") + ("d" if abs(c) <= abs(d) else "c")
    x = a / b if chart[0] == "b" else b / a
    y = c / d if chart[1] == "d" else d / c
    for _ in range(6):
        xa, ya, ok = _batch_newton(params, chart, np.array([x]), np.array([y]), cfg)
        x, y = complex(xa[0]), complex(ya[0])
        if abs(x) <= 10.0 and abs(y) <= 10.0:
            break
        if abs(x) > 10.0:
            chart = ("a" if chart[0] == "b" else "b") + chart[1]
            x = 1.0 / x
        if abs(y) > 10.0:
            chart = chart[0] + ("c" if chart[1] == "d" else "d")
            y = 1.0 / y
    aa, bb, cc, dd = _chart_orbitals(chart, np.array([x]), np.array([y]))
    refined = OrbitalPair(complex(aa[0]), complex(bb[0]), complex(cc[0]), complex(dd[0]))
    s_up, s_dn = stationarity_defects(params, refined)
    if not bool(ok[0]):
        raise ConvergenceError("Newton refinement did not converge", abs(s_up) + abs(s_dn))
    accepted = _try_accept(params, refined, chart, cfg)
    if accepted is None:
        raise ConvergenceError(
            "refined point failed stationarity validation", abs(s_up) + abs(s_dn)
        )
    return accepted


# --- Hermitian (real-orbital) search -------------------------------------

def _hmf_angle_census(params: ModelParams, n: int) -> list[tuple[float, float]]:
    """Stationary (x, y) = (2 theta, 2 phi) angle pairs of the real functional."""
    t, u = params.t, params.u
    dup = (params.h_up_a - params.h_up_b).real
    ddn = (params.h_dn_a - params.h_dn_b).real
    g = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    x, y = [w.ravel().copy() for w in np.meshgrid(g, g, indexing="ij")]

    def grad(x, y):
        f1 = -(dup / 2) * np.sin(x) - t * np.cos(x) - (u / 2) * np.sin(x) * np.cos(y)
        f2 = -(ddn / 2) * np.sin(y) - t * np.cos(y) - (u / 2) * np.cos(x) * np.sin(y)
        return f1, f2

    active = np.arange(x.size)
    ax, ay = x.copy(), y.copy()
    for _ in range(50):
        f1, f2 = grad(ax, ay)
        j11 = -(dup / 2) * np.cos(ax) + t * np.sin(ax) - (u / 2) * np.cos(ax) * np.cos(ay)
        j22 = -(ddn / 2) * np.cos(ay) + t * np.sin(ay) - (u / 2) * np.cos(ax) * np.cos(ay)
        j12 = (u / 2) * np.sin(ax) * np.sin(ay)
        det = j11 * j22 - j12 * j12
        det = np.where(np.abs(det) < 1e-300, 1e-300, det)
        sx = (j22 * f1 - j12 * f2) / det
        sy = (-j12 * f1 + j11 * f2) / det
        ax, ay = ax - sx, ay - sy
        x[active], y[active] = ax, ay
        fin = np.abs(sx) + np.abs(sy) <= 1e-14
        if np.any(fin):
            keep = ~fin
            active, ax, ay = active[keep], ax[keep], ay[keep]
        if active.size == 0:
            break
    f1, f2 = grad(x, y)
    ok = (np.abs(f1) <= 1e-12) & (np.abs(f2) <= 1e-12)
    x, y = np.mod(x[ok], 2 * np.pi), np.mod(y[ok], 2 * np.pi)
    keys = np.round(np.stack([x, y], axis=1), 7)
    _, first = np.unique(keys, axis=0, return_index=True)
    uniq: list[tuple[float, float]] = []
    for idx in sorted(first):
        cand = (float(x[idx]), float(y[idx]))
        if not any(
            max(
                abs((cand[0] - q[0] + np.pi) % (2 * np.pi) - np.pi),
                abs((cand[1] - q[1] + np.pi) % (2 * np.pi) - np.pi),
            )
            < 1e-5
            for q in uniq
        ):
            uniq.append(cand)
    return uniq


def find_hmf_stationary(
    params: ModelParams, cfg: SearchConfig | None = None
) -> list[StationaryPoint]:
    """All stationary points of the Hermitian functional over real orbitals.

    Dense angle-grid scan plus Newton refinement, deduplicated modulo the
    sign of each orbital.  Points are returned in the same validated
    StationaryPoint form (they are NH stationary points with real orbitals).
    """
    if not params.is_isolated:
        raise InputError("the Hermitian search requires real on-site parameters")
    cfg = cfg or SearchConfig()
    points = []
    for x, y in _hmf_angle_census(params, cfg.hmf_grid):
        th, ph = x / 2.0, y / 2.0
        orb = OrbitalPair(np.cos(th), np.sin(th), np.cos(ph), np.sin(ph))
        point = _try_accept(params, orb, "bd", cfg)
        if point is not None:
            points.append(point)
    points.sort(key=lambda p: (round(p.nh_energy.real, 10), round(p.nh_energy.imag, 10)))
    return classify_points(points)


def locate_hmf_bifurcation(
    params: ModelParams, bracket: tuple[float, float], cfg: SearchConfig | None = None
) -> float:
    """First U in the bracket where the Hermitian solution count changes.

    Plain bisection on the census count, resolved to 1e-3 in U.
    """
    cfg = cfg or SearchConfig()
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise InputError(f"bad bracket {bracket}")
    n_lo = len(find_hmf_stationary(params.with_u(lo), cfg))
    n_hi = len(find_hmf_stationary(params.with_u(hi), cfg))
    if n_lo == n_hi:
        raise BracketError(
            f"solution count is {n_lo} at both bracket ends {bracket}; nothing to locate"
        )
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if len(find_hmf_stationary(params.with_u(mid), cfg)) == n_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- continuation over U ---------------------------------------------------

def _census_at(params: ModelParams, cfg: SearchConfig, extra_seeds) -> list[StationaryPoint]:
    points = find_nhmf_stationary(params, cfg)
    for orb in extra_seeds:
        try:
            p = refine_newton(params, orb, cfg)
        except (ConvergenceError, InputError, ArithmeticError):
            continue
        if not any(_same_point(p.orb, q.orb, cfg.dedupe_tol) for q in points):
            points.append(p)
    points.sort(key=lambda p: (round(p.nh_energy.real, 10), round(p.nh_energy.imag, 10)))
    return classify_points(points)


def sweep_branches(
    params: ModelParams, u_grid, cfg: SearchConfig | None = None
) -> list[BranchFamily]:
    """Continuation of every stationary point over an ascending U grid.

    Each grid point gets a fresh multi-start (to catch branches born along
    the way, which have no parent to continue from) plus Newton re-seeding
    from the previous grid point's solutions.  Points are matched to
    branches by per-spin projective distance; gaps stay None.
    """
    cfg = cfg or SearchConfig()
    u_grid = np.asarray(u_grid, dtype=float)
    if u_grid.size == 0:
        raise InputError("empty U grid")
    if u_grid.size > 1 and np.any(np.diff(u_grid) <= 0):
        raise InputError("U grid must be strictly ascending")
    families: list[BranchFamily] = []
    prev: list[StationaryPoint] = []
    for k, u in enumerate(u_grid):
        pu = params.with_u(u)
        points = _census_at(pu, cfg, [p.orb for p in prev])
        # measure distances to the last present point of every family
        taken_pt: set[int] = set()
        taken_fam: set[int] = set()
        pairs = []
        for fi, fam in enumerate(families):
            last = next((p for p in reversed(fam.points) if p is not None), None)
            if last is None:
                continue
            for pi, p in enumerate(points):
                d = max(
                    projective_distance(last.orb.up, p.orb.up),
                    projective_distance(last.orb.dn, p.orb.dn),
                )
                if d <= BRANCH_MATCH_TOL:
                    pairs.append((d, fi, pi))
        for d, fi, pi in sorted(pairs):
            if fi in taken_fam or pi in taken_pt:
                continue
            families[fi].points.append(points[pi])
            taken_fam.add(fi)
            taken_pt.add(pi)
        for fi, fam in enumerate(families):
            if fi not in taken_fam:
                fam.points.append(None)
        for pi, p in enumerate(points):
            if pi not in taken_pt:
                families.append(
                    BranchFamily(
                        u_values=u_grid,
                        points=[None] * k + [p],
                        label=f"b{len(families):02d}",
                    )
                )
        prev = points
    return families
