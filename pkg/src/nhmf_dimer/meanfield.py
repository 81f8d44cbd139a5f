"""Hermitian and non-Hermitian mean-field functionals of the two-site model.

One electron per spin, each in a two-component orbital: up-spin (a, b),
down-spin (c, d).  Two parallel sets of formulas exist side by side:

* The non-Hermitian (NH) flavor uses c-product densities n_a^up = a^2/(a^2+b^2)
  (no conjugation).  Densities, Fock matrices and the total energy are then
  complex in general, and every denominator can vanish on nonzero orbitals --
  the exceptional-point regime.  Such inputs raise GaugeSingularError instead
  of silently amplifying roundoff.
* The Hermitian flavor uses conventional densities |a|^2/(|a|^2+|b|^2) and is
  the physical-energy readout for any orbital configuration, including NH
  stationary points.

Both total energies are invariant under independent complex rescaling of
(a, b) and of (c, d); nothing here pre-normalizes, so that invariance is a
genuine property of the formulas rather than of a convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaugeSingularError, InputError
from .hubbard_exact import ModelParams
from .numerics import c_inner, herm_inner

CNORM_COLLAPSE_TOL = 1e-12


@dataclass(frozen=True)
class OrbitalPair:
    """Orbital coefficients: up spin (a, b), down spin (c, d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(np.isfinite(complex(v)) for v in vals):
            raise InputError("orbital coefficients must be finite")
        if self.a == 0 and self.b == 0:
            raise InputError("up-spin orbital is identically zero")
        if self.c == 0 and self.d == 0:
            raise InputError("down-spin orbital is identically zero")

    @property
    def up(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    @property
    def dn(self) -> np.ndarray:
        return np.array([self.c, self.d], dtype=complex)

    def conjugate(self) -> "OrbitalPair":
        return OrbitalPair(
            np.conj(self.a), np.conj(self.b), np.conj(self.c), np.conj(self.d)
        )

    def nh_evaluable(self, tol: float = CNORM_COLLAPSE_TOL) -> bool:
        """True if both c-norms are safely away from collapse."""
        up_ok = abs(self.a**2 + self.b**2) > tol * (abs(self.a) ** 2 + abs(self.b) ** 2)
        dn_ok = abs(self.c**2 + self.d**2) > tol * (abs(self.c) ** 2 + abs(self.d) ** 2)
        return up_ok and dn_ok

    def normalized(self) -> "OrbitalPair":
        """Hermitian-normalized representative with a fixed phase convention.

        Each spin is scaled to unit conventional norm and rotated so its
        largest-modulus component is real and positive; deterministic, and
        independent of the gauge of the input.
        """
        up = _phase_fixed(self.up)
        dn = _phase_fixed(self.dn)
        return OrbitalPair(up[0], up[1], dn[0], dn[1])


def _phase_fixed(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    pivot = v[int(np.argmax(np.abs(v)))]
    return v * (np.conj(pivot) / abs(pivot))


@dataclass(frozen=True)
class FockPair:
    """Per-spin 2x2 effective one-electron matrices; flavor 'nh' or 'h'."""

    up: np.ndarray
    dn: np.ndarray
    flavor: str


@dataclass(frozen=True)
class MeanFieldEnergies:
    """Total-energy bundle at one orbital configuration.

    nh fields are None when only the Hermitian functional was evaluated.
    gamma = -2 Im(E_nh) is the decay rate of the corresponding metastable
    state; the Hermitian energy is real by construction.
    """

    nh_energy: complex | None
    h_energy: float
    gamma: float | None
    nh_hartree: complex | None
    h_hartree: float


def _unit_scale(orb: OrbitalPair) -> "OrbitalPair":
    """Per-spin rescaling to order-one magnitude.

    Every NH quantity except the gradient is exactly invariant under this, and
    it keeps the explicit c-norm denominators out of under/overflow territory
    for extreme input scales.
    """
    s_up = max(abs(orb.a), abs(orb.b))
    s_dn = max(abs(orb.c), abs(orb.d))
    return OrbitalPair(orb.a / s_up, orb.b / s_up, orb.c / s_dn, orb.d / s_dn)


def _cnorm_or_raise(x: complex, y: complex, which: str) -> complex:
    cn = x**2 + y**2
    scale = abs(x) ** 2 + abs(y) ** 2
    if abs(cn) <= CNORM_COLLAPSE_TOL * scale:
        raise GaugeSingularError(f"{which} orbital c-norm collapsed", abs(cn))
    return cn


def nh_site_densities(orb: OrbitalPair) -> tuple[complex, complex, complex, complex]:
    """c-product site densities (n_a_up, n_b_up, n_a_dn, n_b_dn); per spin they sum to 1."""
    orb = _unit_scale(orb)
    cn_up = _cnorm_or_raise(orb.a, orb.b, "up")
    cn_dn = _cnorm_or_raise(orb.c, orb.d, "down")
    return (
        complex(orb.a**2 / cn_up),
        complex(orb.b**2 / cn_up),
        complex(orb.c**2 / cn_dn),
        complex(orb.d**2 / cn_dn),
    )


def h_site_densities(orb: OrbitalPair) -> tuple[float, float, float, float]:
    """Conventional site densities, each in [0, 1], per spin summing to 1."""
    orb = _unit_scale(orb)
    nup = abs(orb.a) ** 2 + abs(orb.b) ** 2
    ndn = abs(orb.c) ** 2 + abs(orb.d) ** 2
    return (
        abs(orb.a) ** 2 / nup,
        abs(orb.b) ** 2 / nup,
        abs(orb.c) ** 2 / ndn,
        abs(orb.d) ** 2 / ndn,
    )


def nh_fock(params: ModelParams, orb: OrbitalPair) -> FockPair:
    """NH Fock matrices: each spin sees U times the other spin's c-density."""
    na_up, nb_up, na_dn, nb_dn = nh_site_densities(orb)
    t, u = params.t, params.u
    up = np.array(
        [[params.h_up_a + u * na_dn, -t], [-t, params.h_up_b + u * nb_dn]], dtype=complex
    )
    dn = np.array(
        [[params.h_dn_a + u * na_up, -t], [-t, params.h_dn_b + u * nb_up]], dtype=complex
    )
    return FockPair(up=up, dn=dn, flavor="nh")


def h_fock(params: ModelParams, orb: OrbitalPair) -> FockPair:
    """Hermitian Fock matrices built from conventional densities."""
    na_up, nb_up, na_dn, nb_dn = h_site_densities(orb)
    t, u = params.t, params.u
    up = np.array(
        [[params.h_up_a + u * na_dn, -t], [-t, params.h_up_b + u * nb_dn]], dtype=complex
    )
    dn = np.array(
        [[params.h_dn_a + u * na_up, -t], [-t, params.h_dn_b + u * nb_up]], dtype=complex
    )
    return FockPair(up=up, dn=dn, flavor="h")


def _c_rayleigh(f: np.ndarray, v: np.ndarray) -> complex:
    return c_inner(v, f @ v) / c_inner(v, v)


def _h_rayleigh(f: np.ndarray, v: np.ndarray) -> complex:
    return herm_inner(v, f @ v) / herm_inner(v, v)


def _h_energy_parts(params: ModelParams, orb: OrbitalPair) -> tuple[float, float]:
    orb = _unit_scale(orb)
    fock = h_fock(params, orb)
    na_up, nb_up, na_dn, nb_dn = h_site_densities(orb)
    hartree = params.u * (na_up * na_dn + nb_up * nb_dn)
    total = _h_rayleigh(fock.up, orb.up) + _h_rayleigh(fock.dn, orb.dn) - hartree
    return float(np.real(total)), float(hartree)


def nhmf_energy(params: ModelParams, orb: OrbitalPair) -> MeanFieldEnergies:
    """NH total energy (sum of c-Rayleigh quotients minus the NH Hartree term).

    The Hermitian readout of the same configuration is filled in alongside.
    """
    orb = _unit_scale(orb)
    fock = nh_fock(params, orb)
    cn_up = orb.a**2 + orb.b**2
    cn_dn = orb.c**2 + orb.d**2
    hartree = params.u * (orb.a**2 * orb.c**2 + orb.b**2 * orb.d**2) / (cn_up * cn_dn)
    nh = _c_rayleigh(fock.up, orb.up) + _c_rayleigh(fock.dn, orb.dn) - hartree
    h_energy, h_hartree = _h_energy_parts(params, orb)
    return MeanFieldEnergies(
        nh_energy=complex(nh),
        h_energy=h_energy,
        gamma=-2.0 * float(np.imag(nh)),
        nh_hartree=complex(hartree),
        h_hartree=h_hartree,
    )


def hmf_energy(params: ModelParams, orb: OrbitalPair) -> MeanFieldEnergies:
    """Hermitian total energy; real for any complex orbitals when params are real."""
    h_energy, h_hartree = _h_energy_parts(params, orb)
    return MeanFieldEnergies(
        nh_energy=None, h_energy=h_energy, gamma=None, nh_hartree=None, h_hartree=h_hartree
    )


def stationarity_defects(params: ModelParams, orb: OrbitalPair) -> tuple[complex, complex]:
    """Scalar defects (k_up, k_dn) whose simultaneous vanishing is stationarity.

    k_up = (h_a^up - h_b^up) a b + t (a^2 - b^2) + U a b (c^2 - d^2)/(c^2 + d^2)
    and the spin-swapped k_dn.  The NH gradient factorizes through these, and
    k_up = 0 is algebraically the condition that (a, b) is an eigenvector of
    its NH Fock matrix, so they double as self-consistency defects.
    """
    scaled = _unit_scale(orb)
    s_up = orb.a / scaled.a if scaled.a != 0 else orb.b / scaled.b
    s_dn = orb.c / scaled.c if scaled.c != 0 else orb.d / scaled.d
    a, b, c, d = scaled.a, scaled.b, scaled.c, scaled.d
    t, u = params.t, params.u
    if u == 0.0:
        ratio_dn = 0.0
        ratio_up = 0.0
    else:
        cn_up = _cnorm_or_raise(a, b, "up")
        cn_dn = _cnorm_or_raise(c, d, "down")
        ratio_dn = (c**2 - d**2) / cn_dn
        ratio_up = (a**2 - b**2) / cn_up
    k_up = (params.h_up_a - params.h_up_b) * a * b + t * (a**2 - b**2) + u * a * b * ratio_dn
    k_dn = (params.h_dn_a - params.h_dn_b) * c * d + t * (c**2 - d**2) + u * c * d * ratio_up
    # the defects are quadratic in each spin's own scale
    return complex(k_up * s_up**2), complex(k_dn * s_dn**2)


def nhmf_gradient(params: ModelParams, orb: OrbitalPair) -> np.ndarray:
    """Holomorphic partials (dE/da, dE/db, dE/dc, dE/dd) of the NH energy.

    (a, b, c, d) are treated as independent complex variables; both axis
    directions of a difference quotient reproduce these values.  Scale-zero
    along each orbital's gauge direction: a dE/da + b dE/db = 0 identically.
    """
    scaled = _unit_scale(orb)
    s_up = orb.a / scaled.a if scaled.a != 0 else orb.b / scaled.b
    s_dn = orb.c / scaled.c if scaled.c != 0 else orb.d / scaled.d
    a, b, c, d = scaled.a, scaled.b, scaled.c, scaled.d
    k_up, k_dn = stationarity_defects(params, scaled)
    cn_up = a**2 + b**2
    cn_dn = c**2 + d**2
    # gradients at the original scale follow from degree-0 homogeneity
    return np.array(
        [
            2.0 * b * k_up / cn_up**2 / s_up,
            -2.0 * a * k_up / cn_up**2 / s_up,
            2.0 * d * k_dn / cn_dn**2 / s_dn,
            -2.0 * c * k_dn / cn_dn**2 / s_dn,
        ],
        dtype=complex,
    )


def orbital_energies(fock: FockPair, orb: OrbitalPair) -> tuple[complex, complex]:
    """Occupied-orbital energies: each spin's Rayleigh quotient in its own Fock matrix.

    NH flavor uses the c-product quotient, Hermitian flavor the conventional
    one; at a self-consistent point either equals a Fock eigenvalue.
    """
    orb = _unit_scale(orb)
    if fock.flavor == "nh":
        _cnorm_or_raise(orb.a, orb.b, "up")
        _cnorm_or_raise(orb.c, orb.d, "down")
        return (
            complex(_c_rayleigh(fock.up, orb.up)),
            complex(_c_rayleigh(fock.dn, orb.dn)),
        )
    return (
        complex(_h_rayleigh(fock.up, orb.up)),
        complex(_h_rayleigh(fock.dn, orb.dn)),
    )


def bond_current(orb: OrbitalPair, t: float) -> tuple[float, float]:
    """Tight-binding bond currents (j_up, j_dn) of the conventionally normalized orbitals.

    j = 2 t Im(conj(first) * second) / (|first|^2 + |second|^2).  A diagnostic:
    real-representable configurations carry none, every genuinely complex
    self-consistent state carries some.
    """
    j_up = 2.0 * t * float(np.imag(np.conj(orb.a) * orb.b)) / (abs(orb.a) ** 2 + abs(orb.b) ** 2)
    j_dn = 2.0 * t * float(np.imag(np.conj(orb.c) * orb.d)) / (abs(orb.c) ** 2 + abs(orb.d) ** 2)
    return j_up, j_dn
