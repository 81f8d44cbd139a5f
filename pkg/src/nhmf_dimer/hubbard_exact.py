"""Exact two-electron solution of the two-site Hubbard model.

The opposite-spin two-electron sector is four-dimensional; in the basis
(both electrons on a, both on b, up on a / down on b, down on a / up on b)
the Hamiltonian is the complex-symmetric 4x4 built below.  Its spectrum is
the oracle every mean-field result in this package is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError
from .numerics import EigenPair, eig_small

BASIS_LABELS = ("both_on_a", "both_on_b", "up_a_dn_b", "dn_a_up_b")

ISOLATION_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Hopping t, on-site repulsion U and per-site/per-spin on-site energies.

    On-site energies may be complex: that is how source/sink contact
    potentials are injected for transport runs.  The default on-site values
    are the deliberately symmetry-free study set (no spin or mirror symmetry).
    """

    t: float = 1.0
    u: float = 0.0
    h_up_a: complex = 0.25
    h_up_b: complex = -0.25
    h_dn_a: complex = 0.0
    h_dn_b: complex = 0.0

    def __post_init__(self):
        values = (self.t, self.u, self.h_up_a, self.h_up_b, self.h_dn_a, self.h_dn_b)
        if not all(np.isfinite(complex(v)) for v in values):
            raise InputError("model parameters must be finite")
        if not self.t > 0:
            raise InputError(f"hopping must be positive, got t = {self.t}")
        if self.u < 0:
            raise InputError(f"on-site repulsion must be nonnegative, got U = {self.u}")

    @property
    def is_isolated(self) -> bool:
        """True iff all on-site energies are real (no contact dressing)."""
        return all(
            abs(complex(h).imag) <= ISOLATION_TOL
            for h in (self.h_up_a, self.h_up_b, self.h_dn_a, self.h_dn_b)
        )

    def with_u(self, u: float) -> "ModelParams":
        return replace(self, u=float(u))

    def one_particle_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Bare one-electron matrices (h_up, h_dn), each 2x2."""
        h_up = np.array([[self.h_up_a, -self.t], [-self.t, self.h_up_b]], dtype=complex)
        h_dn = np.array([[self.h_dn_a, -self.t], [-self.t, self.h_dn_b]], dtype=complex)
        return h_up, h_dn


@dataclass(frozen=True)
class ExactSpectrum:
    params: ModelParams
    eigenpairs: list[EigenPair]
    basis_labels: tuple[str, ...] = BASIS_LABELS

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.value for p in self.eigenpairs])


def build_exact_hamiltonian(params: ModelParams) -> np.ndarray:
    """The 4x4 two-electron matrix in the opposite-spin basis above.

    Diagonal: E1 = h_a^up + h_a^dn + U, E2 = h_b^up + h_b^dn + U,
    E3 = h_a^up + h_b^dn, E4 = h_a^dn + h_b^up.  The +t entries in the last
    row/column carry the fermionic sign from the chosen operator ordering.
    """
    t = params.t
    e1 = params.h_up_a + params.h_dn_a + params.u
    e2 = params.h_up_b + params.h_dn_b + params.u
    e3 = params.h_up_a + params.h_dn_b
    e4 = params.h_dn_a + params.h_up_b
    return np.array(
        [
            [e1, 0.0, -t, t],
            [0.0, e2, -t, t],
            [-t, -t, e3, 0.0],
            [t, t, 0.0, e4],
        ],
        dtype=complex,
    )


def exact_spectrum(params: ModelParams) -> ExactSpectrum:
    """All four eigenpairs, ascending (Re, Im)."""
    h = build_exact_hamiltonian(params)
    return ExactSpectrum(params=params, eigenpairs=eig_small(h))


def exact_sweep(params: ModelParams, u_grid) -> list[ExactSpectrum]:
    """One spectrum per grid value of U, all other parameters held fixed."""
    u_grid = np.asarray(u_grid, dtype=float)
    if u_grid.size == 0:
        raise InputError("empty U grid")
    if u_grid.size > 1 and np.any(np.diff(u_grid) <= 0):
        raise InputError("U grid must be strictly ascending")
    return [exact_spectrum(params.with_u(u)) for u in u_grid]
