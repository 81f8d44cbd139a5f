"""Stationary points of the two-site Hubbard mean field, Hermitian and not."""

from .hubbard_exact import (
    BASIS_LABELS,
    ExactSpectrum,
    ModelParams,
    build_exact_hamiltonian,
    exact_spectrum,
    exact_sweep,
)
from .meanfield import (
    FockPair,
    MeanFieldEnergies,
    OrbitalPair,
    bond_current,
    h_fock,
    h_site_densities,
    hmf_energy,
    nh_fock,
    nh_site_densities,
    nhmf_energy,
    nhmf_gradient,
    orbital_energies,
)
from .numerics import EigenPair, c_inner, eig_small, herm_inner, projective_distance

__version__ = "0.1.0"
