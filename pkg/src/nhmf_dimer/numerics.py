"""Small-dimension complex linear algebra: the two inner products and eigensolves.

Everything operates on plain numpy arrays of complex128.  Two inner products
coexist throughout the package:

* ``herm_inner(u, v) = sum(conj(u) * v)`` -- the conventional sesquilinear
  product, used for physical (Hermitian) expectation values.
* ``c_inner(u, v) = sum(u * v)`` -- the bilinear c-product appropriate for
  complex-symmetric operators, where the left eigenvector is the unconjugated
  transpose of the right one.  It can vanish on nonzero vectors; that collapse
  is exactly the exceptional-point signature this package must detect.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError

DEFECTIVE_CNORM_TOL = 1e-8
SYMMETRY_TOL = 1e-12


def _as_vector(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {u.shape}")
    if not np.all(np.isfinite(u.view(float))):
        raise InputError("vector has non-finite entries")
    return u


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise InputError("matrix has non-finite entries")
    return m


def c_inner(u, v) -> complex:
    """Bilinear product sum_i u_i v_i (no conjugation)."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.dot(u, v))


def herm_inner(u, v) -> complex:
    """Sesquilinear product sum_i conj(u_i) v_i."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def is_complex_symmetric(m, tol: float = SYMMETRY_TOL) -> bool:
    m = _as_square(m)
    return bool(np.max(np.abs(m - m.T)) <= tol)


def projective_distance(u, v) -> float:
    """1 - |<u,v>| / (|u| |v|); zero iff the vectors are parallel (any phase/scale)."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise InputError("projective distance is undefined for the zero vector")
    d = 1.0 - abs(np.vdot(u, v)) / (nu * nv)
    return float(min(max(d, 0.0), 1.0))


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue/right-eigenvector pair with its backward-error residual.

    ``defective`` marks c-norm collapse |v.v| < 1e-8 * <v|v>, the numerical
    fingerprint of an exceptional point for complex-symmetric matrices.
    """

    value: complex
    vector: np.ndarray
    residual: float
    defective: bool = False


def _finish_pair(m: np.ndarray, value: complex, vector: np.ndarray) -> EigenPair:
    nrm = np.linalg.norm(vector)
    vector = vector / nrm
    residual = float(np.linalg.norm(m @ vector - value * vector))
    cn = abs(np.dot(vector, vector))
    defective = cn < DEFECTIVE_CNORM_TOL * float(np.real(np.vdot(vector, vector)))
    return EigenPair(complex(value), vector, residual, defective)


def _eig2(m: np.ndarray) -> list[EigenPair]:
    p, q = m[0, 0], m[0, 1]
    s, w = m[1, 0], m[1, 1]
    mean = 0.5 * (p + w)
    disc = np.sqrt(complex(0.25 * (p - w) ** 2 + q * s))
    pairs = []
    for lam in (mean - disc, mean + disc):
        # two algebraically equivalent eigenvector candidates; keep the
        # better-conditioned one
        cand1 = np.array([q, lam - p], dtype=complex)
        cand2 = np.array([lam - w, s], dtype=complex)
        v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        if np.linalg.norm(v) == 0.0:  # diagonal matrix
            v = np.array([1.0, 0.0]) if abs(lam - p) <= abs(lam - w) else np.array([0.0, 1.0])
            v = v.astype(complex)
        pairs.append(_finish_pair(m, lam, v))
    return pairs


def _eig_dense(m: np.ndarray) -> list[EigenPair]:
    hermitian = np.max(np.abs(m - m.conj().T)) <= SYMMETRY_TOL
    if hermitian:
        vals, vecs = np.linalg.eigh(m)
    else:
        vals, vecs = np.linalg.eig(m)
    return [_finish_pair(m, vals[k], vecs[:, k]) for k in range(m.shape[0])]


def eig_small(m) -> list[EigenPair]:
    """All eigenpairs of a 2x2 or 4x4 complex matrix, ascending (Re, Im).

    The 2x2 path uses the closed-form quadratic, which stays exact through
    exceptional points (both copies of a defective eigenvalue come out with
    the single coalesced eigenvector, flagged).  4x4 uses LAPACK, with eigh
    on Hermitian input so isolated-system spectra come out exactly real.
    """
    m = _as_square(m)
    n = m.shape[0]
    if n not in (2, 4):
        raise DimensionError(f"eig_small handles n in (2, 4), got n = {n}")
    pairs = _eig2(m) if n == 2 else _eig_dense(m)
    pairs.sort(key=lambda p: (p.value.real, p.value.imag))
    return pairs
