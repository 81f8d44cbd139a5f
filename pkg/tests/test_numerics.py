import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhmf_dimer.errors import DimensionError, InputError
from nhmf_dimer.numerics import c_inner, eig_small, herm_inner, projective_distance

finite = st.floats(-10, 10, allow_nan=False)
cvec2 = st.tuples(finite, finite, finite, finite).map(
    lambda v: np.array([complex(v[0], v[1]), complex(v[2], v[3])])
)


def test_c_inner_examples():
    assert c_inner([1, 1j], [1, 1j]) == pytest.approx(0)
    assert c_inner([1, 0], [0, 1]) == pytest.approx(0)
    assert c_inner([1, 1], [2, 3]) == pytest.approx(5)


def test_herm_inner_examples():
    assert herm_inner([1, 1j], [1, 1j]) == pytest.approx(2)
    assert herm_inner([1, 0], [0, 1]) == pytest.approx(0)
    assert herm_inner([1j, 0], [1, 0]) == pytest.approx(-1j)


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        c_inner([1, 2], [1, 2, 3])
    with pytest.raises(DimensionError):
        herm_inner([1, 2, 3, 4], [1, 2])


def test_inner_nonfinite_rejected():
    with pytest.raises(InputError):
        c_inner([np.inf, 0], [1, 0])


@given(cvec2, cvec2)
@settings(max_examples=200, deadline=None)
def test_c_inner_bilinear_symmetric(u, v):
    assert c_inner(u, v) == pytest.approx(c_inner(v, u), abs=1e-12)
    assert c_inner(2.5 * u, v) == pytest.approx(2.5 * c_inner(u, v), rel=1e-12, abs=1e-12)


@given(cvec2, cvec2)
@settings(max_examples=200, deadline=None)
def test_herm_inner_conjugate_symmetric(u, v):
    assert herm_inner(u, v) == pytest.approx(np.conj(herm_inner(v, u)), abs=1e-12)


def test_eig_exceptional_point():
    m = np.array([[1j, -1], [-1, -1j]])
    pairs = eig_small(m)
    assert all(abs(p.value) < 1e-12 for p in pairs)
    assert all(p.defective for p in pairs)
    for p in pairs:
        assert projective_distance(p.vector, np.array([1, 1j])) < 1e-10
        assert p.residual <= 1e-10


def test_eig_identity_not_defective():
    pairs = eig_small(np.eye(2, dtype=complex))
    assert [p.value for p in pairs] == [1, 1]
    assert not any(p.defective for p in pairs)


def test_eig_4x4_u0_kronecker_sum():
    from nhmf_dimer import ModelParams, build_exact_hamiltonian

    h = build_exact_hamiltonian(ModelParams(u=0.0))
    values = np.array([p.value for p in eig_small(h)])
    s17 = np.sqrt(17.0) / 4.0
    expected = np.sort([-s17 - 1, -s17 + 1, s17 - 1, s17 + 1])
    assert np.max(np.abs(values.real - expected)) < 1e-9
    assert np.max(np.abs(values.imag)) < 1e-12


def test_eig_rejects_other_sizes():
    with pytest.raises(DimensionError):
        eig_small(np.eye(3))


@given(st.lists(finite, min_size=8, max_size=8))
@settings(max_examples=150, deadline=None)
def test_eig2_residual_trace_and_c_orthogonality(v):
    # random complex symmetric 2x2
    m = np.array(
        [[complex(v[0], v[1]), complex(v[2], v[3])], [complex(v[2], v[3]), complex(v[4], v[5])]]
    )
    pairs = eig_small(m)
    assert abs(sum(p.value for p in pairs) - np.trace(m)) < 1e-9 * max(1.0, abs(np.trace(m)))
    for p in pairs:
        assert p.residual <= 1e-10
    v1, v2 = pairs[0].vector, pairs[1].vector
    distinct = abs(pairs[0].value - pairs[1].value) > 1e-6
    if distinct and not (pairs[0].defective or pairs[1].defective):
        assert abs(c_inner(v1, v2)) < 1e-8


def test_eig4_complex_symmetric_c_orthogonality():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = a + a.T
        pairs = eig_small(m)
        assert abs(sum(p.value for p in pairs) - np.trace(m)) < 1e-9 * max(1.0, abs(np.trace(m)))
        for p in pairs:
            assert p.residual <= 1e-10
        for i in range(4):
            for j in range(i + 1, 4):
                if abs(pairs[i].value - pairs[j].value) > 1e-6:
                    vi = pairs[i].vector / np.linalg.norm(pairs[i].vector)
                    vj = pairs[j].vector / np.linalg.norm(pairs[j].vector)
                    assert abs(np.dot(vi, vj)) < 1e-8


def test_projective_distance_examples():
    assert projective_distance([1, 1j], [2j, -2]) == pytest.approx(0, abs=1e-14)
    assert projective_distance([1, 0], [0, 1]) == pytest.approx(1)
    assert projective_distance([1, 1], [1, -1]) == pytest.approx(1)


def test_projective_distance_zero_vector():
    with pytest.raises(InputError):
        projective_distance([0, 0], [1, 0])
