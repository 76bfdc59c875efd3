import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povm_fisher.errors import DimensionMismatch, InvalidInput, NotHermitian, RankDeficientState
from povm_fisher.operator_space import (
    as_hermitian,
    build_basis,
    from_coords,
    gell_mann_basis,
    rho_inner,
    to_coords,
)
from povm_fisher.states import maximally_mixed, random_state, validate_state

from conftest import I2, SX, SY, SZ, random_hermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 4)


def test_rho_inner_trivial_values(mixed2):
    for seed in range(5):
        assert rho_inner(I2, I2, random_state(2, seed)) == pytest.approx(1.0, abs=1e-15)
    assert rho_inner(SZ, SZ, mixed2) == pytest.approx(1.0)
    assert rho_inner(SX, SY, mixed2) == pytest.approx(0.0, abs=1e-15)


def test_rho_inner_dimension_mismatch(mixed2):
    with pytest.raises(DimensionMismatch):
        rho_inner(np.eye(3), np.eye(3), mixed2)


def test_as_hermitian_rejects_rather_than_symmetrizes():
    bad = np.array([[1, 1e-9], [0, 1]])
    with pytest.raises(NotHermitian):
        as_hermitian(bad)
    ok = np.array([[1, 1e-11], [0, 1]])
    assert as_hermitian(ok)[0, 1] == 1e-11
    with pytest.raises(InvalidInput):
        as_hermitian(np.ones((1, 1)))


def test_gell_mann_qubit_is_pauli():
    g = gell_mann_basis(2)
    np.testing.assert_array_equal(g, np.array([I2, SX, SY, SZ]))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gell_mann_hs_orthogonal(d):
    g = gell_mann_basis(d)
    gram = np.real(np.einsum("kij,lji->kl", g, g))
    expected = 2.0 * np.eye(d * d)
    expected[0, 0] = d
    np.testing.assert_allclose(gram, expected, atol=1e-13)


def test_basis_at_maximally_mixed_qubit_is_pauli(mixed2):
    basis = build_basis(mixed2)
    np.testing.assert_allclose(basis.elements, np.array([I2, SX, SY, SZ]), atol=1e-15)


def test_basis_mean_zero_for_diag_state(diag_state):
    basis = build_basis(diag_state)
    means = [np.trace(diag_state.matrix @ b).real for b in basis.elements[1:]]
    assert max(abs(m) for m in means) <= 1e-12
    np.testing.assert_array_equal(basis.elements[0], I2)


def test_basis_rejects_rank_deficient():
    with pytest.raises(RankDeficientState):
        build_basis(np.diag([1.0, 0.0]).astype(complex))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_basis_gram_residual(seed, d):
    rho = random_state(d, seed)
    basis = build_basis(rho)
    assert basis.gram_residual <= 1e-12
    # recompute the Gram matrix from scratch with rho_inner
    n = basis.size
    gram = np.array([[rho_inner(basis.elements[k], basis.elements[l], rho) for l in range(n)] for k in range(n)])
    np.testing.assert_allclose(gram, np.eye(n), atol=1e-12)
    assert basis.well_conditioned


def test_basis_on_ill_conditioned_state():
    rho = validate_state(np.diag([1 - 2e-9, 1e-9, 1e-9]))
    basis = build_basis(rho)
    assert basis.gram_residual <= 1e-9


def test_coords_of_basis_elements(diag_state):
    basis = build_basis(diag_state)
    np.testing.assert_allclose(to_coords(np.eye(2), basis), [1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(to_coords(basis.elements, basis), np.eye(4), atol=1e-12)


def test_from_coords_examples(mixed2):
    basis = build_basis(mixed2)
    np.testing.assert_allclose(from_coords([1, 0, 0, 0], basis), I2)
    np.testing.assert_allclose(from_coords([0, 1, 0, 0], basis), SX)
    with pytest.raises(InvalidInput):
        from_coords([1, 0, 0], basis)
    with pytest.raises(DimensionMismatch):
        to_coords(np.eye(3), basis)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_coordinate_round_trip_and_linearity(seed, d):
    rng = np.random.default_rng(seed)
    basis = build_basis(random_state(d, seed))
    a = random_hermitian(rng, d)
    assert np.max(np.abs(from_coords(to_coords(a, basis), basis) - a)) <= 1e-10
    c1, c2 = rng.standard_normal((2, d * d))
    lhs = from_coords(c1 + c2, basis)
    assert np.max(np.abs(lhs - from_coords(c1, basis) - from_coords(c2, basis))) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_inner_product_properties(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_state(d, seed + 1)
    a, b = random_hermitian(rng, d), random_hermitian(rng, d)
    assert rho_inner(a, a, rho) > 0
    assert abs(rho_inner(a, b, rho) - rho_inner(b, a, rho)) <= 1e-12
    mm = maximally_mixed(d)
    assert abs(rho_inner(a, b, mm) - np.trace(a @ b).real / d) <= 1e-12
