import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randmaps.channels import (
    ChannelSpec,
    Superoperator,
    bloch_matrix,
    compose,
    depolarizing_channel,
    fixed_point,
    gell_mann_basis,
    identity_superoperator,
    kraus_to_superoperator,
    random_composition,
    random_map,
    spectrum_bulk,
    to_affine,
    unitary_channel,
)
from randmaps.ensembles import RngStream, sample_haar_unitary
from randmaps.errors import BasisInconsistencyError, InvalidParameterError, ShapeError
from randmaps.spectral import eigenvalues


def random_state(d, seed):
    g = np.random.default_rng(seed).normal(size=(d, d)) + 1j * np.random.default_rng(seed + 1).normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_vectorisation_convention():
    # superoperator acting on rho.reshape(-1) must equal the Kraus action
    rng = np.random.default_rng(0)
    ks = rng.normal(size=(3, 4, 4)) + 1j * rng.normal(size=(3, 4, 4))
    sop = kraus_to_superoperator(ks)
    rho = random_state(4, 3)
    ref = sum(k @ rho @ k.conj().T for k in ks)
    assert np.allclose(sop.apply(rho), ref)
    assert np.allclose(sop.matrix, sum(np.kron(k, k.conj()) for k in ks))


@pytest.mark.parametrize("d,M", [(2, 1), (3, 2), (5, 5), (4, 9)])
def test_random_map_is_a_channel(d, M):
    sop = random_map(ChannelSpec(d, M, seed=1))
    assert sop.kraus.shape == (M, d, d)
    assert sop.kraus_completeness_error() < 1e-12
    assert sop.trace_preservation_error() < 1e-12
    out = sop.apply(random_state(d, 5))
    assert np.isclose(np.trace(out), 1)
    assert np.allclose(out, out.conj().T)
    assert np.min(np.linalg.eigvalsh(out)) > -1e-12


def test_map_with_trivial_environment_is_unitary():
    sop = random_map(ChannelSpec(6, 1, seed=2))
    assert np.allclose(np.abs(eigenvalues(sop.matrix).values), 1.0, atol=1e-10)


def test_leading_eigenvalue_and_radius():
    d, M = 8, 8
    for s in (1, 2):
        sop = random_composition(d, M, s, seed=3)
        z = eigenvalues(sop.matrix).values
        z = z[np.argsort(-np.abs(z))]
        assert abs(z[0] - 1) < 1e-10
        assert abs(z[1]) < 1.6 * M ** (-s / 2)


def test_compose_identity_and_order():
    sop = random_map(ChannelSpec(3, 2, seed=4))
    assert np.allclose(compose([sop, identity_superoperator(3)]).matrix, sop.matrix)
    u = unitary_channel(sample_haar_unitary(3, RngStream(0, 0)))
    rho = random_state(3, 1)
    # compose([A, B]) applies B first
    assert np.allclose(compose([sop, u]).apply(rho), sop.apply(u.apply(rho)))
    with pytest.raises(ShapeError):
        compose([sop, identity_superoperator(2)])
    with pytest.raises(InvalidParameterError):
        compose([])


def test_random_composition_deterministic():
    a = random_composition(3, 3, 3, seed=9, index=2).matrix
    b = random_composition(3, 3, 3, seed=9, index=2).matrix
    c = random_composition(3, 3, 3, seed=9, index=3).matrix
    assert np.array_equal(a, b) and not np.allclose(a, c)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_gell_mann_orthonormal_hermitian(d):
    g = gell_mann_basis(d)
    assert g.shape == (d * d, d, d)
    gram = np.einsum("iab,jba->ij", g, g)
    assert np.allclose(gram, np.eye(d * d), atol=1e-14)
    assert np.allclose(g, g.conj().transpose(0, 2, 1))
    assert np.allclose(np.trace(g[1:], axis1=1, axis2=2), 0)


def test_gell_mann_d2_is_pauli():
    g = gell_mann_basis(2) * np.sqrt(2)
    assert np.allclose(g[1], [[0, 1], [1, 0]])
    assert np.allclose(g[2], [[0, -1j], [1j, 0]])
    assert np.allclose(g[3], [[1, 0], [0, -1]])


def test_affine_form_first_row():
    sop = random_map(ChannelSpec(4, 3, seed=5))
    r = bloch_matrix(sop)
    assert np.isclose(r[0, 0], 1.0) and np.allclose(r[0, 1:], 0, atol=1e-13)
    aff = to_affine(sop)
    assert np.allclose(aff.block_matrix(), r)


def test_affine_action_on_bloch_vector():
    d = 3
    sop = random_map(ChannelSpec(d, 4, seed=6))
    g = gell_mann_basis(d)
    rho = random_state(d, 7)
    a = np.einsum("iab,ba->i", g, rho).real
    out = np.einsum("iab,ba->i", g, sop.apply(rho)).real
    aff = to_affine(sop)
    assert np.allclose(out[1:], aff.C @ a[1:] + aff.kappa * a[0])


def test_unitary_channel_is_unital():
    aff = to_affine(unitary_channel(sample_haar_unitary(4, RngStream(1, 1))))
    assert np.allclose(aff.kappa, 0, atol=1e-13)
    assert np.allclose(aff.C @ aff.C.T, np.eye(15), atol=1e-12)


def test_depolarising_channel():
    sop = depolarizing_channel(3)
    assert np.allclose(sop.apply(random_state(3, 2)), np.eye(3) / 3)
    aff = to_affine(sop)
    assert np.allclose(aff.C, 0, atol=1e-14) and np.allclose(aff.kappa, 0, atol=1e-14)


def test_basis_inconsistency():
    bad = Superoperator(1j * np.eye(4))
    with pytest.raises(BasisInconsistencyError):
        bloch_matrix(bad)


def test_bulk_spectrum_is_block_spectrum():
    sop = random_map(ChannelSpec(4, 2, seed=8))
    full = eigenvalues(sop.matrix).values
    bulk = spectrum_bulk(sop).values
    assert bulk.size == 15
    full = np.delete(full, np.argmin(np.abs(full - 1)))
    d = np.abs(bulk[:, None] - full[None, :]).min(axis=1)
    assert d.max() < 1e-10


def test_fixed_point():
    sop = random_map(ChannelSpec(3, 2, seed=10))
    rho = fixed_point(sop)
    assert np.isclose(np.trace(rho), 1)
    assert np.allclose(sop.apply(rho), rho, atol=1e-10)
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-10
    assert np.allclose(fixed_point(depolarizing_channel(3)), np.eye(3) / 3)


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        ChannelSpec(1, 2)
    with pytest.raises(InvalidParameterError):
        ChannelSpec(3, 0)
    with pytest.raises(ShapeError):
        Superoperator(np.eye(5))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(1, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_composition_properties(d, M, s, seed):
    sop = random_composition(d, M, s, seed)
    assert sop.trace_preservation_error() < 1e-11
    r = bloch_matrix(sop)
    assert np.isclose(r[0, 0], 1) and np.allclose(r[0, 1:], 0, atol=1e-12)
    z = eigenvalues(sop.matrix).values
    # CPTP maps are contractive: spectrum in the unit disk with 1 present
    assert np.max(np.abs(z)) < 1 + 1e-9
    assert np.min(np.abs(z - 1)) < 1e-9
