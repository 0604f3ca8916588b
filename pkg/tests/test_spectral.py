import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from randmaps.ensembles import GinibreParams, RngStream, sample_ginibre, sample_haar_unitary
from randmaps.errors import (
    DegenerateInputError,
    InvalidInputError,
    InvalidParameterError,
    KindMismatchError,
    ShapeError,
)
from randmaps.spectral import (
    SpectrumSample,
    WishartSpectrum,
    count_real_eigenvalues,
    eigenvalues,
    matrix_power,
    matrix_product,
    shannon_entropy_rel,
    singular_values_squared,
    wishart_from_singular,
    wishart_normalize,
)


def sorted_c(z):
    z = np.asarray(z)
    return z[np.lexsort((z.imag, z.real))]


def test_eigenvalues_diagonal():
    z = eigenvalues(np.diag([1.0, 2.0, 3.0])).values
    assert np.allclose(np.sort(z.real), [1, 2, 3]) and np.all(z.imag == 0)


def test_eigenvalues_rotation():
    z = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]])).values
    assert np.allclose(sorted_c(z), [-1j, 1j])
    assert z[0] == np.conj(z[1])


def test_eigen_errors():
    with pytest.raises(ShapeError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        eigenvalues(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(ShapeError):
        singular_values_squared(np.ones(3))


def test_trace_moment_identities():
    a = sample_ginibre(GinibreParams(60), RngStream(0, 0))
    z = eigenvalues(a).values
    assert abs(z.sum() - np.trace(a)) < 1e-10 * 60
    assert abs(np.sum(z**2) - np.trace(a @ a)) < 1e-10 * 60


def test_real_matrix_conjugation_closure():
    a = sample_ginibre(GinibreParams(50, kind="real"), RngStream(1, 0)).real
    z = eigenvalues(a).values
    assert np.allclose(sorted_c(z), sorted_c(np.conj(z)), atol=1e-12)


def test_spectral_mapping_power():
    a = sample_ginibre(GinibreParams(30), RngStream(2, 0))
    z3 = eigenvalues(matrix_power(a, 3)).values
    ref = eigenvalues(a).values ** 3
    # match each power eigenvalue to its nearest counterpart
    d = np.abs(z3[:, None] - ref[None, :]).min(axis=1)
    assert d.max() < 1e-10


def test_singular_unitary_and_diag():
    u = sample_haar_unitary(12, RngStream(0, 0))
    assert np.allclose(singular_values_squared(u).values, 1.0, atol=1e-10)
    assert np.allclose(np.sort(singular_values_squared(np.diag([3.0, 4.0])).values), [9, 16])


def test_singular_matches_gram_eigenvalues():
    a = sample_ginibre(GinibreParams(40), RngStream(4, 0))
    sv2 = np.sort(singular_values_squared(a).values)
    ev = np.sort(np.linalg.eigvalsh(a @ a.conj().T))
    assert np.allclose(sv2, ev, atol=1e-12)


def test_product_and_power_fixtures():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matrix_product([np.eye(2), a, np.eye(2)]), a)
    assert np.array_equal(matrix_product([a]), a)
    assert np.array_equal(matrix_power(a, 1), a)
    assert np.array_equal(matrix_power(a, 0), np.eye(2))
    assert np.array_equal(matrix_power(np.diag([2.0, 3.0]), 3), np.diag([8.0, 27.0]))
    with pytest.raises(ShapeError):
        matrix_product([a, np.eye(3)])
    with pytest.raises(InvalidParameterError):
        matrix_product([])
    with pytest.raises(InvalidParameterError):
        matrix_power(a, -1)


def test_wishart_identity():
    w = wishart_normalize(np.eye(4))
    assert np.allclose(w.lambdas, 0.25) and np.allclose(w.rescaled, 1.0)
    assert w.n_retained == 4


def test_wishart_drop_leading():
    w = wishart_from_singular([5.0, 1.0, 1.0, 2.0], drop_leading=True)
    assert w.n_retained == 3
    assert np.allclose(np.sort(w.lambdas), [0.25, 0.25, 0.5])


def test_wishart_errors():
    with pytest.raises(DegenerateInputError):
        wishart_normalize(np.zeros((3, 3)))
    with pytest.raises(InvalidInputError):
        wishart_from_singular([1.0, -0.1])


def test_entropy_fixtures():
    n = 7
    assert abs(shannon_entropy_rel(WishartSpectrum(np.full(n, 1 / n)))) < 1e-14
    pure = np.zeros(n)
    pure[0] = 1.0
    assert np.isclose(shannon_entropy_rel(WishartSpectrum(pure)), -np.log(n))
    with pytest.raises(InvalidInputError):
        shannon_entropy_rel(WishartSpectrum(np.array([1.2, -0.2])))


def test_count_real_fixtures():
    assert count_real_eigenvalues(eigenvalues(np.diag([1.0, 2.0, 3.0]))) == 3
    assert count_real_eigenvalues(SpectrumSample(np.array([1j, -1j])), eps=1e-8) == 0
    with pytest.raises(KindMismatchError):
        count_real_eigenvalues(singular_values_squared(np.eye(2)))


def test_real_eigenvalue_count_grows_like_sqrt_n():
    ns = np.array([64, 256, 1024])
    reps = {64: 200, 256: 40, 1024: 6}
    means = []
    for n in ns:
        c = [count_real_eigenvalues(eigenvalues(sample_ginibre(GinibreParams(int(n), kind="real"),
                                                               RngStream(9, i))))
             for i in range(reps[int(n)])]
        means.append(np.mean(c))
    slope = np.polyfit(np.log(ns), np.log(means), 1)[0]
    assert abs(slope - 0.5) <= 0.1
    # leading-order constant sqrt(2N/pi)
    assert abs(means[-1] / np.sqrt(2 * 1024 / np.pi) - 1) < 0.1


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(-10, 10)))
def test_eig_trace_property(a):
    z = eigenvalues(a).values
    assert abs(z.sum().real - np.trace(a)) <= 1e-8 * (1 + np.abs(a).sum())
    assert np.allclose(sorted_c(z), sorted_c(np.conj(z)), atol=1e-6 * (1 + np.abs(a).max()))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.integers(0, 1000), st.booleans())
def test_wishart_normalisation_property(n, seed, drop):
    a = sample_ginibre(GinibreParams(n), RngStream(seed, 0))
    w = wishart_normalize(a, drop_leading=drop)
    assert np.isclose(w.lambdas.sum(), 1.0)
    assert w.n_retained == n - drop
    assert np.isclose(w.rescaled.mean(), 1.0)
    e = shannon_entropy_rel(w)
    assert -np.log(w.n_retained) - 1e-12 <= e <= 1e-12
