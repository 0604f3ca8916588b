import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from randmaps.ensembles import (
    GinibreParams,
    RngStream,
    fourier_matrix,
    sample_ginibre,
    sample_haar_unitary,
)
from randmaps.errors import InvalidParameterError


def test_ginibre_unit_variance_n1():
    g = sample_ginibre(GinibreParams(1, 1.0), RngStream(1, 0))
    assert g.shape == (1, 1)
    vals = np.array([abs(sample_ginibre(GinibreParams(1), RngStream(7, i))[0, 0]) ** 2 for i in range(20_000)])
    # 20k draws: |G|^2 is Exp(1), stderr 0.007
    assert abs(vals.mean() - 1.0) < 0.03


def test_ginibre_entry_variance_scaled():
    # one stream, many matrices: E|G_mn|^2 = xi^2/N
    rng_vals = [sample_ginibre(GinibreParams(2, 0.5), RngStream(3, i)) for i in range(25_000)]
    m = np.mean(np.abs(np.array(rng_vals)) ** 2)
    assert abs(m - 0.125) < 0.005


def test_real_ginibre_variance():
    g = sample_ginibre(GinibreParams(300, 2.0, "real"), RngStream(0, 0))
    assert np.all(g.imag == 0)
    assert abs(np.mean(g.real**2) - 4.0 / 300) < 0.04 * 4.0 / 300


def test_ginibre_deterministic_and_streams_independent():
    p = GinibreParams(16)
    a = sample_ginibre(p, RngStream(5, 2))
    assert np.array_equal(a, sample_ginibre(p, RngStream(5, 2)))
    assert not np.array_equal(a, sample_ginibre(p, RngStream(5, 3)))
    assert not np.array_equal(a, sample_ginibre(p, RngStream(6, 2)))


def test_child_streams_differ():
    s = RngStream(1, 0)
    x = s.child(0).generator().random(4)
    y = s.child(1).generator().random(4)
    assert not np.array_equal(x, y)
    assert np.array_equal(x, RngStream(1, 0).child(0).generator().random(4))


@pytest.mark.parametrize("bad", [0, -1])
def test_dimension_errors(bad):
    with pytest.raises(InvalidParameterError):
        GinibreParams(bad)
    with pytest.raises(InvalidParameterError):
        sample_haar_unitary(bad, RngStream(0, 0))
    with pytest.raises(InvalidParameterError):
        fourier_matrix(bad)


def test_bad_scale_and_kind():
    with pytest.raises(InvalidParameterError):
        GinibreParams(3, 0.0)
    with pytest.raises(InvalidParameterError):
        GinibreParams(3, 1.0, "quaternion")


def test_haar_u1():
    u = sample_haar_unitary(1, RngStream(0, 0))
    assert abs(abs(u[0, 0]) - 1) < 1e-12


def test_haar_unitarity():
    u = sample_haar_unitary(8, RngStream(0, 1))
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) <= 1e-12


def test_haar_eigenphases_uniform():
    phases = np.concatenate([np.angle(np.linalg.eigvals(sample_haar_unitary(64, RngStream(11, i))))
                             for i in range(200)])
    ks = stats.ks_1samp(phases, stats.uniform(-np.pi, 2 * np.pi).cdf).statistic
    assert ks <= 0.05


def test_haar_first_column_phase_uniform():
    # without the QR phase correction the diagonal of R is positive and U00 is biased
    ph = np.array([np.angle(sample_haar_unitary(3, RngStream(2, i))[0, 0]) for i in range(3000)])
    assert stats.ks_1samp(ph, stats.uniform(-np.pi, 2 * np.pi).cdf).statistic < 0.04


def test_fourier_dim2():
    f = fourier_matrix(2)
    assert np.allclose(f, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


def test_fourier_convention_entry():
    d, p1, p2 = 5, 0.3, 0.7
    f = fourier_matrix(d, p1, p2)
    j, k = 3, 2
    assert np.isclose(f[j, k], np.exp(2j * np.pi * (j + p1) * (k + p2) / d) / np.sqrt(d), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 24), st.floats(-3, 3), st.floats(-3, 3))
def test_fourier_unitary_any_phases(d, p1, p2):
    f = fourier_matrix(d, p1, p2)
    assert np.max(np.abs(f.conj().T @ f - np.eye(d))) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32), st.integers(0, 100))
def test_haar_unitary_property(d, seed, idx):
    u = sample_haar_unitary(d, RngStream(seed, idx))
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-12
