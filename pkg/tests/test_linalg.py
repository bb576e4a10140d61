import numpy as np
import pytest

from conftest import complex_gaussian
from oracles import central_difference_eigenvalues, two_by_two_eigenvalues
from isotangent.exceptions import (
    AmbiguousMatchingError,
    DegenerateSpectrumError,
    InputError,
)
from isotangent.linalg import (
    eigen_full,
    eigenvalue_derivative,
    eigenvalues,
    match_eigenvalues,
    singular_values,
    spectral_gaps,
    spectral_norm,
    svd_full,
)


@pytest.mark.parametrize(
    "M, expected",
    [(np.eye(3), 1.0), (np.diag([3.0, -4.0]), 4.0), ([[0, 1], [0, 0]], 1.0)],
)
def test_spectral_norm(M, expected):
    assert spectral_norm(M) == pytest.approx(expected, rel=1e-15)


def test_eigen_full_diagonal():
    spec = eigen_full(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(spec.eigenvalues, [1, 2, 3])
    np.testing.assert_allclose(np.abs(spec.right), np.eye(3))
    np.testing.assert_allclose(spec.left.conj().T @ spec.right, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(spec.gaps, [1, 1, 1])


def test_eigen_full_two_by_two_closed_form():
    spec = eigen_full([[0, 0.1], [0.1, 1]])
    expected = two_by_two_eigenvalues(0, 0.1, 0.1, 1)
    np.testing.assert_allclose(spec.eigenvalues, expected, rtol=1e-14)
    np.testing.assert_allclose(spec.eigenvalues.real, [-0.0099019514, 1.0099019514], atol=1e-10)


def test_eigen_full_residual_and_biorthogonality(rng):
    A = complex_gaussian(rng, (30, 30))
    spec = eigen_full(A)
    norm_a = np.linalg.norm(A, 2)
    res = np.linalg.norm(A @ spec.right - spec.right * spec.eigenvalues, axis=0).max()
    assert res <= 10 * 1e-10 * norm_a
    np.testing.assert_allclose(spec.left.conj().T @ spec.right, np.eye(30), atol=1e-10)
    np.testing.assert_allclose(spec.reconstruct(), A, atol=1e-10)
    np.testing.assert_allclose(np.linalg.norm(spec.right, axis=0), 1)


def test_eigen_full_sorted():
    spec = eigen_full(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(spec.eigenvalues, [1, 2, 3])


def test_eigen_full_rejects_repeated_eigenvalues():
    with pytest.raises(DegenerateSpectrumError):
        eigen_full(np.diag([1.0, 1.0, 2.0]))


def test_eigen_full_input_errors():
    with pytest.raises(InputError):
        eigen_full(np.ones((2, 3)))
    with pytest.raises(InputError):
        eigen_full([[np.nan, 0], [0, 1]])
    with pytest.raises(InputError):
        eigen_full(np.zeros((0, 0)))


def test_eigenvalues_allow_repeats():
    np.testing.assert_allclose(eigenvalues(np.zeros((3, 3))), 0)


def test_svd_full_diagonal_and_zero(rng):
    trip = svd_full(np.diag([2.0, 1.0]))
    assert [t.sigma for t in trip] == [2.0, 1.0]
    np.testing.assert_allclose(np.abs(trip[0].left), [1, 0])
    np.testing.assert_allclose(singular_values(np.zeros((3, 2))), 0)
    A = complex_gaussian(rng, (5, 3))
    trip = svd_full(A)
    rebuilt = sum(t.sigma * np.outer(t.left, t.right.conj()) for t in trip)
    assert np.linalg.norm(rebuilt - A) <= 1e-12 * np.linalg.norm(A)


def test_spectral_gaps_single():
    assert spectral_gaps([5.0])[0] == np.inf


def test_eigenvalue_derivative_tangent_and_diagonal():
    spec = eigen_full(np.diag([0.0, 1.0]))
    assert eigenvalue_derivative(spec, [[0, 0.3], [0.7, 0]], 0) == 0
    assert eigenvalue_derivative(spec, np.diag([5.0, 7.0]), 0) == pytest.approx(5.0)
    assert eigenvalue_derivative(spec, np.diag([5.0, 7.0]), 1) == pytest.approx(7.0)


def test_eigenvalue_derivative_vs_central_difference(rng):
    for _ in range(5):
        A = complex_gaussian(rng, (8, 8))
        E = complex_gaussian(rng, (8, 8))
        spec = eigen_full(A)
        ref, fd = central_difference_eigenvalues(A, E, 1e-5)
        for i in range(8):
            k = int(np.argmin(np.abs(ref - spec.eigenvalues[i])))
            exact = eigenvalue_derivative(spec, E, i)
            assert abs(exact - fd[k]) <= 1e-6 * abs(exact)


def test_match_eigenvalues_examples():
    np.testing.assert_array_equal(match_eigenvalues([1, 2, 3], [1, 2, 3]), [0, 1, 2])
    np.testing.assert_array_equal(match_eigenvalues([1, 2, 3], [3.01, 0.99, 2.02]), [1, 2, 0])


def test_match_eigenvalues_ambiguous():
    E = 0.1 * np.array([[0, 1], [1, 0]])
    perturbed = np.linalg.eigvals(np.diag([1, 1.001]) + E)
    with pytest.raises(AmbiguousMatchingError):
        match_eigenvalues([1, 1.001], perturbed)


def test_match_eigenvalues_shape_error():
    with pytest.raises(InputError):
        match_eigenvalues([1, 2], [1, 2, 3])
