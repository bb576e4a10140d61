import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import complex_gaussian, zero_diag
from isotangent.estimators import CommutatorSolver, PerturbationExpansion, SingularTangentSolver
from isotangent.exceptions import InputError, NotInTangentError
from isotangent.expansions import continued_eigenpairs


def test_params_and_clone():
    est = CommutatorSolver(tol=1e-7)
    assert est.get_params() == {"tol": 1e-7, "distinct_tol": None}
    assert clone(est).tol == 1e-7
    assert PerturbationExpansion(order=2).set_params(order=1).order == 1


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CommutatorSolver().transform(np.zeros((2, 2)))
    with pytest.raises(NotFittedError):
        PerturbationExpansion().predict(0.1)
    with pytest.raises(NotFittedError):
        SingularTangentSolver().transform(np.zeros((2, 2)))


def test_commutator_solver_diagonal(rng):
    d = np.arange(1.0, 9.0)
    E = zero_diag(rng, 8)
    est = CommutatorSolver().fit(np.diag(d))
    B = est.transform(E)
    np.testing.assert_allclose(est.inverse_transform(B), E, atol=1e-14)
    assert est.diagonal_
    with pytest.raises(InputError):
        est.transform(np.zeros((3, 3)))


def test_commutator_solver_general(rng):
    X = complex_gaussian(rng, (5, 5))
    A = X @ np.diag([1.0, 2.0, 3.0, 5.0, 8.0]) @ np.linalg.inv(X)
    E = A @ X - X @ A
    est = CommutatorSolver().fit(A)
    assert not est.diagonal_
    np.testing.assert_allclose(est.inverse_transform(est.transform(E)), E, atol=1e-8)
    with pytest.raises(NotInTangentError):
        est.transform(np.eye(5))


def test_perturbation_expansion_predict(rng):
    d = np.arange(1.0, 11.0)
    E = zero_diag(rng, 10, norm=0.05)
    est = PerturbationExpansion().fit(np.diag(d), E)
    lam, X, _ = continued_eigenpairs(d, E, 0.5)
    assert np.abs(est.predict(0.5) - lam).max() < 1e-5
    assert est.predict([0.1, 0.2]).shape == (2, 10)
    assert np.abs(est.predict_vectors(0.5) - X).max() < 1e-4


def test_perturbation_expansion_generic(rng):
    d = np.arange(1.0, 11.0)
    E = complex_gaussian(rng, (10, 10))
    E *= 0.05 / np.linalg.norm(E, 2)
    with pytest.raises(InputError):
        PerturbationExpansion(order=3).fit(d, E)
    est = PerturbationExpansion(order=2).fit(d, E)
    assert not est.tangent_
    lam, X, _ = continued_eigenpairs(d, E, 0.1)
    assert np.abs(est.predict(0.1) - lam).max() < 1e-5
    assert np.abs(est.predict_vectors(0.1) - X).max() < 1e-5


def test_singular_tangent_solver(rng):
    A = np.zeros((4, 3))
    A[:3, :3] = np.diag([3.0, 2.0, 1.0])
    G = complex_gaussian(rng, (4, 4))
    S1 = (G - G.conj().T) / 2
    S1[3, 3] = 0
    H = complex_gaussian(rng, (3, 3))
    S2 = (H - H.conj().T) / 2
    E = S1 @ A + A @ S2
    est = SingularTangentSolver().fit(A)
    np.testing.assert_allclose(est.inverse_transform(est.transform(E)), E, atol=1e-13)
    with pytest.raises(InputError):
        SingularTangentSolver().fit(np.ones((3, 3)))
