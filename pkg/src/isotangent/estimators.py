"""scikit-learn style wrappers around the functional API.

The estimators follow the usual contract (constructor stores parameters
only, ``fit`` returns ``self``, learned state ends in ``_``), which makes
them usable with ``get_params``/``set_params``/``clone``. They do not take
sample matrices; ``X`` is the base matrix itself.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_matrix, diagonal_entries
from .exceptions import InputError
from .expansions import eigval_coefficients, eigvec_terms_all
from .linalg import eigen_full
from .svd import _sigma, solve_s_from_e, svd_tangent_apply
from .tangent import commutator, project_to_tangent, solve_b_diagonal, solve_b_general


def _is_diagonal(A):
    return np.array_equal(A, np.diag(np.diag(A)))


class CommutatorSolver(TransformerMixin, BaseEstimator):
    """Map tangent perturbations ``E`` of a fixed ``A`` to generators ``B``.

    ``fit(A)`` analyses ``A``; ``transform(E)`` returns ``B`` with
    ``AB - BA = E``; ``inverse_transform(B)`` returns the commutator.
    """

    def __init__(self, tol=1e-9, distinct_tol=None):
        self.tol = tol
        self.distinct_tol = distinct_tol

    def fit(self, X, y=None):
        A = as_matrix(X, "A", square=True)
        self.A_ = A
        self.diagonal_ = _is_diagonal(A)
        if self.diagonal_:
            self.eigenvalues_ = np.diag(A).copy()
            self.spectrum_ = None
        else:
            self.spectrum_ = eigen_full(A)
            self.eigenvalues_ = self.spectrum_.eigenvalues
        self.n_features_in_ = A.shape[0]
        return self

    def _check_E(self, E, name):
        check_is_fitted(self, "A_")
        E = as_matrix(E, name, square=True)
        if E.shape[0] != self.n_features_in_:
            raise InputError(f"{name} has dimension {E.shape[0]}, expected {self.n_features_in_}")
        return E

    def transform(self, X):
        E = self._check_E(X, "E")
        if self.diagonal_:
            return solve_b_diagonal(self.eigenvalues_, E, self.distinct_tol).B
        return solve_b_general(self.A_, E, self.tol).B

    def inverse_transform(self, X):
        B = self._check_E(X, "B")
        return commutator(self.A_, B)


class PerturbationExpansion(BaseEstimator):
    """Truncated expansions of the eigenpairs of ``D + tE`` for diagonal ``D``.

    Parameters
    ----------
    order : int
        Highest power of ``t`` kept in :meth:`predict` (1 to 3; a generic,
        non-tangent ``E`` supports at most 2).
    """

    def __init__(self, order=3):
        self.order = order

    def fit(self, X, y):
        d = diagonal_entries(X)
        E = as_matrix(y, "E", square=True)
        if E.shape[0] != d.shape[0]:
            raise InputError("D and E must share the same dimension")
        if self.order not in (1, 2, 3):
            raise InputError("order must be 1, 2 or 3")
        split = project_to_tangent(d, E)
        self.diag_ = np.diag(split.normal).copy()
        self.tangent_ = not np.any(self.diag_ != 0)
        if not self.tangent_ and self.order > 2:
            raise InputError("a non-tangent E supports order <= 2 only")
        self.d_ = d
        self.E_ = E
        self.B_ = solve_b_diagonal(d, split.tangential).B
        self.c2_, self.c3_ = eigval_coefficients(E, self.B_)
        self.n_features_in_ = d.shape[0]
        return self

    def predict(self, t):
        """Approximate eigenvalues; shape ``(n,)`` for scalar ``t``, ``(len(t), n)`` otherwise."""
        check_is_fitted(self, "B_")
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = self.d_[None, :] + ts[:, None] * self.diag_[None, :]
        if self.order >= 2:
            out = out + ts[:, None] ** 2 * self.c2_[None, :]
        if self.order >= 3:
            out = out + ts[:, None] ** 3 * self.c3_[None, :]
        return out[0] if np.ndim(t) == 0 else out

    def predict_vectors(self, t):
        """Right eigenvector approximations (column ``i`` has ``i``-th entry 1)."""
        check_is_fitted(self, "B_")
        n = self.n_features_in_
        X1, X2 = eigvec_terms_all(self.d_, self.E_, self.B_)
        if not self.tangent_:
            diff = self.d_[:, None] - self.d_[None, :]
            np.fill_diagonal(diff, 1.0)
            corr = self.B_ / diff
            np.fill_diagonal(corr, 0)
            X2 = X2 - corr * self.diag_[None, :]
        X = np.eye(n, dtype=complex)
        if self.order >= 1:
            X = X + t * X1
        if self.order >= 2:
            X = X + t**2 * X2
        return X


class SingularTangentSolver(TransformerMixin, BaseEstimator):
    """Generators ``(S1, S2)`` of tangent perturbations at ``A = [Sigma; 0]``."""

    def __init__(self, tol=1e-12):
        self.tol = tol

    def fit(self, X, y=None):
        A = as_matrix(X, "A")
        _sigma(A if A.shape[0] >= A.shape[1] else A.T)
        self.A_ = A
        self.n_features_in_ = A.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "A_")
        sol = solve_s_from_e(self.A_, X, self.tol)
        return sol.S1, sol.S2

    def inverse_transform(self, X):
        check_is_fitted(self, "A_")
        S1, S2 = X
        return svd_tangent_apply(self.A_, S1, S2)
