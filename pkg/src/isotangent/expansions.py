"""Asymptotic expansions of perturbed eigenpairs of ``D + tE``.

In the tangent case (``diag(E) = 0``) with ``DB - BD = E`` and
``diag(B) = 0``::

    x_i(t)   = e_i - t B[:, i] + t^2 (D - l_i)^+ E B[:, i] + O(t^3)
    y_i(t)^* = e_i + t B[i, :] - t^2 B[i, :] E (D - l_i)^+ + O(t^3)
    l_i(t)   = l_i + t^2 B[i, :] E[:, i] - t^3 B[i, :] E B[:, i] + O(t^4)

where ``(D - l_i)^+`` inverts every diagonal entry except the ``i``-th,
which is set to zero. Eigenvectors are normalized to have ``i``-th entry 1.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, check_index, diagonal_entries
from .exceptions import InputError, NotInTangentError, RegimeError
from .linalg import eigen_full, match_eigenvalues
from .tangent import DIAG_TOL, _divided_differences, default_distinct_tol, project_to_tangent, solve_b_diagonal

REGIME_MIN_ENTRY = 0.1


@dataclass(frozen=True)
class EigenpairExpansion:
    """Taylor coefficients in ``t`` of one perturbed eigenpair.

    ``terms_vec[k]`` multiplies ``t**k`` in the eigenvector (left vectors
    are stored as column vectors, i.e. conjugated rows) and
    ``terms_val[k]`` multiplies ``t**k`` in the eigenvalue.
    """

    i: int
    side: str
    terms_vec: tuple
    terms_val: tuple

    def vector(self, t, order=None):
        order = len(self.terms_vec) - 1 if order is None else order
        return sum(t**k * self.terms_vec[k] for k in range(order + 1))

    def value(self, t, order=None):
        order = len(self.terms_val) - 1 if order is None else order
        return sum(t**k * self.terms_val[k] for k in range(order + 1))


def shifted_pinv(d, i):
    """Diagonal of ``(D - d_i I)^+``: reciprocals off ``i``, zero at ``i``."""
    shift = d - d[i]
    shift[i] = 1.0
    inv = 1.0 / shift
    inv[i] = 0.0
    return inv


def _check_inputs(D, E, B, i):
    d = diagonal_entries(D)
    E = as_matrix(E, "E", square=True)
    B = as_matrix(B, "B", square=True)
    n = d.shape[0]
    if E.shape[0] != n or B.shape[0] != n:
        raise InputError("D, E and B must share the same dimension")
    i = check_index(i, n)
    if np.any(np.diag(B) != 0):
        raise InputError("B must have zero diagonal")
    if np.abs(np.diag(E)).max() > DIAG_TOL * np.linalg.norm(E):
        raise NotInTangentError("diag(E) is not zero; use generic_expansions")
    _divided_differences(d, default_distinct_tol(d))
    return d, E, B, i


def eigvec_expansion(D, E, B, i, side="right"):
    """Second-order expansion of the right (or left) eigenvector ``i``."""
    d, E, B, i = _check_inputs(D, E, B, i)
    n = d.shape[0]
    e_i = np.zeros(n, dtype=complex)
    e_i[i] = 1
    pinv = shifted_pinv(d, i)
    if side == "right":
        terms = (e_i, -B[:, i].copy(), pinv * (E @ B[:, i]))
    elif side == "left":
        terms = (e_i, B[i, :].conj(), -((B[i, :] @ E) * pinv).conj())
    else:
        raise InputError(f"side must be 'right' or 'left', got {side!r}")
    return EigenpairExpansion(i, side, terms, _eigval_terms(d, E, B, i))


def _eigval_terms(d, E, B, i):
    c2 = complex(B[i, :] @ E[:, i])
    c3 = -complex(B[i, :] @ E @ B[:, i])
    return (complex(d[i]), 0j, c2, c3)


def eigval_expansion(D, E, B, i):
    """Third-order eigenvalue expansion; ``terms_val = (l_i, 0, c2, c3)``."""
    d, E, B, i = _check_inputs(D, E, B, i)
    n = d.shape[0]
    e_i = np.zeros(n, dtype=complex)
    e_i[i] = 1
    return EigenpairExpansion(i, "right", (e_i,), _eigval_terms(d, E, B, i))


def generic_expansions(D, E, i):
    """Expansions for an arbitrary ``E`` (not necessarily tangent).

    ``E`` is split into ``E - diag(E)`` and ``diag(E)``; ``B`` solves the
    tangent part. Then::

        l_i(t) ~ l_i + t E[i, i] + t^2 B[i, :] E[:, i]
        x_i(t) ~ e_i - t B[:, i]
                 + t^2 ((D - l_i)^+ E B[:, i] - E[i, i] (D - l_i)^+ B[:, i])
    """
    d = diagonal_entries(D)
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != d.shape[0]:
        raise InputError("D and E must share the same dimension")
    i = check_index(i, d.shape[0])
    split = project_to_tangent(d, E)
    B = solve_b_diagonal(d, split.tangential).B
    n = d.shape[0]
    e_i = np.zeros(n, dtype=complex)
    e_i[i] = 1
    pinv = shifted_pinv(d, i)
    eii = E[i, i]
    second = pinv * (E @ B[:, i]) - eii * pinv * B[:, i]
    vals = (complex(d[i]), complex(eii), complex(B[i, :] @ E[:, i]))
    return EigenpairExpansion(i, "right", (e_i, -B[:, i].copy(), second), vals)


def eigvec_terms_all(d, E, B):
    """First and second order eigenvector terms for every index at once.

    Column ``i`` of the returned ``X1`` and ``X2`` is ``x_i^(1)`` and
    ``x_i^(2)`` in the tangent case.
    """
    d = np.asarray(d)
    diff = d[:, None] - d[None, :]
    np.fill_diagonal(diff, 1.0)
    X2 = (E @ B) / diff
    np.fill_diagonal(X2, 0)
    return -B, X2


def eigval_coefficients(E, B):
    """Vectors of second and third order eigenvalue coefficients."""
    c2 = np.einsum("ij,ji->i", B, E)
    c3 = -np.einsum("ij,ji->i", B @ E, B)
    return c2, c3


def continued_eigenpairs(d, E, t):
    """Oracle eigenpairs of ``diag(d) + tE`` aligned with the entries of ``d``.

    Returns ``(lam, X, Y)`` where ``lam[i]`` continues ``d[i]`` and the
    columns of ``X`` and ``Y`` are right and left eigenvectors scaled to have
    ``i``-th entry equal to one.
    """
    d = np.asarray(d, dtype=complex)
    n = d.shape[0]
    spec = eigen_full(np.diag(d) + t * E)
    perm = match_eigenvalues(d, spec.eigenvalues)
    lam = spec.eigenvalues[perm]
    X = spec.right[:, perm]
    Y = spec.left[:, perm]
    idx = np.arange(n)
    xs = X[idx, idx]
    ys = Y[idx, idx]
    xn = np.abs(xs) / np.linalg.norm(X, axis=0)
    yn = np.abs(ys) / np.linalg.norm(Y, axis=0)
    low = np.nonzero((xn < REGIME_MIN_ENTRY) | (yn < REGIME_MIN_ENTRY))[0]
    if low.size:
        raise RegimeError(f"eigenvector {int(low[0])} has a tiny entry at its own index")
    return lam, X / xs, Y / ys


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
