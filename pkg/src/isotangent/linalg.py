"""Dense decompositions, norms and the brute-force eigensolver oracle.

Every theoretical quantity in the package is checked against the routines
here, which delegate the actual factorizations to LAPACK through scipy.
Matrices are plain complex ``numpy`` arrays throughout.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._validation import as_matrix, check_index
from .exceptions import (
    AmbiguousMatchingError,
    ConvergenceError,
    DegenerateSpectrumError,
    IllConditionedError,
    InputError,
)

DEFAULT_SIMPLE_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with biorthonormal right/left eigenvectors.

    ``right[:, i]`` is a unit-norm right eigenvector ``x_i`` and
    ``left[:, i]`` the matching left eigenvector ``y_i`` scaled so that
    ``left.conj().T @ right`` is the identity. ``gaps[i]`` is the distance
    from ``eigenvalues[i]`` to the nearest other eigenvalue.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    gaps: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        return (self.right * self.eigenvalues) @ self.left.conj().T


@dataclass(frozen=True)
class SingularTriplet:
    sigma: float
    left: np.ndarray
    right: np.ndarray


def spectral_norm(M):
    """Largest singular value of ``M``."""
    M = as_matrix(M, "M")
    return float(np.linalg.norm(M, 2))


def spectral_gaps(eigenvalues):
    """``eta_i = min_{j != i} |lambda_i - lambda_j|`` (``inf`` when n == 1)."""
    lam = np.asarray(eigenvalues, dtype=complex)
    n = lam.shape[0]
    if n == 1:
        return np.array([np.inf])
    dist = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1)


def sort_eigenvalues(w):
    """Permutation sorting ``w`` ascending by real part, then imaginary part."""
    return np.lexsort((w.imag, w.real))


def eigenvalues(A):
    """Sorted eigenvalues of a square matrix, no simplicity requirement."""
    A = as_matrix(A, "A", square=True)
    try:
        w = sla.eigvals(A, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return w[sort_eigenvalues(w)]


def eigen_full(A, tol=DEFAULT_SIMPLE_TOL):
    """Full eigendecomposition of a matrix with simple spectrum.

    Parameters
    ----------
    A : array_like, shape (n, n)
    tol : float
        Relative separation threshold: any two eigenvalues closer than
        ``tol * ||A||`` make the spectrum count as degenerate.

    Returns
    -------
    Spectrum
        Eigenvalues sorted ascending by ``(real, imag)``; left vectors are
        the columns of ``X^{-*}``.
    """
    A = as_matrix(A, "A", square=True)
    norm_a = np.linalg.norm(A, 2)
    try:
        w, X = sla.eig(A, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    order = sort_eigenvalues(w)
    w = w[order]
    X = X[:, order]
    gaps = spectral_gaps(w)
    if w.shape[0] > 1 and gaps.min() <= tol * norm_a:
        j = int(np.argmin(gaps))
        raise DegenerateSpectrumError(
            f"eigenvalue {w[j]:.6g} is within {gaps[j]:.3e} of another eigenvalue "
            f"(threshold {tol * norm_a:.3e})"
        )
    X = X / np.linalg.norm(X, axis=0)
    try:
        Y = np.linalg.solve(X, np.eye(X.shape[0], dtype=complex)).conj().T
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError("eigenvector matrix is singular") from exc
    resid = np.linalg.norm(A @ X - X * w, axis=0).max()
    if resid > 10 * tol * max(norm_a, np.finfo(float).tiny):
        raise ConvergenceError(f"eigenpair residual {resid:.3e} too large")
    return Spectrum(eigenvalues=w, right=X, left=Y, gaps=gaps)


def svd_full(A):
    """Singular triplets of ``A`` sorted by descending singular value."""
    A = as_matrix(A, "A")
    try:
        U, s, Vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    V = Vh.conj().T
    return [SingularTriplet(float(s[k]), U[:, k], V[:, k]) for k in range(s.shape[0])]


def singular_values(A):
    A = as_matrix(A, "A")
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def eigenvalue_derivative(spec, E, i, tol=1e-12):
    """First-order rate of change ``(y_i^* E x_i) / (y_i^* x_i)`` of ``lambda_i``.

    Raises :class:`IllConditionedError` when the cosine between ``x_i`` and
    ``y_i`` is below ``tol``.
    """
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != spec.n:
        raise InputError(f"E has dimension {E.shape[0]}, spectrum has {spec.n}")
    i = check_index(i, spec.n)
    x = spec.right[:, i]
    y = spec.left[:, i]
    denom = np.vdot(y, x)
    if abs(denom) < tol * np.linalg.norm(x) * np.linalg.norm(y):
        raise IllConditionedError(f"eigenvalue {i} is (numerically) defective")
    return complex(np.vdot(y, E @ x) / denom)


def match_eigenvalues(reference, perturbed):
    """Match each reference eigenvalue to a perturbed one.

    Pairs are assigned greedily in order of increasing distance. Returns
    ``perm`` with ``perturbed[perm[i]]`` continuing ``reference[i]``.
    Raises :class:`AmbiguousMatchingError` if some matched distance reaches
    half of the reference gap, since continuation is then not trustworthy.
    """
    ref = np.asarray(getattr(reference, "eigenvalues", reference), dtype=complex)
    per = np.asarray(getattr(perturbed, "eigenvalues", perturbed), dtype=complex)
    if ref.ndim != 1 or ref.shape != per.shape:
        raise InputError("reference and perturbed spectra must have the same dimension")
    n = ref.shape[0]
    dist = np.abs(ref[:, None] - per[None, :])
    perm = np.full(n, -1)
    used = np.zeros(n, dtype=bool)
    for flat in np.argsort(dist, axis=None, kind="stable"):
        r, p = divmod(int(flat), n)
        if perm[r] < 0 and not used[p]:
            perm[r] = p
            used[p] = True
    gaps = spectral_gaps(ref)
    moved = dist[np.arange(n), perm]
    bad = np.nonzero(moved >= gaps / 2)[0]
    if bad.size:
        r = int(bad[0])
        raise AmbiguousMatchingError(
            f"eigenvalue {ref[r]:.6g} moved by {moved[r]:.3e}, "
            f"at least half its gap {gaps[r]:.3e}"
        )
    return perm
