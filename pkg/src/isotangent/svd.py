"""Tangent space of matrices with fixed singular values.

A perturbation of ``A`` (``m x n``, ``m >= n``) keeps the singular values
to first order exactly when ``E = S1 A + A S2`` with ``S1`` and ``S2``
skew-Hermitian. For ``A = [Sigma; 0]`` the generators can be read off ``E``
entrywise, and the augmented Hermitian matrix ``[[0, A], [A^*, 0]]`` turns
the problem into the eigenvalue setting of :mod:`isotangent.tangent`.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import as_matrix, check_index, check_skew_hermitian
from .exceptions import DegenerateSpectrumError, InputError, NotInTangentError

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class SvdTangentSolution:
    """Skew-Hermitian generators with ``S1 A + A S2 = E``.

    The lower-right ``(m-n) x (m-n)`` block of ``S1`` is free and set to zero.
    """

    S1: np.ndarray
    S2: np.ndarray
    residual: float


@dataclass(frozen=True)
class JordanWielandtFrame:
    """Augmented matrix ``M``, the fixed orthogonal ``Q`` and ``Q^*(M + P)Q``."""

    M: np.ndarray
    Q: np.ndarray
    transformed: np.ndarray
    E1: np.ndarray
    E2: np.ndarray

    @property
    def unperturbed(self):
        """``Q^* M Q = diag(Sigma, -Sigma, 0)``."""
        return self.Q.conj().T @ self.M @ self.Q


class SingularValueBound(NamedTuple):
    sharp: float
    coarse: float


class TallRowsBound(NamedTuple):
    bound: float
    squared_bound: float


def _sigma(A):
    """Singular values on the diagonal of ``A = [Sigma; 0]``."""
    A = as_matrix(A, "A")
    m, n = A.shape
    if m < n:
        raise InputError("expected m >= n; pass the transpose for wide matrices")
    s = np.diag(A[:n, :n])
    expected = np.zeros_like(A)
    expected[np.arange(n), np.arange(n)] = s
    if np.any(A != expected) or np.any(s.imag != 0) or np.any(s.real < 0):
        raise InputError("A must be [Sigma; 0] with Sigma real, nonnegative and diagonal")
    return s.real.copy(), m, n


def svd_tangent_apply(A, S1, S2):
    """``S1 A + A S2``."""
    A = as_matrix(A, "A")
    S1 = as_matrix(S1, "S1", square=True)
    S2 = as_matrix(S2, "S2", square=True)
    m, n = A.shape
    if S1.shape[0] != m or S2.shape[0] != n:
        raise InputError(f"S1 must be {m}x{m} and S2 {n}x{n}")
    check_skew_hermitian(S1, "S1")
    check_skew_hermitian(S2, "S2")
    return S1 @ A + A @ S2


def solve_s_from_e(A, E, tol=1e-12):
    """Recover ``(S1, S2)`` from a tangent ``E`` at ``A = [Sigma; 0]``.

    For ``i != j <= n``::

        S1[i, j] =  (s_j E[i, j] + s_i conj(E[j, i])) / (s_j^2 - s_i^2)
        S2[i, j] = -(s_j conj(E[j, i]) + s_i E[i, j]) / (s_j^2 - s_i^2)

    and ``S1[i, j] = E[i, j] / s_j`` for ``i > n``; the other half of each
    matrix follows from skew-Hermitian symmetry. Tangency requires
    ``Re E[i, i] = 0``; an imaginary diagonal is split evenly between the
    two generators (nothing to split for real ``E``).

    Wide matrices (``m < n``) are handled by transposition.
    """
    A = as_matrix(A, "A")
    E = as_matrix(E, "E")
    if A.shape != E.shape:
        raise InputError(f"A has shape {A.shape}, E has shape {E.shape}")
    if A.shape[0] < A.shape[1]:
        sol = solve_s_from_e(A.T, E.T, tol)
        # (S1 A + A S2)^T = S2^T A^T + A^T S1^T, and S^T stays skew-Hermitian
        return SvdTangentSolution(sol.S2.T.copy(), sol.S1.T.copy(), sol.residual)
    s, m, n = _sigma(A)
    scale = max(s.max(), np.finfo(float).tiny)
    if np.any(s <= tol * scale):
        raise DegenerateSpectrumError("zero singular value")
    if n > 1:
        sep = np.abs(s[:, None] - s[None, :])[~np.eye(n, dtype=bool)].min()
        if sep <= tol * scale:
            raise DegenerateSpectrumError(f"singular values separated by only {sep:.3e}")
    norm_e = np.linalg.norm(E)
    top = E[:n, :n]
    if np.abs(np.diag(top).real).max() > 1e-14 * max(norm_e, np.finfo(float).tiny):
        raise NotInTangentError("Re diag(E) must vanish on the top block")

    sj = s[None, :]
    si = s[:, None]
    den = sj**2 - si**2
    np.fill_diagonal(den, 1.0)
    S1 = np.zeros((m, m), dtype=complex)
    S2 = np.zeros((n, n), dtype=complex)
    S1[:n, :n] = (sj * top + si * top.T.conj()) / den
    S2[:, :] = -(sj * top.T.conj() + si * top) / den
    half = 1j * np.diag(top).imag / (2 * s)
    S1[np.arange(n), np.arange(n)] = half
    S2[np.arange(n), np.arange(n)] = half
    if m > n:
        S1[n:, :n] = E[n:, :] / s[None, :]
        S1[:n, n:] = -S1[n:, :n].conj().T
    residual = float(np.linalg.norm(S1 @ A + A @ S2 - E))
    bound = RESIDUAL_TOL * (np.linalg.norm(A, 2) * (np.linalg.norm(S1) + np.linalg.norm(S2)) + norm_e)
    if residual > bound:
        raise NotInTangentError(f"roundtrip residual {residual:.3e} too large")
    return SvdTangentSolution(S1, S2, residual)


def singular_value_bound(A, S1, S2):
    """Bounds on ``max_i |sigma_i(A + E) - sigma_i(A)|`` for ``E = S1 A + A S2``.

    ``sharp = ||S1 E + E S2|| / 2`` and ``coarse = ||E|| (||S1|| + ||S2||) / 2``.
    """
    E = svd_tangent_apply(A, S1, S2)
    S1 = np.asarray(S1, dtype=complex)
    S2 = np.asarray(S2, dtype=complex)
    sharp = 0.5 * np.linalg.norm(S1 @ E + E @ S2, 2)
    coarse = 0.5 * np.linalg.norm(E, 2) * (np.linalg.norm(S1, 2) + np.linalg.norm(S2, 2))
    return SingularValueBound(float(sharp), float(coarse))


def jordan_wielandt_q(m, n):
    """The orthogonal matrix diagonalizing ``[[0, [Sigma; 0]], [[Sigma; 0]^*, 0]]``."""
    r = 1.0 / np.sqrt(2.0)
    Q = np.zeros((m + n, m + n))
    eye = np.eye(n)
    Q[:n, :n] = r * eye
    Q[:n, n : 2 * n] = r * eye
    Q[n:m, 2 * n :] = np.eye(m - n)
    Q[m:, :n] = r * eye
    Q[m:, n : 2 * n] = -r * eye
    return Q


def jordan_wielandt_reduce(A, E):
    """Augmented Hermitian frame of ``A + E`` in the singular basis of ``A``."""
    s, m, n = _sigma(A)
    A = as_matrix(A, "A")
    E = as_matrix(E, "E")
    if E.shape != A.shape:
        raise InputError(f"A has shape {A.shape}, E has shape {E.shape}")
    M = np.zeros((m + n, m + n), dtype=complex)
    M[:m, m:] = A
    M[m:, :m] = A.conj().T
    P = np.zeros_like(M)
    P[:m, m:] = E
    P[m:, :m] = E.conj().T
    Q = jordan_wielandt_q(m, n)
    transformed = Q.T @ (M + P) @ Q
    return JordanWielandtFrame(M, Q, transformed, E[:n, :].copy(), E[n:, :].copy())


def jordan_wielandt_blocks(Sigma, E1, E2):
    """``Q^*(M + P)Q`` assembled block by block from ``Sigma``, ``E1``, ``E2``."""
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    n = s.shape[0]
    E1 = as_matrix(E1, "E1")
    E2 = np.asarray(E2, dtype=complex).reshape(-1, n)
    p = E2.shape[0]
    S = np.diag(s)
    r = 1.0 / np.sqrt(2.0)
    H = (E1 + E1.conj().T) / 2
    K = (E1 - E1.conj().T) / 2
    T = np.zeros((2 * n + p, 2 * n + p), dtype=complex)
    T[:n, :n] = S + H
    T[:n, n : 2 * n] = -K
    T[n : 2 * n, :n] = K
    T[n : 2 * n, n : 2 * n] = -S - H
    T[:n, 2 * n :] = r * E2.conj().T
    T[n : 2 * n, 2 * n :] = -r * E2.conj().T
    T[2 * n :, :n] = r * E2
    T[2 * n :, n : 2 * n] = -r * E2
    return T


def svd_b_blocks(Sigma, E):
    """Blocks of the skew-Hermitian ``B`` for the augmented frame.

    With ``T0 = diag(Sigma, -Sigma, 0)`` and ``P`` the transformed
    perturbation, ``T0 B - B T0 = P`` is solved by::

        B = [[ B1,  B2, B3^*],
             [ B2,  B1, B3^*],
             [-B3, -B3,   0 ]]

        B1[i, j] = (E[i, j] + conj(E[j, i])) / (2 (s_i - s_j))
        B2[i, j] = (conj(E[j, i]) - E[i, j]) / (2 (s_i + s_j))
        B3[k, j] = E[n + k, j] / (sqrt(2) s_j)       (trailing rows of E)

    ``B1`` and ``B3`` vanish on the diagonal of ``B1``. Use
    :func:`assemble_svd_b` to build the full matrix.
    """
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    E = as_matrix(E, "E")
    n = s.shape[0]
    if E.shape[1] != n or E.shape[0] < n:
        raise InputError("E must be m x n with m >= n = len(Sigma)")
    if np.any(s <= 0):
        raise DegenerateSpectrumError("singular values must be positive")
    E1 = E[:n, :]
    diff = s[:, None] - s[None, :]
    off = ~np.eye(n, dtype=bool)
    if n > 1 and np.abs(diff[off]).min() <= 1e-12 * s.max():
        raise DegenerateSpectrumError("singular values must be distinct")
    np.fill_diagonal(diff, 1.0)
    B1 = (E1 + E1.conj().T) / (2 * diff)
    np.fill_diagonal(B1, 0)
    B2 = (E1.conj().T - E1) / (2 * (s[:, None] + s[None, :]))
    B3 = E[n:, :] / (np.sqrt(2.0) * s[None, :])
    return B1, B2, B3


def assemble_svd_b(B1, B2, B3):
    n = B1.shape[0]
    p = B3.shape[0]
    B = np.zeros((2 * n + p, 2 * n + p), dtype=complex)
    B[:n, :n] = B1
    B[n : 2 * n, n : 2 * n] = B1
    B[:n, n : 2 * n] = B2
    B[n : 2 * n, :n] = B2
    B[:n, 2 * n :] = B3.conj().T
    B[n : 2 * n, 2 * n :] = B3.conj().T
    B[2 * n :, :n] = -B3
    B[2 * n :, n : 2 * n] = -B3
    return B


def singular_expansion(Sigma, E, i):
    """Second-order coefficient ``c`` in ``sigma_i(A + sE) = sigma_i + s^2 c + O(s^3)``.

    ``E`` must be real with zero diagonal on its top block and zero trailing
    rows. The coefficient is::

        c = (sum_j E[i, j]^2
             + sum_{j != i} (s_i E[j, i] + s_j E[i, j])^2 / (s_i^2 - s_j^2)) / (2 s_i)
    """
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    E = np.asarray(E)
    if np.iscomplexobj(E):
        if np.any(E.imag != 0):
            raise InputError("singular_expansion requires a real perturbation")
        E = E.real
    E = np.asarray(E, dtype=float)
    n = s.shape[0]
    if E.ndim != 2 or E.shape[1] != n or E.shape[0] < n:
        raise InputError("E must be m x n with m >= n = len(Sigma)")
    if np.any(E[n:, :] != 0):
        raise InputError("trailing rows of E must be zero")
    i = check_index(i, n)
    if np.abs(np.diag(E[:n, :])).max() > 1e-14 * max(np.linalg.norm(E), np.finfo(float).tiny):
        raise NotInTangentError("diag(E) must vanish")
    mask = np.arange(n) != i
    sj = s[mask]
    den = s[i] ** 2 - sj**2
    if np.any(np.abs(den) <= 1e-12 * s.max() ** 2) or s[i] <= 0:
        raise DegenerateSpectrumError("singular values must be distinct and positive")
    row = E[i, mask]
    col = E[:n][mask, i]
    cross = (s[i] * col + sj * row) ** 2 / den
    return float((np.sum(row**2) + np.sum(cross)) / (2 * s[i]))


def singular_expansion_symmetric(Sigma, E, i):
    """``sum_{j != i} E[i, j]^2 / (s_i - s_j)``, valid when the top block of E is symmetric."""
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    mask = np.arange(s.shape[0]) != i
    row = np.asarray(E, dtype=float)[i, : s.shape[0]][mask]
    return float(np.sum(row**2 / (s[i] - s[mask])))


def singular_expansion_antisymmetric(Sigma, E, i):
    """``sum_{j != i} E[i, j]^2 / (s_i + s_j)``, valid when the top block of E is antisymmetric."""
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    mask = np.arange(s.shape[0]) != i
    row = np.asarray(E, dtype=float)[i, : s.shape[0]][mask]
    return float(np.sum(row**2 / (s[i] + s[mask])))


def tall_rows_bound(Sigma, E2, i):
    """Drift bound when only the zero rows below ``Sigma`` are perturbed.

    Returns ``||E2||^2 / s_i`` together with ``||E2||^2``, which bounds
    ``|sigma~_i^2 - s_i^2|``.
    """
    s = np.asarray(Sigma, dtype=float)
    s = np.diag(s) if s.ndim == 2 else s
    E2 = np.asarray(E2, dtype=complex).reshape(-1, s.shape[0])
    i = check_index(i, s.shape[0])
    if s[i] <= 0:
        raise DegenerateSpectrumError("singular value must be positive")
    sq = float(np.linalg.norm(E2, 2) ** 2) if E2.size else 0.0
    return TallRowsBound(sq / s[i], sq)
