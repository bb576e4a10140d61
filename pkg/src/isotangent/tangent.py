"""Tangent space of the isospectral manifold and the commutator generator B.

A perturbation ``E`` is tangent to the set of matrices similar to ``A``
exactly when ``E = AB - BA`` for some ``B``. The functions below test that
condition and build ``B`` for diagonal, block diagonal and general
diagonalizable ``A``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._validation import as_matrix, check_index, check_same_shape, diagonal_entries
from .exceptions import DegenerateGapError, InputError, NotInTangentError
from .linalg import eigen_full

DIAG_TOL = 1e-14
RESIDUAL_TOL = 1e-12


class Gauge(str, Enum):
    """How the free part of ``B`` was fixed."""

    ZERO_DIAGONAL = "zero_diagonal"
    EIGENBASIS_ZERO_DIAGONAL = "eigenbasis_zero_diagonal"
    ZERO_FIRST_ROW = "zero_first_row"
    PROVIDED = "provided"


@dataclass(frozen=True)
class TangentSolution:
    B: np.ndarray
    gauge: Gauge
    residual: float


@dataclass(frozen=True)
class TangentSplit:
    """``E = tangential + normal`` with ``normal = diag(E)``."""

    tangential: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class TangentCheck:
    in_tangent: bool
    defects: np.ndarray

    def __bool__(self):
        return self.in_tangent


@dataclass(frozen=True)
class BlockPartition:
    """``D = diag(D1, D2)`` with an off-diagonal block perturbation.

    ``D1`` and ``D2`` are stored as vectors of diagonal entries; ``E1`` is
    the upper-right ``k x (n-k)`` block and ``E2`` the lower-left one.
    """

    D1: np.ndarray
    D2: np.ndarray
    E1: np.ndarray
    E2: np.ndarray

    def __post_init__(self):
        k, m = self.D1.shape[0], self.D2.shape[0]
        if self.E1.shape != (k, m) or self.E2.shape != (m, k):
            raise InputError(
                f"block shapes E1 {self.E1.shape}, E2 {self.E2.shape} do not match "
                f"D1 ({k}) and D2 ({m})"
            )

    @classmethod
    def from_blocks(cls, D1, D2, E1, E2=None):
        D1 = diagonal_entries(D1, "D1")
        D2 = diagonal_entries(D2, "D2")
        E1 = as_matrix(E1, "E1")
        E2 = E1.conj().T if E2 is None else as_matrix(E2, "E2")
        return cls(D1, D2, E1, E2)

    @classmethod
    def from_matrices(cls, D, E, k):
        """Split a full diagonal ``D`` and perturbation ``E`` after row/column ``k``."""
        d = diagonal_entries(D)
        E = as_matrix(E, "E", square=True)
        n = d.shape[0]
        if E.shape[0] != n:
            raise InputError("D and E differ in dimension")
        if not 0 < k < n:
            raise InputError(f"block size {k} must lie strictly between 0 and {n}")
        if np.any(E[:k, :k] != 0) or np.any(E[k:, k:] != 0):
            raise NotInTangentError("E has nonzero diagonal blocks")
        return cls(d[:k].copy(), d[k:].copy(), E[:k, k:].copy(), E[k:, :k].copy())

    @property
    def k(self):
        return self.D1.shape[0]

    @property
    def n(self):
        return self.D1.shape[0] + self.D2.shape[0]

    @property
    def gap(self):
        return float(np.abs(self.D1[:, None] - self.D2[None, :]).min())

    @property
    def cluster_width(self):
        """Diameter of the first block's spectrum (0 when ``D1`` is scalar)."""
        return float(np.abs(self.D1[:, None] - self.D1[None, :]).max())

    def assemble(self):
        """Full ``(D, E)`` pair."""
        k = self.k
        D = np.diag(np.concatenate([self.D1, self.D2]))
        E = np.zeros((self.n, self.n), dtype=complex)
        E[:k, k:] = self.E1
        E[k:, :k] = self.E2
        return D, E

    def norm_E(self):
        return float(np.linalg.norm(self.assemble()[1], 2))


def commutator(A, B):
    """``AB - BA``."""
    A = as_matrix(A, "A", square=True)
    B = as_matrix(B, "B", square=True)
    check_same_shape(A, B)
    return A @ B - B @ A


def diagonal_commutator(d, B):
    """``DB - BD`` for ``D = diag(d)``, computed entrywise."""
    d = np.asarray(d)
    return (d[:, None] - d[None, :]) * B


def _divided_differences(d, distinct_tol):
    diff = d[:, None] - d[None, :]
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    if n > 1:
        small = np.abs(diff[off]).min()
        if small <= distinct_tol:
            raise DegenerateGapError(
                f"diagonal entries separated by only {small:.3e} (tolerance {distinct_tol:.3e})"
            )
    np.fill_diagonal(diff, 1.0)
    return diff


def default_distinct_tol(d):
    d = np.asarray(d)
    spread = float(np.abs(d[:, None] - d[None, :]).max()) if d.size else 0.0
    return 1e-8 * spread


def is_in_tangent(spec, E, tol=1e-9):
    """Test ``y_i^* E x_i = 0`` for every eigenpair of ``spec``.

    Defects are normalized by ``||x_i|| ||y_i||`` so that they do not depend
    on how the eigenvectors are scaled, and compared with ``tol * ||E||``.
    """
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != spec.n:
        raise InputError(f"E has dimension {E.shape[0]}, spectrum has {spec.n}")
    X, Y = spec.right, spec.left
    raw = np.einsum("ji,jk,ki->i", Y.conj(), E, X)
    defects = raw / (np.linalg.norm(X, axis=0) * np.linalg.norm(Y, axis=0))
    norm_e = np.linalg.norm(E, 2)
    return TangentCheck(bool(np.all(np.abs(defects) <= tol * norm_e)), defects)


def project_to_tangent(D, E):
    """Split ``E`` into its tangent part (zero diagonal) and normal part ``diag(E)``."""
    diagonal_entries(D)
    E = as_matrix(E, "E", square=True)
    normal = np.diag(np.diag(E))
    tangential = E - normal
    np.fill_diagonal(tangential, 0)
    return TangentSplit(tangential, normal)


def solve_b_diagonal(D, E, distinct_tol=None):
    """Solve ``DB - BD = E`` for diagonal ``D`` with ``diag(B) = 0``.

    ``B[i, j] = E[i, j] / (d_i - d_j)``. ``E`` must have zero diagonal (up to
    a relative ``1e-14``); otherwise :class:`NotInTangentError` is raised and
    the caller should split ``E`` with :func:`project_to_tangent` first.
    """
    d = diagonal_entries(D)
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != d.shape[0]:
        raise InputError(f"D has dimension {d.shape[0]}, E has {E.shape[0]}")
    scale = np.linalg.norm(E)
    if np.abs(np.diag(E)).max() > DIAG_TOL * scale:
        raise NotInTangentError("diag(E) is not zero; project E onto the tangent space first")
    if distinct_tol is None:
        distinct_tol = default_distinct_tol(d)
    B = E / _divided_differences(d, distinct_tol)
    np.fill_diagonal(B, 0)
    residual = float(np.linalg.norm(diagonal_commutator(d, B) - E))
    norm_d = np.abs(d).max()
    if residual > RESIDUAL_TOL * (norm_d * np.linalg.norm(B) + scale):
        raise NotInTangentError(f"commutator residual {residual:.3e} too large")
    return TangentSolution(B, Gauge.ZERO_DIAGONAL, residual)


def solve_b_general(A, E, tol=1e-9):
    """Solve ``AB - BA = E`` for diagonalizable ``A`` with simple spectrum.

    The problem is moved to the eigenbasis (``E <- X^{-1} E X``), solved
    there with zero diagonal, and mapped back (``B = X B~ X^{-1}``). The
    diagonal of the transformed ``E`` must vanish to ``tol`` times its norm;
    what remains of it is rounding and is discarded.
    """
    A = as_matrix(A, "A", square=True)
    E = as_matrix(E, "E", square=True)
    check_same_shape(A, E, ("A", "E"))
    spec = eigen_full(A)
    X, Y = spec.right, spec.left
    Et = Y.conj().T @ E @ X
    if np.abs(np.diag(Et)).max() > tol * max(np.linalg.norm(Et), np.finfo(float).tiny):
        raise NotInTangentError("E is not in the tangent space of A")
    np.fill_diagonal(Et, 0)
    Bt = solve_b_diagonal(spec.eigenvalues, Et).B
    B = X @ Bt @ Y.conj().T
    residual = float(np.linalg.norm(A @ B - B @ A - E))
    return TangentSolution(B, Gauge.EIGENBASIS_ZERO_DIAGONAL, residual)


def solve_b_columnwise(spec, E, i):
    """``B x_i`` via the group inverse of ``A - lambda_i I``.

    ``E x_i`` is expanded in the eigenbasis, the component along ``x_j`` is
    divided by ``lambda_j - lambda_i`` and the ``i``-th component dropped.
    """
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != spec.n:
        raise InputError(f"E has dimension {E.shape[0]}, spectrum has {spec.n}")
    i = check_index(i, spec.n)
    coeffs = spec.left.conj().T @ (E @ spec.right[:, i])
    shift = spec.eigenvalues - spec.eigenvalues[i]
    small = np.delete(np.abs(shift), i)
    if small.size and small.min() <= default_distinct_tol(spec.eigenvalues):
        raise DegenerateGapError(f"eigenvalue {i} is not simple")
    shift[i] = 1.0
    coeffs = coeffs / shift
    coeffs[i] = 0
    return spec.right @ coeffs


def solve_b_block(part, tol=0.0):
    """Sylvester solutions ``B1, B2`` of the block off-diagonal problem.

    ``D1 B1 - B1 D2 = E1`` and ``D2 B2 - B2 D1 = E2``, solved entrywise since
    both blocks are diagonal. Eigenvalues may repeat inside a block.
    """
    if part.gap <= tol:
        raise DegenerateGapError(f"block gap {part.gap:.3e} not above {tol:.3e}")
    d1, d2 = part.D1, part.D2
    B1 = part.E1 / (d1[:, None] - d2[None, :])
    B2 = part.E2 / (d2[:, None] - d1[None, :])
    r1 = np.linalg.norm(d1[:, None] * B1 - B1 * d2[None, :] - part.E1)
    r2 = np.linalg.norm(d2[:, None] * B2 - B2 * d1[None, :] - part.E2)
    scale = np.linalg.norm(part.E1) + np.linalg.norm(part.E2)
    bscale = max(np.abs(d1).max(), np.abs(d2).max()) * (np.linalg.norm(B1) + np.linalg.norm(B2))
    if max(r1, r2) > RESIDUAL_TOL * (bscale + scale):
        raise NotInTangentError("block Sylvester residual too large")
    return B1, B2


def assemble_block_b(B1, B2):
    k, m = B1.shape
    B = np.zeros((k + m, k + m), dtype=complex)
    B[:k, k:] = B1
    B[k:, :k] = B2
    return B


def column_norm_identity(d, E, i):
    """``sum_j |E[j, i]|^2 / |d_j - d_i|^2``, the squared norm of ``B[:, i]``."""
    d = np.asarray(d)
    E = np.asarray(E)
    mask = np.arange(d.shape[0]) != i
    return float(np.sum(np.abs(E[mask, i]) ** 2 / np.abs(d[mask] - d[i]) ** 2))
