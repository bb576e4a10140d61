"""Input validation helpers shared by the public functions and estimators."""

import numpy as np

from .exceptions import InputError


def as_matrix(M, name="matrix", *, square=False, allow_empty=False):
    """Return ``M`` as a finite 2-D complex array (copy only if needed)."""
    try:
        arr = np.asarray(M, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: cannot convert to a complex array ({exc})") from exc
    if arr.ndim != 2:
        raise InputError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if arr.size == 0 and not allow_empty:
        raise InputError(f"{name}: empty matrix")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name}: contains NaN or Inf")
    if square and arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name}: expected a square matrix, got shape {arr.shape}")
    return arr


def as_vector(v, name="vector"):
    try:
        arr = np.asarray(v, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: cannot convert to a complex array ({exc})") from exc
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name}: expected a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name}: contains NaN or Inf")
    return arr


def diagonal_entries(D, name="D"):
    """Diagonal of ``D``.

    ``D`` may be given either as the vector of its diagonal entries or as a
    square matrix, in which case it must actually be diagonal.
    """
    arr = np.asarray(D)
    if arr.ndim == 1:
        return as_vector(arr, name)
    mat = as_matrix(arr, name, square=True)
    off = mat - np.diag(np.diag(mat))
    if np.any(off != 0):
        raise InputError(f"{name}: matrix is not diagonal")
    return np.diag(mat).copy()


def check_same_shape(A, B, names=("A", "B")):
    if A.shape != B.shape:
        raise InputError(f"{names[0]} and {names[1]} have shapes {A.shape} and {B.shape}")


def check_index(i, n):
    if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
        raise InputError(f"index must be an integer, got {i!r}")
    if not 0 <= i < n:
        raise InputError(f"index {i} out of range for dimension {n}")
    return int(i)


def check_hermitian(A, name="A", rtol=1e-12):
    scale = max(np.linalg.norm(A), 1.0)
    if np.linalg.norm(A - A.conj().T) > rtol * scale:
        raise InputError(f"{name}: not Hermitian")


def check_skew_hermitian(S, name="S", rtol=1e-12):
    scale = max(np.linalg.norm(S), 1.0)
    if np.linalg.norm(S + S.conj().T) > rtol * scale:
        raise InputError(f"{name}: not skew-Hermitian")
