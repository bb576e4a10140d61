"""Plain-text matrix files.

The first line holds ``rows cols``; every following non-empty line holds
one entry as ``re im``, in row-major order. Lines starting with ``#`` are
ignored. Example for ``[[1, 2j]]``::

    1 2
    1 0
    0 2
"""

import numpy as np

from .exceptions import InputError


def write_matrix(path, M):
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise InputError("only 1-D or 2-D arrays can be written")
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines.extend(f"{z.real:.17g} {z.imag:.17g}" for z in M.ravel())
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix(path):
    try:
        with open(path, encoding="ascii") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not an ASCII text file") from exc
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError(f"{path}: empty file")
    try:
        rows, cols = (int(v) for v in lines[0].split())
    except ValueError as exc:
        raise InputError(f"{path}: first line must be 'rows cols'") from exc
    if rows <= 0 or cols <= 0:
        raise InputError(f"{path}: dimensions must be positive")
    body = lines[1:]
    if len(body) != rows * cols:
        raise InputError(f"{path}: expected {rows * cols} entries, found {len(body)}")
    try:
        pairs = np.array([[float(v) for v in ln.split()] for ln in body])
    except ValueError as exc:
        raise InputError(f"{path}: malformed entry ({exc})") from exc
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise InputError(f"{path}: each entry line must be 're im'")
    if not np.all(np.isfinite(pairs)):
        raise InputError(f"{path}: non-finite entry")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(rows, cols)


def read_vector(path):
    """Read a ``n x 1``, ``1 x n`` or diagonal ``n x n`` file as a vector."""
    M = read_matrix(path)
    if M.shape[0] == 1 or M.shape[1] == 1:
        return M.ravel()
    if M.shape[0] == M.shape[1] and np.all(M == np.diag(np.diag(M))):
        return np.diag(M).copy()
    raise InputError(f"{path}: expected a vector or a diagonal matrix")
