"""Non-asymptotic eigenvalue and eigenvector bounds for commutator perturbations.

Each bound comes in a *sharp* form, which keeps the actual norms of rows
and columns of ``B``, and a *coarse* form where those norms are replaced by
``rho_i = ||E|| / eta_i``. The ``*_actual`` helpers measure the quantities
the bounds dominate, using the dense eigensolver as oracle.

Single-index functions raise :class:`BoundInfeasibleError` when a bound's
denominator is not positive; the batch function :func:`residual_ladder`
records ``nan`` instead so that a sweep survives edge eigenvalues.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import (
    as_matrix,
    check_hermitian,
    check_index,
    check_same_shape,
    check_skew_hermitian,
    diagonal_entries,
)
from .exceptions import BoundInfeasibleError, InputError
from .expansions import (
    continued_eigenpairs,
    eigval_coefficients,
    eigvec_terms_all,
    loglog_slope,
)
from .linalg import eigenvalues, spectral_gaps


@dataclass(frozen=True)
class ResidualReport:
    i: int
    t: float
    rho: float
    actual: tuple | None
    bound_sharp: tuple
    bound_coarse: tuple
    delta_bound: float


@dataclass(frozen=True)
class EigenvalueBoundReport:
    i: int
    actual_delta: float
    bound_sharp: float
    bound_coarse: float
    feasible: bool


class DeltaSurrogate(NamedTuple):
    value: float
    fallback: bool


def _prepare(D, E, B):
    d = diagonal_entries(D)
    E = as_matrix(E, "E", square=True)
    B = as_matrix(B, "B", square=True)
    if E.shape[0] != d.shape[0] or B.shape != E.shape:
        raise InputError("D, E and B must share the same dimension")
    return d, E, B


def _ladder(norm_e, eta, bcol, delta, t):
    """Sharp and coarse residual bounds, arrays of shape (3, n); nan if infeasible."""
    eta = np.asarray(eta, dtype=float)
    bcol = np.asarray(bcol, dtype=float)
    delta = np.asarray(delta, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = norm_e / eta
        a = (delta + t * norm_e) / eta
        den1 = 1.0 - a
        den3 = 1.0 - 2.0 * t * norm_e / eta
        lin = t * bcol / den1
        quad = t * (delta + t * norm_e) * bcol / (eta * den1)
        cub = (delta * t * bcol / eta + t**2 * (delta * norm_e + t * norm_e**2) * bcol / eta**2) / den3
        sharp = np.array([lin, quad, cub])
        sharp[:, (den1 <= 0) | (den3 <= 0)] = np.nan

        tr = t * rho
        cden = 1.0 - 2.0 * tr
        coarse = np.array(
            [
                tr / cden,
                2.0 * tr**2 / cden,
                (t * delta / eta * rho + 2.0 * tr**3) / cden,
            ]
        )
        coarse[:, cden <= 0] = np.nan
    return sharp, coarse


def _eigval_forms(norm_e, eta, brow, bcol, t):
    """Both displayed forms of the quadratic eigenvalue bound (nan if infeasible)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = norm_e / eta
        q = 1.0 - 2.0 * rho
        den = q - brow * bcol / q
        sharp = (t**2 * norm_e * (brow + bcol) / 2 + t**3 * norm_e * brow * bcol / (3 * q)) / den
        sharp = np.where((q > 0) & (den > 0), sharp, np.nan)
        cden = q - rho**2 / q
        coarse = t**2 * norm_e * (rho + (t / 3) * rho**2 / (1 - rho)) / cden
        coarse = np.where((q > 0) & (cden > 0), coarse, np.nan)
    return sharp, coarse


def eigvec_residual_bounds(D, E, B, i, t, delta_surrogate):
    """Linear, quadratic and cubic bounds on the eigenvector residuals.

    ``delta_surrogate`` must bound ``|lambda_i(t) - lambda_i|``; see
    :func:`delta_surrogate_chain`. The coarse cubic bound keeps the
    surrogate in its first term and replaces it by ``t ||E||`` in the second.
    """
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    if delta_surrogate < 0:
        raise InputError("delta_surrogate must be nonnegative")
    norm_e = float(np.linalg.norm(E, 2))
    eta = spectral_gaps(d)[i]
    bcol = float(np.linalg.norm(B[:, i]))
    sharp, coarse = _ladder(norm_e, eta, bcol, delta_surrogate, t)
    if np.isnan(sharp).any() or np.isnan(coarse).any():
        raise BoundInfeasibleError(f"rho_i * t = {t * norm_e / eta:.3g} is too large for index {i}")
    return ResidualReport(
        i=i,
        t=float(t),
        rho=float(norm_e / eta),
        actual=None,
        bound_sharp=tuple(float(v) for v in sharp),
        bound_coarse=tuple(float(v) for v in coarse),
        delta_bound=float(delta_surrogate),
    )


def _actual_all(d, E, B, t):
    n = d.shape[0]
    if t == 0:
        return np.zeros((3, n))
    _, Xt, _ = continued_eigenpairs(d, E, t)
    X1, X2 = eigvec_terms_all(d, E, B)
    R0 = Xt - np.eye(n)
    R1 = R0 - t * X1
    R2 = R1 - t**2 * X2
    return np.array([np.linalg.norm(R, axis=0) for R in (R0, R1, R2)])


def eigvec_actual_residuals(D, E, B, i, t):
    """Oracle residuals ``(||r^(0)||, ||r^(1)||, ||r^(2)||)`` for index ``i``."""
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    return tuple(float(v) for v in _actual_all(d, E, B, t)[:, i])


def eigval_bound(D, E, B, i, t=1.0, actual=True):
    """Quadratic bound on ``|lambda_i(t) - lambda_i|`` in both forms.

    With ``actual=True`` the true shift is measured with the oracle and
    stored in the report (``nan`` otherwise).
    """
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    norm_e = float(np.linalg.norm(E, 2))
    eta = spectral_gaps(d)[i]
    sharp, coarse = _eigval_forms(
        norm_e, eta, np.linalg.norm(B[i, :]), np.linalg.norm(B[:, i]), t
    )
    feasible = bool(np.isfinite(sharp))
    delta = np.nan
    if actual:
        lam = eigenvalues(np.diag(d) + t * E)
        delta = float(np.abs(lam - d[i]).min())
    return EigenvalueBoundReport(i, delta, float(sharp), float(coarse), feasible)


def delta_surrogate_chain(D, E, B, i, t=1.0):
    """Bound on ``|lambda_i(t) - lambda_i|`` for use inside the residual ladder.

    Uses the sharp quadratic eigenvalue bound, capped by the Bauer-Fike value
    ``t ||E||`` (valid since ``D`` is normal). If the quadratic bound is
    infeasible the Bauer-Fike value is returned with ``fallback=True``.
    """
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    norm_e = float(np.linalg.norm(E, 2))
    eta = spectral_gaps(d)[i]
    sharp, _ = _eigval_forms(norm_e, eta, np.linalg.norm(B[i, :]), np.linalg.norm(B[:, i]), t)
    if not np.isfinite(sharp):
        return DeltaSurrogate(t * norm_e, True)
    return DeltaSurrogate(float(min(sharp, t * norm_e)), False)


def residual_ladder(D, E, B, t=1.0, with_actual=True):
    """Residual reports for every index, as used by the figure scenarios.

    Infeasible bounds are stored as ``nan``.
    """
    d, E, B = _prepare(D, E, B)
    norm_e = float(np.linalg.norm(E, 2))
    eta = spectral_gaps(d)
    brow = np.linalg.norm(B, axis=1)
    bcol = np.linalg.norm(B, axis=0)
    sharp_dl, _ = _eigval_forms(norm_e, eta, brow, bcol, t)
    delta = np.where(np.isfinite(sharp_dl), np.minimum(sharp_dl, t * norm_e), t * norm_e)
    sharp, coarse = _ladder(norm_e, eta, bcol, delta, t)
    actual = _actual_all(d, E, B, t) if with_actual else None
    return [
        ResidualReport(
            i=i,
            t=float(t),
            rho=float(norm_e / eta[i]),
            actual=None if actual is None else tuple(float(v) for v in actual[:, i]),
            bound_sharp=tuple(float(v) for v in sharp[:, i]),
            bound_coarse=tuple(float(v) for v in coarse[:, i]),
            delta_bound=float(delta[i]),
        )
        for i in range(d.shape[0])
    ]


def eigval_bounds_all(D, E, B, t=1.0):
    """Vectors ``(actual, sharp, coarse)`` of eigenvalue shifts and bounds."""
    d, E, B = _prepare(D, E, B)
    norm_e = float(np.linalg.norm(E, 2))
    eta = spectral_gaps(d)
    sharp, coarse = _eigval_forms(
        norm_e, eta, np.linalg.norm(B, axis=1), np.linalg.norm(B, axis=0), t
    )
    lam, _, _ = continued_eigenpairs(d, E, t)
    return np.abs(lam - d), sharp, coarse


def hermitian_global_bound(A, B):
    """``||B|| ||AB - BA||`` for Hermitian ``A`` and skew-Hermitian ``B``.

    Bounds every ``|lambda_i(A + AB - BA) - lambda_i(A)|`` with eigenvalues
    sorted the same way on both sides.
    """
    A = as_matrix(A, "A", square=True)
    B = as_matrix(B, "B", square=True)
    check_same_shape(A, B)
    check_hermitian(A, "A")
    check_skew_hermitian(B, "B")
    E = A @ B - B @ A
    return float(np.linalg.norm(B, 2) * np.linalg.norm(E, 2))


def block_subspace_bound(part, B2, t=1.0, sharp=True):
    """Bound on ``||P x_i(t)||`` for unit eigenvectors continued from block 1.

    ``P`` projects onto the orthogonal complement of ``span([I; -t B2])``.
    When ``D1`` is not scalar its spectral diameter is added to ``||E||``
    in the numerator. With ``sharp=False`` the norm of ``B2`` is replaced
    by ``||E|| / gap``.
    """
    B2 = as_matrix(B2, "B2")
    if B2.shape != part.E2.shape:
        raise InputError("B2 does not match the partition")
    norm_e = part.norm_E()
    gap = part.gap
    if gap <= norm_e:
        raise BoundInfeasibleError(f"gap {gap:.3g} does not exceed ||E|| = {norm_e:.3g}")
    nb = float(np.linalg.norm(B2, 2)) if sharp else norm_e / gap
    return t**2 * nb * (norm_e + part.cluster_width) / (gap - norm_e)


def _block_one_vectors(part, t):
    D, E = part.assemble()
    A = D + t * E
    hermitian = np.array_equal(part.E2, part.E1.conj().T) and np.all(
        np.isreal(np.concatenate([part.D1, part.D2]))
    )
    if hermitian:
        w, V = np.linalg.eigh(A)
    else:
        w, V = np.linalg.eig(A)
        V = V / np.linalg.norm(V, axis=0)
    dist = np.abs(w[:, None] - part.D1[None, :]).min(axis=1)
    chosen = np.sort(np.argsort(dist, kind="stable")[: part.k])
    return w[chosen], V[:, chosen]


def block_subspace_residuals(part, B2, t=1.0):
    """Measured ``||(I - QQ^*) x_i(t)||`` for the ``k`` block-1 eigenvectors.

    ``Q`` is an orthonormal basis of ``span([I; -t B2])`` from a QR
    factorization; eigenvectors have unit norm.
    """
    B2 = as_matrix(B2, "B2")
    k = part.k
    basis = np.vstack([np.eye(k), -t * B2])
    Q, _ = np.linalg.qr(basis)
    _, V = _block_one_vectors(part, t)
    P = V - Q @ (Q.conj().T @ V)
    return np.linalg.norm(P, axis=0)


def _check_hermitian_block(part, B1):
    B1 = as_matrix(B1, "B1")
    if B1.shape != part.E1.shape:
        raise InputError("B1 does not match the partition")
    if not np.all(np.isreal(part.D1)) or not np.all(np.isreal(part.D2)):
        raise InputError("D must be real for the Hermitian block bounds")
    scale = max(np.linalg.norm(part.E1), np.finfo(float).tiny)
    if np.linalg.norm(part.E2 - part.E1.conj().T) > 1e-12 * scale:
        raise InputError("E2 must equal E1^*")
    if part.cluster_width != 0:
        raise InputError("the first block must be a multiple of the identity")
    norm_e1 = float(np.linalg.norm(part.E1, 2))
    if part.gap <= norm_e1:
        raise BoundInfeasibleError(f"gap {part.gap:.3g} does not exceed ||E1|| = {norm_e1:.3g}")
    return B1, norm_e1


def hermitian_block_eigval_bound(part, B1):
    """``1/2 ||B1 E1^* + E1 B1^*|| + 2/3 ||E1||^2 ||B1|| / (gap - ||E1||)``."""
    B1, norm_e1 = _check_hermitian_block(part, B1)
    sym = np.linalg.norm(B1 @ part.E1.conj().T + part.E1 @ B1.conj().T, 2)
    nb1 = np.linalg.norm(B1, 2)
    return float(0.5 * sym + (2.0 / 3.0) * norm_e1**2 * nb1 / (part.gap - norm_e1))


def hermitian_block_vec_bound(part, B1, t=1.0):
    """Cubic bound on the block-1 eigenspace residual in the Hermitian case."""
    B1, norm_e1 = _check_hermitian_block(part, B1)
    sym = np.linalg.norm(B1 @ part.E1.conj().T + part.E1 @ B1.conj().T, 2)
    nb1 = np.linalg.norm(B1, 2)
    g = part.gap - norm_e1
    return float((0.5 * t**2 * nb1 * sym + (2.0 / 3.0) * t**3 * nb1**2 * norm_e1**2 / g) / g)


def hermitian_block_eigval_actual(part, t=1.0):
    """Shifts ``|lambda_i(t) - lambda_1|`` of the eigenvalues continued from block 1."""
    w, _ = _block_one_vectors(part, t)
    return np.abs(w - part.D1[0])


def order_sweep(D, E, B, i, order_claim, s_values):
    """Residuals of the truncated eigenvalue expansion along ``D + sE``."""
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    if order_claim not in (2, 3):
        raise InputError("order_claim must be 2 or 3")
    c2, c3 = eigval_coefficients(E, B)
    res = []
    for s in s_values:
        lam = eigenvalues(np.diag(d) + s * E)
        li = lam[np.argmin(np.abs(lam - d[i]))]
        pred = d[i] + s**2 * c2[i]
        if order_claim == 3:
            pred = pred + s**3 * c3[i]
        res.append(abs(li - pred))
    return np.asarray(res)


def empirical_order_check(D, E, B, i, order_claim, s_values=None):
    """Fitted log-log slope of the eigenvalue expansion residual.

    Order claim 2 (truncate after ``s^2``) should give slope 3, claim 3
    should give slope 4.
    """
    if s_values is None:
        s_values = np.logspace(-2, 0, 9)
    d, E, B = _prepare(D, E, B)
    i = check_index(i, d.shape[0])
    rho = np.linalg.norm(E, 2) / spectral_gaps(d)[i]
    if rho * max(s_values) > 0.25:
        raise InputError(f"rho_i * s = {rho * max(s_values):.3g} exceeds 1/4")
    res = order_sweep(d, E, B, i, order_claim, s_values)
    return loglog_slope(s_values, res)
