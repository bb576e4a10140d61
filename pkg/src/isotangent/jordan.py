"""Tangent perturbations of a nilpotent Jordan block.

``J`` has ones on the superdiagonal. ``E = JB - BJ`` exactly when every
lower diagonal of ``E`` (the main one included) sums to zero. For such
``E`` the characteristic polynomial of ``J + eps E`` is
``t^n + eps^2 c + ...`` near ``t = 0``, so the eigenvalues move by
``O(eps^(2/n))`` instead of the generic ``O(eps^(1/n))``.
"""

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._parallel import pmap
from ._validation import as_matrix
from .exceptions import InputError, NotInTangentError
from .linalg import eigenvalues
from .tangent import RESIDUAL_TOL, Gauge, TangentSolution


@dataclass(frozen=True)
class JordanAnalysis:
    n: int
    subdiag_sums: np.ndarray
    coefficient: complex
    predicted_order: Fraction
    in_tangent: bool


@dataclass(frozen=True)
class OrderValidation:
    epsilons: np.ndarray
    radii: np.ndarray
    slope: float
    ratios: np.ndarray
    coefficient: complex
    predicted_order: Fraction


def jordan_block(n):
    """Nilpotent ``n x n`` Jordan block (ones on the superdiagonal)."""
    if n < 1:
        raise InputError("block size must be positive")
    return np.eye(n, k=1)


def subdiagonal_sums(E):
    """Sums of the diagonals of ``E`` at offsets ``0, -1, ..., -(n-1)``."""
    E = as_matrix(E, "E", square=True)
    n = E.shape[0]
    return np.array([np.trace(E, offset=-k) for k in range(n)])


def jordan_coefficient(E):
    """``eps^2 t^0`` coefficient of ``det(tI - J - eps E)`` for tangent ``E``.

    With 1-based indices this is ``sum_{r=1}^{n-1} E(n, r+1) E(r, 1)``.
    """
    E = as_matrix(E, "E", square=True)
    n = E.shape[0]
    if n < 2:
        raise InputError("the coefficient needs n >= 2")
    return complex(np.dot(E[n - 1, 1:], E[: n - 1, 0]))


def jordan_tangent_check(E, tol=1e-12):
    """Membership test; superdiagonal entries of ``E`` are unconstrained."""
    E = as_matrix(E, "E", square=True)
    n = E.shape[0]
    sums = subdiagonal_sums(E)
    scale = np.linalg.norm(E, 2)
    inside = bool(np.all(np.abs(sums) <= tol * scale))
    coef = jordan_coefficient(E) if n >= 2 else 0j
    return JordanAnalysis(n, sums, coef, Fraction(2, n), inside)


def jordan_solve_b(E):
    """``B`` with ``JB - BJ = E``, first row of ``B`` fixed to zero.

    Row ``i + 1`` follows from ``B(i+1, j) = E(i, j) + B(i, j-1)`` with
    ``B(i, -1) = 0``. Any upper triangular Toeplitz matrix can be added to
    the result without changing the commutator.
    """
    E = as_matrix(E, "E", square=True)
    n = E.shape[0]
    B = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        B[i + 1, 0] = E[i, 0]
        B[i + 1, 1:] = E[i, 1:] + B[i, :-1]
    J = jordan_block(n)
    residual = float(np.linalg.norm(J @ B - B @ J - E))
    if residual > RESIDUAL_TOL * (np.linalg.norm(B) + np.linalg.norm(E)):
        raise NotInTangentError(f"E is not tangent at J (residual {residual:.3e})")
    return TangentSolution(B, Gauge.ZERO_FIRST_ROW, residual)


def spectral_radius_sweep(E, epsilons):
    """``max |lambda(J + eps E)|`` for each ``eps``."""
    E = as_matrix(E, "E", square=True)
    J = jordan_block(E.shape[0])
    return np.array(pmap(lambda eps: float(np.abs(eigenvalues(J + eps * E)).max()), epsilons))


def jordan_order_validate(n, E, epsilons, coef_tol=1e-14):
    """Fit the exponent of ``max |lambda(J + eps E)|`` against ``eps``.

    The fitted slope should be close to ``2/n``; ``ratios`` divides each
    radius by ``|c|^(1/n) eps^(2/n)`` and should approach one.
    """
    E = as_matrix(E, "E", square=True)
    if E.shape[0] != n:
        raise InputError(f"E has dimension {E.shape[0]}, expected {n}")
    eps = np.asarray(epsilons, dtype=float)
    if eps.ndim != 1 or eps.size < 2 or np.any(eps <= 0):
        raise InputError("need at least two positive epsilons")
    check = jordan_tangent_check(E)
    if not check.in_tangent:
        raise NotInTangentError("E is not tangent at J")
    c = check.coefficient
    if abs(c) <= coef_tol * np.linalg.norm(E, 2) ** 2:
        warnings.warn("coefficient is (nearly) zero; the order may be higher than 2/n", stacklevel=2)
    radii = spectral_radius_sweep(E, eps)
    if np.any(radii <= 0):
        slope = float("nan")
    else:
        slope = float(np.polyfit(np.log(eps), np.log(radii), 1)[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = radii / (abs(c) ** (1.0 / n) * eps ** (2.0 / n))
    return OrderValidation(eps, radii, slope, ratios, c, Fraction(2, n))
