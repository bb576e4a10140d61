"""Independent reference computations used by the tests.

None of these call into the package: they solve the same problems by a
different route (Kronecker systems, extended precision, determinant
expansion) so that agreement is meaningful.
"""

import itertools

import mpmath
import numpy as np


def kron_solve_b(d, E):
    """Minimum-norm solution of ``DB - BD = E`` through the vectorized system.

    The null space is spanned by the diagonal entries, so the minimum-norm
    solution is the zero-diagonal one.
    """
    n = len(d)
    D = np.diag(np.asarray(d, dtype=complex))
    eye = np.eye(n)
    K = np.kron(eye, D) - np.kron(D.T, eye)
    vec, *_ = np.linalg.lstsq(K, np.asarray(E, dtype=complex).ravel(order="F"), rcond=None)
    return vec.reshape((n, n), order="F")


def mp_eigenvalues(A, dps=60):
    with mpmath.workdps(dps):
        M = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in np.asarray(A)])
        w = mpmath.eig(M, left=False, right=False)
        return [mpmath.mpc(v) for v in w]


def mp_eigenvalue_taylor(d, E, i, order=4, h=1e-6, dps=80):
    """Taylor coefficients of ``lambda_i(t)`` for ``diag(d) + tE`` at ``t = 0``.

    Eigenvalues are computed at ``order + 1`` small nodes in high precision
    and the interpolating polynomial through ``(0, d_i)`` and those nodes is
    read off.
    """
    with mpmath.workdps(dps):
        d = [mpmath.mpf(float(v)) for v in d]
        n = len(d)
        Em = [[mpmath.mpc(complex(E[r][c])) for c in range(n)] for r in range(n)]
        nodes = [mpmath.mpf(h) * k for k in range(1, order + 1)]
        vals = []
        for t in nodes:
            M = mpmath.matrix(n, n)
            for r in range(n):
                for c in range(n):
                    M[r, c] = t * Em[r][c] + (d[r] if r == c else 0)
            w = mpmath.eig(M, left=False, right=False)
            vals.append(min(w, key=lambda z: abs(z - d[i])))
        xs = [mpmath.mpf(0)] + nodes
        ys = [mpmath.mpc(d[i])] + vals
        V = mpmath.matrix([[x**k for k in range(order + 1)] for x in xs])
        coef = mpmath.lu_solve(V, mpmath.matrix(ys))
        return [complex(coef[k]) for k in range(order + 1)]


def _polymul(p, q):
    return np.convolve(p, q)


def charpoly_eps_coefficients_at_zero(J, E):
    """Coefficients in ``eps`` of ``det(-(J + eps E))`` by permutation expansion.

    Returns an array ``c`` with ``det = sum_k c[k] eps^k``; this is the
    characteristic polynomial ``det(tI - J - eps E)`` evaluated at ``t = 0``.
    """
    J = np.asarray(J, dtype=complex)
    E = np.asarray(E, dtype=complex)
    n = J.shape[0]
    total = np.zeros(n + 1, dtype=complex)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        sign = -1 if inversions % 2 else 1
        poly = np.array([1.0 + 0j])
        for r, c in enumerate(perm):
            poly = _polymul(poly, np.array([-J[r, c], -E[r, c]]))
        total[: poly.shape[0]] += sign * poly
    return total


def central_difference_eigenvalues(A, E, h):
    """Derivatives of the sorted eigenvalues by central differences (no matching)."""
    ref = np.linalg.eigvals(A)
    plus = np.linalg.eigvals(A + h * E)
    minus = np.linalg.eigvals(A - h * E)
    out = []
    for lam in ref:
        p = plus[np.argmin(np.abs(plus - lam))]
        m = minus[np.argmin(np.abs(minus - lam))]
        out.append((p - m) / (2 * h))
    return ref, np.array(out)


def two_by_two_eigenvalues(a, b, c, d):
    """Closed-form eigenvalues of ``[[a, b], [c, d]]`` sorted by real part."""
    tr = a + d
    disc = np.sqrt(complex((a - d) ** 2 + 4 * b * c))
    w = np.array([(tr - disc) / 2, (tr + disc) / 2])
    return w[np.argsort(w.real)]
