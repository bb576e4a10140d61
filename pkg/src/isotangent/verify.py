"""End-to-end self checks, one per acceptance criterion.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_all`
runs them in order and :func:`report` prints one line per check.
"""

import sys
import time
from dataclasses import dataclass

import numpy as np

from .bounds import _actual_all, eigval_bounds_all, order_sweep
from .experiments import (
    RESIDUAL_KINDS,
    ScenarioConfig,
    ScenarioKind,
    generate_scenario,
    jordan_radius,
    run_hermitian_block_figure,
    run_jordan_figure,
    run_residual_figure,
)
from .expansions import loglog_slope
from .jordan import jordan_block, jordan_order_validate
from .linalg import (
    eigen_full,
    eigenvalue_derivative,
    eigenvalues,
    match_eigenvalues,
    singular_values,
    spectral_gaps,
)
from .svd import jordan_wielandt_reduce, singular_expansion, solve_s_from_e
from .tangent import diagonal_commutator, solve_b_diagonal

FIGURE_KINDS = (ScenarioKind.EQUISPACED_UNIF, ScenarioKind.SQRT_SPACED, ScenarioKind.SQUARE_SPACED)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.detail}; {self.seconds:.2f}s)"


def _timed(number, name, func):
    start = time.perf_counter()
    try:
        passed, detail = func()
    except Exception as exc:  # a crash is a failed check, not an aborted run
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(number, name, bool(passed), detail, time.perf_counter() - start)


def _complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def check_commutator_roundtrip(count=200, n=200, seed=1):
    def run():
        rng = np.random.default_rng(seed)
        d = np.arange(1, n + 1, dtype=float)
        worst = 0.0
        start = time.perf_counter()
        for _ in range(count):
            E = _complex_gaussian(rng, (n, n))
            np.fill_diagonal(E, 0)
            B = solve_b_diagonal(d, E).B
            rel = np.linalg.norm(diagonal_commutator(d, B) - E) / np.linalg.norm(E)
            worst = max(worst, rel)
        elapsed = time.perf_counter() - start
        return worst <= 1e-12 and elapsed < 5.0, f"max rel residual {worst:.2e}, {elapsed:.2f}s"

    return _timed(1, "commutator roundtrip", run)


def check_constant_rho(seed=0):
    def run():
        res = run_residual_figure(ScenarioConfig.default(ScenarioKind.EQUISPACED_UNIF, seed=seed), write=False)
        sc = generate_scenario(ScenarioConfig.default(ScenarioKind.EQUISPACED_UNIF, seed=seed))
        rho = np.linalg.norm(sc.E, 2) / spectral_gaps(sc.d)
        rho_err = np.abs(rho - 1e-3).max()
        coarse = res.tables["linear"][:, 2]
        dev = np.abs(coarse - 1.002e-3).max()
        ok = rho_err <= 1e-12 and dev <= 1e-6
        return ok, f"max |rho - 1e-3| {rho_err:.1e}, max |bound - 1.002e-3| {dev:.2e}"

    return _timed(2, "constant rho figure", run)


def check_domination(seeds=(0, 1, 2)):
    def run():
        bad = 0
        total = 0
        for kind in FIGURE_KINDS:
            for s in seeds:
                res = run_residual_figure(ScenarioConfig.default(kind, seed=s), write=False)
                for table in res.tables.values():
                    feasible = (table[:, 2] >= 0) & (table[:, 3] >= 0)
                    rows = table[feasible]
                    ok = (rows[:, 3] >= rows[:, 1]) & (rows[:, 2] >= rows[:, 3])
                    bad += int((~ok).sum())
                    total += int(feasible.sum())
        return bad == 0, f"{total - bad}/{total} feasible rows dominated"

    return _timed(3, "bound domination", run)


def order_slopes(seed, n=20, norm=0.25, t_values=None):
    """Per-index log-log slopes of the eigenvector and eigenvalue residuals.

    Returns ``(vec, val)`` with ``vec`` of shape ``(3, n)`` for the three
    eigenvector truncations and ``val`` of shape ``(2, n)`` for the
    eigenvalue expansions truncated after ``t^2`` and ``t^3``.
    """
    if t_values is None:
        t_values = np.logspace(-2, 0, 9)
    rng = np.random.default_rng(seed)
    d = np.arange(1, n + 1, dtype=float)
    E = _complex_gaussian(rng, (n, n))
    np.fill_diagonal(E, 0)
    E *= norm / np.linalg.norm(E, 2)
    B = solve_b_diagonal(d, E).B
    R = np.array([_actual_all(d, E, B, t) for t in t_values])
    vec = np.array([[loglog_slope(t_values, R[:, k, i]) for i in range(n)] for k in range(3)])
    val = np.array(
        [[loglog_slope(t_values, order_sweep(d, E, B, i, c, t_values)) for i in range(n)] for c in (2, 3)]
    )
    return vec, val


def check_order_slopes(seeds=(0, 1, 2)):
    def run():
        worst_vec = 0.0
        worst_val = 0.0
        for s in seeds:
            vec, val = order_slopes(s)
            worst_vec = max(worst_vec, np.abs(vec - np.array([[1], [2], [3]])).max())
            worst_val = max(worst_val, np.abs(val - np.array([[3], [4]])).max())
        ok = worst_vec <= 0.3 and worst_val <= 0.4
        return ok, f"max slope deviation: vectors {worst_vec:.3f}, values {worst_val:.3f}"

    return _timed(4, "order-of-accuracy slopes", run)


def check_beats_bauer_fike(seed=0):
    def run():
        checked = 0
        worst = 0.0
        for kind in FIGURE_KINDS:
            sc = generate_scenario(ScenarioConfig.default(kind, seed=seed))
            t = sc.config.t
            norm_e = np.linalg.norm(sc.E, 2)
            eta = np.abs(sc.d[:, None] - sc.d[None, :])
            np.fill_diagonal(eta, np.inf)
            rho = norm_e / eta.min(axis=1)
            _, _, coarse = eigval_bounds_all(sc.d, sc.E, sc.B, t)
            mask = rho <= 0.25
            checked += int(mask.sum())
            worst = max(worst, float((coarse[mask] / (t * norm_e)).max()))
        return worst <= 1.0, f"{checked} indices, max coarse/(t||E||) = {worst:.3e}"

    return _timed(5, "quadratic eigenvalue bound beats t||E||", run)


def check_hermitian_block(seed=0):
    def run():
        start = time.perf_counter()
        res = run_hermitian_block_figure(ScenarioConfig.default(ScenarioKind.HERMITIAN_BLOCK, seed=seed), write=False)
        elapsed = time.perf_counter() - start
        table = res.tables["block"]
        ok = bool(np.all(table[:, 2] < 1e-6) and np.all(table[:, 2] >= table[:, 1]) and elapsed < 10.0)
        return ok, f"bound {table[0, 2]:.2e}, max err {table[:, 1].max():.2e}, {elapsed:.2f}s"

    return _timed(6, "Hermitian block figure", run)


def svd_checks(seed=0):
    """``(roundtrip relative residual, expansion slope, Jordan-Wielandt error)``."""
    rng = np.random.default_rng(seed)
    m, n = 6, 4
    s = np.sort(rng.uniform(1.0, 5.0, n))[::-1]
    A = np.zeros((m, n))
    A[:n, :n] = np.diag(s)

    def skew(k):
        G = _complex_gaussian(rng, (k, k))
        return (G - G.conj().T) / 2

    S1, S2 = skew(m), skew(n)
    S1[n:, n:] = 0
    E = S1 @ A + A @ S2
    sol = solve_s_from_e(A, E)
    roundtrip = np.linalg.norm(sol.S1 @ A + A @ sol.S2 - E) / np.linalg.norm(E)

    Er = np.zeros((m, n))
    top = rng.standard_normal((n, n))
    np.fill_diagonal(top, 0)
    Er[:n] = top
    svals = np.logspace(-4, -2, 7)
    slopes = []
    for i in range(n):
        c = singular_expansion(s, Er, i)
        res = [abs(np.sort(singular_values(A + t * Er))[::-1][i] - s[i] - t**2 * c) for t in svals]
        slopes.append(loglog_slope(svals, res))

    m2, n2 = 8, 5
    s2 = np.sort(rng.uniform(1.0, 5.0, n2))[::-1]
    A2 = np.zeros((m2, n2))
    A2[:n2, :n2] = np.diag(s2)
    E2 = 0.1 * rng.standard_normal((m2, n2))
    frame = jordan_wielandt_reduce(A2, E2)
    w = np.sort(np.linalg.eigvalsh(frame.transformed))[::-1][:n2]
    jw = float(np.abs(w - singular_values(A2 + E2)).max())
    return float(roundtrip), float(min(slopes)), jw


def check_svd(seed=0):
    def run():
        rt, slope, jw = svd_checks(seed)
        ok = rt <= 1e-12 and slope >= 2.8 and jw <= 1e-10
        return ok, f"roundtrip {rt:.1e}, min expansion slope {slope:.2f}, Jordan-Wielandt error {jw:.1e}"

    return _timed(7, "SVD tangent roundtrip and expansion", run)


def random_jordan_tangent(n, rng, norm=1.0):
    J = jordan_block(n)
    B = _complex_gaussian(rng, (n, n))
    E = J @ B - B @ J
    return E * (norm / np.linalg.norm(E, 2))


def check_jordan(seed=0, ring_seeds=10):
    def run():
        rng = np.random.default_rng(seed)
        eps = np.logspace(-2, -6, 9)
        rel = []
        for n in (4, 8, 16):
            v = jordan_order_validate(n, random_jordan_tangent(n, rng), eps)
            rel.append(abs(v.slope - 2.0 / n) / (2.0 / n))
        fractions = []
        for s in range(ring_seeds):
            cfg = ScenarioConfig.default(ScenarioKind.JORDAN_CIRCLE, seed=s)
            lam = run_jordan_figure(cfg, write=False).tables["eigenvalues"]
            mod = np.hypot(lam[:, 0], lam[:, 1])
            r = jordan_radius(cfg)
            fractions.append(np.mean((mod >= 0.7 * r) & (mod <= 1.3 * r)))
        ok = max(rel) <= 0.1 and min(fractions) >= 0.9
        return ok, f"max relative slope error {max(rel):.3f}, min ring fraction {min(fractions):.2f}"

    return _timed(8, "Jordan eigenvalue order", run)


def check_derivative(count=50, n=8, seed=2, h=1e-5):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(count):
            A = _complex_gaussian(rng, (n, n))
            E = _complex_gaussian(rng, (n, n))
            spec = eigen_full(A)
            plus = eigenvalues(A + h * E)
            minus = eigenvalues(A - h * E)
            p = plus[match_eigenvalues(spec.eigenvalues, plus)]
            q = minus[match_eigenvalues(spec.eigenvalues, minus)]
            fd = (p - q) / (2 * h)
            exact = np.array([eigenvalue_derivative(spec, E, i) for i in range(n)])
            worst = max(worst, float((np.abs(fd - exact) / np.abs(exact)).max()))
        return worst <= 1e-6, f"max relative error {worst:.2e}"

    return _timed(9, "eigenvalue derivative identity", run)


def check_traces(seed=0):
    def run():
        worst = 0.0
        for kind in (*RESIDUAL_KINDS[:3], ScenarioKind.HERMITIAN_BLOCK, ScenarioKind.JORDAN_CIRCLE):
            sc = generate_scenario(ScenarioConfig.default(kind, seed=seed))
            E, B = sc.E, sc.B
            nb, ne = np.linalg.norm(B), np.linalg.norm(E)
            t2 = abs(np.einsum("ij,ji->", B, E)) / (nb * ne)
            t3 = abs(np.einsum("ij,ji->", B @ E, B)) / (nb**2 * ne)
            worst = max(worst, t2, t3)
        return worst <= 1e-12, f"max relative trace {worst:.1e}"

    return _timed(10, "trace preservation", run)


CHECKS = (
    check_commutator_roundtrip,
    check_constant_rho,
    check_domination,
    check_order_slopes,
    check_beats_bauer_fike,
    check_hermitian_block,
    check_svd,
    check_jordan,
    check_derivative,
    check_traces,
)


def run_all():
    return [check() for check in CHECKS]


def report(results, stream=None):
    stream = sys.stdout if stream is None else stream
    for r in results:
        print(r.line(), file=stream)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed", file=stream)
    return passed == len(results)
