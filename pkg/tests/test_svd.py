import numpy as np
import pytest

from conftest import complex_gaussian
from isotangent.exceptions import DegenerateSpectrumError, InputError, NotInTangentError
from isotangent.expansions import loglog_slope
from isotangent.linalg import singular_values, svd_full
from isotangent.svd import (
    assemble_svd_b,
    jordan_wielandt_blocks,
    jordan_wielandt_reduce,
    singular_expansion,
    singular_expansion_antisymmetric,
    singular_expansion_symmetric,
    singular_value_bound,
    solve_s_from_e,
    svd_b_blocks,
    svd_tangent_apply,
    tall_rows_bound,
)


def _skew(rng, k):
    G = complex_gaussian(rng, (k, k))
    return (G - G.conj().T) / 2


def _tall(s, m):
    A = np.zeros((m, len(s)))
    A[: len(s), : len(s)] = np.diag(s)
    return A


def test_apply_zero_and_real_part(rng):
    A = _tall([3.0, 2.0, 1.0], 5)
    np.testing.assert_array_equal(svd_tangent_apply(A, np.zeros((5, 5)), np.zeros((3, 3))), 0)
    E = svd_tangent_apply(A, _skew(rng, 5), _skew(rng, 3))
    for t in svd_full(A):
        assert abs((t.left.conj() @ E @ t.right).real) <= 1e-14


def test_apply_two_by_two():
    s = 0.3 - 0.2j
    A = np.diag([2.0, 1.0])
    S1 = np.array([[0, s], [-np.conj(s), 0]])
    E = svd_tangent_apply(A, S1, np.zeros((2, 2)))
    np.testing.assert_allclose(E, [[0, s], [-2 * np.conj(s), 0]])


def test_apply_rejects_non_skew():
    with pytest.raises(InputError):
        svd_tangent_apply(np.eye(2), np.eye(2), np.zeros((2, 2)))


def test_solve_two_by_two():
    e12, e21 = 0.3, -0.5
    A = np.diag([2.0, 1.0])
    sol = solve_s_from_e(A, [[0, e12], [e21, 0]])
    assert sol.S1[0, 1] == pytest.approx(-(e12 + 2 * e21) / 3)
    assert sol.S2[0, 1] == pytest.approx((e21 + 2 * e12) / 3)
    assert (sol.S1 @ A + A @ sol.S2)[0, 1] == pytest.approx(e12)


def test_solve_zero():
    sol = solve_s_from_e(_tall([2.0, 1.0], 3), np.zeros((3, 2)))
    assert not sol.S1.any() and not sol.S2.any()


def test_solve_roundtrip_random(rng):
    A = _tall([4.0, 3.0, 2.0, 1.0], 6)
    S1, S2 = _skew(rng, 6), _skew(rng, 4)
    S1[4:, 4:] = 0
    E = S1 @ A + A @ S2
    sol = solve_s_from_e(A, E)
    assert np.linalg.norm(sol.S1 @ A + A @ sol.S2 - E) <= 1e-12 * np.linalg.norm(E)
    np.testing.assert_allclose(sol.S1 + sol.S1.conj().T, 0, atol=1e-15)
    np.testing.assert_allclose(sol.S2 + sol.S2.conj().T, 0, atol=1e-15)
    assert not sol.S1[4:, 4:].any()


def test_solve_wide(rng):
    A = _tall([3.0, 2.0, 1.0], 5).T
    S1, S2 = _skew(rng, 3), _skew(rng, 5)
    S2[3:, 3:] = 0
    E = S1 @ A + A @ S2
    sol = solve_s_from_e(A, E)
    assert sol.S1.shape == (3, 3) and sol.S2.shape == (5, 5)
    assert np.linalg.norm(sol.S1 @ A + A @ sol.S2 - E) <= 1e-12 * np.linalg.norm(E)


def test_solve_errors():
    with pytest.raises(NotInTangentError):
        solve_s_from_e(np.diag([2.0, 1.0]), np.eye(2))
    with pytest.raises(DegenerateSpectrumError):
        solve_s_from_e(np.diag([1.0, 1.0]), [[0, 1], [0, 0]])
    with pytest.raises(InputError):
        solve_s_from_e([[1.0, 1.0], [0.0, 2.0]], np.zeros((2, 2)))


def test_singular_value_bounds(rng):
    A = _tall([5.0, 3.0, 2.0, 0.5], 6)
    for _ in range(100):
        S1, S2 = 1e-2 * _skew(rng, 6), 1e-2 * _skew(rng, 4)
        S1[4:, 4:] = 0
        E = S1 @ A + A @ S2
        sharp, coarse = singular_value_bound(A, S1, S2)
        assert sharp <= coarse * (1 + 1e-12)
        drift = np.abs(singular_values(A + E) - singular_values(A)).max()
        assert drift <= sharp * (1 + 1e-9)
    assert singular_value_bound(A, np.zeros((6, 6)), np.zeros((4, 4))) == (0, 0)


def test_jordan_wielandt_frame(rng):
    s = np.array([4.0, 2.5, 1.0])
    A = _tall(s, 5)
    frame = jordan_wielandt_reduce(A, np.zeros((5, 3)))
    np.testing.assert_allclose(frame.transformed, np.diag([4, 2.5, 1, -4, -2.5, -1, 0, 0]), atol=1e-15)
    E = complex_gaussian(rng, (5, 3))
    frame = jordan_wielandt_reduce(A, E)
    np.testing.assert_allclose(frame.transformed, frame.transformed.conj().T, atol=1e-15)
    np.testing.assert_allclose(frame.Q.T @ frame.Q, np.eye(8), atol=1e-15)
    w = np.sort(np.linalg.eigvalsh(frame.transformed))
    sv = singular_values(A + E)
    np.testing.assert_allclose(w[-3:], np.sort(sv), atol=1e-12)
    np.testing.assert_allclose(w[:3], -np.sort(sv)[::-1], atol=1e-12)
    np.testing.assert_allclose(w[3:5], 0, atol=1e-12)
    np.testing.assert_allclose(jordan_wielandt_blocks(s, frame.E1, frame.E2), frame.transformed, atol=1e-14)


def test_svd_b_blocks_roundtrip(rng):
    s = np.array([4.0, 2.5, 1.0])
    A = _tall(s, 5)
    E = complex_gaussian(rng, (5, 3))
    E[np.arange(3), np.arange(3)] = 1j * E[np.arange(3), np.arange(3)].imag
    frame = jordan_wielandt_reduce(A, E)
    B = assemble_svd_b(*svd_b_blocks(s, E))
    T0 = frame.unperturbed
    np.testing.assert_allclose(T0 @ B - B @ T0, frame.transformed - T0, atol=1e-12)
    np.testing.assert_allclose(B, -B.conj().T, atol=1e-15)


def test_svd_b_blocks_zero_and_symmetric(rng):
    s = np.array([3.0, 2.0, 1.0])
    B1, B2, B3 = svd_b_blocks(s, np.zeros((4, 3)))
    assert not (B1.any() or B2.any() or B3.any())
    G = rng.standard_normal((3, 3))
    E = np.vstack([G + G.T, np.zeros((1, 3))])
    B1, B2, _ = svd_b_blocks(s, E)
    assert not B2.any()
    assert np.isrealobj(B1) or not B1.imag.any()


def _expansion_slope(s, E, i, svals):
    A = _tall(s, E.shape[0])
    c = singular_expansion(s, E, i)
    res = [abs(singular_values(A + t * E)[i] - s[i] - t**2 * c) for t in svals]
    return loglog_slope(svals, res)


def test_singular_expansion_slope(rng):
    s = np.array([5.0, 3.5, 2.0, 1.0])
    G = rng.standard_normal((4, 4))
    np.fill_diagonal(G, 0)
    E = np.vstack([G, np.zeros((2, 4))])
    svals = np.logspace(-4, -2, 7)
    for i in range(4):
        assert _expansion_slope(s, E, i, svals) >= 2.8


def test_singular_expansion_specializations(rng):
    s = np.array([5.0, 3.5, 2.0, 1.0])
    G = rng.standard_normal((4, 4))
    np.fill_diagonal(G, 0)
    for i in range(4):
        sym = (G + G.T) / 2
        anti = (G - G.T) / 2
        assert singular_expansion(s, sym, i) == pytest.approx(singular_expansion_symmetric(s, sym, i), rel=1e-13)
        assert singular_expansion(s, anti, i) == pytest.approx(singular_expansion_antisymmetric(s, anti, i), rel=1e-13)
    assert singular_expansion(s, np.zeros((4, 4)), 0) == 0


def test_singular_expansion_errors():
    s = np.array([2.0, 1.0])
    with pytest.raises(NotInTangentError):
        singular_expansion(s, np.eye(2), 0)
    with pytest.raises(InputError):
        singular_expansion(s, [[0, 1j], [0, 0]], 0)
    with pytest.raises(InputError):
        singular_expansion(s, [[0, 1], [0, 0], [1, 0]], 0)


def test_tall_rows_bound_scalar():
    b = tall_rows_bound([1.0], [[0.1]], 0)
    assert b.bound == pytest.approx(0.01)
    drift = np.sqrt(1.01) - 1
    assert drift == pytest.approx(0.004988, abs=1e-6)
    assert drift <= b.bound
    assert tall_rows_bound([1.0, 2.0], np.zeros((0, 2)), 1).bound == 0


def test_tall_rows_squared(rng):
    for _ in range(20):
        s = np.sort(rng.uniform(0.5, 3, 3))[::-1]
        E2 = 0.3 * rng.standard_normal((2, 3))
        M = np.vstack([np.diag(s), E2])
        sv = singular_values(M)
        for i in range(3):
            assert abs(sv[i] ** 2 - s[i] ** 2) <= tall_rows_bound(s, E2, i).squared_bound + 1e-12
