import itertools

import numpy as np
import pytest
from conftest import curvs, random_orthogonal

from curvlab import curvature as cv
from curvlab.errors import InvalidRotationError, MalformedTensorError, ShapeError
from curvlab.lie import build_frame


def constant_curvature_tensor(n, K=1.0):
    g = np.eye(n)
    return K * (np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g))


def cylinder_tensor3():
    T = np.zeros((3, 3, 3, 3))
    T[0, 1, 0, 1] = T[1, 0, 1, 0] = 0.5
    T[0, 1, 1, 0] = T[1, 0, 0, 1] = -0.5
    return T


def brute_ricci(T):
    n = T.shape[0]
    return np.array([[sum(T[i, j, k, j] for j in range(n)) for k in range(n)] for i in range(n)])


def sharp_by_brackets(A, B):
    """<(A#B) phi, psi> = 1/2 sum_ab <[A w_a, B w_b], phi> <[w_a, w_b], psi>, via matrices only."""
    f = A.frame
    mats = f.basis
    AM = [f.to_matrix(A.M[:, a]) for a in range(f.N)]
    BM = [f.to_matrix(B.M[:, b]) for b in range(f.N)]
    ip = lambda X, Y: -0.5 * np.trace(X @ Y)
    out = np.zeros((f.N, f.N))
    for a in range(f.N):
        for b in range(f.N):
            left = AM[a] @ BM[b] - BM[b] @ AM[a]
            right = mats[a] @ mats[b] - mats[b] @ mats[a]
            for p in range(f.N):
                lp = ip(left, mats[p])
                if lp == 0.0:
                    continue
                for q in range(f.N):
                    out[p, q] += 0.5 * lp * ip(right, mats[q])
    return out


def test_constant_curvature_is_identity():
    R = cv.op_from_tensor(constant_curvature_tensor(3))
    np.testing.assert_array_equal(R.M, np.eye(3))


def test_cylinder_packing():
    R = cv.op_from_tensor(cylinder_tensor3())
    np.testing.assert_array_equal(R.M, np.diag([0.5, 0.0, 0.0]))


@pytest.mark.parametrize("n", [3, 4, 6])
def test_tensor_round_trip(n):
    for R in curvs(n, 3):
        T = cv.to_riemann(R)
        np.testing.assert_allclose(cv.to_riemann(cv.op_from_tensor(T)), T, atol=1e-14)
        assert cv.pair_symmetry_residual(T) == 0.0


def test_malformed_tensor_rejected(rng):
    with pytest.raises(MalformedTensorError):
        cv.op_from_tensor(rng.standard_normal((3, 3, 3, 3)))
    with pytest.raises(ShapeError):
        cv.op_from_tensor(np.zeros((3, 3, 3)))


def test_asymmetric_operator_rejected():
    with pytest.raises(MalformedTensorError):
        cv.op_from_matrix(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_norm_bridge(n):
    for R in curvs(n, 5):
        assert cv.tensor_norm2(R) == pytest.approx(4 * cv.inner(R, R), rel=1e-13)


def test_bianchi_project_fixes_curvature_tensors():
    T = constant_curvature_tensor(4, 0.7)
    np.testing.assert_allclose(cv.bianchi_project(T), T, atol=1e-15)


def test_bianchi_project_kills_four_form():
    omega = np.zeros((4,) * 4)
    for p in itertools.permutations(range(4)):
        omega[p] = np.linalg.det(np.eye(4)[list(p)])
    np.testing.assert_allclose(cv.bianchi_project(omega), 0.0, atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bianchi_project_idempotent_and_contracting(n, rng):
    N = build_frame(n).N
    X = rng.standard_normal((N, N))
    T = cv.to_riemann(cv.op_from_matrix(X + X.T, n))
    P = cv.bianchi_project(T)
    np.testing.assert_allclose(cv.bianchi_project(P), P, atol=1e-13)
    assert np.linalg.norm(P) <= np.linalg.norm(T) + 1e-12
    assert cv.bianchi_residual(P) < 1e-13
    # the removed part is orthogonal to the kept part
    assert abs(np.sum(P * (T - P))) < 1e-11


@pytest.mark.parametrize("n", [3, 4, 5, 8])
def test_random_curv_invariants(n):
    for R in curvs(n, 5):
        assert cv.bianchi_residual(R) <= 1e-12
        np.testing.assert_array_equal(R.M, R.M.T)


def test_random_generators_deterministic():
    a = cv.random_curv(5, 11)
    b = cv.random_curv(5, 11)
    assert a.M.tobytes() == b.M.tobytes()
    a = cv.random_nonneg_curv(5, cv.trial_rng(3, 5, 7))
    b = cv.random_nonneg_curv(5, cv.trial_rng(3, 5, 7))
    assert a.M.tobytes() == b.M.tobytes()
    assert cv.random_curv(5, 12).M.tobytes() != cv.random_curv(5, 11).M.tobytes()


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_random_nonneg_curv(n):
    for k in range(20):
        R = cv.random_nonneg_curv(n, cv.trial_rng(1, n, k))
        assert np.linalg.eigvalsh(R.M)[0] >= -1e-12
        assert cv.bianchi_residual(R) <= 1e-12 * (1 + cv.norm(R))


def test_ricci_examples():
    n = 3
    R = cv.identity_op(n)
    np.testing.assert_array_equal(cv.ricci(R), 2 * np.eye(3))
    assert cv.scalar(R) == 6.0
    C = cv.op_from_tensor(cylinder_tensor3())
    np.testing.assert_array_equal(cv.ricci(C), np.diag([0.5, 0.5, 0.0]))
    assert cv.scalar(C) == 1.0
    np.testing.assert_array_equal(cv.ricci(cv.zero_op(4)), np.zeros((4, 4)))


@pytest.mark.parametrize("n", [3, 5])
def test_ricci_matches_loops(n):
    R = curvs(n, 1)[0]
    T = cv.to_riemann(R)
    np.testing.assert_allclose(cv.ricci(R), brute_ricci(T), atol=1e-13)
    assert cv.sigma2(R) == pytest.approx(np.sum(brute_ricci(T) ** 2), rel=1e-13)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_identity_sharp_identity(n):
    I = cv.identity_op(n)
    np.testing.assert_allclose(cv.sharp(I, I).M, (n - 2) * np.eye(I.N), atol=1e-14)


def test_sharp_diagonal_n3():
    r = np.array([1.5, -0.25, 2.0])
    A = cv.op_from_matrix(np.diag(r), 3)
    np.testing.assert_allclose(cv.sharp(A, A).M, np.diag([r[1] * r[2], r[0] * r[2], r[0] * r[1]]), atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sharp_matches_bracket_formula(n):
    A, B = curvs(n, 2, seed=5)
    np.testing.assert_allclose(cv.sharp(A, B).M, sharp_by_brackets(A, B), atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_sharp_commutes_and_is_bilinear(n):
    A, B, C = curvs(n, 3, seed=2)
    np.testing.assert_allclose(cv.sharp(A, B).M, cv.sharp(B, A).M, atol=1e-12)
    np.testing.assert_allclose(cv.sharp(A, 2 * B + C).M, 2 * cv.sharp(A, B).M + cv.sharp(A, C).M, atol=1e-11)
    np.testing.assert_array_equal(cv.sharp(A, cv.zero_op(n)).M, 0.0)


def test_sharp_frame_mismatch():
    with pytest.raises(ShapeError):
        cv.sharp(cv.identity_op(3), cv.identity_op(4))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_q_of_identity(n):
    np.testing.assert_allclose(cv.q_operator(cv.identity_op(n)).M, (n - 1) * np.eye(n * (n - 1) // 2), atol=1e-14)


def test_tri_examples():
    I = cv.identity_op(3)
    assert cv.tri(I) == pytest.approx(12.0, abs=1e-13)
    assert cv.tri(I, I, I) == cv.tri(I)
    A, B = curvs(3, 2)
    assert cv.tri(cv.zero_op(3), A, B) == 0.0
    R = curvs(4, 1)[0]
    assert cv.tri(R) == pytest.approx(2 * cv.inner(cv.q_operator(R), R), rel=1e-12)


def test_tri_fully_symmetric_n4():
    for A, B, C in [curvs(4, 3, seed=s) for s in range(5)]:
        vals = [cv.tri(*p) for p in itertools.permutations((A, B, C))]
        assert max(vals) - min(vals) <= 1e-10 * (1 + max(map(abs, vals)))


def test_tachibana_examples():
    I = cv.identity_op(3)
    assert cv.ricci_quadratic(I) == pytest.approx(24.0, abs=1e-12)
    assert cv.tachibana_gap(I) == pytest.approx(0.0, abs=1e-12)
    C = cv.op_from_tensor(cylinder_tensor3())
    assert cv.tri(C) == pytest.approx(0.25, abs=1e-15)
    assert cv.ricci_quadratic(C) == pytest.approx(0.5, abs=1e-15)
    assert cv.tachibana_gap(C) == pytest.approx(0.0, abs=1e-15)
    assert cv.tachibana_gap(cv.zero_op(5)) == 0.0


def test_ricci_quadratic_matches_loops():
    R = curvs(3, 1, seed=9)[0]
    T = cv.to_riemann(R)
    Ric = brute_ricci(T)
    r = range(3)
    want = sum(Ric[i, p] * T[i, j, k, l] * T[p, j, k, l] for i in r for p in r for j in r for k in r for l in r)
    assert cv.ricci_quadratic(R) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tachibana_nonneg(n):
    for k in range(50):
        R = cv.random_nonneg_curv(n, cv.trial_rng(8, n, k))
        assert cv.tachibana_gap(R) >= -1e-10 * (1 + cv.magnitude(R))


def test_conjugate_identity_and_axis_swap():
    C = cv.op_from_tensor(cylinder_tensor3())
    np.testing.assert_allclose(cv.conjugate(C, np.eye(3)).M, C.M, atol=1e-15)
    swap = np.eye(3)[[2, 1, 0]]
    np.testing.assert_allclose(cv.ricci(cv.conjugate(C, swap)), np.diag([0.0, 0.5, 0.5]), atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_conjugate_matches_tensor_rotation(n, rng):
    R = curvs(n, 1)[0]
    O = random_orthogonal(n, rng)
    T = np.einsum("ia,jb,kc,ld,abcd->ijkl", O, O, O, O, cv.to_riemann(R))
    np.testing.assert_allclose(cv.to_riemann(cv.conjugate(R, O)), T, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_conjugation_invariants(n, rng):
    for R in curvs(n, 5, seed=4):
        R2 = cv.conjugate(R, random_orthogonal(n, rng))
        for f in (cv.scalar, cv.sigma2, cv.tri, cv.tensor_norm2, cv.tachibana_gap):
            assert abs(f(R) - f(R2)) <= 1e-10 * (1 + abs(f(R)))


def test_conjugate_rejects_non_orthogonal():
    with pytest.raises(InvalidRotationError):
        cv.conjugate(cv.identity_op(3), 2 * np.eye(3))


def test_trial_rng_is_order_independent():
    a = [cv.trial_rng(42, 3, k).standard_normal() for k in range(5)]
    b = [cv.trial_rng(42, 3, k).standard_normal() for k in reversed(range(5))]
    assert a == b[::-1]
    assert cv.trial_rng(42, 3, 0).standard_normal() != cv.trial_rng(42, 4, 0).standard_normal()
