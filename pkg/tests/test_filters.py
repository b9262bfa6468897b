import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trendspectra.filters import (
    MUSGRAVE_NOISE_RATIO,
    KernelSpec,
    LocalPolySpec,
    MmsreSpec,
    SymmetricFilter,
    asymmetric_lpr_filter,
    design_matrix,
    kernel_weights,
    mmsre_filter,
    mmsre_operators,
    mmsre_weights,
    symmetric_filter,
)


def wls_oracle(j, kappa, degree):
    """Intercept weights by least squares on sqrt(K) X (no normal equations)."""
    X = np.vander(j.astype(float), degree + 1, increasing=True)
    r = np.sqrt(kappa)
    pinv = np.linalg.pinv(r[:, None] * X)
    return pinv[0] * r


def kkt_oracle(w, q, U, Z, D, dsq):
    """Constrained revision-error minimiser from the full KKT system."""
    m = (w.size - 1) // 2 + q + 1
    wp = w[:m]
    Up, Zp = U[:m], Z[:m]
    r = U.shape[1]
    A = np.zeros((m + r, m + r))
    A[:m, :m] = 2 * (np.diag(D[:m]) + dsq * Zp @ Zp.T)
    A[:m, m:] = Up
    A[m:, :m] = Up.T
    rhs = np.concatenate([2 * D[:m] * wp + 2 * dsq * Zp @ (Z.T @ w), U.T @ w])
    return np.linalg.solve(A, rhs)[:m]


def musgrave_oracle(w, q, ratio):
    """Musgrave's explicit end weights (constant fit, linear trend guard)."""
    N = w.size
    M = (N - 1) // 2 + q + 1
    k = np.arange(1, M + 1)
    i = np.arange(M + 1, N + 1)
    wf = w[M:]
    c = (M + 1) / 2
    corr = (k - c) * ratio / (1 + M * (M - 1) * (M + 1) * ratio / 12) * np.sum((i - c) * wf)
    return w[:M] + wf.sum() / M + corr


# -- kernels -----------------------------------------------------------------

def test_henderson_kernel_values():
    k = kernel_weights(KernelSpec("henderson", 6))
    assert k[0] == k[-1] == 13 * 28 * 45 == 16380
    assert k[6] == 49 * 64 * 81 == 254016


def test_uniform_kernel():
    np.testing.assert_array_equal(kernel_weights(KernelSpec("uniform", 2)), np.ones(5))


@pytest.mark.parametrize("h", range(0, 13))
def test_kernel_symmetric_nonnegative(h):
    k = kernel_weights(KernelSpec("henderson", h))
    assert np.all(k >= 0)
    np.testing.assert_array_equal(k, k[::-1])


def test_kernel_rejects_bad_kind():
    with pytest.raises(ValueError):
        KernelSpec("gaussian", 3)


# -- symmetric filters -------------------------------------------------------

@pytest.mark.parametrize("p", [0, 1])
def test_uniform_low_degree_is_mean(p):
    f = symmetric_filter(LocalPolySpec(2, p, KernelSpec("uniform", 2)))
    np.testing.assert_allclose(f.weights, 0.2, atol=1e-15)


def test_henderson13_against_lstsq_oracle(henderson):
    j = np.arange(-6, 7)
    oracle = wls_oracle(j, kernel_weights(KernelSpec("henderson", 6)), 3)
    np.testing.assert_allclose(henderson.weights, oracle, atol=1e-13)
    assert henderson.weights[6] == pytest.approx(0.240057156466, abs=1e-12)
    np.testing.assert_allclose(henderson.weights, henderson.weights[::-1], atol=0)
    assert henderson.weights.sum() == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("kind", ["henderson", "uniform"])
@pytest.mark.parametrize("h", range(1, 13))
def test_symmetric_polynomial_preservation(kind, h):
    for p in range(0, min(2 * h, 5) + 1):
        f = symmetric_filter(LocalPolySpec(h, p, KernelSpec(kind, h)))
        X = design_matrix(h, p)
        e1 = np.eye(p + 1)[0]
        np.testing.assert_allclose(X.T @ f.weights, e1, atol=1e-10)
        assert abs(f.weights.sum() - 1) < 1e-12


def test_degree_bound_enforced():
    with pytest.raises(ValueError, match="p <= 2h"):
        LocalPolySpec(2, 5)


def test_symmetric_filter_validates_weights():
    with pytest.raises(ValueError):
        SymmetricFilter(np.array([0.2, 0.5, 0.2]), 1)
    with pytest.raises(ValueError):
        SymmetricFilter(np.array([0.3, 0.5, 0.2]), 1)


# -- LPR boundary filters ----------------------------------------------------

def test_lpr_full_window_is_symmetric(henderson):
    f = asymmetric_lpr_filter(LocalPolySpec(6, 3), 6)
    np.testing.assert_allclose(f.weights, henderson.weights, atol=1e-13)


def test_lpr_uniform_mean_of_two():
    f = asymmetric_lpr_filter(LocalPolySpec(1, 0, KernelSpec("uniform", 1)), 0)
    np.testing.assert_allclose(f.weights, [0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("q", range(6))
def test_lpr_henderson_against_oracle(q):
    spec = LocalPolySpec(6, 3)
    f = asymmetric_lpr_filter(spec, q)
    j = np.arange(-6, q + 1)
    kappa = kernel_weights(spec.kernel)[:6 + q + 1]
    np.testing.assert_allclose(f.weights, wls_oracle(j, kappa, 3), atol=1e-12)
    Xp = design_matrix(6, 3)[:6 + q + 1]
    np.testing.assert_allclose(Xp.T @ f.weights, np.eye(4)[0], atol=1e-10)


@pytest.mark.parametrize("kind", ["henderson", "uniform"])
@pytest.mark.parametrize("h,p", [(3, 1), (4, 2), (6, 3), (8, 3), (8, 2), (5, 0)])
def test_lpr_fundamental_relation(kind, h, p):
    spec = LocalPolySpec(h, p, KernelSpec(kind, h))
    w = symmetric_filter(spec).weights
    X = design_matrix(h, p)
    kappa = kernel_weights(spec.kernel)
    for q in range(h):
        if p > h + q:
            continue
        m = h + q + 1
        wa = asymmetric_lpr_filter(spec, q).weights
        Xp, Xf, kp = X[:m], X[m:], kappa[:m]
        rhs = w[:m] + kp * (Xp @ np.linalg.solve((Xp.T * kp) @ Xp, Xf.T @ w[m:]))
        np.testing.assert_allclose(wa, rhs, atol=1e-10)
        np.testing.assert_allclose(Xp.T @ wa, X.T @ w, atol=1e-10)
        assert abs(wa.sum() - 1) < 1e-12


def test_lpr_lower_boundary_degree():
    spec = LocalPolySpec(6, 3)
    f = asymmetric_lpr_filter(spec, 0, degree=1)
    Xp = design_matrix(6, 1)[:7]
    np.testing.assert_allclose(Xp.T @ f.weights, [1, 0], atol=1e-12)
    with pytest.raises(ValueError):
        asymmetric_lpr_filter(spec, 0, degree=4)


# -- revision-error (MMSRE) filters ------------------------------------------

def test_musgrave_realtime_against_explicit_formula(henderson):
    f = mmsre_filter(henderson, MmsreSpec("LC", MUSGRAVE_NOISE_RATIO, 6), 0)
    np.testing.assert_allclose(f.weights, musgrave_oracle(henderson.weights, 0, MUSGRAVE_NOISE_RATIO),
                               atol=1e-13)
    # X-11 real-time end weights of the 13-term Henderson filter
    np.testing.assert_allclose(
        f.weights, [-0.092, -0.058, 0.012, 0.120, 0.244, 0.353, 0.421], atol=6e-4)
    assert f.weights.sum() == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("q", range(6))
def test_lc_matches_musgrave_all_q(henderson, q):
    f = mmsre_filter(henderson, MmsreSpec("LC", MUSGRAVE_NOISE_RATIO, 6), q)
    np.testing.assert_allclose(f.weights, musgrave_oracle(henderson.weights, q, MUSGRAVE_NOISE_RATIO),
                               atol=1e-13)


@pytest.mark.parametrize("family,r", [("LC", 1), ("QL", 2), ("CQ", 3)])
@pytest.mark.parametrize("q", range(6))
def test_mmsre_against_kkt_oracle(henderson, family, r, q):
    f = mmsre_filter(henderson, MmsreSpec(family, MUSGRAVE_NOISE_RATIO, 6), q)
    X = design_matrix(6, 3)
    oracle = kkt_oracle(henderson.weights, q, X[:, :r], X[:, r:r + 1], np.ones(13),
                        MUSGRAVE_NOISE_RATIO)
    np.testing.assert_allclose(f.weights, oracle, atol=1e-12)
    m = 7 + q
    np.testing.assert_allclose(X[:m, :r].T @ f.weights, X[:, :r].T @ henderson.weights,
                               atol=1e-12)


def test_ql_realtime_constraint(henderson):
    f = mmsre_filter(henderson, MmsreSpec("QL", MUSGRAVE_NOISE_RATIO, 6), 0)
    U = design_matrix(6, 1)
    np.testing.assert_allclose(U[:7].T @ f.weights, [1, 0], atol=1e-12)


def test_mmsre_zero_correction_returns_past_weights():
    # future weights orthogonal to the constant and the linear column
    half = np.array([0.4, 0.2, 0.1, 0.0])
    half[0] = 1 - 2 * half[1:].sum()
    sym = SymmetricFilter.from_half(half)
    for fam in ("LC", "QL", "CQ"):
        f = mmsre_filter(sym, MmsreSpec(fam, 0.3, 3), 2)
        np.testing.assert_allclose(f.weights, sym.weights[:6], atol=1e-15)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("q", range(6))
def test_mmsre_operator_identities(r, q):
    X = design_matrix(6, 3)
    m = 7 + q
    Up, Zp = X[:m, :r], X[:m, r:r + 1]
    Q = np.eye(m) + MUSGRAVE_NOISE_RATIO * Zp @ Zp.T
    M, L = mmsre_operators(Up, Q)
    np.testing.assert_allclose(Up.T @ M, 0, atol=1e-10)
    np.testing.assert_allclose(Up.T @ L, np.eye(r), atol=1e-10)


@pytest.mark.parametrize("kind", ["henderson", "uniform"])
@pytest.mark.parametrize("h", range(2, 9))
def test_mmsre_degenerates_to_lpr(kind, h):
    p = min(3, h)
    spec = LocalPolySpec(h, p, KernelSpec(kind, h))
    w = symmetric_filter(spec).weights
    X = design_matrix(h, p)
    D = 1.0 / kernel_weights(spec.kernel)
    for q in range(h):
        if p > h + q:
            continue
        v = mmsre_weights(w, q, X, None, D, 0.0)
        np.testing.assert_allclose(v, asymmetric_lpr_filter(spec, q).weights, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(h=st.integers(1, 10), p=st.integers(0, 4), kind=st.sampled_from(["henderson", "uniform"]))
def test_weights_sum_to_one_everywhere(h, p, kind):
    p = min(p, 2 * h)
    spec = LocalPolySpec(h, p, KernelSpec(kind, h))
    sym = symmetric_filter(spec)
    assert abs(sym.weights.sum() - 1) < 1e-12
    for q in range(h):
        if p <= h + q:
            assert abs(asymmetric_lpr_filter(spec, q).weights.sum() - 1) < 1e-12
        for fam in ("LC", "QL", "CQ"):
            if MmsreSpec(fam).n_constraints <= h + q + 1:
                v = mmsre_filter(sym, MmsreSpec(fam, MUSGRAVE_NOISE_RATIO, h), q).weights
                assert abs(v.sum() - 1) < 1e-12
