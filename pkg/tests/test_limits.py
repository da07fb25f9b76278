import numpy as np
import pytest
import scipy.stats

import helpers
from cksvar import (
    AssumptionViolationError,
    DimensionMismatchError,
    brownian_grid,
    censor,
    kink,
    kink_geometry,
    limit_case1,
    limit_case2,
    projection_case1,
    regulate,
    to_canonical,
    vecm_decompose,
)
from cksvar.examples import build_example
from cksvar.vecm import _pi_scale, classify_case, factorize_pi


# ---------------------------------------------------------------------------
# Brownian grids
# ---------------------------------------------------------------------------


def test_brownian_grid_rejects_degenerate_variance():
    with pytest.raises(DimensionMismatchError):
        brownian_grid(np.zeros((1, 1)), 10, seed=0)


def test_brownian_grid_two_points():
    U = brownian_grid([[2.0]], 1, seed=1)
    assert U.W.shape == (1, 2)
    assert U.W[0, 0] == 0.0
    assert np.array_equal(U.grid, [0.0, 1.0])


def test_brownian_grid_terminal_variance_lln():
    var = np.array([[1.0, 0.4], [0.4, 2.0]])
    draws = np.empty((10**5, 2))
    # m = 1 makes each draw a single Gaussian increment
    for j in range(draws.shape[0]):
        draws[j] = brownian_grid(var, 1, seed=[100, j]).W[:, -1]
    S = draws.T @ draws / draws.shape[0]
    assert np.abs(S - var).max() < 0.02 * np.abs(var).max() * 2


def test_brownian_grid_deterministic():
    a = brownian_grid(np.eye(2), 16, seed=3).W
    b = brownian_grid(np.eye(2), 16, seed=3).W
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# censor / regulate / kink primitives
# ---------------------------------------------------------------------------


def test_censor_trivial():
    assert np.array_equal(censor([-1.0, -2.0]), [0.0, 0.0])
    w = np.array([0.5, 1.0, 0.2])
    assert np.array_equal(censor(w), w)
    assert np.array_equal(censor([0.0, -1.0, 0.5]), [0.0, 0.0, 0.5])


def test_regulate_formula():
    assert np.array_equal(regulate([0.0, -1.0, 0.5]), [0.0, 0.0, 1.5])
    w = np.array([0.0, 0.3, 0.9, 2.0])
    assert np.array_equal(regulate(w), w)


def test_regulate_dominates_censor():
    rng = np.random.default_rng(44)
    for _ in range(100):
        w = np.cumsum(rng.normal(size=200))
        r = regulate(w)
        assert np.all(r >= censor(w) - 1e-14)
        assert r.min() >= -1e-14


def test_levy_reflection_terminal_distribution():
    # terminal value of the regulated motion matches the folded normal
    reps, m = 5000, 2048
    term = np.empty(reps)
    for j in range(reps):
        U = brownian_grid([[1.0]], m, seed=[55, j])
        term[j] = regulate(U.W[0])[-1]
    ks = scipy.stats.kstest(term, lambda x: 2.0 * scipy.stats.norm.cdf(x) - 1.0).statistic
    assert ks < 0.03


def test_kink_identity_loading():
    U = brownian_grid([[1.0]], 64, seed=5)
    V = kink(U.W, np.eye(1), np.eye(1))
    assert np.array_equal(V, U.W)


def test_kink_scalar_doubling():
    U = brownian_grid([[1.0]], 256, seed=6)
    V = kink(U.W, np.array([[2.0]]), np.array([[1.0]]))
    w = U.W[0]
    assert np.array_equal(V[0][w >= 0], 2.0 * w[w >= 0])
    assert np.array_equal(V[0][w < 0], w[w < 0])


def test_kink_rejects_bad_first_rows():
    with pytest.raises(AssumptionViolationError):
        kink(np.zeros((1, 4)), np.array([[1.0]]), np.array([[-1.0]]))


def test_kink_rejects_discontinuity():
    G_plus = np.eye(2)
    G_minus = np.array([[1.0, 0.0], [0.0, 2.0]])  # differs off the switching plane
    with pytest.raises(AssumptionViolationError):
        kink(np.zeros((2, 4)), G_plus, G_minus)


def test_kink_rank_deficient_annihilation(case2_bank):
    # loading through the trend projections kills the regime's cointegration
    # combinations on the matching sign region
    canon = case2_bank[1]
    geo = kink_geometry(vecm_decompose(canon))
    U = brownian_grid(canon.model.Sigma, 256, seed=7)
    V = kink(U.W, geo.P_beta_perp_plus, geo.P_beta_perp_minus)
    driver = geo.vartheta @ U.W
    if geo.beta_plus.shape[1]:
        resid_plus = geo.beta_plus.T @ V[:, driver >= 0]
        resid_minus = geo.beta_minus.T @ V[:, driver < 0]
        assert np.abs(resid_plus).max(initial=0.0) < 1e-10
        assert np.abs(resid_minus).max(initial=0.0) < 1e-10


# ---------------------------------------------------------------------------
# case-(i) limit
# ---------------------------------------------------------------------------


def test_limit_case1_univariate_is_regulated():
    v = vecm_decompose(build_example("univariate_tobit"))
    U = brownian_grid([[1.0]], 512, seed=8)
    lp = limit_case1(v, U)
    # gamma+(1) = 1 for the first-order unit-root regime
    assert np.array_equal(lp.Y, regulate(U.W[0]))
    assert lp.Y.min() >= 0.0


def test_limit_case1_kappa_normalisation(case1_bank):
    for canon in case1_bank[:5]:
        _, kappa, kappa1 = projection_case1(vecm_decompose(canon))
        assert (kappa / kappa1)[0] == pytest.approx(1.0, abs=1e-12)


def test_limit_case1_cointegration_annihilated():
    canon = to_canonical(build_example("infltarget_1b", delta=-0.2, mu=0.5))
    v = vecm_decompose(canon)
    U = brownian_grid(canon.model.Sigma, 512, seed=9)
    lp = limit_case1(v, U)
    cls = classify_case(v)
    fact = factorize_pi(v.Pi_plus_mat, cls.r, ref=_pi_scale(v))
    Z = np.vstack([lp.Y, lp.X])
    assert np.abs(fact.beta.T @ Z).max() < 1e-8
    assert lp.Y.min() >= 0.0


def test_limit_case1_x_reconstruction_identity():
    canon = to_canonical(build_example("infltarget_1b", delta=-0.2, mu=0.5))
    v = vecm_decompose(canon)
    U = brownian_grid(canon.model.Sigma, 256, seed=10)
    lp = limit_case1(v, U)
    pair, kappa, kappa1 = projection_case1(v)
    PU0 = pair.P_beta_perp @ U.W
    load = kappa / kappa1
    E = np.eye(canon.p)
    alt = (E - np.outer(load, E[0])) @ PU0 + np.outer(load, lp.Y)
    assert np.abs(alt[1:] - lp.X).max() < 1e-10


def test_limit_case1_start_point_checked():
    v = vecm_decompose(build_example("univariate_tobit"))
    U = brownian_grid([[1.0]], 64, seed=11)
    with pytest.raises(AssumptionViolationError):
        limit_case1(v, U, Z0=[-1.0])
    lp = limit_case1(v, U, Z0=[2.0])
    assert lp.Y[0] == pytest.approx(2.0)


def test_limit_case1_rejects_off_space_start():
    canon = to_canonical(build_example("infltarget_1b", delta=-0.2, mu=0.5))
    v = vecm_decompose(canon)
    U = brownian_grid(canon.model.Sigma, 64, seed=12)
    with pytest.raises(AssumptionViolationError):
        limit_case1(v, U, Z0=[1.0, 50.0])


# ---------------------------------------------------------------------------
# case-(ii) limit
# ---------------------------------------------------------------------------


def test_limit_case2_linear_is_plain_projection():
    rng = np.random.default_rng(45)
    canon, _, _ = helpers.random_linear_coint(rng, p=2, r=1, k=2)
    v = vecm_decompose(canon)
    geo = kink_geometry(v)
    U = brownian_grid(np.eye(2), 256, seed=13)
    lp = limit_case2(v, U)
    Z = np.vstack([lp.Y, lp.X])
    assert np.abs(Z - geo.P_beta_perp_plus @ U.W).max() < 1e-10


def test_limit_case2_sign_coherence(case2_bank):
    for canon in case2_bank[:5]:
        v = vecm_decompose(canon)
        geo = kink_geometry(v)
        U = brownian_grid(canon.model.Sigma, 512, seed=14)
        lp = limit_case2(v, U)
        driver = geo.vartheta @ U.W
        s = np.sign(lp.Y)
        assert np.all((s == np.sign(driver)) | (lp.Y == 0.0))


def test_limit_case2_regime_cointegration_annihilated(case2_bank):
    canon = case2_bank[2]
    v = vecm_decompose(canon)
    geo = kink_geometry(v)
    U = brownian_grid(canon.model.Sigma, 512, seed=15)
    lp = limit_case2(v, U)
    Z = np.vstack([lp.Y, lp.X])
    pos = lp.Y >= 0
    if geo.beta_plus.shape[1]:
        assert np.abs(geo.beta_plus.T @ Z[:, pos]).max(initial=0.0) < 1e-8
        assert np.abs(geo.beta_minus.T @ Z[:, ~pos]).max(initial=0.0) < 1e-8


def test_limit_case2_structural_1b_loadings():
    # map the canonical limit back to the observables and compare with the
    # loadings obtained from evaluating the two trend projections directly
    gamma, theta, mu = 1.5, -0.5, 0.5
    m0 = build_example("infltarget_1b", delta=0.0, mu=mu)
    can0 = to_canonical(m0)
    v0 = vecm_decompose(can0)
    geo_s = kink_geometry(vecm_decompose(m0))
    U = brownian_grid(can0.model.Sigma, 1024, seed=16)
    lp = limit_case2(v0, U)
    stack = np.vstack([np.maximum(lp.Y, 0.0), np.minimum(lp.Y, 0.0), lp.X])
    zs = can0.P @ stack
    x_struct = zs[2]
    driver = geo_s.vartheta @ np.linalg.solve(can0.Q, U.W)
    phi1 = 1.0 - theta * gamma
    phi_mu = (1.0 - mu * theta * gamma) - theta * (1.0 - mu)
    load_minus = phi_mu * (gamma - 1.0) / (gamma * phi_mu - phi1)
    expected = np.where(driver >= 0, driver, load_minus * driver)
    assert np.abs(x_struct - expected).max() < 1e-10
    # the latent stance coordinate carries the h-rescaling through mu
    i_struct = zs[0] + zs[1]
    mu_struct = phi1 * (gamma - 1.0) / (gamma * phi_mu - phi1)
    expected_i = np.where(driver >= 0, driver, mu_struct * driver)
    assert np.abs(i_struct - expected_i).max() < 1e-10
