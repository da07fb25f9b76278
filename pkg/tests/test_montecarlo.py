import numpy as np
import pytest
import scipy.stats

import helpers
from cksvar import (
    CaseError,
    InnovationSpec,
    McSpec,
    brownian_grid,
    limit_case1,
    residual_check,
    run_mc,
    simulate,
    simulate_batch,
    to_canonical,
    vecm_decompose,
)
from cksvar.examples import build_example
from cksvar.vecm import Case
from cksvar.montecarlo import KS_THRESHOLDS


def small_spec(**kw):
    base = dict(
        model=build_example("univariate_tobit"),
        n_list=(400, 1600),
        reps=150,
        functionals=("terminal_value", "path_sup"),
        seed=3,
        limit_reps=300,
        grid_m=256,
    )
    base.update(kw)
    return McSpec(**base)


def test_mcspec_validation():
    with pytest.raises(ValueError):
        small_spec(n_list=(400, 400))
    with pytest.raises(ValueError):
        small_spec(reps=50)
    with pytest.raises(ValueError):
        small_spec(functionals=("nope",))


def test_run_mc_reproducible():
    a = run_mc(small_spec())
    b = run_mc(small_spec())
    for n in a.ks:
        for name in a.ks[n]:
            assert a.ks[n][name] == b.ks[n][name]
    assert a.growth == b.growth


def test_run_mc_case_expectation_enforced():
    with pytest.raises(CaseError):
        run_mc(small_spec(expected_case=Case.KINKED))


def test_run_mc_structure_and_classification():
    rep = run_mc(small_spec(expected_case=Case.REGULATED))
    assert rep.classification.case is Case.REGULATED
    for n in rep.ks:
        for name, entry in rep.ks[n].items():
            assert 0.0 <= entry["ks"] <= 1.0
    assert rep.growth["passed"]
    assert rep.thresholds == KS_THRESHOLDS


def test_run_mc_regulated_tobit_passes_at_threshold_scale():
    # sample sizes large enough that the two-sample noise floor sits well
    # below the pass thresholds
    rep = run_mc(
        small_spec(
            expected_case=Case.REGULATED,
            n_list=(12800,),
            reps=1000,
            limit_reps=4000,
            grid_m=512,
            seed=5,
        )
    )
    for n in rep.ks:
        for name, entry in rep.ks[n].items():
            assert entry["passed"], (n, name, entry)
    assert rep.all_passed


def test_run_mc_degenerate_negative_part_reported_as_median():
    rep = run_mc(small_spec(functionals=("terminal_value", "sup_abs_y_minus"), n_list=(1600,)))
    entry = rep.ks[1600]["sup_abs_y_minus"]
    assert entry.get("degenerate_limit")
    assert entry["median"] < 0.25  # loose at this horizon; tight version at scale


def test_limit_sampler_self_consistency():
    # split-sample two-sample KS between halves of the limit sampler's output
    # stays below the one percent critical value almost always
    v = vecm_decompose(build_example("univariate_tobit"))
    reps, m = 120, 256
    crit = 1.63 * np.sqrt(2.0 / (reps // 2))  # asymptotic 1% two-sample threshold
    ok = 0
    runs = 40
    draws = np.empty(reps)
    for run in range(runs):
        for j in range(reps):
            U = brownian_grid([[1.0]], m, seed=[run, j])
            draws[j] = limit_case1(v, U).Y[-1]
        stat = scipy.stats.ks_2samp(draws[::2], draws[1::2]).statistic
        ok += stat < crit
    assert ok >= int(0.95 * runs)


def test_linear_var_terminal_matches_gaussian_closed_form():
    rng = np.random.default_rng(46)
    canon, alpha, beta = helpers.random_linear_coint(rng, p=2, r=1, k=1)
    v = vecm_decompose(canon)
    from cksvar.vecm import _pi_scale, factorize_pi

    fact = factorize_pi(v.Pi_plus_mat, 1, ref=_pi_scale(v))
    M = fact.alpha_perp.T @ v.Gamma_at_1("+") @ fact.beta_perp
    P = fact.beta_perp @ np.linalg.solve(M, fact.alpha_perp.T)
    long_run = P @ canon.model.Sigma @ P.T
    n, reps = 8000, 1000
    y, x = simulate_batch(canon, n, reps, InnovationSpec(Sigma=canon.model.Sigma, seed=21))
    term = y[:, -1] / np.sqrt(n)
    sd = np.sqrt(long_run[0, 0])
    ks = scipy.stats.kstest(term, lambda t: scipy.stats.norm.cdf(t / sd)).statistic
    assert ks < 0.05


def test_occupation_fraction_qualitative():
    # the regulated fixture spends little time below zero; the kinked one
    # keeps wandering across
    n = 10**5
    m1 = build_example("infltarget_1b", delta=-0.2, mu=0.5)
    p1 = simulate(to_canonical(m1), n, InnovationSpec(Sigma=to_canonical(m1).model.Sigma, seed=22))
    frac1 = (p1.y < 0).mean()
    assert frac1 < 0.10
    m2 = build_example("infltarget_1b", delta=0.0, mu=0.5)
    p2 = simulate(to_canonical(m2), n, InnovationSpec(Sigma=to_canonical(m2).model.Sigma, seed=22))
    frac2 = (p2.y < 0).mean()
    assert frac2 > 0.10


def test_weakly_dependent_innovations_reach_the_same_limit():
    # moving-average innovations preserve the diffusive limit with the
    # long-run variance replacing the one-step variance
    m = build_example("univariate_tobit")
    spec = InnovationSpec(kind="ma_infinity_truncated", Sigma=m.Sigma, ma_weights=(1.0, 0.5), seed=31)
    n, reps = 10000, 800
    chunk = 200
    term = np.empty(reps)
    from cksvar.simulate import _simulate_batch_core, gen_innovations

    for off in range(0, reps, chunk):
        u = np.stack([gen_innovations(spec, n, rep=r) for r in range(off, off + chunk)])
        y, _ = _simulate_batch_core(m, u, np.zeros((chunk, 1)), np.zeros((chunk, 1, 0)))
        term[off : off + chunk] = np.maximum(y[:, -1], 0.0) / np.sqrt(n)
    sd = np.sqrt(spec.long_run_variance()[0, 0])
    ks = scipy.stats.kstest(term, lambda x: 2.0 * scipy.stats.norm.cdf(x / sd) - 1.0).statistic
    assert ks < 0.05


# ---------------------------------------------------------------------------
# residual diagnostics
# ---------------------------------------------------------------------------


def test_residual_check_case1():
    canon = to_canonical(build_example("infltarget_1b", delta=-0.2, mu=0.5))
    v = vecm_decompose(canon)
    path = simulate(canon, 20000, InnovationSpec(Sigma=canon.model.Sigma, seed=23))
    rep = residual_check(v, path)
    assert rep.entries["upper_regime_residual"]["istar0"]
    assert rep.entries["global_residual"]["istar0"]
    assert rep.entries["lower_regime_level"]["istar0"]


def test_residual_check_case2_contrast():
    canon = to_canonical(build_example("infltarget_1b", delta=0.0, mu=0.5))
    v = vecm_decompose(canon)
    path = simulate(canon, 20000, InnovationSpec(Sigma=canon.model.Sigma, seed=24))
    rep = residual_check(v, path)
    assert rep.entries["upper_regime_residual"]["istar0"]
    assert rep.entries["lower_regime_residual"]["istar0"]
    # the canonical form of this fixture is linear, so the mismatched
    # residual cannot be distinguished; use a genuinely kinked model instead
    rng = np.random.default_rng(47)
    canon2 = helpers.random_case2_canonical(rng, p=2, r=1, k=1)
    from cksvar import kink_geometry

    geo = kink_geometry(vecm_decompose(canon2))
    gap = np.abs(geo.beta_plus - geo.beta_minus).max()
    assert gap > 0.05  # regimes genuinely differ
    path2 = simulate(canon2, 20000, InnovationSpec(Sigma=canon2.model.Sigma, seed=25))
    rep2 = residual_check(vecm_decompose(canon2), path2)
    assert rep2.entries["upper_regime_residual"]["istar0"]
    assert rep2.entries["lower_regime_residual"]["istar0"]
    assert not rep2.entries["mismatched_residual"]["istar0"]


def test_residual_check_linear_both_pass():
    rng = np.random.default_rng(48)
    canon, _, _ = helpers.random_linear_coint(rng, p=2, r=1, k=1)
    path = simulate(canon, 20000, InnovationSpec(Sigma=canon.model.Sigma, seed=26))
    rep = residual_check(vecm_decompose(canon), path)
    assert rep.entries["upper_regime_residual"]["istar0"]
    assert rep.entries["lower_regime_residual"]["istar0"]
    assert rep.entries["mismatched_residual"]["istar0"]
