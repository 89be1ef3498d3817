import logging
from types import SimpleNamespace

import numpy as np
import pytest
from sklearn.linear_model import Lasso

from pathlasso.admm import (AdmmState, PathResult, SolverOptions, extract, fit, fit_path,
                            lambda_grid, make_grid, precompute, sweep, update_alpha_beta,
                            update_d, update_duals, update_theta)
from pathlasso.core import (MediationDataset, PathwayCoefficients, PenaltySpec, objective,
                            ols_coefficients, standardize)
from pathlasso.simulate import default_design, gen_proposed
from conftest import random_dataset
from oracles import cvxpy_minimize, lasso_cd, soft

H = 1e-3  # central differences are exact for quadratics up to rounding


def lagrangian_smooth(theta, d, state, data, spec):
    """Theta/D-dependent part of the augmented Lagrangian, written out directly."""
    rho = state.rho
    w1 = spec.weights(data.k)
    e1 = data.m - np.outer(data.z, theta[1:])
    e2 = data.r - data.x @ d
    u = 0.5 * (np.sum(w1 * (e1 * e1).sum(0)) + spec.w2 * e2 @ e2)
    h1, h2, h3 = theta - state.alpha, d - state.beta, theta[0] - 1.0
    return (u + state.nu1 @ h1 + rho * h1 @ h1 + state.nu2 @ h2 + rho * h2 @ h2
            + state.nu3 * h3 + rho * h3 * h3)


def fd_grad(f, x):
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = H
        g[i] = (f(x + e) - f(x - e)) / (2 * H)
    return g


def random_state(k, rng, rho=1.0):
    s = AdmmState(*(rng.normal(size=k + 1) for _ in range(6)), float(rng.normal()), rho)
    return s


class TestPrecompute:
    def test_theta_system_k1(self):
        data = random_dataset(n=20, k=1, seed=2)
        pre = precompute(data, PenaltySpec(1.0), rho=1.0)
        np.testing.assert_allclose(pre.theta_diag, [4.0, data.z @ data.z + 2.0])

    def test_d_system_spd(self):
        data = random_dataset(n=5, k=8, seed=2)
        pre = precompute(data, PenaltySpec(1.0), rho=0.3)
        np.testing.assert_array_equal(pre.d_matrix, pre.d_matrix.T)
        assert np.linalg.eigvalsh(pre.d_matrix).min() > 0

    def test_deterministic(self, small_data):
        p1 = precompute(small_data, PenaltySpec(1.0))
        p2 = precompute(small_data, PenaltySpec(1.0))
        for f in ("ztx_omega", "theta_diag", "d_matrix", "w2xtr", "d_inverse"):
            np.testing.assert_array_equal(getattr(p1, f), getattr(p2, f))


class TestBlockUpdates:
    @pytest.mark.parametrize("seed,n,k", [(0, 30, 3), (1, 8, 10), (2, 25, 6)])
    def test_theta_minimizes(self, seed, n, k):
        rng = np.random.default_rng(seed)
        data = random_dataset(n=n, k=k, seed=seed)
        spec = PenaltySpec(0.7, w1=rng.uniform(0.5, 2, k), w2=1.5)
        st = random_state(k, rng, rho=0.8)
        pre = precompute(data, spec, st.rho)
        theta = update_theta(st, pre)
        g = fd_grad(lambda t: lagrangian_smooth(t, st.d, st, data, spec), theta)
        assert np.abs(g).max() < 1e-8

    @pytest.mark.parametrize("seed,n,k", [(0, 30, 3), (1, 8, 10), (2, 25, 6)])
    def test_d_minimizes(self, seed, n, k):
        rng = np.random.default_rng(seed)
        data = random_dataset(n=n, k=k, seed=seed)
        spec = PenaltySpec(0.7, w2=1.5)
        st = random_state(k, rng, rho=0.8)
        pre = precompute(data, spec, st.rho)
        d = update_d(st, pre)
        g = fd_grad(lambda v: lagrangian_smooth(st.theta, v, st, data, spec), d)
        assert np.abs(g).max() < 1e-8

    def test_zero_treatment(self):
        rng = np.random.default_rng(4)
        data = SimpleNamespace(z=np.zeros(6), m=rng.normal(size=(6, 3)), r=rng.normal(size=6),
                               k=3, x=np.column_stack([np.zeros(6), rng.normal(size=(6, 3))]))
        st = AdmmState.cold(3)
        st.alpha = np.array([1.0, 0.3, -0.2, 0.5])
        theta = update_theta(st, precompute(data, PenaltySpec(1.0)))
        np.testing.assert_allclose(theta, st.alpha, atol=1e-15)

    def test_zero_design_d(self):
        data = SimpleNamespace(z=np.zeros(6), m=np.zeros((6, 2)), r=np.ones(6), k=2,
                               x=np.zeros((6, 3)))
        st = AdmmState.cold(2, rho=0.5)
        st.beta = np.array([0.2, -1.0, 3.0])
        st.nu2 = np.array([0.1, 0.0, -0.3])
        d = update_d(st, precompute(data, PenaltySpec(1.0), 0.5))
        np.testing.assert_allclose(d, st.beta - st.nu2 / (2 * 0.5), atol=1e-15)

    def test_theta_idempotent(self, small_data):
        rng = np.random.default_rng(1)
        st = random_state(5, rng)
        pre = precompute(small_data, PenaltySpec(1.0))
        np.testing.assert_array_equal(update_theta(st, pre), update_theta(st, pre))


class TestPairUpdate:
    def test_lambda_zero_soft_threshold(self):
        rng = np.random.default_rng(0)
        st = random_state(4, rng)
        spec = PenaltySpec(0.0, omega=0.3)
        a, b = update_alpha_beta(st, spec)
        mu1 = 2 * st.theta + st.nu1
        mu2 = 2 * st.d + st.nu2
        om = np.array([0.0, 0.3, 0.3, 0.3, 0.3])
        np.testing.assert_allclose(a, soft(mu1, om) / 2, atol=1e-15)
        np.testing.assert_allclose(b, soft(mu2, om) / 2, atol=1e-15)

    def test_zero_inputs(self):
        st = AdmmState.cold(3)
        st.theta[:] = 0.0
        a, b = update_alpha_beta(st, PenaltySpec(1.0, omega=0.5))
        assert not a.any() and not b.any()

    @pytest.mark.parametrize("c_l1", [True, False])
    def test_hand_example(self, c_l1):
        st = AdmmState.cold(1)
        st.theta = np.array([1.0, 0.75])
        st.d = np.array([0.0, 0.75])
        a, b = update_alpha_beta(st, PenaltySpec(1.0, phi=2.0, omega=1.0), c_l1)
        assert a[1] == pytest.approx(1 / 14, abs=1e-15)
        assert b[1] == pytest.approx(1 / 14, abs=1e-15)


class TestDuals:
    def test_feasible_unchanged(self):
        st = AdmmState.cold(3)
        st2 = update_duals(st)
        np.testing.assert_array_equal(st2.nu1, st.nu1)
        np.testing.assert_array_equal(st2.nu2, st.nu2)
        assert st2.nu3 == st.nu3

    def test_step(self):
        st = AdmmState.cold(1)
        st.theta = np.array([1.1, 0.0])
        st.alpha = np.array([1.0, 0.0])
        st2 = update_duals(st)
        np.testing.assert_allclose(st2.nu1, [0.2, 0.0])
        assert st2.nu3 == pytest.approx(0.2)

    def test_fixed_point(self):
        st = AdmmState.cold(2)
        for _ in range(3):
            st = update_duals(st)
        np.testing.assert_array_equal(st.nu1, 0)


class TestFit:
    def test_ols_limit(self):
        data = standardize(random_dataset(n=60, k=4, seed=3))
        res = fit(data, PenaltySpec(0.0, omega=0.0))
        ref = ols_coefficients(data)
        assert res.converged
        np.testing.assert_allclose(res.coefs.a, ref.a, atol=1e-5)
        np.testing.assert_allclose(res.coefs.b, ref.b, atol=1e-5)
        assert res.coefs.c == pytest.approx(ref.c, abs=1e-5)

    def test_huge_lambda(self, sim50):
        _, data, _ = sim50
        res = fit(data, PenaltySpec(1e6, phi=2.0))
        assert np.abs(res.coefs.ab).max() < 1e-8

    def test_exact_fit(self):
        rng = np.random.default_rng(6)
        z = rng.standard_normal(30)
        a, b = rng.normal(size=3), rng.normal(size=3)
        m = np.outer(z, a)
        r = 0.4 * z + m @ b
        res = fit(MediationDataset(z, m, r), PenaltySpec(0.0))
        assert res.converged
        assert res.objective < 1e-12
        assert res.state.primal_residual() <= 1e-6

    def test_feasible_and_stationary(self, sim50):
        _, data, _ = sim50
        opts = SolverOptions()
        res = fit(data, PenaltySpec(0.5, omega=0.05), opts)
        assert res.converged
        assert res.state.primal_residual() <= opts.tol_primal
        pre = precompute(data, res.spec, opts.rho)
        nxt = sweep(res.state, pre)
        assert nxt.max_change(res.state) < opts.tol_change

    def test_kernel_matches_reference(self, small_data):
        spec = PenaltySpec(0.8, omega=0.1)
        pre = precompute(small_data, spec)
        st = AdmmState.cold(small_data.k)
        for _ in range(25):
            st = sweep(st, pre)
        res = fit(small_data, spec, SolverOptions(max_iter=25), pre=pre)
        np.testing.assert_allclose(res.state.alpha, st.alpha, atol=1e-12)
        np.testing.assert_allclose(res.state.nu2, st.nu2, atol=1e-12)

    @pytest.mark.parametrize("lam,omega", [(0.01, 0.0), (0.3, 0.1), (1.5, 0.0), (5.0, 1.0)])
    def test_no_worse_than_zero_or_ols(self, lam, omega):
        data = standardize(random_dataset(n=40, k=5, seed=7))
        spec = PenaltySpec(lam, omega=omega)
        res = fit(data, spec)
        assert res.converged
        f0 = objective(data, PathwayCoefficients.zeros(5), spec)
        fo = objective(data, ols_coefficients(data), spec)
        assert res.objective <= min(f0, fo) + 1e-8

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_convex_solver(self, seed):
        rng = np.random.default_rng(seed)
        design = default_design(n=30, k=3, seed=50 + seed, n_true=2)
        data = standardize(gen_proposed(design, 0)[0])
        lam, om = rng.uniform(0.05, 1.9), rng.uniform(0, 1)
        res = fit(data, PenaltySpec(lam, omega=om))
        _, best = cvxpy_minimize(data.z, data.m, data.r, lam, 2.0, om)
        assert abs(res.objective - best) <= 1e-6 * abs(best)

    def test_deterministic(self, sim50):
        _, data, _ = sim50
        r1 = fit(data, PenaltySpec(0.2, omega=0.02))
        r2 = fit(data, PenaltySpec(0.2, omega=0.02))
        np.testing.assert_array_equal(r1.state.alpha, r2.state.alpha)
        np.testing.assert_array_equal(r1.state.nu1, r2.state.nu1)
        assert r1.iterations == r2.iterations and r1.objective == r2.objective

    def test_nonconvergence_flagged(self, small_data, caplog):
        with caplog.at_level(logging.WARNING):
            res = fit(small_data, PenaltySpec(0.5), SolverOptions(max_iter=3))
        assert not res.converged and res.iterations == 3
        assert "did not converge" in caplog.text

    def test_product_form_agrees_where_it_converges(self, small_data):
        spec = PenaltySpec(0.4, omega=0.05)
        r1 = fit(small_data, spec, SolverOptions(c_penalty="l1"))
        r2 = fit(small_data, spec, SolverOptions(c_penalty="product", max_iter=50000))
        assert r2.converged
        np.testing.assert_allclose(r1.coefs.ab, r2.coefs.ab, atol=1e-6)

    def test_coefficients_from_prox_block(self, small_data):
        res = fit(small_data, PenaltySpec(0.3))
        c = extract(res.state)
        np.testing.assert_array_equal(c.a, res.state.alpha[1:])
        np.testing.assert_array_equal(c.b, res.state.beta[1:])
        assert c.c == res.state.beta[0]

    @pytest.mark.parametrize("kw", [dict(max_iter=0), dict(rho=0.0), dict(tol_primal=-1),
                                    dict(c_penalty="ridge")])
    def test_invalid_options(self, kw):
        with pytest.raises(ValueError):
            SolverOptions(**kw)


class TestLassoReduction:
    @pytest.mark.parametrize("seed", range(3))
    def test_mediator_and_outcome_equations(self, seed):
        rng = np.random.default_rng(seed)
        data = standardize(random_dataset(n=40, k=6, seed=20 + seed))
        om = rng.uniform(0.5, 4)
        res = fit(data, PenaltySpec(0.0, omega=om), SolverOptions(max_iter=50000))
        z = data.z
        np.testing.assert_allclose(res.coefs.a, soft(z @ data.m, om) / (z @ z), atol=1e-6)
        w = lasso_cd(data.x, data.r, om, unpenalized=[0])
        np.testing.assert_allclose(res.coefs.b, w[1:], atol=1e-4)
        assert res.coefs.c == pytest.approx(w[0], abs=1e-4)

    def test_outcome_against_sklearn(self):
        data = standardize(random_dataset(n=50, k=8, seed=31))
        om = 2.0
        res = fit(data, PenaltySpec(0.0, omega=om), SolverOptions(max_iter=50000))
        # profile out the unpenalized direct effect, then a plain lasso remains
        z = data.z
        proj = np.eye(data.n) - np.outer(z, z) / (z @ z)
        sk = Lasso(alpha=om / data.n, fit_intercept=False, tol=1e-12, max_iter=100000)
        sk.fit(proj @ data.m, proj @ data.r)
        np.testing.assert_allclose(res.coefs.b, sk.coef_, atol=1e-4)


class TestPath:
    def test_single_spec_is_cold_fit(self, small_data):
        spec = PenaltySpec(0.5, omega=0.1)
        p = fit_path(small_data, [spec])
        r = fit(small_data, spec)
        np.testing.assert_array_equal(p.fits[0].state.alpha, r.state.alpha)

    def test_grid(self):
        g = lambda_grid()
        assert g.size == 50 and g[0] == pytest.approx(1e2) and g[-1] == pytest.approx(1e-6)
        assert np.all(np.diff(g) < 0)

    @pytest.mark.parametrize("rule,factor", [("zero", 0.0), ("0.1lambda", 0.1), ("lambda", 1.0)])
    def test_omega_rules(self, rule, factor):
        specs = make_grid([3.0, 1.0], 2.0, rule)
        assert [s.omega for s in specs] == pytest.approx([3.0 * factor, 1.0 * factor])

    def test_fixed_rule_and_unknown(self):
        assert make_grid([1.0], omega_rule="fixed", omega=0.7)[0].omega == 0.7
        with pytest.raises(ValueError):
            make_grid([1.0], omega_rule="half")

    def test_order_enforced(self, small_data):
        with pytest.raises(ValueError):
            fit_path(small_data, make_grid([0.1, 1.0]))
        with pytest.raises(ValueError):
            fit_path(small_data, [PenaltySpec(0.0, omega=0.1), PenaltySpec(0.0, omega=1.0)])

    def test_support_mostly_monotone(self, sim50):
        _, data, _ = sim50
        p = fit_path(data, make_grid(lambda_grid(30), 2.0, "0.1lambda"))
        s = np.array(p.support_sizes)
        assert np.mean(np.diff(s) >= 0) >= 0.95  # grid runs from large to small lambda

    def test_largest_lambda_sparse(self, sim50):
        _, data, _ = sim50
        p = fit_path(data, make_grid(lambda_grid(10), 2.0, "lambda"))
        assert p.support_sizes[0] == 0

    def test_path_result_fields(self, small_data):
        p = fit_path(small_data, make_grid([1.0, 0.1]))
        assert isinstance(p, PathResult) and len(p) == 2
        assert p.l1_norms[1] == pytest.approx(np.abs(p.fits[1].coefs.ab).sum())
        assert p.ab.shape == (2, 5)
