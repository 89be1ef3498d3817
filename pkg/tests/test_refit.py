import numpy as np
import pytest
from hypothesis import given, strategies as st

from pathlasso.admm import fit
from pathlasso.core import MediationDataset, PenaltySpec, loss, standardize, total_effect
from pathlasso.refit import bootstrap_ci, proportion_mediated, refit_selected

from conftest import random_dataset


def noiseless(n=30, k=4, seed=0):
    """Zero-noise data: no outcome error and M_j - Z a_j vanishing wherever Z != 0.

    Mediator variation lives only on the rows with Z = 0, which keeps (Z, M)
    full rank while every no-intercept regression of M on Z returns a exactly,
    on the full sample and on any resample containing a row with Z != 0.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n)
    z[: n // 2] = 0.0
    a = np.array([1.5, -0.5, 0.0, 0.0])[:k]
    b = np.array([2.0, 1.0, 0.0, 0.0])[:k]
    e = rng.standard_normal((n, k))
    e[n // 2:] = 0.0
    m = np.outer(z, a) + e
    r = 0.7 * z + m @ b
    return MediationDataset(z, m, r), a, b


class TestRefit:
    def test_exact_recovery(self):
        data, a, b = noiseless()
        c = refit_selected(data, [0, 1], intercept=False)
        np.testing.assert_allclose(c.a[:2], a[:2], atol=1e-12)
        np.testing.assert_allclose(c.b[:2], b[:2], atol=1e-12)
        assert c.c == pytest.approx(0.7, abs=1e-12)
        assert np.all(c.a[2:] == 0) and np.all(c.b[2:] == 0)

    def test_empty_selection_gives_total_effect(self, small_data):
        c = refit_selected(small_data, [])
        assert c.c == pytest.approx(total_effect(small_data), rel=1e-12)
        assert np.all(c.ab == 0)

    def test_normal_equations(self):
        data = random_dataset(n=40, k=5, seed=3)
        sel = [1, 3]
        c = refit_selected(data, sel)
        one = np.ones(data.n)
        xr = np.column_stack([one, data.z, data.m[:, sel]])
        coef = np.linalg.solve(xr.T @ xr, xr.T @ data.r)
        np.testing.assert_allclose([c.c, *c.b[sel]], coef[1:], rtol=1e-10)
        xm = np.column_stack([one, data.z])
        for j in sel:
            np.testing.assert_allclose(c.a[j], np.linalg.solve(xm.T @ xm, xm.T @ data.m[:, j])[1],
                                       rtol=1e-10)

    def test_too_many(self):
        data = random_dataset(n=6, k=5)
        with pytest.raises(ValueError):
            refit_selected(data, range(5))

    def test_bad_index(self, small_data):
        with pytest.raises(ValueError):
            refit_selected(small_data, [99])

    def test_not_worse_than_penalized(self, sim50):
        _, data, _ = sim50
        res = fit(data, PenaltySpec(10.0, phi=2.0, omega=10.0))
        sel = np.flatnonzero((res.coefs.a != 0) | (res.coefs.b != 0))
        assert 0 < sel.size <= data.n - 2
        assert loss(data, refit_selected(data, sel)) <= loss(data, res.coefs) + 1e-9


class TestBootstrap:
    def test_zero_noise_width(self):
        data, _, _ = noiseless()
        rep = bootstrap_ci(data, [0, 1], resamples=100, seed=1, intercept=False)
        for row in rep.rows:
            assert row.ci_high - row.ci_low < 1e-10
            assert row.significant and row.covers_estimate
        np.testing.assert_allclose([r.ab_refit for r in rep.rows], [3.0, -0.5], atol=1e-12)

    def test_deterministic(self, small_data):
        r1 = bootstrap_ci(small_data, [0, 2], resamples=50, seed=7)
        r2 = bootstrap_ci(small_data, [0, 2], resamples=50, seed=7)
        r3 = bootstrap_ci(small_data, [0, 2], resamples=50, seed=8)
        assert r1.rows == r2.rows
        assert r1.rows != r3.rows

    def test_nested_levels(self, small_data):
        r90 = bootstrap_ci(small_data, [0, 1, 4], resamples=200, level=0.90, seed=2)
        r95 = bootstrap_ci(small_data, [0, 1, 4], resamples=200, level=0.95, seed=2)
        for a, b in zip(r90.rows, r95.rows):
            assert b.ci_low <= a.ci_low <= a.ci_high <= b.ci_high

    def test_empty_selection(self, small_data):
        rep = bootstrap_ci(small_data, [], resamples=10)
        assert rep.rows == [] and rep.selected == []
        assert rep.total_effect == pytest.approx(total_effect(small_data))

    @pytest.mark.parametrize("kw", [dict(resamples=0), dict(level=1.0), dict(level=0.0)])
    def test_invalid(self, small_data, kw):
        with pytest.raises(ValueError):
            bootstrap_ci(small_data, [0], **kw)

    def test_too_many_degenerate(self):
        # one informative row: most resamples miss it and Z becomes constant
        z = np.zeros(8)
        z[0] = 1.0
        rng = np.random.default_rng(0)
        data = MediationDataset(z, rng.standard_normal((8, 2)), rng.standard_normal(8))
        with pytest.raises(ValueError, match="degenerate"):
            bootstrap_ci(data, [0], resamples=50)

    def test_null_coverage(self):
        rng = np.random.default_rng(123)
        hits = 0
        for rep in range(200):
            z = rng.standard_normal(100)
            m = np.outer(z, [1.0, 0.5]) + rng.standard_normal((100, 2))
            r = 0.5 * z + m[:, 1] + rng.standard_normal(100)   # pathway 0 has b = 0
            hits += bootstrap_ci(MediationDataset(z, m, r), [0, 1], resamples=500,
                                 seed=rep).rows[0].significant
        assert 0.02 <= hits / 200 <= 0.10


class TestProportion:
    def test_examples(self):
        assert proportion_mediated(-0.063, -0.19873) == pytest.approx(0.31701, abs=1e-5)
        assert proportion_mediated(0.5, 1.0) == 0.5
        assert proportion_mediated(-0.5, 1.0) == -0.5
        np.testing.assert_allclose(proportion_mediated([1.0, -2.0], 4.0), [0.25, -0.5])
        with pytest.raises(ValueError):
            proportion_mediated(0.1, 0.0)

    @given(st.floats(0.1, 10), st.floats(0.1, 10))
    def test_scale_invariance(self, sz, sr):
        data = random_dataset(n=30, k=4, seed=5)
        scaled = MediationDataset(sz * data.z, data.m, sr * data.r)
        p1 = bootstrap_ci(data, [0, 1], resamples=5, seed=0)
        p2 = bootstrap_ci(scaled, [0, 1], resamples=5, seed=0)
        for a, b in zip(p1.rows, p2.rows):
            assert b.proportion_mediated == pytest.approx(a.proportion_mediated, rel=1e-8)

    def test_decomposition(self):
        # in-sample OLS identity: total = c + sum_j a_j b_j over the selection
        for data in (random_dataset(n=30, k=4, seed=6), standardize(random_dataset(seed=7))):
            rep = bootstrap_ci(data, [0, 1, 3], resamples=5)
            direct = rep.coefs.c / rep.total_effect
            assert sum(r.proportion_mediated for r in rep.rows) + direct == pytest.approx(1.0)
