import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from fokas_richards import oracle
from fokas_richards.errors import InstabilityError, InvalidParameterError
from fokas_richards.model import ColumnScenario, HopfColeConstants, w0_of_x
from fokas_richards.oracle import (
    EigenSeries,
    FdConfig,
    build_series,
    cn_solve,
    eigenvalues,
    particular_profile,
    sample_grid,
    series_solution,
    series_theta,
    truncation_study,
)
from fokas_richards.solver import w2_residue
from fokas_richards.spectral import IntegrandContext, delta

from .conftest import SOIL


@pytest.fixture(scope="module")
def series1(ctx1):
    return build_series(ctx1, 2000)


@pytest.fixture(scope="module")
def series2(ctx2):
    return build_series(ctx2, 2000)


class TestCrankNicolson:
    @pytest.mark.parametrize("kwargs", [dict(nx=100), dict(dt=0.0), dict(dt=-1.0)])
    def test_config_validation(self, kwargs):
        with pytest.raises(InvalidParameterError):
            FdConfig(**kwargs)

    def test_constant_solution(self):
        ctx = IntegrandContext(HopfColeConstants(0.0, 0.0, 0.0, 0.0), SOIL, 0.2)
        g = cn_solve(ctx, FdConfig(nx=101, dt=5.0), [0.0, 100.0, 3600.0])
        np.testing.assert_allclose(g.w, 1.0, rtol=1e-13)
        np.testing.assert_allclose(g.wx, 0.0, atol=1e-10)

    def test_ghost_node_row(self, ctx1):
        n, dx, D, C = 50, 0.005, SOIL.D, ctx1.constants.C
        K = oracle._operator(n, dx, D, C).toarray()
        w = np.random.default_rng(1).uniform(0.5, 1.5, n)
        ghost = w[-2] - 2 * dx * C * w[-1]
        # the eliminated ghost satisfies the centred Robin condition exactly
        assert abs((ghost - w[-2]) / (2 * dx) + C * w[-1]) <= 1e-12 * abs(w[-1])
        expected = D / dx**2 * (w[-2] - 2 * w[-1] + ghost)
        assert (K @ w)[-1] == pytest.approx(expected, rel=1e-12)

    def test_boundary_values(self, ctx1):
        g = cn_solve(ctx1, FdConfig(nx=201, dt=1.0), [0.0, 600.0, 1800.0])
        np.testing.assert_allclose(g.w[0], np.exp(ctx1.constants.B * g.ts), rtol=1e-15)
        np.testing.assert_allclose(g.wx[-1], -ctx1.constants.C * g.w[-1], rtol=1e-15)
        np.testing.assert_array_equal(g.w[:, 0], w0_of_x(g.xs, ctx1.constants))

    def test_second_order_in_space(self, ctx2):
        ts = [1800.0]
        runs = [cn_solve(ctx2, FdConfig(nx=n, dt=0.25), ts) for n in (201, 401, 801)]
        coarse = runs[0].xs
        at = [sample_grid(r, coarse, ctx2).w[:, 0] for r in runs]
        e1 = np.max(np.abs(at[0] - at[1]))
        e2 = np.max(np.abs(at[1] - at[2]))
        assert 3.5 <= e1 / e2 <= 4.5

    def test_off_step_output_times(self, ctx2):
        a = cn_solve(ctx2, FdConfig(nx=201, dt=0.5), [0.3, 601.7])
        assert a.ts.tolist() == [0.3, 601.7]
        assert np.all(np.isfinite(a.theta))

    def test_instability_signalled(self, ctx2, monkeypatch):
        monkeypatch.setattr(oracle, "f_of_t", lambda t, c: -1.0)
        with pytest.raises(InstabilityError):
            cn_solve(ctx2, FdConfig(nx=101, dt=1.0), [10.0])

    def test_example2_against_fokas(self, ctx2, solver2):
        xs = np.linspace(0, ctx2.L, 26)
        fd = sample_grid(cn_solve(ctx2, FdConfig(), [3600.0]), xs, ctx2)
        assert np.max(np.abs(fd.theta[:, 0] - solver2.theta(xs, 3600.0))) <= 1e-4


class TestEigenvalues:
    @pytest.mark.parametrize("which", ["ctx1", "ctx2"])
    def test_residual_and_brackets(self, which, request):
        ctx = request.getfixturevalue(which)
        eig = eigenvalues(ctx, 2000)
        L, C = ctx.L, ctx.constants.C
        n = np.arange(1, 2001)
        assert np.all(eig.mus > (2 * n - 1) * np.pi / (2 * L))
        assert np.all(eig.mus < (2 * n + 1) * np.pi / (2 * L))
        assert np.all(np.diff(eig.mus) > 0)
        res = np.abs(delta(eig.mus, -L, C))
        assert np.all(res <= 1e-10 * (1 + eig.mus))

    @pytest.mark.parametrize("which", ["ctx1", "ctx2"])
    def test_large_n_asymptote(self, which, request):
        ctx = request.getfixturevalue(which)
        L, C = ctx.L, ctx.constants.C
        mus = eigenvalues(ctx, 500).mus[49:]
        base = (2 * np.arange(50, 501) - 1) * np.pi / (2 * L)
        # tan(mu L) = -mu / C puts the roots just past the poles of tan
        np.testing.assert_allclose(mus, base + C / (L * base), rtol=0, atol=1e-4)

    def test_neumann_limit(self):
        ctx = IntegrandContext(HopfColeConstants(1.0, 0.0, 1e-12, 0.0), SOIL, 0.3)
        mus = eigenvalues(ctx, 10).mus
        np.testing.assert_allclose(mus, (2 * np.arange(1, 11) - 1) * np.pi / 0.6, rtol=1e-10)

    def test_needs_a_term(self, ctx1):
        with pytest.raises(ValueError):
            eigenvalues(ctx1, 0)

    def test_orthogonality(self, ctx1):
        mus = eigenvalues(ctx1, 20).mus
        for i in range(20):
            for j in range(i):
                v = sp_integrate.quad(lambda x: math.sin(mus[i] * x) * math.sin(mus[j] * x),
                                      0, ctx1.L, epsabs=1e-14, limit=200)[0]
                assert abs(v) <= 1e-10


class TestSeries:
    @pytest.mark.parametrize("which", ["ctx1", "ctx2"])
    def test_particular_profile_boundary_conditions(self, which, request):
        ctx = request.getfixturevalue(which)
        L, C = ctx.L, ctx.constants.C
        assert particular_profile(0.0, ctx) == pytest.approx(1.0, rel=1e-15)
        rob = particular_profile(L, ctx, derivative=True) + C * particular_profile(L, ctx)
        assert abs(rob) <= 1e-12 * abs(particular_profile(L, ctx)) + 1e-15

    def test_particular_is_residue(self, ctx1):
        x = np.linspace(0, ctx1.L, 31)
        np.testing.assert_allclose(
            particular_profile(x, ctx1) * math.exp(ctx1.constants.B * 500),
            w2_residue(x, 500.0, ctx1), rtol=1e-14,
        )

    def test_q_zero_limit(self, ctx2):
        c = ctx2.constants
        near = IntegrandContext(HopfColeConstants(c.A, SOIL.D * 1e-12, c.C, 1e-6), SOIL, ctx2.L)
        x = np.linspace(0, ctx2.L, 9)
        np.testing.assert_allclose(particular_profile(x, ctx2), particular_profile(x, near), rtol=1e-9)
        np.testing.assert_allclose(particular_profile(x, ctx2, True), particular_profile(x, near, True),
                                   rtol=1e-9)

    def test_initial_l2(self, ctx1, series1):
        x = np.linspace(0, ctx1.L, 20001)
        err = series_solution(ctx1, series1, x, 0.0) - w0_of_x(x, ctx1.constants)
        ref = w0_of_x(x, ctx1.constants)
        assert math.sqrt(sp_integrate.trapezoid(err**2, x)) <= 1e-3 * math.sqrt(sp_integrate.trapezoid(ref**2, x))

    def test_dirichlet_recovered(self, ctx1, series1):
        assert series_solution(ctx1, series1, 0.0, 300.0) == pytest.approx(math.exp(ctx1.constants.B * 300))

    def test_needs_coefficients(self, ctx1):
        bare = eigenvalues(ctx1, 3)
        assert isinstance(bare, EigenSeries)
        with pytest.raises(ValueError):
            series_solution(ctx1, bare, 0.1, 10.0)

    @pytest.mark.parametrize("which", ["1", "2"])
    def test_cn_and_series_agree(self, which, request):
        ctx = request.getfixturevalue("ctx" + which)
        series = request.getfixturevalue("series" + which)
        ts = [60.0, 900.0, 3600.0, 7200.0]
        fd = cn_solve(ctx, FdConfig(nx=2001, dt=0.5), ts)
        for j, t in enumerate(ts):
            ws = series_solution(ctx, series, fd.xs, t)
            assert np.max(np.abs(fd.w[:, j] - ws) / np.abs(ws)) <= 1e-5


class TestTruncationStudy:
    def test_rows_and_n_zero(self, ctx1, solver1, series1):
        xs = np.linspace(0, ctx1.L, 101)
        rows = truncation_study(ctx1, 2400.0, [0, 1, 5, 10], solver1, xs=xs, series=series1)
        assert [r[0] for r in rows] == [0, 1, 5, 10]
        errs = [r[1] for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        ref = solver1.theta(xs, 2400.0)
        only_p = series_theta(ctx1, series1, xs, 2400.0, n_terms=0)
        assert errs[0] == pytest.approx(np.max(np.abs(only_p - ref)), rel=1e-12)

    def test_late_time_floor(self, ctx1, solver1, series1):
        rows = truncation_study(ctx1, 28800.0, [10, 50, 2000], solver1, series=series1)
        assert all(err <= 1e-10 for _, err in rows)

    def test_rejects_t_zero(self, ctx1, solver1):
        with pytest.raises(ValueError):
            truncation_study(ctx1, 0.0, [10], solver1)
