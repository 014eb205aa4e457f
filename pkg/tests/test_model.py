import math

import numpy as np
import pytest

from mngap import (
    ArgumentError,
    DomainError,
    ModelParams,
    RegimeError,
    check_cutoff,
    cutoff_max_ratio,
    eval_w,
    kernel,
    make_grid,
    upper_bound_V,
)


class TestModelParams:
    def test_basic_validation(self):
        with pytest.raises(ArgumentError):
            ModelParams(lam=-1.0, eps=1.0, big_lambda=100.0)
        with pytest.raises(ArgumentError):
            ModelParams(lam=3.0, eps=0.0, big_lambda=100.0)
        with pytest.raises(ArgumentError):
            ModelParams(lam=3.0, eps=2.0, big_lambda=1.0)

    def test_infinite_uv_cutoff_allowed(self):
        p = ModelParams(lam=0.5, eps=1.0, big_lambda=math.inf)
        assert not p.uv_finite
        assert p.ratio == 0.0

    def test_gauge_coupling_consistency(self):
        a = 4.0
        lam = 3.0 * a * a / (4.0 * math.pi**2)
        p = ModelParams(lam=lam, eps=1.0, big_lambda=100.0, gauge_coupling=a)
        assert p.gauge_coupling == a
        with pytest.raises(ArgumentError):
            ModelParams(lam=lam * (1 + 1e-9), eps=1.0, big_lambda=100.0,
                        gauge_coupling=a)

    def test_from_gauge_coupling(self):
        p = ModelParams.from_gauge_coupling(4.0, 1.0, 100.0)
        assert p.lam == pytest.approx(48.0 / (4.0 * math.pi**2), rel=1e-15)

    def test_mapping_round_trip(self):
        p = ModelParams(lam=3.0, eps=1.0, big_lambda=100.0)
        assert ModelParams.from_mapping(p.to_mapping()) == p

    def test_mapping_accepts_inf_literal(self):
        p = ModelParams.from_mapping({"lambda": "0.5", "eps": "1", "big_lambda": "inf"})
        assert p.big_lambda == math.inf

    def test_mapping_missing_key(self):
        with pytest.raises(ArgumentError, match="missing config key"):
            ModelParams.from_mapping({"lambda": 3.0, "eps": 1.0})


class TestEvalW:
    def test_at_eps(self, std_params):
        # sqrt(eps/(Lambda*eps)) = 1/sqrt(Lambda)
        expected = 4.0 * 1.0 / (3.0 * math.sqrt(100.0))
        assert eval_w(1.0, std_params) == pytest.approx(expected, rel=1e-15)

    def test_at_big_lambda(self, std_params):
        expected = 4.0 * 1.0**1.5 / (3.0 * 100.0)
        assert eval_w(100.0, std_params) == pytest.approx(expected, rel=1e-15)

    def test_hand_computed_values(self, std_params):
        assert eval_w(1.0, std_params) == pytest.approx(2.0 / 15.0, rel=1e-15)
        assert eval_w(100.0, std_params) == pytest.approx(1.0 / 75.0, rel=1e-15)

    def test_domain_error(self, std_params):
        with pytest.raises(DomainError):
            eval_w(0.5, std_params)
        with pytest.raises(DomainError):
            eval_w(101.0, std_params)

    def test_positive_and_strictly_decreasing(self, std_params, std_grid):
        w = eval_w(std_grid.nodes, std_params)
        assert np.all(w > 0)
        assert np.all(np.diff(w) < 0)

    def test_requires_finite_cutoff(self):
        p = ModelParams(lam=0.5, eps=1.0, big_lambda=math.inf)
        with pytest.raises(DomainError):
            eval_w(1.0, p)


class TestUpperBound:
    @pytest.mark.parametrize("lam,big,expected", [
        (3.0, 100.0, 7.5),
        (4.0, 1.5, 4.0 * math.sqrt(1.5) / 4.0),
        (2.5, 64.0, 5.0),
    ])
    def test_values(self, lam, big, expected):
        p = ModelParams(lam=lam, eps=min(1.0, big / 2), big_lambda=big)
        assert upper_bound_V(p) == pytest.approx(expected, rel=1e-15)

    def test_lam4_unit(self):
        # 4 * 1 / 4 with Lambda = 1
        p = ModelParams(lam=4.0, eps=0.5, big_lambda=1.0)
        assert upper_bound_V(p) == 1.0


class TestCutoff:
    def test_lambda_three(self):
        # second branch active: sqrt(137) ~ 11.70470
        assert cutoff_max_ratio(3.0) == pytest.approx(0.018498974740156799, rel=1e-12)

    def test_lambda_ten_first_branch(self):
        # second branch ~ 0.13512 > 1/16, so the constant branch wins
        assert cutoff_max_ratio(10.0) == 0.0625

    def test_vanishes_toward_two(self):
        assert cutoff_max_ratio(2.0 + 1e-9) < 1e-10

    @pytest.mark.parametrize("lam", [2.0, 1.5, 0.5])
    def test_regime_error(self, lam):
        with pytest.raises(RegimeError):
            cutoff_max_ratio(lam)

    def test_check_cutoff_true(self, std_params):
        rep = check_cutoff(std_params)
        assert rep.ok
        assert rep.margin == pytest.approx(0.008498974740156799, rel=1e-12)

    def test_check_cutoff_false(self):
        rep = check_cutoff(ModelParams(3.0, 1.0, 50.0))
        assert not rep.ok
        assert rep.margin < 0

    def test_check_cutoff_boundary_accepted(self):
        # 1/16 exactly; the condition is non-strict
        rep = check_cutoff(ModelParams(10.0, 1.0, 16.0))
        assert rep.ok
        assert rep.margin == 0.0

    def test_monotone_in_shrinking_ratio(self, rng):
        # shrinking eps/Lambda never flips an accepted pair to rejected
        for _ in range(50):
            lam = 2.0 + 8.0 * rng.uniform()
            r1 = cutoff_max_ratio(lam) * rng.uniform(0.1, 1.5)
            r2 = r1 * rng.uniform(0.1, 1.0)
            ok1 = check_cutoff(ModelParams(lam, 1.0, 1.0 / r1)).ok
            ok2 = check_cutoff(ModelParams(lam, 1.0, 1.0 / r2)).ok
            if ok1:
                assert ok2

    def test_max_ratio_nondecreasing_in_lambda(self):
        lams = np.linspace(2.0 + 1e-6, 20.0, 400)
        vals = [cutoff_max_ratio(l) for l in lams]
        assert np.all(np.diff(vals) >= 0)


class TestKernel:
    def test_equal_arguments(self):
        assert kernel(1.0, 1.0) == 0.5

    def test_unequal_arguments(self):
        assert kernel(1.0, 3.0) == pytest.approx(1.0 / 6.0, rel=1e-15)

    def test_symmetry(self, rng):
        x = rng.uniform(0.1, 100.0, 100)
        y = rng.uniform(0.1, 100.0, 100)
        assert np.array_equal(kernel(x, y), kernel(y, x))

    def test_closed_form_identity(self, rng):
        x = rng.uniform(1e-3, 1e3, 10_000)
        y = rng.uniform(1e-3, 1e3, 10_000)
        direct = 1.0 / (y + x + np.abs(y - x))
        assert np.allclose(kernel(x, y), direct, rtol=1e-15, atol=0.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            kernel(0.0, 1.0)
        with pytest.raises(DomainError):
            kernel(1.0, -2.0)


class TestMakeGrid:
    def test_log_three_nodes(self):
        g = make_grid(1.0, 100.0, 3, "log")
        assert np.allclose(g.nodes, [1.0, 10.0, 100.0], rtol=1e-15)

    def test_linear_three_nodes(self):
        g = make_grid(1.0, 3.0, 3, "linear")
        assert np.array_equal(g.nodes, [1.0, 2.0, 3.0])

    @pytest.mark.parametrize("kind", ["log", "linear"])
    def test_endpoints_exact_and_increasing(self, kind, rng):
        for _ in range(20):
            lo = float(rng.uniform(1e-3, 1.0))
            hi = lo * float(rng.uniform(2.0, 1e4))
            n = int(rng.integers(3, 500))
            g = make_grid(lo, hi, n, kind)
            assert g.nodes[0] == lo and g.nodes[-1] == hi
            assert np.all(np.diff(g.nodes) > 0)

    def test_errors(self):
        with pytest.raises(ArgumentError):
            make_grid(0.0, 1.0, 10)
        with pytest.raises(ArgumentError):
            make_grid(2.0, 1.0, 10)
        with pytest.raises(ArgumentError):
            make_grid(1.0, 2.0, 2)
        with pytest.raises(ArgumentError):
            make_grid(1.0, 2.0, 10, "cubic")
