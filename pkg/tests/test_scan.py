import numpy as np
import pytest

from mngap import (
    ArgumentError,
    ModelParams,
    SolveConfig,
    classify_regime,
    eval_w,
    refinement_study,
    sweep,
)


class TestClassifyRegime:
    @pytest.mark.parametrize("lam,ratio,expected", [
        (0.25, 0.01, "proven-symmetric"),
        (0.9, 0.3, "proven-symmetric"),
        (3.0, 0.01, "proven-broken"),
        (10.0, 0.0625, "proven-broken"),
        (1.0, 0.01, "unproven"),
        (1.5, 0.01, "unproven"),
        (2.5, 0.01, "unproven"),   # cutoff bound at lam=2.5 is ~0.0084
        (3.0, 0.05, "unproven"),
    ])
    def test_labels(self, lam, ratio, expected):
        assert classify_regime(lam, ratio) == expected


class TestSweep:
    @pytest.mark.parametrize("ratio", [0.01, 0.3])
    def test_symmetric_rows(self, ratio):
        cfg = SolveConfig(tol=1e-10, grid_n=512)
        recs = sweep([0.25, 0.5, 0.9], ratio, cfg)
        for rec in recs:
            assert rec.regime == "proven-symmetric"
            assert not rec.broken
            assert rec.fixed_norm <= cfg.tol
            assert rec.converged

    def test_broken_rows(self):
        cfg = SolveConfig(tol=1e-10, grid_n=512)
        recs = sweep([2.5, 3.0, 5.0], 0.01, cfg)
        by_lam = {r.lam: r for r in recs}
        assert by_lam[3.0].regime == "proven-broken"
        assert by_lam[5.0].regime == "proven-broken"
        # lam=2.5 misses the cutoff condition at this ratio
        assert by_lam[2.5].regime == "unproven"
        for rec in recs:
            assert rec.broken
            w_at_lambda = eval_w(1.0 / 0.01, ModelParams(rec.lam, 1.0, 1.0 / 0.01))
            assert rec.fixed_norm >= w_at_lambda

    def test_unproven_row_records_both_starts(self):
        cfg = SolveConfig(tol=1e-8, grid_n=256)
        (rec,) = sweep([1.5], 0.01, cfg)
        assert rec.regime == "unproven"
        assert "a_half_start_norm" in rec.extras
        assert "c_final_norm" in rec.extras

    def test_order_independence(self):
        cfg = SolveConfig(tol=1e-8, grid_n=256)
        lams = [0.5, 3.0, 1.5]
        forward = sweep(lams, 0.01, cfg)
        backward = sweep(lams[::-1], 0.01, cfg)
        for f, b in zip(forward, backward[::-1]):
            assert f.lam == b.lam
            assert f.fixed_norm == b.fixed_norm
            assert f.regime == b.regime

    def test_argument_errors(self):
        cfg = SolveConfig()
        with pytest.raises(ArgumentError):
            sweep([1.0], 1.5, cfg)
        with pytest.raises(ArgumentError):
            sweep([0.0, 1.0], 0.01, cfg)


class TestRefinementStudy:
    def test_second_order_convergence(self, std_params):
        cfg = SolveConfig(tol=1e-12)
        study = refinement_study(std_params, [512, 1024, 2048], cfg)
        assert all(study.converged)
        ratio = study.sup_diffs[0] / study.sup_diffs[1]
        assert 3.5 <= ratio <= 4.5
        assert all(1.7 <= o <= 2.3 for o in study.orders)

    def test_deterministic(self, std_params):
        cfg = SolveConfig(tol=1e-10, grid_n=256)
        a = refinement_study(std_params, [128, 256, 512], cfg)
        b = refinement_study(std_params, [128, 256, 512], cfg)
        assert a.sup_diffs == b.sup_diffs
        assert a.orders == b.orders

    def test_non_converged_resolution_flagged(self, std_params):
        cfg = SolveConfig(tol=1e-10, max_iter=2)
        study = refinement_study(std_params, [128, 256, 512], cfg)
        assert study.flagged()
        assert not all(study.converged)

    def test_argument_errors(self, std_params):
        cfg = SolveConfig()
        with pytest.raises(ArgumentError):
            refinement_study(std_params, [128, 256], cfg)
        with pytest.raises(ArgumentError):
            refinement_study(std_params, [128, 128, 256], cfg)
