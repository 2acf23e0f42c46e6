"""Monte Carlo harness: configs, aggregation, reference curves, file outputs."""

import json
import math

import numpy as np
import pytest

from quantest.adaptive import Mode, make_static_quantizer
from quantest.design import DesignSpec
from quantest.distributions import (
    Distribution,
    Family,
    FamilyTag,
    ParamKind,
    cauchy,
    gaussian,
)
from quantest.errors import DomainError
from quantest.quantizer import Quantizer, quantized_fi
from quantest.sim import (
    SimConfig,
    SimResult,
    default_log_grid,
    reproduce_table,
    run_simulation,
)

LOC = ParamKind.LOCATION
SCA = ParamKind.SCALE


def config(**kw):
    base = dict(dist=gaussian(), mode=Mode.LOCATION_ONLY, n_bits=4,
                realizations=40, block_length=400, seed=5)
    base.update(kw)
    return SimConfig(**base)


class TestDefaultLogGrid:
    def test_covers_the_block_with_log_spacing(self):
        grid = default_log_grid(50_000)
        assert grid[0] == 1 and grid[-1] == 50_000
        assert all(b > a for a, b in zip(grid, grid[1:]))
        assert len(grid) <= math.ceil(math.log10(50_000) * 32) + 2

    def test_short_blocks(self):
        assert default_log_grid(1) == (1,)
        assert default_log_grid(2) == (1, 2)

    def test_rejects_empty_block(self):
        with pytest.raises(DomainError):
            default_log_grid(0)


class TestSimConfig:
    def test_defaults_resolve(self):
        cfg = config()
        assert cfg.resolved_log_grid == default_log_grid(400)
        assert cfg.threads == 1 and cfg.realization_offset == 0

    @pytest.mark.parametrize("bad", [
        dict(dist="gaussian"),
        dict(mode="location"),
        dict(n_bits=0),
        dict(realizations=0),
        dict(block_length=0),
        dict(initial_mu_hat=math.inf),
        dict(initial_delta_hat=0.0),
        dict(seed=-1),
        dict(seed=2**64),
        dict(log_grid=()),
        dict(log_grid=(5, 5)),
        dict(log_grid=(0, 10)),
        dict(log_grid=(1, 401)),
        dict(warm_start_switch=0),
        dict(warm_start_switch=401),
        dict(threads=0),
        dict(realization_offset=-1),
    ])
    def test_rejects_bad_fields(self, bad):
        with pytest.raises(DomainError):
            config(**bad)

    def test_explicit_grid_is_kept(self):
        cfg = config(log_grid=[1, 10, 100, 400])
        assert cfg.resolved_log_grid == (1, 10, 100, 400)

    def test_config_dict_round_trip(self):
        cfg = config(dist=cauchy(0.5, 2.0), mode=Mode.JOINT, n_bits=5,
                     initial_mu_hat=1.0, initial_delta_hat=2.0,
                     log_grid=(1, 7, 400), warm_start_switch=10,
                     threads=3, realization_offset=17)
        assert SimConfig.from_config_dict(cfg.to_config_dict()) == cfg

    def test_config_dict_defaults(self):
        cfg = SimConfig.from_config_dict({
            "family": "ggd", "beta": 2.0, "mode": "location",
            "bits": 4, "realizations": 10, "block": 100})
        assert cfg.dist == gaussian() and cfg.seed == 0
        assert cfg.initial_mu_hat == 0.0 and cfg.initial_delta_hat == 1.0

    def test_config_dict_rejects_unknown_and_missing_keys(self):
        with pytest.raises(DomainError):
            SimConfig.from_config_dict({"family": "ggd", "beta": 2.0,
                                        "mode": "location", "bits": 4,
                                        "realizations": 10, "block": 100,
                                        "bogus": 1})
        with pytest.raises(DomainError):
            SimConfig.from_config_dict({"family": "ggd", "beta": 2.0})


class TestRunSimulation:
    def test_deterministic_and_byte_identical_output(self, tmp_path):
        a = run_simulation(config())
        b = run_simulation(config())
        assert np.array_equal(a.k, b.k)
        assert np.array_equal(a.mse_mu, b.mse_mu)
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        a.write_csv(pa)
        b.write_csv(pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_seed_matters(self):
        a = run_simulation(config(seed=1))
        b = run_simulation(config(seed=2))
        assert not np.array_equal(a.mse_mu, b.mse_mu)

    def test_worker_count_does_not_change_results(self):
        a = run_simulation(config(realizations=300, block_length=150, threads=1))
        b = run_simulation(config(realizations=300, block_length=150, threads=2))
        assert np.array_equal(a.mse_mu, b.mse_mu)
        assert b.backend == a.backend

    def test_split_runs_merge_into_the_whole(self):
        whole = run_simulation(config(realizations=100, block_length=200))
        first = run_simulation(config(realizations=60, block_length=200))
        second = run_simulation(config(realizations=40, block_length=200,
                                       realization_offset=60))
        merged = (60 * first.mse_mu + 40 * second.mse_mu) / 100
        np.testing.assert_allclose(merged, whole.mse_mu, rtol=1e-12)

    def test_location_only_outputs(self):
        res = run_simulation(config())
        assert res.mse_delta is None and res.crb_delta is None
        assert res.mse_mu.shape == res.k.shape == res.crb_mu.shape
        assert tuple(res.k) == config().resolved_log_grid
        assert np.all(res.mse_mu > 0)

    def test_scale_only_outputs(self):
        res = run_simulation(config(mode=Mode.SCALE_ONLY, initial_delta_hat=2.0))
        assert res.mse_mu is None and res.crb_mu is None
        assert np.all(res.mse_delta > 0)

    def test_joint_outputs(self):
        res = run_simulation(config(mode=Mode.JOINT, initial_delta_hat=2.0))
        assert all(v is not None for v in
                   (res.mse_mu, res.mse_delta, res.crb_mu, res.crb_delta))

    def test_single_step_block(self):
        res = run_simulation(config(block_length=1, realizations=10))
        assert tuple(res.k) == (1,)
        assert res.mse_mu.shape == (1,)

    def test_reference_curve_uses_the_deployed_design(self):
        cfg = config(dist=gaussian(1.5, 2.0))
        res = run_simulation(cfg)
        s = make_static_quantizer(DesignSpec(cfg.dist, LOC, cfg.n_bits))
        q = Quantizer(1.5 + 2.0 * s.normalized_thresholds)
        fi = quantized_fi(q, cfg.dist, LOC)
        np.testing.assert_allclose(res.crb_mu, 1.0 / (res.k * fi), rtol=1e-14)

    def test_joint_reference_curves_share_the_location_design(self):
        cfg = config(mode=Mode.JOINT, dist=cauchy(), n_bits=4)
        res = run_simulation(cfg)
        s = make_static_quantizer(DesignSpec(cfg.dist, LOC, cfg.n_bits),
                                  include_scale_coefficients=True)
        q = Quantizer(s.normalized_thresholds)
        np.testing.assert_allclose(
            res.crb_mu, 1.0 / (res.k * quantized_fi(q, cfg.dist, LOC)), rtol=1e-14)
        np.testing.assert_allclose(
            res.crb_delta, 1.0 / (res.k * quantized_fi(q, cfg.dist, SCA)), rtol=1e-14)

    def test_warm_start_changes_the_early_trajectory(self):
        plain = run_simulation(config(dist=cauchy(), realizations=64))
        warm = run_simulation(config(dist=cauchy(), realizations=64,
                                     warm_start_switch=100))
        assert not np.array_equal(plain.mse_mu, warm.mse_mu)
        assert np.all(warm.mse_mu > 0)

    def test_error_tracks_the_reference_curve(self):
        res = run_simulation(config(realizations=256, block_length=4096, seed=3))
        ratio = (res.k[-1] * res.mse_mu[-1]) / (res.k[-1] * res.crb_mu[-1])
        assert 0.7 < ratio < 1.35


class TestSimResultFiles:
    def test_csv_layout_with_absent_columns(self, tmp_path):
        res = run_simulation(config(mode=Mode.SCALE_ONLY, realizations=10,
                                    block_length=50))
        path = tmp_path / "out.csv"
        res.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "k,mse_mu,mse_delta,crb_mu,crb_delta"
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "" and first[3] == ""
        assert float(first[2]) > 0 and float(first[4]) > 0
        assert len(lines) == 1 + res.k.size

    def test_manifest_round_trip(self, tmp_path):
        cfg = config(mode=Mode.JOINT, realizations=10, block_length=50)
        res = run_simulation(cfg)
        path = tmp_path / "run.manifest.json"
        res.write_manifest(path)
        m = json.loads(path.read_text())
        assert m["version"] == f"quantest-{res.version}"
        assert m["backend"] == res.backend
        assert m["grid_points"] == res.k.size
        assert m["wall_time_s"] > 0
        assert SimConfig.from_config_dict(m["config"]) == cfg

    def test_svg_output(self, tmp_path):
        res = run_simulation(config(realizations=10, block_length=50))
        path = tmp_path / "run.svg"
        res.write_svg(path)
        body = path.read_text()
        assert "<svg" in body and "</svg>" in body


class TestReproduceTable:
    def test_rejects_unknown_selector(self):
        with pytest.raises(DomainError):
            reproduce_table("nonsense")
        with pytest.raises(DomainError):
            reproduce_table(3)
