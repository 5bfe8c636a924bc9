import math

import numpy as np
import pytest

from bohmlab import experiments
from bohmlab.config import default_config, harmonic_equilibrium_config
from bohmlab.experiments import detection_time, measurement_statistics
from bohmlab.trajectories import sample_positions, integrate
from bohmlab.wavefield import evolve_frames, gaussian_packet, magnet_kick

FAST = dict(n_trials=2000, n_frames=32)


@pytest.fixture(scope="module")
def sg_result():
    cfg = default_config("stern_gerlach", alpha=complex(0.6), beta=complex(0.8), **FAST)
    return cfg, experiments.stern_gerlach(cfg)


class TestStatistics:
    def test_sums_and_expectation_identity(self):
        stats = measurement_statistics((130, 70), (0.64, 0.36))
        assert sum(stats.counts) == 200
        assert abs(sum(stats.frequencies) - 1.0) < 1e-12
        assert stats.expectation_value == 0.5 * (stats.frequencies[0] - stats.frequencies[1])

    def test_halfwidths(self):
        stats = measurement_statistics((100, 100), (0.5, 0.5))
        assert stats.three_sigma_halfwidths[0] == pytest.approx(3 * math.sqrt(0.25 / 200))


class TestDetectionTime:
    def test_matches_separation_rule(self):
        cfg = default_config("stern_gerlach")
        t = detection_time(cfg)
        k, w = cfg.magnet_mu_b * cfg.magnet_tau, cfg.packet_width
        width_t = w * math.sqrt(1 + (t / (2 * w**2)) ** 2)
        assert 2 * k * t == pytest.approx(10 * width_t, rel=1e-12)

    def test_explicit_flight_time_wins(self):
        cfg = default_config("stern_gerlach", flight_time=2.5)
        assert detection_time(cfg) == 2.5

    def test_weak_magnet_rejected(self):
        cfg = default_config("stern_gerlach", magnet_mu_b=1.0)
        with pytest.raises(ValueError):
            detection_time(cfg)


class TestSternGerlach:
    def test_pure_up_state_deflects_every_trajectory(self):
        cfg = default_config("stern_gerlach", alpha=complex(1.0), beta=complex(0.0),
                             n_trials=500, n_frames=32)
        res = experiments.stern_gerlach(cfg)
        assert res.statistics.frequencies == (1.0, 0.0)
        assert np.all(res.ensemble.positions[:, -1] > 0)

    def test_born_frequencies_within_three_sigma(self, sg_result):
        _, res = sg_result
        assert all(c.passed for c in res.checks)
        st = res.statistics
        assert abs(st.frequencies[0] - 0.36) <= st.three_sigma_halfwidths[0]

    def test_expectation_against_spin_average(self, sg_result):
        _, res = sg_result
        st = res.statistics
        theory = 0.5 * (0.36 - 0.64)
        assert st.expectation_value == 0.5 * (st.frequencies[0] - st.frequencies[1])
        assert abs(st.expectation_value - theory) <= st.three_sigma_halfwidths[0]

    def test_trajectories_never_cross(self, sg_result):
        from bohmlab.trajectories import check_no_crossing
        _, res = sg_result
        assert check_no_crossing(res.ensemble).violations == 0

    def test_reproducible_bit_for_bit(self):
        cfg = default_config("stern_gerlach", n_trials=300, n_frames=16)
        a = experiments.stern_gerlach(cfg)
        b = experiments.stern_gerlach(cfg)
        assert np.array_equal(a.ensemble.positions, b.ensemble.positions)
        assert a.statistics == b.statistics

    def test_born_consistency_across_seeds(self):
        # shared frames, 100 seeded sampling+integration repetitions:
        # the 3-sigma band must capture the frequency in >= 99 of them
        cfg = default_config("stern_gerlach", **FAST)
        grid = cfg.grid()
        packet = gaussian_packet(grid, cfg.packet_center, cfg.packet_width,
                                 cfg.packet_momentum, cfg.alpha, cfg.beta)
        kicked = magnet_kick(packet, cfg.magnet())
        flight = detection_time(cfg)
        dt, spf = experiments._frame_plan(cfg, flight)
        frames = evolve_frames(kicked, cfg.potential(), dt, spf, cfg.n_frames)
        p = abs(cfg.alpha) ** 2
        halfwidth = 3 * math.sqrt(p * (1 - p) / cfg.n_trials)
        misses = 0
        for seed in range(100):
            x0 = sample_positions(frames[0], cfg.n_trials, seed)
            ens = integrate(frames, x0, cfg.substeps_per_frame, seed=seed)
            f_up = float(np.mean(ens.positions[:, -1] >= 0))
            if abs(f_up - p) > halfwidth:
                misses += 1
        assert misses <= 1


class TestSequential:
    def test_repeated_axis_is_deterministic(self):
        cfg = default_config("sequential", axes=("z", "z"), n_trials=400, n_frames=32)
        res = experiments.sequential(cfg)
        assert np.array_equal(res.outcomes[:, 0], res.outcomes[:, 1])

    def test_orthogonal_axis_randomizes(self):
        # projection oracle: |<up_x|up_z>|^2 = 1/2
        cfg = default_config("sequential", axes=("z", "x"), alpha=complex(1.0),
                             beta=complex(0.0), n_trials=2000, n_frames=32)
        res = experiments.sequential(cfg)
        stage2 = res.stage_statistics[1]
        assert stage2.born_probabilities[0] == pytest.approx(0.5)
        assert abs(stage2.frequencies[0] - 0.5) <= stage2.three_sigma_halfwidths[0]
        assert all(c.passed for c in res.checks)

    def test_intermediate_axis_erases_first_outcome(self):
        cfg = default_config("sequential", axes=("z", "x", "z"), alpha=complex(1.0),
                             beta=complex(0.0), n_trials=2000, n_frames=32)
        res = experiments.sequential(cfg)
        stage3 = res.stage_statistics[2]
        assert stage3.born_probabilities[0] == pytest.approx(0.5)
        assert abs(stage3.frequencies[0] - 0.5) <= stage3.three_sigma_halfwidths[0]


class TestNoCrossing:
    def test_symmetric_run_is_exact(self):
        cfg = default_config("no_crossing", n_trials=500, n_frames=32)
        res = experiments.no_crossing_check(cfg)
        assert res.crossing_report.violations == 0
        assert res.inference_accuracy == 1.0
        assert all(c.passed for c in res.checks)

    def test_asymmetric_state_flags_precondition(self):
        cfg = default_config("no_crossing", alpha=complex(0.6), beta=complex(0.8),
                             n_trials=300, n_frames=32)
        res = experiments.no_crossing_check(cfg)
        assert not res.symmetric_preparation
        flags = {c.name: c.passed for c in res.checks}
        assert not flags["symmetric_preparation"]


class TestEquilibrium:
    def test_free_run_stays_in_equilibrium(self):
        cfg = default_config("equilibrium", n_trials=5000, n_frames=16)
        res = experiments.equilibrium_experiment(cfg)
        assert all(c.total_variation < cfg.tv_tolerance for c in res.comparisons)
        assert all(c.passed for c in res.checks)

    def test_harmonic_run_stays_in_equilibrium(self):
        cfg = harmonic_equilibrium_config(n_trials=5000, n_frames=16)
        res = experiments.equilibrium_experiment(cfg)
        assert all(c.total_variation < cfg.tv_tolerance for c in res.comparisons)

    def test_non_equilibrium_start_is_detected(self):
        cfg = default_config("equilibrium", n_trials=5000, n_frames=8,
                             init_kind="uniform", init_a=-2.5, init_b=-1.5)
        res = experiments.equilibrium_experiment(cfg)
        assert res.comparisons[0].total_variation > 0.3
        flags = {c.name: c.passed for c in res.checks}
        assert not flags["equivariance_total_variation"]


class TestPointerExperiment:
    def test_checks_pass(self):
        cfg = default_config("pointer", n_trials=2000)
        res = experiments.pointer_experiment(cfg)
        assert all(c.passed for c in res.checks)
        assert res.statistics.n_trials == 2000
