import numpy as np
import pytest

from bohmlab.trajectories import (
    Ensemble,
    check_no_crossing,
    equilibrium_distance,
    integrate,
    sample_positions,
    write_ensemble,
)
from bohmlab.wavefield import Grid1D, SpinorField, gaussian_packet

from conftest import analytic_free_gaussian


def plane_wave_frames(grid, k, times):
    psi = np.exp(1j * k * grid.nodes) / np.sqrt(grid.length)
    zero = np.zeros_like(psi)
    return [SpinorField(grid, psi, zero, time=t) for t in times]


class TestSampling:
    def test_uniform_density_deciles(self):
        grid = Grid1D(0.0, 1.0, 256)
        f = SpinorField(grid, np.ones(256, complex), np.zeros(256, complex))
        samples = sample_positions(f.normalized(), 100_000, seed=5)
        for d in range(10):
            mass = np.mean((samples >= d / 10) & (samples < (d + 1) / 10))
            assert abs(mass - 0.1) < 0.01

    def test_point_mass(self):
        grid = Grid1D(-1.0, 1.0, 256)
        up = np.zeros(256, complex)
        up[64] = 1.0
        f = SpinorField(grid, up, np.zeros(256, complex)).normalized()
        samples = sample_positions(f, 200, seed=1)
        assert np.all(np.abs(samples - grid.nodes[64]) <= grid.dx / 2)

    def test_same_seed_reproduces_bits(self, grid512):
        f = gaussian_packet(grid512, 0.0, 1.0, 0.0, 1.0, 0.0)
        assert np.array_equal(sample_positions(f, 1000, seed=42),
                              sample_positions(f, 1000, seed=42))

    def test_zero_field_rejected(self, grid512):
        f = SpinorField(grid512, np.zeros(512, complex), np.zeros(512, complex))
        with pytest.raises(ValueError):
            sample_positions(f, 10, seed=0)


class TestIntegrate:
    def test_constant_velocity_field(self, grid512):
        k = 2 * np.pi * 8 / grid512.length
        frames = plane_wave_frames(grid512, k, np.linspace(0.0, 2.0, 11))
        x0 = np.array([-3.0, 0.0, 2.5])
        ens = integrate(frames, x0, substeps_per_frame=2)
        assert np.max(np.abs(ens.positions[:, -1] - (x0 + k * 2.0))) < 1e-6

    def test_static_real_field_keeps_positions(self, grid512):
        # width 1 so the tails underflow at the periodic seam: the
        # spectral velocity is then zero to rounding and positions freeze
        f = gaussian_packet(grid512, 0.0, 1.0, 0.0, 1.0, 0.0)
        frames = [SpinorField(grid512, f.up, f.down, time=t) for t in (0.0, 0.5, 1.0)]
        x0 = np.array([-1.0, 0.3, 1.2])
        ens = integrate(frames, x0, substeps_per_frame=4)
        assert np.max(np.abs(ens.positions[:, -1] - x0)) < 1e-12

    def test_center_trajectory_follows_packet(self, grid512):
        w0, k = 1.0, 1.0
        times = np.linspace(0.0, 2.0, 21)
        frames = [analytic_free_gaussian(grid512, w0, t, momentum=k) for t in times]
        ens = integrate(frames, np.array([0.0]), substeps_per_frame=4)
        width_t = w0 * np.sqrt(1 + (times[-1] / (2 * w0**2)) ** 2)
        assert abs(ens.positions[0, -1] - k * times[-1]) < 1e-3 * width_t

    def test_requires_uniform_spacing(self, grid512):
        frames = plane_wave_frames(grid512, 1.0, [0.0, 0.5, 1.5])
        with pytest.raises(ValueError):
            integrate(frames, [0.0])

    def test_requires_two_frames(self, grid512):
        frames = plane_wave_frames(grid512, 1.0, [0.0])
        with pytest.raises(ValueError):
            integrate(frames, [0.0])

    def test_escaping_trajectory_is_aborted_and_flagged(self, grid512):
        k = 2 * np.pi * 16 / grid512.length    # ~ 3.14 per unit time
        frames = plane_wave_frames(grid512, k, np.linspace(0.0, 4.0, 21))
        ens = integrate(frames, np.array([0.0, 10.0]), substeps_per_frame=2)
        assert ens.flagged
        assert ens.aborted == (1,)
        assert np.isnan(ens.positions[1, -1])
        assert np.isfinite(ens.positions[0, -1])

    def test_fourth_order_convergence(self, grid512):
        # coarse frames on the spreading Gaussian: the reference at 8x
        # substeps isolates the RK error from the frame interpolation
        w0 = 0.5
        times = [0.0, 0.8, 1.6, 2.4]
        frames = [analytic_free_gaussian(grid512, w0, t) for t in times]
        x0 = np.array([1.0])

        def terminal(substeps):
            return integrate(frames, x0, substeps_per_frame=substeps).positions[0, -1]

        reference = terminal(8)
        err1 = abs(terminal(1) - reference)
        err2 = abs(terminal(2) - reference)
        assert err1 > 1e-8          # measurable, not rounding noise
        assert err1 / err2 >= 8.0

    def test_bitwise_reproducible(self, grid512):
        w0 = 1.0
        times = np.linspace(0.0, 1.0, 6)
        frames = [analytic_free_gaussian(grid512, w0, t) for t in times]
        x0 = sample_positions(frames[0], 500, seed=9)
        a = integrate(frames, x0, substeps_per_frame=4, seed=9)
        b = integrate(frames, x0, substeps_per_frame=4, seed=9)
        assert np.array_equal(a.positions, b.positions)


class TestNoCrossing:
    def test_rigid_translation_has_no_violations(self, grid512):
        k = 2 * np.pi * 8 / grid512.length
        frames = plane_wave_frames(grid512, k, np.linspace(0.0, 2.0, 11))
        x0 = sample_positions(analytic_free_gaussian(grid512, 1.0, 0.0), 200, seed=2)
        ens = integrate(frames, x0, substeps_per_frame=2)
        assert check_no_crossing(ens).violations == 0

    def test_injected_swap_detected(self):
        times = np.array([0.0, 1.0, 2.0])
        positions = np.array([[0.0, 0.0, 0.0],
                              [1.0, 1.0, 1.0],
                              [2.0, 2.0, 2.0]])
        swapped = positions.copy()
        swapped[[0, 2], 1] = swapped[[2, 0], 1]     # cross at the middle frame
        ens = Ensemble(seed=0, frame_times=times, positions=swapped)
        report = check_no_crossing(ens)
        assert report.violations >= 1
        assert report.first_violation is not None


class TestEquilibriumDistance:
    def test_sampling_noise_scale_at_frame_zero(self, grid512):
        n, n_bins = 50_000, 64
        f = analytic_free_gaussian(grid512, 1.0, 0.0)
        x0 = sample_positions(f, n, seed=17)
        frames = [analytic_free_gaussian(grid512, 1.0, t) for t in (0.0, 0.1)]
        ens = integrate(frames, x0, substeps_per_frame=1)
        comp = equilibrium_distance(ens, 0, frames[0], n_bins)
        # multinomial noise bound for n draws over n_bins cells
        assert comp.total_variation < 2 * np.sqrt(n_bins / n)
        assert abs(comp.empirical_mass.sum() - 1.0) < 1e-9
        assert abs(comp.theoretical_mass.sum() - 1.0) < 1e-9

    def test_degenerate_single_bin_matches_exactly(self):
        # node 133's cell lies strictly inside one of the 16 bins, so the
        # occupied bin carries theoretical mass 1 and the match is exact
        grid = Grid1D(-1.0, 1.0, 256)
        up = np.zeros(256, complex)
        up[133] = 1.0
        f = SpinorField(grid, up, np.zeros(256, complex)).normalized()
        times = np.array([0.0, 1.0])
        positions = np.array([[grid.nodes[133], grid.nodes[133]]])
        ens = Ensemble(seed=0, frame_times=times, positions=positions)
        comp = equilibrium_distance(ens, 0, f, 16)
        assert comp.total_variation == 0.0

    def test_requires_enough_bins(self, grid512):
        f = analytic_free_gaussian(grid512, 1.0, 0.0)
        ens = Ensemble(seed=0, frame_times=np.array([0.0]),
                       positions=np.array([[0.0]]))
        with pytest.raises(ValueError):
            equilibrium_distance(ens, 0, f, 4)


class TestEnsembleExport:
    def test_header_and_shape(self, grid512, tmp_path):
        frames = plane_wave_frames(grid512, 1.0, [0.0, 0.5, 1.0])
        ens = integrate(frames, [0.0, 1.0], substeps_per_frame=1, seed=123)
        path = tmp_path / "ensemble.csv"
        write_ensemble(ens, path, config_hash="deadbeef")
        lines = path.read_text().splitlines()
        assert lines[0] == "# config_hash=deadbeef seed=123"
        assert lines[1] == "trajectory_id,time,position"
        assert len(lines) == 2 + 2 * 3
