"""Quantum-equilibrium sampling and guided-trajectory integration.

Initial positions are drawn from the |psi|^2 density of a stored frame;
trajectories then follow dX/dt = v(X, t) with the guiding velocity read
off the frame sequence: linear interpolation in time between frames,
linear interpolation in space between grid nodes, classical RK4 inside
each frame interval.  Everything is driven by the counter-based RNG in
`rng`, so a (seed, configuration) pair reproduces positions bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .serialize import fmt
from .wavefield import SpinorField, velocity_field


@dataclass(frozen=True)
class Ensemble:
    """Positions of n trajectories at the stored frame times."""

    seed: int
    frame_times: np.ndarray          # (n_frames,)
    positions: np.ndarray            # (n_trajectories, n_frames), NaN after abort
    aborted: tuple = ()              # trajectory ids that left the grid
    flagged: bool = False

    @property
    def n_trajectories(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class HistogramComparison:
    bin_edges: np.ndarray
    empirical_mass: np.ndarray
    theoretical_mass: np.ndarray
    total_variation: float


@dataclass(frozen=True)
class NoCrossingReport:
    violations: int
    first_violation: tuple | None    # ((id_lower, id_upper), frame_index)


def sample_positions(field: SpinorField, n: int, seed: int, start: int = 0) -> np.ndarray:
    """n independent draws from the spin-summed density of the field."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if field.norm() < 1e-12:
        raise ValueError("cannot sample from a zero-norm field")
    return rng.sample_from_density(field.grid.nodes, field.density(), n, seed, start)


def integrate(frames: list[SpinorField], initial_positions, substeps_per_frame: int = 4,
              seed: int = 0) -> Ensemble:
    """RK4 integration of all trajectories through the frame sequence.

    A trajectory that leaves the grid is aborted (NaN from that frame
    on) and the ensemble is flagged; a flagged run signals a mis-sized
    domain and its statistics should not be trusted.
    """
    if len(frames) < 2:
        raise ValueError("need at least two frames")
    if substeps_per_frame < 1:
        raise ValueError("substeps_per_frame must be >= 1")
    times = np.array([f.time for f in frames])
    spacing = np.diff(times)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=1e-12):
        raise ValueError("frames must be uniformly spaced in time")
    grid = frames[0].grid
    x_nodes = grid.nodes
    node_velocities = [velocity_field(f) for f in frames]

    x = np.array(initial_positions, dtype=float)
    n_traj = x.size
    positions = np.full((n_traj, len(times)), np.nan)
    positions[:, 0] = x
    alive = np.isfinite(x) & (x >= grid.x_min) & (x <= grid.x_max)
    x = np.where(alive, x, np.nan)

    dt_frame = float(spacing[0])
    h = dt_frame / substeps_per_frame
    for i in range(len(times) - 1):
        v0, v1 = node_velocities[i], node_velocities[i + 1]
        for s in range(substeps_per_frame):
            w0 = s / substeps_per_frame
            wm = (s + 0.5) / substeps_per_frame
            w1 = (s + 1.0) / substeps_per_frame
            f0 = (1.0 - w0) * v0 + w0 * v1
            fm = (1.0 - wm) * v0 + wm * v1
            f1 = (1.0 - w1) * v0 + w1 * v1
            k1 = np.interp(x, x_nodes, f0)
            k2 = np.interp(x + 0.5 * h * k1, x_nodes, fm)
            k3 = np.interp(x + 0.5 * h * k2, x_nodes, fm)
            k4 = np.interp(x + h * k3, x_nodes, f1)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        escaped = alive & ((x < grid.x_min) | (x > grid.x_max))
        if escaped.any():
            alive = alive & ~escaped
            x = np.where(alive, x, np.nan)
        positions[:, i + 1] = x

    aborted = tuple(int(i) for i in np.where(~alive)[0])
    positions.flags.writeable = False
    return Ensemble(seed=seed, frame_times=times, positions=positions,
                    aborted=aborted, flagged=bool(aborted))


def check_no_crossing(ensemble: Ensemble) -> NoCrossingReport:
    """Verify that the initial ordering of trajectories never inverts.

    Order preservation is transitive, so it suffices to check adjacent
    pairs in initial-position order at every frame; any pair inversion
    implies an adjacent inversion.
    """
    pos = ensemble.positions
    keep = np.all(np.isfinite(pos), axis=1)
    pos = pos[keep]
    ids = np.where(keep)[0]
    if pos.shape[0] < 2:
        return NoCrossingReport(violations=0, first_violation=None)
    order = np.argsort(pos[:, 0], kind="stable")
    pos = pos[order]
    ids = ids[order]
    strictly_below = pos[:-1, 0] < pos[1:, 0]

    violations = 0
    first = None
    for t in range(pos.shape[1]):
        bad = strictly_below & ~(pos[:-1, t] < pos[1:, t])
        count = int(bad.sum())
        if count and first is None:
            i = int(np.argmax(bad))
            first = ((int(ids[i]), int(ids[i + 1])), t)
        violations += count
    return NoCrossingReport(violations=violations, first_violation=first)


def _cell_cdf(grid, density):
    # node-centered cells, matching rng.sample_from_density
    masses = density * grid.dx
    cdf_x = np.concatenate((grid.nodes - 0.5 * grid.dx, [grid.nodes[-1] + 0.5 * grid.dx]))
    cdf_v = np.concatenate(([0.0], np.cumsum(masses)))
    return cdf_x, cdf_v / cdf_v[-1]


def equilibrium_distance(ensemble: Ensemble, frame_index: int, field_at_frame: SpinorField,
                         n_bins: int) -> HistogramComparison:
    """Total-variation distance between the trajectory histogram at one
    frame and the |psi|^2 mass of the same frame, on n_bins equal bins
    spanning the grid."""
    if n_bins < 10:
        raise ValueError("n_bins must be at least 10")
    pos = ensemble.positions[:, frame_index]
    pos = pos[np.isfinite(pos)]
    if pos.size == 0:
        raise ValueError("no surviving trajectories at this frame")
    grid = field_at_frame.grid
    edges = np.linspace(grid.x_min, grid.x_max, n_bins + 1)
    counts, _ = np.histogram(pos, bins=edges)
    empirical = counts / pos.size

    cdf_x, cdf_v = _cell_cdf(grid, field_at_frame.density())
    theoretical = np.diff(np.interp(edges, cdf_x, cdf_v))
    theoretical = theoretical / theoretical.sum()

    tv = 0.5 * float(np.sum(np.abs(empirical - theoretical)))
    return HistogramComparison(bin_edges=edges, empirical_mass=empirical,
                               theoretical_mass=theoretical, total_variation=tv)


def write_ensemble(ensemble: Ensemble, path, config_hash: str = "") -> None:
    """Tabular text: one row per (trajectory, frame)."""
    lines = [f"# config_hash={config_hash} seed={ensemble.seed}",
             "trajectory_id,time,position"]
    for i in range(ensemble.n_trajectories):
        for t, xt in zip(ensemble.frame_times, ensemble.positions[i]):
            lines.append(f"{i},{fmt(float(t))},{fmt(float(xt))}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
