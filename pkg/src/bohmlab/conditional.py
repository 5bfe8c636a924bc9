"""Two-factor measurement model: spin system times pointer coordinate.

The joint wave function lives on (spin component i, pointer position y).
An ideal impulsive coupling translates the pointer packet of component 1
by +shift and of component 2 by -shift, producing the branch form

    Psi(i, y) = c_1 phi_1(i) Phi_1(y) + c_2 phi_2(i) Phi_2(y)

with spatially disjoint pointer branches once the shift is large against
the packet width.  Conditioning on an actual pointer position Y inside
one branch yields the collapsed spin state of that branch: the effective
collapse happens in the conditioning, while the joint state itself
evolved unitarily throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .serialize import fmt
from .wavefield import (
    BOUNDARY_EDGE_FRACTION,
    BOUNDARY_MASS_LIMIT,
    NODE_DENSITY_FRACTION,
    Grid1D,
)


@dataclass(frozen=True)
class CouplingSpec:
    """Pointer displacement per spin eigenvalue (impulsive coupling
    strength).  Zero is allowed and acts as the identity."""

    shift: float

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")


class PointerField:
    """Joint amplitudes A[i, j] over (spin component i, pointer node j)."""

    def __init__(self, grid: Grid1D, amplitudes: np.ndarray):
        amplitudes = np.array(amplitudes, dtype=complex)
        if amplitudes.shape != (2, grid.n_points):
            raise ValueError("amplitudes must have shape (2, n_points)")
        amplitudes.flags.writeable = False
        self.grid = grid
        self.amplitudes = amplitudes

    def marginal_density(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def norm(self) -> float:
        return float(np.sum(self.marginal_density()) * self.grid.dx)

    def branch_weights(self) -> tuple[float, float]:
        w = np.sum(np.abs(self.amplitudes) ** 2, axis=1) * self.grid.dx
        return float(w[0]), float(w[1])


def prepare_pointer_state(alpha: complex, beta: complex, grid: Grid1D,
                          center: float = 0.0, width: float = 1.0) -> PointerField:
    """Product state: spin (alpha, beta) times a ready-state Gaussian
    pointer packet."""
    spin_norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(spin_norm - 1.0) > 1e-9:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {spin_norm}, must be 1 within 1e-9")
    if not width > 0:
        raise ValueError("width must be positive")
    if center - 5 * width < grid.x_min or center + 5 * width > grid.x_max:
        raise ValueError("pointer packet must stay at least 5 widths from the grid boundaries")
    y = grid.nodes
    packet = np.exp(-((y - center) ** 2) / (4.0 * width**2))
    packet = packet / np.sqrt(np.sum(np.abs(packet) ** 2) * grid.dx)
    return PointerField(grid, np.array([alpha * packet, beta * packet]))


def _edge_mass(grid: Grid1D, amplitudes: np.ndarray) -> float:
    edge = BOUNDARY_EDGE_FRACTION * grid.length
    x = grid.nodes
    mask = (x < grid.x_min + edge) | (x >= grid.x_max - edge)
    return float(np.sum(np.abs(amplitudes[:, mask]) ** 2) * grid.dx)


def apply_coupling(field: PointerField, coupling: CouplingSpec) -> PointerField:
    """Translate branch 1 by +shift and branch 2 by -shift (spectral
    translation, exactly unitary)."""
    if coupling.shift == 0.0:
        return PointerField(field.grid, field.amplitudes)
    k = field.grid.wavenumbers
    shifted = np.empty_like(field.amplitudes)
    for i, sign in enumerate((+1.0, -1.0)):
        shifted[i] = np.fft.ifft(np.exp(-1j * k * sign * coupling.shift)
                                 * np.fft.fft(field.amplitudes[i]))
    if _edge_mass(field.grid, shifted) > BOUNDARY_MASS_LIMIT:
        raise ValueError("shifted pointer packet violates the boundary monitor; "
                         "enlarge the pointer grid")
    return PointerField(field.grid, shifted)


def branch_overlap(field: PointerField) -> float:
    """L1 overlap of the two pointer branches, integral |Phi_1 Phi_2| dy,
    with each branch normalized."""
    a = np.abs(field.amplitudes[0])
    b = np.abs(field.amplitudes[1])
    na = np.sqrt(np.sum(a**2) * field.grid.dx)
    nb = np.sqrt(np.sum(b**2) * field.grid.dx)
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    return float(np.sum(a * b) * field.grid.dx / (na * nb))


def conditional_state(field: PointerField, y: float) -> np.ndarray:
    """Normalized 2-component spin state conditioned on pointer value y
    (linear interpolation between pointer nodes)."""
    grid = field.grid
    if y < grid.x_min or y > grid.x_max:
        raise ValueError(f"y = {y} lies outside the pointer grid")
    up = np.interp(y, grid.nodes, field.amplitudes[0].real) \
        + 1j * np.interp(y, grid.nodes, field.amplitudes[0].imag)
    down = np.interp(y, grid.nodes, field.amplitudes[1].real) \
        + 1j * np.interp(y, grid.nodes, field.amplitudes[1].imag)
    density = abs(up) ** 2 + abs(down) ** 2
    eps = NODE_DENSITY_FRACTION * float(field.marginal_density().max())
    if density < eps:
        raise ValueError(f"pointer density at y = {y} is below the node threshold")
    vec = np.array([up, down])
    return vec / np.sqrt(density)


@dataclass(frozen=True)
class PointerTrial:
    trial_id: int
    y: float
    outcome: int                  # 1 (branch +shift) or 2 (branch -shift)
    collapsed: np.ndarray         # normalized 2-spinor

    @property
    def purity(self) -> float:
        return float(abs(self.collapsed[self.outcome - 1]) ** 2)


@dataclass(frozen=True)
class PointerMeasurement:
    trials: tuple
    counts: tuple                 # (n outcome 1, n outcome 2)
    frequencies: tuple
    born_probabilities: tuple
    min_purity: float


def run_pointer_measurement(alpha: complex, beta: complex, coupling: CouplingSpec,
                            n_trials: int, seed: int, grid: Grid1D,
                            center: float = 0.0, width: float = 1.0) -> PointerMeasurement:
    """Sample pointer outcomes from the post-coupling marginal density.

    Trial i draws its pointer position with counter i of the master
    stream, classifies the outcome by the branch the pointer landed in
    (sign of y; the exact midpoint counts as branch 1), and records the
    collapsed conditional spin state.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    prepared = prepare_pointer_state(alpha, beta, grid, center, width)
    coupled = apply_coupling(prepared, coupling)

    ys = rng.sample_from_density(grid.nodes, coupled.marginal_density(), n_trials, seed)
    trials = []
    min_purity = 1.0
    for i, y in enumerate(ys):
        outcome = 1 if y >= center else 2
        collapsed = conditional_state(coupled, float(y))
        trial = PointerTrial(trial_id=i, y=float(y), outcome=outcome, collapsed=collapsed)
        min_purity = min(min_purity, trial.purity)
        trials.append(trial)
    n1 = sum(1 for t in trials if t.outcome == 1)
    counts = (n1, n_trials - n1)
    return PointerMeasurement(
        trials=tuple(trials),
        counts=counts,
        frequencies=(counts[0] / n_trials, counts[1] / n_trials),
        born_probabilities=(abs(alpha) ** 2, abs(beta) ** 2),
        min_purity=min_purity,
    )


def write_trials(measurement: PointerMeasurement, path, config_hash: str = "") -> None:
    """Per-trial table: trial_id, pointer value, outcome, collapsed spinor."""
    lines = [f"# config_hash={config_hash}",
             "trial_id,y,outcome,re_up,im_up,re_down,im_down"]
    for t in measurement.trials:
        lines.append(",".join([str(t.trial_id), fmt(t.y), str(t.outcome),
                               fmt(float(t.collapsed[0].real)), fmt(float(t.collapsed[0].imag)),
                               fmt(float(t.collapsed[1].real)), fmt(float(t.collapsed[1].imag))]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
