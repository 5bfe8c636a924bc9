"""Experiment configuration: defaults, file parsing, canonical hashing.

Config files are plain key-value text:

    # comment
    scenario = stern_gerlach
    spin.alpha = 0.6
    spin.beta = 0.8
    grid.n_points = 512

One `key = value` pair per line; nesting is spelled with dots; `#`
starts a comment; blank lines are ignored.  Keys may not repeat.
Numbers are decimal; complex values use Python syntax (`0.6+0.2j`);
`axes` is a whitespace- or comma-separated list of x/y/z letters;
`flight_time` accepts `auto`.  Unknown keys are fatal, with a nearest
known key suggested.

The canonical form of a config is the sorted `key = value` listing of
every effective field (defaults filled in, floats at 17 significant
digits); its SHA-256 hex digest is the config hash stamped on every
output file.
"""

from __future__ import annotations

import difflib
import hashlib
import math
from dataclasses import dataclass, replace

from .serialize import fmt
from .wavefield import Grid1D, MagnetSpec, PotentialSpec

SIM_SCENARIOS = ("stern_gerlach", "sequential", "no_crossing", "equilibrium", "pointer")
NOGO_SCENARIOS = ("mermin", "vonneumann", "chsh")
DEFAULT_SEED = 42


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class NogoRequest:
    kind: str


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    seed: int = DEFAULT_SEED
    n_trials: int = 20000
    n_bins: int = 64
    n_frames: int = 64
    substeps_per_frame: int = 4
    alpha: complex = complex(1 / math.sqrt(2))
    beta: complex = complex(1 / math.sqrt(2))
    grid_x_min: float = -20.0
    grid_x_max: float = 20.0
    grid_n_points: int = 512
    packet_center: float = 0.0
    packet_width: float = 1.0
    packet_momentum: float = 0.0
    magnet_mu_b: float = 5.0
    magnet_tau: float = 1.0
    flight_time: float | None = None          # None = separation rule
    branch_threshold: float = 0.01
    potential_kind: str = "free"
    potential_omega: float = 1.0
    potential_center: float = 0.0
    duration: float = 2.0
    tv_tolerance: float = 0.03
    axes: tuple = ("z", "x")
    pointer_shift: float = 10.0
    pointer_width: float = 1.0
    pointer_center: float = 0.0
    init_kind: str = "born"                   # "born" | "uniform"
    init_a: float = 0.0
    init_b: float = 1.0

    def grid(self) -> Grid1D:
        return Grid1D(self.grid_x_min, self.grid_x_max, self.grid_n_points)

    def magnet(self) -> MagnetSpec:
        return MagnetSpec(self.magnet_mu_b, self.magnet_tau)

    def potential(self) -> PotentialSpec:
        if self.potential_kind == "free":
            return PotentialSpec.free()
        if self.potential_kind == "harmonic":
            return PotentialSpec.harmonic(self.potential_omega, self.potential_center)
        raise ConfigError(f"unsupported potential kind {self.potential_kind!r}")


_SCENARIO_DEFAULTS: dict[str, dict] = {
    "stern_gerlach": {},
    "sequential": {"n_trials": 1000},
    "no_crossing": {"n_trials": 1000},
    "equilibrium": {
        "n_trials": 50000,
        "n_frames": 40,
        "grid_x_min": -16.0, "grid_x_max": 16.0,
        "packet_center": -2.0, "packet_momentum": 1.0,
        "duration": 2.0,
    },
    "pointer": {
        "n_trials": 10000,
        "grid_x_min": -24.0, "grid_x_max": 24.0,
    },
}


def default_config(scenario: str, **overrides) -> ExperimentConfig:
    if scenario not in SIM_SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    fields = dict(_SCENARIO_DEFAULTS[scenario])
    fields.update(overrides)
    return ExperimentConfig(scenario=scenario, **fields)


def harmonic_equilibrium_config(**overrides) -> ExperimentConfig:
    """Oscillator variant of the equilibrium run: a coherent packet of
    the ground-state width swings through half a period."""
    fields = dict(
        potential_kind="harmonic", potential_omega=1.0, potential_center=0.0,
        grid_x_min=-12.0, grid_x_max=12.0, grid_n_points=256,
        packet_center=2.0, packet_width=1 / math.sqrt(2), packet_momentum=0.0,
        duration=math.pi, n_trials=50000, n_frames=40,
    )
    fields.update(overrides)
    return default_config("equilibrium", **fields)


# key in config file -> (attribute, converter)
def _to_int(s: str) -> int:
    return int(s, 10)


def _to_float(s: str) -> float:
    return float(s)


def _to_complex(s: str) -> complex:
    return complex(s.replace(" ", ""))


def _to_axes(s: str) -> tuple:
    tokens = [t for t in s.replace(",", " ").split() if t]
    for t in tokens:
        if t not in ("x", "y", "z"):
            raise ConfigError(f"axes entries must be x, y or z, got {t!r}")
    if not tokens:
        raise ConfigError("axes list is empty")
    return tuple(tokens)


def _to_flight(s: str):
    return None if s.strip().lower() == "auto" else float(s)


_KEYS: dict[str, tuple] = {
    "scenario": ("scenario", str),
    "seed": ("seed", _to_int),
    "n_trials": ("n_trials", _to_int),
    "n_bins": ("n_bins", _to_int),
    "n_frames": ("n_frames", _to_int),
    "substeps_per_frame": ("substeps_per_frame", _to_int),
    "spin.alpha": ("alpha", _to_complex),
    "spin.beta": ("beta", _to_complex),
    "grid.x_min": ("grid_x_min", _to_float),
    "grid.x_max": ("grid_x_max", _to_float),
    "grid.n_points": ("grid_n_points", _to_int),
    "packet.center": ("packet_center", _to_float),
    "packet.width": ("packet_width", _to_float),
    "packet.momentum": ("packet_momentum", _to_float),
    "magnet.mu_b": ("magnet_mu_b", _to_float),
    "magnet.tau": ("magnet_tau", _to_float),
    "flight_time": ("flight_time", _to_flight),
    "branch_threshold": ("branch_threshold", _to_float),
    "potential.kind": ("potential_kind", str),
    "potential.omega": ("potential_omega", _to_float),
    "potential.center": ("potential_center", _to_float),
    "duration": ("duration", _to_float),
    "tolerance.total_variation": ("tv_tolerance", _to_float),
    "axes": ("axes", _to_axes),
    "pointer.shift": ("pointer_shift", _to_float),
    "pointer.width": ("pointer_width", _to_float),
    "pointer.center": ("pointer_center", _to_float),
    "init.kind": ("init_kind", str),
    "init.a": ("init_a", _to_float),
    "init.b": ("init_b", _to_float),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _) in _KEYS.items()}


def _parse_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def parse_config(text: str, scenario: str | None = None):
    """Parse config text into an ExperimentConfig or a NogoRequest.

    `scenario`, when given (from a CLI subcommand), must agree with any
    scenario named in the file.  All module invariants that can be
    checked without running are checked here.
    """
    pairs = _parse_pairs(text)

    file_scenario = pairs.pop("scenario", None)
    if file_scenario is not None and scenario is not None and file_scenario != scenario:
        raise ConfigError(f"config names scenario {file_scenario!r} but the "
                          f"subcommand selects {scenario!r}")
    effective = file_scenario or scenario
    if effective is None:
        raise ConfigError("no scenario given (config key 'scenario' or subcommand)")

    if effective in NOGO_SCENARIOS:
        extra = [k for k in pairs if k != "seed"]
        if extra:
            raise ConfigError(f"scenario {effective!r} takes no parameters, got {extra}")
        return NogoRequest(kind=effective)
    if effective not in SIM_SCENARIOS:
        raise ConfigError(f"unknown scenario {effective!r}")

    overrides = {}
    for key, value in pairs.items():
        if key not in _KEYS:
            hint = difflib.get_close_matches(key, _KEYS, n=1)
            suggestion = f"; did you mean {hint[0]!r}?" if hint else ""
            raise ConfigError(f"unknown key {key!r}{suggestion}")
        attr, convert = _KEYS[key]
        try:
            overrides[attr] = convert(value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: cannot parse {value!r} ({exc})") from None

    config = default_config(effective, **overrides)
    validate_config(config)
    return config


def validate_config(config: ExperimentConfig) -> None:
    spin_norm = abs(config.alpha) ** 2 + abs(config.beta) ** 2
    if abs(spin_norm - 1.0) > 1e-9:
        raise ConfigError("spin normalization invariant violated: "
                          f"|alpha|^2 + |beta|^2 = {spin_norm:.12g}, must be 1 within 1e-9")
    config.grid()          # raises on bad grid parameters
    config.magnet()
    config.potential()
    if config.n_trials < 1:
        raise ConfigError("n_trials must be at least 1")
    if config.n_bins < 10:
        raise ConfigError("n_bins must be at least 10")
    if config.n_frames < 1:
        raise ConfigError("n_frames must be at least 1")
    if config.substeps_per_frame < 1:
        raise ConfigError("substeps_per_frame must be at least 1")
    if not config.packet_width > 0:
        raise ConfigError("packet.width must be positive")
    if config.flight_time is not None and not config.flight_time > 0:
        raise ConfigError("flight_time must be positive (or auto)")
    if not 0.0 < config.branch_threshold < 1.0:
        raise ConfigError("branch_threshold must lie in (0, 1)")
    if config.scenario == "sequential" and len(config.axes) < 2:
        raise ConfigError("sequential runs need at least 2 axes")
    if config.init_kind not in ("born", "uniform"):
        raise ConfigError("init.kind must be 'born' or 'uniform'")
    if config.init_kind == "uniform" and not config.init_b > config.init_a:
        raise ConfigError("init.b must exceed init.a for a uniform initialization")
    if not config.pointer_width > 0:
        raise ConfigError("pointer.width must be positive")
    if config.pointer_shift < 0:
        raise ConfigError("pointer.shift must be nonnegative")


def _format_value(attr: str, value) -> str:
    if value is None:
        return "auto"
    if attr == "axes":
        return " ".join(value)
    if isinstance(value, complex):
        return fmt(value)
    if isinstance(value, bool):
        return fmt(value)
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def canonical_text(config) -> str:
    """Sorted `key = value` listing of every effective field."""
    if isinstance(config, NogoRequest):
        return f"scenario = {config.kind}\n"
    lines = [f"scenario = {config.scenario}"]
    for attr, key in sorted(_ATTR_TO_KEY.items(), key=lambda kv: kv[1]):
        if attr == "scenario":
            continue
        lines.append(f"{key} = {_format_value(attr, getattr(config, attr))}")
    return "\n".join(sorted(lines)) + "\n"


def config_hash(config) -> str:
    return hashlib.sha256(canonical_text(config).encode()).hexdigest()


def with_overrides(config: ExperimentConfig, *, seed: int | None = None,
                   n_trials: int | None = None) -> ExperimentConfig:
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if n_trials is not None:
        updates["n_trials"] = n_trials
    if not updates:
        return config
    new = replace(config, **updates)
    validate_config(new)
    return new
