"""System parameters for the coexistence simulator.

Defaults follow the two-AP, three-UE deployment at 60 GHz with a 400 m
inter-cell distance. Config files are flat JSON objects whose keys are the
field names of :class:`SystemConfig`.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

SPEED_OF_LIGHT = 299_792_458.0  # m/s
BOLTZMANN = 1.380649e-23  # J/K

MAX_UES_PER_AP = 12


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SystemConfig:
    carrier_frequency: float = 60e9  # Hz
    bandwidth_B: float = 500e6  # Hz
    total_tx_power: float = 30.0  # dBm
    inter_cell_distance: float = 400.0  # m
    num_aps_N: int = 2
    num_ues_per_ap_M: int = 3
    num_tx_antennas_Nt: int = 8
    codebook_size_C: int = 16
    num_paths_L: int = 3
    noise_temperature_T: float = 300.0  # K
    antenna_spacing_D: float | None = None  # m, None -> half wavelength
    path_loss_exponent: float = 2.5
    cell_radius: float | None = None  # m, None -> inter_cell_distance / 2
    learning_weight_w: float = 0.15
    max_learning_iters_T: int = 200
    greedy_iters_NDG: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("num_aps_N", "num_ues_per_ap_M", "num_tx_antennas_Nt",
                     "codebook_size_C", "num_paths_L", "max_learning_iters_T",
                     "greedy_iters_NDG"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if self.num_ues_per_ap_M > MAX_UES_PER_AP:
            raise ConfigError(
                f"num_ues_per_ap_M={self.num_ues_per_ap_M} exceeds {MAX_UES_PER_AP}; "
                "M! sequences would not be enumerable")
        for name in ("carrier_frequency", "bandwidth_B", "noise_temperature_T",
                     "inter_cell_distance", "path_loss_exponent"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.total_tx_power):
            raise ConfigError("total_tx_power must be finite")
        if not 0.0 < self.learning_weight_w < 1.0:
            raise ConfigError(
                f"learning_weight_w must lie in (0, 1), got {self.learning_weight_w!r}")
        if self.antenna_spacing_D is not None and not self.antenna_spacing_D > 0:
            raise ConfigError("antenna_spacing_D must be positive")
        # UEs are kept at least 1 m from their AP, so the disc must be larger than that
        if not self.radius > 1.0:
            raise ConfigError(f"cell radius must exceed 1 m, got {self.radius!r}")
        if isinstance(self.rng_seed, bool) or not isinstance(self.rng_seed, int) \
                or not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must be an unsigned 64-bit integer")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def spacing(self) -> float:
        """Antenna spacing in meters, half a wavelength unless configured."""
        if self.antenna_spacing_D is None:
            return self.wavelength / 2
        return self.antenna_spacing_D

    @property
    def radius(self) -> float:
        if self.cell_radius is None:
            return self.inter_cell_distance / 2
        return self.cell_radius

    @property
    def num_sequences(self) -> int:
        return math.factorial(self.num_ues_per_ap_M)

    @property
    def joint_space_size(self) -> int:
        return self.num_sequences ** self.num_aps_N

    def replace(self, **changes) -> "SystemConfig":
        return type(self)(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values = dict(data)
        # JSON has no int/float distinction for whole numbers like 6e10
        for f in fields(cls):
            if f.name in values and f.type.startswith("float") and isinstance(values[f.name], int) \
                    and not isinstance(values[f.name], bool):
                values[f.name] = float(values[f.name])
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(f"bad config value: {exc}") from exc


def load_config(path: str | Path) -> SystemConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object of parameters")
    return SystemConfig.from_dict(data)


def save_config(config: SystemConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
