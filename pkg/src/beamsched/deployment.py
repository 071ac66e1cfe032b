"""Network geometry: APs on a line, UEs dropped uniformly in a disc per cell."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

MIN_DISTANCE = 1.0  # m


@dataclass(frozen=True)
class Deployment:
    ap_positions: np.ndarray  # (N, 2)
    ue_positions: np.ndarray  # (N, M, 2); UE (n, m) is served by AP n

    def __post_init__(self):
        if self.ap_positions.ndim != 2 or self.ap_positions.shape[1] != 2:
            raise ValueError("ap_positions must have shape (N, 2)")
        n_aps = self.ap_positions.shape[0]
        if self.ue_positions.ndim != 3 or self.ue_positions.shape[0] != n_aps \
                or self.ue_positions.shape[2] != 2:
            raise ValueError("ue_positions must have shape (N, M, 2)")

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_ues_per_ap(self) -> int:
        return self.ue_positions.shape[1]

    def distances(self) -> np.ndarray:
        """All AP-to-UE distances, indexed ``[ap, serving_ap, ue]``."""
        diff = self.ue_positions[None, :, :, :] - self.ap_positions[:, None, None, :]
        return np.hypot(diff[..., 0], diff[..., 1])


def generate_deployment(config: SystemConfig, rng: np.random.Generator) -> Deployment:
    n_aps, n_ues = config.num_aps_N, config.num_ues_per_ap_M
    if n_aps < 1 or n_ues < 1:
        raise ValueError("need at least one AP and one UE per AP")
    radius = config.radius

    aps = np.zeros((n_aps, 2))
    aps[:, 0] = np.arange(n_aps) * config.inter_cell_distance

    ues = np.empty((n_aps, n_ues, 2))
    for n in range(n_aps):
        for m in range(n_ues):
            while True:
                # sqrt of a uniform radius fraction gives uniform density over the disc
                r = radius * np.sqrt(rng.random())
                phi = 2 * np.pi * rng.random()
                pos = aps[n] + r * np.array([np.cos(phi), np.sin(phi)])
                # floor applies to every AP, not just the serving one
                if np.hypot(*(pos - aps).T).min() >= MIN_DISTANCE:
                    break
            ues[n, m] = pos
    return Deployment(aps, ues)


def distance(deployment: Deployment, ap: int, ue: tuple[int, int]) -> float:
    n, m = ue
    if not 0 <= ap < deployment.num_aps:
        raise IndexError(f"AP index {ap} out of range")
    if not (0 <= n < deployment.num_aps and 0 <= m < deployment.num_ues_per_ap):
        raise IndexError(f"UE index {ue} out of range")
    dx, dy = deployment.ue_positions[n, m] - deployment.ap_positions[ap]
    return float(np.hypot(dx, dy))
