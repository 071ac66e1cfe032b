"""Multipath MISO channels, path loss and thermal noise."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import BOLTZMANN, SystemConfig

MIN_PATH_LOSS_DISTANCE = 1.0  # m, close-in reference distance


def ula_response(angles, n_antennas: int, spacing_wavelengths: float) -> np.ndarray:
    """Unit-norm ULA steering vectors; one row per angle."""
    angles = np.asarray(angles, dtype=float)
    k = np.arange(n_antennas)
    phase = 2 * np.pi * spacing_wavelengths * np.sin(angles)[..., None] * k
    return np.exp(1j * phase) / np.sqrt(n_antennas)


def array_response_ap(angle: float, config: SystemConfig) -> np.ndarray:
    return ula_response(angle, config.num_tx_antennas_Nt, config.spacing / config.wavelength)


@dataclass(frozen=True)
class PathParams:
    gains: np.ndarray  # (L,) complex
    departure: np.ndarray  # (L,) rad, at the AP
    arrival: np.ndarray  # (L,) rad, at the UE


def draw_paths(rng: np.random.Generator, num_paths: int) -> PathParams:
    # unit-variance circularly-symmetric complex Gaussian gains
    gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(2)
    departure = rng.uniform(0.0, 2 * np.pi, num_paths)
    arrival = rng.uniform(0.0, 2 * np.pi, num_paths)
    return PathParams(gains, departure, arrival)


def channel_from_paths(paths: PathParams, config: SystemConfig) -> np.ndarray:
    n_t = config.num_tx_antennas_Nt
    num_paths = len(paths.gains)
    a_ap = ula_response(paths.departure, n_t, config.spacing / config.wavelength)
    # single-antenna UE: its array response is 1 regardless of the arrival angle
    return np.sqrt(n_t / num_paths) * (paths.gains[:, None] * a_ap.conj()).sum(axis=0)


def generate_channel(rng: np.random.Generator, config: SystemConfig) -> np.ndarray:
    return channel_from_paths(draw_paths(rng, config.num_paths_L), config)


@dataclass(frozen=True)
class ChannelSet:
    """Channels from every AP to every UE.

    ``h[a, n, m]`` is the length-``Nt`` channel from AP ``a`` to UE ``m`` of
    AP ``n``; entries with ``a != n`` are the interfering cross links.
    """

    h: np.ndarray  # (N, N, M, Nt) complex
    gains: np.ndarray  # (N, N, M, L) complex
    departure: np.ndarray  # (N, N, M, L)
    arrival: np.ndarray  # (N, N, M, L)

    def link(self, ap: int, ue: tuple[int, int]) -> np.ndarray:
        n, m = ue
        return self.h[ap, n, m]


def generate_channel_set(config: SystemConfig, rng: np.random.Generator) -> ChannelSet:
    n_aps, n_ues = config.num_aps_N, config.num_ues_per_ap_M
    n_t, n_paths = config.num_tx_antennas_Nt, config.num_paths_L
    h = np.empty((n_aps, n_aps, n_ues, n_t), dtype=complex)
    gains = np.empty((n_aps, n_aps, n_ues, n_paths), dtype=complex)
    dep = np.empty((n_aps, n_aps, n_ues, n_paths))
    arr = np.empty((n_aps, n_aps, n_ues, n_paths))
    for a in range(n_aps):
        for n in range(n_aps):
            for m in range(n_ues):
                paths = draw_paths(rng, n_paths)
                h[a, n, m] = channel_from_paths(paths, config)
                gains[a, n, m] = paths.gains
                dep[a, n, m] = paths.departure
                arr[a, n, m] = paths.arrival
    return ChannelSet(h, gains, dep, arr)


def path_loss_db(d: float, config: SystemConfig) -> float:
    if not d >= MIN_PATH_LOSS_DISTANCE:
        raise ValueError(f"distance {d!r} m is below the 1 m reference distance")
    f_ghz = config.carrier_frequency / 1e9
    return 32.4 + 20 * math.log10(f_ghz) + 10 * config.path_loss_exponent * math.log10(d)


def noise_power_watts(config: SystemConfig) -> float:
    return BOLTZMANN * config.noise_temperature_T * config.bandwidth_B


def dbm_to_watts(dbm: float) -> float:
    return 10 ** ((dbm - 30) / 10)


def watts_to_dbm(watts: float) -> float:
    return 10 * math.log10(watts) + 30


CHANNEL_COLUMNS = ("tx_ap", "ue_ap", "ue", "antenna", "re", "im")


def write_channel_set(channels: ChannelSet, path: str | Path) -> None:
    """Dump channel vectors as one row per antenna entry, floats in repr form."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CHANNEL_COLUMNS)
        for idx in np.ndindex(channels.h.shape):
            value = channels.h[idx]
            writer.writerow([*idx, repr(float(value.real)), repr(float(value.imag))])


def read_channel_vectors(path: str | Path) -> np.ndarray:
    """Load the ``h`` array written by :func:`write_channel_set`."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no channel rows")
    keys = CHANNEL_COLUMNS[:4]
    shape = tuple(max(int(r[k]) for r in rows) + 1 for k in keys)
    h = np.zeros(shape, dtype=complex)
    for r in rows:
        h[tuple(int(r[k]) for k in keys)] = complex(float(r["re"]), float(r["im"]))
    return h
