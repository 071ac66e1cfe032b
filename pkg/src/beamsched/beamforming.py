"""Azimuth codebook, per-UE beam selection and beamforming gain.

Codebook and UE indices are zero-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, ula_response
from .config import SystemConfig

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Codebook:
    entries: np.ndarray  # (C, Nt) complex, unit-norm rows

    def __len__(self):
        return self.entries.shape[0]

    def __getitem__(self, i):
        return self.entries[i]


def build_codebook(config: SystemConfig) -> Codebook:
    c = config.codebook_size_C
    azimuths = 2 * np.pi * np.arange(c) / c
    return Codebook(ula_response(azimuths, config.num_tx_antennas_Nt,
                                 config.spacing / config.wavelength))


def beamforming_gain(w: np.ndarray, h: np.ndarray) -> float:
    w = np.asarray(w)
    h = np.asarray(h)
    if w.shape != h.shape:
        raise ValueError(f"beam length {w.shape} does not match channel {h.shape}")
    return float(abs(np.vdot(w, h)) ** 2)


def select_beam(codebook: Codebook, h: np.ndarray) -> int:
    """Index of the codebook entry with the largest gain.

    Gains within ``TIE_RTOL`` of the best count as tied; the first index wins.
    """
    h = np.asarray(h)
    if not np.any(h):
        raise ValueError("cannot select a beam for an all-zero channel")
    gains = np.abs(codebook.entries.conj() @ h) ** 2
    # mirrored azimuths (theta, pi - theta) give the same ULA vector up to rounding
    return int(np.flatnonzero(gains >= gains.max() * (1 - TIE_RTOL))[0])


@dataclass(frozen=True)
class BeamTable:
    chosen: np.ndarray  # (N, M) codebook index per served UE
    weights: np.ndarray  # (N, M, Nt) the selected codebook vectors

    def beam(self, ap: int, ue: int) -> np.ndarray:
        return self.weights[ap, ue]


def select_beams(codebook: Codebook, channels: ChannelSet) -> BeamTable:
    n_aps, _, n_ues, _ = channels.h.shape
    chosen = np.empty((n_aps, n_ues), dtype=int)
    for n in range(n_aps):
        for m in range(n_ues):
            chosen[n, m] = select_beam(codebook, channels.h[n, n, m])
    return BeamTable(chosen, codebook.entries[chosen])
