"""Spectral-efficiency utilities under slot-aligned cross interference.

A joint schedule is an ``(N, M)`` integer array: row ``n`` is AP ``n``'s beam
sequence, and ``joint[n, s]`` is the UE that AP ``n`` serves in slot ``s``.
Every AP transmits in every slot, so in slot ``s`` UE ``joint[n, s]`` hears
the beams every other AP points at its own slot-``s`` UE.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .beamforming import BeamTable, beamforming_gain, build_codebook, select_beams
from .channel import (ChannelSet, dbm_to_watts, generate_channel_set, noise_power_watts,
                      path_loss_db)
from .config import SystemConfig
from .deployment import Deployment, distance, generate_deployment


def as_joint(joint, num_aps: int, num_ues: int) -> np.ndarray:
    arr = np.asarray(joint, dtype=int)
    if arr.shape != (num_aps, num_ues):
        raise ValueError(f"joint schedule must have shape ({num_aps}, {num_ues}), got {arr.shape}")
    expected = np.arange(num_ues)
    for n, row in enumerate(arr):
        if not np.array_equal(np.sort(row), expected):
            raise ValueError(f"sequence of AP {n} is not a permutation: {row.tolist()}")
    return arr


def received_power_watts(tx_ap: int, victim: tuple[int, int], beam: np.ndarray,
                         channels: ChannelSet, deployment: Deployment,
                         config: SystemConfig) -> float:
    """Power at UE ``victim`` when AP ``tx_ap`` transmits on ``beam``.

    Serving and interfering links are treated the same way.
    """
    gain = beamforming_gain(beam, channels.link(tx_ap, victim))
    pl = path_loss_db(distance(deployment, tx_ap, victim), config)
    return dbm_to_watts(config.total_tx_power) * gain * 10 ** (-pl / 10)


def rx_power_tensor(channels: ChannelSet, beams: BeamTable, deployment: Deployment,
                    config: SystemConfig) -> np.ndarray:
    """``P[a, ma, n, m]``: power at UE (n, m) while AP ``a`` serves its UE ``ma``."""
    d = deployment.distances()
    if d.min() < 1.0:
        raise ValueError("deployment has an AP-UE distance below 1 m")
    f_ghz = config.carrier_frequency / 1e9
    pl_db = 32.4 + 20 * np.log10(f_ghz) + 10 * config.path_loss_exponent * np.log10(d)
    # proj[a, ma, n, m] = w_{a,ma}^H h[a, n, m]
    proj = np.einsum("akt,anmt->aknm", beams.weights.conj(), channels.h)
    gain = np.abs(proj) ** 2
    return dbm_to_watts(config.total_tx_power) * gain * (10 ** (-pl_db / 10))[:, None, :, :]


@dataclass
class UtilityReport:
    slot_sinr: np.ndarray  # (N, M) linear
    slot_se: np.ndarray  # (N, M) bits/s/Hz
    cycle_utility: np.ndarray  # (N,)
    network_utility: float

    def write(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "ap", "slot", "sinr", "spectral_efficiency"])
            n_aps, n_slots = self.slot_se.shape
            for n in range(n_aps):
                for s in range(n_slots):
                    writer.writerow(["slot", n, s, repr(float(self.slot_sinr[n, s])),
                                     repr(float(self.slot_se[n, s]))])
            for n in range(n_aps):
                writer.writerow(["cycle", n, "", "", repr(float(self.cycle_utility[n]))])
            writer.writerow(["network", "", "", "", repr(float(self.network_utility))])


class Scenario:
    """One trial's fixed inputs with received powers precomputed.

    ``evaluate`` is the single batched path every scheduler goes through, so
    utilities of the same joint schedule agree bit-for-bit across schedulers.
    """

    def __init__(self, config: SystemConfig, deployment: Deployment, channels: ChannelSet,
                 beams: BeamTable):
        self.config = config
        self.deployment = deployment
        self.channels = channels
        self.beams = beams
        self.noise = noise_power_watts(config)
        self.rx = rx_power_tensor(channels, beams, deployment, config)
        self.num_aps = config.num_aps_N
        self.num_ues = config.num_ues_per_ap_M

    @classmethod
    def generate(cls, config: SystemConfig, rng: np.random.Generator) -> "Scenario":
        deployment = generate_deployment(config, rng)
        channels = generate_channel_set(config, rng)
        beams = select_beams(build_codebook(config), channels)
        return cls(config, deployment, channels, beams)

    def slot_sinr(self, joints: np.ndarray) -> np.ndarray:
        """SINR for a batch of joint schedules ``(J, N, M)`` -> ``(J, N, M)``."""
        joints = np.asarray(joints)
        n = self.num_aps
        aps = np.arange(n)
        # served[j, s, a] is the UE AP a serves in slot s
        served = joints.transpose(0, 2, 1)
        # power[j, s, a, v]: from AP a (on its slot-s beam) at AP v's slot-s UE
        power = self.rx[aps[None, None, :, None], served[:, :, :, None],
                        aps[None, None, None, :], served[:, :, None, :]]
        own = np.eye(n, dtype=bool)
        signal = power[:, :, aps, aps]
        interference = np.where(own, 0.0, power).sum(axis=2)
        sinr = signal / (interference + self.noise)
        return sinr.transpose(0, 2, 1)

    def evaluate(self, joints: np.ndarray) -> np.ndarray:
        """Per-AP cycle utilities ``(J, N)`` for a batch of joint schedules."""
        return np.log2(1.0 + self.slot_sinr(joints)).mean(axis=2)

    def cycle_utility(self, joint, ap: int) -> float:
        return float(self.evaluate(np.asarray(joint)[None])[0, ap])

    def network_utility(self, joint) -> float:
        return float(self.evaluate(np.asarray(joint)[None])[0].mean())

    def report(self, joint) -> UtilityReport:
        joint = as_joint(joint, self.num_aps, self.num_ues)
        sinr = self.slot_sinr(joint[None])[0]
        se = np.log2(1.0 + sinr)
        cycle = se.mean(axis=1)
        return UtilityReport(sinr, se, cycle, float(cycle.mean()))


def slot_utility(scenario: Scenario, joint, slot: int, ap: int) -> float:
    """Spectral efficiency of AP ``ap`` in ``slot``, composed link by link."""
    sc = scenario
    joint = as_joint(joint, sc.num_aps, sc.num_ues)
    target = int(joint[ap, slot])
    victim = (ap, target)
    signal = received_power_watts(ap, victim, sc.beams.beam(ap, target),
                                  sc.channels, sc.deployment, sc.config)
    interference = 0.0
    for a in range(sc.num_aps):
        if a != ap:
            beam = sc.beams.beam(a, int(joint[a, slot]))
            interference += received_power_watts(a, victim, beam, sc.channels,
                                                  sc.deployment, sc.config)
    return float(np.log2(1.0 + signal / (interference + sc.noise)))


def cycle_utility(scenario: Scenario, joint, ap: int) -> float:
    return scenario.cycle_utility(as_joint(joint, scenario.num_aps, scenario.num_ues), ap)


def network_utility(scenario: Scenario, joint) -> float:
    return scenario.network_utility(as_joint(joint, scenario.num_aps, scenario.num_ues))
