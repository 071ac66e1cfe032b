"""Beam-sequence schedulers: random, exhaustive, distributed greedy, learning automata.

Each scheduler counts its utility evaluations in an :class:`EvalCounter`:
one count per joint schedule for exhaustive search, one per AP cycle
utility for greedy and learning.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import MAX_UES_PER_AP
from .utility import Scenario

DEFAULT_BUDGET = 10**7
SIMPLEX_TOL = 1e-9
_CHUNK = 50_000


class BudgetExceeded(ValueError):
    pass


@dataclass
class EvalCounter:
    count: int = 0

    def add(self, k: int = 1) -> None:
        self.count += k


@lru_cache(maxsize=None)
def _permutations(m: int) -> np.ndarray:
    arr = np.array(list(itertools.permutations(range(m))), dtype=np.int64).reshape(-1, m)
    arr.setflags(write=False)
    return arr


def enumerate_sequences(m: int) -> np.ndarray:
    """All ``m!`` sequences in lexicographic order; row ``k`` is sequence ``k``."""
    if not 1 <= m <= MAX_UES_PER_AP:
        raise ValueError(f"M must be in [1, {MAX_UES_PER_AP}], got {m}")
    if m > 9:
        # 10! rows already take ~290 MB; the schedulers never get here in practice
        raise ValueError(f"enumerating {math.factorial(m)} sequences is not supported")
    return _permutations(m)


def random_schedule(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    seqs = enumerate_sequences(m)
    return seqs[rng.integers(len(seqs), size=n)].copy()


@dataclass
class SchedulerResult:
    joint: np.ndarray
    utility: float
    counter: EvalCounter
    indices: tuple[int, ...] = ()  # canonical sequence index per AP


def _indices_of(joint: np.ndarray) -> tuple[int, ...]:
    """Lexicographic rank of each row's permutation."""
    out = []
    for row in joint:
        rest = list(range(len(row)))
        rank = 0
        for pos, v in enumerate(row):
            i = rest.index(int(v))
            rank += i * math.factorial(len(row) - pos - 1)
            rest.pop(i)
        out.append(rank)
    return tuple(out)


def exhaustive_search(scenario: Scenario, budget: int = DEFAULT_BUDGET,
                      counter: EvalCounter | None = None) -> SchedulerResult:
    n, m = scenario.num_aps, scenario.num_ues
    seqs = enumerate_sequences(m)
    k = len(seqs)
    total = k ** n
    if total > budget:
        raise BudgetExceeded(
            f"exhaustive search needs (M!)^N = {k}^{n} = {total:,} joint schedules, "
            f"over the budget of {budget:,}; use greedy or learning instead")
    counter = counter if counter is not None else EvalCounter()
    radix = k ** np.arange(n - 1, -1, -1, dtype=np.int64)

    best_value = -np.inf
    best_flat = 0
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        # AP 0 is the most significant digit, so flat order is lexicographic in index tuples
        idx = (flat[:, None] // radix) % k
        values = scenario.evaluate(seqs[idx]).mean(axis=1)
        counter.add(len(flat))
        j = int(np.argmax(values))
        if values[j] > best_value:
            best_value = float(values[j])
            best_flat = int(flat[j])

    indices = tuple(int(i) for i in (best_flat // radix) % k)
    joint = seqs[list(indices)].copy()
    return SchedulerResult(joint, scenario.network_utility(joint), counter, indices)


@dataclass
class GreedyStep:
    iteration: int
    ap: int
    index: int
    own_utility: float
    network_utility: float


@dataclass
class GreedyResult(SchedulerResult):
    trace: list[GreedyStep] = field(default_factory=list)


def greedy_schedule(scenario: Scenario, n_iters: int, rng: np.random.Generator,
                    counter: EvalCounter | None = None) -> GreedyResult:
    """Block-coordinate ascent: each AP in turn picks its best sequence given the rest."""
    if n_iters < 1:
        raise ValueError("greedy needs at least one iteration")
    n, m = scenario.num_aps, scenario.num_ues
    seqs = enumerate_sequences(m)
    counter = counter if counter is not None else EvalCounter()
    joint = random_schedule(rng, m, n)
    current = list(_indices_of(joint))
    trace = []
    for it in range(n_iters):
        for ap in range(n):
            candidates = np.repeat(joint[None], len(seqs), axis=0)
            candidates[:, ap] = seqs
            utilities = scenario.evaluate(candidates)
            counter.add(len(seqs))
            best = int(np.argmax(utilities[:, ap]))
            joint[ap] = seqs[best]
            current[ap] = best
            trace.append(GreedyStep(it + 1, ap, best, float(utilities[best, ap]),
                                    float(utilities[best].mean())))
    return GreedyResult(joint, scenario.network_utility(joint), counter, tuple(current),
                        trace=trace)


def lri_update(p: np.ndarray, k: int, beta: float, w: float) -> np.ndarray:
    """Linear reward-inaction step toward action ``k`` with reward ``beta``."""
    p = np.asarray(p, dtype=float)
    if abs(p.sum() - 1.0) > SIMPLEX_TOL or p.min() < -SIMPLEX_TOL or p.max() > 1 + SIMPLEX_TOL:
        raise ValueError("probability vector is not on the simplex")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"reward must lie in [0, 1], got {beta!r}")
    if not 0.0 < w < 1.0:
        raise ValueError(f"weight must lie in (0, 1), got {w!r}")
    step = w * beta
    others = np.delete(p, k).sum()
    out = p - step * p
    out[k] = p[k] + step * others
    return out


@dataclass
class LearningStep:
    iteration: int
    ap: int
    index: int
    utility: float
    u_max: float
    max_prob: float


@dataclass
class LearningState:
    probs: np.ndarray  # (N, M!) one probability vector per AP
    u_max: np.ndarray  # (N,) running best utility per AP
    trace: list[LearningStep] = field(default_factory=list)


@dataclass
class LearningResult(SchedulerResult):
    state: LearningState | None = None


def learning_schedule(scenario: Scenario, w: float, n_iters: int, rng: np.random.Generator,
                      counter: EvalCounter | None = None) -> LearningResult:
    """Distributed learning-automata scheduler.

    APs take turns within each iteration. Each samples a sequence from its own
    probabilities, measures its cycle utility against what the others
    currently hold, and reinforces the played sequence by ``U / U_max``.
    Before the first iteration every AP holds a uniformly drawn sequence.
    """
    if n_iters < 1:
        raise ValueError("learning needs at least one iteration")
    if not 0.0 < w < 1.0:
        raise ValueError(f"weight must lie in (0, 1), got {w!r}")
    n, m = scenario.num_aps, scenario.num_ues
    seqs = enumerate_sequences(m)
    k_total = len(seqs)
    counter = counter if counter is not None else EvalCounter()

    state = LearningState(np.full((n, k_total), 1.0 / k_total), np.zeros(n))
    held = rng.integers(k_total, size=n)
    joint = seqs[held].copy()
    for it in range(n_iters):
        for ap in range(n):
            k = int(rng.choice(k_total, p=state.probs[ap]))
            held[ap] = k
            joint[ap] = seqs[k]
            u = scenario.cycle_utility(joint, ap)
            counter.add()
            state.u_max[ap] = max(state.u_max[ap], u)
            beta = u / state.u_max[ap] if state.u_max[ap] > 0 else 0.0
            state.probs[ap] = lri_update(state.probs[ap], k, min(beta, 1.0), w)
            state.trace.append(LearningStep(it + 1, ap, k, u, float(state.u_max[ap]),
                                            float(state.probs[ap].max())))

    final = tuple(int(np.argmax(p)) for p in state.probs)
    joint = seqs[list(final)].copy()
    return LearningResult(joint, scenario.network_utility(joint), counter, final,
                          state=state)
