"""The 256 problem classes, their symmetry actions, orbits and classification."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import comb

import numpy as np

from .quantum import QuantumStrategy
from .team_core import (
    BITS,
    CAC_FORM,
    HALF_CAC_FORM,
    BinaryCostPair,
    ConditionalPolicy,
    JointPrior,
    ProblemInstance,
)


class GroupAction(enum.Enum):
    IDENTITY = "I"
    TRANSPOSE = "T"  # exchange of agents
    ROW_SWAP = "R"  # relabel A's actions
    COL_SWAP = "R'"  # relabel B's actions
    EXCHANGE = "E"  # relabel xi_w

    def __str__(self) -> str:
        return self.value


GENERATORS = (GroupAction.TRANSPOSE, GroupAction.ROW_SWAP, GroupAction.COL_SWAP, GroupAction.EXCHANGE)
OMEGA = (GroupAction.IDENTITY,) + GENERATORS

OVERLAPPING, ACHIRAL, CHIRAL = "overlapping", "achiral", "chiral"

VERDICT_COUNTING = "no-advantage:overlap-or-null-or-pigeonhole"
VERDICT_OVERLAP = "no-advantage:overlap"
VERDICT_VERTEX_BOUND = "no-advantage:vertex-bound"
VERDICT_DECOMPOSITION = "no-advantage:decomposition"
VERDICT_CAC = "advantage:CAC-orbit"
VERDICT_HALF_CAC = "advantage:halfCAC-orbit"


def _pair(m, n) -> BinaryCostPair:
    return BinaryCostPair(m, n)


# Generating pairs of the chiral/achiral families, keyed by family name.
FAMILY_GENERATORS = {
    "C11a": _pair([[-1, 0], [0, 0]], [[0, 0], [0, -1]]),
    "C11c": _pair([[-1, 0], [0, 0]], [[0, -1], [0, 0]]),
    "C13a": _pair([[-1, 0], [0, 0]], [[0, -1], [-1, -1]]),
    "C12a": _pair([[-1, 0], [0, 0]], [[0, -1], [0, -1]]),
    "C12c": HALF_CAC_FORM,
    "C22c": CAC_FORM,
    "C22a": _pair([[-1, 0], [-1, 0]], [[0, -1], [0, -1]]),
}


def enumerate_classes() -> list[BinaryCostPair]:
    """All 256 pairs ordered by code (M in the low nibble, N in the high nibble)."""
    return [BinaryCostPair.from_code(c) for c in range(256)]


def mn_signature(pair: BinaryCostPair) -> tuple[int, int]:
    return sum(v == -1 for row in pair.m for v in row), sum(v == -1 for row in pair.n for v in row)


def is_overlapping(pair: BinaryCostPair) -> bool:
    return any(pair.m[i][j] == -1 and pair.n[i][j] == -1 for i in BITS for j in BITS)


def classify_cell(pair: BinaryCostPair) -> str:
    if is_overlapping(pair):
        return OVERLAPPING
    if any(pair.m[i][j] == -1 and pair.n[1 - i][1 - j] == -1 for i in BITS for j in BITS):
        return ACHIRAL
    return CHIRAL


def _transpose(mat):
    return tuple(zip(*mat))


def apply_action(pair: BinaryCostPair, action: GroupAction) -> BinaryCostPair:
    m, n = pair.m, pair.n
    if action is GroupAction.IDENTITY:
        return pair
    if action is GroupAction.TRANSPOSE:
        return BinaryCostPair(_transpose(m), _transpose(n))
    if action is GroupAction.ROW_SWAP:
        return BinaryCostPair(m[::-1], n[::-1])
    if action is GroupAction.COL_SWAP:
        return BinaryCostPair([r[::-1] for r in m], [r[::-1] for r in n])
    if action is GroupAction.EXCHANGE:
        return BinaryCostPair(n, m)
    raise ValueError(f"unknown action {action!r}")


def orbit_paths(pair: BinaryCostPair) -> dict[BinaryCostPair, tuple[GroupAction, ...]]:
    """Breadth-first closure of ``pair``; each member maps to a shortest action word reaching it."""
    paths = {pair: ()}
    queue = deque([pair])
    while queue:
        cur = queue.popleft()
        for act in GENERATORS:
            nxt = apply_action(cur, act)
            if nxt not in paths:
                paths[nxt] = paths[cur] + (act,)
                queue.append(nxt)
    return paths


@lru_cache(maxsize=None)
def orbit(pair: BinaryCostPair) -> frozenset[BinaryCostPair]:
    return frozenset(orbit_paths(pair))


def orbit_representative(pair: BinaryCostPair) -> BinaryCostPair:
    """Member of the orbit with the smallest code."""
    return min(orbit(pair), key=lambda p: p.code)


_CAC_ORBIT = orbit(CAC_FORM)
_HALF_CAC_ORBIT = orbit(HALF_CAC_FORM)


def theorem_predicate(pair: BinaryCostPair) -> bool:
    """True iff the pair lies in the orbit of the CAC or 1/2-CAC form."""
    return pair in _CAC_ORBIT or pair in _HALF_CAC_ORBIT


@lru_cache(maxsize=None)
def family_members(name: str) -> frozenset[BinaryCostPair]:
    """Orbit of a family generator intersected with its own m-n cell."""
    gen = FAMILY_GENERATORS[name]
    sig = mn_signature(gen)
    return frozenset(p for p in orbit(gen) if mn_signature(p) == sig)


def overlap_count_formula(m: int, n: int) -> int:
    """Closed-form number of overlapping m-n pairs."""
    return comb(4, m) * sum(comb(m, k) * comb(4 - m, n - k) for k in range(1, n + 1))


def counting_eliminated(pair: BinaryCostPair) -> bool:
    m, n = mn_signature(pair)
    return min(m, n) == 0 or m + n >= 5


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassificationRecord:
    cost_pair: BinaryCostPair
    mn: tuple[int, int]
    cell: str
    orbit_id: BinaryCostPair
    verdict: str
    family: str | None = None

    @property
    def advantage(self) -> bool:
        return self.verdict.startswith("advantage:")

    def as_row(self) -> dict:
        return {
            "code": self.cost_pair.code,
            "m": self.mn[0],
            "n": self.mn[1],
            "cell": self.cell,
            "orbit": self.orbit_id.code,
            "verdict": self.verdict,
        }


def _family_of(pair: BinaryCostPair) -> str | None:
    for name in FAMILY_GENERATORS:
        if pair in family_members(name):
            return name
    # 2-1 and 3-1 cells are the exchange images of the 1-2 and 1-3 families
    swapped = apply_action(pair, GroupAction.EXCHANGE)
    for name in FAMILY_GENERATORS:
        if swapped in family_members(name):
            return "C" + name[2] + name[1] + name[3]
    return None


def classify(pair: BinaryCostPair) -> ClassificationRecord:
    mn = mn_signature(pair)
    cell = classify_cell(pair)
    if pair in _CAC_ORBIT:
        verdict = VERDICT_CAC
    elif pair in _HALF_CAC_ORBIT:
        verdict = VERDICT_HALF_CAC
    elif counting_eliminated(pair):
        verdict = VERDICT_COUNTING
    elif cell == OVERLAPPING:
        verdict = VERDICT_OVERLAP
    elif sorted(mn) == [1, 3]:
        verdict = VERDICT_DECOMPOSITION
    else:
        verdict = VERDICT_VERTEX_BOUND
    family = None if cell == OVERLAPPING or counting_eliminated(pair) else _family_of(pair)
    return ClassificationRecord(pair, mn, cell, orbit_representative(pair), verdict, family)


def classify_all() -> list[ClassificationRecord]:
    return [classify(p) for p in enumerate_classes()]


# ---------------------------------------------------------------------------
# transport of instances, policies and strategies


def transport_instance(instance: ProblemInstance, action: GroupAction) -> ProblemInstance:
    """Instance in the image class whose values match ``instance`` (scaled by ``1/chi`` under E)."""
    pair = apply_action(instance.cost_pair, action)
    p = instance.prior.p
    labels = instance.action_labels
    chi = instance.chi
    if action is GroupAction.TRANSPOSE:
        p = p.transpose(1, 0, 2)
        labels = (labels[1], labels[0])
    elif action is GroupAction.ROW_SWAP:
        labels = (labels[0][::-1], labels[1])
    elif action is GroupAction.COL_SWAP:
        labels = (labels[0], labels[1][::-1])
    elif action is GroupAction.EXCHANGE:
        if chi == 0:
            raise ValueError("exchange needs chi > 0")
        p = p[:, :, ::-1]
        chi = Fraction(1) / chi if isinstance(chi, Fraction) else 1.0 / chi
    return ProblemInstance(pair, JointPrior(np.array(p)), chi, labels)


def transport_policy(policy: ConditionalPolicy, action: GroupAction) -> ConditionalPolicy:
    q = policy.q
    if action is GroupAction.TRANSPOSE:
        q = q.transpose(1, 0, 3, 2)
    elif action is GroupAction.ROW_SWAP:
        q = q[::-1]
    elif action is GroupAction.COL_SWAP:
        q = q[:, ::-1]
    return ConditionalPolicy(np.array(q), policy.tol)


_SWAP = np.eye(4)[[0, 2, 1, 3]]


def transport_strategy(s: QuantumStrategy, action: GroupAction) -> QuantumStrategy:
    """Strategy for the transported instance with the same occupation measure up to relabelling.

    Exchanging agents conjugates the state by the two-qubit SWAP.
    """
    if action is GroupAction.TRANSPOSE:
        return QuantumStrategy(_SWAP @ s.rho @ _SWAP, s.proj_b, s.proj_a)
    if action is GroupAction.ROW_SWAP:
        return QuantumStrategy(s.rho, s.proj_a[:, ::-1], s.proj_b)
    if action is GroupAction.COL_SWAP:
        return QuantumStrategy(s.rho, s.proj_a, s.proj_b[:, ::-1])
    return s
