import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from binteam.polytopes import (
    DETERMINISTIC_LABELS,
    NS_LABELS,
    DeterministicVertexLabel,
    NoSignallingVertexLabel,
    chsh_value,
    deterministic_vertex,
    is_no_signalling,
    local_membership,
    local_optimum,
    ns_optimum,
    ns_vertex,
    vertex_costs,
)
from binteam.team_core import ConditionalPolicy, centralized_optimum

from conftest import exact_instances


def test_vertex_counts_and_distinctness():
    assert len(DETERMINISTIC_LABELS) == 16 and len(NS_LABELS) == 8
    policies = [deterministic_vertex(l).q for l in DETERMINISTIC_LABELS] + [ns_vertex(l).q for l in NS_LABELS]
    keys = {tuple(Fraction(v) for v in q.flat) for q in policies}
    assert len(keys) == 24


def test_label_action_roundtrip():
    for lab in DETERMINISTIC_LABELS:
        assert DeterministicVertexLabel.from_actions(*lab.actions()) == lab


def test_all_vertices_no_signalling():
    for lab in DETERMINISTIC_LABELS:
        assert is_no_signalling(deterministic_vertex(lab))
    for lab in NS_LABELS:
        assert is_no_signalling(ns_vertex(lab))


def test_signalling_policy_detected():
    # B copies A's observation
    q = np.zeros((2, 2, 2, 2), dtype=np.int64)
    for a, b in itertools.product((0, 1), repeat=2):
        q[0, a, a, b] = 1
    assert not is_no_signalling(ConditionalPolicy(q))


def test_pr_box_is_label_000_and_scores_four():
    pr = ns_vertex(NoSignallingVertexLabel(0, 0, 0))
    for i, j, a, b in itertools.product((0, 1), repeat=4):
        assert pr.q[i, j, a, b] == (Fraction(1, 2) if i ^ j == a & b else 0)
    assert chsh_value(pr) == 4


def test_chsh_local_bound():
    assert max(abs(chsh_value(deterministic_vertex(l))) for l in DETERMINISTIC_LABELS) == 2


def test_membership_exact():
    assert local_membership(ns_vertex((0, 0, 0)))[0] is False
    inside, weights = local_membership(deterministic_vertex((1, 0, 1, 1)))
    assert inside and weights[DeterministicVertexLabel(1, 0, 1, 1)] == 1
    mix = (deterministic_vertex((0, 0, 0, 0)).q + deterministic_vertex((1, 1, 0, 1)).q) * Fraction(1, 2)
    inside, weights = local_membership(ConditionalPolicy(mix))
    assert inside and sum(weights.values()) == 1


def test_membership_float_agrees_with_exact():
    for lab in NS_LABELS:
        box = ConditionalPolicy(ns_vertex(lab).q.astype(float))
        assert local_membership(box)[0] is False
    noisy = ConditionalPolicy(ns_vertex((0, 0, 0)).q.astype(float) * 0.5 + 0.125)
    assert local_membership(noisy)[0] is True  # CHSH value 2: on the boundary


def test_witness_optima(half_cac):
    inst = half_cac
    assert local_optimum(inst) == (Fraction(-6, 5), DeterministicVertexLabel(0, 0, 0, 1))
    value, lab = ns_optimum(inst)
    assert value == Fraction(-7, 5) and lab == NoSignallingVertexLabel(0, 0, 1)


@pytest.fixture
def half_cac():
    from binteam.quantum import half_cac_instance
    return half_cac_instance()


@given(exact_instances())
def test_optimum_ordering(inst):
    j_l, lab_l = local_optimum(inst)
    j_ns, _ = ns_optimum(inst)
    j_c, _ = centralized_optimum(inst)
    assert j_c <= j_ns <= j_l
    costs = vertex_costs(inst)
    assert costs[lab_l] == j_l and min(costs.values()) == j_ns
    assert all(costs[l] > j_l for l in DETERMINISTIC_LABELS if l < lab_l)


@given(exact_instances())
def test_optimum_float_mode_matches_exact(inst):
    assert abs(float(local_optimum(inst)[0]) - local_optimum(inst.to_float())[0]) < 1e-12
    assert abs(float(ns_optimum(inst)[0]) - ns_optimum(inst.to_float())[0]) < 1e-12
