"""Local and no-signalling vertices, optima by vertex enumeration, membership and CHSH.

The no-signalling polytope for two binary inputs and outputs has 24 vertices:
the 16 deterministic product policies and 8 nonlocal boxes.  A linear cost
is minimised at a vertex, so both optima below are exact enumerations.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog

from ._simplex import feasible_point
from .team_core import BITS, ConditionalPolicy, ProblemInstance, expected_cost

HALF = Fraction(1, 2)


class DeterministicVertexLabel(NamedTuple):
    """A's action index is ``alpha*xi_a ^ beta``, B's is ``gamma*xi_b ^ delta``.

    Field order fixes the lexicographic tie-break ``(alpha, gamma, beta, delta)``.
    """

    alpha: int
    gamma: int
    beta: int
    delta: int

    def actions(self):
        """``((gamma_A(0), gamma_A(1)), (gamma_B(0), gamma_B(1)))`` as indices."""
        a = tuple(self.alpha * x ^ self.beta for x in BITS)
        b = tuple(self.gamma * x ^ self.delta for x in BITS)
        return a, b

    @classmethod
    def from_actions(cls, a, b) -> "DeterministicVertexLabel":
        """Label of the policy with ``gamma_A = a`` and ``gamma_B = b`` (index tuples)."""
        return cls(a[0] ^ a[1], b[0] ^ b[1], a[0], b[0])


class NoSignallingVertexLabel(NamedTuple):
    """Box with mass 1/2 where ``i ^ j == xi_a*xi_b ^ alpha*xi_a ^ beta*xi_b ^ delta``."""

    alpha: int
    beta: int
    delta: int


DETERMINISTIC_LABELS = tuple(DeterministicVertexLabel(*bits) for bits in itertools.product(BITS, repeat=4))
NS_LABELS = tuple(NoSignallingVertexLabel(*bits) for bits in itertools.product(BITS, repeat=3))


def deterministic_vertex(label: DeterministicVertexLabel) -> ConditionalPolicy:
    label = DeterministicVertexLabel(*label)
    q = np.zeros((2, 2, 2, 2), dtype=np.int64)
    for a, b in itertools.product(BITS, BITS):
        q[label.alpha * a ^ label.beta, label.gamma * b ^ label.delta, a, b] = 1
    return ConditionalPolicy(q)


def ns_vertex(label: NoSignallingVertexLabel) -> ConditionalPolicy:
    label = NoSignallingVertexLabel(*label)
    q = np.full((2, 2, 2, 2), Fraction(0), dtype=object)
    for i, j, a, b in itertools.product(BITS, repeat=4):
        if i ^ j == (a & b) ^ (label.alpha & a) ^ (label.beta & b) ^ label.delta:
            q[i, j, a, b] = HALF
    return ConditionalPolicy(q)


def _doubled(policy: ConditionalPolicy) -> np.ndarray:
    return np.array([int(2 * Fraction(v)) for v in policy.q.flat], dtype=np.int64)


# Twice each vertex policy, flattened in C order; integer so kernels stay exact.
DETERMINISTIC_MATRIX = np.stack([_doubled(deterministic_vertex(lab)) for lab in DETERMINISTIC_LABELS])
NS_MATRIX = np.stack([_doubled(ns_vertex(lab)) for lab in NS_LABELS])
VERTEX_MATRIX = np.vstack([DETERMINISTIC_MATRIX, NS_MATRIX])
VERTEX_LABELS = DETERMINISTIC_LABELS + NS_LABELS
for _m in (DETERMINISTIC_MATRIX, NS_MATRIX, VERTEX_MATRIX):
    _m.flags.writeable = False


def is_no_signalling(policy: ConditionalPolicy, tol: float = 0.0) -> bool:
    q = policy.q
    marg_a = q.sum(axis=1)  # [u_a, xi_a, xi_b]
    marg_b = q.sum(axis=0)  # [u_b, xi_a, xi_b]
    diff_a = marg_a[:, :, 0] - marg_a[:, :, 1]
    diff_b = marg_b[:, 0, :] - marg_b[:, 1, :]
    worst = max(abs(v) for v in itertools.chain(diff_a.flat, diff_b.flat))
    return worst <= tol


def vertex_costs(instance: ProblemInstance) -> dict:
    """Expected cost of each of the 24 vertices, keyed by label."""
    return {lab: expected_cost(instance, _vertex_policy(lab)) for lab in VERTEX_LABELS}


_VERTEX_CACHE: dict = {}


def _vertex_policy(label) -> ConditionalPolicy:
    policy = _VERTEX_CACHE.get(label)
    if policy is None:
        if isinstance(label, DeterministicVertexLabel):
            policy = deterministic_vertex(label)
        else:
            policy = ns_vertex(label)
        _VERTEX_CACHE[label] = policy
    return policy


def local_optimum(instance: ProblemInstance):
    """Minimum over the 16 deterministic policies; ties go to the smallest label."""
    best = None
    for lab in DETERMINISTIC_LABELS:
        value = expected_cost(instance, _vertex_policy(lab))
        if best is None or value < best[0]:
            best = (value, lab)
    return best


def ns_optimum(instance: ProblemInstance):
    """Minimum over all 24 no-signalling vertices.

    On ties the deterministic optimum is reported, so the label is nonlocal
    only when a nonlocal box is strictly better.
    """
    best = local_optimum(instance)
    for lab in NS_LABELS:
        value = expected_cost(instance, _vertex_policy(lab))
        if value < best[0]:
            best = (value, lab)
    return best


def local_membership(policy: ConditionalPolicy, tol: float = 1e-9):
    """Test whether ``policy`` is a mixture of deterministic policies.

    Exact policies are decided exactly; float policies by a linear program
    minimising the max-norm residual.  Returns ``(inside, weights)`` where
    ``weights`` maps each deterministic label to its mixing weight (``None``
    when outside).
    """
    basis = DETERMINISTIC_MATRIX.T / 2  # 16 entries x 16 vertices
    if policy.exact:
        a_rows = [[Fraction(int(DETERMINISTIC_MATRIX[v, f]), 2) for v in range(16)] for f in range(16)]
        a_rows.append([Fraction(1)] * 16)
        b = [Fraction(v) for v in policy.q.flat] + [Fraction(1)]
        x = feasible_point(a_rows, b)
        if x is None:
            return False, None
        return True, dict(zip(DETERMINISTIC_LABELS, x))

    # variables: 16 weights then the residual bound t
    target = policy.q.astype(float).ravel()
    c = np.zeros(17)
    c[-1] = 1.0
    a_ub = np.vstack([
        np.hstack([basis, -np.ones((16, 1))]),
        np.hstack([-basis, -np.ones((16, 1))]),
    ])
    b_ub = np.concatenate([target, -target])
    a_eq = np.hstack([np.ones((1, 16)), np.zeros((1, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=[(0, None)] * 17, method="highs")
    if res.status != 0 or res.x[-1] > tol:
        return False, None
    return True, dict(zip(DETERMINISTIC_LABELS, res.x[:16]))


def chsh_value(policy: ConditionalPolicy):
    """CHSH score ``sum_{a,b} (-1)^(a*b) E(a, b)``.

    The correlator is ``E(a, b) = sum_{i,j} (-1)^(i^j) q[i, j, a, b]``, so the
    local bound is 2, Tsirelson's 2*sqrt(2) and the PR box scores 4.
    """
    q = policy.q
    total = Fraction(0) if policy.exact else 0.0
    for i, j, a, b in itertools.product(BITS, repeat=4):
        sign = -1 if (i ^ j ^ (a & b)) else 1
        total += sign * q[i, j, a, b]
    return total
