"""Problem instances, policies and expected costs.

Index conventions used throughout the package (all 0-based):

* cost matrices ``M[i][j]``, ``N[i][j]`` with ``i`` the index of A's action
  and ``j`` the index of B's action;
* priors ``p[xi_a, xi_b, xi_w]``;
* policies ``q[u_a, u_b, xi_a, xi_b]``.

Exact mode stores probabilities and ``chi`` as :class:`fractions.Fraction`;
float mode stores numpy floats.  A prior is exact iff every entry it was
built from is an ``int``, ``Fraction`` or fraction string.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Any, Iterable

import numpy as np

BITS = (0, 1)
FLOAT_PRIOR_TOL = 1e-12
FLOAT_POLICY_TOL = 1e-12

DEFAULT_LABELS = (("u_A^0", "u_A^1"), ("u_B^0", "u_B^1"))


def to_number(value: Any) -> Fraction | float:
    """Coerce ``value`` to a Fraction when it is exact, else to float."""
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise ValueError(f"not a number: {value!r}") from exc
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def is_exact(value: Any) -> bool:
    return isinstance(value, (Fraction, int, np.integer)) and not isinstance(value, bool)


def format_number(value: Any) -> str | float:
    """Serialise a number losslessly: ``"p/q"`` for rationals, 17 digits for floats."""
    if isinstance(value, (Fraction, int, np.integer)):
        f = Fraction(value)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(format(float(value), ".17g"))


# ---------------------------------------------------------------------------
# cost matrices


def _as_matrix(rows: Iterable[Iterable[int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    out = tuple(tuple(int(v) for v in row) for row in rows)
    if len(out) != 2 or any(len(r) != 2 for r in out):
        raise ValueError("cost matrices must be 2x2")
    for row in out:
        for v in row:
            if v not in (0, -1):
                raise ValueError(f"cost matrix entries must be 0 or -1, got {v}")
    return out  # type: ignore[return-value]


def _mask(mat) -> int:
    return sum(1 << (2 * i + j) for i in BITS for j in BITS if mat[i][j] == -1)


def _from_mask(mask: int):
    return tuple(tuple(-1 if mask >> (2 * i + j) & 1 else 0 for j in BITS) for i in BITS)


@dataclass(frozen=True)
class BinaryCostPair:
    """The pair ``(M, N)`` of 2x2 matrices with entries in {0, -1}.

    ``code`` packs the pair into one byte: bit ``2*i + j`` of the low nibble is
    set when ``M[i][j] == -1`` and the high nibble does the same for ``N``.
    """

    m: tuple[tuple[int, int], tuple[int, int]]
    n: tuple[tuple[int, int], tuple[int, int]]

    def __init__(self, m, n):
        object.__setattr__(self, "m", _as_matrix(m))
        object.__setattr__(self, "n", _as_matrix(n))

    @classmethod
    def from_code(cls, code: int) -> "BinaryCostPair":
        if not 0 <= code < 256:
            raise ValueError("pair code must lie in 0..255")
        return cls(_from_mask(code & 0xF), _from_mask(code >> 4))

    @property
    def code(self) -> int:
        return _mask(self.m) | (_mask(self.n) << 4)

    @property
    def m_array(self) -> np.ndarray:
        return np.array(self.m, dtype=np.int64)

    @property
    def n_array(self) -> np.ndarray:
        return np.array(self.n, dtype=np.int64)

    def __repr__(self) -> str:
        return f"BinaryCostPair(m={list(map(list, self.m))}, n={list(map(list, self.n))})"


CAC_FORM = BinaryCostPair([[-1, 0], [0, -1]], [[0, -1], [-1, 0]])
HALF_CAC_FORM = BinaryCostPair([[-1, 0], [0, 0]], [[0, -1], [-1, 0]])
ZERO_PAIR = BinaryCostPair([[0, 0], [0, 0]], [[0, 0], [0, 0]])


# ---------------------------------------------------------------------------
# priors


def _object_array(values, shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    flat = list(values)
    for k, idx in enumerate(np.ndindex(*shape)):
        arr[idx] = flat[k]
    return arr


@dataclass(frozen=True, eq=False)
class JointPrior:
    """Joint distribution of ``(xi_a, xi_b, xi_w)``, stored as ``p[a, b, w]``."""

    p: np.ndarray
    exact: bool

    def __init__(self, p):
        raw = np.asarray(p, dtype=object)
        if raw.shape == (8,):
            raw = raw.reshape(2, 2, 2)
        if raw.shape != (2, 2, 2):
            raise ValueError("prior must have 8 entries indexed by (xi_a, xi_b, xi_w)")
        nums = [to_number(v) for v in raw.flat]
        exact = all(isinstance(v, Fraction) for v in nums)
        if exact:
            arr = _object_array(nums, (2, 2, 2))
            total = sum(nums, Fraction(0))
            if any(v < 0 for v in nums):
                raise ValueError("prior entries must be nonnegative")
            if total != 1:
                raise ValueError(f"prior must sum to 1, got {total}")
        else:
            arr = np.array([float(v) for v in nums], dtype=float).reshape(2, 2, 2)
            if np.any(arr < 0):
                raise ValueError("prior entries must be nonnegative")
            if abs(arr.sum() - 1.0) > FLOAT_PRIOR_TOL:
                raise ValueError(f"prior must sum to 1 within {FLOAT_PRIOR_TOL}, got {arr.sum()!r}")
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)
        object.__setattr__(self, "exact", exact)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "JointPrior":
        """Build from ``{(a, b, w): mass}`` or ``{"a,b,w": mass}``; missing keys are zero."""
        values = {}
        for key, mass in mapping.items():
            if isinstance(key, str):
                key = tuple(int(s) for s in key.split(","))
            key = tuple(int(k) for k in key)
            if len(key) != 3 or any(k not in BITS for k in key):
                raise ValueError(f"bad prior key {key!r}")
            values[key] = mass
        return cls([values.get(k, 0) for k in itertools.product(BITS, repeat=3)])

    def __getitem__(self, key):
        return self.p[key]

    def to_float(self) -> "JointPrior":
        return self if not self.exact else JointPrior(self.p.astype(float))


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    cost_pair: BinaryCostPair
    prior: JointPrior
    chi: Fraction | float
    action_labels: tuple[tuple[str, str], tuple[str, str]] = DEFAULT_LABELS
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        chi = to_number(self.chi)
        if chi < 0:
            raise ValueError(f"chi must be nonnegative, got {chi}")
        labels = tuple(tuple(pair) for pair in self.action_labels)
        if len(labels) != 2 or any(len(p) != 2 or p[0] == p[1] for p in labels):
            raise ValueError("action labels must be two pairs of distinct labels")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "action_labels", labels)
        object.__setattr__(self, "_weights", _build_weights(self))

    @property
    def exact(self) -> bool:
        return self.prior.exact and isinstance(self.chi, Fraction)

    @property
    def weights(self) -> np.ndarray:
        """Expected-cost coefficients ``w[u_a, u_b, xi_a, xi_b] = sum_w P(a,b,w) l(u_a,u_b,w)``."""
        return self._weights

    def cost_table(self) -> np.ndarray:
        """``l[i, j, xi_w]`` as an array (object dtype in exact mode)."""
        table = np.empty((2, 2, 2), dtype=object if self.exact else float)
        for i, j, w in itertools.product(BITS, repeat=3):
            table[i, j, w] = cost(self, i, j, w)
        return table

    def to_float(self) -> "ProblemInstance":
        return ProblemInstance(self.cost_pair, self.prior.to_float(), float(self.chi), self.action_labels)


def _build_weights(inst: ProblemInstance) -> np.ndarray:
    exact = inst.prior.exact and isinstance(inst.chi, Fraction)
    prior = inst.prior.p if exact else inst.prior.p.astype(float)
    chi = inst.chi if exact else float(inst.chi)
    w = np.empty((2, 2, 2, 2), dtype=object if exact else float)
    m, n = inst.cost_pair.m, inst.cost_pair.n
    for i, j, a, b in itertools.product(BITS, repeat=4):
        w[i, j, a, b] = prior[a, b, 0] * m[i][j] + prior[a, b, 1] * chi * n[i][j]
    w.flags.writeable = False
    return w


def make_instance(cost_pair: BinaryCostPair, prior: JointPrior, chi, action_labels=DEFAULT_LABELS) -> ProblemInstance:
    """Validate and assemble a problem instance."""
    if not isinstance(prior, JointPrior):
        prior = JointPrior(prior)
    return ProblemInstance(cost_pair, prior, chi, action_labels)


def cost(instance: ProblemInstance, i: int, j: int, xi_w: int):
    if i not in BITS or j not in BITS or xi_w not in BITS:
        raise IndexError("action and state indices must be 0 or 1")
    if xi_w == 0:
        value = Fraction(instance.cost_pair.m[i][j])
    else:
        value = instance.chi * instance.cost_pair.n[i][j]
    return value if instance.exact else float(value)


# ---------------------------------------------------------------------------
# policies


@dataclass(frozen=True, eq=False)
class ConditionalPolicy:
    """A conditional distribution ``q[u_a, u_b, xi_a, xi_b]``.

    Exact policies (ints and Fractions) are checked exactly; float policies
    within ``tol``.
    """

    q: np.ndarray
    tol: float = FLOAT_POLICY_TOL

    def __post_init__(self):
        raw = np.asarray(self.q)
        if raw.shape == (16,):
            raw = raw.reshape(2, 2, 2, 2)
        if raw.shape != (2, 2, 2, 2):
            raise ValueError("policy must have shape (2, 2, 2, 2)")
        if raw.dtype == object or np.issubdtype(raw.dtype, np.integer):
            vals = [to_number(v) for v in raw.flat]
            if all(isinstance(v, Fraction) for v in vals):
                arr = _object_array(vals, (2, 2, 2, 2))
                if any(v < 0 for v in vals):
                    raise ValueError("policy entries must be nonnegative")
                for a, b in itertools.product(BITS, BITS):
                    s = sum(arr[:, :, a, b].flat, Fraction(0))
                    if s != 1:
                        raise ValueError(f"policy not normalised at observation ({a},{b}): {s}")
                arr.flags.writeable = False
                object.__setattr__(self, "q", arr)
                return
            raw = np.array([float(v) for v in vals]).reshape(2, 2, 2, 2)
        arr = np.array(raw, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("policy entries must be finite")
        if np.any(arr < -self.tol):
            raise ValueError("policy entries must be nonnegative")
        sums = arr.sum(axis=(0, 1))
        if np.max(np.abs(sums - 1.0)) > self.tol:
            raise ValueError(f"policy not normalised within {self.tol}: {sums.ravel()}")
        arr.flags.writeable = False
        object.__setattr__(self, "q", arr)

    @property
    def exact(self) -> bool:
        return self.q.dtype == object

    def __getitem__(self, key):
        return self.q[key]


def expected_cost(instance: ProblemInstance, policy: ConditionalPolicy):
    """Expected cost; exact when both instance and policy are exact."""
    w, q = instance.weights, policy.q
    if instance.exact and policy.exact:
        return sum((w[idx] * q[idx] for idx in np.ndindex(2, 2, 2, 2)), Fraction(0))
    return float(np.sum(w.astype(float) * q.astype(float)))


def centralized_optimum(instance: ProblemInstance):
    """Optimum over all conditional policies.

    Returns ``(value, argmin)`` where ``argmin`` maps each observation pair to
    the chosen action-index pair.  Ties go to the lexicographically smallest
    action pair, which also covers zero-mass observations.
    """
    w = instance.weights
    total = Fraction(0) if instance.exact else 0.0
    argmin = {}
    for a, b in itertools.product(BITS, BITS):
        best = min(itertools.product(BITS, BITS), key=lambda u: (w[u[0], u[1], a, b], u))
        argmin[(a, b)] = best
        total += w[best[0], best[1], a, b]
    return total, argmin


# ---------------------------------------------------------------------------
# JSON


def instance_to_dict(instance: ProblemInstance) -> dict:
    p = instance.prior.p
    out = {
        "M": [list(r) for r in instance.cost_pair.m],
        "N": [list(r) for r in instance.cost_pair.n],
        "prior": {f"{a},{b},{w}": format_number(p[a, b, w]) for a, b, w in itertools.product(BITS, repeat=3)},
        "chi": format_number(instance.chi),
    }
    if instance.action_labels != DEFAULT_LABELS:
        out["action_labels"] = [list(x) for x in instance.action_labels]
    return out


def instance_from_dict(data: dict) -> ProblemInstance:
    try:
        pair = BinaryCostPair(data["M"], data["N"])
        prior = JointPrior.from_mapping(data["prior"])
        labels = tuple(tuple(x) for x in data.get("action_labels", DEFAULT_LABELS))
        return make_instance(pair, prior, to_number(data["chi"]), labels)
    except KeyError as exc:
        raise ValueError(f"instance JSON missing field {exc}") from exc


def save_instance(instance: ProblemInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")


def load_instance(path) -> ProblemInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def lcm_denominator(values: Iterable[Fraction]) -> int:
    return math.lcm(*(Fraction(v).denominator for v in values))
