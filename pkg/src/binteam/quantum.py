"""Two-qubit strategies: validation, occupation measures, the 1/2-CAC witness and see-saw search.

Layouts: ``rho`` is 4x4 in the basis ``|a b>`` ordered 00, 01, 10, 11;
``proj_a[xi, u]`` and ``proj_b[xi, u]`` are 2x2 projectors, so both arrays
have shape ``(2, 2, 2, 2)``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .kernels import _occupation_numpy
from .polytopes import DeterministicVertexLabel
from .team_core import (
    BITS,
    HALF_CAC_FORM,
    ConditionalPolicy,
    JointPrior,
    ProblemInstance,
    make_instance,
)

STRATEGY_TOL = 1e-9
I2 = np.eye(2, dtype=complex)
SQRT3 = math.sqrt(3.0)
# e^{i pi/3} and e^{i 2pi/3}, written out so no trig rounding enters.
EXP_I_PI_3 = complex(0.5, SQRT3 / 2)
EXP_I_2PI_3 = complex(-0.5, SQRT3 / 2)


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    rho: np.ndarray
    proj_a: np.ndarray
    proj_b: np.ndarray

    def __post_init__(self):
        for name, shape in (("rho", (4, 4)), ("proj_a", (2, 2, 2, 2)), ("proj_b", (2, 2, 2, 2))):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_measurements(cls, rho, first_a, first_b) -> "QuantumStrategy":
        """Complete ``P_{u=0}(xi)`` for each side with ``P_{u=1} = I - P_{u=0}``."""
        pa = np.array([[p, I2 - p] for p in first_a], dtype=complex)
        pb = np.array([[p, I2 - p] for p in first_b], dtype=complex)
        return cls(rho, pa, pb)


def strategy_problems(s: QuantumStrategy, tol: float = STRATEGY_TOL) -> list[str]:
    """List every violated strategy constraint (empty when valid)."""
    problems = []
    rho = s.rho
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        problems.append("rho is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        problems.append(f"rho has trace {np.trace(rho).real:.12g}")
    herm = (rho + rho.conj().T) / 2
    if np.linalg.eigvalsh(herm)[0] < -tol:
        problems.append("rho is not positive semidefinite")
    for player, projs in (("A", s.proj_a), ("B", s.proj_b)):
        for xi in BITS:
            for u in BITS:
                p = projs[xi, u]
                if np.max(np.abs(p - p.conj().T)) > tol:
                    problems.append(f"P^{player}_{u}({xi}) is not Hermitian")
                if np.max(np.abs(p @ p - p)) > tol:
                    problems.append(f"P^{player}_{u}({xi}) is not idempotent")
            if np.max(np.abs(projs[xi, 0] + projs[xi, 1] - I2)) > tol:
                problems.append(f"{player} projectors for xi={xi} do not sum to identity")
    return problems


def validate_strategy(s: QuantumStrategy, tol: float = STRATEGY_TOL) -> bool:
    return not strategy_problems(s, tol)


def occupation_array(s: QuantumStrategy) -> np.ndarray:
    """``Q[u_a, u_b, xi_a, xi_b] = Tr((P^A_{u_a}(xi_a) (x) P^B_{u_b}(xi_b)) rho)``.

    A single strategy goes through the numpy contraction; compiling the batch
    kernel would cost more than it saves.
    """
    return _occupation_numpy(s.rho[None], s.proj_a[None], s.proj_b[None])[0]


def occupation_measure(s: QuantumStrategy, tol: float = STRATEGY_TOL) -> ConditionalPolicy:
    return ConditionalPolicy(occupation_array(s), tol=tol)


def quantum_cost(instance: ProblemInstance, s: QuantumStrategy) -> float:
    return float(np.sum(instance.weights.astype(float) * occupation_array(s)))


def embed_deterministic(label: DeterministicVertexLabel) -> QuantumStrategy:
    """Realise a deterministic policy with projectors ``0`` and ``I`` on a maximally mixed state."""
    a, b = DeterministicVertexLabel(*label).actions()
    pa = np.zeros((2, 2, 2, 2), dtype=complex)
    pb = np.zeros((2, 2, 2, 2), dtype=complex)
    for xi in BITS:
        pa[xi, a[xi]] = I2
        pb[xi, b[xi]] = I2
    return QuantumStrategy(np.eye(4, dtype=complex) / 4, pa, pb)


def bloch_projector(theta: float, phi: float) -> np.ndarray:
    """Rank-one projector ``(I + n.sigma) / 2`` for the Bloch direction ``(theta, phi)``."""
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return 0.5 * np.array([[1 + c, s * e.conjugate()], [s * e, 1 - c]], dtype=complex)


def phase_projector(lam: float, a: float, b: float, phase: complex) -> np.ndarray:
    """``(1/lam) [[a, conj(phase)], [phase, b]]``; a projector iff ``a + b = lam`` and ``a*b = 1``."""
    return np.array([[a, np.conj(phase)], [phase, b]], dtype=complex) / lam


def half_cac_instance() -> ProblemInstance:
    prior = JointPrior.from_mapping({
        (0, 0, 1): Fraction(1, 5),
        (0, 1, 1): Fraction(1, 5),
        (1, 0, 1): Fraction(1, 5),
        (1, 1, 0): Fraction(2, 5),
    })
    return make_instance(HALF_CAC_FORM, prior, Fraction(2))


def half_cac_strategy() -> QuantumStrategy:
    """Qubit strategy beating every classical policy on :func:`half_cac_instance`.

    B's projector for ``xi_b = 0`` carries phase ``e^{i 2pi/3}``; with that
    phase the strategy yields the conditionals and cost ``-(7 + 3 sqrt 3)/10``.
    """
    psi = np.array([0.5, 0.0, 0.0, SQRT3 / 2], dtype=complex)
    rho = np.outer(psi, psi.conj())
    a0 = np.array([[1, 0], [0, 0]], dtype=complex)
    a1 = phase_projector(2.0, 1.0, 1.0, EXP_I_PI_3)
    b0 = phase_projector(4.0, 2 - SQRT3, 2 + SQRT3, EXP_I_2PI_3)
    b1 = phase_projector(4.0, 2 - SQRT3, 2 + SQRT3, EXP_I_PI_3.conjugate())
    return QuantumStrategy.from_measurements(rho, [a0, a1], [b0, b1])


def half_cac_witness() -> tuple[ProblemInstance, QuantumStrategy]:
    return half_cac_instance(), half_cac_strategy()


HALF_CAC_WITNESS_COST = (-7 - 3 * SQRT3) / 10


# ---------------------------------------------------------------------------
# random strategies


def random_density(rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = int(rng.integers(1, 5)) if rank is None else rank
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_projector(rng: np.random.Generator) -> np.ndarray:
    """Mostly rank one (uniform on the Bloch sphere); rank 0 or 2 with probability 0.1 each."""
    r = rng.random()
    if r < 0.1:
        return np.zeros((2, 2), dtype=complex)
    if r < 0.2:
        return I2.copy()
    theta = math.acos(1 - 2 * rng.random())
    return bloch_projector(theta, 2 * math.pi * rng.random())


def random_strategy(rng: np.random.Generator) -> QuantumStrategy:
    return QuantumStrategy.from_measurements(
        random_density(rng),
        [random_projector(rng) for _ in BITS],
        [random_projector(rng) for _ in BITS],
    )


# ---------------------------------------------------------------------------
# see-saw


@dataclass
class SeesawResult:
    strategy: QuantumStrategy
    value: float
    converged: bool
    iterations: int
    history: list[float] = field(repr=False)
    restart_values: list[float] = field(repr=False)

    def __iter__(self):
        yield self.strategy
        yield self.value


def _min_eigvec(h: np.ndarray):
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    return vals[0], vecs[:, 0]


def _negative_projector(h: np.ndarray):
    """Projector onto the negative eigenspace of ``h`` and the sum of those eigenvalues."""
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    neg = vals < 0
    v = vecs[:, neg]
    return v @ v.conj().T, float(vals[neg].sum())


def _update_rho(w, pa, pb):
    k = np.zeros((4, 4), dtype=complex)
    for ua, ub, xa, xb in itertools.product(BITS, repeat=4):
        if w[ua, ub, xa, xb] != 0:
            k += w[ua, ub, xa, xb] * np.kron(pa[xa, ua], pb[xb, ub])
    val, vec = _min_eigvec(k)
    return np.outer(vec, vec.conj()), float(val)


def _update_side(w, rho, other, side):
    """Best projective measurement for one side with the other side and ``rho`` fixed."""
    r = rho.reshape(2, 2, 2, 2)
    if side == "A":
        # reduced operators X[xi_a, u_a] with Tr(P_A X) = Tr((P_A (x) P_B) rho)
        red = np.einsum("ybc,acdb->yad", other.reshape(4, 2, 2), r).reshape(2, 2, 2, 2)  # [xb, ub, a, a']
        eff = np.einsum("uvxy,yvad->xuad", w, red)
    else:
        red = np.einsum("xac,cbad->xbd", other.reshape(4, 2, 2), r).reshape(2, 2, 2, 2)  # [xa, ua, b, b']
        eff = np.einsum("uvxy,xubd->yvbd", w, red)
    projs = np.empty((2, 2, 2, 2), dtype=complex)
    value = 0.0
    for xi in BITS:
        p0, neg = _negative_projector(eff[xi, 0] - eff[xi, 1])
        projs[xi, 0] = p0
        projs[xi, 1] = I2 - p0
        value += float(np.trace(eff[xi, 1]).real) + neg
    return projs, value


def _random_measurements(rng):
    out = np.empty((2, 2, 2, 2), dtype=complex)
    for xi in BITS:
        p = bloch_projector(math.acos(1 - 2 * rng.random()), 2 * math.pi * rng.random())
        out[xi, 0], out[xi, 1] = p, I2 - p
    return out


def _seesaw_run(w, rng, max_iters, tol):
    pa, pb = _random_measurements(rng), _random_measurements(rng)
    history = []
    prev = math.inf
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        rho, v = _update_rho(w, pa, pb)
        history.append(v)
        pa, v = _update_side(w, rho, pb, "A")
        history.append(v)
        pb, v = _update_side(w, rho, pa, "B")
        history.append(v)
        if prev - v < tol:
            converged = True
            break
        prev = v
    return QuantumStrategy(rho, pa, pb), history, converged, it


def seesaw_weights(weights, restarts: int = 32, max_iters: int = 500, seed: int = 0, tol: float = 1e-12) -> SeesawResult:
    """Alternating minimisation of ``sum w[u_a,u_b,xi_a,xi_b] Q[u_a,u_b,xi_a,xi_b]`` over qubit strategies.

    Each sweep replaces the state by the ground state of the effective
    two-qubit cost operator, then each side's measurements by the negative
    eigenspace projectors of its effective operators.  Every step is an exact
    block minimisation, so the objective never increases.  Restart ``r``
    draws its starting measurements from ``default_rng([seed, r])``.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    w = np.asarray(weights, dtype=float).reshape(2, 2, 2, 2)
    best = None
    values = []
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        strat, hist, conv, its = _seesaw_run(w, rng, max_iters, tol)
        value = float(np.sum(w * occupation_array(strat)))
        values.append(value)
        if best is None or value < best.value:
            best = SeesawResult(strat, value, conv, its, hist, values)
    best.restart_values = values
    return best


def seesaw_optimize(instance: ProblemInstance, restarts: int = 32, max_iters: int = 500, seed: int = 0) -> SeesawResult:
    return seesaw_weights(instance.weights.astype(float), restarts, max_iters, seed)


def chsh_weights() -> np.ndarray:
    """Cost weights whose expected value is ``-S`` (minus the CHSH score)."""
    w = np.empty((2, 2, 2, 2))
    for i, j, a, b in itertools.product(BITS, repeat=4):
        w[i, j, a, b] = -1.0 if (i ^ j) == (a & b) else 1.0
    return w


# ---------------------------------------------------------------------------
# JSON


def _cplx(m) -> list:
    return [[[float(format(z.real, ".17g")), float(format(z.imag, ".17g"))] for z in row] for row in m]


def _uncplx(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def strategy_to_dict(s: QuantumStrategy) -> dict:
    projectors = {}
    for player, projs in (("A", s.proj_a), ("B", s.proj_b)):
        for xi, u in itertools.product(BITS, BITS):
            projectors[f"{player},{xi},{u}"] = _cplx(projs[xi, u])
    return {"dim": 2, "rho": _cplx(s.rho), "projectors": projectors}


def strategy_from_dict(data: dict) -> QuantumStrategy:
    if data.get("dim", 2) != 2:
        raise ValueError("only qubit strategies (dim 2) are supported")
    try:
        rho = _uncplx(data["rho"])
        pa = np.empty((2, 2, 2, 2), dtype=complex)
        pb = np.empty((2, 2, 2, 2), dtype=complex)
        for xi, u in itertools.product(BITS, BITS):
            pa[xi, u] = _uncplx(data["projectors"][f"A,{xi},{u}"])
            pb[xi, u] = _uncplx(data["projectors"][f"B,{xi},{u}"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed strategy JSON: {exc}") from exc
    return QuantumStrategy(rho, pa, pb)


def save_strategy(s: QuantumStrategy, path) -> None:
    Path(path).write_text(json.dumps(strategy_to_dict(s), indent=2) + "\n")


def load_strategy(path) -> QuantumStrategy:
    return strategy_from_dict(json.loads(Path(path).read_text()))
