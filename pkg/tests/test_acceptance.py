"""Acceptance criteria, one test each.

Every test records a single ``AC<n> PASS|FAIL`` line; the lines are printed in
the pytest terminal summary and by ``python tests/test_acceptance.py``.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from binteam.kernels import integer_weights, occupation_batch, vertex_costs
from binteam.polytopes import (
    VERTEX_MATRIX,
    DeterministicVertexLabel,
    deterministic_vertex,
    expected_cost,
    is_no_signalling,
    local_optimum,
)
from binteam.quantum import (
    HALF_CAC_WITNESS_COST,
    chsh_weights,
    half_cac_witness,
    occupation_array,
    occupation_measure,
    quantum_cost,
    random_strategy,
    seesaw_optimize,
    seesaw_weights,
)
from binteam.team_core import BinaryCostPair, JointPrior, ProblemInstance
from binteam.verification import (
    DECOMPOSITION,
    audit_theorem,
    cac_search,
    check_c13_decomposition,
    check_transport_invariants,
    counting_suite,
    decomposition_labels,
)
from binteam.polytopes import NS_LABELS

RESULTS: list[str] = []
SQRT3 = math.sqrt(3)


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def random_instance(rng: np.random.Generator, pair: BinaryCostPair | None = None) -> ProblemInstance:
    pair = pair or BinaryCostPair.from_code(int(rng.integers(256)))
    counts = rng.integers(0, 50, size=8)
    counts[rng.integers(8)] += 1
    chi = Fraction(int(rng.integers(1, 41)), int(rng.integers(1, 11)))
    return ProblemInstance(pair, JointPrior([Fraction(int(c), int(counts.sum())) for c in counts]), chi)


# ---------------------------------------------------------------------------


def test_ac01_witness_reproduction():
    def run():
        inst, strat = half_cac_witness()
        return quantum_cost(inst, strat), local_optimum(inst)[0]

    (jq, jl), elapsed = timed(run)
    err = abs(jq - (-7 - 3 * SQRT3) / 10)
    ok = err <= 1e-10 and jl == Fraction(-6, 5) and jq < float(jl) and elapsed < 1.0
    record(1, "witness reproduction", ok, f"J_Q={jq:.12f} |err|={err:.1e} J_L={jl} t={elapsed:.3f}s")


EXPECTED_TABLE = [
    ("0000", "-2/5"), ("1000", "-6/5"), ("0100", "-2/5"), ("1100", "-6/5"),
    ("0010", "-6/5"), ("1010", "-6/5"), ("0110", "-2/5"), ("1110", "-2/5"),
    ("0001", "-2/5"), ("0101", "-4/5"), ("1001", "-2/5"), ("1101", "-4/5"),
    ("0011", "-6/5"), ("0111", "-4/5"), ("1011", "-2/5"), ("1111", "0"),
]


def test_ac02_deterministic_cost_table():
    def run():
        inst, _ = half_cac_witness()
        mismatches = []
        for row, expected in EXPECTED_TABLE:
            a, b = (int(row[0]), int(row[1])), (int(row[2]), int(row[3]))
            value = expected_cost(inst, deterministic_vertex(DeterministicVertexLabel.from_actions(a, b)))
            if value != Fraction(expected):
                mismatches.append((row, value))
        return mismatches, local_optimum(inst)

    (mismatches, (value, label)), elapsed = timed(run)
    optimum_ok = label.actions() == ((0, 0), (1, 1))
    ok = not mismatches and optimum_ok and value == Fraction(-6, 5) and elapsed < 1.0
    record(2, "deterministic cost table", ok,
           f"16 rows, mismatches={mismatches}, argmin actions={label.actions()} t={elapsed:.3f}s")


EXPECTED_CONDITIONALS = {
    (0, 0, 1, 1): (SQRT3 + 2) / 8,
    (0, 1, 0, 0): (SQRT3 + 2) / 16,
    (1, 0, 0, 0): 3 * (SQRT3 + 2) / 16,
    (0, 1, 0, 1): (SQRT3 + 2) / 16,
    (1, 0, 0, 1): 3 * (SQRT3 + 2) / 16,
    (0, 1, 1, 0): 1 / 4,
    (1, 0, 1, 0): (SQRT3 + 2) / 8,
}


def test_ac03_witness_conditionals():
    q = occupation_array(half_cac_witness()[1])
    worst = max(abs(q[idx] - v) for idx, v in EXPECTED_CONDITIONALS.items())
    record(3, "witness conditionals", worst <= 1e-10, f"7 values, max |err|={worst:.1e}")


def test_ac04_counting_suite():
    checks, elapsed = timed(counting_suite)
    ok = all(c.passed for c in checks) and elapsed < 1.0
    detail = ", ".join(f"{c.name}={'ok' if c.passed else c.detail}" for c in checks)
    record(4, "counting suite", ok, f"{detail} t={elapsed:.3f}s")


def _entry_equivalent(mutant) -> bool:
    """True when the mutant pairs every box with policies having the same (0,0) entries."""
    for box in NS_LABELS:
        for orig, mut in zip(decomposition_labels(*box), decomposition_labels(*box, mutant)):
            if not (deterministic_vertex(orig).q[0, 0] == deterministic_vertex(mut).q[0, 0]).all():
                return False
    return True


def test_ac05_decomposition_exhaustion():
    def run():
        base = check_c13_decomposition()
        outcomes = [(name, k, check_c13_decomposition(m).passed, _entry_equivalent(m))
                    for name, k, m in DECOMPOSITION.mutations()]
        return base, outcomes

    (base, outcomes), elapsed = timed(run)
    killed = sum(not passed for _, _, passed, _ in outcomes)
    distinguishable = [o for o in outcomes if not o[3]]
    # every mutant that changes a paired (0,0) entry must be caught
    ok = (base.passed and distinguishable and all(not o[2] for o in distinguishable)
          and all(not o[2] for o in outcomes if o[0] == "x") and elapsed < 1.0)
    equivalent = [f"{n}[{k}]" for n, k, _, eq in outcomes if eq]
    record(5, "decomposition exhaustion", ok,
           f"32/32 assignments, {killed}/{len(outcomes)} mutants killed, entry-equivalent: {equivalent} t={elapsed:.3f}s")


def test_ac06_elimination_audit():
    report, elapsed = timed(lambda: audit_theorem(seed=0, samples_per_class=500))
    elim = [c for c in report.checks if c.name == "ns-equals-local"]
    failures = report.failures
    ok = report.passed and len(elim) == 246 and all(c.passed for c in elim) and elapsed < 60.0
    first = failures[0].counterexample if failures else None
    record(6, "elimination audit", ok,
           f"{len(elim)} classes x 500 instances, {len(report.checks)} checks, "
           f"{len(failures)} failed, t={elapsed:.1f}s" + (f", counterexample={first}" if first else ""))


def test_ac07_quantum_inside_ns():
    rng = np.random.default_rng(7)
    pairs = [(random_instance(rng), random_strategy(rng)) for _ in range(1000)]
    rho = np.stack([s.rho for _, s in pairs])
    q = occupation_batch(rho, np.stack([s.proj_a for _, s in pairs]), np.stack([s.proj_b for _, s in pairs]))
    marg_a, marg_b = q.sum(axis=2), q.sum(axis=1)  # [n, u_a, xi_a, xi_b], [n, u_b, xi_a, xi_b]
    signalling = np.maximum(np.abs(marg_a[..., 0] - marg_a[..., 1]).max(axis=(1, 2)),
                            np.abs(marg_b[:, :, 0] - marg_b[:, :, 1]).max(axis=(1, 2)))
    gaps = []
    for k, (inst, strat) in enumerate(pairs):
        w, scale = integer_weights(inst)
        ns = Fraction(int(vertex_costs(w[None], VERTEX_MATRIX)[0].min()), 2 * scale)
        gaps.append(float(np.sum(inst.weights.astype(float) * q[k])) - float(ns))
        assert is_no_signalling(occupation_measure(strat), tol=1e-9) == (signalling[k] <= 1e-9)
    gaps = np.array(gaps)
    bad = int(np.sum((signalling > 1e-9) | (gaps < -1e-8)))
    record(7, "quantum inside no-signalling", bad == 0,
           f"1000 draws, max signalling={signalling.max():.1e}, min(J_Q - J_NS)={gaps.min():.3e}, violations={bad}")


def _monotone(history) -> bool:
    return bool(np.all(np.diff(history) <= 1e-12))


def test_ac08_seesaw_sanity():
    chsh = seesaw_weights(chsh_weights(), restarts=32, seed=0)
    inst, _ = half_cac_witness()
    half = seesaw_optimize(inst, restarts=32, seed=0)
    singles = [seesaw_optimize(inst, restarts=1, seed=s) for s in range(1, 9)]
    singles += [seesaw_weights(chsh_weights(), restarts=1, seed=s) for s in range(1, 9)]
    s_value = abs(chsh.value)
    monotone = all(_monotone(r.history) for r in [chsh, half, *singles])
    ok = s_value >= 2 * math.sqrt(2) - 1e-3 and half.value <= -1.219 and monotone
    record(8, "see-saw sanity", ok,
           f"|S|={s_value:.9f} (2sqrt2={2 * math.sqrt(2):.9f}), 1/2-CAC value={half.value:.7f}, monotone={monotone}")


def test_ac09_cac_advantage():
    inst, res, gap = cac_search(seed=0)
    t = inst.prior.p[1, 1, 1]
    record(9, "CAC advantage recovery", gap > 1e-3,
           f"chi=3/4, t={t}, J_L={local_optimum(inst)[0]}, J_Q={res.value:.9f}, gap={gap:.4f}")


def test_ac10_equivalence_transport():
    rng = np.random.default_rng(10)
    results = [check_transport_invariants(random_instance(rng)) for _ in range(200)]
    failed = [r for r in results if not r.passed]
    record(10, "equivalence transport", not failed,
           f"200 instances x 5 actions, failures={len(failed)}"
           + (f", first={failed[0].counterexample}" if failed else ""))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
