import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from binteam import kernels
from binteam.kernels import IMPLEMENTATIONS, central_costs, integer_weights, occupation_batch, vertex_costs
from binteam.polytopes import VERTEX_LABELS, VERTEX_MATRIX
from binteam.polytopes import vertex_costs as exact_vertex_costs
from binteam.quantum import occupation_array, random_strategy
from binteam.team_core import BinaryCostPair, ProblemInstance, centralized_optimum

from conftest import random_exact_instance


def _weights(rng, n=64):
    return rng.integers(-10**6, 10**6, size=(n, 16), dtype=np.int64)


@pytest.mark.parametrize("impl", [0, 1], ids=["numpy", "numba"])
def test_vertex_cost_implementations_agree(rng, impl):
    w = _weights(rng)
    got = IMPLEMENTATIONS["vertex_costs"][impl](w, np.ascontiguousarray(VERTEX_MATRIX))
    assert np.array_equal(got, w @ VERTEX_MATRIX.T)


@pytest.mark.parametrize("impl", [0, 1], ids=["numpy", "numba"])
def test_central_cost_implementations_agree(rng, impl):
    w = _weights(rng)
    expect = np.array([sum(min(row[4 * u + o] for u in range(4)) for o in range(4)) for row in w])
    assert np.array_equal(IMPLEMENTATIONS["central_costs"][impl](w), expect)


def test_occupation_implementations_agree(rng):
    strats = [random_strategy(rng) for _ in range(20)]
    rho = np.stack([s.rho for s in strats])
    pa = np.stack([s.proj_a for s in strats])
    pb = np.stack([s.proj_b for s in strats])
    numpy_fn, numba_fn = IMPLEMENTATIONS["occupation_batch"]
    a, b = numpy_fn(rho, pa, pb), numba_fn(rho, pa, pb)
    assert np.allclose(a, b, atol=1e-13)
    # independent route: explicit Kronecker products
    s = strats[0]
    for ua, ub, xa, xb in np.ndindex(2, 2, 2, 2):
        direct = np.trace(np.kron(s.proj_a[xa, ua], s.proj_b[xb, ub]) @ s.rho).real
        assert abs(a[0, ua, ub, xa, xb] - direct) < 1e-13


def test_integer_weights_match_exact_costs(rng):
    for code in (0, 97, 105, 255, 18):
        inst = random_exact_instance(rng, BinaryCostPair.from_code(code))
        w, scale = integer_weights(inst)
        costs = vertex_costs(w[None], VERTEX_MATRIX)[0]
        exact = exact_vertex_costs(inst)
        for k, lab in enumerate(VERTEX_LABELS):
            assert Fraction(int(costs[k]), 2 * scale) == exact[lab]
        assert Fraction(int(central_costs(w[None])[0]), scale) == centralized_optimum(inst)[0]


def test_integer_weights_rejects_float_instance(rng):
    inst = random_exact_instance(rng, BinaryCostPair.from_code(3)).to_float()
    with pytest.raises(ValueError):
        integer_weights(inst)


def test_occupation_batch_single_matches_wrapper(rng):
    s = random_strategy(rng)
    assert np.allclose(occupation_batch(s.rho[None], s.proj_a[None], s.proj_b[None])[0], occupation_array(s))


def test_env_flag_selects_numpy_path():
    code = "import binteam.kernels as k; print(k.USING_NUMBA)"
    env = dict(os.environ, BINTEAM_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_dispatch_reports_backend():
    pytest.importorskip("numba")
    if os.environ.get("BINTEAM_DISABLE_NUMBA", "0") in ("", "0"):
        assert kernels.USING_NUMBA


def test_integer_weights_with_shared_denominators():
    # prior denominator 4 and chi = 1/2: lcm(4, 2) = 4 is not enough for P * chi
    from binteam.team_core import JointPrior
    inst = ProblemInstance(BinaryCostPair.from_code(0xF0), JointPrior([Fraction(1, 4)] * 4 + [0] * 4), Fraction(1, 2))
    w, scale = integer_weights(inst)
    assert scale == 8
    assert Fraction(int(central_costs(w[None])[0]), scale) == centralized_optimum(inst)[0]
