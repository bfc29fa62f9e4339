"""Batch kernels for the sampled audit and the quantum property checks.

Each kernel exists twice: a loop version compiled by numba and a vectorised
numpy version.  The public names dispatch on :data:`USING_NUMBA`; set
``BINTEAM_DISABLE_NUMBA=1`` before import to force the numpy path.

The integer kernels work on instances rescaled to integers (see
:func:`integer_weights`), so both paths are exact.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._jit import USING_NUMBA, njit
from .team_core import ProblemInstance, lcm_denominator

# |weight| * 2 * 16 must stay below this for int64 sums to be exact.
INT_LIMIT = 2**58


def integer_weights(instance: ProblemInstance) -> tuple[np.ndarray, int]:
    """Rescale an exact instance's cost weights to integers.

    Returns ``(w, scale)`` with ``w`` an int64 array of length 16 (C order of
    ``[u_a, u_b, xi_a, xi_b]``) such that ``weights == w / scale``.
    """
    if not instance.exact:
        raise ValueError("integer rescaling needs an exact instance")
    chi = Fraction(instance.chi)
    # chi multiplies prior masses, so the scale needs both denominators as factors
    scale = lcm_denominator(instance.prior.p.flat) * chi.denominator
    out = np.empty(16, dtype=np.int64)
    for k, idx in enumerate(np.ndindex(2, 2, 2, 2)):
        v = instance.weights[idx] * scale
        assert v.denominator == 1
        if abs(v.numerator) * 32 >= INT_LIMIT:
            raise OverflowError("instance too large for int64 kernels")
        out[k] = v.numerator
    return out, scale


def integer_weights_from_counts(counts: np.ndarray, m: np.ndarray, n: np.ndarray, chi_num: np.ndarray, chi_den: np.ndarray) -> np.ndarray:
    """Vectorised :func:`integer_weights` for many priors sharing one cost pair.

    ``counts`` has shape ``(k, 2, 2, 2)`` with every row summing to the same
    denominator ``D``; ``chi = chi_num / chi_den`` per row.  The result is on
    the scale ``D * chi_den``.
    """
    counts = np.asarray(counts, dtype=np.int64)
    c0 = counts[..., 0] * chi_den[:, None, None]
    c1 = counts[..., 1] * chi_num[:, None, None]
    # w[k, i, j, a, b]
    w = c0[:, None, None, :, :] * m[None, :, :, None, None] + c1[:, None, None, :, :] * n[None, :, :, None, None]
    return w.reshape(len(counts), 16)


# ---------------------------------------------------------------------------
# vertex costs


def _vertex_costs_numpy(weights: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    return weights @ vertices.T


@njit
def _vertex_costs_numba(weights, vertices):
    n, k = weights.shape[0], vertices.shape[0]
    out = np.zeros((n, k), dtype=np.int64)
    for r in range(n):
        for v in range(k):
            acc = 0
            for f in range(16):
                acc += weights[r, f] * vertices[v, f]
            out[r, v] = acc
    return out


def vertex_costs(weights: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Costs of every vertex policy for every weight row: ``weights @ vertices.T``."""
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    vertices = np.ascontiguousarray(vertices, dtype=np.int64)
    if USING_NUMBA:
        return _vertex_costs_numba(weights, vertices)
    return _vertex_costs_numpy(weights, vertices)


# ---------------------------------------------------------------------------
# centralised optimum


def _central_costs_numpy(weights: np.ndarray) -> np.ndarray:
    return weights.reshape(-1, 4, 4).min(axis=1).sum(axis=1)


@njit
def _central_costs_numba(weights):
    n = weights.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for r in range(n):
        acc = 0
        for obs in range(4):
            best = weights[r, obs]
            for u in range(1, 4):
                v = weights[r, 4 * u + obs]
                if v < best:
                    best = v
            acc += best
        out[r] = acc
    return out


def central_costs(weights: np.ndarray) -> np.ndarray:
    """Pointwise-minimum cost per row (unscaled integer units)."""
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    if USING_NUMBA:
        return _central_costs_numba(weights)
    return _central_costs_numpy(weights)


# ---------------------------------------------------------------------------
# occupation measures


def _occupation_numpy(rho: np.ndarray, proj_a: np.ndarray, proj_b: np.ndarray) -> np.ndarray:
    r = rho.reshape(-1, 2, 2, 2, 2)  # [n, a', b', a, b]
    # Tr((P_A (x) P_B) rho) = sum P_A[a, a'] P_B[b, b'] rho[a', b', a, b]
    q = np.einsum("nxuij,nyvkl,njlik->nuvxy", proj_a, proj_b, r, optimize=True)
    return q.real


@njit
def _occupation_numba(rho, proj_a, proj_b):
    n = rho.shape[0]
    out = np.zeros((n, 2, 2, 2, 2))
    for r in range(n):
        for xa in range(2):
            for xb in range(2):
                for ua in range(2):
                    for ub in range(2):
                        acc = 0.0 + 0.0j
                        for a in range(2):
                            for ap in range(2):
                                pa = proj_a[r, xa, ua, a, ap]
                                for b in range(2):
                                    for bp in range(2):
                                        acc += pa * proj_b[r, xb, ub, b, bp] * rho[r, 2 * ap + bp, 2 * a + b]
                        out[r, ua, ub, xa, xb] = acc.real
    return out


def occupation_batch(rho: np.ndarray, proj_a: np.ndarray, proj_b: np.ndarray) -> np.ndarray:
    """Occupation measures of many two-qubit strategies.

    ``rho``: ``(n, 4, 4)``; ``proj_a``/``proj_b``: ``(n, xi, u, 2, 2)``.
    Returns ``(n, u_a, u_b, xi_a, xi_b)``.
    """
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    proj_a = np.ascontiguousarray(proj_a, dtype=np.complex128)
    proj_b = np.ascontiguousarray(proj_b, dtype=np.complex128)
    if USING_NUMBA:
        return _occupation_numba(rho, proj_a, proj_b)
    return _occupation_numpy(rho, proj_a, proj_b)


IMPLEMENTATIONS = {
    "vertex_costs": (_vertex_costs_numpy, _vertex_costs_numba),
    "central_costs": (_central_costs_numpy, _central_costs_numba),
    "occupation_batch": (_occupation_numpy, _occupation_numba),
}

__all__ = [
    "USING_NUMBA",
    "integer_weights",
    "integer_weights_from_counts",
    "vertex_costs",
    "central_costs",
    "occupation_batch",
    "IMPLEMENTATIONS",
]
