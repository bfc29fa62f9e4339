"""Exact phase-one simplex for small feasibility problems ``A x = b, x >= 0``."""
from __future__ import annotations

from fractions import Fraction


def feasible_point(a_rows, b):
    """Return a rational ``x >= 0`` with ``A x = b``, or ``None`` when infeasible.

    Uses artificial variables and Bland's rule, so it terminates and every
    pivot is exact.  Redundant equality rows are fine: their artificials just
    stay basic at zero.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    rows = []
    for row, rhs in zip(a_rows, b):
        row = [Fraction(v) for v in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        rows.append(row + [Fraction(int(k == len(rows))) for k in range(m)] + [rhs])
    basis = [n + k for k in range(m)]
    width = n + m
    # reduced costs of the phase-one objective sum(artificials)
    obj = [Fraction(0)] * (width + 1)
    for row in rows:
        for c in range(width + 1):
            obj[c] -= row[c]
    for k in range(m):
        obj[n + k] = Fraction(0)

    while True:
        entering = next((c for c in range(width) if obj[c] < 0), None)
        if entering is None:
            break
        ratios = [
            (rows[r][-1] / rows[r][entering], basis[r], r)
            for r in range(m)
            if rows[r][entering] > 0
        ]
        if not ratios:  # unbounded cannot happen in phase one
            break
        _, _, pivot_row = min(ratios)
        _pivot(rows, obj, pivot_row, entering)
        basis[pivot_row] = entering

    if -obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for r, var in enumerate(basis):
        if var < n:
            x[var] = rows[r][-1]
    return x


def _pivot(rows, obj, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for k, row in enumerate(rows):
        if k != r and row[c] != 0:
            f = row[c]
            rows[k] = [v - f * p for v, p in zip(row, rows[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [v - f * p for v, p in zip(obj, rows[r])]
