"""Bisection utilities for monotone catalog maps.

Brackets start at the working interval and expand geometrically when the
target value lies beyond its image (the maps are bijections of the line, so
expansion terminates for monotone inputs).
"""

from __future__ import annotations

import numpy as np


def monotone_inverse_batch(
    f,
    ys: np.ndarray,
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_expand: int = 60,
    machine_precision: bool = False,
):
    """Solve f(x) = y for each y by bracketed bisection.

    Returns (xs, valid); entries that could not be bracketed within
    max_expand doublings are NaN with valid False. machine_precision
    bisects until the brackets collapse onto adjacent floats, which keeps
    the RELATIVE error at machine scale even for targets near zero
    (iterated-inverse callers amplify absolute errors exponentially).
    """
    ys = np.asarray(ys, dtype=float)
    increasing = float(f(hi)) > float(f(lo))
    sgn = 1.0 if increasing else -1.0

    los = np.full(ys.shape, float(lo))
    his = np.full(ys.shape, float(hi))
    width = hi - lo

    target = sgn * ys
    need_hi = sgn * np.asarray(f(his), dtype=float) < target
    step = width
    for _ in range(max_expand):
        if not need_hi.any():
            break
        his[need_hi] += step
        step *= 2.0
        need_hi = sgn * np.asarray(f(his), dtype=float) < target
    need_lo = sgn * np.asarray(f(los), dtype=float) > target
    step = width
    for _ in range(max_expand):
        if not need_lo.any():
            break
        los[need_lo] -= step
        step *= 2.0
        need_lo = sgn * np.asarray(f(los), dtype=float) > target

    valid = ~(need_hi | need_lo)
    span = his - los
    if machine_precision:
        iters = 1100
    else:
        iters = int(np.ceil(np.log2(max(span.max(), tol) / tol))) + 2
    for _ in range(iters):
        mid = 0.5 * (los + his)
        if machine_precision and not np.any((los < mid) & (mid < his)):
            break
        go_right = sgn * np.asarray(f(mid), dtype=float) < target
        los = np.where(go_right, mid, los)
        his = np.where(go_right, his, mid)
    xs = 0.5 * (los + his)
    xs = np.where(valid, xs, np.nan)
    return xs, valid


def monotone_inverse(f, y: float, lo: float, hi: float, tol: float = 1e-12):
    """Scalar convenience wrapper; returns None when unbracketable."""
    xs, valid = monotone_inverse_batch(f, np.array([y]), lo, hi, tol)
    return float(xs[0]) if valid[0] else None
