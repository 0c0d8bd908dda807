"""Real branches of the Lambert W function (inverse of w -> w e^w).

Halley iteration seeded by a series approximation near the branch point
-1/e and by log-based asymptotics elsewhere, with a bisection fallback
on the rare seeds Halley fails to polish.  Accuracy target: the
round-trip w e^w reproduces the argument to 1e-14 relative.

Branches
--------
* principal (0): defined for arg >= -1/e, returns w >= -1
* lower (-1):    defined for -1/e <= arg < 0, returns w <= -1
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

#: branch point abscissa -1/e
BRANCH_POINT = -math.exp(-1.0)

_MAX_HALLEY = 100


def _halley(arg: float, w: float) -> float | None:
    """Polish a seed; returns None when the iteration stalls.

    Accepts on either a tiny residual w e^w - arg (the criterion that
    matters near w = -1, where steps stagnate above round-off) or a
    step below round-off (the criterion for large w, where residual
    cancellation keeps the relative residual at eps * |w|).
    """
    best_w, best_f = w, math.inf
    for _ in range(_MAX_HALLEY):
        ew = math.exp(w)
        f = w * ew - arg
        af = abs(f)
        if af < best_f:
            best_w, best_f = w, af
        if af <= 8e-16 * abs(arg):
            return w
        wp1 = w + 1.0
        if wp1 == 0.0:
            w += 1e-12
            continue
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 2e-16 * (2.0 + abs(w)):
            return w
    if best_f <= 1e-14 * abs(arg):
        return best_w
    return None


def _bisect(arg: float, branch: int) -> float:
    """Full-precision bisection on the monotone piece of w e^w."""
    f = lambda w: w * math.exp(w) - arg
    if branch == 0:
        lo, hi = -1.0, 1.0
        while f(hi) < 0.0:
            hi *= 2.0
    else:
        lo, hi = -1.0, -1.0
        while f(lo) < 0.0:
            lo *= 2.0
            if lo < -750.0:
                raise ConvergenceError("lower-branch bisection bracket failed")
        lo, hi = lo, -1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if (f(mid) > 0.0) == (f(hi) > 0.0):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _seed(arg: float, branch: int) -> float:
    # series around the branch point, p = +-sqrt(2 (e arg + 1)):
    # W = -1 + p - p^2/3 + 11 p^3/72 + ...
    q = 2.0 * (1.0 + math.e * arg)
    if q < 0.04:
        p = math.sqrt(max(q, 0.0))
        if branch == -1:
            p = -p
        return -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    if branch == 0:
        if arg > 3.0:
            L1 = math.log(arg)
            return L1 - math.log(L1)
        return math.log1p(arg)
    # lower branch away from -1/e: W_-1(z) ~ log(-z) - log(-log(-z))
    L1 = math.log(-arg)
    return L1 - math.log(-L1)


def lambert_w(arg: float, branch: int = 0) -> float:
    """Real Lambert W of ``arg`` on the requested branch (0 or -1).

    Raises
    ------
    DomainError
        If ``arg`` lies outside the branch's domain.
    """
    if branch not in (0, -1):
        raise ValueError(f"branch must be 0 or -1, got {branch}")
    arg = float(arg)
    if arg < BRANCH_POINT:
        raise DomainError(f"argument {arg} below the branch point -1/e")
    if branch == -1 and arg >= 0.0:
        raise DomainError("lower branch requires -1/e <= arg < 0")
    if arg == BRANCH_POINT:
        return -1.0
    if arg == 0.0:
        return 0.0
    w = _halley(arg, _seed(arg, branch))
    if w is not None and (w < -1.0 - 1e-6 if branch == 0 else w > -1.0 + 1e-6):
        w = None  # iteration slid onto the other branch: discard
    if w is None:
        w = _halley(arg, _bisect(arg, branch))
        if w is None:
            raise ConvergenceError(f"Lambert W failed to converge at {arg}")
    # absorb round-off at the branch seam
    if branch == 0 and w < -1.0:
        w = -1.0
    elif branch == -1 and w > -1.0:
        w = -1.0
    return w
