"""Adaptive Dormand-Prince 5(4) integrator with PI step-size control.

Small, self-contained embedded pair tailored to the planar fields of
this package: dense per-step recording (state and derivative at every
accepted step, enabling cubic Hermite post-processing), a user stop
predicate evaluated after each accepted step, and graceful handling of
stages that leave the field's domain (the step is shrunk instead of
aborting, so domain exit is reported at the boundary, not past it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Dormand-Prince 5(4) tableau; the propagated solution is 5th order and
# the embedded 4th-order difference drives the error estimate.  FSAL:
# the last stage equals the first stage of the accepted next step.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_ERR = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
                 -17253 / 339200, 22 / 525, -1 / 40])

_ORDER = 5
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents (error^-kI * previous_error^kP)
_KI = 0.7 / _ORDER
_KP = 0.4 / _ORDER

FINISHED = "finished"
STOPPED = "stopped"
MAX_STEPS = "max_steps"
DOMAIN_EXIT = "domain_exit"


@dataclass
class OdeSolution:
    """Record of one adaptive integration run.

    ``t`` holds the accepted times, ``y`` the states (n, dim) and ``f``
    the field values at those states; ``status`` is one of ``finished``
    (reached max_time), ``stopped`` (stop predicate fired), ``max_steps``
    or ``domain_exit``.
    """

    t: np.ndarray
    y: np.ndarray
    f: np.ndarray
    status: str
    steps: int
    rejected: int


def _initial_step(f0: np.ndarray, y0: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.max(np.abs(y0) / scale))
    d1 = float(np.max(np.abs(f0) / scale))
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    return h


def integrate_adaptive(field, t0: float, y0, max_time: float, *,
                       rtol: float = 1e-10, atol: float = 1e-12,
                       max_steps: int = 200_000, stop=None) -> OdeSolution:
    """Integrate ``y' = field(t, y)`` forward from ``t0`` until ``max_time``.

    Parameters
    ----------
    field : callable
        ``field(t, y) -> ndarray``; may raise DomainError, in which case
        the offending step is shrunk and, below the minimal step size,
        the run ends with status ``domain_exit``.
    stop : callable, optional
        ``stop(t, y) -> bool`` checked after every accepted step; a
        truthy value ends the run with status ``stopped``.

    Notes
    -----
    Step acceptance uses the scaled RMS norm of the embedded error
    estimate; accepted steps update the size through a PI controller
    (Gustafsson-style), rejected steps fall back to the plain integral
    controller.
    """
    t = float(t0)
    y = np.asarray(y0, dtype=float).copy()
    k = np.empty((7, y.size))
    try:
        f0 = np.asarray(field(t, y), dtype=float)
    except DomainError:
        raise DomainError("initial state outside the field domain")
    k[0] = f0

    ts = [t]
    ys = [y.copy()]
    fs = [f0.copy()]

    h = _initial_step(f0, y, rtol, atol)
    h = min(h, max_time - t0)
    err_prev = 1.0
    status = FINISHED
    steps = 0
    rejected = 0
    h_min_floor = 1e-14 * max(1.0, abs(max_time))

    while t < max_time:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        h = min(h, max_time - t)
        if h < h_min_floor:
            status = DOMAIN_EXIT
            break

        try:
            for i in range(1, 7):
                yi = y + h * (_A[i] @ k[:i])
                k[i] = field(t + _C[i] * h, yi)
        except DomainError:
            h *= 0.25
            rejected += 1
            continue

        y_new = y + h * (_B5 @ k)
        err_vec = h * (_ERR @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean(np.square(err_vec / scale))))

        if err <= 1.0:
            t += h
            y = y_new
            k[0] = k[6]  # FSAL
            steps += 1
            ts.append(t)
            ys.append(y.copy())
            fs.append(k[6].copy())
            if stop is not None and stop(t, y):
                status = STOPPED
                break
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * err ** (-_KI) * err_prev ** _KP
            err_prev = max(err, 1e-10)
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        else:
            rejected += 1
            h *= min(1.0, max(_MIN_FACTOR, _SAFETY * err ** (-1.0 / _ORDER)))

    return OdeSolution(t=np.array(ts), y=np.array(ys), f=np.array(fs),
                       status=status, steps=steps, rejected=rejected)


def hermite_extremum_max(t0: float, t1: float, p0: float, p1: float,
                         d0: float, d1: float) -> float:
    """Maximum of the cubic Hermite interpolant of one component over a step.

    ``p0, p1`` are the endpoint values and ``d0, d1`` the endpoint time
    derivatives.  Used to refine the peak of x(t) between accepted steps.
    """
    h = t1 - t0
    m0, m1 = h * d0, h * d1
    best = max(p0, p1)
    # dp/dtheta = a theta^2 + b theta + c with:
    a = 6.0 * (p0 - p1) + 3.0 * (m0 + m1)
    b = -6.0 * (p0 - p1) - 4.0 * m0 - 2.0 * m1
    c = m0
    roots = []
    if a == 0.0:
        if b != 0.0:
            roots.append(-c / b)
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            # stable form: the naive (-b +- sq)/(2a) loses the finite
            # root when a underflows toward zero (near-quadratic data)
            q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
            roots.append(q / a)
            if q != 0.0:
                roots.append(c / q)
    for th in roots:
        if 0.0 < th < 1.0:
            h00 = (1.0 + 2.0 * th) * (1.0 - th) ** 2
            h10 = th * (1.0 - th) ** 2
            h01 = th * th * (3.0 - 2.0 * th)
            h11 = th * th * (th - 1.0)
            best = max(best, h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1)
    return best
