"""Heteroclinic orbit from the origin's unstable manifold to (z, z).

The orbit is shot from the first-order manifold approximation
``(eps, (a0 + 1) eps)`` along the unstable eigenvector and integrated
with the adaptive embedded pair until it enters a small ball around
(z, z) or the Lyapunov function drops below a floor (the robust monitor
for spiralling approaches).  The module also verifies the trap-region
geometry that underlies the analytic x bound: the field points below
the unstable tangent line, upward on the diagonal, and the y' = 0
isocline is a nonincreasing graph x(y).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import integrate
from .errors import DomainError
from .lyapunov import lyapunov_value
from .models import DOMAIN_GUARD, SystemModel, eval_field, find_w
from .rootfind import solve_in


@dataclass(frozen=True)
class IntegratorConfig:
    """Tuning knobs for the heteroclinic shoot.

    eps_start is the launch offset along the unstable eigenvector and
    must be small against z; converge_radius and v_threshold are the two
    alternative arrival criteria (ball around (z, z), Lyapunov floor).
    """

    eps_start: float = 1e-6
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    converge_radius: float = 1e-8
    v_threshold: float = 1e-14
    max_time: float = 200.0
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("eps_start", "rel_tol", "abs_tol", "converge_radius",
                     "v_threshold", "max_time", "max_steps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered samples of one integration run.

    ``status`` is ``converged-radius`` or ``converged-lyapunov`` on
    arrival, otherwise ``max_time``, ``max_steps`` or ``domain_exit``
    (the last state is retained so callers can report the exit point).
    """

    model: SystemModel
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    V: np.ndarray
    max_x: float
    converged: bool
    status: str
    steps: int
    config: IntegratorConfig | None = field(repr=False, default=None)

    @property
    def samples(self):
        """Iterator over (t, x, y, V) tuples."""
        return zip(self.t, self.x, self.y, self.V)

    @property
    def final_state(self) -> tuple:
        return float(self.x[-1]), float(self.y[-1])

    def to_csv(self, path) -> None:
        """Rows ``t,x,y,V`` with round-trip decimal formatting."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x", "y", "V"])
            for ti, xi, yi, vi in self.samples:
                writer.writerow([repr(float(ti)), repr(float(xi)),
                                 repr(float(yi)), repr(float(vi))])

    def to_dict(self) -> dict:
        return {
            "family": self.model.family.value,
            "converged": self.converged,
            "status": self.status,
            "steps": self.steps,
            "max_x": self.max_x,
            "final_state": list(self.final_state),
            "samples": [[float(v) for v in row] for row in
                        zip(self.t, self.x, self.y, self.V)],
        }


def shoot_heteroclinic(m: SystemModel,
                       cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """Integrate from the unstable manifold of (0, 0) toward (z, z).

    Returns a Trajectory whose ``converged`` flag is set only on arrival;
    domain exit or budget exhaustion is reported through ``status``
    rather than raised, so the caller can inspect the last state.
    """
    eps = cfg.eps_start
    y0 = np.array([eps, (m.a0 + 1.0) * eps])
    guard = max(DOMAIN_GUARD, 1e-9 * m.x_max if math.isfinite(m.x_max) else 0.0)

    def fieldfn(t, s):
        x, y = s
        if not (0.0 <= x < m.x_max - guard) or y < 0.0:
            raise DomainError("state left the admissible domain")
        return np.array([y - x,
                         float(m.a(x)) * y - float(m.b(x)) * y * y])

    r2 = cfg.converge_radius ** 2

    def arrived(t, s):
        if (s[0] - m.z) ** 2 + (s[1] - m.z) ** 2 <= r2:
            return True
        return (s[1] > 0.0
                and lyapunov_value(m, s[0], s[1]) <= cfg.v_threshold)

    sol = integrate.integrate_adaptive(
        fieldfn, 0.0, y0, cfg.max_time, rtol=cfg.rel_tol, atol=cfg.abs_tol,
        max_steps=cfg.max_steps, stop=arrived)

    xs = sol.y[:, 0]
    ys = sol.y[:, 1]
    V = lyapunov_value(m, xs, np.maximum(ys, 1e-300))

    max_x = float(xs.max())
    # refine the x peak inside steps where x' changes sign (the sampled
    # maximum alone carries an O(h^2) bias)
    dx = sol.f[:, 0]
    for i in np.flatnonzero((dx[:-1] > 0.0) & (dx[1:] <= 0.0)):
        max_x = max(max_x, integrate.hermite_extremum_max(
            sol.t[i], sol.t[i + 1], xs[i], xs[i + 1], dx[i], dx[i + 1]))

    if sol.status == integrate.STOPPED:
        fin = sol.y[-1]
        if (fin[0] - m.z) ** 2 + (fin[1] - m.z) ** 2 <= r2:
            status, converged = "converged-radius", True
        else:
            status, converged = "converged-lyapunov", True
    elif sol.status == integrate.FINISHED:
        status, converged = "max_time", False
    else:
        status, converged = sol.status, False

    return Trajectory(model=m, t=sol.t, x=xs, y=ys, V=np.asarray(V),
                      max_x=max_x, converged=converged, status=status,
                      steps=sol.steps, config=cfg)


def verify_lyapunov_monotone(traj: Trajectory) -> float:
    """Worst increase of V between consecutive samples (0.0 if fewer
    than two samples); the orbit contract is a value below 1e-9.

    Raises
    ------
    ValueError
        If the sample times are not strictly increasing.
    """
    if traj.t.size == 0:
        raise ValueError("empty trajectory")
    if np.any(np.diff(traj.t) <= 0.0):
        raise ValueError("sample times must be strictly increasing")
    if traj.t.size < 2:
        return 0.0
    return float(np.max(np.diff(traj.V)))


@dataclass(frozen=True)
class TrapRegionReport:
    """Sampled verification of the trap-region geometry.

    line_margin: worst dy/dx - (a0 + 1) on the unstable tangent line for
    x in (0, w] (must be <= tol); diagonal_min: worst y' on the diagonal
    segment (must be >= -tol); isocline_monotone is None for b = 0
    (degenerate isocline, check skipped).
    """

    line_margin: float
    diagonal_min: float
    isocline_monotone: bool | None
    violation: tuple | None
    passed: bool


def check_trap_region(m: SystemModel, n: int = 1000,
                      tol: float = 1e-9) -> TrapRegionReport:
    """Sample the three geometric facts behind the trap-region argument."""
    w = find_w(m)
    slope = m.a0 + 1.0
    violation = None

    xs = np.linspace(w / n, w, n)
    ys = slope * xs
    dx, dy = eval_field(m, xs, ys)
    margins = dy / dx - slope
    line_margin = float(margins.max())
    if line_margin > tol:
        i = int(np.argmax(margins))
        violation = ("line", float(xs[i]), float(ys[i]))

    xs_d = np.linspace(m.z / n, m.z, n)
    dx_d, dy_d = eval_field(m, xs_d, xs_d)
    if np.any(dx_d != 0.0):
        i = int(np.argmax(np.abs(dx_d)))
        violation = violation or ("diagonal-dx", float(xs_d[i]), float(xs_d[i]))
    diagonal_min = float(dy_d.min())
    if diagonal_min < -1e-12:
        i = int(np.argmin(dy_d))
        violation = violation or ("diagonal", float(xs_d[i]), float(xs_d[i]))

    if m.b_is_zero:
        isocline_monotone = None
    else:
        ys_i = np.linspace(m.z, slope * w, n)
        xi = np.array([isocline_x(m, yv) for yv in ys_i])
        isocline_monotone = bool(np.all(np.diff(xi) <= 1e-12))
        if not isocline_monotone:
            j = int(np.argmax(np.diff(xi)))
            violation = violation or ("isocline", float(xi[j]), float(ys_i[j]))

    passed = (line_margin <= tol and diagonal_min >= -1e-12
              and isocline_monotone is not False and violation is None)
    return TrapRegionReport(line_margin=line_margin, diagonal_min=diagonal_min,
                            isocline_monotone=isocline_monotone,
                            violation=violation, passed=passed)


def isocline_x(m: SystemModel, y: float) -> float:
    """Abscissa x(y) of the y' = 0 isocline, from a(x) = y b(x).

    Defined for y in [0, (a0 + 1) w]; maps that interval onto [w, x0]
    reversing the order, with x(z) = z and x(0) = x0.

    Raises
    ------
    DomainError
        For the degenerate b = 0 family or y outside the interval.
    """
    if m.b_is_zero:
        raise DomainError("isocline degenerates for b = 0")
    hi = (m.a0 + 1.0) * m.w
    if not 0.0 <= y <= hi * (1.0 + 1e-12):
        raise DomainError(f"isocline is parameterised on [0, {hi}]")
    g = lambda x: float(m.a(x) - y * m.b(x))
    lo = 1e-9 * m.x_max
    return solve_in(g, lo, m.x_max * (1.0 - 1e-9))
