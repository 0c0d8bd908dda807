"""Lyapunov function of the planar system and the monotone level map H.

With primitives normalised so A(z) = B(z) = 0,

    V(x, y) = z B(x) - A(x) + y - z - z log(y / z)

vanishes at the interior stationary point (z, z) and decreases along
orbits; its orbital derivative has the closed form

    dV/dt = -b(x) (y - z)^2 - r(x) (z - x)^2  <=  0.

``H(x) = z B(x) - A(x)`` restricted to x >= z is strictly increasing and
is inverted by the bounds module to turn an energy excess into an x bound.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .models import DOMAIN_GUARD, SystemModel, r_factor


def lyapunov_value(m: SystemModel, x, y):
    """V(x, y); zero at (z, z) by normalisation.  Requires y > 0."""
    m.check_xy(x, y, y_positive=True)
    y = np.asarray(y, dtype=float)
    val = m.z * m.B(x) - m.A(x) + y - m.z - m.z * np.log(y / m.z)
    return val if val.ndim else float(val)


def lyapunov_gradient(m: SystemModel, x, y):
    """Gradient (dV/dx, dV/dy) = (z b - a, 1 - z/y)."""
    m.check_xy(x, y, y_positive=True)
    gx = m.z * m.b(x) - m.a(x)
    gy = 1.0 - m.z / np.asarray(y, dtype=float)
    return gx, gy


def lyapunov_derivative(m: SystemModel, x, y):
    """Orbital derivative -b(x)(y - z)^2 - r(x)(z - x)^2.

    Nonpositive wherever b and r are nonnegative, i.e. on the whole
    domain of every built-in family.  Equals grad(V) . field; the test
    suite cross-checks that identity by central differences.
    """
    m.check_xy(x, y, y_positive=True)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = -m.b(x) * np.square(y - m.z) - r_factor(m, x) * np.square(m.z - x)
    return val if np.ndim(val) else float(val)


def H(m: SystemModel, x):
    """Level map H(x) = z B(x) - A(x) for x >= z; strictly increasing."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < m.z - 1e-12):
        raise DomainError(f"H is defined for x >= z = {m.z}")
    m.check_x(x)
    val = m.z * m.B(x_arr) - m.A(x_arr)
    return val if val.ndim else float(val)


@dataclass(frozen=True)
class LevelSetGrid:
    """Rectangular sample of V with invalid cells flagged.

    ``values[i, j]`` is V at ``(xs[i], ys[j])`` where valid; invalid
    cells (outside the domain) hold nan and ``valid[i, j]`` is False,
    which keeps exported plot data finite.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    valid: np.ndarray

    def to_csv(self, path) -> None:
        """Write rows ``x,y,V,valid``; V is empty for invalid cells."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "V", "valid"])
            for i, xv in enumerate(self.xs):
                for j, yv in enumerate(self.ys):
                    ok = bool(self.valid[i, j])
                    writer.writerow([repr(float(xv)), repr(float(yv)),
                                     repr(float(self.values[i, j])) if ok else "",
                                     int(ok)])


def level_set_grid(m: SystemModel, x_range, y_range,
                   nx: int, ny: int) -> LevelSetGrid:
    """Sample V on the closed box ``x_range`` x ``y_range``.

    Cells with x outside [0, x_max) or y <= 0 are flagged invalid rather
    than evaluated.
    """
    if nx < 1 or ny < 1 or x_range[1] < x_range[0] or y_range[1] < y_range[0]:
        raise ValueError("empty grid range")
    xs = np.linspace(x_range[0], x_range[1], nx)
    ys = np.linspace(y_range[0], y_range[1], ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    valid = (X >= 0.0) & (X < m.x_max - DOMAIN_GUARD) & (Y > 0.0)
    values = np.full((nx, ny), np.nan)
    if valid.any():
        values[valid] = lyapunov_value(m, X[valid], Y[valid])
    return LevelSetGrid(xs=xs, ys=ys, values=values, valid=valid)
