"""Phase-portrait exports: field samples as CSV, minimal static SVG.

CSV is the authoritative format (one row per grid node with the field
components and the Lyapunov value); the SVG rendering is a convenience
view with normalised field arrows and Lyapunov level polylines obtained
by marching squares on the sampled grid.
"""

from __future__ import annotations

import csv

import numpy as np

from .lyapunov import LevelSetGrid, level_set_grid
from .models import SystemModel


def default_ranges(m: SystemModel):
    """Plot box heuristics: x up to 0.9 x_max (or 2.2 z when unbounded),
    y spanning two decades around z."""
    if np.isfinite(m.x_max):
        x_hi = 0.9 * m.x_max
    else:
        x_hi = 2.2 * m.z
    return (0.0, x_hi), (0.02 * m.z, 4.0 * m.z)


def field_grid(m: SystemModel, x_range, y_range, nx: int, ny: int):
    """Sample the vector field and V on a rectangular grid.

    Returns (grid, U, W) where grid is the LevelSetGrid of V and U, W
    hold the field components (nan outside the domain).
    """
    grid = level_set_grid(m, x_range, y_range, nx, ny)
    X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    U = np.full_like(X, np.nan)
    W = np.full_like(X, np.nan)
    v = grid.valid
    if v.any():
        U[v] = Y[v] - X[v]
        W[v] = np.asarray(m.a(X[v]), dtype=float) * Y[v] \
            - np.asarray(m.b(X[v]), dtype=float) * np.square(Y[v])
    return grid, U, W


def portrait_csv(m: SystemModel, x_range, y_range, nx: int, ny: int,
                 path) -> None:
    """Rows ``x,y,dx,dy,V,valid`` over the grid."""
    grid, U, W = field_grid(m, x_range, y_range, nx, ny)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "dx", "dy", "V", "valid"])
        for i, xv in enumerate(grid.xs):
            for j, yv in enumerate(grid.ys):
                ok = bool(grid.valid[i, j])
                writer.writerow([
                    repr(float(xv)), repr(float(yv)),
                    repr(float(U[i, j])) if ok else "",
                    repr(float(W[i, j])) if ok else "",
                    repr(float(grid.values[i, j])) if ok else "",
                    int(ok),
                ])


def marching_squares(grid: LevelSetGrid, level: float) -> list:
    """Level-set polylines of V at one level, as lists of (x, y) points.

    Plain per-cell marching squares with linear edge interpolation; the
    per-cell segments are chained greedily into polylines.  Cells with
    any invalid corner are skipped.
    """
    xs, ys, V, ok = grid.xs, grid.ys, grid.values, grid.valid
    segments = []

    def interp(pa, pb, va, vb):
        t = 0.5 if vb == va else (level - va) / (vb - va)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            if not (ok[i, j] and ok[i + 1, j] and ok[i, j + 1]
                    and ok[i + 1, j + 1]):
                continue
            corners = [(xs[i], ys[j]), (xs[i + 1], ys[j]),
                       (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])]
            vals = [V[i, j], V[i + 1, j], V[i + 1, j + 1], V[i, j + 1]]
            pts = []
            for a in range(4):
                b = (a + 1) % 4
                above_a, above_b = vals[a] > level, vals[b] > level
                if above_a != above_b:
                    pts.append(interp(corners[a], corners[b],
                                      vals[a], vals[b]))
            if len(pts) == 2:
                segments.append((pts[0], pts[1]))
            elif len(pts) == 4:  # saddle cell: keep both crossings
                segments.append((pts[0], pts[1]))
                segments.append((pts[2], pts[3]))

    return _chain_segments(segments)


def _chain_segments(segments, tol: float = 1e-12):
    """Greedy merge of 2-point segments into longer polylines."""
    polylines = []
    remaining = list(segments)
    while remaining:
        a, b = remaining.pop()
        line = [a, b]
        grew = True
        while grew:
            grew = False
            for idx, (p, q) in enumerate(remaining):
                if _close(line[-1], p, tol):
                    line.append(q)
                elif _close(line[-1], q, tol):
                    line.append(p)
                elif _close(line[0], p, tol):
                    line.insert(0, q)
                elif _close(line[0], q, tol):
                    line.insert(0, p)
                else:
                    continue
                remaining.pop(idx)
                grew = True
                break
        polylines.append(line)
    return polylines


def _close(p, q, tol):
    return abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol


def portrait_svg(m: SystemModel, x_range, y_range, nx: int, ny: int,
                 path, levels: int = 8, width: int = 640,
                 height: int = 480) -> None:
    """Static SVG: normalised field arrows plus V level polylines."""
    grid, U, W = field_grid(m, x_range, y_range, nx, ny)

    x0, x1 = x_range
    y0, y1 = y_range
    pad = 10.0

    def to_px(x, y):
        px = pad + (x - x0) / (x1 - x0) * (width - 2 * pad)
        py = height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)
        return px, py

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']

    finite = grid.values[grid.valid]
    if finite.size:
        vmin = float(np.nanmin(finite))
        vmax = float(np.nanquantile(finite, 0.85))
        for q in np.linspace(0.0, 1.0, levels + 2)[1:-1]:
            level = vmin + q * (vmax - vmin)
            for line in marching_squares(grid, level):
                pts = " ".join(f"{to_px(x, y)[0]:.2f},{to_px(x, y)[1]:.2f}"
                               for x, y in line)
                parts.append(f'<polyline points="{pts}" fill="none" '
                             f'stroke="#7a5fc0" stroke-width="1"/>')

    # arrows on a thinned sub-grid
    step_i = max(1, len(grid.xs) // 24)
    step_j = max(1, len(grid.ys) // 24)
    arrow = 0.35 * min((x1 - x0) / max(len(grid.xs) - 1, 1) * step_i,
                       (y1 - y0) / max(len(grid.ys) - 1, 1) * step_j)
    for i in range(0, len(grid.xs), step_i):
        for j in range(0, len(grid.ys), step_j):
            if not grid.valid[i, j]:
                continue
            u, w = U[i, j], W[i, j]
            norm = float(np.hypot(u, w))
            if norm == 0.0:
                continue
            x, y = grid.xs[i], grid.ys[j]
            tip = (x + arrow * u / norm, y + arrow * w / norm)
            ax, ay = to_px(x, y)
            bx, by = to_px(*tip)
            parts.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" '
                         f'y2="{by:.2f}" stroke="#444" stroke-width="0.8"/>')
            parts.append(f'<circle cx="{bx:.2f}" cy="{by:.2f}" r="1.2" '
                         f'fill="#444"/>')

    zx, zy = to_px(m.z, m.z)
    parts.append(f'<circle cx="{zx:.2f}" cy="{zy:.2f}" r="3.5" '
                 f'fill="#d0504e"/>')
    ox, oy = to_px(0.0, 0.0)
    parts.append(f'<circle cx="{ox:.2f}" cy="{oy:.2f}" r="3.5" fill="none" '
                 f'stroke="#d0504e" stroke-width="1.5"/>')
    parts.append("</svg>")

    with open(path, "w") as fh:
        fh.write("\n".join(parts))
