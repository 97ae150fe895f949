"""Uniform 2D grids, fields, and the quadratures everything else leans on.

A Grid2D is a node lattice: nx-by-ny points with spacing h, the node
(i, j) sitting at origin + (i*h, j*h).  Each node owns the h-by-h cell
centered on it, so cell areas tile the plane and ball integrals can use
exact cell/disk intersection areas on the rim.  Fields store one value
per node, shape (nx, ny), values[i, j] = f(x_i, y_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import atomic_write_text
from .errors import BallOutsideDomain, MSampleTooSmall, PointOutsideDomain

# slack for "is this point inside" checks, relative to h
_EDGE_EPS = 1e-9


@dataclass(frozen=True)
class Grid2D:
    """Uniform node lattice with spacing h and lower-left node at origin."""

    nx: int
    ny: int
    h: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid needs nx, ny >= 3, got ({self.nx}, {self.ny})")
        if not (self.h > 0.0):
            raise ValueError(f"grid spacing must be positive, got {self.h}")

    @property
    def x(self) -> np.ndarray:
        return self.origin[0] + self.h * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.origin[1] + self.h * np.arange(self.ny)

    @property
    def extent(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) of the node lattice."""
        ox, oy = self.origin
        return (ox, ox + (self.nx - 1) * self.h, oy, oy + (self.ny - 1) * self.h)

    @property
    def center(self) -> tuple[float, float]:
        xmin, xmax, ymin, ymax = self.extent
        return (0.5 * (xmin + xmax), 0.5 * (ymin + ymax))

    def meshgrid(self):
        return np.meshgrid(self.x, self.y, indexing="ij")


def square_grid(half_width: float, n: int, center=(0.0, 0.0)) -> Grid2D:
    """n-by-n grid covering [cx-half_width, cx+half_width]^2."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    h = 2.0 * half_width / (n - 1)
    return Grid2D(n, n, h, (center[0] - half_width, center[1] - half_width))


@dataclass
class Field:
    """Scalar samples on a Grid2D; values[i, j] = f(x_i, y_j)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.ny})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    @classmethod
    def from_function(cls, grid: Grid2D, fn) -> "Field":
        X, Y = grid.meshgrid()
        return cls(grid, np.asarray(fn(X, Y), dtype=float))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "Field":
        return cls(grid, np.zeros((grid.nx, grid.ny)))


@dataclass
class VectorField:
    """Componentwise samples of a vector field on a Grid2D."""

    grid: Grid2D
    vx: np.ndarray
    vy: np.ndarray

    def magnitude_squared(self) -> np.ndarray:
        return self.vx * self.vx + self.vy * self.vy


# ---------------------------------------------------------------------------
# differencing and interpolation


def _diff_axis(a: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order first derivative along `axis`: centered inside,
    one-sided three-point at both ends (exact on quadratics)."""
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - a[:-2]) / (2.0 * h)
    out[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h)
    out[-1] = (3.0 * a[-1] - 4.0 * a[-2] + a[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, axis)


def gradient(f: Field) -> VectorField:
    """Discrete gradient, second order including the boundary rows."""
    h = f.grid.h
    return VectorField(f.grid, _diff_axis(f.values, h, 0), _diff_axis(f.values, h, 1))


def interpolate(f: Field, points) -> np.ndarray | float:
    """Bilinear interpolation at one point (2,) or many (N, 2)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    g = f.grid
    xmin, xmax, ymin, ymax = g.extent
    eps = _EDGE_EPS * g.h
    px, py = pts[:, 0], pts[:, 1]
    if (
        px.min() < xmin - eps
        or px.max() > xmax + eps
        or py.min() < ymin - eps
        or py.max() > ymax + eps
    ):
        k = int(
            np.argmax(
                np.maximum.reduce(
                    [xmin - px, px - xmax, ymin - py, py - ymax]
                )
            )
        )
        raise PointOutsideDomain(
            f"point ({px[k]:.6g}, {py[k]:.6g}) outside grid extent "
            f"[{xmin:.6g}, {xmax:.6g}] x [{ymin:.6g}, {ymax:.6g}]"
        )
    sx = np.clip((px - xmin) / g.h, 0.0, g.nx - 1.0)
    sy = np.clip((py - ymin) / g.h, 0.0, g.ny - 1.0)
    i = np.minimum(sx.astype(np.intp), g.nx - 2)
    j = np.minimum(sy.astype(np.intp), g.ny - 2)
    tx = sx - i
    ty = sy - j
    v = f.values
    out = (
        v[i, j] * (1 - tx) * (1 - ty)
        + v[i + 1, j] * tx * (1 - ty)
        + v[i, j + 1] * (1 - tx) * ty
        + v[i + 1, j + 1] * tx * ty
    )
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# ball quadrature with exact rim geometry


def _arc_antideriv(r: float, x: float) -> float:
    # antiderivative of sqrt(r^2 - t^2)
    x = min(max(x, -r), r)
    return 0.5 * (x * math.sqrt(max(r * r - x * x, 0.0)) + r * r * math.asin(x / r))


def disk_rect_area(r: float, ax: float, bx: float, ay: float, by: float) -> float:
    """Exact area of [ax,bx] x [ay,by] intersected with the disk |p| <= r."""
    ax = max(ax, -r)
    bx = min(bx, r)
    if bx <= ax or by <= ay or by <= -r or ay >= r:
        return 0.0
    cuts = [ax, bx]
    for yy in (ay, by):
        t = r * r - yy * yy
        if t > 0.0:
            s = math.sqrt(t)
            if ax < -s < bx:
                cuts.append(-s)
            if ax < s < bx:
                cuts.append(s)
    cuts.sort()
    area = 0.0
    for p, q in zip(cuts[:-1], cuts[1:]):
        if q - p <= 0.0:
            continue
        xm = 0.5 * (p + q)
        gm = math.sqrt(max(r * r - xm * xm, 0.0))
        top = min(by, gm)
        bot = max(ay, -gm)
        if top <= bot:
            continue
        arc = _arc_antideriv(r, q) - _arc_antideriv(r, p)
        piece_top = arc if gm < by else by * (q - p)
        piece_bot = -arc if -gm > ay else ay * (q - p)
        area += piece_top - piece_bot
    return area


def _require_ball_inside(g: Grid2D, center, r: float) -> None:
    xmin, xmax, ymin, ymax = g.extent
    eps = _EDGE_EPS * g.h
    cx, cy = float(center[0]), float(center[1])
    if not (r > 0.0):
        raise ValueError(f"ball radius must be positive, got {r}")
    if cx - r < xmin - eps or cx + r > xmax + eps or cy - r < ymin - eps or cy + r > ymax + eps:
        raise BallOutsideDomain(
            f"ball B_{r:.6g}(({cx:.6g}, {cy:.6g})) exceeds grid extent "
            f"[{xmin:.6g}, {xmax:.6g}] x [{ymin:.6g}, {ymax:.6g}]"
        )


def ball_weights(g: Grid2D, center, r: float):
    """Quadrature weights for the disk B_r(center).

    Returns (islice, jslice, w): w[i, j] is the exact area of cell
    (i, j)'s h-by-h square intersected with the disk, nonzero only on
    the returned subwindow.  Monotone in r cell by cell.
    """
    _require_ball_inside(g, center, r)
    h = g.h
    cx, cy = float(center[0]), float(center[1])
    xmin, _, ymin, _ = g.extent
    pad = r + h
    i0 = max(int(math.floor((cx - pad - xmin) / h)), 0)
    i1 = min(int(math.ceil((cx + pad - xmin) / h)) + 1, g.nx)
    j0 = max(int(math.floor((cy - pad - ymin) / h)), 0)
    j1 = min(int(math.ceil((cy + pad - ymin) / h)) + 1, g.ny)
    xs = g.x[i0:i1] - cx
    ys = g.y[j0:j1] - cy
    d = np.hypot(xs[:, None], ys[None, :])
    half_diag = h * math.sqrt(0.5)
    w = np.zeros((i1 - i0, j1 - j0))
    w[d <= r - half_diag] = h * h
    rim = np.argwhere((d > r - half_diag) & (d < r + half_diag))
    for i, j in rim:
        dx, dy = xs[i], ys[j]
        w[i, j] = disk_rect_area(r, dx - h / 2, dx + h / 2, dy - h / 2, dy + h / 2)
    return slice(i0, i1), slice(j0, j1), w


def ball_integral(f: Field, center, r: float) -> float:
    """Integral of f over B_r(center): cell-value times exact cell area."""
    isl, jsl, w = ball_weights(f.grid, center, r)
    return float(np.sum(f.values[isl, jsl] * w))


def shell_integral(f: Field, center, r: float, m: int | None = None) -> float:
    """Line integral of f over the circle of radius r around center.

    Trapezoid rule over m equispaced points, values by bilinear
    interpolation; returns r * sum(f(theta_k)) * (2*pi/m).
    """
    g = f.grid
    _require_ball_inside(g, center, r)
    if m is None:
        # multiple of 4 so quarter-turn rotations sample congruent node sets
        m = max(128, 4 * int(math.ceil(4.0 * math.pi * r / g.h)))
    if m < 16:
        raise MSampleTooSmall(f"shell quadrature needs m >= 16 samples, got {m}")
    theta = 2.0 * math.pi * np.arange(m) / m
    pts = np.column_stack(
        (center[0] + r * np.cos(theta), center[1] + r * np.sin(theta))
    )
    vals = interpolate(f, pts)
    return float(r * np.sum(vals) * (2.0 * math.pi / m))


# ---------------------------------------------------------------------------
# field snapshots

_HEADER = "# nx,ny,h,ox,oy"


def field_to_csv(f: Field) -> str:
    """Serialize a field; 17 significant digits round-trip float64 exactly."""
    g = f.grid
    lines = [
        _HEADER,
        f"# {g.nx},{g.ny},{g.h:.17g},{g.origin[0]:.17g},{g.origin[1]:.17g}",
    ]
    for i in range(g.nx):
        lines.append(",".join(f"{v:.17g}" for v in f.values[i]))
    return "\n".join(lines) + "\n"


def write_field(f: Field, path) -> None:
    """Write a field snapshot atomically (temp file + rename)."""
    atomic_write_text(path, field_to_csv(f))


def field_from_csv(text: str) -> Field:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("#") or not lines[1].startswith("#"):
        raise ValueError("field snapshot must start with the two '#' header lines")
    meta = lines[1].lstrip("#").strip().split(",")
    if len(meta) != 5:
        raise ValueError(f"malformed field header: {lines[1]!r}")
    nx, ny = int(meta[0]), int(meta[1])
    h, ox, oy = float(meta[2]), float(meta[3]), float(meta[4])
    rows = lines[2:]
    if len(rows) != nx:
        raise ValueError(f"expected {nx} data rows, found {len(rows)}")
    values = np.array([[float(tok) for tok in row.split(",")] for row in rows])
    if values.shape != (nx, ny):
        raise ValueError(f"expected {ny} columns per row, got shape {values.shape}")
    return Field(Grid2D(nx, ny, h, (ox, oy)), values)


def read_field(path) -> Field:
    with open(path) as fh:
        return field_from_csv(fh.read())
