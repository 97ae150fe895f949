"""Monotonicity functionals and inequality checks on 2D field pairs.

Everything here is a pure measurement: given (u, v) on a grid, compute
the frequency, height, energy, and product functionals whose
monotonicity (or boundedness) characterizes segregated pairs, plus the
flatness / cone / harmonic-replacement diagnostics used to certify
asymptotic one-dimensionality.  Nothing in this module mutates fields
or solves equations, except harmonic_deficit which delegates one
Dirichlet solve.

Conventions (n = 2 throughout, so the scaling prefactors r^{2-n} and
r^{1-n} reduce to 1 and 1/r):

    D(r; x) = int_{B_r(x)} |grad u|^2 + |grad v|^2 + kappa u^2 v^2
    H(r; x) = r^{-1} int_{dB_r(x)} u^2 + v^2
    N(r; x) = r * (D numerator) / int_{dB_r(x)} u^2 + v^2
    J(r; x) = r^{-4} * int_{B_r(x)} (|grad u|^2 + kappa u^2 v^2)
                    * int_{B_r(x)} (|grad v|^2 + kappa u^2 v^2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import ordered_map
from .config import SolveConfig
from .elliptic2d import solve_harmonic
from .errors import ZeroDenominator
from .grid import (
    Field,
    ball_integral,
    ball_weights,
    gradient,
    shell_integral,
)

# shell integrals at or below this are treated as vanishing
_ZERO_SHELL = 1e-14

# pairs closer than this are excluded from Holder quotients; the
# all-pairs sup otherwise degenerates to the resolution scale
PAIR_FLOOR = 0.1

# bisection bracket and depth for the ACF correction constant
_CFIT_MAX = 1e3
_CFIT_ITERS = 48
_CFIT_SLACK = 1e-12


def eps_mono(grid) -> float:
    """Discretization allowance for monotonicity assertions.

    First-order rim quadrature dominates the error budget; the factor
    is calibrated on the linear pair where the truth is known."""
    return 5.0 * grid.h


@dataclass(frozen=True)
class MonotonicityTrace:
    """One functional sampled over increasing radii at a base point."""

    name: str
    x: tuple
    radii: np.ndarray
    values: np.ndarray
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "radii", np.asarray(self.radii, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.radii.ndim != 1 or self.radii.size == 0:
            raise ValueError("radii must be a nonempty 1D array")
        if np.any(np.diff(self.radii) <= 0.0):
            raise ValueError("radii must be strictly increasing")
        if self.radii[0] <= 0.0:
            raise ValueError("radii must be positive")
        if self.values.shape != self.radii.shape:
            raise ValueError("values must match radii in shape")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("trace values must be finite")

    def min_pairwise_slope(self) -> float:
        """Smallest (value[i+1]-value[i])/(r[i+1]-r[i]); >= 0 means monotone."""
        if self.radii.size < 2:
            raise ValueError("need at least 2 radii for a slope")
        return float(np.min(np.diff(self.values) / np.diff(self.radii)))


@dataclass(frozen=True)
class DoublingCheck:
    """Outcome of one H-doubling comparison."""

    passed: bool
    ratio: float
    bound: float
    r1: float
    r2: float
    d: float


@dataclass(frozen=True)
class FlatnessFit:
    """Best one-plane model (magnitude * e . y)^{+/-} on a ball.

    e is the unit direction, magnitude the fitted slope, h_flat the
    sup-distance to the model divided by the ball radius."""

    e: np.ndarray
    h_flat: float
    magnitude: float

    def __post_init__(self):
        object.__setattr__(self, "e", np.asarray(self.e, dtype=float))
        if abs(float(np.hypot(self.e[0], self.e[1])) - 1.0) > 1e-10:
            raise ValueError("direction must be a unit vector")
        if self.h_flat < 0.0 or self.magnitude < 0.0:
            raise ValueError("h_flat and magnitude must be nonnegative")


@dataclass(frozen=True)
class ProductBounds:
    """Segregation bounds: sup uv, sup (u|grad v| + v|grad u|), and the
    log-log growth exponent of R -> int_{B_R} u^2 v^2."""

    sup_uv: float
    sup_mixed: float
    mass_exponent: float


def _check_pair(u: Field, v: Field) -> None:
    if u.grid != v.grid:
        raise ValueError("u and v must share one grid")


def _check_radii(radii) -> np.ndarray:
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0:
        raise ValueError("radii must be a nonempty 1D array")
    if np.any(np.diff(radii) <= 0.0):
        raise ValueError("radii must be strictly increasing")
    if radii[0] <= 0.0:
        raise ValueError("radii must be positive")
    return radii


def _interaction(u: Field, v: Field, kappa: float) -> np.ndarray:
    return kappa * (u.values * v.values) ** 2


def _nd_density(u: Field, v: Field, kappa: float) -> Field:
    gu = gradient(u)
    gv = gradient(v)
    return Field(
        u.grid,
        gu.magnitude_squared() + gv.magnitude_squared() + _interaction(u, v, kappa),
    )


def _j_densities(u: Field, v: Field, kappa: float) -> tuple[Field, Field]:
    gu = gradient(u)
    gv = gradient(v)
    inter = _interaction(u, v, kappa)
    return (
        Field(u.grid, gu.magnitude_squared() + inter),
        Field(u.grid, gv.magnitude_squared() + inter),
    )


def _sq_sum(u: Field, v: Field) -> Field:
    return Field(u.grid, u.values**2 + v.values**2)


# ---------------------------------------------------------------------------
# Almgren functionals


def almgren_D(u: Field, v: Field, kappa: float, x, r: float) -> float:
    """Scaled energy of the pair on B_r(x); nondecreasing in r on
    solutions (n = 2, so the r^{2-n} prefactor is 1)."""
    _check_pair(u, v)
    return ball_integral(_nd_density(u, v, kappa), x, r)


def almgren_H(u: Field, v: Field, x, r: float) -> float:
    """Average height r^{-1} * int_{dB_r(x)} (u^2 + v^2)."""
    _check_pair(u, v)
    return shell_integral(_sq_sum(u, v), x, r) / r


def almgren_H_rate(u: Field, v: Field, kappa: float, x, r: float) -> float:
    """dH/dr through the identity
    H'(r) = 2 r^{1-n} int_{B_r} |grad u|^2 + |grad v|^2 + 2 kappa u^2 v^2."""
    _check_pair(u, v)
    gu = gradient(u)
    gv = gradient(v)
    dens = Field(
        u.grid,
        gu.magnitude_squared()
        + gv.magnitude_squared()
        + 2.0 * _interaction(u, v, kappa),
    )
    return 2.0 * ball_integral(dens, x, r) / r


def almgren_N(u: Field, v: Field, kappa: float, x, r: float) -> float:
    """Frequency r * int_{B_r}(|grad u|^2+|grad v|^2+kappa u^2v^2)
    / int_{dB_r}(u^2+v^2)."""
    _check_pair(u, v)
    num = ball_integral(_nd_density(u, v, kappa), x, r)
    den = shell_integral(_sq_sum(u, v), x, r)
    if den <= _ZERO_SHELL:
        raise ZeroDenominator(f"shell integral {den:.3e} at r={r} is numerically zero")
    return r * num / den


def functional_trace(
    functional: str, u: Field, v: Field, kappa: float, x, radii
) -> MonotonicityTrace:
    """Sample one of the functionals N, H, D, J over increasing radii.

    Densities are built once; radii are evaluated through a worker map
    with deterministic assembly order."""
    _check_pair(u, v)
    radii = _check_radii(radii)
    if functional == "N":
        dens = _nd_density(u, v, kappa)
        sq = _sq_sum(u, v)

        def value(r):
            den = shell_integral(sq, x, r)
            if den <= _ZERO_SHELL:
                raise ZeroDenominator(
                    f"shell integral {den:.3e} at r={r} is numerically zero"
                )
            return r * ball_integral(dens, x, r) / den

    elif functional == "H":
        sq = _sq_sum(u, v)

        def value(r):
            return shell_integral(sq, x, r) / r

    elif functional == "D":
        dens = _nd_density(u, v, kappa)

        def value(r):
            return ball_integral(dens, x, r)

    elif functional == "J":
        du, dv = _j_densities(u, v, kappa)

        def value(r):
            return ball_integral(du, x, r) * ball_integral(dv, x, r) / r**4

    else:
        raise ValueError(f"unknown functional {functional!r}, expected N, H, D, or J")
    values = ordered_map(value, radii)
    return MonotonicityTrace(functional, tuple(x), radii, np.array(values), kappa)


def frequency_trace(u: Field, v: Field, kappa: float, x, radii) -> MonotonicityTrace:
    """Almgren frequency N over increasing radii."""
    return functional_trace("N", u, v, kappa, x, radii)


def check_doubling(trace_H: MonotonicityTrace, d: float, r1: float, r2: float) -> DoublingCheck:
    """Compare H(r2)/H(r1) against the doubling bound e^d (r2/r1)^{2d}.

    H is interpolated log-log between sampled radii, so r1 and r2 only
    need to lie inside the trace range."""
    if r1 > r2:
        raise ValueError(f"need r1 <= r2, got {r1} > {r2}")
    radii = trace_H.radii
    if r1 < radii[0] or r2 > radii[-1]:
        raise ValueError(
            f"[{r1}, {r2}] outside sampled range [{radii[0]}, {radii[-1]}]"
        )
    if np.any(trace_H.values <= 0.0):
        raise ZeroDenominator("H trace touches zero; ratio undefined")
    logH = np.log(trace_H.values)
    h1, h2 = np.exp(np.interp(np.log([r1, r2]), np.log(radii), logH))
    ratio = float(h2 / h1)
    bound = math.exp(d) * (r2 / r1) ** (2.0 * d)
    return DoublingCheck(ratio <= bound * (1.0 + 1e-12), ratio, bound, r1, r2, d)


# ---------------------------------------------------------------------------
# ACF product functional


def acf_J(u: Field, v: Field, kappa: float, x, r: float) -> float:
    """Two-factor product functional; the n=2 kernel is identically 1."""
    _check_pair(u, v)
    du, dv = _j_densities(u, v, kappa)
    return ball_integral(du, x, r) * ball_integral(dv, x, r) / r**4


def acf_J_radial(u_r, v_r, rho, kappa: float, r: float) -> float:
    """J for radially reduced n=3 data: 1D profiles of |x| around the
    base point.  The kernel |y|^{-1} folds into the polar weight, so the
    integrand 4 pi (f'^2 + kappa f^2 g^2) rho is regular at the origin."""
    rho = np.asarray(rho, dtype=float)
    u_r = np.asarray(u_r, dtype=float)
    v_r = np.asarray(v_r, dtype=float)
    if rho.ndim != 1 or rho.size < 3:
        raise ValueError("need a 1D radial grid with at least 3 points")
    if np.any(np.diff(rho) <= 0.0):
        raise ValueError("radial grid must be strictly increasing")
    if u_r.shape != rho.shape or v_r.shape != rho.shape:
        raise ValueError("radial values must match the radial grid")
    if rho[0] > 0.0 or not (0.0 < r <= rho[-1]):
        raise ValueError(f"need rho starting at 0 and 0 < r <= {rho[-1]}, got r={r}")
    du = np.gradient(u_r, rho)
    dv = np.gradient(v_r, rho)
    inter = kappa * (u_r * v_r) ** 2
    fu = 4.0 * math.pi * (du**2 + inter) * rho
    fv = 4.0 * math.pi * (dv**2 + inter) * rho
    inside = rho <= r
    k = int(np.sum(inside))

    def cut_integral(f):
        total = np.trapezoid(f[:k], rho[:k])
        if k < rho.size and rho[k - 1] < r:
            # fractional last cell by linear interpolation of the integrand
            fr = f[k - 1] + (f[k] - f[k - 1]) * (r - rho[k - 1]) / (rho[k] - rho[k - 1])
            total += 0.5 * (f[k - 1] + fr) * (r - rho[k - 1])
        return total

    return cut_integral(fu) * cut_integral(fv) / r**4


def correction_constant(radii, values) -> float:
    """Smallest C >= 0 making e^{-C r^{-1/2}} * values pairwise
    nondecreasing over the radii.

    Bisection on [0, 1e3] against the pairwise constraints; math.inf is
    the sentinel for an insufficient bracket.  Values must be positive.
    """
    radii = _check_radii(radii)
    values = np.asarray(values, dtype=float)
    if values.shape != radii.shape:
        raise ValueError("values must match radii in shape")
    if np.any(values <= 0.0):
        raise ZeroDenominator("trace touches zero; correction fit undefined")
    dlog = np.diff(np.log(values))
    ds = np.diff(radii ** -0.5)  # negative: r^{-1/2} decreases

    def feasible(c):
        return bool(np.all(dlog - c * ds >= -_CFIT_SLACK))

    if feasible(0.0):
        return 0.0
    if not feasible(_CFIT_MAX):
        return math.inf
    lo, hi = 0.0, _CFIT_MAX
    for _ in range(_CFIT_ITERS):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def acf_trace_and_fit(u: Field, v: Field, kappa: float, x, radii):
    """J-trace plus the smallest C >= 0 making e^{-C r^{-1/2}} J(r)
    pairwise nondecreasing (math.inf when no C <= 1e3 works)."""
    trace = functional_trace("J", u, v, kappa, x, radii)
    return trace, correction_constant(trace.radii, trace.values)


# ---------------------------------------------------------------------------
# growth, segregation, and regularity measurements


def nondegeneracy_exponent(u: Field, v: Field, x, radii) -> float:
    """Log-log slope of r -> int_{dB_r(x)} (u + v); degenerate inputs
    (vanishing shell mass) raise ZeroDenominator."""
    _check_pair(u, v)
    radii = _check_radii(radii)
    if radii.size < 3:
        raise ValueError("need at least 3 radii for a trend")
    f = Field(u.grid, u.values + v.values)
    shells = np.array([shell_integral(f, x, r) for r in radii])
    if np.any(shells <= _ZERO_SHELL):
        raise ZeroDenominator("shell integral of u+v is numerically zero")
    return float(np.polyfit(np.log(radii), np.log(shells), 1)[0])


def product_bounds(u: Field, v: Field) -> ProductBounds:
    """Segregation bounds on the pair.

    The interaction-mass exponent is fitted over the windows
    R_max * {1/4, 1/2, 1} around the grid center, R_max the inscribed
    radius; identically segregated pairs (zero product) report 0.0."""
    _check_pair(u, v)
    g = u.grid
    uv = u.values * v.values
    gu = gradient(u)
    gv = gradient(v)
    mixed = u.values * np.hypot(gv.vx, gv.vy) + v.values * np.hypot(gu.vx, gu.vy)
    xmin, xmax, ymin, ymax = g.extent
    r_max = 0.5 * min(xmax - xmin, ymax - ymin)
    center = g.center
    prod_sq = Field(g, uv**2)
    radii = np.array([0.25, 0.5, 1.0]) * r_max
    masses = np.array([ball_integral(prod_sq, center, r) for r in radii])
    if np.all(masses > 0.0):
        exponent = float(np.polyfit(np.log(radii), np.log(masses), 1)[0])
    else:
        exponent = 0.0
    return ProductBounds(float(np.max(uv)), float(np.max(mixed)), exponent)


def gradient_bounds(u: Field, v: Field, margin: float) -> float:
    """sup(|grad u| + |grad v|) over the margin-shrunk interior."""
    _check_pair(u, v)
    g = u.grid
    if margin < 2.0 * g.h:
        raise ValueError(f"margin must be >= 2h = {2.0 * g.h}, got {margin}")
    k = int(math.ceil(margin / g.h - 1e-9))
    if g.nx - 2 * k < 2 or g.ny - 2 * k < 2:
        raise ValueError("margin leaves no interior window")
    gu = gradient(u)
    gv = gradient(v)
    mag = np.hypot(gu.vx, gu.vy) + np.hypot(gv.vx, gv.vy)
    return float(np.max(mag[k:-k, k:-k]))


def holder_seminorm(f: Field, alpha: float, region=None) -> float:
    """Max of |f(x)-f(y)| / |x-y|^alpha over sampled node pairs.

    Pairs are drawn from a lattice coarsened to at most 64 points per
    axis inside `region` (xmin, xmax, ymin, ymax; default the whole
    grid); pairs closer than PAIR_FLOOR are excluded."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    g = f.grid
    xmin, xmax, ymin, ymax = g.extent
    if region is None:
        region = (xmin, xmax, ymin, ymax)
    rx0, rx1, ry0, ry1 = (float(t) for t in region)
    eps = 1e-9 * g.h
    if rx0 < xmin - eps or rx1 > xmax + eps or ry0 < ymin - eps or ry1 > ymax + eps:
        raise ValueError("region exceeds the grid extent")
    isel = np.where((g.x >= rx0 - eps) & (g.x <= rx1 + eps))[0]
    jsel = np.where((g.y >= ry0 - eps) & (g.y <= ry1 + eps))[0]
    if isel.size < 2 or jsel.size < 2:
        raise ValueError("region holds fewer than 2 nodes per axis")
    # endpoint-preserving thinning to at most 64 nodes per axis
    if isel.size > 64:
        isel = isel[np.unique(np.round(np.linspace(0, isel.size - 1, 64)).astype(int))]
    if jsel.size > 64:
        jsel = jsel[np.unique(np.round(np.linspace(0, jsel.size - 1, 64)).astype(int))]
    X, Y = np.meshgrid(g.x[isel], g.y[jsel], indexing="ij")
    px = X.ravel()
    py = Y.ravel()
    vals = f.values[np.ix_(isel, jsel)].ravel()
    best = 0.0
    found = False
    # row blocks keep the pairwise distance matrix at ~64 x n
    for a in range(0, px.size, 64):
        b = min(a + 64, px.size)
        d = np.hypot(px[a:b, None] - px[None, :], py[a:b, None] - py[None, :])
        q = np.abs(vals[a:b, None] - vals[None, :])
        mask = d >= PAIR_FLOOR
        if np.any(mask):
            found = True
            best = max(best, float(np.max(q[mask] / d[mask] ** alpha)))
    if not found:
        raise ValueError(f"no node pairs at distance >= {PAIR_FLOOR} in region")
    return best


def cone_monotonicity(u: Field, v: Field, e, aperture: float) -> float:
    """Violation of directional monotonicity over the cone tau . e >= aperture.

    Scans a 64-direction fan anchored at e; for each admissible tau the
    pair should satisfy tau . grad u >= 0 and tau . grad v <= 0 on the
    interior, and the violation is the worst signed excess (0 when the
    cone property holds)."""
    _check_pair(u, v)
    if not (0.0 <= aperture <= 1.0):
        raise ValueError(f"aperture must be in [0, 1], got {aperture}")
    ex, ey = float(e[0]), float(e[1])
    norm = math.hypot(ex, ey)
    if norm <= 0.0:
        raise ValueError("direction e must be nonzero")
    ex, ey = ex / norm, ey / norm
    gu = gradient(u)
    gv = gradient(v)
    ux = gu.vx[1:-1, 1:-1]
    uy = gu.vy[1:-1, 1:-1]
    vx = gv.vx[1:-1, 1:-1]
    vy = gv.vy[1:-1, 1:-1]
    base = math.atan2(ey, ex)
    worst = 0.0
    for k in range(64):
        t = base + 2.0 * math.pi * k / 64.0
        tx, ty = math.cos(t), math.sin(t)
        if tx * ex + ty * ey < aperture - 1e-12:
            continue
        du = tx * ux + ty * uy
        dv = tx * vx + ty * vy
        worst = max(worst, float(np.max(-du)), float(np.max(dv)))
    return max(0.0, worst)


def harmonic_deficit(
    u: Field, v: Field, x, R: float, cfg: SolveConfig | None = None
) -> float:
    """Energy distance from u - v to its harmonic replacement on B_R(x):
    solve the Dirichlet problem with boundary data (u - v)|_{dB_R}, then
    ball-integrate |grad(u - v - phi)|^2."""
    _check_pair(u, v)
    w = Field(u.grid, u.values - v.values)
    phi = solve_harmonic(u.grid, x, R, w, cfg)
    diff = Field(u.grid, w.values - phi.values)
    gd = gradient(diff)
    return ball_integral(Field(u.grid, gd.magnitude_squared()), x, R)


# ---------------------------------------------------------------------------
# flatness extraction


def _model_error(uu, vv, tx, ty, s, dx, dy):
    t = s * (tx * dx + ty * dy)
    return float(np.max(np.abs(uu - np.maximum(t, 0.0)) + np.abs(vv - np.maximum(-t, 0.0))))


def _best_magnitude(uu, vv, tx, ty, dx, dy, s_lo, s_hi):
    # the sup-error is convex piecewise-linear in s: golden-section is safe
    gr = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = s_lo, s_hi
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc = _model_error(uu, vv, tx, ty, c, dx, dy)
    fd = _model_error(uu, vv, tx, ty, d, dx, dy)
    for _ in range(40):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = _model_error(uu, vv, tx, ty, c, dx, dy)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = _model_error(uu, vv, tx, ty, d, dx, dy)
    s = 0.5 * (a + b)
    return _model_error(uu, vv, tx, ty, s, dx, dy), s


def flatness_direction(u: Field, v: Field, x, R: float) -> FlatnessFit:
    """Best-fit one-plane model on B_R(x).

    Coarse scan over a 256-direction fan and 16 magnitudes on a
    subsampled lattice, then golden-section refinement of the angle
    (with a nested magnitude search) on the full set of ball nodes."""
    _check_pair(u, v)
    g = u.grid
    isl, jsl, w = ball_weights(g, x, R)
    mask = w > 0.0
    xs = g.x[isl] - float(x[0])
    ys = g.y[jsl] - float(x[1])
    DX, DY = np.meshgrid(xs, ys, indexing="ij")
    dx = DX[mask]
    dy = DY[mask]
    uu = u.values[isl, jsl][mask]
    vv = v.values[isl, jsl][mask]
    sup = float(max(np.max(np.abs(uu)), np.max(np.abs(vv))))
    if sup == 0.0:
        return FlatnessFit(np.array([1.0, 0.0]), 0.0, 0.0)
    s0 = sup / R
    # coarse stage on a stride-thinned subset (at most ~4096 nodes)
    stride = max(1, dx.size // 4096)
    cdx, cdy, cu, cv = dx[::stride], dy[::stride], uu[::stride], vv[::stride]
    thetas = 2.0 * math.pi * np.arange(256) / 256.0
    mags = s0 * np.geomspace(0.125, 8.0, 16)
    best = (math.inf, 0.0, s0)
    for t in thetas:
        tx, ty = math.cos(t), math.sin(t)
        proj = tx * cdx + ty * cdy
        for s in mags:
            ts = s * proj
            err = float(np.max(np.abs(cu - np.maximum(ts, 0.0)) + np.abs(cv - np.maximum(-ts, 0.0))))
            if err < best[0]:
                best = (err, t, s)
    _, t_best, s_best = best
    # golden-section on the angle, one coarse fan step to each side
    gr = 0.5 * (math.sqrt(5.0) - 1.0)
    span = 2.0 * math.pi / 256.0
    a, b = t_best - span, t_best + span
    s_lo, s_hi = s_best / 8.0, s_best * 8.0

    def angle_err(t):
        return _best_magnitude(uu, vv, math.cos(t), math.sin(t), dx, dy, s_lo, s_hi)

    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, sc = angle_err(c)
    fd, sd = angle_err(d)
    for _ in range(24):
        if fc <= fd:
            b, d, fd, sd = d, c, fc, sc
            c = b - gr * (b - a)
            fc, sc = angle_err(c)
        else:
            a, c, fc, sc = c, d, fd, sd
            d = a + gr * (b - a)
            fd, sd = angle_err(d)
    if fc <= fd:
        err, t_fin, s_fin = fc, c, sc
    else:
        err, t_fin, s_fin = fd, d, sd
    return FlatnessFit(np.array([math.cos(t_fin), math.sin(t_fin)]), err / R, s_fin)
