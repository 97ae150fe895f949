"""Tests for the coupled 2D solver and the linear disk solves."""

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from segsym.config import SolveConfig
from segsym.elliptic2d import (
    _sup_residual,
    energy,
    solve_harmonic,
    solve_linear_decay,
    solve_system,
)
from segsym.errors import BallOutsideDomain, NoConvergence
from segsym.grid import Field, square_grid
from segsym.presets import linear_pair, linear_pair_bdata

# 1 / I0(5): center value of the radial solution of w'' + w'/r = 25 w
# on [0, 1] with w(1) = 1.  Agrees with scipy.special.i0 and with the
# finite-difference oracle below to 5e-10.
DECAY_CENTER_ORACLE = 0.036710892271286676

# u(0) of the 1D interface profile, from the profile solver at
# half_length 20, spacing 0.05 (test_profile1d pins that run).
PROFILE_CENTER = 0.7163


def radial_decay_oracle(M, A, R, npts=20001):
    """Second-order radial FD solve of w'' + w'/r = M w, w'(0) = 0, w(R) = A.

    At the origin the 2D Laplacian of a radial function is 2 w''(0),
    discretized as 4 (w1 - w0) / dr^2.
    """
    r = np.linspace(0.0, R, npts)
    dr = r[1] - r[0]
    n = npts - 1
    main = np.zeros(n)
    lo = np.zeros(n - 1)
    hi = np.zeros(n - 1)
    rhs = np.zeros(n)
    main[0] = -4.0 / dr**2 - M
    hi[0] = 4.0 / dr**2
    for i in range(1, n):
        main[i] = -2.0 / dr**2 - M
        lo[i - 1] = 1.0 / dr**2 - 1.0 / (2 * r[i] * dr)
        if i < n - 1:
            hi[i] = 1.0 / dr**2 + 1.0 / (2 * r[i] * dr)
        else:
            rhs[i] = -A * (1.0 / dr**2 + 1.0 / (2 * r[i] * dr))
    mat = sp.diags([lo, main, hi], [-1, 0, 1], format="csc")
    return np.append(spsolve(mat, rhs), A)


@pytest.fixture(scope="module")
def solved_k100():
    g = square_grid(1.0, 65)
    fu, fv = linear_pair_bdata()
    return g, solve_system(g, fu, fv, 100.0, SolveConfig(tol=1e-9))


def test_kappa_zero_gives_harmonic_pair():
    g = square_grid(1.0, 33)
    fu, fv = linear_pair_bdata()
    pair = solve_system(g, fu, fv, 0.0)
    assert pair.residual <= 1e-9
    # u - v is then the harmonic extension of the linear data, i.e. x itself
    X = g.meshgrid()[0]
    assert np.max(np.abs(pair.u.values - pair.v.values - X)) <= 1e-9


def test_negative_kappa_rejected():
    g = square_grid(1.0, 17)
    fu, fv = linear_pair_bdata()
    with pytest.raises(ValueError):
        solve_system(g, fu, fv, -1.0)


def test_negative_boundary_rejected():
    g = square_grid(1.0, 17)
    with pytest.raises(ValueError):
        solve_system(g, lambda x, y: x, lambda x, y: np.maximum(-x, 0.0), 1.0)


def test_solution_invariants(solved_k100):
    g, pair = solved_k100
    assert pair.residual <= 1e-9
    assert _sup_residual(pair.u.values, pair.v.values, 100.0, g.h) <= 1e-9
    assert pair.u.values.min() >= 0.0
    assert pair.v.values.min() >= 0.0
    assert pair.u.values.max() <= 1.0 + 1e-12
    assert pair.sweeps > 0
    # every pointwise update solves its scalar equation exactly, so the
    # recorded energies can only go down
    assert np.all(np.diff(pair.energy_trace) <= 1e-12)


def test_comparison_in_kappa(solved_k100):
    g, pair100 = solved_k100
    fu, fv = linear_pair_bdata()
    pair10 = solve_system(g, fu, fv, 10.0, SolveConfig(tol=1e-9))
    assert np.max(pair100.u.values - pair10.u.values) <= 1e-9
    assert np.max(pair100.v.values - pair10.v.values) <= 1e-9


def test_scaling_correspondence(solved_k100):
    # u -> lam u(lam x) maps solutions to solutions with the same kappa;
    # on the lattice the residual scales by exactly lam^3
    g, pair = solved_k100
    lam = 2.0
    g2 = square_grid(0.5, 65)
    r1 = _sup_residual(pair.u.values, pair.v.values, 100.0, g.h)
    r2 = _sup_residual(lam * pair.u.values, lam * pair.v.values, 100.0, g2.h)
    assert r2 == pytest.approx(lam**3 * r1, rel=1e-12)


def test_interface_amplitude_tracks_profile():
    g = square_grid(1.0, 65)
    fu, fv = linear_pair_bdata()
    c = (g.nx - 1) // 2
    centers = []
    for kappa in (100.0, 1000.0):
        pair = solve_system(g, fu, fv, kappa, SolveConfig(tol=1e-9))
        u0 = pair.u.values[c, c]
        centers.append(u0)
        assert u0 == pytest.approx(PROFILE_CENTER * kappa**-0.25, rel=0.15)
    assert centers[1] < centers[0]


def test_product_sup_exponent():
    # sup uv should scale like kappa^(-1/2)
    g = square_grid(1.0, 65)
    fu, fv = linear_pair_bdata()
    ks = np.array([1e2, 1e3, 1e4])
    sups = []
    for kappa in ks:
        pair = solve_system(g, fu, fv, kappa, SolveConfig(tol=1e-8))
        sups.append(np.max(pair.u.values * pair.v.values))
    slope = np.polyfit(np.log(ks), np.log(sups), 1)[0]
    assert -0.65 <= slope <= -0.35


def test_no_convergence_raises():
    g = square_grid(1.0, 65)
    fu, fv = linear_pair_bdata()
    with pytest.raises(NoConvergence) as exc:
        solve_system(g, fu, fv, 100.0, SolveConfig(tol=1e-12, max_iter=100))
    assert exc.value.iterations >= 100
    assert exc.value.residual > 0.0


def test_harmonic_reproduces_discrete_harmonics():
    # x^2 - y^2 satisfies the 5-point equation exactly
    g = square_grid(1.0, 65)
    f = lambda x, y: x * x - y * y
    w = solve_harmonic(g, (0.0, 0.0), 0.9, f)
    X, Y = g.meshgrid()
    assert np.max(np.abs(w.values - f(X, Y))) <= 1e-10


def test_harmonic_max_principle():
    g = square_grid(1.0, 65)
    f = lambda x, y: np.sin(3 * np.arctan2(y, x + 1e-300))
    w = solve_harmonic(g, (0.0, 0.0), 0.8, f)
    X, Y = g.meshgrid()
    rim = np.hypot(X, Y) >= 0.8
    assert w.values.max() <= f(X, Y)[rim].max() + 1e-12
    assert w.values.min() >= f(X, Y)[rim].min() - 1e-12


def test_harmonic_accepts_field_bdata():
    g = square_grid(1.0, 33)
    f = lambda x, y: np.abs(x) + y * y
    X, Y = g.meshgrid()
    w1 = solve_harmonic(g, (0.0, 0.0), 0.7, f)
    w2 = solve_harmonic(g, (0.0, 0.0), 0.7, Field(g, f(X, Y)))
    assert np.array_equal(w1.values, w2.values)


def test_harmonic_disk_outside_raises():
    g = square_grid(1.0, 33)
    with pytest.raises(BallOutsideDomain):
        solve_harmonic(g, (0.5, 0.0), 0.8, lambda x, y: x)


def test_radial_oracle_matches_bessel():
    w = radial_decay_oracle(25.0, 1.0, 1.0)
    assert w[0] == pytest.approx(DECAY_CENTER_ORACLE, abs=1e-8)


def test_decay_2d_matches_radial_oracle():
    g = square_grid(1.0, 129)
    w = solve_linear_decay(25.0, 1.0, 1.0, g)
    c = (g.nx - 1) // 2
    # rim values are imposed at lattice nodes, so the comparison is
    # first order in h
    assert w.values[c, c] == pytest.approx(DECAY_CENTER_ORACLE, rel=0.03)


def test_decay_tiny_M_is_constant():
    g = square_grid(1.0, 65)
    w = solve_linear_decay(1e-12, 2.0, 1.0, g)
    assert np.max(np.abs(w.values - 2.0)) <= 1e-6
    w0 = solve_linear_decay(0.0, 2.0, 1.0, g)
    assert np.max(np.abs(w0.values - 2.0)) <= 1e-10


def test_decay_bounds_and_center_minimum():
    g = square_grid(1.0, 129)
    w = solve_linear_decay(25.0, 1.0, 1.0, g)
    c = (g.nx - 1) // 2
    assert w.values.min() >= 0.0
    assert w.values.max() <= 1.0 + 1e-12
    assert w.values.min() == pytest.approx(w.values[c, c], abs=1e-12)


def test_decay_validates_inputs():
    g = square_grid(1.0, 33)
    with pytest.raises(ValueError):
        solve_linear_decay(-1.0, 1.0, 0.9, g)
    with pytest.raises(ValueError):
        solve_linear_decay(1.0, -1.0, 0.9, g)
    with pytest.raises(BallOutsideDomain):
        solve_linear_decay(1.0, 1.0, 1.5, g)


def test_energy_linear_pair_ball():
    g = square_grid(1.0, 257)
    u, v = linear_pair(g)
    e = energy(u, v, 1.0, (0.0, 0.0), 0.8)
    # centered differences halve the gradient on the kink column, an
    # O(h) strip, so the tolerance is a few h
    assert e == pytest.approx(np.pi * 0.64, abs=3 * g.h)
    # uv vanishes at every node, so kappa cannot matter
    assert energy(u, v, 7.0, (0.0, 0.0), 0.8) == e
