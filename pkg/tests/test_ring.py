import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import simpson

from gravbose import reference
from gravbose.errors import ConvergenceError, DegenerateFieldError, DomainError, TrivialFixedPointError
from gravbose.ring import (
    AxisWarning,
    RingGrid,
    angular_momentum,
    eigenvalue_update,
    helmholtz_step,
    poisson_potential,
    ring_iteration,
    ring_observables,
    ring_pde_residual,
    solve_ring,
)
from gravbose.scales import HBAR

REF = reference.RING_L1


@pytest.fixture(scope="module")
def l1(ring_solution):
    return ring_solution(1)


@pytest.fixture(scope="module")
def l2(ring_solution):
    return ring_solution(2)


@pytest.fixture(scope="module")
def grid1():
    return RingGrid(1)


# --- converged solution ---------------------------------------------------
def test_energy(l1):
    assert l1.E == pytest.approx(REF["E"], rel=0.02)
    assert l1.eps == pytest.approx(3 * REF["E"], rel=0.02)


def test_energy_between_first_two_spherical_solutions(l1, sph):
    assert sph(0).E < l1.E < sph(1).E


@pytest.mark.parametrize("key", ["inner_radius", "outer_radius", "height"])
def test_geometry(l1, key):
    assert getattr(l1, key) == pytest.approx(REF[key], rel=0.05)


def test_ring_grows_with_winding(l1, l2):
    assert l2.outer_radius > l1.outer_radius
    assert l2.max_radius > l1.max_radius
    assert l1.E < l2.E < 0


@pytest.mark.parametrize("which", ["l1", "l2"])
def test_virial(which, request):
    sol = request.getfixturevalue(which)
    assert sol.virial_residual <= 5e-3


def test_normalization_on_the_solver_grid(l1):
    assert l1.grid.volume_integral(l1.f_bar**2) / l1.v**3 == pytest.approx(1.0, abs=1e-6)


def test_normalization_by_independent_quadrature(l1):
    # cylindrical coordinates, physical units, via the interpolated field
    rho = np.linspace(0, 120, 601)
    z = np.linspace(0, 120, 601)
    R, Z = np.meshgrid(rho, z, indexing="ij")
    dens = l1.cylindrical_density(R, Z)
    total = 2 * 2 * np.pi * simpson(simpson(dens * R, x=z, axis=1), x=rho)
    assert total == pytest.approx(1.0, rel=2e-3)


def test_one_more_sweep_is_stationary(l1):
    _, v_next = ring_iteration(l1.grid, l1.f_bar, l1.v)
    assert abs(v_next - l1.v) / l1.v < 1e-8


def test_equatorial_reflection_symmetry(l1):
    r = np.array([2.0, 10.0, 30.0])
    for theta in (0.2, 0.7, 1.3):
        assert np.allclose(l1.envelope(r, theta), l1.envelope(r, np.pi - theta), rtol=1e-10)


@pytest.mark.parametrize("which,l", [("l1", 1), ("l2", 2)])
def test_axis_exponent(which, l, request):
    sol = request.getfixturevalue(which)
    theta = np.geomspace(1e-3, 1e-2, 8)
    dens = sol.density(sol.max_radius, theta)
    slope = np.polyfit(np.log(np.sin(theta)), np.log(dens), 1)[0]
    assert slope == pytest.approx(2 * l, abs=1e-2)


def test_envelope_regular_on_axis(l1):
    # g - g(axis) is O(theta^2)
    g = l1.envelope(l1.max_radius, np.array([1e-7, 1e-6, 1e-5]))
    assert np.all(np.isfinite(g)) and np.all(g != 0)
    d1, d2 = g[1] - g[0], g[2] - g[0]
    assert d2 / d1 == pytest.approx(100, rel=0.01)


def test_envelope_property_matches_grid(l1):
    assert l1.g.shape == (l1.grid.n_r, l1.grid.n_theta)
    i, j = 200, 10
    assert l1.g[i, j] == pytest.approx(float(l1.envelope(l1.r[i], l1.theta_nodes[j])), rel=1e-8)


def test_differential_form_residual(l1):
    res_f, res_u = ring_pde_residual(l1)
    assert res_f < 2e-2 and res_u < 2e-2


def test_differential_residual_falls_with_resolution(l1):
    fine = solve_ring(1, grid=RingGrid(1, n_r=800))
    assert max(ring_pde_residual(fine)) < 0.5 * max(ring_pde_residual(l1))


@pytest.mark.slow
def test_refined_grid_changes_energy_little(l1):
    fine = solve_ring(1, grid=l1.grid.refined(2))
    assert abs(fine.E - l1.E) / abs(l1.E) < 5e-3


def test_angular_momentum_per_particle(l1, l2):
    assert l1.Lz_per_particle == 1 and l2.Lz_per_particle == 2


# --- potential --------------------------------------------------------------
def test_potential_of_empty_field(grid1):
    assert np.all(poisson_potential(grid1, np.zeros((grid1.n_r, grid1.n_theta)), 0.3) == 0.0)


def test_potential_of_spherical_blob_is_monopole_outside(grid1):
    v = 0.4
    f = np.repeat(np.exp(-(grid1.r**2))[:, None], grid1.n_theta, axis=1)
    f *= np.sqrt(1.0 / grid1.volume_integral(f**2))
    u = poisson_potential(grid1, f, v)
    far = grid1.r > 6
    assert np.allclose(u[far], (-1.0 / (v**2 * grid1.r[far]))[:, None], rtol=1e-6)


def test_potential_of_torus_against_direct_quadrature(grid1):
    a, s, v = 2.0, 0.4, 0.5
    R = grid1.r[:, None] * np.sqrt(1 - grid1.x**2)[None, :]
    Z = grid1.r[:, None] * grid1.x[None, :]
    f = np.exp(-((R - a) ** 2 + Z**2) / (2 * s * s))
    u = poisson_potential(grid1, f, v)

    # direct 3-D sum over a coarse cylindrical grid of the same density
    rc = np.linspace(a - 6 * s, a + 6 * s, 61)
    zc = np.linspace(-6 * s, 6 * s, 61)
    psi = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    RC, ZC, PSI = np.meshgrid(rc, zc, psi, indexing="ij")
    rho = np.exp(-((RC - a) ** 2 + ZC**2) / (s * s))
    dV = (rc[1] - rc[0]) * (zc[1] - zc[0]) * (psi[1] - psi[0]) * RC
    mass = np.sum(rho * dV)
    for i, j in [(np.searchsorted(grid1.r, 6.0), 20), (np.searchsorted(grid1.r, 12.0), 32), (np.searchsorted(grid1.r, 20.0), 5)]:
        px, pz = grid1.r[i] * np.sqrt(1 - grid1.x[j] ** 2), grid1.r[i] * grid1.x[j]
        d = np.sqrt(px**2 + RC**2 - 2 * px * RC * np.cos(PSI) + (pz - ZC) ** 2)
        direct = -np.sum(rho * dV / d) / v**2
        assert u[i, j] == pytest.approx(direct, rel=1e-2)
    # far field is the monopole of the total mass
    i = np.searchsorted(grid1.r, 24.0)
    assert u[i, 0] == pytest.approx(-mass / (v**2 * grid1.r[i]), rel=1e-2)


# --- screened step and eigenvalue -------------------------------------------
def test_screened_step_of_zero_potential(grid1):
    f = np.ones((grid1.n_r, grid1.n_theta))
    assert np.all(helmholtz_step(grid1, np.zeros_like(f), f, 0.2) == 0.0)


def test_screened_step_axis_behaviour_and_parity(l1):
    grid = l1.grid
    out = helmholtz_step(grid, l1.u_bar, l1.f_bar, l1.v)
    # grid nodes are symmetric in cos(theta)
    assert np.allclose(out, out[:, ::-1], rtol=1e-12, atol=1e-14 * np.abs(out).max())
    modes = grid.to_modes(out, "f")
    from gravbose.ring.legendre import assoc_legendre_table

    i = np.searchsorted(grid.r, 2.0)
    theta = np.geomspace(1e-4, 1e-2, 6)
    P = assoc_legendre_table(grid.k_f[-1], 1, np.cos(theta))[grid.k_f]
    vals = modes[:, i] @ P
    slope = np.polyfit(np.log(np.sin(theta)), np.log(np.abs(vals)), 1)[0]
    assert slope == pytest.approx(1.0, abs=1e-3)


def test_eigenvalue_quotient_is_scale_free(l1):
    g = l1.grid
    a = eigenvalue_update(g, l1.u_bar, l1.f_bar)
    b = eigenvalue_update(g, l1.u_bar, 7.5 * l1.f_bar)
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(l1.v**2, rel=1e-6)


def test_eigenvalue_of_empty_field(grid1):
    z = np.zeros((grid1.n_r, grid1.n_theta))
    with pytest.raises(DegenerateFieldError):
        eigenvalue_update(grid1, z, z)


# --- failure modes ------------------------------------------------------------
@pytest.mark.parametrize("l", [0, -1, 1.5])
def test_winding_number_validated(l):
    with pytest.raises(DomainError):
        solve_ring(l)


def test_iteration_budget_reported():
    with pytest.raises(ConvergenceError, match="residual"):
        solve_ring(1, max_iter=3)


def test_collapse_to_zero(grid1):
    with pytest.raises(TrivialFixedPointError):
        solve_ring(1, grid=grid1, seed=np.zeros((grid1.n_r, grid1.n_theta)))


def test_grid_must_match_winding():
    with pytest.raises(DomainError):
        solve_ring(2, grid=RingGrid(1))


# --- observables ----------------------------------------------------------
def test_observables_identities(l1):
    for r, theta in [(5.0, 0.4), (16.0, np.pi / 2), (30.0, 2.0)]:
        j, v = ring_observables(l1, r, theta)
        rs = r * np.sin(theta)
        g = float(l1.envelope(r, theta))
        assert v * rs == pytest.approx(1.0)
        assert j / (rs * g * g) == pytest.approx(1.0)


def test_unit_speed_at_unit_distance(l1):
    _, v = ring_observables(l1, 1.0, np.pi / 2)
    assert v == pytest.approx(1.0)


def test_observables_on_axis(l1):
    with pytest.warns(AxisWarning):
        j, v = ring_observables(l1, 3.0, 0.0)
    assert j == 0.0 and np.isnan(v)


def test_angular_momentum_examples():
    assert angular_momentum(0, 1e20) == 0.0
    assert angular_momentum(1, 1e20) == pytest.approx(1e20 * HBAR, rel=1e-15)
    with pytest.raises(DomainError):
        angular_momentum(-1, 10)


@given(st.integers(0, 50), st.floats(1, 1e40))
def test_angular_momentum_bilinear(l, N):
    assert angular_momentum(2 * l, N) == pytest.approx(2 * angular_momentum(l, N))
    assert angular_momentum(l, 3 * N) == pytest.approx(3 * angular_momentum(l, N))


def test_no_truncation_warning_at_default_resolution():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        solve_ring(1, geometry=False)
