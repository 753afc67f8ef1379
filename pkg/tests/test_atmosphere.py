import numpy as np
import pytest

from gravbose import reference
from gravbose.atmosphere import (
    atmosphere_energy,
    atmosphere_mass,
    closed_form_potential,
    potential_consistency_check,
    solve_atmosphere,
    solve_atmosphere_for_mass,
    thin_limit_estimate,
)
from gravbose.errors import DomainError
from gravbose.radial import RadialProfile

NON_ADHESION = reference.ATMOSPHERE_NON_ADHESION
ADHESION = reference.ATMOSPHERE_ADHESION
CASES = [("non_adhesion", r) for r in NON_ADHESION] + [("adhesion", r) for r in ADHESION]


def _ids(case):
    kind, row = case
    return f"{kind}-{row['bc_value']:g}"


@pytest.mark.parametrize("case", CASES, ids=[_ids(c) for c in CASES])
def test_reference_values(atm, case):
    kind, row = case
    sol = atm(1.0, kind, row["bc_value"])
    for key, expected in row.items():
        if key == "bc_value":
            continue
        assert getattr(sol, key) == pytest.approx(expected, rel=reference.tolerance(key)), key


@pytest.mark.parametrize("case", CASES, ids=[_ids(c) for c in CASES])
def test_boundary_conditions_exact(atm, case):
    kind, row = case
    sol = atm(1.0, kind, row["bc_value"])
    p = sol.profile
    assert p.r[0] == 1.0
    assert p.dw[0] == 1.0
    if kind == "non_adhesion":
        assert p.f[0] == 0.0 and p.df[0] == row["bc_value"]
    else:
        assert p.df[0] == 0.0 and p.f[0] == row["bc_value"]
    assert sol.I > 0 and sol.eps < 0 and sol.E < 0


@pytest.mark.parametrize("case", CASES, ids=[_ids(c) for c in CASES])
def test_integral_form_of_potential(atm, case):
    kind, row = case
    assert potential_consistency_check(atm(1.0, kind, row["bc_value"])) < 1e-5


@pytest.mark.parametrize("kind,rows", [("non_adhesion", NON_ADHESION), ("adhesion", ADHESION)])
def test_monotone_trend(atm, kind, rows):
    sols = [atm(1.0, kind, r["bc_value"]) for r in rows]
    I = [s.I for s in sols]
    H = [s.H for s in sols]
    E = [s.E for s in sols]
    assert np.all(np.diff(I) > 0)
    assert np.all(np.diff(H) < 0)
    assert np.all(np.diff(E) < 0)


def test_adhesion_maximum_on_surface(atm):
    sol = atm(1.0, "adhesion", 0.5)
    assert sol.h_m == 0.0
    assert sol.f_m == 0.5


def _tail(sol, lo=1e-11, hi=1e-8):
    p = sol.profile
    rho = p.f**2
    sel = (rho < hi * rho.max()) & (rho > lo * rho.max()) & (p.r > p.r[np.argmax(rho)])
    return p.r[sel], np.log(np.abs(p.f[sel]))


@pytest.mark.parametrize("case", CASES, ids=[_ids(c) for c in CASES])
def test_tail_decay_rate(atm, case):
    # f ~ r^(s-1) exp(-kappa r) with s = (mu + I) / (2 kappa) outside the matter
    kind, row = case
    sol = atm(1.0, kind, row["bc_value"])
    kappa = np.sqrt(-sol.eps)
    s = (sol.mu + sol.I) / (2 * kappa)
    r, logf = _tail(sol)
    slope = np.polyfit(r, logf - (s - 1) * np.log(r), 1)[0]
    assert slope == pytest.approx(-kappa, rel=0.05)


@pytest.mark.parametrize("kind", ["non_adhesion", "adhesion"])
def test_plain_log_slope_of_lightest_rows(atm, kind):
    # the power-law prefactor is weak only when mu + I is small compared with kappa r
    sol = atm(1.0, kind, 0.01)
    r, logf = _tail(sol)
    assert np.polyfit(r, logf, 1)[0] == pytest.approx(-np.sqrt(-sol.eps), rel=0.05)


def test_target_mass_inversion():
    sol = solve_atmosphere_for_mass(1.0, "non_adhesion", 1.0)
    assert sol.I == pytest.approx(1.0, rel=1e-8)
    assert sol.bc_value == pytest.approx(0.08158, rel=1e-3)
    sol = solve_atmosphere_for_mass(1.0, "adhesion", 1.0)
    assert sol.bc_value == pytest.approx(0.09659, rel=1e-3)


def test_hyphenated_kind_accepted(atm):
    a = solve_atmosphere(1.0, "non-adhesion", 0.1)
    assert a.bc_kind == "non_adhesion"
    assert a.eps == atm(1.0, "non_adhesion", 0.1).eps


@pytest.mark.parametrize(
    "args",
    [(-1.0, "adhesion", 0.1), (0.0, "adhesion", 0.1), (1.0, "adhesion", 0.0), (1.0, "partial", 0.1)],
)
def test_domain_errors(args):
    with pytest.raises(DomainError):
        solve_atmosphere(*args)


def test_empty_atmosphere_quantities():
    r = np.linspace(1, 20, 1901)
    z = np.zeros_like(r)
    mu = 2.5
    u, dudr = closed_form_potential(mu, r, z)
    assert np.array_equal(u, -mu / r)
    p = RadialProfile(r, z, z, u, dudr, u)
    assert atmosphere_mass(p) == 0.0
    assert atmosphere_energy(p, 0.0) == 0.0


def test_closed_form_slope_at_surface(atm):
    sol = atm(1.0, "non_adhesion", 1.0)
    _, dudr = closed_form_potential(sol.mu, sol.profile.r, sol.profile.f)
    assert dudr[0] == sol.mu


def test_mass_of_synthetic_profile():
    r = np.linspace(1, 30, 29001)
    f = np.exp(-r) / r
    p = RadialProfile(r, f, f, f, f)
    assert atmosphere_mass(p) == pytest.approx(2 * np.pi * np.exp(-2), rel=1e-9)


def test_thin_limit_formula():
    assert thin_limit_estimate(1e4) == pytest.approx(1e-2)
    with pytest.raises(DomainError):
        thin_limit_estimate(0.0)


def _light(mu, kind):
    sol = solve_atmosphere(mu, kind, 1e-3)
    assert sol.I < 1e-3
    return sol


@pytest.mark.parametrize("kind", ["non_adhesion", "adhesion"])
def test_energy_approaches_minus_mu_for_strong_bodies(kind):
    # eps/(-mu) grows toward one as the body gets stronger
    ratios = [_light(mu, kind).eps / -mu for mu in (10.0, 100.0, 1000.0)]
    assert np.all(np.diff(ratios) > 0)
    assert 0.5 < ratios[-1] < 1.0


@pytest.mark.parametrize("kind", ["non_adhesion", "adhesion"])
def test_thickness_shrinks_for_strong_bodies(kind):
    H = [_light(mu, kind).H for mu in (10.0, 100.0, 1000.0)]
    assert np.all(np.diff(H) < 0)


@pytest.mark.xfail(strict=True, reason="surface layer: eps = -mu + O(mu^(2/3)), about 20-40% off at mu = 100")
@pytest.mark.parametrize("kind", ["non_adhesion", "adhesion"])
def test_energy_within_ten_percent_of_minus_mu_at_100(kind):
    assert _light(100.0, kind).eps == pytest.approx(-100.0, rel=0.1)


@pytest.mark.xfail(strict=True, reason="thickness scales as mu^(-1/3), not mu^(-1/2); factor 4-8 at mu = 100")
@pytest.mark.parametrize("kind", ["non_adhesion", "adhesion"])
def test_thickness_within_factor_three_of_estimate_at_100(kind):
    H = _light(100.0, kind).H
    est = thin_limit_estimate(100.0)
    assert est / 3 <= H <= 3 * est
