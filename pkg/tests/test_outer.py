import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdirichlet import (
    BoundaryLogModulus,
    BoundarySet,
    CircleGrid,
    ConfigError,
    DistanceProfile,
    OuterFunction,
    arc_localize,
    class_R_check,
    cutoff_max,
    cutoff_min,
    distance_outer,
    outer_from_log_modulus,
    wedge_square,
)

from helpers import rand_outer


# ---------------------------------------------------------------------------
# log-modulus containers
# ---------------------------------------------------------------------------

def test_blm_constant():
    blm = BoundaryLogModulus.constant(0.3, 16)
    assert blm.n == 16
    assert blm.mean() == pytest.approx(0.3)
    assert blm.is_integrable


def test_blm_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        BoundaryLogModulus(np.zeros(10))


def test_blm_singular_budget():
    # a bounded number of -inf nodes is legal; order sqrt(N) is the budget
    n = 64
    h = np.zeros(n)
    h[0] = -np.inf
    blm = BoundaryLogModulus(h)
    assert blm.is_integrable
    assert np.isfinite(blm.filled()).all()
    h_all = np.full(n, -np.inf)
    with pytest.raises(ValueError):
        BoundaryLogModulus(h_all)


def test_blm_csv_round_trip(tmp_path):
    n = 32
    h = np.cos(CircleGrid(n).thetas)
    path = tmp_path / "log_mod.csv"
    with open(path, "w") as fh:
        fh.write("# angle, log-modulus\n")
        for t, v in zip(CircleGrid(n).thetas, h):
            fh.write(f"{t},{v}\n")
    blm = BoundaryLogModulus.from_csv(str(path))
    assert blm.n == n
    assert np.allclose(blm.samples, h)


def test_blm_csv_rejects_nonuniform_angles(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0.0,1.0\n0.5,1.0\n1.0,1.0\n2.0,1.0\n")
    with pytest.raises(ConfigError):
        BoundaryLogModulus.from_csv(str(path))


# ---------------------------------------------------------------------------
# outer functions
# ---------------------------------------------------------------------------

def test_outer_constant_function():
    f = OuterFunction(BoundaryLogModulus.constant(math.log(2.0), 32))
    assert f.f0() == pytest.approx(2.0)
    assert f.at(0.0) == pytest.approx(2.0)
    assert np.allclose(np.abs(f.boundary_values()), 2.0)


def test_outer_value_at_zero_is_geometric_mean():
    rng = np.random.default_rng(5)
    f = rand_outer(rng, 256)
    assert abs(f.at(0.0)) == pytest.approx(math.exp(f.log_modulus.mean()),
                                           rel=1e-10)


def test_outer_boundary_modulus_is_exact():
    rng = np.random.default_rng(6)
    f = rand_outer(rng, 128)
    assert np.allclose(np.abs(f.boundary_values()),
                       np.exp(f.log_modulus.samples), rtol=1e-12)


def test_outer_taylor_of_exponential():
    # h = c·cos(theta) is the boundary log modulus of exp(c z), whose
    # Taylor coefficients are c^m/m!
    c = 0.3
    n = 256
    h = c * np.cos(CircleGrid(n).thetas)
    f = OuterFunction(BoundaryLogModulus(h))
    coeffs = f.taylor_coefficients(7)
    expected = np.array([c**m / math.factorial(m) for m in range(7)])
    assert np.allclose(coeffs.real, expected, atol=1e-10)
    assert np.allclose(coeffs.imag, 0.0, atol=1e-10)


def test_outer_interior_matches_poisson_extension():
    # |f(z)| = exp(P[h](z)) for outer functions
    rng = np.random.default_rng(7)
    f = rand_outer(rng, 256)
    z = 0.4 + 0.3j
    pois = np.mean((1 - abs(z) ** 2) / np.abs(f.grid.points - z) ** 2
                   * f.log_modulus.samples)
    assert abs(f.at(z)) == pytest.approx(math.exp(pois), rel=1e-6)


def test_outer_product_adds_log_moduli():
    rng = np.random.default_rng(8)
    f, g = rand_outer(rng, 64), rand_outer(rng, 64)
    prod = f * g
    assert np.allclose(prod.log_modulus.samples,
                       f.log_modulus.samples + g.log_modulus.samples)


def test_outer_from_log_modulus_value_shortcut():
    h = np.zeros(32)
    assert outer_from_log_modulus(h, z=0.5) == pytest.approx(1.0)


def test_on_ring_max_principle():
    rng = np.random.default_rng(9)
    f = rand_outer(rng, 128)
    ring = np.abs(f.on_ring(0.7))
    assert ring.max() <= np.exp(f.log_modulus.samples).max() + 1e-9


# ---------------------------------------------------------------------------
# cut-off algebra
# ---------------------------------------------------------------------------

def test_cutoff_lattice_identities():
    rng = np.random.default_rng(10)
    f, g = rand_outer(rng, 64), rand_outer(rng, 64)
    lo = cutoff_min(f, g).log_modulus.samples
    hi = cutoff_max(f, g).log_modulus.samples
    assert np.allclose(np.minimum(f.log_modulus.samples,
                                  g.log_modulus.samples), lo)
    assert np.allclose(lo + hi,
                       f.log_modulus.samples + g.log_modulus.samples)


def test_wedge_square_log_law():
    rng = np.random.default_rng(11)
    f = rand_outer(rng, 64)
    h = f.log_modulus.samples
    assert np.allclose(wedge_square(f).log_modulus.samples,
                       np.minimum(h, 2 * h))


def test_cutoff_rejects_mismatched_grids():
    a = OuterFunction(BoundaryLogModulus.constant(0.0, 32))
    b = OuterFunction(BoundaryLogModulus.constant(0.0, 64))
    with pytest.raises(ConfigError):
        cutoff_min(a, b)


# ---------------------------------------------------------------------------
# distance profiles
# ---------------------------------------------------------------------------

def test_profile_families():
    t = np.array([0.1, 0.5, 1.0])
    power = DistanceProfile("power", 2.0)
    assert np.allclose(power.value(t), t**-2)
    log_prof = DistanceProfile("log", 1.5)
    assert np.allclose(log_prof.value(t),
                       np.log(np.e * np.pi / t) ** 1.5)
    exp_log = DistanceProfile("exp-log", 0.5, sign=-1)
    assert np.allclose(exp_log.value(t),
                       np.exp(-np.log(np.e * np.pi / t) ** 0.5))
    # log_value agrees with log(value) where the latter is finite
    for phi in (power, log_prof, exp_log):
        assert np.allclose(phi.log_value(t), np.log(phi.value(t)))


@pytest.mark.parametrize("family, power, sign", [
    ("power", 1.0, 1), ("power", 2.5, 1), ("log", 2.0, 1),
    ("exp-log", 0.5, -1), ("exp-log", 2.5, -1),
])
def test_profile_derivative_matches_finite_differences(family, power, sign):
    phi = DistanceProfile(family, power, sign=sign)
    ts = np.array([0.05, 0.2, 0.8])
    eps = 1e-6
    numeric = (phi.value(ts + eps) - phi.value(ts - eps)) / (2 * eps)
    assert np.allclose(phi.derivative(ts), numeric, rtol=1e-5)


def test_profile_limit_flags():
    # power profiles t^{-beta}: beta > 0 blows up, beta < 0 vanishes
    assert DistanceProfile("power", 1.0).blows_up_at_zero
    assert not DistanceProfile("power", 1.0).vanishes_at_zero
    assert DistanceProfile("power", -1.0).vanishes_at_zero
    assert DistanceProfile("exp-log", 1.0, sign=-1).vanishes_at_zero
    assert DistanceProfile("log", 1.0).blows_up_at_zero


def test_profile_rejects_unknown_family():
    with pytest.raises(ValueError):
        DistanceProfile("cosine", 1.0)


def test_class_r_verdicts():
    # decreasing, slowly varying members pass; t^{-2} fails the x²|phi'|
    # monotonicity; increasing (sign -1) profiles are not class R at all,
    # and fast exp-log ones additionally break slope doubling
    assert class_R_check(DistanceProfile("power", 0.5)).accepted
    assert class_R_check(DistanceProfile("power", 1.0)).accepted
    assert class_R_check(DistanceProfile("log", 1.0)).accepted
    assert class_R_check(DistanceProfile("exp-log", 1.0, sign=1)).accepted
    report = class_R_check(DistanceProfile("power", 2.0))
    assert not report.accepted
    assert "x^2|phi'| increasing" in report.violated
    report = class_R_check(DistanceProfile("exp-log", 1.0, sign=-1))
    assert not report.accepted
    assert "decreasing" in report.violated
    report = class_R_check(DistanceProfile("exp-log", 2.5, sign=-1))
    assert not report.accepted
    assert "slope doubling" in report.violated


# ---------------------------------------------------------------------------
# boundary sets
# ---------------------------------------------------------------------------

def test_boundary_set_distances():
    e = BoundarySet.from_points([0.0])
    theta = np.array([0.0, np.pi / 2, np.pi])
    assert np.allclose(e.angular_distance(theta), [0.0, np.pi / 2, np.pi])
    assert np.allclose(e.chordal_distance(theta),
                       np.abs(np.exp(1j * theta) - 1.0))


def test_boundary_set_arc_membership():
    e = BoundarySet.from_arc(0.0, 1.0)
    assert e.angular_distance(np.array([0.5]))[0] == 0.0
    assert e.angular_distance(np.array([1.5]))[0] == pytest.approx(0.5)


def test_neighborhood_measure_point_closed_form():
    e = BoundarySet.from_points([0.3])
    for t in (0.05, 0.2, 0.8):
        expected = 2 * math.asin(t / 2) / math.pi
        assert e.neighborhood_measure(t) == pytest.approx(expected, rel=1e-12)


def test_neighborhood_measure_arc_closed_form():
    a, b = 0.3, 1.1
    e = BoundarySet.from_arc(a, b)
    for t in (0.05, 0.3):
        expected = (b - a + 4 * math.asin(t / 2)) / (2 * math.pi)
        assert e.neighborhood_measure(t) == pytest.approx(expected, rel=1e-12)


@given(st.lists(st.floats(min_value=0.0, max_value=2 * math.pi - 1e-6),
                min_size=1, max_size=6),
       st.floats(min_value=1e-3, max_value=1.5))
@settings(max_examples=60)
def test_neighborhood_measure_union_bounds(thetas, t):
    e = BoundarySet.from_points(thetas)
    total = e.neighborhood_measure(t)
    single = 2 * math.asin(t / 2) / math.pi
    assert -1e-12 <= total <= min(1.0, len(set(thetas)) * single) + 1e-12
    assert total >= single - 1e-12


def test_full_circle_and_empty():
    assert BoundarySet.full_circle().neighborhood_measure(0.1) == 1.0
    assert BoundarySet.empty().is_empty


def test_node_mask_strictness():
    grid = CircleGrid(8)
    e = BoundarySet.from_points([0.0])
    spacing = 2 * np.pi / 8
    mask = e.node_mask(grid, 1e-12)
    assert mask[0] and mask.sum() == 1
    # chordal distance to the two neighbors is 2 sin(spacing/2) > spacing/2
    mask = e.node_mask(grid, 2 * math.sin(spacing / 2) + 1e-12)
    assert mask.sum() == 3


# ---------------------------------------------------------------------------
# distance outer functions and localization
# ---------------------------------------------------------------------------

def test_distance_outer_modulus_matches_profile():
    e = BoundarySet.from_points([0.0])
    phi = DistanceProfile("exp-log", 1.0, sign=-1)
    f = distance_outer(phi, e, n=256)
    mods = np.abs(f.boundary_values())
    # at the set node the modulus vanishes exactly
    assert mods[0] == 0.0
    # far from the set the modulus follows exp(-log(e·pi/d)) = d/(e·pi)
    j = 64  # theta = pi/2
    d = abs(np.exp(1j * np.pi / 2) - 1)
    assert mods[j] == pytest.approx(d / (np.e * np.pi), rel=1e-9)


def test_distance_outer_rejects_singular_profile_on_arcs():
    phi = DistanceProfile("exp-log", 1.0, sign=-1)
    with pytest.raises(ConfigError):
        distance_outer(phi, BoundarySet.from_arc(0.0, 1.0), n=64)
    with pytest.raises(ConfigError):
        distance_outer(phi, BoundarySet.empty(), n=64)


def test_arc_localize_moduli_multiply():
    rng = np.random.default_rng(12)
    f = rand_outer(rng, 128)
    gamma, co = arc_localize(f, (0.5, 1.5))
    zeta = f.grid.points
    q = np.abs((zeta - np.exp(0.5j)) * (np.exp(1.5j) - zeta))
    prod = np.abs(gamma.boundary_values()) * np.abs(co.boundary_values())
    expected = q**2 * np.exp(f.log_modulus.samples)
    # q vanishes at the endpoints; compare away from them
    good = q > 1e-6
    assert np.allclose(prod[good], expected[good], rtol=1e-8)


def test_arc_localize_rejects_degenerate():
    f = OuterFunction(BoundaryLogModulus.constant(0.0, 32))
    with pytest.raises(ConfigError):
        arc_localize(f, (1.0, 1.0))
