"""Dirichlet-integral routes, local integrals, and the entropy toolkit.

Expected values come from closed forms: D(z^n) = n classically, = 1 under a
unit origin atom, and = s_n under the standard-alpha family, with s_k the
rotation-invariant symbol checked against direct quadrature of the profile
density.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from helpers import rand_outer
from superdirichlet.energy import (
    BregmanF,
    DirichletEngine,
    bregman_f,
    carleson_type_bound,
    dirichlet,
    douglas_type_form,
    local_dirichlet_boundary,
    local_dirichlet_interior,
    LocalMeasure,
    ne_bound,
    phi_entropy,
    radial_mu_symbol,
)
from superdirichlet.measures import (
    CircleGrid,
    DiscMeasure,
    StandardAlphaProfile,
    atomic_weight,
    classical_weight,
    default_disc_grid,
    point_mass_harmonic_weight,
    standard_alpha_weight,
)
from superdirichlet.outer import DistanceProfile


def nodes(n):
    return CircleGrid(n).points


# ---------------------------------------------------------------------------
# Bregman divergence of t -> e^t
# ---------------------------------------------------------------------------

def test_bregman_hand_values():
    assert bregman_f(0.0, 0.0) == 0.0
    assert bregman_f(1.0, 1.0) == 0.0
    assert math.isclose(bregman_f(1.0, 0.0), math.e - 2.0, rel_tol=1e-15)
    # F(x, -inf) degenerates to e^x, F(-inf, finite) blows up
    assert bregman_f(0.5, -math.inf) == math.exp(0.5)
    assert bregman_f(-math.inf, 0.0) == math.inf
    assert bregman_f(-math.inf, -math.inf) == 0.0


def test_bregman_nonnegative_grid():
    xs = np.linspace(-4.0, 4.0, 81)
    F = bregman_f(xs[:, None], xs[None, :])
    assert F.shape == (81, 81)
    assert np.all(F >= 0.0)
    assert np.all(np.abs(np.diag(F)) == 0.0)


def test_bregman_contraction_under_double_slope_cutoff():
    # g(x) = min(x, 2x) contracts the divergence by at most a factor 4
    xs = np.linspace(-3.0, 3.0, 61)
    X, Y = xs[:, None], xs[None, :]
    g = np.minimum(xs, 2.0 * xs)
    lhs = bregman_f(g[:, None], g[None, :])
    rhs = 4.0 * bregman_f(X, Y)
    assert np.all(lhs <= rhs + 1e-12)


def test_bregman_minimizer_is_the_mean():
    rng = np.random.default_rng(11)
    sigma = rng.dirichlet(np.ones(9))
    u = rng.normal(size=9)
    a_star = float(np.sum(sigma * u))

    def objective(a):
        return float(np.sum(sigma * bregman_f(u, a)))

    ent = phi_entropy(sigma, u)
    assert math.isclose(objective(a_star), ent, rel_tol=1e-12)
    for da in (-0.3, -0.01, 0.01, 0.3):
        assert objective(a_star + da) > ent


def test_bregman_is_callable_class():
    assert isinstance(bregman_f, BregmanF)
    assert bregman_f(np.array(2.0), np.array(2.0)) == 0.0


# ---------------------------------------------------------------------------
# the entropy functional
# ---------------------------------------------------------------------------

def test_phi_entropy_two_point_exact():
    # E(e^u) = (1 + 4)/2, exp(E u) = exp(log(4)/2) = 2
    val = phi_entropy(np.array([0.5, 0.5]), np.array([0.0, math.log(4.0)]))
    assert math.isclose(val, 0.5, rel_tol=1e-15)


def test_phi_entropy_zero_for_constants():
    sigma = np.full(8, 1.0 / 8.0)
    assert abs(phi_entropy(sigma, np.full(8, 1.7))) < 1e-14


def test_phi_entropy_singular_samples_use_surrogate_mean():
    sigma = np.full(4, 0.25)
    u = np.array([-math.inf, 0.0, 0.0, 0.0])
    filled = np.array([-20.0, 0.0, 0.0, 0.0])
    val = phi_entropy(sigma, u, filled)
    expected = 0.75 - math.exp(-5.0)
    assert math.isclose(val, expected, rel_tol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=-5.0, max_value=5.0),
                min_size=2, max_size=12))
def test_phi_entropy_nonnegative(values):
    u = np.asarray(values, dtype=float)
    sigma = np.full(u.size, 1.0 / u.size)
    assert phi_entropy(sigma, u) >= -1e-12


# ---------------------------------------------------------------------------
# the rotation-invariant symbol
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_radial_symbol_against_quadrature(alpha):
    prof = StandardAlphaProfile(alpha)
    mu = DiscMeasure.from_radial_profile(prof, default_disc_grid(256))
    s = radial_mu_symbol(mu, 6)
    assert s[0] == 0.0
    # closed form at k = 1: 2/(1 + alpha)
    assert math.isclose(s[1], 2.0 / (1.0 + alpha), rel_tol=1e-12)
    for k in (2, 5):
        oracle, err = quad(lambda v: (1.0 - (1.0 - v) ** k) * prof.dens_v(v),
                           0.0, 1.0)
        assert err < 1e-5  # the v^(alpha-2) endpoint inflates the estimate
        assert math.isclose(s[k], oracle, rel_tol=1e-7)


def test_radial_symbol_growth_exponent():
    # s_k grows like k^(1-alpha); the fitted slope must say so
    prof = StandardAlphaProfile(0.25)
    mu = DiscMeasure.from_radial_profile(prof, default_disc_grid(256))
    s = radial_mu_symbol(mu, 4096)
    k = 2 ** np.arange(4, 13)
    slope = np.polyfit(np.log(k), np.log(s[k]), 1)[0]
    assert abs(slope - 0.75) < 0.02


def test_radial_symbol_empty_measure():
    assert np.all(radial_mu_symbol(DiscMeasure.empty(), 5) == 0.0)


# ---------------------------------------------------------------------------
# local measures and local Dirichlet integrals
# ---------------------------------------------------------------------------

def test_local_measure_normalized_and_reproducing():
    sigma = LocalMeasure.at_point(0.3 + 0.2j, 512)
    assert abs(np.sum(sigma.weights) - 1.0) < 1e-10
    # harmonic extension of the identity recovers the point
    assert abs(sigma.expectation(sigma.grid.points) - (0.3 + 0.2j)) < 1e-10


def test_local_measure_rejects_boundary_hugging_points():
    with pytest.raises(ValueError, match="too close"):
        LocalMeasure.at_point(0.999, 512)


def test_interior_difference_quotient_for_affine_data():
    # f = c0 + c1 z has |f(zeta)-f(w)|/|zeta-w| = |c1| identically
    z = nodes(1024)
    c1 = 1.3 - 0.2j
    lv = local_dirichlet_interior(0.7 + 0.4j + c1 * z, 0.3 + 0.2j)
    assert math.isclose(lv.douglas, abs(c1) ** 2, rel_tol=1e-12)


def test_interior_routes_agree_for_zero_free_affine():
    # with the zero outside the disc both routes see the same value
    z = nodes(1024)
    c1 = 0.9 - 0.3j
    lv = local_dirichlet_interior((1.5 + 0.4j) + c1 * z, 0.3 + 0.2j)
    assert math.isclose(lv.douglas, abs(c1) ** 2, rel_tol=1e-9)
    assert math.isclose(lv.entropy, abs(c1) ** 2, rel_tol=1e-9)


def test_interior_routes_agree_for_random_smooth_outer():
    rng = np.random.default_rng(5)
    for _ in range(4):
        f = rand_outer(rng, 2048)
        w = complex(0.6 * math.sqrt(rng.uniform())
                    * np.exp(2j * np.pi * rng.uniform()))
        lv = local_dirichlet_interior(f, w)
        gap = abs(lv.douglas - lv.entropy) / max(abs(lv.douglas), 1e-30)
        assert gap < 1e-9


def test_boundary_local_values_for_one_minus_z():
    # |f(zeta) - f(1)|^2/|zeta - 1|^2 = 1 a.e. and f is outer, so both
    # routes land on 1
    z = nodes(512)
    lv = local_dirichlet_boundary(1.0 - z, 1.0)
    assert math.isclose(lv.douglas, 1.0, rel_tol=1e-4)
    assert math.isclose(lv.entropy, 1.0, rel_tol=1e-4)


def test_boundary_local_values_for_unimodular_data():
    # z has unit modulus: the quotient route sees the phase swing, the
    # modulus route sees nothing
    lv = local_dirichlet_boundary(nodes(512), 1.0)
    assert math.isclose(lv.douglas, 1.0, rel_tol=1e-4)
    assert abs(lv.entropy) < 1e-6


# ---------------------------------------------------------------------------
# the three global routes
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_classical_monomials(k):
    r = dirichlet(nodes(512) ** k, classical_weight(512))
    assert math.isclose(r.local, float(k), rel_tol=1e-12)
    assert math.isclose(r.area, float(k), rel_tol=1e-3)
    # z^k is not outer, so the entropy route declines
    assert math.isnan(r.entropy)
    assert r.finite_values() == [r.area, r.local]
    assert r.rel_spread() < 1e-3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_origin_atom_monomials(k):
    # the origin atom charges every monomial by exactly its variance, 1
    r = dirichlet(nodes(512) ** k, atomic_weight([(0.0, 1.0)]))
    assert math.isclose(r.local, 1.0, rel_tol=1e-12)
    assert math.isclose(r.area, 1.0, rel_tol=2e-2)
    assert math.isnan(r.entropy)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("k", [1, 3])
def test_standard_alpha_monomials(alpha, k):
    prof = StandardAlphaProfile(alpha)
    s_k = float(prof.circulant_symbol(np.array([float(k)]))[0])
    r = dirichlet(nodes(512) ** k, standard_alpha_weight(alpha, 512))
    assert math.isclose(r.local, s_k, rel_tol=1e-12)
    assert math.isclose(r.area, s_k, rel_tol=1e-4)


def test_point_mass_harmonic_on_z():
    w = point_mass_harmonic_weight(0.0, 1.0)
    r = dirichlet(nodes(512), w)
    assert math.isclose(r.area, 1.0, rel_tol=1e-4)
    assert math.isclose(r.local, 1.0, rel_tol=1e-4)
    assert math.isclose(douglas_type_form(nodes(512), w), r.local, rel_tol=1e-12)


def test_engine_rejects_mismatched_grid():
    engine = DirichletEngine(classical_weight(512), 512)
    with pytest.raises(ValueError, match="engine built for"):
        engine.dirichlet(nodes(256))


def test_quadratic_scaling():
    z = nodes(512)
    f = 2.0 - z  # zero-free on the closed disc, all routes finite
    c = 2.5 - 1.5j
    for weight in (classical_weight(512), atomic_weight([(0.3j, 0.7)])):
        base = dirichlet(f, weight)
        scaled = dirichlet(c * f, weight)
        for v0, v1 in zip(base.values(), scaled.values()):
            assert math.isclose(v1, abs(c) ** 2 * v0, rel_tol=1e-12)
        d0 = douglas_type_form(f, weight)
        d1 = douglas_type_form(c * f, weight)
        assert math.isclose(d1, abs(c) ** 2 * d0, rel_tol=1e-12)


def test_all_routes_agree_on_random_outer_data():
    rng = np.random.default_rng(3)
    weights = [
        classical_weight(1024),
        atomic_weight([(0.0, 1.0)]),
        standard_alpha_weight(0.5, 1024),
        point_mass_harmonic_weight(0.0, 1.0),
    ]
    for trial in range(2):
        f = rand_outer(rng, 1024)
        for weight in weights:
            r = dirichlet(f, weight)
            d = douglas_type_form(f, weight)
            vals = r.finite_values() + [d]
            assert len(vals) == 4  # outer data: every route applies
            spread = (max(vals) - min(vals)) / max(abs(max(vals)), 1e-30)
            assert spread < 0.02


# ---------------------------------------------------------------------------
# the pairwise (Douglas) form
# ---------------------------------------------------------------------------

def test_douglas_pins_on_z():
    z = nodes(512)
    assert math.isclose(douglas_type_form(z, classical_weight(512)), 1.0,
                        rel_tol=1e-9)
    assert math.isclose(douglas_type_form(z, atomic_weight([(0.0, 1.0)])), 1.0,
                        rel_tol=1e-12)
    val = douglas_type_form(z, standard_alpha_weight(0.5, 512))
    assert math.isclose(val, 2.0 / 1.5, rel_tol=1e-3)


def test_douglas_matches_local_route_for_atoms():
    # for purely atomic mu both computations reduce to the same variances
    rng = np.random.default_rng(9)
    f = rand_outer(rng, 512)
    weight = atomic_weight([(0.2 + 0.1j, 0.8), (-0.4j, 0.5)])
    r = dirichlet(f, weight)
    assert math.isclose(douglas_type_form(f, weight), r.local, rel_tol=1e-9)


# ---------------------------------------------------------------------------
# auxiliary bounds
# ---------------------------------------------------------------------------

def test_carleson_bound_rejects_bad_exponent():
    z = nodes(256)
    for alpha in (0.0, 1.0, -0.3, 2.0):
        with pytest.raises(ValueError, match="alpha"):
            carleson_type_bound(z, alpha)


def test_carleson_bound_vanishes_for_constant_modulus():
    z = nodes(256)
    assert abs(carleson_type_bound(z, 0.5)) < 1e-12
    assert abs(carleson_type_bound(np.full(256, 3.0 + 0j), 0.5)) < 1e-12


def test_carleson_bound_positive_and_quadratic():
    rng = np.random.default_rng(7)
    f = rand_outer(rng, 512)
    base = carleson_type_bound(f, 0.5)
    assert base > 0.0
    samples = f.boundary_values()
    scaled = carleson_type_bound(3.0 * samples, 0.5)
    assert math.isclose(scaled, 9.0 * base, rel_tol=1e-9)


def test_ne_bound_smoke():
    phi = DistanceProfile("log", 1.0)
    mu = DiscMeasure.from_atoms([(0.0, 1.0)])
    assert ne_bound(phi, 1.0, DiscMeasure.empty()) == 0.0
    val = ne_bound(phi, 1.0, mu, levels=30)
    assert val > 0.0 and math.isfinite(val)
    # a finer dyadic grid can only enlarge the suprema
    assert ne_bound(phi, 1.0, mu, levels=40) >= val
