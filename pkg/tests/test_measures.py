import math

import numpy as np
import pytest
from scipy import integrate

from superdirichlet import (
    BoundaryMeasure,
    CircleGrid,
    ConfigError,
    DiscGrid,
    DiscMeasure,
    StandardAlphaProfile,
    atomic_weight,
    classical_weight,
    default_disc_grid,
    load_config,
    point_mass_harmonic_weight,
    riesz_moment,
    standard_alpha_weight,
)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def test_circle_grid_nodes():
    g = CircleGrid(8)
    assert g.n == 8
    assert np.allclose(g.thetas, 2 * np.pi * np.arange(8) / 8)
    assert np.allclose(np.abs(g.points), 1.0)
    assert g.spacing == pytest.approx(2 * np.pi / 8)


def test_circle_grid_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        CircleGrid(12)


def test_disc_grid_weights_fill_the_disc():
    grid = default_disc_grid(256)
    total = float(np.sum(grid.node_weights()))
    # normalized area of the disc is 1; the dyadic rings stop at a floor
    assert 0.95 <= total <= 1.0 + 1e-12
    assert np.all(grid.radii < 1.0)
    assert np.all(grid.radial_weights > 0.0)


def test_disc_grid_refines_toward_boundary():
    grid = default_disc_grid(256)
    gaps = np.diff(1.0 - grid.radii)
    # 1 - r decreases (rings accumulate at the boundary)
    assert np.all(gaps < 0.0)


# ---------------------------------------------------------------------------
# standard-alpha radial profile
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_alpha_profile_moment_against_quadrature(alpha):
    prof = StandardAlphaProfile(alpha)
    # independent oracle: ∫0^1 (1-r^2) dens(r) 2r dr by adaptive quadrature
    oracle, err = integrate.quad(
        lambda r: (1 - r**2) * prof.dens_r(np.array([r]))[0] * 2 * r,
        0.0, 1.0)
    assert err < 1e-6
    assert prof.v_moment(1.0) == pytest.approx(oracle, rel=1e-6)


def test_alpha_profile_mass_diverges_but_moment_is_finite():
    prof = StandardAlphaProfile(0.5)
    # total mass ∫ dens 2r dr diverges like ∫ (1-r)^{-...}; the damped
    # moment stays finite
    assert math.isfinite(prof.v_moment(1.0))


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def test_disc_measure_rejects_bad_atoms():
    with pytest.raises(ValueError):
        DiscMeasure(atoms=[(1.0 + 0j, 1.0)])
    with pytest.raises(ValueError):
        DiscMeasure(atoms=[(0.5, -1.0)])


def test_disc_measure_density_needs_grid():
    with pytest.raises(ValueError):
        DiscMeasure(density=np.ones(4))


def test_disc_measure_radial_flag():
    grid = default_disc_grid(64)
    radial = DiscMeasure(grid=grid, density=np.ones(grid.n_radii))
    assert radial.is_radial_density
    wavy = np.ones((grid.n_radii, grid.n_theta))
    wavy[:, 0] = 2.0
    assert not DiscMeasure(grid=grid, density=wavy).is_radial_density


def test_disc_measure_total_mass_atoms():
    mu = DiscMeasure.from_atoms([(0.0, 1.5), (0.5j, 0.5)])
    assert mu.total_mass() == pytest.approx(2.0)


def test_boundary_measure_rejects_duplicate_atoms():
    with pytest.raises(ValueError):
        BoundaryMeasure(atoms=[(0.0, 1.0), (2 * np.pi, 1.0)])


def test_boundary_measure_uniform():
    nu = BoundaryMeasure.arc_length(CircleGrid(32))
    assert nu.is_uniform_density
    assert nu.total_mass() == pytest.approx(1.0)


def test_riesz_moment_atoms_exact():
    mu = DiscMeasure.from_atoms([(0.5, 2.0), (0.0, 1.0)])
    assert riesz_moment(mu) == pytest.approx(2.0 * 0.75 + 1.0)


def test_riesz_moment_alpha_density_matches_profile():
    w = standard_alpha_weight(0.5, 256)
    prof = StandardAlphaProfile(0.5)
    assert riesz_moment(w.mu) == pytest.approx(prof.v_moment(1.0), rel=1e-6)


# ---------------------------------------------------------------------------
# weight factories
# ---------------------------------------------------------------------------

def test_classical_weight_shape():
    w = classical_weight(64)
    assert w.mu.is_empty
    assert w.nu.is_uniform_density
    assert w.nu.total_mass() == pytest.approx(1.0)


def test_atomic_weight_shape():
    w = atomic_weight([(0.25j, 2.0)])
    assert w.nu.is_zero
    assert w.mu.total_mass() == pytest.approx(2.0)


def test_point_mass_harmonic_weight_shape():
    w = point_mass_harmonic_weight(1.0, 2.5)
    assert w.mu.is_empty
    assert w.nu.atom_mass.tolist() == [2.5]
    assert w.nu.atom_theta.tolist() == [1.0]


def test_standard_alpha_weight_is_radial():
    w = standard_alpha_weight(0.5, 128)
    assert w.mu.is_radial_density
    assert w.nu.is_zero


# ---------------------------------------------------------------------------
# configuration loading
# ---------------------------------------------------------------------------

def test_load_config_defaults_and_atoms(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("""
# comment line
family = atomic
mu.atom = 0.5+0i 1.0
n = 256
""")
    weight, params = load_config(str(cfg))
    assert weight.label == "atomic"
    assert weight.mu.atom_pos.tolist() == [0.5 + 0j]
    assert params["n"] == 256
    assert params["seed"] == 0
    assert params["trials"] == 20


def test_load_config_overrides_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 256\nseed = 3\n")
    _, params = load_config(str(cfg), {"n": 512})
    assert params["n"] == 512
    assert params["seed"] == 3


def test_load_config_none_path_gives_defaults():
    weight, params = load_config(None)
    assert params["n"] == 1024
    assert weight.is_zero


@pytest.mark.parametrize("body, fragment", [
    ("family = nope\n", "family"),
    ("n = 300\n", "power of two"),
    ("family = standard-alpha\n", "alpha"),
    ("mu.atom = 2+0i 1.0\n", "mu.atom"),
    ("whatever = 3\n", "unknown"),
    ("n 256\n", "key = value"),
])
def test_load_config_rejections(tmp_path, body, fragment):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    with pytest.raises(ConfigError, match=fragment):
        load_config(str(cfg))


def test_load_config_rejects_bad_override():
    with pytest.raises(ConfigError):
        load_config(None, {"n": 300})
