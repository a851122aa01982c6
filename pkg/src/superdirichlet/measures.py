"""Measures, weights, and quadrature grids on the unit disc and circle.

The weight ω = (Green potential of a disc measure μ) + (Poisson integral of a
boundary measure ν) is represented by the pair (μ, ν).  Disc measures combine
finitely many atoms with an optional density sampled on a polar grid; radially
symmetric families may additionally carry an exact radial profile so that
deep-boundary mass can be integrated analytically instead of trusting node
quadrature (the sampled representation alone loses the boundary-concentrated
part of the mass, which matters for kernel estimates at small 1−r).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np

from ._util import QUADRATURE_CAP, SignaledInfinity, is_power_of_two, parse_point

__all__ = [
    "CircleGrid",
    "DiscGrid",
    "StandardAlphaProfile",
    "DiscMeasure",
    "BoundaryMeasure",
    "SuperharmonicWeight",
    "riesz_moment",
    "classical_weight",
    "standard_alpha_weight",
    "atomic_weight",
    "point_mass_harmonic_weight",
    "ConfigError",
    "load_config",
    "default_disc_grid",
    "dyadic_gauss_v",
]


class ConfigError(ValueError):
    """Raised when a configuration file violates the documented schema."""


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

class CircleGrid:
    """Uniform grid on the unit circle carrying normalized arc length.

    Nodes are theta_j = 2*pi*j/n with weights 1/n, so quadrature against the
    node weights integrates with respect to the normalized measure m
    (trapezoid rule, spectrally accurate for periodic integrands).

    Parameters
    ----------
    n : int
        Number of nodes; must be a power of two (keeps FFT-based conjugate
        transforms fast and exact-size).
    """

    def __init__(self, n: int):
        if not is_power_of_two(n):
            raise ValueError(f"circle grid size must be a power of two, got {n}")
        self.n = int(n)
        self.thetas = 2.0 * np.pi * np.arange(self.n) / self.n
        self.points = np.exp(1j * self.thetas)
        self.weights = np.full(self.n, 1.0 / self.n)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"CircleGrid(n={self.n})"


class DiscGrid:
    """Polar grid with dyadic radial refinement toward the boundary.

    The radius range [0, 1-2^-depth] is split into dyadic blocks
    [1-2^-k, 1-2^-(k+1)], each subdivided into ``nodes_per_block`` equal
    cells.  Radially, every cell carries the two Gauss-Legendre nodes of
    the v = r^2 variable, with weights summing to the exact Jacobian
    integral b^2 - a^2 of the cell — so constants are integrated with no
    radial error at all (the weights sum to the area of the covered disc)
    and per-cell cubics in r^2 are exact.  Angles are uniform with
    trapezoid weights 1/n_theta.

    Quadrature against normalized area measure (total mass of the unit disc
    = 1) is ``sum(values * radial_weights[:, None] / n_theta)``.
    """

    def __init__(self, depth: int, nodes_per_block: int, n_theta: int):
        if depth < 1 or nodes_per_block < 1:
            raise ValueError("depth and nodes_per_block must be >= 1")
        if not is_power_of_two(n_theta):
            raise ValueError(f"angular node count must be a power of two, got {n_theta}")
        self.depth = int(depth)
        self.nodes_per_block = int(nodes_per_block)
        self.n_theta = int(n_theta)

        offset = 0.5 / math.sqrt(3.0)
        radii = []
        weights = []
        for k in range(self.depth):
            a, b = 1.0 - 2.0 ** (-k), 1.0 - 2.0 ** (-k - 1)
            edges = np.linspace(a * a, b * b, self.nodes_per_block + 1)
            va, vb = edges[:-1], edges[1:]
            mid, half = 0.5 * (va + vb), vb - va
            v_nodes = np.stack([mid - offset * half, mid + offset * half], axis=1)
            radii.append(np.sqrt(v_nodes.reshape(-1)))
            weights.append(np.repeat(0.5 * half, 2))
        self.radii = np.concatenate(radii)
        self.radial_weights = np.concatenate(weights)
        self.thetas = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        self.outer_radius = 1.0 - 2.0 ** (-self.depth)

    @property
    def n_radii(self) -> int:
        return self.radii.size

    def nodes(self) -> np.ndarray:
        """All grid nodes as a complex (n_radii, n_theta) array."""
        return self.radii[:, None] * np.exp(1j * self.thetas)[None, :]

    def node_weights(self) -> np.ndarray:
        """Normalized-area quadrature weights, shape (n_radii, n_theta)."""
        return np.broadcast_to(
            self.radial_weights[:, None] / self.n_theta,
            (self.n_radii, self.n_theta),
        )

    def integrate(self, values: np.ndarray) -> float:
        """Integrate node samples against normalized area measure."""
        return float(np.sum(values * self.node_weights()))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return (
            f"DiscGrid(depth={self.depth}, nodes_per_block={self.nodes_per_block},"
            f" n_theta={self.n_theta})"
        )


def default_disc_grid(n: int) -> DiscGrid:
    """Disc grid whose resolution is tied to the circle-grid size ``n``.

    Depth and per-block node count both grow with n so that refining the
    boundary grid refines every quadrature error source at once.
    """
    if not is_power_of_two(n):
        raise ValueError(f"grid size must be a power of two, got {n}")
    depth = (n.bit_length() - 1) + 8
    npb = max(2, n // 512)
    return DiscGrid(depth=depth, nodes_per_block=npb, n_theta=n)


# ---------------------------------------------------------------------------
# dyadic Gauss quadrature in the v = 1 - r^2 variable
# ---------------------------------------------------------------------------

_GAUSS_ORDER = 24
_GN, _GW = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


def dyadic_gauss_v(fn: Callable[[np.ndarray], np.ndarray], v_floor: float,
                   v_top: float = 1.0) -> float | np.ndarray:
    """Integrate ``fn`` over (v_floor, v_top] by Gauss rules on dyadic blocks.

    Blocks are (v_top*2^-(k+1), v_top*2^-k]; the subdivision keeps endpoint
    power singularities v^(gamma) with gamma > -1 resolved to near machine
    precision.  The caller handles (0, v_floor] analytically.

    ``fn`` receives a flat array of nodes and may return either a same-shape
    array (scalar integrand, result is a float) or an array with extra
    *leading* axes (vector integrand, integrated along the node axis).
    """
    if v_floor >= v_top:
        return 0.0
    n_blocks = max(1, int(math.ceil(math.log2(v_top / v_floor))))
    hi = v_top * 2.0 ** (-np.arange(n_blocks))
    lo = np.maximum(hi / 2.0, v_floor)
    lo[-1] = v_floor
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    # nodes laid out as (block, gauss-node)
    v = mid[:, None] + half[:, None] * _GN[None, :]
    vals = np.asarray(fn(v.ravel()))
    w = (half[:, None] * _GW[None, :]).ravel()
    out = np.sum(vals * w, axis=-1)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# radially symmetric density profiles
# ---------------------------------------------------------------------------

class StandardAlphaProfile:
    """Exact radial profile of the standard weighted-space family.

    The measure is the Riesz measure of the weight (1-|z|^2)^alpha, i.e.
    -Laplacian/2 of the weight against normalized area measure:

        dens(r) = 2*alpha*(1 - alpha*r^2) * (1 - r^2)^(alpha - 2).

    In the variable v = 1 - r^2 the measure reads dens_v(v) dv x (dtheta/2pi)
    with dens_v(v) = 2*alpha*(1 - alpha + alpha*v) * v^(alpha-2), which makes
    all radial moments against powers of v exact Beta-type expressions.  The
    total mass is infinite (the density concentrates at the boundary); only
    v-weighted moments are finite.
    """

    def __init__(self, alpha: float):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {alpha}")
        self.alpha = float(alpha)

    def dens_r(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        v = 1.0 - r * r
        a = self.alpha
        return 2.0 * a * (1.0 - a * r * r) * v ** (a - 2.0)

    def dens_v(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        a = self.alpha
        return 2.0 * a * (1.0 - a + a * v) * v ** (a - 2.0)

    def v_moment(self, p: float) -> float:
        """Exact ∫ (1-r^2)^p dμ; finite iff p + alpha > 1."""
        a = self.alpha
        if p + a <= 1.0:
            return math.inf
        return 2.0 * a * ((1.0 - a) / (p + a - 1.0) + a / (p + a))

    def partial_v_moment(self, p: float, delta: float) -> float:
        """Exact ∫_{v < delta} v^p dens_v(v) dv (the boundary-side tail)."""
        a = self.alpha
        if p + a <= 1.0:
            return math.inf
        return 2.0 * a * (
            (1.0 - a) * delta ** (p + a - 1.0) / (p + a - 1.0)
            + a * delta ** (p + a) / (p + a)
        )

    def mass_between(self, v_lo: float, v_hi: float) -> float:
        """Exact μ-mass of the annulus v_lo < 1-r^2 < v_hi (v_lo > 0).

        Antiderivative of dens_v is -2α v^(α-1)(1-v), so the block mass is
        2α[v_lo^(α-1)(1-v_lo) - v_hi^(α-1)(1-v_hi)].
        """
        if not 0.0 < v_lo <= v_hi:
            raise ValueError("need 0 < v_lo <= v_hi")
        a = self.alpha
        return 2.0 * a * (
            v_lo ** (a - 1.0) * (1.0 - v_lo) - v_hi ** (a - 1.0) * (1.0 - v_hi)
        )

    def circulant_symbol(self, k: np.ndarray) -> np.ndarray:
        """Exact s_k = ∫ (1 - r^(2k)) dμ = 2αΓ(α)·k·Γ(k+1)/Γ(k+1+α).

        These are the Fourier eigenvalues of the rotation-invariant pair
        energy generated by the measure; they grow like 2αΓ(α)·k^(1-α).
        """
        a = self.alpha
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        pos = k > 0
        kp = k[pos]
        out[pos] = 2.0 * a * kp * np.exp(
            math.lgamma(a) + np.vectorize(math.lgamma)(kp + 1.0)
            - np.vectorize(math.lgamma)(kp + 1.0 + a)
        )
        return out

    def green_exact(self, abs_z: np.ndarray) -> np.ndarray:
        """Closed-form Green potential 2*(1-|z|^2)^alpha: the squared-log
        kernel potential of the Riesz measure is twice the weight."""
        abs_z = np.asarray(abs_z, dtype=float)
        return 2.0 * (1.0 - abs_z * abs_z) ** self.alpha


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def _as_atoms(atoms: Iterable[tuple[complex, float]] | None):
    if atoms is None:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=float)
    pairs = list(atoms)
    pos = np.array([complex(p) for p, _ in pairs], dtype=complex)
    mass = np.array([float(m) for _, m in pairs], dtype=float)
    return pos, mass


class DiscMeasure:
    """Positive measure on the open unit disc: atoms plus an optional density.

    Parameters
    ----------
    atoms : iterable of (position, mass), optional
        Atom positions must have modulus strictly below 1; masses >= 0.
    grid, density : DiscGrid and samples, optional
        Density values (per normalized area measure) at the grid nodes,
        shape (n_radii, n_theta) or (n_radii,) for radially symmetric data.
    profile : StandardAlphaProfile, optional
        Exact radial law behind a radially symmetric density; enables
        analytically-tailed radial integrals.
    """

    def __init__(self, atoms=None, grid: DiscGrid | None = None,
                 density: np.ndarray | None = None,
                 profile: StandardAlphaProfile | None = None):
        self.atom_pos, self.atom_mass = _as_atoms(atoms)
        if np.any(np.abs(self.atom_pos) >= 1.0):
            bad = self.atom_pos[np.abs(self.atom_pos) >= 1.0][0]
            raise ValueError(f"atom position {bad} has modulus >= 1")
        if np.any(self.atom_mass < 0.0):
            raise ValueError("atom masses must be nonnegative")
        if (grid is None) != (density is None):
            raise ValueError("grid and density must be supplied together")
        self.grid = grid
        if density is not None:
            density = np.asarray(density, dtype=float)
            if density.ndim == 1:
                density = np.broadcast_to(
                    density[:, None], (grid.n_radii, grid.n_theta)
                ).copy()
            if density.shape != (grid.n_radii, grid.n_theta):
                raise ValueError(
                    f"density shape {density.shape} does not match grid "
                    f"({grid.n_radii}, {grid.n_theta})"
                )
            if np.any(density < 0.0):
                raise ValueError("density values must be nonnegative")
        self.density = density
        self.profile = profile

    # -- constructors ------------------------------------------------------
    @classmethod
    def empty(cls) -> "DiscMeasure":
        return cls()

    @classmethod
    def from_atoms(cls, atoms) -> "DiscMeasure":
        return cls(atoms=atoms)

    @classmethod
    def from_radial_profile(cls, profile: StandardAlphaProfile,
                            grid: DiscGrid) -> "DiscMeasure":
        return cls(grid=grid, density=profile.dens_r(grid.radii),
                   profile=profile)

    # -- structure queries -------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return self.atom_mass.size == 0 and self.density is None

    @property
    def has_density(self) -> bool:
        return self.density is not None

    @property
    def is_radial_density(self) -> bool:
        """True when the density part is constant along each ring."""
        if self.density is None:
            return False
        if self.profile is not None:
            return True
        return bool(np.all(self.density == self.density[:, :1]))

    def ring_masses(self) -> tuple[np.ndarray, np.ndarray]:
        """(radii, per-ring masses) of the sampled density part."""
        if self.density is None:
            return np.zeros(0), np.zeros(0)
        mean_dens = self.density.mean(axis=1)
        return self.grid.radii, mean_dens * self.grid.radial_weights

    def density_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (positions, masses) of the sampled density part."""
        if self.density is None:
            return np.zeros(0, dtype=complex), np.zeros(0)
        w = self.density * self.grid.node_weights()
        return self.grid.nodes().ravel(), w.ravel()

    def total_mass(self) -> float:
        atoms = float(self.atom_mass.sum())
        if self.density is None:
            return atoms
        if self.profile is not None:
            return atoms + self.profile.v_moment(0.0)
        return atoms + float(np.sum(self.density * self.grid.node_weights()))


class BoundaryMeasure:
    """Positive measure on the unit circle: atoms plus an optional density.

    Densities are samples of dν/dm on a :class:`CircleGrid`; the atom angles
    must be pairwise distinct.
    """

    def __init__(self, atoms: Iterable[tuple[float, float]] | None = None,
                 grid: CircleGrid | None = None,
                 density: np.ndarray | None = None):
        pairs = list(atoms) if atoms is not None else []
        self.atom_theta = np.array([float(t) % (2 * np.pi) for t, _ in pairs])
        self.atom_mass = np.array([float(m) for _, m in pairs])
        if np.any(self.atom_mass < 0.0):
            raise ValueError("atom masses must be nonnegative")
        if self.atom_theta.size != np.unique(self.atom_theta).size:
            raise ValueError("boundary atom angles must be pairwise distinct")
        if (grid is None) != (density is None):
            raise ValueError("grid and density must be supplied together")
        self.grid = grid
        if density is not None:
            density = np.asarray(density, dtype=float)
            if density.shape != (grid.n,):
                raise ValueError("density shape does not match the circle grid")
            if np.any(density < 0.0):
                raise ValueError("density values must be nonnegative")
        self.density = density

    @classmethod
    def zero(cls) -> "BoundaryMeasure":
        return cls()

    @classmethod
    def arc_length(cls, grid: CircleGrid) -> "BoundaryMeasure":
        """Normalized arc length: density identically 1."""
        return cls(grid=grid, density=np.ones(grid.n))

    @classmethod
    def from_atoms(cls, atoms) -> "BoundaryMeasure":
        return cls(atoms=atoms)

    @property
    def is_zero(self) -> bool:
        return self.atom_mass.size == 0 and self.density is None

    @property
    def is_uniform_density(self) -> bool:
        return self.density is not None and bool(
            np.all(self.density == self.density[0])
        )

    def atom_points(self) -> np.ndarray:
        return np.exp(1j * self.atom_theta)

    def total_mass(self) -> float:
        total = float(self.atom_mass.sum())
        if self.density is not None:
            total += float(self.density.mean())
        return total


class SuperharmonicWeight:
    """The weight ω = G_μ + P_ν through its Riesz pair (μ, ν).

    Zero measures are legal (they select the degenerate Hardy-space case);
    whenever either measure is nonzero, ω is strictly positive on the disc.
    """

    def __init__(self, mu: DiscMeasure, nu: BoundaryMeasure, label: str = "custom"):
        self.mu = mu
        self.nu = nu
        self.label = label

    @property
    def is_zero(self) -> bool:
        return self.mu.is_empty and self.nu.is_zero

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"SuperharmonicWeight(label={self.label!r})"


# ---------------------------------------------------------------------------
# Riesz moment
# ---------------------------------------------------------------------------

def riesz_moment(mu: DiscMeasure, cap: float = QUADRATURE_CAP) -> float:
    """∫ (1-|w|^2) dμ(w): exact over atoms, quadrature over the density part.

    Finiteness of this moment is the standing hypothesis making the Green
    potential not identically infinite; a density representation that pushes
    the value beyond ``cap`` is reported as a signalled infinity.
    """
    total = float(np.sum(mu.atom_mass * (1.0 - np.abs(mu.atom_pos) ** 2)))
    if mu.has_density:
        if mu.profile is not None:
            total += mu.profile.v_moment(1.0)
        else:
            _, masses = (
                mu.ring_masses() if mu.is_radial_density else (None, None)
            )
            if masses is not None:
                radii = mu.grid.radii
                total += float(np.sum(masses * (1.0 - radii**2)))
            else:
                w, m = mu.density_nodes()
                total += float(np.sum(m * (1.0 - np.abs(w) ** 2)))
    if not math.isfinite(total) or total > cap:
        return SignaledInfinity(total if math.isfinite(total) else cap)
    return total


# ---------------------------------------------------------------------------
# named weight families
# ---------------------------------------------------------------------------

def classical_weight(n: int) -> SuperharmonicWeight:
    """ν = normalized arc length, μ = 0 (the unweighted Dirichlet case)."""
    grid = CircleGrid(n)
    return SuperharmonicWeight(
        DiscMeasure.empty(), BoundaryMeasure.arc_length(grid), label="classical"
    )


def standard_alpha_weight(alpha: float, n: int,
                          grid: DiscGrid | None = None) -> SuperharmonicWeight:
    """μ = μ_α (density −Δ(1−|z|²)^α, radially symmetric), ν = 0."""
    grid = grid if grid is not None else default_disc_grid(n)
    profile = StandardAlphaProfile(alpha)
    return SuperharmonicWeight(
        DiscMeasure.from_radial_profile(profile, grid),
        BoundaryMeasure.zero(),
        label=f"standard-alpha({alpha:g})",
    )


def atomic_weight(atoms: Sequence[tuple[complex, float]]) -> SuperharmonicWeight:
    """μ = finitely many disc atoms, ν = 0."""
    return SuperharmonicWeight(
        DiscMeasure.from_atoms(atoms), BoundaryMeasure.zero(), label="atomic"
    )


def point_mass_harmonic_weight(theta: float = 0.0,
                               mass: float = 1.0) -> SuperharmonicWeight:
    """ν = a single boundary atom (harmonic weight P_{δ}), μ = 0."""
    return SuperharmonicWeight(
        DiscMeasure.empty(),
        BoundaryMeasure.from_atoms([(theta, mass)]),
        label="point-mass-harmonic",
    )


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_PARAM_KEYS = {
    "n": int,
    "depth": int,
    "nodes_per_block": int,
    "seed": int,
    "trials": int,
    "workers": int,
    "tolerance": float,
    "alpha": float,
    "gamma": float,
    "degree": int,
    # pass-through specs consumed by the command-line layer
    "function": str,
    "set": str,
    "sweep": str,
    "points": str,
    "eta": str,
    "grids": str,
}

_DEFAULTS = {"n": 1024, "seed": 0, "trials": 20, "tolerance": 0.02, "workers": 1}

_FAMILIES = ("classical", "standard-alpha", "atomic", "point-mass-harmonic", "custom")


def _parse_lines(path: str):
    entries: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
            key, value = line.split("=", 1)
            entries.append((key.strip(), value.strip()))
    return entries


def load_config(path: str | None, overrides: dict | None = None):
    """Load a plain-text key-value configuration file.

    Schema (one ``key = value`` per line, ``#`` comments)::

        family = classical | standard-alpha | atomic | point-mass-harmonic | custom
        alpha = 0.5                 # standard-alpha only
        mu.atom = 0.5+0i 1.0        # repeatable: position mass
        nu.atom = 0.0 1.0           # repeatable: angle mass
        nu.density = uniform | none
        n = 4096                    # circle grid size (power of two)
        depth = 20                  # optional disc-grid depth override
        nodes_per_block = 8         # optional disc-grid refinement override
        seed = 0
        trials = 20
        tolerance = 0.02
        workers = 1
        degree = 64                 # cyclicity curve length
        function = one-minus-z      # CLI function spec (see cli module)
        set = point:0               # CLI boundary-set spec
        sweep = dyadic:3..8         # CLI capacity sweep spec
        points = 0+0i, 0.5+0i       # CLI evaluation points
        eta = log                   # CLI Stieltjes profile spec
        grids = 1024, 2048          # CLI grid ladder for sweeps

    ``overrides`` (typically command-line flags) are applied on top of the
    file's parameters before validation and family resolution; ``path`` may
    be ``None`` to start from the defaults alone.  Returns
    ``(weight, params)``; raises :class:`ConfigError` naming the offending
    key on schema violations, including atoms off the disc and density
    representations with a divergent Riesz moment.
    """
    entries = _parse_lines(path) if path is not None else []
    params = dict(_DEFAULTS)
    family = None
    mu_atoms: list[tuple[complex, float]] = []
    nu_atoms: list[tuple[float, float]] = []
    nu_density = None

    for key, value in entries:
        if key == "family":
            if value not in _FAMILIES:
                raise ConfigError(
                    f"key 'family': unknown family {value!r} (expected one of {_FAMILIES})"
                )
            family = value
        elif key == "mu.atom":
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError(f"key 'mu.atom': expected 'position mass', got {value!r}")
            try:
                pos, mass = parse_point(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ConfigError(f"key 'mu.atom': {exc}") from exc
            mu_atoms.append((pos, mass))
        elif key == "nu.atom":
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError(f"key 'nu.atom': expected 'angle mass', got {value!r}")
            try:
                nu_atoms.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"key 'nu.atom': {exc}") from exc
        elif key == "nu.density":
            if value not in ("uniform", "none"):
                raise ConfigError(f"key 'nu.density': expected 'uniform' or 'none', got {value!r}")
            nu_density = value
        elif key == "out":
            params["out"] = value
        elif key in _PARAM_KEYS:
            try:
                params[key] = _PARAM_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"key {key!r}: {exc}") from exc
        else:
            raise ConfigError(f"unknown configuration key {key!r}")

    if overrides:
        params.update(overrides)
    n = params["n"]
    if not is_power_of_two(n):
        raise ConfigError(f"key 'n': must be a power of two, got {n}")

    weight = _resolve_family(family, params, mu_atoms, nu_atoms, nu_density, n)

    moment = riesz_moment(weight.mu)
    if isinstance(moment, SignaledInfinity) or not math.isfinite(moment):
        raise ConfigError("key 'mu.atom'/'family': Riesz moment of μ diverges")
    return weight, params


def _resolve_family(family, params, mu_atoms, nu_atoms, nu_density, n):
    if family in (None, "custom"):
        grid = CircleGrid(n)
        try:
            mu = DiscMeasure.from_atoms(mu_atoms)
        except ValueError as exc:
            raise ConfigError(f"key 'mu.atom': {exc}") from exc
        if nu_density == "uniform":
            nu = BoundaryMeasure(atoms=nu_atoms, grid=grid, density=np.ones(n))
        else:
            nu = BoundaryMeasure(atoms=nu_atoms)
        return SuperharmonicWeight(mu, nu, label=family or "custom")
    if family == "classical":
        return classical_weight(n)
    if family == "standard-alpha":
        alpha = params.get("alpha")
        if alpha is None:
            raise ConfigError("key 'alpha': required for family 'standard-alpha'")
        if not 0.0 < alpha < 1.0:
            raise ConfigError(f"key 'alpha': must lie in (0,1), got {alpha}")
        if "depth" in params or "nodes_per_block" in params:
            grid = DiscGrid(
                depth=params.get("depth", (n.bit_length() - 1) + 8),
                nodes_per_block=params.get("nodes_per_block", max(2, n // 512)),
                n_theta=n,
            )
        else:
            grid = default_disc_grid(n)
        return standard_alpha_weight(alpha, n, grid=grid)
    if family == "atomic":
        if not mu_atoms:
            raise ConfigError("key 'mu.atom': family 'atomic' needs at least one atom")
        try:
            return atomic_weight(mu_atoms)
        except ValueError as exc:
            raise ConfigError(f"key 'mu.atom': {exc}") from exc
    if family == "point-mass-harmonic":
        if nu_atoms:
            theta, mass = nu_atoms[0]
        else:
            theta, mass = 0.0, 1.0
        return point_mass_harmonic_weight(theta, mass)
    raise ConfigError(f"key 'family': unknown family {family!r}")
