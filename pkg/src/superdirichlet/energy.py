"""Dirichlet integrals by independent routes, with the Bregman/entropy
machinery that connects them.

Routes implemented by :func:`dirichlet` (all consuming the same boundary
samples, nothing else shared):

* area — quadrature of |f'|² ω over a polar grid, with spectral
  differentiation of the boundary data truncated at N/2;
* local — the ν part by boundary local integrals (for uniform ν this is the
  exact coefficient form Σ k|f̂_k|²), the μ part by the variance identity
  (1−|w|²)·D_w(f) = E_{σ_w}|f|² − |f(w)|², which for rotation-invariant μ
  collapses to the exact symbol sum Σ_k |f̂_k|² ∫(1−r^{2k}) dμ;
* entropy — |f(w)|² replaced by exp of the harmonic extension of
  2 log|f*| (Jensen equality for outer functions), and the ν part through
  the Bregman integrand F(u(λ), u(ζ)); this route needs outer data and is
  reported as NaN otherwise.

The Douglas-type double form carries a single calibration constant
:data:`DOUGLAS_CALIBRATION` fixed once by the (f = z, μ = δ₀) case, where
the raw double integral equals 2 while the squared-kernel convention of the
area form gives 1.  It multiplies only the μ part; the ν part needs none.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._spectral import AnalyticField, HarmonicField, harmonic_ring
from ._util import QUADRATURE_CAP, SignaledInfinity
from .measures import (
    BoundaryMeasure,
    CircleGrid,
    DiscGrid,
    DiscMeasure,
    SuperharmonicWeight,
    default_disc_grid,
)
from .outer import OuterFunction, _fill_singular
from .potentials import PotentialEvaluator

__all__ = [
    "DOUGLAS_CALIBRATION",
    "BregmanF",
    "bregman_f",
    "LocalMeasure",
    "phi_entropy",
    "local_dirichlet_interior",
    "local_dirichlet_boundary",
    "DirichletResult",
    "DirichletEngine",
    "dirichlet",
    "radial_mu_symbol",
    "douglas_type_form",
    "carleson_type_bound",
    "ne_bound",
]

# Fixed once by the f = z, mu = delta_0 case (raw double integral 2, squared
# Green convention target 1); never refit.  Applies to the A_mu part only.
DOUGLAS_CALIBRATION = 0.5


def radial_mu_symbol(mu: DiscMeasure, kmax: int) -> np.ndarray:
    """s_k = ∫ (1−r^{2k}) dμ for k = 0..kmax of the rotation-invariant
    density part, exact for profile measures.

    These are the eigenvalues of the variance form on the Fourier modes:
    D_μ(f) = Σ_k |f̂_k|² s_k for radially symmetric μ.
    """
    k = np.arange(kmax + 1, dtype=float)
    if mu.profile is not None:
        return mu.profile.circulant_symbol(k)
    sig, masses = mu.ring_masses()
    if sig.size == 0:
        return np.zeros(kmax + 1)
    return np.sum(masses[None, :] * (1.0 - sig[None, :] ** (2.0 * k[:, None])),
                  axis=1)


class BregmanF:
    """F(x, y) = e^x − e^y − e^y(x − y), extended by F(x, −∞) = e^x.

    Nonnegative, zero exactly on the diagonal; this is the Bregman
    divergence of t ↦ e^t.
    """

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(invalid="ignore", over="ignore"):
            ex = np.where(np.isneginf(x), 0.0, np.exp(x))
            ey = np.where(np.isneginf(y), 0.0, np.exp(y))
            gap = np.where(np.isneginf(y), 0.0, x - y)
            gap = np.where(np.isneginf(x) & np.isfinite(y), -np.inf, gap)
            out = ex - ey - ey * gap
        out = np.where(np.isneginf(x) & np.isfinite(y), np.inf, out)
        if out.ndim == 0:
            return float(out)
        return out


bregman_f = BregmanF()


@dataclass(frozen=True)
class LocalMeasure:
    """σ_w: the harmonic measure of an interior point w on a circle grid.

    Node weights (1−|w|²)/|ζ_j−w|² / n sum to 1 up to the trapezoid
    aliasing term, which is below 1e−10 as long as n(1−|w|) ≥ 24;
    construction enforces that margin.
    """

    w: complex
    grid: CircleGrid
    weights: np.ndarray

    @classmethod
    def at_point(cls, w: complex, n: int) -> "LocalMeasure":
        w = complex(w)
        if abs(w) >= 1.0 - 24.0 / n:
            raise ValueError(
                f"|w| = {abs(w):.6g} too close to the boundary for n = {n}; "
                "increase the grid size"
            )
        grid = CircleGrid(n)
        weights = (1.0 - abs(w) ** 2) / np.abs(grid.points - w) ** 2 / n
        return cls(w, grid, weights)

    def expectation(self, samples: np.ndarray) -> complex:
        return complex(np.sum(self.weights * samples))


def phi_entropy(weights, u, u_for_mean=None) -> float:
    """Entropy functional E_σ(e^u) − exp(E_σ(u)) of samples u under the
    probability weights σ.

    Equals inf_a E_σ(F(u, a)) with minimizer a* = E_σ(u).  −∞ samples are
    admitted: e^u is taken as exactly 0 there, while the mean uses
    ``u_for_mean`` when supplied (a filled surrogate of the integrable
    data) and the raw samples otherwise.
    """
    weights = np.asarray(weights, dtype=float)
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore"):
        e_u = np.where(np.isneginf(u), 0.0, np.exp(u))
    first = float(np.sum(weights * e_u))
    um = u if u_for_mean is None else np.asarray(u_for_mean, dtype=float)
    mean = float(np.sum(weights * um))
    with np.errstate(over="ignore"):
        second = float(np.exp(mean))
    return first - second


# ---------------------------------------------------------------------------
# boundary data shared by every route
# ---------------------------------------------------------------------------

class _FData:
    """Boundary samples of f with the derived spectral objects."""

    def __init__(self, f):
        if isinstance(f, OuterFunction):
            self.samples = f.boundary_values()
            h = f.log_modulus.samples
            self.u_raw = 2.0 * h
            self.u_filled = 2.0 * f.log_modulus.filled()
            self.outer = True
            self.n = f.n
        else:
            samples = np.asarray(f, dtype=complex)
            if samples.ndim != 1:
                raise ValueError("boundary samples must form a 1-D array")
            self.samples = samples
            self.n = samples.size
            with np.errstate(divide="ignore"):
                self.u_raw = 2.0 * np.log(np.abs(samples))
            self.u_filled = _fill_singular(self.u_raw, 2.0 * math.pi / self.n)
            self.outer = None  # decided lazily from the Jensen test
        self.grid = CircleGrid(self.n)
        self.field = AnalyticField.from_boundary(self.samples)
        self._sq = None
        self._deriv = None

    @property
    def coeffs(self) -> np.ndarray:
        return self.field.coeffs

    @property
    def modulus_sq(self) -> np.ndarray:
        if self._sq is None:
            self._sq = np.abs(self.samples) ** 2
        return self._sq

    def douglas_sum(self) -> float:
        """Σ k|f̂_k|², the mean of the boundary local integrals."""
        k = np.arange(self.coeffs.size)
        return float(np.sum(k * np.abs(self.coeffs) ** 2))

    def tangential_derivative(self) -> np.ndarray:
        """dF/dθ at the nodes (modulus equals |f'| on the boundary)."""
        if self._deriv is None:
            n = self.n
            spec = np.zeros(n, dtype=complex)
            c = self.coeffs
            spec[: c.size] = 1j * np.arange(c.size) * c
            self._deriv = np.fft.ifft(spec) * n
        return self._deriv

    def is_outer(self) -> bool:
        """Jensen test: |f(0)| agrees with exp(mean log|f*|)."""
        if self.outer is None:
            interior = abs(self.coeffs[0])
            geometric = math.exp(float(self.u_filled.mean()) / 2.0)
            denom = max(interior, geometric, 1e-300)
            self.outer = abs(interior - geometric) / denom < 1e-6
        return self.outer


def _as_fdata(f) -> _FData:
    return f if isinstance(f, _FData) else _FData(f)


# ---------------------------------------------------------------------------
# local Dirichlet integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalValues:
    douglas: float
    entropy: float

    def values(self) -> tuple:
        return (self.douglas, self.entropy)


def local_dirichlet_interior(f, w: complex) -> LocalValues:
    """D_w(f) = ∫ |f(ζ)−f(w)|²/|ζ−w|² dm by the difference-quotient route
    and by the entropy route phi_entropy(σ_w, 2log|f*|)/(1−|w|²)."""
    data = _as_fdata(f)
    w = complex(w)
    sigma = LocalMeasure.at_point(w, data.n)
    fw = data.field.at(w)
    douglas = float(
        np.sum(np.abs(data.samples - fw) ** 2
               / np.abs(sigma.grid.points - w) ** 2) / data.n
    )
    ent = phi_entropy(sigma.weights, data.u_raw, data.u_filled)
    entropy = ent / (1.0 - abs(w) ** 2)
    return LocalValues(douglas, entropy)


def _snap_node(data: _FData, zeta: complex):
    theta = float(np.angle(zeta)) % (2.0 * math.pi)
    j = int(round(theta / data.grid.spacing)) % data.n
    if abs(theta - data.grid.thetas[j]) < 1e-9 or \
       abs(theta - 2.0 * math.pi - data.grid.thetas[j]) < 1e-9:
        return j
    return None


def local_dirichlet_boundary(f, zeta: complex,
                             cap: float = QUADRATURE_CAP) -> LocalValues:
    """Boundary local Dirichlet integral at ζ by the difference-quotient
    route and the outer-function (Bregman) route.

    The radial limit f(ζ) is the surrogate f((1−1/N²)ζ).  When ζ sits on a
    grid node, the vanishing-denominator term is replaced by the average of
    its two angular neighbors.
    """
    data = _as_fdata(f)
    zeta = complex(zeta) / abs(complex(zeta))
    n = data.n
    fz = data.field.at((1.0 - 1.0 / n**2) * zeta)
    dist_sq = np.abs(data.grid.points - zeta) ** 2
    j0 = _snap_node(data, zeta)

    quot = np.abs(data.samples - fz) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = quot / dist_sq
    uz = 2.0 * math.log(abs(fz)) if fz != 0 else -math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        breg = bregman_f(data.u_filled, uz) / dist_sq
    if j0 is not None:
        integrand[j0] = 0.5 * (integrand[j0 - 1] + integrand[(j0 + 1) % n])
        breg[j0] = 0.5 * (breg[j0 - 1] + breg[(j0 + 1) % n])

    douglas = float(np.mean(integrand))
    entropy = float(np.mean(breg))
    if douglas > cap:
        douglas = SignaledInfinity(cap)
    if entropy > cap:
        entropy = SignaledInfinity(cap)
    return LocalValues(douglas, entropy)


# ---------------------------------------------------------------------------
# the three global routes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletResult:
    area: float
    local: float
    entropy: float

    def values(self) -> tuple:
        return (self.area, self.local, self.entropy)

    def finite_values(self) -> list:
        return [v for v in self.values()
                if isinstance(v, float) and math.isfinite(v)]

    def rel_spread(self) -> float:
        """Largest pairwise relative gap among the finite routes."""
        vals = self.finite_values()
        if len(vals) < 2:
            return 0.0
        lo, hi = min(vals), max(vals)
        scale = max(abs(hi), abs(lo), 1e-30)
        return (hi - lo) / scale


def _capped(value: float, cap: float = QUADRATURE_CAP):
    if not math.isfinite(value) or value > cap:
        return SignaledInfinity(min(value, cap) if math.isfinite(value) else cap)
    return value


class DirichletEngine:
    """Caches the f-independent pieces (ω on the area grid, ring systems,
    symbols) so a weight can be applied to many functions cheaply."""

    def __init__(self, weight: SuperharmonicWeight, n: int,
                 grid: DiscGrid | None = None):
        self.weight = weight
        self.n = int(n)
        self.grid = grid if grid is not None else default_disc_grid(self.n)
        self.circle = CircleGrid(self.n)
        self._omega_base = None          # G_mu + P_{nu density} on the grid
        self._entropy_rings = None       # (radii, masses) for radial mu

    # -- cached geometry ----------------------------------------------------
    def _omega_grid(self) -> np.ndarray:
        if self._omega_base is None:
            mu, nu = self.weight.mu, self.weight.nu
            base = SuperharmonicWeight(mu, BoundaryMeasure(
                grid=nu.grid, density=nu.density) if nu.density is not None
                else BoundaryMeasure.zero())
            self._omega_base = PotentialEvaluator(base).omega_on_disc_grid(self.grid)
        return self._omega_base

    def _radial_rings(self):
        """(radii, masses) used for the radial-μ entropy quadrature —
        extended well below the area grid, with exact block masses for
        profile measures."""
        if self._entropy_rings is not None:
            return self._entropy_rings
        mu = self.weight.mu
        if mu.profile is not None:
            prof = mu.profile
            radii, masses = [], []
            npb = max(4, self.grid.nodes_per_block)
            for k in range(44):
                v_hi, v_lo = 2.0 ** (-k), 2.0 ** (-k - 1)
                edges = np.linspace(v_lo, v_hi, npb + 1)
                for a, b in zip(edges[:-1], edges[1:]):
                    m = prof.mass_between(a, b)
                    # place each block's ring at its mass centroid in v, so
                    # locally linear ring means integrate exactly
                    m1 = prof.partial_v_moment(1.0, b) \
                        - prof.partial_v_moment(1.0, a)
                    radii.append(math.sqrt(1.0 - m1 / m))
                    masses.append(m)
            order = np.argsort(radii)
            self._entropy_rings = (np.asarray(radii)[order],
                                   np.asarray(masses)[order])
        else:
            self._entropy_rings = mu.ring_masses()
        return self._entropy_rings

    def _mu_symbol(self, kmax: int) -> np.ndarray:
        return radial_mu_symbol(self.weight.mu, kmax)

    # -- route 1: area -------------------------------------------------------
    def area_route(self, data: _FData, cap: float = QUADRATURE_CAP):
        deriv = data.field.derivative()
        omega = self._omega_grid()
        nu = self.weight.nu
        total = 0.0
        n_th = self.grid.n_theta
        atom_th = nu.atom_theta if nu.atom_mass.size else None
        if atom_th is not None:
            kk = np.arange(n_th // 2 + 1)
            phase = np.exp(1j * np.outer(kk, atom_th))
        for i, rho in enumerate(self.grid.radii):
            d_ring = deriv.on_ring(rho, n_th)
            g = np.abs(d_ring) ** 2
            ring_val = float(np.mean(g * omega[i]))
            if atom_th is not None:
                # exact angular pairing of the band-limited |f'|^2 against
                # the Poisson spike: trapezoid aliases it at deep rings.
                # The pairing equals the harmonic extension of g evaluated
                # at rho*e^{i*theta_atom}.
                spec = np.fft.rfft(g) / n_th
                spec[1:-1] *= 2.0
                ext = np.real((spec * rho**kk) @ phase)
                ring_val += float(np.sum(nu.atom_mass * ext))
            total += ring_val * self.grid.radial_weights[i]
            if total > cap:
                return SignaledInfinity(total if math.isfinite(total) else cap)
        return _capped(total, cap)

    # -- route 2: local ------------------------------------------------------
    def local_route(self, data: _FData, cap: float = QUADRATURE_CAP):
        mu, nu = self.weight.mu, self.weight.nu
        total = 0.0
        coeffs = data.coeffs

        # nu part
        if nu.density is not None:
            if nu.is_uniform_density:
                total += float(nu.density.flat[0]) * data.douglas_sum()
            else:
                total += _nu_density_quadrature(data, nu.density)
        if nu.atom_mass.size:
            for th, m in zip(nu.atom_theta, nu.atom_mass):
                val = local_dirichlet_boundary(data, np.exp(1j * th), cap).douglas
                if isinstance(val, SignaledInfinity):
                    return SignaledInfinity(total + float(val))
                total += m * val

        # mu part
        if mu.atom_mass.size:
            sq_field = HarmonicField(data.modulus_sq)
            for w, m in zip(mu.atom_pos, mu.atom_mass):
                mean_sq = float(sq_field.at(w))
                fw = data.field.at(w)
                total += m * (mean_sq - abs(fw) ** 2)
        if mu.has_density:
            if mu.is_radial_density:
                s = self._mu_symbol(coeffs.size - 1)
                total += float(np.sum(np.abs(coeffs) ** 2 * s))
            else:
                total += _mu_density_variance(data, mu)
        return _capped(total, cap)

    # -- route 3: entropy ----------------------------------------------------
    def entropy_route(self, data: _FData, cap: float = QUADRATURE_CAP):
        if not data.is_outer():
            return math.nan
        mu, nu = self.weight.mu, self.weight.nu
        total = 0.0

        # nu part: Bregman double integral
        if nu.density is not None:
            total += _bregman_double(data, nu.density)
        if nu.atom_mass.size:
            for th, m in zip(nu.atom_theta, nu.atom_mass):
                val = local_dirichlet_boundary(data, np.exp(1j * th), cap).entropy
                if isinstance(val, SignaledInfinity):
                    return SignaledInfinity(total + float(val))
                total += m * val

        # mu part: E_sigma(e^u) - exp(E_sigma(u)) integrated in w
        if mu.atom_mass.size:
            sq_field = HarmonicField(data.modulus_sq)
            u_field = HarmonicField(data.u_filled)
            for w, m in zip(mu.atom_pos, mu.atom_mass):
                mean_sq = float(sq_field.at(w))
                mean_u = float(u_field.at(w))
                with np.errstate(over="ignore"):
                    total += m * (mean_sq - float(np.exp(mean_u)))
        if mu.has_density:
            if mu.is_radial_density:
                total += self._entropy_radial(data)
            else:
                total += _mu_density_entropy(data, mu)
        return _capped(total, cap)

    def _entropy_radial(self, data: _FData) -> float:
        radii, masses = self._radial_rings()
        if radii.size == 0:
            return 0.0
        u_field = HarmonicField(data.u_filled)
        norm_sq = float(np.mean(data.modulus_sq))
        total = 0.0
        for rho, m in zip(radii, masses):
            mean_exp = float(np.mean(np.exp(u_field.on_ring(rho))))
            total += m * (norm_sq - mean_exp)
        if self.weight.mu.profile is not None:
            # analytic tail below the deepest ring: ring mean of the
            # variance behaves like v * Σ k|f̂_k|^2 there.
            v_floor = 2.0 ** -45
            total += self.weight.mu.profile.partial_v_moment(1.0, v_floor) \
                * data.douglas_sum()
        return total

    # -- combined ------------------------------------------------------------
    def dirichlet(self, f, cap: float = QUADRATURE_CAP) -> DirichletResult:
        data = _as_fdata(f)
        if data.n != self.n:
            raise ValueError(f"engine built for n = {self.n}, got {data.n}")
        return DirichletResult(
            area=self.area_route(data, cap),
            local=self.local_route(data, cap),
            entropy=self.entropy_route(data, cap),
        )


def dirichlet(f, weight: SuperharmonicWeight,
              cap: float = QUADRATURE_CAP) -> DirichletResult:
    """The Dirichlet integral of f under the weight, by all three routes.

    f may be an OuterFunction or an array of boundary samples on a
    power-of-two circle grid; the entropy route reports NaN when the data
    fails the Jensen (outer) test.
    """
    data = _as_fdata(f)
    return DirichletEngine(weight, data.n).dirichlet(data, cap)


# ---------------------------------------------------------------------------
# quadrature helpers for the density cases
# ---------------------------------------------------------------------------

def _nu_density_quadrature(data: _FData, density: np.ndarray,
                           chunk: int = 512) -> float:
    """∫ D_ζ(f) dν for a boundary density: literal double quadrature of the
    difference quotients, diagonal filled with |f'|²."""
    F = data.samples
    pts = data.grid.points
    n = data.n
    dens = np.broadcast_to(np.asarray(density, dtype=float), (n,))
    diag = np.abs(data.tangential_derivative()) ** 2
    total = 0.0
    for lo in range(0, n, chunk):
        sel = slice(lo, min(lo + chunk, n))
        diff = np.abs(F[None, :] - F[sel, None]) ** 2
        dist = np.abs(pts[None, :] - pts[sel, None]) ** 2
        np.fill_diagonal(dist[:, sel], 1.0)
        quot = diff / dist
        idx = np.arange(lo, min(lo + chunk, n))
        quot[np.arange(idx.size), idx] = diag[sel]
        total += float(np.sum(dens[sel, None] * quot))
    return total / n**2


def _require_matching_angles(mu: DiscMeasure, n: int) -> None:
    if mu.grid.n_theta != n:
        raise ValueError(
            f"disc-density angular grid ({mu.grid.n_theta}) must match the "
            f"boundary grid ({n}) for the spectral ring pairing"
        )


def _mu_density_variance(data: _FData, mu: DiscMeasure) -> float:
    """μ part of the local route for a non-radial density, ring by ring via
    spectral extensions of |f|² and f."""
    _require_matching_angles(mu, data.n)
    grid = mu.grid
    total = 0.0
    dens = mu.density
    for i, rho in enumerate(grid.radii):
        mean_sq = np.real(harmonic_ring(data.modulus_sq, rho))
        f_ring = data.field.on_ring(rho, grid.n_theta)
        var = mean_sq - np.abs(f_ring) ** 2
        total += float(np.sum(dens[i] * var) / grid.n_theta
                       * grid.radial_weights[i])
    return total


def _mu_density_entropy(data: _FData, mu: DiscMeasure) -> float:
    _require_matching_angles(mu, data.n)
    grid = mu.grid
    u_field = HarmonicField(data.u_filled)
    total = 0.0
    for i, rho in enumerate(grid.radii):
        mean_sq = np.real(harmonic_ring(data.modulus_sq, rho))
        mean_exp = np.exp(u_field.on_ring(rho))
        term = mean_sq - mean_exp
        total += float(np.sum(mu.density[i] * term) / grid.n_theta
                       * grid.radial_weights[i])
    return total


def _bregman_double(data: _FData, density: np.ndarray,
                    chunk: int = 512) -> float:
    """∬ F(u(λ), u(ζ)) / |ζ−λ|² dν(ζ) dm(λ) with the diagonal filled by the
    limit 2|f(ζ)|² h'(θ)²."""
    n = data.n
    u_fill = data.u_filled
    u_raw = data.u_raw
    pts = data.grid.points
    dens = np.broadcast_to(np.asarray(density, dtype=float), (n,))
    # h' of the filled log modulus, spectral
    spec = np.fft.rfft(0.5 * u_fill)
    spec = spec * 1j * np.arange(spec.size)
    hprime = np.fft.irfft(spec, n)
    with np.errstate(over="ignore"):
        diag = 2.0 * np.where(np.isneginf(u_raw), 0.0, np.exp(u_raw)) * hprime**2
    total = 0.0
    for lo in range(0, n, chunk):
        sel = slice(lo, min(lo + chunk, n))
        vals = bregman_f(u_fill[None, :], u_fill[sel, None])
        dist = np.abs(pts[None, :] - pts[sel, None]) ** 2
        np.fill_diagonal(dist[:, sel], 1.0)
        quot = vals / dist
        idx = np.arange(lo, min(lo + chunk, n))
        quot[np.arange(idx.size), idx] = diag[sel]
        total += float(np.sum(dens[sel, None] * quot))
    return total / n**2


# ---------------------------------------------------------------------------
# Douglas-type double form
# ---------------------------------------------------------------------------

def _circulant_pair_energy(F: np.ndarray, lag_kernel: np.ndarray) -> float:
    """(1/n²) Σ_{j,k} |F_j − F_k|² a_{j−k} with a_0 = 0, via FFT."""
    n = F.size
    a = lag_kernel.copy()
    a[0] = 0.0
    sum_a = float(a.sum())
    mean_sq = float(np.mean(np.abs(F) ** 2))
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(F))
    cross = float(np.real(np.vdot(F, conv)))
    return (2.0 * sum_a * mean_sq - 2.0 * cross / n) / n


_A_LAG_CACHE: dict = {}


def _radial_a_lags(mu: DiscMeasure, n: int) -> np.ndarray:
    """Angular lag kernel a(Δ) = ∫ (1−r⁴)/|1−r²e^{iΔ}|² dμ of the radial
    part (each ring contributes its ring-mean of P_z(ζ)P_z(λ))."""
    lags = 2.0 * np.pi * np.arange(n) / n
    out = np.zeros(n)
    if mu.profile is not None:
        prof = mu.profile
        key = (type(prof).__name__, getattr(prof, "alpha", None), n)
        cached = _A_LAG_CACHE.get(key)
        if cached is not None:
            return cached.copy()
        cos = np.cos(lags[1:])
        floor = 2.0 ** -40
        from .measures import dyadic_gauss_v

        def fn(v):
            r2 = 1.0 - v
            num = 1.0 - r2**2
            den = 1.0 + r2**2 - 2.0 * r2 * cos[:, None]
            return num * prof.dens_v(v)[None, :] / den

        body = dyadic_gauss_v(fn, floor)
        tail = 2.0 * prof.partial_v_moment(1.0, floor) \
            / np.abs(1.0 - np.exp(1j * lags[1:])) ** 2
        out[1:] = body + tail
        _A_LAG_CACHE[key] = out.copy()
    else:
        sig, masses = mu.ring_masses()
        if sig.size:
            r2 = sig**2
            num = masses * (1.0 - r2**2)
            den = 1.0 + r2[None, :] ** 2 \
                - 2.0 * r2[None, :] * np.cos(lags[1:, None])
            out[1:] = np.sum(num[None, :] / den, axis=1)
    return out


def douglas_type_form(f, weight: SuperharmonicWeight,
                      cap: float = QUADRATURE_CAP):
    """∬ |f*(ζ)−f*(λ)|² (A_μ(ζ,λ) dm(ζ) + dν(ζ)/|ζ−λ|²) dm(λ), with the
    μ part multiplied by the build's calibration constant."""
    data = _as_fdata(f)
    mu, nu = weight.mu, weight.nu
    F = data.samples
    n = data.n
    pts = data.grid.points
    total_mu = 0.0
    total_nu = 0.0

    # mu: atoms are separable (A = P_w(ζ)P_w(λ)), giving 2·Var_{σ_w}(f)
    if mu.atom_mass.size:
        for w, m in zip(mu.atom_pos, mu.atom_mass):
            sigma = (1.0 - abs(w) ** 2) / np.abs(pts - w) ** 2 / n
            mean_sq = float(np.sum(sigma * np.abs(F) ** 2))
            mean_f = complex(np.sum(sigma * F))
            total_mu += m * 2.0 * (mean_sq - abs(mean_f) ** 2)
    if mu.has_density:
        if mu.is_radial_density:
            total_mu += _circulant_pair_energy(F, _radial_a_lags(mu, n))
        else:
            total_mu += _nonradial_pair_energy(data, mu)

    # nu: dν(ζ)/|ζ−λ|² with diagonal filled by |f'|²
    if nu.density is not None:
        if nu.is_uniform_density:
            lags = 2.0 * np.pi * np.arange(n) / n
            b = np.zeros(n)
            b[1:] = 1.0 / np.abs(1.0 - np.exp(1j * lags[1:])) ** 2
            c = float(nu.density.flat[0])
            diag = float(np.mean(np.abs(data.tangential_derivative()) ** 2))
            total_nu += c * (_circulant_pair_energy(F, b) + diag / n)
        else:
            total_nu += _nu_density_quadrature(data, nu.density)
    if nu.atom_mass.size:
        for th, m in zip(nu.atom_theta, nu.atom_mass):
            val = local_dirichlet_boundary(data, np.exp(1j * th), cap).douglas
            if isinstance(val, SignaledInfinity):
                return SignaledInfinity(float(val))
            total_nu += m * val

    return _capped(DOUGLAS_CALIBRATION * total_mu + total_nu, cap)


def _nonradial_pair_energy(data: _FData, mu: DiscMeasure,
                           ) -> float:
    """Σ_nodes m · 2·Var_{σ_node}(f) via per-ring spectral extensions."""
    _require_matching_angles(mu, data.n)
    grid = mu.grid
    total = 0.0
    for i, rho in enumerate(grid.radii):
        mean_sq = np.real(harmonic_ring(data.modulus_sq, rho))
        mean_f = harmonic_ring(data.samples, rho)
        var = mean_sq - np.abs(mean_f) ** 2
        total += float(np.sum(mu.density[i] * 2.0 * var) / grid.n_theta
                       * grid.radial_weights[i])
    return total


# ---------------------------------------------------------------------------
# Carleson-type bound and the NE product bound
# ---------------------------------------------------------------------------

def carleson_type_bound(f, alpha: float, cap: float = QUADRATURE_CAP):
    """∬ (|f(ζ)|²−|f(λ)|²)·log|f(ζ)/f(λ)| / |ζ−λ|^{2−α} dm dm.

    Symmetric nonnegative integrand; evaluated by the circulant identity
    with the diagonal excluded (the integrand vanishes there for α > 0).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    data = _as_fdata(f)
    n = data.n
    with np.errstate(over="ignore"):
        M = np.where(np.isneginf(data.u_raw), 0.0, np.exp(data.u_raw))
    u = data.u_filled / 2.0  # log|f|; the integrand uses log ratio = u_j - u_k
    lags = 2.0 * np.pi * np.arange(n) / n
    b = np.zeros(n)
    b[1:] = 1.0 / np.abs(1.0 - np.exp(1j * lags[1:])) ** (2.0 - alpha)
    sum_b = float(b.sum())
    conv_M = np.real(np.fft.ifft(np.fft.fft(b) * np.fft.fft(M)))
    cross = float(np.sum(u * conv_M))
    direct = float(np.sum(M * u))
    value = 2.0 * (sum_b * direct - cross) / n**2
    return _capped(value, cap)


def ne_bound(phi, zeta: complex, mu: DiscMeasure, levels: int = 40) -> float:
    """Product bound ‖φ'·F_{μ,ζ}‖_∞ · ‖φ‖_∞ with the sup norms taken on a
    dyadic grid of (0, π] (the φ sup saturates at the grid minimum)."""
    from .potentials import f_mu_profile

    y = np.pi * 2.0 ** (-np.arange(levels + 1, dtype=float))
    if mu.is_empty:
        return 0.0
    fvals = np.asarray(f_mu_profile(mu, y, zeta), dtype=float)
    slope = np.abs(np.asarray(phi.derivative(y), dtype=float))
    sup1 = float(np.max(slope * fvals))
    sup2 = float(np.max(np.asarray(phi.value(y), dtype=float)))
    return sup1 * sup2
