"""Outer functions from boundary log-modulus data.

An outer function is represented by samples of h = log|f*| on a uniform
power-of-two circle grid.  Construction fixes the unimodular constant to 1,
so f(0) = exp(mean h) is real and positive.

Sampled zeros (h = −∞) are admitted at up to √N nodes.  Quadrature and
spectral work replace each such sample by the cell average of a local
logarithmic model c + κ·log|t| fitted to the nearest finite neighbors; the
same fill handles the +∞ samples produced by distance profiles that blow up
on their zero set.

Near-boundary evaluation: the plain trapezoid Herglotz sum degrades once
1−|z| drops below the angular resolution, so the evaluator switches to the
truncated analytic series of the band-limited interpolant of h — the exact
limit of band-limited upsampling, with no aliasing at any upsample factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._spectral import _polyval
from ._util import wrap_angle
from .measures import CircleGrid, ConfigError

__all__ = [
    "BoundaryLogModulus",
    "OuterFunction",
    "DistanceProfile",
    "BoundarySet",
    "ClassRReport",
    "outer_from_log_modulus",
    "cutoff_min",
    "cutoff_max",
    "wedge_square",
    "distance_outer",
    "class_R_check",
    "arc_localize",
]

# Two-sided doubling bounds demanded of admissible profiles on the dyadic
# test grid (both phi(2x)/phi(x) and phi'(2x)/phi'(x)).
R_DOUBLING_LO = 1.0 / 16.0
R_DOUBLING_HI = 16.0

_FILL_SEARCH = 64  # how far (in cells) to look for finite neighbors


def _fill_singular(samples: np.ndarray, spacing: float) -> np.ndarray:
    """Replace ±∞ samples using a local model c + κ·log|2 sin(t/2)| fitted
    to the nearest finite neighbors on each side.

    The replacement value is c − κ·log n.  With that choice the uniform
    n-point quadrature of the filled data is *exact* for the model itself,
    by the lattice identity Σ_{j=1}^{n−1} log(2 sin(πj/n)) = log n — the
    same compensation is the right one against any smooth test kernel, so
    Herglotz evaluation inherits the accuracy.
    """
    h = np.asarray(samples, dtype=float)
    bad = ~np.isfinite(h)
    if not bad.any():
        return h.copy()
    n = h.size

    def basis(cells: int) -> float:
        return math.log(2.0 * math.sin(cells * math.pi / n))

    out = h.copy()
    for j in np.nonzero(bad)[0]:
        estimates = []
        for direction in (-1, 1):
            found = []
            for step in range(1, _FILL_SEARCH + 1):
                k = (j + direction * step) % n
                if np.isfinite(h[k]):
                    found.append((step, h[k]))
                    if len(found) == 2:
                        break
            if len(found) == 2:
                (d1, h1), (d2, h2) = found
                kappa = (h2 - h1) / (basis(d2) - basis(d1))
                c = h1 - kappa * basis(d1)
                estimates.append(c - kappa * math.log(n))
            elif len(found) == 1:
                estimates.append(found[0][1])
        if not estimates:
            raise ConfigError("log-modulus data has no finite samples nearby")
        out[j] = float(np.mean(estimates))
    return out


@dataclass(frozen=True)
class BoundaryLogModulus:
    """Samples of h = log|f*| on a uniform circle grid of power-of-two size.

    −∞ samples (zeros of f*) are allowed at up to √N nodes; +∞ samples are
    allowed under the same budget (log-integrable singularities of distance
    profiles).  Anything beyond that budget is rejected as non-integrable.
    """

    samples: np.ndarray
    grid: CircleGrid = field(default=None)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ConfigError("log-modulus samples must be a 1-D array")
        n = samples.size
        grid = self.grid if self.grid is not None else CircleGrid(n)
        if grid.n != n:
            raise ConfigError(f"grid size {grid.n} does not match {n} samples")
        object.__setattr__(self, "grid", grid)
        if np.isnan(samples).any():
            raise ConfigError("log-modulus samples contain NaN")
        n_sing = int(np.count_nonzero(~np.isfinite(samples)))
        if n_sing > math.isqrt(n):
            raise ConfigError(
                f"{n_sing} singular samples exceed the √N = {math.isqrt(n)} budget; "
                "log-modulus data rejected as non-integrable"
            )
        finite = samples[np.isfinite(samples)]
        if finite.size == 0 or not math.isfinite(float(np.abs(finite).mean())):
            raise ConfigError("log-modulus data is not integrable")

    @classmethod
    def from_function(cls, fn, n: int) -> "BoundaryLogModulus":
        grid = CircleGrid(n)
        return cls(np.asarray(fn(grid.thetas), dtype=float), grid)

    @classmethod
    def constant(cls, value: float, n: int) -> "BoundaryLogModulus":
        return cls(np.full(n, float(value)), CircleGrid(n))

    @classmethod
    def from_csv(cls, path) -> "BoundaryLogModulus":
        """Load (angle, log-modulus) rows; angles must be the uniform grid."""
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise ConfigError(f"bad log-modulus row: {line!r}")
                rows.append((float(parts[0]), float(parts[1])))
        if not rows:
            raise ConfigError("empty log-modulus file")
        rows.sort(key=lambda ab: ab[0] % (2.0 * math.pi))
        n = len(rows)
        grid = CircleGrid(n)
        ang = np.array([a % (2.0 * math.pi) for a, _ in rows])
        if np.max(np.abs(ang - grid.thetas)) > 1e-9:
            raise ConfigError("angles do not form the uniform power-of-two grid")
        return cls(np.array([b for _, b in rows]), grid)

    @property
    def n(self) -> int:
        return self.samples.size

    def filled(self) -> np.ndarray:
        """Samples with every ±∞ replaced by its local-model fill."""
        return _fill_singular(self.samples, self.grid.spacing)

    def mean(self) -> float:
        return float(self.filled().mean())

    def is_integrable(self) -> bool:
        return True  # enforced at construction


class OuterFunction:
    """Outer function f = exp(∫ (ζ+z)/(ζ−z) h(ζ) dm(ζ)), unimodular constant 1.

    Immutable after construction; evaluation is thread-safe and vectorized
    over arrays of points.
    """

    def __init__(self, log_modulus: BoundaryLogModulus):
        if not isinstance(log_modulus, BoundaryLogModulus):
            log_modulus = BoundaryLogModulus(np.asarray(log_modulus, dtype=float))
        self._blm = log_modulus
        self._filled = log_modulus.filled()
        n = log_modulus.n
        spec = np.fft.rfft(self._filled)
        coeffs = np.empty(n // 2 + 1, dtype=complex)
        coeffs[0] = spec[0].real / n
        coeffs[1:-1] = 2.0 * spec[1:-1] / n
        coeffs[-1] = spec[-1].real / n
        self._log_coeffs = coeffs

    # -- structure ---------------------------------------------------------
    @property
    def n(self) -> int:
        return self._blm.n

    @property
    def grid(self) -> CircleGrid:
        return self._blm.grid

    @property
    def log_modulus(self) -> BoundaryLogModulus:
        return self._blm

    @property
    def samples(self) -> np.ndarray:
        return self._blm.samples

    @property
    def log_coefficients(self) -> np.ndarray:
        """Coefficients c_k of log f = Σ c_k z^k (c_0 real)."""
        return self._log_coeffs

    # -- evaluation --------------------------------------------------------
    def log_at(self, z):
        """log f(z), principal analytic branch determined by Im log f(0)=0."""
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z_arr.shape, dtype=complex)
        n = self.n
        shallow = np.abs(z_arr) <= 1.0 - 8.0 / n
        if np.any(shallow):
            pts = self.grid.points[None, :]
            idx = np.nonzero(shallow.reshape(-1))[0]
            flat = out.reshape(-1)
            zflat = z_arr.reshape(-1)
            for lo in range(0, idx.size, 2048):
                sel = idx[lo: lo + 2048]
                zs = zflat[sel][:, None]
                flat[sel] = ((pts + zs) / (pts - zs)) @ self._filled / n
        deep = ~shallow
        if np.any(deep):
            out[deep] = _polyval(self._log_coeffs, z_arr[deep])
        if np.isscalar(z) or getattr(z, "ndim", 0) == 0:
            return complex(out.reshape(-1)[0])
        return out

    def at(self, z):
        """f(z) for |z| < 1 (scalar or array)."""
        val = np.exp(self.log_at(z))
        if np.isscalar(z) or getattr(z, "ndim", 0) == 0:
            return complex(val)
        return val

    def f0(self) -> float:
        """f(0) = exp(mean h), exactly real and positive."""
        return float(math.exp(self._log_coeffs[0].real))

    def on_ring(self, rho: float) -> np.ndarray:
        """f(ρ·ζ_j) at every grid angle, via the padded analytic spectrum."""
        n = self.n
        k = np.arange(self._log_coeffs.size)
        spec = np.zeros(n, dtype=complex)
        spec[: k.size] = self._log_coeffs * rho ** k
        return np.exp(np.fft.ifft(spec) * n)

    def boundary_values(self) -> np.ndarray:
        """Nontangential values f*(ζ_j): modulus exp(h_j) exactly (0 at −∞
        nodes), phase from the conjugate function of the filled data."""
        phase = np.imag(np.log(self.on_ring(1.0)))
        with np.errstate(over="ignore"):
            modulus = np.exp(self.samples)
        return modulus * np.exp(1j * phase)

    def taylor_coefficients(self, m: int) -> np.ndarray:
        """First m Taylor coefficients of f, from the exp-series recurrence
        f' = (log f)'·f (exact given the log coefficients)."""
        c = self._log_coeffs
        out = np.zeros(m, dtype=complex)
        out[0] = math.exp(c[0].real)
        kmax = c.size - 1
        for k in range(1, m):
            jtop = min(k, kmax)
            j = np.arange(1, jtop + 1)
            out[k] = np.sum(j * c[j] * out[k - j]) / k
        return out

    # -- arithmetic --------------------------------------------------------
    def __mul__(self, other: "OuterFunction") -> "OuterFunction":
        if self.n != other.n:
            raise ConfigError("outer functions live on different grids")
        return OuterFunction(
            BoundaryLogModulus(self.samples + other.samples, self.grid)
        )


def outer_from_log_modulus(h, z=None):
    """Build the outer function with boundary log-modulus h; if z is given,
    return its value there instead of the function object."""
    f = OuterFunction(h if isinstance(h, BoundaryLogModulus)
                      else BoundaryLogModulus(np.asarray(h, dtype=float)))
    return f if z is None else f.at(z)


def _as_blm(f) -> BoundaryLogModulus:
    if isinstance(f, OuterFunction):
        return f.log_modulus
    if isinstance(f, BoundaryLogModulus):
        return f
    return BoundaryLogModulus(np.asarray(f, dtype=float))


def cutoff_min(f, g) -> OuterFunction:
    """f ∧ g: outer function with log modulus min(h_f, h_g) node-wise."""
    bf, bg = _as_blm(f), _as_blm(g)
    if bf.n != bg.n:
        raise ConfigError("cutoff operands live on different grids")
    return OuterFunction(BoundaryLogModulus(np.minimum(bf.samples, bg.samples),
                                            bf.grid))


def cutoff_max(f, g) -> OuterFunction:
    """f ∨ g: outer function with log modulus max(h_f, h_g) node-wise."""
    bf, bg = _as_blm(f), _as_blm(g)
    if bf.n != bg.n:
        raise ConfigError("cutoff operands live on different grids")
    return OuterFunction(BoundaryLogModulus(np.maximum(bf.samples, bg.samples),
                                            bf.grid))


def wedge_square(f) -> OuterFunction:
    """f ∧ f²: log modulus transformed node-wise by x ↦ min(x, 2x)."""
    bf = _as_blm(f)
    h = bf.samples
    return OuterFunction(BoundaryLogModulus(np.minimum(h, 2.0 * h), bf.grid))


# ---------------------------------------------------------------------------
# distance profiles and boundary sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceProfile:
    """Named profile family φ on (0, π].

    family:
      ``power``    φ(t) = t^{−β}            (β = ``power``; β ≤ 0 increasing)
      ``log``      φ(t) = log(eπ/t)^p       (p = ``power``)
      ``exp-log``  φ(t) = exp(s·log(eπ/t)^p)  (s = ``sign`` ∈ {−1, +1})

    ``sign`` = −1 exp-log profiles vanish at 0⁺ (the candidate functions that
    vanish on their boundary set); all other members blow up or stay bounded.
    """

    family: str
    power: float = 1.0
    sign: float = 1.0

    def __post_init__(self):
        if self.family not in ("power", "log", "exp-log"):
            raise ConfigError(f"unknown profile family {self.family!r}")
        if self.family in ("log", "exp-log") and self.power < 0:
            raise ConfigError("log-type profiles need a nonnegative exponent")
        if self.sign not in (-1.0, 1.0):
            raise ConfigError("sign must be -1 or +1")

    def value(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            if self.family == "power":
                return t ** (-self.power)
            L = np.log(np.e * np.pi / t)
            if self.family == "log":
                return L ** self.power
            return np.exp(self.sign * L ** self.power)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            if self.family == "power":
                return -self.power * t ** (-self.power - 1.0)
            L = np.log(np.e * np.pi / t)
            if self.family == "log":
                return -self.power * L ** (self.power - 1.0) / t
            return self.value(t) * self.sign * (-self.power) \
                * L ** (self.power - 1.0) / t

    @property
    def vanishes_at_zero(self) -> bool:
        if self.family == "power":
            return self.power < 0
        return self.family == "exp-log" and self.sign < 0 and self.power > 0

    @property
    def blows_up_at_zero(self) -> bool:
        if self.family == "power":
            return self.power > 0
        if self.family == "log":
            return self.power > 0
        return self.sign > 0 and self.power > 0

    def log_value(self, t):
        """log φ(t), computed stably (exp-log profiles never overflow)."""
        t = np.asarray(t, dtype=float)
        if self.power == 0.0 and self.family in ("power", "log"):
            return np.zeros(t.shape)
        with np.errstate(divide="ignore"):
            if self.family == "power":
                return -self.power * np.log(t)
            L = np.log(np.e * np.pi / t)
            if self.family == "log":
                return self.power * np.log(L)
            return self.sign * L ** self.power


@dataclass(frozen=True)
class ClassRReport:
    accepted: bool
    violated: tuple
    worst_value_ratio: tuple
    worst_slope_ratio: tuple

    def __bool__(self) -> bool:
        return self.accepted


def class_R_check(phi: DistanceProfile, levels: int = 40) -> ClassRReport:
    """Check admissibility of φ: decreasing, x²|φ'| increasing, and two-sided
    doubling bounds for φ and φ' on a dyadic grid of (0, π]."""
    x = np.pi * 2.0 ** (-np.arange(levels + 1, dtype=float))
    v = np.asarray(phi.value(x), dtype=float)
    d = np.asarray(phi.derivative(x), dtype=float)
    g = x**2 * np.abs(d)
    violated = []
    # x decreases along the grid, so "decreasing in t" means v nondecreasing
    # along the grid index.
    slack = 1e-12
    if np.any(v[1:] < v[:-1] * (1.0 - slack) - slack):
        violated.append("decreasing")
    if np.any(g[1:] > g[:-1] * (1.0 + slack) + slack):
        violated.append("x^2|phi'| increasing")
    # doubling: compare x_j = pi 2^{-j} with 2 x_j = x_{j-1}
    with np.errstate(divide="ignore", invalid="ignore"):
        value_ratio = v[:-1] / v[1:]
        slope_ratio = np.where(d[1:] != 0.0, d[:-1] / np.where(d[1:] != 0, d[1:], 1.0),
                               1.0)
    vr = (float(np.min(value_ratio)), float(np.max(value_ratio)))
    sr = (float(np.min(slope_ratio)), float(np.max(slope_ratio)))
    if vr[0] < R_DOUBLING_LO or vr[1] > R_DOUBLING_HI:
        violated.append("value doubling")
    if sr[0] < R_DOUBLING_LO or sr[1] > R_DOUBLING_HI:
        violated.append("slope doubling")
    return ClassRReport(not violated, tuple(violated), vr, sr)


class BoundarySet:
    """Closed boundary set: finite union of closed arcs plus a finite point
    set (angles in radians)."""

    def __init__(self, arcs=(), points=()):
        arcs = tuple((float(a), float(b)) for a, b in arcs)
        for a, b in arcs:
            if not b > a:
                raise ConfigError(f"degenerate arc ({a}, {b})")
            if b - a > 2.0 * math.pi + 1e-12:
                raise ConfigError("arc longer than the full circle")
        self.arcs = arcs
        self.points = tuple(float(p) for p in points)

    @classmethod
    def empty(cls) -> "BoundarySet":
        return cls()

    @classmethod
    def from_points(cls, thetas) -> "BoundarySet":
        return cls(points=tuple(thetas))

    @classmethod
    def from_arc(cls, a: float, b: float) -> "BoundarySet":
        return cls(arcs=((a, b),))

    @classmethod
    def full_circle(cls) -> "BoundarySet":
        return cls(arcs=((0.0, 2.0 * math.pi),))

    @property
    def is_empty(self) -> bool:
        return not self.arcs and not self.points

    @property
    def has_arcs(self) -> bool:
        return bool(self.arcs)

    def _in_arc(self, theta):
        theta = np.asarray(theta, dtype=float)
        mask = np.zeros(theta.shape, dtype=bool)
        for a, b in self.arcs:
            rel = (theta - a) % (2.0 * math.pi)
            mask |= rel <= (b - a) + 1e-15
        return mask

    def angular_distance(self, theta):
        """Angular distance from e^{iθ} to the set (π for the empty set)."""
        theta = np.asarray(theta, dtype=float)
        dist = np.full(theta.shape, math.pi)
        for p in self.points:
            dist = np.minimum(dist, np.abs(wrap_angle(theta - p)))
        for a, b in self.arcs:
            da = np.abs(wrap_angle(theta - a))
            db = np.abs(wrap_angle(theta - b))
            dist = np.minimum(dist, np.minimum(da, db))
        if self.arcs:
            dist = np.where(self._in_arc(theta), 0.0, dist)
        return dist

    def chordal_distance(self, theta):
        """Chordal distance |e^{iθ} − E| (2 sin of half the angular one)."""
        return 2.0 * np.sin(np.minimum(self.angular_distance(theta), math.pi) / 2.0)

    def neighborhood_measure(self, t: float, metric: str = "chordal") -> float:
        """Normalized Lebesgue measure of E_t = {ζ : dist(ζ, E) < t}."""
        if t <= 0.0 or self.is_empty:
            return 0.0
        if metric == "chordal":
            half = 2.0 * math.asin(min(t, 2.0) / 2.0)
        elif metric == "angular":
            half = t
        else:
            raise ConfigError(f"unknown metric {metric!r}")
        if half >= math.pi:
            return 1.0
        intervals = []
        for p in self.points:
            intervals.append((p - half, p + half))
        for a, b in self.arcs:
            intervals.append((a - half, b + half))
        return _circle_union_measure(intervals)

    def node_mask(self, grid: CircleGrid, t: float,
                  metric: str = "chordal") -> np.ndarray:
        """Boolean mask of grid nodes lying in E_t."""
        if metric == "chordal":
            return self.chordal_distance(grid.thetas) < t
        return self.angular_distance(grid.thetas) < t


def _circle_union_measure(intervals) -> float:
    """Normalized measure of a union of intervals on the circle."""
    tau = 2.0 * math.pi
    clipped = []
    for a, b in intervals:
        length = b - a
        if length >= tau:
            return 1.0
        a %= tau
        b = a + length
        if b <= tau:
            clipped.append((a, b))
        else:
            clipped.append((a, tau))
            clipped.append((0.0, b - tau))
    clipped.sort()
    total = 0.0
    cur_a, cur_b = clipped[0]
    for a, b in clipped[1:]:
        if a > cur_b:
            total += cur_b - cur_a
            cur_a, cur_b = a, b
        else:
            cur_b = max(cur_b, b)
    total += cur_b - cur_a
    return min(1.0, total / tau)


def distance_outer(phi: DistanceProfile, boundary_set: BoundarySet,
                   n: int = 4096, z=None):
    """Outer function φ̃_E with boundary log modulus log φ(chordal dist to E).

    Returns the OuterFunction, or its value at z when z is given.  Profiles
    that vanish at 0⁺ are rejected when E contains arcs (the log modulus
    would be −∞ on a set of positive measure, hence non-integrable); the
    same applies to blowing-up profiles on arcs.
    """
    if boundary_set.is_empty:
        raise ConfigError("distance profile needs a nonempty boundary set")
    if boundary_set.has_arcs and (phi.vanishes_at_zero or phi.blows_up_at_zero):
        raise ConfigError(
            "profile is singular at 0 while the set has positive measure; "
            "log modulus would not be integrable"
        )
    grid = CircleGrid(n)
    h = np.asarray(phi.log_value(boundary_set.chordal_distance(grid.thetas)))
    f = OuterFunction(BoundaryLogModulus(h, grid))
    return f if z is None else f.at(z)


def arc_localize(f: OuterFunction, arc) -> tuple:
    """Localization to an open arc Γ = (a, b).

    Returns (f_Γ, f_co): |f_Γ| = q·|f| on Γ and q off Γ, with
    q(ζ) = |(ζ−e^{ia})(e^{ib}−ζ)|; f_co swaps the roles, so the moduli
    multiply to q²·|f| node-wise.
    """
    a, b = (float(arc[0]), float(arc[1]))
    if not b > a or b - a >= 2.0 * math.pi:
        raise ConfigError(f"degenerate arc ({a}, {b})")
    grid = f.grid
    zeta = grid.points
    with np.errstate(divide="ignore"):
        log_q = np.log(np.abs((zeta - np.exp(1j * a)) * (np.exp(1j * b) - zeta)))
    inside = BoundarySet.from_arc(a, b)._in_arc(grid.thetas)
    h = f.samples
    h_gamma = np.where(inside, log_q + h, log_q)
    h_co = np.where(inside, log_q, log_q + h)
    return (
        OuterFunction(BoundaryLogModulus(h_gamma, grid)),
        OuterFunction(BoundaryLogModulus(h_co, grid)),
    )
