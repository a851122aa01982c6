"""Capacities of boundary sets under a superharmonic weight.

Two independent instruments:

* the variational capacity — the exact minimum of the discrete norm form
  ‖u‖² = ‖u‖²_{L²(m)} + D_ω(u) over real samples with u ≥ 1 on the target
  nodes (an active-set QP on the assembled matrix);
* the reproducing-kernel route — the closed-form diagonal estimate
  K(z) ≈ 1 + ∫₀^{|z|} dr / ((1−r) V_μ(r·z/|z|) + (1−r)²), whose reciprocal
  at the point z_I = (1−|I|)·mid(I) estimates the capacity of the arc I.

The same kernel diagonal, traced along a radius, decides whether a single
boundary point is polar (capacity zero): 1/K must decay at a definite
dyadic rate.

Matrix conventions: :class:`DirichletFormMatrix` keeps the μ pair form raw
(uncalibrated); composed matrices apply the energy module's calibration so
that uᵀQu matches the Dirichlet integral of the sample vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._spectral import poisson_cell_masses
from .energy import DOUGLAS_CALIBRATION, radial_mu_symbol
from .measures import CircleGrid, DiscMeasure, SuperharmonicWeight
from .outer import BoundarySet
from .potentials import v_mu

__all__ = [
    "DirichletFormMatrix",
    "assemble_form",
    "kernel_diag_estimate",
    "arc_capacity_estimate",
    "PolarVerdict",
    "point_polar_test",
    "CapacityResult",
    "variational_capacity",
    "TypeCheckReport",
    "weak_type_check",
    "strong_type_check",
    "ConditionCReport",
    "condition_c",
]


# ---------------------------------------------------------------------------
# the discrete quadratic form
# ---------------------------------------------------------------------------

def _circulant(symbol: np.ndarray, n: int) -> np.ndarray:
    """Dense symmetric circulant whose quadratic form on samples u equals
    Σ_k symbol(|k̃|)·|û_k|² with û the Fourier *coefficients* (fft/n); the
    symbol is indexed by signed frequency magnitude 0..n/2."""
    freq = np.abs(np.fft.fftfreq(n, d=1.0 / n)).astype(int)
    eig = symbol[freq]
    col = np.fft.ifft(eig).real / n
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return col[idx]


@dataclass
class DirichletFormMatrix:
    """Dense matrices of the discrete norm form on boundary samples.

    Attributes
    ----------
    n : grid size.
    l2_diag : (n,) L²(m) quadrature weights (all 1/n).
    mu_raw : (n, n) uncalibrated μ pair form (A_μ double integral).
    nu_mat : (n, n) ν part (already in final normalization).
    """

    n: int
    l2_diag: np.ndarray
    mu_raw: np.ndarray
    nu_mat: np.ndarray

    def energy_matrix(self,
                      calibration: float = DOUGLAS_CALIBRATION) -> np.ndarray:
        """Matrix of D_ω: calibrated μ part plus ν part."""
        return calibration * self.mu_raw + self.nu_mat

    def norm_matrix(self,
                    calibration: float = DOUGLAS_CALIBRATION) -> np.ndarray:
        """Matrix of ‖·‖² = ‖·‖²_{L²} + D_ω."""
        q = self.energy_matrix(calibration)
        q = q.copy()
        q[np.diag_indices(self.n)] += self.l2_diag
        return q

    def quad(self, u: np.ndarray, matrix: np.ndarray | None = None) -> float:
        """uᵀQu for real u, or the sum over real and imaginary parts for
        complex samples (the forms are real symmetric)."""
        q = self.norm_matrix() if matrix is None else matrix
        u = np.asarray(u)
        if np.iscomplexobj(u):
            return float(u.real @ q @ u.real + u.imag @ q @ u.imag)
        return float(u @ q @ u)


def assemble_form(weight: SuperharmonicWeight, n: int) -> DirichletFormMatrix:
    """Assemble the dense form matrices of a weight on an n-node grid.

    μ atoms contribute exact variance forms 2m(diag(q) − qqᵀ) built from
    Möbius cell masses; radially symmetric μ densities contribute the exact
    Fourier circulant with eigenvalues 2·∫(1−r^{2|k|})dμ.  The uniform-ν
    part is the exact Douglas circulant (eigenvalue |k|); non-uniform ν
    densities are assembled by double quadrature with the diagonal dropped
    (an O(1/n) quadrature correction), and boundary ν atoms are snapped to
    their nearest node.

    Non-radial disc densities have no dense assembly here; use the
    quadrature routes in :mod:`superdirichlet.energy` for those weights.
    """
    mu, nu = weight.mu, weight.nu
    grid = CircleGrid(n)
    half = n // 2
    l2 = np.full(n, 1.0 / n)
    mu_raw = np.zeros((n, n))
    nu_mat = np.zeros((n, n))

    if mu.has_density and not mu.is_radial_density:
        raise ValueError(
            "dense form assembly supports atoms and radially symmetric "
            "densities only"
        )

    if mu.has_density:
        s = radial_mu_symbol(mu, half)
        mu_raw += _circulant(2.0 * s, n)
    for w, m in zip(mu.atom_pos, mu.atom_mass):
        q = poisson_cell_masses(complex(w), n)
        mu_raw += (2.0 * m) * (np.diag(q) - np.outer(q, q))

    if nu.density is not None:
        if nu.is_uniform_density:
            c = float(nu.density.flat[0])
            k = np.arange(half + 1, dtype=float)
            nu_mat += _circulant(c * k, n)
        else:
            pts = grid.points
            with np.errstate(divide="ignore"):
                inv = 1.0 / np.abs(pts[:, None] - pts[None, :]) ** 2
            np.fill_diagonal(inv, 0.0)
            w_pair = nu.density[:, None] * inv / n**2
            sym = w_pair + w_pair.T
            nu_mat += np.diag(sym.sum(axis=1)) - sym
    for th, m in zip(nu.atom_theta, nu.atom_mass):
        j0 = int(round(th / grid.spacing)) % n
        with np.errstate(divide="ignore"):
            b = 1.0 / (n * np.abs(grid.points - grid.points[j0]) ** 2)
        b[j0] = 0.0
        add = np.diag(b)
        add[:, j0] -= b
        add[j0, :] -= b
        add[j0, j0] += b.sum()
        nu_mat += m * add

    return DirichletFormMatrix(n, l2, mu_raw, nu_mat)


# ---------------------------------------------------------------------------
# kernel-diagonal estimates
# ---------------------------------------------------------------------------

_GAUSS8 = np.polynomial.legendre.leggauss(8)


def kernel_diag_estimate(z: complex, mu: DiscMeasure) -> float:
    """Two-sided estimate of the reproducing-kernel diagonal at z:

        K(z) = 1 + ∫₀^{|z|} dr / ((1−r)·V_μ(r·z/|z|) + (1−r)²).

    The radial integral is split at the dyadic radii 1 − 2^{-j} with an
    8-point Gauss rule per segment, which resolves the near-boundary decay
    of both competing terms.  For μ = 0 this returns exactly 1/(1−|z|).
    """
    z = complex(z)
    R = abs(z)
    if R == 0.0:
        return 1.0
    unit = z / R
    # segment boundaries: dyadic radii capped at R
    cuts = [0.0]
    j = 1
    while True:
        r = 1.0 - 2.0**-j
        if r >= R:
            break
        cuts.append(r)
        j += 1
        if j > 60:
            break
    cuts.append(R)
    nodes_x, nodes_w = _GAUSS8
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        mid, hw = 0.5 * (a + b), 0.5 * (b - a)
        r_nodes = mid + hw * nodes_x
        V = np.asarray(v_mu(mu, r_nodes * unit), dtype=float)
        one_r = 1.0 - r_nodes
        integrand = 1.0 / (one_r * V + one_r**2)
        total += hw * float(np.sum(nodes_w * integrand))
    return 1.0 + total


def arc_capacity_estimate(arc, mu: DiscMeasure) -> float:
    """Capacity estimate 1/K(z_I) for a boundary arc.

    ``arc`` is an (a, b) angle pair (b > a) or a :class:`BoundarySet`
    holding exactly one arc.  z_I is the interior point (1−|I|)·e^{i·mid}
    with |I| the normalized arc length, capped at the disc center for arcs
    longer than the full circle's half.
    """
    if isinstance(arc, BoundarySet):
        if len(arc.arcs) != 1:
            raise ValueError("arc_capacity_estimate expects a single arc")
        a, b = arc.arcs[0]
    else:
        a, b = arc
    if not b > a:
        raise ValueError("arc must satisfy b > a")
    length = (b - a) / (2.0 * math.pi)
    mid = 0.5 * (a + b)
    radius = max(0.0, 1.0 - length)
    z = radius * complex(math.cos(mid), math.sin(mid))
    return 1.0 / kernel_diag_estimate(z, mu)


@dataclass(frozen=True)
class PolarVerdict:
    polar: bool
    slope: float
    depths: np.ndarray
    values: np.ndarray

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.polar


# a point is declared polar when 1/K keeps decaying at least this fast
# (in doublings) over the last window of dyadic depths
_POLAR_SLOPE_THRESHOLD = 0.1
_POLAR_WINDOW = 5


def point_polar_test(zeta: complex, mu: DiscMeasure,
                     levels: int = 18) -> PolarVerdict:
    """Decide whether the boundary point ζ is polar for the weight's μ.

    Traces cap_k = 1/K((1−2^{-k})ζ) down to depth 2^{-levels}; the point
    is polar exactly when cap_k → 0, detected as an average decay of more
    than ``_POLAR_SLOPE_THRESHOLD`` bits per doubling over the last
    ``_POLAR_WINDOW`` levels.
    """
    zeta = complex(zeta) / abs(complex(zeta))
    ks = np.arange(1, levels + 1)
    vals = np.array([
        1.0 / kernel_diag_estimate((1.0 - 2.0 ** -float(k)) * zeta, mu)
        for k in ks
    ])
    logs = np.log2(vals)
    slope = float(np.mean(np.diff(logs[-(_POLAR_WINDOW + 1):])))
    return PolarVerdict(slope <= -_POLAR_SLOPE_THRESHOLD, slope, ks, vals)


# ---------------------------------------------------------------------------
# variational capacity
# ---------------------------------------------------------------------------

@dataclass
class CapacityResult:
    value: float
    minimizer: np.ndarray
    active: np.ndarray
    kkt_residual: float
    rounds: int

    def __float__(self) -> float:  # pragma: no cover - convenience
        return self.value


def _resolve_mask(target, grid: CircleGrid, t: float = 0.0) -> np.ndarray:
    if isinstance(target, BoundarySet):
        if t > 0.0:
            return target.node_mask(grid, t)
        # nodes lying in E itself (distance zero)
        return target.chordal_distance(grid.thetas) <= 0.0
    mask = np.asarray(target)
    if mask.dtype != bool or mask.shape != (grid.n,):
        raise ValueError(
            f"capacity target must be a BoundarySet or boolean mask of "
            f"shape ({grid.n},)"
        )
    if t > 0.0:
        raise ValueError("neighborhood radius applies to BoundarySet targets")
    return mask


_PG_ITER_CAP = 100_000
_PG_STALL = 250


def _projected_bb(q: np.ndarray, mask: np.ndarray, tol: float):
    """Projected-gradient phase with Barzilai–Borwein steps.

    Minimizes uᵀQu over the box 0 ≤ u ≤ 1 with u pinned to 1 on the mask
    nodes.  Runs until the fixed-point residual ‖u − P(u − ∇)‖_∞ is small,
    progress stalls, or the iteration cap is hit; the exact active-set
    polish afterwards does not depend on where this phase stops.
    """
    u = mask.astype(float)
    g = 2.0 * (q @ u)
    step = 1.0 / max(float(np.max(np.diag(q))), 1e-30)
    best = math.inf
    since_best = 0
    it = 0
    for it in range(1, _PG_ITER_CAP + 1):
        ref = np.clip(u - g, 0.0, 1.0)
        ref[mask] = 1.0
        res = float(np.max(np.abs(u - ref)))
        if res <= tol:
            break
        if res < 0.5 * best:
            best, since_best = res, 0
        else:
            since_best += 1
            if since_best >= _PG_STALL:
                break
        v = np.clip(u - step * g, 0.0, 1.0)
        v[mask] = 1.0
        gv = 2.0 * (q @ v)
        s, y = v - u, gv - g
        sy = float(s @ y)
        if sy > 1e-300:
            step = float(s @ s) / sy
        u, g = v, gv
    return u, it


def variational_capacity(target, weight: SuperharmonicWeight | None = None,
                         n: int | None = None, t: float = 0.0,
                         form: DirichletFormMatrix | None = None,
                         tol: float = 1e-8,
                         max_rounds: int = 60) -> CapacityResult:
    """min ‖u‖² over real samples with u = 1 on the target nodes and
    0 ≤ u ≤ 1 elsewhere.

    ``target`` is a :class:`BoundarySet` or a boolean node mask; ``t`` is
    the neighborhood radius (chordal): nodes within distance t of the set
    are constrained, so isolated points need t at least one grid spacing to
    be seen by off-node grids.  Solved by a projected-gradient phase with
    Barzilai–Borwein steps followed by an exact active-set polish on the
    dense norm matrix (equality-solve on the bound set, release bounds with
    wrong-sign multipliers, re-bind box violations).  The full circle gives
    exactly the norm of the constant 1 (= 1); the empty set gives 0.
    """
    if form is None:
        if weight is None or n is None:
            raise ValueError("pass either a form or (weight, n)")
        form = assemble_form(weight, n)
    n = form.n
    grid = CircleGrid(n)
    mask = _resolve_mask(target, grid, t)
    q = form.norm_matrix()

    if not mask.any():
        return CapacityResult(0.0, np.zeros(n), mask.copy(), 0.0, 0)

    _, pg_iters = _projected_bb(q, mask, max(tol, 1e-6))

    # exact polish: the minimizer solves the equality-constrained system on
    # the free nodes; box bounds re-enter only if the solve steps outside
    # [0, 1] (the assembled forms have nonpositive off-diagonal entries, so
    # the discrete maximum principle keeps the solution inside).
    fixed_hi = mask.copy()          # pinned to 1 (mask and upper bound)
    fixed_lo = np.zeros(n, dtype=bool)
    u = np.ones(n)
    grad = 2.0 * (q @ u)
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        free = ~(fixed_hi | fixed_lo)
        u = np.where(fixed_hi, 1.0, 0.0)
        if free.any():
            a_ff = q[np.ix_(free, free)]
            rhs = -q[np.ix_(free, fixed_hi)] @ np.ones(int(fixed_hi.sum()))
            u[free] = np.linalg.solve(a_ff, rhs)
        grad = 2.0 * (q @ u)
        scale = max(float(np.max(np.abs(grad))), 1e-30)
        bind_hi = free & (u > 1.0 + tol)
        bind_lo = free & (u < -tol)
        release_hi = fixed_hi & ~mask & (grad > tol * scale)
        release_lo = fixed_lo & (grad < -tol * scale)
        if not (bind_hi.any() or bind_lo.any()
                or release_hi.any() or release_lo.any()):
            break
        fixed_hi = (fixed_hi & ~release_hi) | bind_hi
        fixed_lo = (fixed_lo & ~release_lo) | bind_lo

    scale = max(float(np.max(np.abs(grad))), 1e-30)
    free = ~(fixed_hi | fixed_lo)
    kkt = 0.0
    if free.any():
        kkt = float(np.max(np.abs(grad[free]))) / scale
    box = max(float(np.max(u)) - 1.0, -float(np.min(u)))
    kkt = max(kkt, box, 0.0)
    value = float(u @ q @ u)
    return CapacityResult(value, u, fixed_hi | fixed_lo, kkt,
                          pg_iters + rounds)


# ---------------------------------------------------------------------------
# weak- and strong-type checks
# ---------------------------------------------------------------------------

@dataclass
class TypeCheckReport:
    thresholds: np.ndarray
    capacities: np.ndarray
    bounds: np.ndarray
    violations: int
    ratio: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def weak_type_check(f, weight: SuperharmonicWeight, n: int | None = None,
                    levels: range = range(-2, 13),
                    slack: float = 1e-9) -> TypeCheckReport:
    """Check c_ω({|f| > t}) ≤ ‖f‖²/t² on a dyadic threshold ladder.

    f is a sample array on the circle grid; thresholds are
    t_j = 2^{-j}·max|f|.  Capacity and norm use the same assembled form, so
    the inequality is exact mathematics and violations indicate numerics.
    """
    samples = np.asarray(f, dtype=complex)
    nn = n if n is not None else samples.size
    form = assemble_form(weight, nn)
    norm_sq = form.quad(samples)
    mod = np.abs(samples)
    top = float(mod.max())
    ts, caps, bounds = [], [], []
    violations = 0
    for j in levels:
        t = 2.0 ** (-j) * top
        mask = mod > t
        cap = variational_capacity(mask, form=form).value
        bound = norm_sq / t**2
        ts.append(t)
        caps.append(cap)
        bounds.append(bound)
        if cap > bound * (1.0 + slack):
            violations += 1
    ts, caps, bounds = map(np.asarray, (ts, caps, bounds))
    ratio = float(np.max(caps / np.maximum(bounds, 1e-300)))
    return TypeCheckReport(ts, caps, bounds, violations, ratio)


def strong_type_check(f, weight: SuperharmonicWeight, n: int | None = None,
                      levels: range = range(-2, 13)) -> TypeCheckReport:
    """Dyadic Stieltjes sum Σ_j (t_j² − t_{j+1}²)·c_ω({|f| > t_j}) against
    ‖f‖²; reports the ratio (bounded and grid-stable for bounded f)."""
    samples = np.asarray(f, dtype=complex)
    nn = n if n is not None else samples.size
    form = assemble_form(weight, nn)
    norm_sq = form.quad(samples)
    mod = np.abs(samples)
    top = float(mod.max())
    js = np.array(list(levels), dtype=float)
    ts = 2.0 ** (-js) * top
    caps = np.array([
        variational_capacity(mod > t, form=form).value for t in ts
    ])
    increments = ts**2 - np.append(ts[1:] ** 2, 0.0)
    total = float(np.sum(caps * increments))
    ratio = total / max(norm_sq, 1e-300)
    violations = 0 if math.isfinite(ratio) else 1
    return TypeCheckReport(ts, caps, ts**2, violations, ratio)


# ---------------------------------------------------------------------------
# dyadic Stieltjes sums against a singular profile
# ---------------------------------------------------------------------------

@dataclass
class ConditionCReport:
    """Dyadic evaluation of Σ_j c_ω(E_{t_j})·(η²(t_{j+1}) − η²(t_j)).

    ``verdict`` is one of ``"finite"``, ``"divergent"``, ``"inconclusive"``;
    ``slope`` is the mean log2 term ratio over the trailing window.
    """

    ts: np.ndarray
    capacities: np.ndarray
    terms: np.ndarray
    partial_sums: np.ndarray
    verdict: str
    slope: float

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"


_SUM_SLOPE_THRESHOLD = 0.1
_SUM_WINDOW = 5


def _series_verdict(terms: np.ndarray) -> tuple[str, float]:
    """Classify Σ terms by the trailing dyadic slope of the terms.

    Decay of more than ``_SUM_SLOPE_THRESHOLD`` bits per level → finite;
    nondecreasing terms over the window → divergent; anything between is
    honestly inconclusive.
    """
    pos = terms[terms > 0.0]
    if pos.size == 0:
        return "finite", -math.inf
    if pos.size < 3:
        return "inconclusive", 0.0
    tail = pos[-(_SUM_WINDOW + 1):]
    ratios = np.log2(tail[1:] / tail[:-1])
    slope = float(np.mean(ratios))
    if slope <= -_SUM_SLOPE_THRESHOLD:
        return "finite", slope
    if np.all(tail[1:] >= tail[:-1] * (1.0 - 1e-9)):
        return "divergent", slope
    return "inconclusive", slope


def condition_c(target: BoundarySet, eta,
                weight: SuperharmonicWeight | None = None,
                n: int | None = None,
                form: DirichletFormMatrix | None = None,
                levels=None) -> ConditionCReport:
    """Stieltjes test Σ_j c_ω(E_{t_j})·(η²(t_{j+1}) − η²(t_j)) over the
    dyadic radii t_j = π·2^{-j}.

    ``eta`` is a callable on (0, π] (a :class:`DistanceProfile`'s ``value``
    works) that increases as t ↓ 0.  The ladder stops one level above the
    grid spacing, where the neighborhood E_t stops resolving; the verdict
    comes from the trailing slope of the terms, with nondecreasing terms
    declared divergent and a shallow mixed tail inconclusive.
    """
    if form is None:
        if weight is None or n is None:
            raise ValueError("pass either a form or (weight, n)")
        form = assemble_form(weight, n)
    nn = form.n
    eta_fn = eta.value if hasattr(eta, "value") else eta
    j_top = int(math.floor(math.log2(nn / 2.0)))
    js = np.array(list(levels) if levels is not None else range(j_top + 1),
                  dtype=float)
    ts = math.pi * 2.0 ** (-js)
    caps = np.array([
        variational_capacity(target, t=float(t), form=form).value for t in ts
    ])
    eta_here = np.asarray(eta_fn(ts), dtype=float) ** 2
    eta_next = np.asarray(eta_fn(ts / 2.0), dtype=float) ** 2
    terms = caps * (eta_next - eta_here)
    partial = np.cumsum(terms)
    verdict, slope = _series_verdict(terms)
    return ConditionCReport(ts, caps, terms, partial, verdict, slope)
