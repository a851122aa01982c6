"""Cyclicity diagnostics for outer functions under a superharmonic weight.

An outer function f is cyclic when its polynomial multiples reach the
constant 1 in the weighted norm ‖u‖² = ‖u‖²_{L²(m)} + D_ω(u).  Three
independent instruments probe this:

* :func:`cyclic_distance` — the direct route: d(k) = min ‖1 − p·f‖ over
  polynomials of degree ≤ k, by regularized normal equations on the dense
  norm form (a Gram solve in the basis z^j·f);
* :func:`th4_test` / :func:`dalpha_test` — integral sufficient conditions
  that look only at the boundary zero set E: a capacity-weighted Stieltjes
  sum against log(1/t), and a measure-of-neighborhood test
  ∫ dt/(t^α·|E_t|) with an O(t^γ) smallness check;
* :func:`vanishing_cyclic_candidate` — the constructive direction: from a
  decaying capacity sweep of E it builds an outer function that vanishes
  exactly on E while keeping its energy finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import (ConditionCReport, DirichletFormMatrix, _series_verdict,
                       assemble_form, condition_c, variational_capacity)
from .energy import dirichlet
from .measures import CircleGrid, SuperharmonicWeight
from .outer import (BoundaryLogModulus, BoundarySet, ClassRReport,
                    DistanceProfile, OuterFunction, class_R_check,
                    distance_outer)

__all__ = [
    "GramSystem",
    "gram_system",
    "DistanceCurve",
    "cyclic_distance",
    "Th4Report",
    "th4_test",
    "DalphaReport",
    "dalpha_test",
    "VanishingReport",
    "vanishing_cyclic_candidate",
]


_RIDGE_FACTOR = 1e-10
_CONDITION_CAP = 1e14


def _boundary_samples(f, n: int) -> np.ndarray:
    """Boundary values of f on the n-node grid (band-limited resample of
    the log modulus when f lives on a different grid)."""
    if isinstance(f, OuterFunction):
        if f.n == n:
            return f.boundary_values()
        spec = np.fft.rfft(f.log_modulus.filled())
        out = np.zeros(n // 2 + 1, dtype=complex)
        m = min(spec.size, out.size)
        out[:m] = spec[:m]
        h = np.fft.irfft(out, n) * (n / f.n)
        return OuterFunction(BoundaryLogModulus(h)).boundary_values()
    arr = np.asarray(f, dtype=complex)
    if arr.shape != (n,):
        raise ValueError(f"need {n} boundary samples, got shape {arr.shape}")
    return arr


@dataclass
class GramSystem:
    """Normal equations of min ‖1 − Σ_j c_j z^j f‖².

    ``gram``[j, k] = ⟨z^j f, z^k f⟩ and ``rhs``[j] = ⟨z^j f, 1⟩ in the
    sesquilinear pairing of the norm form; ``one_norm_sq`` = ‖1‖².  The
    ridge is proportional to the trace, which keeps every distance value
    an upper bound and makes the whole system scale-invariant in f.
    """

    degree: int
    gram: np.ndarray
    rhs: np.ndarray
    one_norm_sq: float

    def ridge(self, k: int) -> float:
        return _RIDGE_FACTOR * float(np.trace(self.gram[:k + 1, :k + 1]).real)

    def distance(self, k: int | None = None) -> float:
        """d(k) for a single degree (defaults to the system's full degree)."""
        k = self.degree if k is None else int(k)
        g = self.gram[:k + 1, :k + 1] + self.ridge(k) * np.eye(k + 1)
        c = np.linalg.solve(g, self.rhs[:k + 1])
        d_sq = self.one_norm_sq - float(np.real(np.vdot(self.rhs[:k + 1], c)))
        return math.sqrt(max(d_sq, 0.0))


def gram_system(f, weight: SuperharmonicWeight | None = None,
                n: int | None = None, degree: int = 64,
                form: DirichletFormMatrix | None = None) -> GramSystem:
    """Assemble the Gram system of the basis {z^j f} on the norm form."""
    if form is None:
        if weight is None or n is None:
            raise ValueError("pass either a form or (weight, n)")
        form = assemble_form(weight, n)
    nn = form.n
    samples = _boundary_samples(f, nn)
    q = form.norm_matrix()
    thetas = CircleGrid(nn).thetas
    phases = np.exp(1j * np.outer(thetas, np.arange(degree + 1)))
    basis = samples[:, None] * phases
    gram = basis.conj().T @ (q @ basis)
    gram = 0.5 * (gram + gram.conj().T)
    rhs = basis.conj().T @ (q @ np.ones(nn))
    one_sq = float(np.ones(nn) @ q @ np.ones(nn))
    return GramSystem(degree, gram, rhs, one_sq)


@dataclass
class DistanceCurve:
    """d(k) for k = 0..degree, with solver diagnostics.

    ``truncated`` is set when the regularized Gram block passed the
    conditioning cap (1e14) and the curve stops early; ``condition`` is the
    worst conditioning actually solved.
    """

    degrees: np.ndarray
    distances: np.ndarray
    condition: float
    truncated: bool

    @property
    def final(self) -> float:
        return float(self.distances[-1])

    def monotone_defect(self) -> float:
        """Largest increase d(k+1) − d(k) (≤ ridge-level noise for exact
        arithmetic; the feasible sets are nested)."""
        if self.distances.size < 2:
            return 0.0
        return float(np.max(np.diff(self.distances), initial=0.0))


def cyclic_distance(f, weight: SuperharmonicWeight | None = None,
                    degree: int = 64, n: int | None = None,
                    form: DirichletFormMatrix | None = None) -> DistanceCurve:
    """Distance curve d(k) = min_{deg p ≤ k} ‖1 − p f‖ for k = 0..degree.

    f is cyclic exactly when d(k) → 0; the curve is nonincreasing modulo
    the trace-proportional ridge.  Functions bounded away from 0 on the
    closed disc give geometric decay; boundary zeros slow the curve down
    to the rate their capacity allows.
    """
    system = gram_system(f, weight, n, degree, form)
    degrees, dists = [], []
    worst = 1.0
    truncated = False
    for k in range(degree + 1):
        g = system.gram[:k + 1, :k + 1] + system.ridge(k) * np.eye(k + 1)
        eigs = np.linalg.eigvalsh(g)
        cond = float(eigs[-1] / max(eigs[0], 1e-300))
        if cond > _CONDITION_CAP:
            truncated = True
            break
        worst = max(worst, cond)
        c = np.linalg.solve(g, system.rhs[:k + 1])
        d_sq = system.one_norm_sq - float(np.real(np.vdot(system.rhs[:k + 1], c)))
        degrees.append(k)
        dists.append(math.sqrt(max(d_sq, 0.0)))
    return DistanceCurve(np.asarray(degrees), np.asarray(dists), worst,
                         truncated)


# ---------------------------------------------------------------------------
# integral sufficient conditions on the zero set
# ---------------------------------------------------------------------------

@dataclass
class Th4Report:
    """Capacity-weighted Stieltjes test Σ c_ω(E_t)·d(log²(1/t)) on dyadic t."""

    verdict: str  # sufficient-condition-met | not-met | inconclusive
    stieltjes: ConditionCReport

    @property
    def met(self) -> bool:
        return self.verdict == "sufficient-condition-met"


def th4_test(target: BoundarySet,
             weight: SuperharmonicWeight | None = None,
             n: int | None = None,
             form: DirichletFormMatrix | None = None) -> Th4Report:
    """Sufficient condition for cyclicity of outer functions whose zero set
    is E: convergence of the capacity sum against η(t) = log(1/t).

    The ladder starts at t = π/4 so that η is positive on it and stops one
    level above the grid spacing.  A convergent sum means every outer
    function with zero set E (and comparable smoothness) is cyclic; a
    divergent one means this test is silent, reported as ``not-met``.
    """
    if form is None:
        if weight is None or n is None:
            raise ValueError("pass either a form or (weight, n)")
        form = assemble_form(weight, n)
    j_top = int(math.floor(math.log2(form.n / 2.0)))
    rep = condition_c(target, lambda t: np.log(1.0 / np.asarray(t, float)),
                      form=form, levels=range(2, j_top + 1))
    verdict = {"finite": "sufficient-condition-met",
               "divergent": "not-met"}.get(rep.verdict, "inconclusive")
    return Th4Report(verdict, rep)


@dataclass
class DalphaReport:
    """Neighborhood-measure test at exponent α with smallness check t^γ."""

    alpha: float
    gamma: float
    ts: np.ndarray
    measures: np.ndarray
    terms: np.ndarray
    partial_sums: np.ndarray
    gamma_bound_ok: bool
    gamma_slope: float
    verdict: str  # cyclic | no-verdict | inconclusive


def dalpha_test(target: BoundarySet, alpha: float, gamma: float,
                levels: int = 26) -> DalphaReport:
    """Zero-set test for the standard-α scale: cyclic when |E_t| = O(t^γ)
    and ∫₀ dt/(t^α·|E_t|) diverges.

    |E_t| is the exact normalized measure of the chordal t-neighborhood
    (closed-form interval unions), so the only numerics are the dyadic
    block sums of the integral.  The γ-bound is checked by the trailing
    slope of log₂(|E_t|/t^γ): a positive drift means the bound fails and
    the verdict is honestly inconclusive.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    js = np.arange(levels, dtype=float)
    ts = math.pi * 2.0 ** (-js)
    meas = np.array([target.neighborhood_measure(float(t)) for t in ts])
    if target.is_empty or not np.any(meas > 0.0):
        return DalphaReport(alpha, gamma, ts, meas, np.zeros_like(ts),
                            np.zeros_like(ts), True, -math.inf, "cyclic")
    with np.errstate(divide="ignore"):
        log_ratio = np.log2(meas / ts**gamma)
    window = log_ratio[np.isfinite(log_ratio)][-6:]
    gamma_slope = float(np.mean(np.diff(window))) if window.size >= 2 else 0.0
    gamma_ok = gamma_slope <= 0.05
    # dyadic blocks of ∫ dt/(t^α |E_t|), integrand evaluated at the block
    # midpoint (|E_t| is monotone, so this is a two-sided estimate)
    mids = 0.75 * ts
    meas_mid = np.array([target.neighborhood_measure(float(t)) for t in mids])
    widths = 0.5 * ts
    terms = widths / (mids**alpha * meas_mid)
    partial = np.cumsum(terms)
    series, _ = _series_verdict(terms)
    if series == "divergent":
        verdict = "cyclic" if gamma_ok else "inconclusive"
    elif series == "finite":
        verdict = "no-verdict"
    else:
        verdict = "inconclusive"
    return DalphaReport(alpha, gamma, ts, meas, terms, partial,
                        gamma_ok, gamma_slope, verdict)


# ---------------------------------------------------------------------------
# constructive candidate
# ---------------------------------------------------------------------------

_POWER_LADDER = (3.0, 2.5, 2.0, 1.5, 1.0, 0.75, 0.5)


@dataclass
class VanishingReport:
    """Provenance of a vanishing cyclic candidate: the chosen profile power,
    the capacity sweep it was chosen from, the per-power convergence
    verdicts, and the candidate's own energy and zero-set test."""

    power: float
    profile: DistanceProfile
    class_r: ClassRReport
    sweep_ts: np.ndarray
    sweep_capacities: np.ndarray
    tried: dict
    dirichlet_value: float
    th4: Th4Report


def vanishing_cyclic_candidate(target: BoundarySet,
                               weight: SuperharmonicWeight,
                               n: int | None = None,
                               form: DirichletFormMatrix | None = None,
                               powers: tuple = _POWER_LADDER):
    """Construct an outer function vanishing exactly on the target set with
    finite energy: φ̃_E with φ(t) = exp(−log(eπ/t)^p).

    The capacity sweep c_ω(E_t) over dyadic t must decay (otherwise the set
    carries positive capacity and no such function exists — the
    construction is refused).  The power p is the largest ladder value for
    which the Stieltjes sum Σ c_ω(E_t)·d(log(eπ/t)^{2p}) converges, i.e.
    the strongest vanishing that keeps the candidate inside the space.

    Returns (candidate, report).
    """
    if form is None:
        if n is None:
            raise ValueError("pass either a form or n")
        form = assemble_form(weight, n)
    nn = form.n
    j_top = int(math.floor(math.log2(nn / 2.0)))
    js = np.arange(2, j_top + 1, dtype=float)
    ts = math.pi * 2.0 ** (-js)
    caps = np.array([
        variational_capacity(target, t=float(t), form=form).value for t in ts
    ])
    decay, _ = _series_verdict(caps)
    if decay != "finite":
        raise ValueError(
            "capacity sweep does not decay; the set is likely not polar and "
            "no function with finite energy vanishes on it"
        )
    tried = {}
    power = None
    for p in sorted(powers, reverse=True):
        eta = DistanceProfile("log", p)
        e_here = np.asarray(eta.value(ts), dtype=float) ** 2
        e_next = np.asarray(eta.value(ts / 2.0), dtype=float) ** 2
        verdict, _ = _series_verdict(caps * (e_next - e_here))
        tried[p] = verdict
        if verdict == "finite" and power is None:
            power = p
    if power is None:
        raise ValueError(
            "no profile power on the ladder gives a convergent capacity sum; "
            "construction refused"
        )
    profile = DistanceProfile("exp-log", power, sign=-1.0)
    candidate = distance_outer(profile, target, nn)
    result = dirichlet(candidate, weight)
    finite = result.finite_values()
    value = min(finite) if finite else math.inf
    report = VanishingReport(power, profile, class_R_check(profile), ts, caps,
                             tried, value, th4_test(target, form=form))
    return candidate, report
