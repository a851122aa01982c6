"""Command-line interface for the superdirichlet toolkit.

Subcommands
-----------
``eval``
    Tabulate a potential-theory kernel (Green potential, Poisson integral,
    V/Ψ potentials, balayage, the A-kernel diagonal or the reproducing-kernel
    diagonal estimate) at a list of points.
``dirichlet``
    Weighted Dirichlet integral of a boundary function by every route, with
    the relative gaps between routes.
``capacity``
    Weighted condenser capacities of a boundary set along a dyadic
    neighborhood ladder, with solver diagnostics and an optional Stieltjes
    column against a singular profile.
``cyclicity``
    Distance curves, the capacity-weighted Stieltjes test, the
    neighborhood-measure test, and vanishing cyclic candidates.
``verify``
    Deterministic self-check suites (``bregman``, ``cutoff``, ``routes``,
    ``capacity``, ``cyclicity``, or ``all``); prints a report and exits
    nonzero when any check is violated.
``sweep``
    Grid-refinement study of the route agreement for one function.

Shared flags: ``--config`` (plain-text ``key = value`` file, see
:func:`superdirichlet.measures.load_config`), ``--out``, ``--grid``,
``--seed``, ``--trials``, ``--workers``, ``--tolerance``.  Flags override
configuration-file values; ``SUPERDIRICHLET_WORKERS`` is the only honoured
environment override and beats both.

All tabular output is CSV with a header row, ``.`` as the decimal mark and
15 significant digits; points are formatted ``a+bi``.  Lines starting with
``#`` are comment footers.  Output is byte-identical for a fixed
configuration and seed, regardless of worker count.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 a quadrature cap was hit, 4 the linear solver failed.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._util import SignaledInfinity, fmt, fmt_point, parse_point
from .measures import (
    CircleGrid,
    ConfigError,
    SuperharmonicWeight,
    atomic_weight,
    classical_weight,
    load_config,
    point_mass_harmonic_weight,
    standard_alpha_weight,
)
from .potentials import (
    a_mu_kernel,
    balayage,
    green_potential,
    poisson_integral,
    psi_mu,
    v_mu,
)
from .outer import (
    BoundaryLogModulus,
    BoundarySet,
    OuterFunction,
    cutoff_max,
    cutoff_min,
    wedge_square,
)
from .energy import DirichletEngine, dirichlet, douglas_type_form, phi_entropy
from .capacity import (
    assemble_form,
    kernel_diag_estimate,
    strong_type_check,
    variational_capacity,
    weak_type_check,
)
from .cyclicity import (
    cyclic_distance,
    dalpha_test,
    th4_test,
    vanishing_cyclic_candidate,
)

__all__ = ["main", "run"]

_WORKERS_ENV = "SUPERDIRICHLET_WORKERS"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_SOLVER = 4


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Resolved inputs of one CLI invocation."""

    weight: SuperharmonicWeight
    params: dict
    digest: str
    out: str | None
    workers: int

    @property
    def n(self) -> int:
        return int(self.params["n"])

    @property
    def seed(self) -> int:
        return int(self.params["seed"])

    @property
    def trials(self) -> int:
        return int(self.params["trials"])

    @property
    def tolerance(self) -> float:
        return float(self.params["tolerance"])


# flag destinations that flow into the parameter dictionary before
# validation (the "workers" value is execution detail, kept out of digests)
_OVERRIDE_FLAGS = (
    ("grid", "n"),
    ("seed", "seed"),
    ("trials", "trials"),
    ("workers", "workers"),
    ("tolerance", "tolerance"),
    ("function", "function"),
    ("set_spec", "set"),
    ("sweep", "sweep"),
    ("points", "points"),
    ("eta", "eta"),
    ("degree", "degree"),
    ("grids", "grids"),
)


def _load_run_config(args) -> RunConfig:
    overrides = {}
    for attr, key in _OVERRIDE_FLAGS:
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value

    path = getattr(args, "config", None)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    else:
        text = ""

    weight, params = load_config(path, overrides)
    if path is None and weight.is_zero:
        weight = classical_weight(int(params["n"]))

    digest_keys = sorted(k for k in overrides if k != "workers")
    payload = text + "\n--overrides--\n" + "\n".join(
        f"{k}={overrides[k]}" for k in digest_keys
    )
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    workers = int(params.get("workers", 1))
    env = os.environ.get(_WORKERS_ENV)
    if env is not None:
        try:
            workers = int(env)
        except ValueError as exc:
            raise ConfigError(
                f"{_WORKERS_ENV} must be an integer, got {env!r}"
            ) from exc
    workers = max(1, workers)

    out = getattr(args, "out", None)
    if out is None:
        out = params.get("out")
    return RunConfig(weight, params, digest, out, workers)


def _parallel_map(fn, items, workers: int) -> list:
    """Order-preserving map; results are identical for any worker count."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# specification mini-languages
# ---------------------------------------------------------------------------

def _spec_payload(spec: str, head: str) -> str:
    return spec[len(head):]


def _resolve_function(spec: str | None, n: int):
    """Boundary data from a function spec.

    Forms: ``one`` | ``const:C`` | ``zpow:K`` | ``one-minus-z`` |
    ``poly:c0,c1,...`` | ``outer-cos:c1,c2,...`` | ``outer-trig:SEED[,TERMS]``
    | ``csv:PATH``.  Returns an :class:`OuterFunction` for the outer forms
    and an array of exact boundary samples otherwise.
    """
    spec = (spec or "one-minus-z").strip()
    grid = CircleGrid(n)
    try:
        if spec == "one":
            return OuterFunction(BoundaryLogModulus.constant(0.0, n))
        if spec == "one-minus-z":
            return 1.0 - grid.points
        if spec.startswith("const:"):
            c = float(_spec_payload(spec, "const:"))
            if c <= 0.0:
                raise ConfigError(f"function spec {spec!r}: constant must be > 0")
            return OuterFunction(BoundaryLogModulus.constant(math.log(c), n))
        if spec.startswith("zpow:"):
            k = int(_spec_payload(spec, "zpow:"))
            if k < 0:
                raise ConfigError(f"function spec {spec!r}: power must be >= 0")
            return grid.points ** k
        if spec.startswith("poly:"):
            coeffs = [float(c) for c in _spec_payload(spec, "poly:").split(",")]
            return np.polyval(coeffs[::-1], grid.points)
        if spec.startswith("outer-cos:"):
            coeffs = [float(c) for c in _spec_payload(spec, "outer-cos:").split(",")]
            h = np.zeros(n)
            for k, c in enumerate(coeffs, start=1):
                h += c * np.cos(k * grid.thetas)
            return OuterFunction(BoundaryLogModulus(h))
        if spec.startswith("outer-trig:"):
            parts = _spec_payload(spec, "outer-trig:").split(",")
            seed = int(parts[0])
            terms = int(parts[1]) if len(parts) > 1 else 6
            rng = np.random.default_rng(seed)
            return _random_outer(rng, n, terms=terms)
        if spec.startswith("csv:"):
            blm = BoundaryLogModulus.from_csv(_spec_payload(spec, "csv:"))
            if blm.n != n:
                raise ConfigError(
                    f"function spec {spec!r}: file grid ({blm.n}) does not "
                    f"match the requested grid ({n})"
                )
            return OuterFunction(blm)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"function spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown function spec {spec!r}")


def _resolve_set(spec: str | None) -> BoundarySet:
    """Boundary set from a set spec: ``circle`` | ``empty`` | ``point:T`` |
    ``points:T1;T2;...`` | ``arc:A,B`` | ``arcs:A1,B1;A2,B2;...`` (angles in
    radians)."""
    spec = (spec or "point:0").strip()
    try:
        if spec == "circle":
            return BoundarySet.full_circle()
        if spec == "empty":
            return BoundarySet.empty()
        if spec.startswith("point:"):
            return BoundarySet.from_points([float(_spec_payload(spec, "point:"))])
        if spec.startswith("points:"):
            thetas = [float(t) for t in _spec_payload(spec, "points:").split(";")]
            return BoundarySet.from_points(thetas)
        if spec.startswith("arc:"):
            a, b = (float(t) for t in _spec_payload(spec, "arc:").split(","))
            return BoundarySet.from_arc(a, b)
        if spec.startswith("arcs:"):
            arcs = []
            for chunk in _spec_payload(spec, "arcs:").split(";"):
                a, b = (float(t) for t in chunk.split(","))
                arcs.append((a, b))
            return BoundarySet(arcs=arcs)
    except ValueError as exc:
        raise ConfigError(f"set spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown set spec {spec!r}")


def _resolve_sweep(spec: str | None) -> np.ndarray:
    """Neighborhood radii from a sweep spec ``dyadic:J1..J2`` (t = π·2^-j)."""
    spec = (spec or "dyadic:2..8").strip()
    if spec.startswith("dyadic:"):
        body = _spec_payload(spec, "dyadic:")
        try:
            lo, hi = (int(j) for j in body.split(".."))
        except ValueError as exc:
            raise ConfigError(f"sweep spec {spec!r}: {exc}") from exc
        if hi < lo:
            raise ConfigError(f"sweep spec {spec!r}: empty range")
        return np.pi * 2.0 ** (-np.arange(lo, hi + 1, dtype=float))
    raise ConfigError(f"unknown sweep spec {spec!r}")


def _resolve_eta(spec: str | None):
    """Singular profile from an eta spec: ``log`` (log 1/t) or
    ``log-pow:P`` ((log eπ/t)^P); ``None`` stays ``None``."""
    if spec is None:
        return None
    spec = spec.strip()
    if spec == "log":
        return lambda t: np.log(1.0 / t)
    if spec.startswith("log-pow:"):
        try:
            p = float(_spec_payload(spec, "log-pow:"))
        except ValueError as exc:
            raise ConfigError(f"eta spec {spec!r}: {exc}") from exc
        return lambda t: np.log(np.e * np.pi / t) ** p
    raise ConfigError(f"unknown eta spec {spec!r}")


def _resolve_points(spec: str | None) -> np.ndarray:
    spec = (spec or "0+0i").strip()
    points = []
    for chunk in spec.replace(",", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            points.append(parse_point(chunk))
        except ValueError as exc:
            raise ConfigError(f"points spec: {exc}") from exc
    return np.asarray(points, dtype=complex)


def _random_outer(rng, n: int, terms: int = 6, scale: float = 0.8) -> OuterFunction:
    """Smooth random outer function with bounded log modulus."""
    thetas = CircleGrid(n).thetas
    h = np.zeros(n)
    for k in range(1, terms + 1):
        a, b = rng.normal(scale=scale / k**2, size=2)
        h += a * np.cos(k * thetas) + b * np.sin(k * thetas)
    return OuterFunction(BoundaryLogModulus(h))


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list[str]],
         footers: list[str] = ()) -> str:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    lines += [f"# {foot}" for foot in footers]
    return "\n".join(lines) + "\n"


def _value_cell(value) -> tuple[str, bool]:
    """CSV cell for a possibly capped scalar; flags when the cap was hit.

    NaN marks a route that does not apply to the data (not a cap).
    """
    if isinstance(value, SignaledInfinity):
        return "inf", True
    v = float(value)
    if math.isnan(v):
        return "nan", False
    if math.isinf(v):
        return "inf", True
    return fmt(v), False


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _eval_target(what: str, weight: SuperharmonicWeight):
    mu, nu = weight.mu, weight.nu

    def on_circle(z: complex) -> complex:
        if z == 0:
            raise ConfigError(f"'{what}' needs a boundary point, got 0")
        return z / abs(z)

    table = {
        "green": lambda z: green_potential(mu, z),
        "poisson": lambda z: poisson_integral(nu, z),
        "vmu": lambda z: v_mu(mu, z),
        "psimu": lambda z: psi_mu(mu, z),
        "balayage": lambda z: balayage(mu, on_circle(z)),
        "amu": lambda z: a_mu_kernel(mu, on_circle(z), on_circle(z)),
        "kernel": lambda z: kernel_diag_estimate(z, mu),
    }
    return table[what]


def cmd_eval(args, cfg: RunConfig) -> tuple[str, int]:
    points = _resolve_points(cfg.params.get("points"))
    target = _eval_target(args.what, cfg.weight)
    capped = False
    rows = []
    for z in points:
        cell, hit = _value_cell(target(complex(z)))
        capped = capped or hit
        rows.append([fmt_point(complex(z)), cell])
    text = _csv(["point", "value"], rows)
    return text, EXIT_CAP if capped else EXIT_OK


# ---------------------------------------------------------------------------
# dirichlet
# ---------------------------------------------------------------------------

def _route_rows(result, douglas) -> tuple[list[list[str]], float, bool]:
    values = {
        "area": result.area,
        "local": result.local,
        "entropy": result.entropy,
        "douglas": douglas,
    }
    finite = [float(v) for v in values.values()
              if not isinstance(v, SignaledInfinity)
              and math.isfinite(float(v))]
    mean = sum(finite) / len(finite) if finite else float("nan")
    scale = max((abs(v) for v in finite), default=1.0)
    scale = max(scale, 1e-30)
    rows = []
    capped = False
    for route, value in values.items():
        cell, hit = _value_cell(value)
        capped = capped or hit
        if hit or not math.isfinite(float(value)):
            gap = ""
        else:
            gap = fmt(abs(float(value) - mean) / scale)
        rows.append([route, cell, gap])
    spread = ((max(finite) - min(finite)) / scale) if len(finite) > 1 else 0.0
    return rows, spread, capped


def cmd_dirichlet(args, cfg: RunConfig) -> tuple[str, int]:
    f = _resolve_function(cfg.params.get("function"), cfg.n)
    result = dirichlet(f, cfg.weight)
    douglas = douglas_type_form(f, cfg.weight)
    rows, spread, capped = _route_rows(result, douglas)
    footers = [f"grid = {cfg.n}", f"max_rel_gap = {fmt(spread)}"]
    text = _csv(["route", "value", "gap"], rows, footers)
    return text, EXIT_CAP if capped else EXIT_OK


# ---------------------------------------------------------------------------
# capacity
# ---------------------------------------------------------------------------

def cmd_capacity(args, cfg: RunConfig) -> tuple[str, int]:
    target = _resolve_set(cfg.params.get("set"))
    ts = _resolve_sweep(cfg.params.get("sweep"))
    eta = _resolve_eta(cfg.params.get("eta"))
    n = cfg.n
    form = assemble_form(cfg.weight, n)
    grid = CircleGrid(n)
    spacing = 2.0 * np.pi / n

    header = ["t", "value", "rounds", "kkt", "status"]
    if eta is not None:
        header += ["term", "partial_sum"]
    rows = []
    partial = 0.0
    for t in ts:
        mask = target.node_mask(grid, float(t))
        if not mask.any():
            status = "empty" if target.is_empty or t < spacing else "ok"
            row = [fmt(float(t)), fmt(0.0), "0", fmt(0.0), status]
            value = 0.0
        else:
            res = variational_capacity(target, t=float(t), form=form)
            value = res.value
            row = [fmt(float(t)), fmt(res.value), str(res.rounds),
                   fmt(res.kkt_residual), "ok"]
        if eta is not None:
            term = value * (float(eta(t / 2.0)) ** 2 - float(eta(t)) ** 2)
            partial += term
            row += [fmt(term), fmt(partial)]
        rows.append(row)
    footers = [f"grid = {n}", f"weight = {cfg.weight.label}"]
    return _csv(header, rows, footers), EXIT_OK


# ---------------------------------------------------------------------------
# cyclicity
# ---------------------------------------------------------------------------

def cmd_cyclicity(args, cfg: RunConfig) -> tuple[str, int]:
    mode = args.mode
    n = cfg.n
    if mode == "curve":
        f = _resolve_function(cfg.params.get("function"), n)
        degree = int(cfg.params.get("degree", 64))
        curve = cyclic_distance(f, cfg.weight, degree=degree, n=n)
        rows = [[str(k), fmt(d)]
                for k, d in zip(curve.degrees, curve.distances)]
        footers = [
            f"final = {fmt(curve.final)}",
            f"condition = {fmt(curve.condition)}",
            f"truncated = {curve.truncated}",
        ]
        return _csv(["k", "distance"], rows, footers), EXIT_OK

    if mode == "th4":
        target = _resolve_set(cfg.params.get("set"))
        report = th4_test(target, cfg.weight, n=n)
        st = report.stieltjes
        rows = [[fmt(t), fmt(c), fmt(term), fmt(ps)]
                for t, c, term, ps in zip(st.ts, st.capacities, st.terms,
                                          st.partial_sums)]
        footers = [f"slope = {fmt(st.slope)}", f"verdict = {report.verdict}"]
        return _csv(["t", "capacity", "term", "partial_sum"], rows,
                    footers), EXIT_OK

    if mode == "dalpha":
        target = _resolve_set(cfg.params.get("set"))
        alpha = args.alpha if args.alpha is not None else float(
            cfg.params.get("alpha", 0.5))
        gamma = args.gamma if args.gamma is not None else float(
            cfg.params.get("gamma", 1.0))
        report = dalpha_test(target, alpha, gamma)
        rows = [[fmt(t), fmt(m), fmt(term), fmt(ps)]
                for t, m, term, ps in zip(report.ts, report.measures,
                                          report.terms, report.partial_sums)]
        footers = [
            f"alpha = {fmt(alpha)}",
            f"gamma = {fmt(gamma)}",
            f"gamma_bound_ok = {report.gamma_bound_ok}",
            f"gamma_slope = {fmt(report.gamma_slope)}",
            f"verdict = {report.verdict}",
        ]
        return _csv(["t", "measure", "term", "partial_sum"], rows,
                    footers), EXIT_OK

    if mode == "candidate":
        target = _resolve_set(cfg.params.get("set"))
        try:
            candidate, report = vanishing_cyclic_candidate(
                target, cfg.weight, n=n)
        except ValueError as exc:
            rows = [["status", "refused"], ["reason", str(exc)]]
            return _csv(["key", "value"], rows), EXIT_OK
        mask = target.node_mask(candidate.grid, 2.0 * np.pi / candidate.n)
        if mask.any():
            min_mod = float(np.min(np.abs(candidate.boundary_values()[mask])))
        else:
            min_mod = float("nan")
        dir_cell, _ = _value_cell(report.dirichlet_value)
        rows = [
            ["status", "ok"],
            ["power", fmt(report.power)],
            ["class_r_accepted", str(report.class_r.accepted)],
            ["dirichlet", dir_cell],
            ["th4_verdict", report.th4.verdict],
            ["min_modulus_near_set", fmt(min_mod)],
        ]
        rows += [[f"tried:{fmt(p)}", v] for p, v in report.tried.items()]
        return _csv(["key", "value"], rows), EXIT_OK

    raise ConfigError(f"unknown cyclicity mode {mode!r}")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args, cfg: RunConfig) -> tuple[str, int]:
    spec = cfg.params.get("grids") or "256,512,1024"
    try:
        grids = [int(g) for g in str(spec).replace(";", ",").split(",")]
    except ValueError as exc:
        raise ConfigError(f"grids spec {spec!r}: {exc}") from exc

    path = getattr(args, "config", None)
    base = {k: v for k, v in cfg.params.items() if k in
            ("seed", "trials", "tolerance", "function")}
    rows = []
    capped = False
    for g in grids:
        weight, params = load_config(path, {**base, "n": g})
        if path is None and weight.is_zero:
            weight = classical_weight(g)
        f = _resolve_function(params.get("function"), g)
        result = dirichlet(f, weight)
        douglas = douglas_type_form(f, weight)
        cells = []
        for v in (result.area, result.local, result.entropy, douglas):
            cell, hit = _value_cell(v)
            capped = capped or hit
            cells.append(cell)
        finite = [float(v) for v in (result.area, result.local,
                                     result.entropy, douglas)
                  if not isinstance(v, SignaledInfinity)
                  and math.isfinite(float(v))]
        if len(finite) > 1:
            scale = max(max(abs(v) for v in finite), 1e-30)
            gap = (max(finite) - min(finite)) / scale
        else:
            gap = 0.0
        rows.append([str(g)] + cells + [fmt(gap)])
    header = ["n", "area", "local", "entropy", "douglas", "max_gap"]
    return _csv(header, rows), EXIT_CAP if capped else EXIT_OK


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    stats: list[tuple[str, str]]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        stats = " ".join(f"{k}={v}" for k, v in self.stats)
        verdict = "PASS" if self.ok else "FAIL"
        out = [f"[{self.name}] {stats} violations={len(self.violations)} "
               f"{verdict}"]
        out += [f"  violation: {v}" for v in self.violations[:3]]
        return out


def _suite_bregman(cfg: RunConfig) -> SuiteResult:
    """Exhaustive grid checks of the convexity lemmas behind the cut-off
    bounds: the min/max interlacing of F(x, a) = e^x − e^a − (x−a)e^a and
    the factor-4 bound under x ↦ min(x, 2x)."""
    tol = 1e-12

    def bregman(x, a):
        return np.exp(x) - np.exp(a) - (x - a) * np.exp(a)

    xs = np.linspace(-3.0, 3.0, 20)
    F = bregman(xs[:, None], xs[None, :])
    i1, i2, j1, j2 = np.indices((20, 20, 20, 20))
    lhs_min = F[np.minimum(i1, i2), np.minimum(j1, j2)]
    lhs_max = F[np.maximum(i1, i2), np.maximum(j1, j2)]
    rhs = np.maximum(F[i1, j1], F[i2, j2])
    scale = np.maximum(1.0, rhs)
    defect_min = float(np.max((lhs_min - rhs) / scale))
    defect_max = float(np.max((lhs_max - rhs) / scale))

    ys = np.linspace(-4.0, 4.0, 40)
    g = np.minimum(ys, 2.0 * ys)
    Fg = bregman(g[:, None], g[None, :])
    Fy = bregman(ys[:, None], ys[None, :])
    defect_rs2 = float(np.max((Fg - 4.0 * Fy) / np.maximum(1.0, 4.0 * Fy)))

    violations = []
    for name, defect in (("min-lattice", defect_min),
                         ("max-lattice", defect_max),
                         ("factor-4", defect_rs2)):
        if defect > tol:
            violations.append(f"kind={name} defect={fmt(defect)} tol={fmt(tol)}")
    worst = max(defect_min, defect_max, defect_rs2)
    return SuiteResult("bregman", [("checks", "3"),
                                   ("max_defect", fmt(worst))], violations)


def _cutoff_weight(kind: int, rng, n: int) -> tuple[str, SuperharmonicWeight]:
    if kind == 0:
        return "classical", classical_weight(n)
    if kind == 1:
        k = 1 + int(rng.integers(2))
        atoms = []
        for _ in range(k):
            r = 0.15 + 0.6 * rng.random()
            th = 2.0 * np.pi * rng.random()
            atoms.append((r * np.exp(1j * th), 0.3 + 1.2 * rng.random()))
        return "atomic", atomic_weight(atoms)
    if kind == 2:
        return "point-mass-harmonic", point_mass_harmonic_weight(
            2.0 * np.pi * rng.random(), 0.5 + rng.random())
    return "standard-alpha", standard_alpha_weight(0.5, n)


def _suite_cutoff(cfg: RunConfig) -> SuiteResult:
    """Randomized cut-off inequalities for the pair form: D(f∧g) and D(f∨g)
    against D(f)+D(g) with 1% slack, D(f∧f²) against 4·D(f), plus the exact
    probability-space entropy lemma on random discrete data."""
    rng = np.random.default_rng(cfg.seed)
    n = min(cfg.n, 512)
    trials = cfg.trials
    slack = 0.01

    jobs = []
    for trial in range(trials):
        label, weight = _cutoff_weight(trial % 4, rng, n)
        f = _random_outer(rng, n)
        g = _random_outer(rng, n)
        sigma = rng.dirichlet(np.ones(12))
        u = 1.2 * rng.normal(size=12)
        v = 1.2 * rng.normal(size=12)
        jobs.append((trial, label, weight, f, g, sigma, u, v))

    def check(job):
        trial, label, weight, f, g, sigma, u, v = job
        df = float(douglas_type_form(f, weight))
        dg = float(douglas_type_form(g, weight))
        dmin = float(douglas_type_form(cutoff_min(f, g), weight))
        dmax = float(douglas_type_form(cutoff_max(f, g), weight))
        dwedge = float(douglas_type_form(wedge_square(f), weight))
        bound = df + dg
        bad = []
        used = 0.0
        for kind, lhs in (("min", dmin), ("max", dmax)):
            if lhs > bound * (1.0 + slack) + 1e-12:
                bad.append(f"kind={kind} trial={trial} family={label} "
                           f"lhs={fmt(lhs)} rhs={fmt(bound)}")
            used = max(used, (lhs - bound) / max(bound, 1e-30))
        ratio = dwedge / max(df, 1e-30)
        if ratio > 4.0 * (1.0 + slack):
            bad.append(f"kind=wedge trial={trial} family={label} "
                       f"ratio={fmt(ratio)}")
        ent_u = phi_entropy(sigma, u)
        ent_v = phi_entropy(sigma, v)
        checks = (
            ("ent-min", phi_entropy(sigma, np.minimum(u, v)), ent_u + ent_v),
            ("ent-max", phi_entropy(sigma, np.maximum(u, v)), ent_u + ent_v),
            ("ent-wedge", phi_entropy(sigma, np.minimum(u, 2.0 * u)),
             4.0 * ent_u),
        )
        for kind, lhs, rhs in checks:
            if lhs > rhs + 1e-12 * max(1.0, abs(rhs)):
                bad.append(f"kind={kind} trial={trial} lhs={fmt(lhs)} "
                           f"rhs={fmt(rhs)}")
        return used, ratio, bad

    results = _parallel_map(check, jobs, cfg.workers)
    violations = [msg for _, _, bad in results for msg in bad]
    max_slack = max((used for used, _, _ in results), default=0.0)
    wedge_max = max((ratio for _, ratio, _ in results), default=0.0)
    return SuiteResult("cutoff", [
        ("trials", str(trials)),
        ("grid", str(n)),
        ("max_slack", fmt(max_slack)),
        ("wedge_ratio_max", fmt(wedge_max)),
    ], violations)


def _suite_routes(cfg: RunConfig) -> SuiteResult:
    """Randomized agreement of the three integral routes and the pair form
    across the four weight families, within the configured tolerance."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    trials = cfg.trials
    tol = cfg.tolerance

    weights = [
        ("classical", classical_weight(n)),
        ("point-mass-harmonic", point_mass_harmonic_weight(0.0, 1.0)),
        ("atomic", atomic_weight([(0.0, 1.0)])),
        ("standard-alpha", standard_alpha_weight(0.5, n)),
    ]
    fns = [_random_outer(rng, n) for _ in range(trials)]
    engines = {label: DirichletEngine(w, n) for label, w in weights}
    for label, w in weights:
        engines[label].dirichlet(OuterFunction(BoundaryLogModulus.constant(0.0, n)))

    jobs = [(i, label, w) for i in range(trials) for label, w in weights]

    def check(job):
        i, label, w = job
        f = fns[i]
        result = engines[label].dirichlet(f)
        douglas = douglas_type_form(f, w)
        values = list(result.values()) + [douglas]
        finite = [float(v) for v in values
                  if not isinstance(v, SignaledInfinity)
                  and math.isfinite(float(v))]
        if len(finite) < 4:
            return (f"kind=route trial={i} family={label} "
                    f"error=non-finite-route"), 1.0
        scale = max(max(abs(v) for v in finite), 1e-30)
        spread = (max(finite) - min(finite)) / scale
        if spread > tol:
            return (f"kind=route trial={i} family={label} "
                    f"spread={fmt(spread)} tol={fmt(tol)}"), spread
        return None, spread

    results = _parallel_map(check, jobs, cfg.workers)
    violations = [msg for msg, _ in results if msg is not None]
    max_spread = max((s for _, s in results), default=0.0)
    return SuiteResult("routes", [
        ("trials", str(trials)),
        ("grid", str(n)),
        ("weights", str(len(weights))),
        ("max_spread", fmt(max_spread)),
    ], violations)


def _suite_capacity(cfg: RunConfig) -> SuiteResult:
    """Deterministic capacity identities (full circle, empty set), arc
    monotonicity and subadditivity, randomized weak-type checks, and
    grid-stability of the strong-type ratio."""
    rng = np.random.default_rng(cfg.seed)
    n = min(cfg.n, 512)
    weight = classical_weight(n)
    form = assemble_form(weight, n)
    violations = []

    c_circle = variational_capacity(BoundarySet.full_circle(), form=form).value
    if abs(c_circle - 1.0) > 1e-9:
        violations.append(f"kind=circle value={fmt(c_circle)} expected=1")

    c_empty = variational_capacity(BoundarySet.empty(), form=form).value
    if c_empty != 0.0:
        violations.append(f"kind=empty value={fmt(c_empty)} expected=0")

    arc_small = variational_capacity(BoundarySet.from_arc(0.0, 0.4),
                                     form=form).value
    arc_big = variational_capacity(BoundarySet.from_arc(0.0, 0.8),
                                   form=form).value
    if arc_small > arc_big + 1e-12:
        violations.append(f"kind=monotone small={fmt(arc_small)} "
                          f"big={fmt(arc_big)}")
    if arc_big > c_circle + 1e-12:
        violations.append(f"kind=monotone arc={fmt(arc_big)} "
                          f"circle={fmt(c_circle)}")

    cap_a = variational_capacity(BoundarySet.from_arc(0.0, 0.5),
                                 form=form).value
    cap_b = variational_capacity(BoundarySet.from_arc(2.0, 2.6),
                                 form=form).value
    cap_union = variational_capacity(
        BoundarySet(arcs=[(0.0, 0.5), (2.0, 2.6)]), form=form).value
    sub_defect = (cap_union - cap_a - cap_b) / max(cap_a + cap_b, 1e-30)
    if sub_defect > 1e-9:
        violations.append(f"kind=subadditive union={fmt(cap_union)} "
                          f"sum={fmt(cap_a + cap_b)}")

    atom_weight = atomic_weight([(0.0, 1.0)])
    weak_trials = max(2, min(cfg.trials, 6))
    for i in range(weak_trials):
        f = _random_outer(rng, n).boundary_values()
        w = weight if i % 2 == 0 else atom_weight
        report = weak_type_check(f, w, n)
        if report.violations:
            violations.append(f"kind=weak trial={i} "
                              f"violations={report.violations} "
                              f"ratio={fmt(report.ratio)}")

    f_spec = "outer-cos:0.7,-0.4,0.2"
    levels = range(-2, 9)
    r1 = strong_type_check(_resolve_function(f_spec, n).boundary_values(),
                           weight, n, levels=levels).ratio
    r2 = strong_type_check(_resolve_function(f_spec, 2 * n).boundary_values(),
                           classical_weight(2 * n), 2 * n,
                           levels=levels).ratio
    drift = abs(r2 - r1) / max(abs(r1), 1e-30)
    if drift > 0.2:
        violations.append(f"kind=strong-stability ratio1={fmt(r1)} "
                          f"ratio2={fmt(r2)}")

    return SuiteResult("capacity", [
        ("grid", str(n)),
        ("weak_trials", str(weak_trials)),
        ("circle_defect", fmt(abs(c_circle - 1.0))),
        ("strong_drift", fmt(drift)),
    ], violations)


def _suite_cyclicity(cfg: RunConfig) -> SuiteResult:
    """Deterministic distance-curve identities: the constant function, the
    harmonic-sum law for 1−z, monotonicity, scale invariance, and agreement
    between the Stieltjes test and the known polar/non-polar sets."""
    rng = np.random.default_rng(cfg.seed)
    n = min(cfg.n, 512)
    weight = classical_weight(n)
    violations = []

    # the Gram solve carries a trace-scaled ridge, so "zero" distances sit
    # at a ~1e-4 floor rather than machine zero
    curve_one = cyclic_distance(
        OuterFunction(BoundaryLogModulus.constant(0.0, n)), weight,
        degree=16, n=n)
    if curve_one.final > 1e-3:
        violations.append(f"kind=constant final={fmt(curve_one.final)}")

    samples = 1.0 - CircleGrid(n).points
    curve = cyclic_distance(samples, weight, degree=16, n=n)
    harmonic = sum(1.0 / i for i in range(1, 19))
    expected = 1.0 / math.sqrt(harmonic)
    rel = abs(curve.final - expected) / expected
    if rel > 1e-4:
        violations.append(f"kind=harmonic-law d16={fmt(curve.final)} "
                          f"expected={fmt(expected)}")

    f = _random_outer(rng, n)
    curve_f = cyclic_distance(f, weight, degree=24, n=n)
    defect = curve_f.monotone_defect()
    if defect > 1e-4:
        violations.append(f"kind=monotone defect={fmt(defect)}")

    scaled = cyclic_distance(3.0 * f.boundary_values(), weight,
                             degree=24, n=n)
    scale_gap = float(np.max(np.abs(scaled.distances - curve_f.distances)))
    if scale_gap > 1e-8:
        violations.append(f"kind=scale-invariance gap={fmt(scale_gap)}")

    th4_point = th4_test(BoundarySet.from_points([0.0]),
                         atomic_weight([(0.0, 1.0)]), n=n)
    if not th4_point.met:
        violations.append(f"kind=th4-point verdict={th4_point.verdict}")
    th4_arc = th4_test(BoundarySet.from_arc(0.0, np.pi / 2), weight, n=n)
    if th4_arc.met:
        violations.append(f"kind=th4-arc verdict={th4_arc.verdict}")

    return SuiteResult("cyclicity", [
        ("grid", str(n)),
        ("checks", "6"),
        ("harmonic_rel", fmt(rel)),
        ("monotone_defect", fmt(defect)),
    ], violations)


_SUITES = {
    "bregman": _suite_bregman,
    "cutoff": _suite_cutoff,
    "routes": _suite_routes,
    "capacity": _suite_capacity,
    "cyclicity": _suite_cyclicity,
}


def cmd_verify(args, cfg: RunConfig) -> tuple[str, int]:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    lines = [
        "superdirichlet verification report",
        (f"command: verify suite={args.suite} seed={cfg.seed} "
         f"trials={cfg.trials} grid={cfg.n} tolerance={fmt(cfg.tolerance)}"),
        f"config digest: {cfg.digest}",
    ]
    passed = 0
    failed = 0
    for name in names:
        result = _SUITES[name](cfg)
        lines += result.lines()
        if result.ok:
            passed += 1
        else:
            failed += 1
    verdict = "PASS" if failed == 0 else "FAIL"
    lines.append(f"result: {verdict} suites={passed}/{len(names)}")
    text = "\n".join(lines) + "\n"
    return text, EXIT_OK if failed == 0 else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH",
                        help="plain-text key = value configuration file")
    shared.add_argument("--out", metavar="PATH",
                        help="write the report here instead of stdout")
    shared.add_argument("--grid", type=int, metavar="N",
                        help="circle grid size (power of two)")
    shared.add_argument("--seed", type=int, help="random seed")
    shared.add_argument("--trials", type=int,
                        help="randomized trials per suite")
    shared.add_argument("--workers", type=int,
                        help="worker threads (results are identical)")
    shared.add_argument("--tolerance", type=float,
                        help="relative tolerance for agreement checks")

    parser = argparse.ArgumentParser(
        prog="superdirichlet",
        description="Weighted Dirichlet integrals, capacities and "
                    "cyclicity diagnostics for superharmonic weights.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[shared],
                       help="tabulate a kernel at points")
    p.add_argument("what", choices=("green", "poisson", "vmu", "psimu",
                                    "balayage", "amu", "kernel"))
    p.add_argument("--points", help="semicolon-separated points a+bi")

    p = sub.add_parser("dirichlet", parents=[shared],
                       help="Dirichlet integral by every route")
    p.add_argument("--function", help="function spec (see module docstring)")

    p = sub.add_parser("capacity", parents=[shared],
                       help="capacities along a neighborhood ladder")
    p.add_argument("--set", dest="set_spec", help="boundary-set spec")
    p.add_argument("--sweep", help="sweep spec, e.g. dyadic:2..8")
    p.add_argument("--eta", help="optional Stieltjes profile spec")

    p = sub.add_parser("cyclicity", parents=[shared],
                       help="distance curves and cyclicity tests")
    p.add_argument("mode", choices=("curve", "th4", "dalpha", "candidate"))
    p.add_argument("--function", help="function spec (curve mode)")
    p.add_argument("--set", dest="set_spec", help="boundary-set spec")
    p.add_argument("--degree", type=int, help="curve length")
    p.add_argument("--alpha", type=float, help="exponent (dalpha mode)")
    p.add_argument("--gamma", type=float,
                   help="smallness exponent (dalpha mode)")

    p = sub.add_parser("verify", parents=[shared],
                       help="run a deterministic self-check suite")
    p.add_argument("suite", nargs="?", default="all",
                   choices=("bregman", "cutoff", "routes", "capacity",
                            "cyclicity", "all"))

    p = sub.add_parser("sweep", parents=[shared],
                       help="route agreement across grid sizes")
    p.add_argument("--function", help="function spec")
    p.add_argument("--grids", help="comma-separated grid sizes")

    return parser


_DISPATCH = {
    "eval": cmd_eval,
    "dirichlet": cmd_dirichlet,
    "capacity": cmd_capacity,
    "cyclicity": cmd_cyclicity,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_run_config(args)
        text, code = _DISPATCH[args.command](args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except np.linalg.LinAlgError as exc:
        print(f"error: linear solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(text, cfg.out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
