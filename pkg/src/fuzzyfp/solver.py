"""Picard-orbit fixed-point solvers with convergence certificates.

``solve_single`` iterates a self-map, ``solve_multi`` builds an orbit of a
set-valued map by picking the nearest image point at each step, and
``solve_classic`` runs a self-map of an ordinary metric space through the
standard fuzzy metric after checking the metric contraction condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .contraction import (
    DEFAULT_PAIR_SAMPLES,
    MultiMap,
    SingleMap,
    VerificationReport,
    ZetaFn,
    verify_metric_condition,
    zeta_apply,
)
from .errors import ConfigurationError, DomainError, NumericError
from .fuzzy_metric import DEFAULT_BOX, DEFAULT_RHO_GRID, FuzzyMetric, PointSpace, as_point, standard_from_metric, tail_start
from .hausdorff import attaining_index

__all__ = [
    "SolverConfig",
    "OrbitTrace",
    "GCauchyDiagnostic",
    "Certificate",
    "solve_single",
    "solve_multi",
    "solve_classic",
    "inclusion_residual",
    "orbit_g_cauchy",
    "orbit_step_margins",
]

CONVERGED = "converged"
MAX_ITER_EXCEEDED = "max_iter_exceeded"
HYPOTHESIS_FAILED = "hypothesis_failed"


@dataclass(frozen=True)
class SolverConfig:
    x0: tuple
    tol: float = 1e-9
    max_iter: int = 10000
    rho_ref: float = 1.0
    uniqueness_starts: int = 0
    seed: int = 0
    box: tuple = DEFAULT_BOX
    diag_eps: float = 0.01
    diag_p_max: int = 5

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in np.ravel(self.x0)))
        if not 0 < self.tol < 1:
            raise ConfigurationError(f"tol must lie in (0, 1), got {self.tol!r}")
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be at least 1")
        if not self.rho_ref > 0:
            raise ConfigurationError("rho_ref must be positive")
        if self.uniqueness_starts < 0:
            raise ConfigurationError("uniqueness_starts must be non-negative")
        if not 0 < self.diag_eps < 1 or self.diag_p_max < 1:
            raise ConfigurationError("diagnostic eps must lie in (0, 1) and p_max be positive")


@dataclass
class OrbitTrace:
    iterates: list = field(default_factory=list)
    step_residuals: list = field(default_factory=list)
    selection_witnesses: list | None = None

    def __len__(self):
        return len(self.iterates)

    def as_array(self) -> np.ndarray:
        return np.array(self.iterates)


@dataclass(frozen=True)
class GCauchyDiagnostic:
    """Tail starts ``N`` for ``fm(u_n, u_{n+p}, rho) > 1 - eps`` along an orbit."""

    eps: float
    rho: float
    tail_start_by_p: dict
    passed_by_p: dict

    @property
    def passed(self) -> bool:
        return all(self.passed_by_p.values())


@dataclass
class Certificate:
    status: str
    fixed_point: np.ndarray | None
    final_residual: float | None
    trace: OrbitTrace
    diagnostics: dict = field(default_factory=dict)
    uniqueness_check: dict | None = None
    verification: VerificationReport | None = None
    iterations: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def _finite(x: np.ndarray, n: int) -> np.ndarray:
    if not np.all(np.isfinite(x)):
        raise NumericError(f"iterate {n} has non-finite coordinates: {x.tolist()}")
    return x


def orbit_g_cauchy(fm: FuzzyMetric, iterates, eps: float, rho: float, p_max: int) -> GCauchyDiagnostic:
    """G-Cauchy tail diagnostic on a finite orbit.

    Gap ``p`` passes when its tail starts inside the orbit with at least one
    checked pair.
    """
    X = np.asarray(iterates, dtype=float)
    L = len(X)
    starts, passed = {}, {}
    for p in range(1, p_max + 1):
        if p >= L:
            starts[p], passed[p] = None, False
            continue
        ok = fm.eval_pairs(X[:-p], X[p:], rho) > 1.0 - eps
        N = tail_start(ok)
        starts[p] = N
        passed[p] = N <= L - 1 - p
    return GCauchyDiagnostic(eps, rho, starts, passed)


def orbit_step_margins(fm: FuzzyMetric, iterates, z: ZetaFn, rho: float) -> np.ndarray:
    """Margins ``fm(u_{n+1}, u_{n+2}, zeta(rho)) - fm(u_n, u_{n+1}, rho)`` along an orbit.

    Non-negative margins are the per-step inequality the orbit construction
    guarantees for contractions.
    """
    X = np.asarray(iterates, dtype=float)
    if len(X) < 3:
        return np.zeros(0)
    zr = zeta_apply(z, rho)
    shrunk = fm.eval_pairs(X[1:-1], X[2:], zr)
    base = fm.eval_pairs(X[:-2], X[1:-1], rho)
    return shrunk - base


def _diagnose(fm, cert: Certificate, cfg: SolverConfig, step, z: ZetaFn | None = None) -> None:
    """Attach orbit diagnostics.

    Converged orbits are continued ``diag_p_max`` steps past the stopping
    point so that every gap has pairs to check.
    """
    orbit = list(cert.trace.iterates)
    if cert.converged:
        for _ in range(cfg.diag_p_max):
            orbit.append(step(orbit[-1]))
    diag = orbit_g_cauchy(fm, orbit, cfg.diag_eps, cfg.rho_ref, cfg.diag_p_max)
    cert.diagnostics["g_cauchy"] = diag
    if z is not None:
        margins = orbit_step_margins(fm, cert.trace.iterates, z, cfg.rho_ref)
        cert.diagnostics["step_inequality_min_margin"] = float(margins.min()) if margins.size else None


def _iterate_single(fm: FuzzyMetric, f: SingleMap, cfg: SolverConfig) -> Certificate:
    u = _finite(as_point(cfg.x0, fm.space.dimension), 0)
    trace = OrbitTrace([u], [])
    nxt = _finite(f(u), 1)
    for n in range(cfg.max_iter):
        theta = fm.eval(u, nxt, cfg.rho_ref)
        trace.iterates.append(nxt)
        trace.step_residuals.append(theta)
        image = _finite(f(nxt), n + 2)
        if 1.0 - theta <= cfg.tol:
            final = 1.0 - fm.eval(nxt, image, cfg.rho_ref)
            if final <= cfg.tol:
                return Certificate(CONVERGED, nxt, final, trace, iterations=n + 1)
        u, nxt = nxt, image
    final = 1.0 - fm.eval(u, nxt, cfg.rho_ref)
    return Certificate(MAX_ITER_EXCEEDED, None, final, trace, iterations=cfg.max_iter)


def _uniqueness(fm, solve, cfg: SolverConfig, first: Certificate) -> dict:
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.box
    starts = rng.uniform(lo, hi, size=(cfg.uniqueness_starts, fm.space.dimension))
    endpoints = [first.fixed_point]
    statuses = [first.status]
    for s in starts:
        c = solve(replace(cfg, x0=tuple(s.tolist()), uniqueness_starts=0))
        statuses.append(c.status)
        endpoints.append(c.fixed_point if c.converged else c.trace.iterates[-1])
    spread = 0.0
    for i in range(len(endpoints)):
        for j in range(i + 1, len(endpoints)):
            spread = max(spread, float(np.linalg.norm(endpoints[i] - endpoints[j])))
    return {
        "starts": [tuple(s.tolist()) for s in starts],
        "endpoints": [tuple(e.tolist()) for e in endpoints],
        "statuses": statuses,
        "max_pairwise_distance": spread,
        "agree": all(s == CONVERGED for s in statuses) and spread <= 10 * cfg.tol,
    }


def solve_single(fm: FuzzyMetric, f: SingleMap, cfg: SolverConfig) -> Certificate:
    """Picard iteration ``u_{n+1} = f(u_n)``.

    Stops once ``1 - fm(u_n, u_{n+1}, rho_ref) <= tol`` and the residual at
    ``z = u_{n+1}`` is also within ``tol``.  With ``uniqueness_starts > 0`` the
    run is repeated from seeded random starts and the endpoint spread is
    recorded; distances there are Euclidean.
    """
    cert = _iterate_single(fm, f, cfg)
    _diagnose(fm, cert, cfg, f)
    if cert.converged and cfg.uniqueness_starts > 0:
        cert.uniqueness_check = _uniqueness(fm, lambda c: _iterate_single(fm, f, c), cfg, cert)
    return cert


def inclusion_residual(fm: FuzzyMetric, x, S: MultiMap, rho: float) -> float:
    """``1 - sup_{y in S(x)} fm(x, y, rho)``; zero exactly when ``x`` is in ``S(x)``."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho!r}")
    x = as_point(x, S.dimension)
    value, _ = attaining_index(fm, x, S(x), rho)
    return 1.0 - value


def solve_multi(fm: FuzzyMetric, S: MultiMap, z: ZetaFn, cfg: SolverConfig) -> Certificate:
    """Orbit ``u_{n+1} in S(u_n)`` choosing the image point nearest to ``u_n``.

    Nearness is measured at the fixed scale ``zeta(rho_ref)``; ties go to the
    lowest stored index.  Stops when ``1 - sup fm(u_n, S(u_n), rho_ref) <= tol``
    and reports ``z = u_n``.
    """
    select_scale = zeta_apply(z, cfg.rho_ref)

    def step(x):
        image = S(x)
        return image.points[attaining_index(fm, x, image, select_scale)[1]]

    u = _finite(as_point(cfg.x0, fm.space.dimension), 0)
    trace = OrbitTrace([u], [], [])
    status, fixed, final = MAX_ITER_EXCEEDED, None, None
    iterations = cfg.max_iter
    for n in range(cfg.max_iter + 1):
        image = S(u)
        for p in image.points:
            _finite(p, n + 1)
        value, _ = attaining_index(fm, u, image, cfg.rho_ref)
        final = 1.0 - value
        if final <= cfg.tol:
            status, fixed, iterations = CONVERGED, u, n
            break
        if n == cfg.max_iter:
            break
        _, idx = attaining_index(fm, u, image, select_scale)
        nxt = image.points[idx]
        trace.step_residuals.append(fm.eval(u, nxt, cfg.rho_ref))
        trace.selection_witnesses.append(image.origins[idx])
        trace.iterates.append(nxt)
        u = nxt
    cert = Certificate(status, fixed, final, trace, iterations=iterations)
    cert.diagnostics["selection_scale"] = select_scale
    if fixed is not None:
        cert.diagnostics["inclusion_residual"] = final
    _diagnose(fm, cert, cfg, step, z)
    return cert


def solve_classic(
    space: PointSpace,
    f: SingleMap,
    z: ZetaFn,
    cfg: SolverConfig,
    *,
    verify: bool = True,
    pair_samples: int = DEFAULT_PAIR_SAMPLES,
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
) -> Certificate:
    """Fixed point of ``f`` on an ordinary metric space.

    Checks ``rho * d(f u, f v) <= zeta(rho) * d(u, v)`` on samples (seeded by
    ``cfg.seed`` within ``cfg.box``), then iterates over the standard fuzzy
    metric.  A sampled counterexample yields ``hypothesis_failed``.
    """
    fm = standard_from_metric(space)
    report = None
    if verify:
        report = verify_metric_condition(space, f, z, pair_samples, rho_grid, cfg.seed, box=cfg.box)
        if not report.passed:
            cert = Certificate(HYPOTHESIS_FAILED, None, None, OrbitTrace([as_point(cfg.x0, space.dimension)], []))
            cert.verification = report
            return cert
    cert = solve_single(fm, f, cfg)
    cert.verification = report
    X = cert.trace.as_array()
    cert.diagnostics["metric_step_residuals"] = space.distances(X[:-1], X[1:]).tolist()
    margins = orbit_step_margins(fm, X, z, cfg.rho_ref)
    cert.diagnostics["step_inequality_min_margin"] = float(margins.min()) if margins.size else None
    return cert
