"""Scale functions, mappings, and sample-based contraction verification.

A scale function ``zeta`` maps (0, inf) into itself; the solvers need its
iterates to shrink every scale to zero.  That limit condition and the
contraction inequalities are checked numerically, so a passing report means
"no counterexample at these samples", never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, RangeError
from .fuzzy_metric import DEFAULT_BOX, DEFAULT_RHO_GRID, FuzzyMetric, PointSpace, as_point
from .hausdorff import FiniteCompactSet, hausdorff_eval

__all__ = [
    "ZetaFn",
    "linear",
    "custom_zeta",
    "zeta_apply",
    "PiWitness",
    "PiVerdict",
    "probe_pi_membership",
    "SingleMap",
    "affine",
    "custom_map",
    "MultiMap",
    "Counterexample",
    "VerificationReport",
    "verify_single_contraction",
    "verify_multi_contraction",
    "verify_metric_condition",
    "DEFAULT_PI_SAMPLES",
]

CONTRACTION_TOL = 1e-12
DEFAULT_PAIR_SAMPLES = 1000
DEFAULT_PI_SAMPLES = tuple(float(x) for x in np.geomspace(1e-3, 1e3, 13))
DEFAULT_EPS_PI = 1e-6
DEFAULT_PI_N_MAX = 200
DIVERGENCE_CAP = 1e12


@dataclass(frozen=True)
class ZetaFn:
    kind: str
    evaluator: Callable[[float], float] = field(compare=False)
    k: float | None = None

    def __call__(self, rho: float) -> float:
        return zeta_apply(self, rho)


def linear(k: float) -> ZetaFn:
    """``zeta(rho) = k * rho``."""
    k = float(k)
    if not (k > 0 and math.isfinite(k)):
        raise ConfigurationError(f"linear scale factor must be positive and finite, got {k!r}")
    return ZetaFn("linear", lambda rho: k * rho, k)


def custom_zeta(fn: Callable[[float], float]) -> ZetaFn:
    return ZetaFn("custom", fn)


def zeta_apply(z: ZetaFn, rho: float) -> float:
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho!r}")
    val = float(z.evaluator(rho))
    if not (val > 0 and math.isfinite(val)):
        raise RangeError(f"zeta({rho!r}) = {val!r} is not a positive finite number")
    return val


@dataclass(frozen=True)
class PiWitness:
    rho: float
    n: int
    value: float
    diverged: bool


@dataclass(frozen=True)
class PiVerdict:
    member: bool
    witness: PiWitness | None
    probe_bounds: dict


def probe_pi_membership(
    z: ZetaFn,
    rho_samples: Sequence[float] = DEFAULT_PI_SAMPLES,
    eps_pi: float = DEFAULT_EPS_PI,
    n_max: int = DEFAULT_PI_N_MAX,
) -> PiVerdict:
    """Iterate ``z`` from each sample and require every orbit to drop below ``eps_pi``.

    Orbits exceeding the divergence cap stop early.  When several samples
    fail, the witness is the first diverging one, else the first stalled one.
    """
    samples = [float(r) for r in rho_samples]
    if not samples:
        raise DomainError("rho_samples must be nonempty")
    if not eps_pi > 0:
        raise DomainError("eps_pi must be positive")
    if n_max < 1:
        raise DomainError("n_max must be positive")
    bounds = {"rho_samples": tuple(samples), "eps_pi": eps_pi, "n_max": n_max,
              "divergence_cap": DIVERGENCE_CAP}
    stalled = None
    for rho in samples:
        val = rho
        for n in range(1, n_max + 1):
            val = zeta_apply(z, val)
            if val < eps_pi or val > DIVERGENCE_CAP:
                break
        if val < eps_pi:
            continue
        if val > DIVERGENCE_CAP:
            return PiVerdict(False, PiWitness(rho, n, val, True), bounds)
        if stalled is None:
            stalled = PiWitness(rho, n, val, False)
    return PiVerdict(stalled is None, stalled, bounds)


@dataclass(frozen=True)
class SingleMap:
    """A self-map of R^dim.  Affine maps carry their matrix and offset."""

    kind: str
    dimension: int
    evaluator: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    matrix: tuple | None = None
    offset: tuple | None = None

    def __call__(self, x) -> np.ndarray:
        return as_point(self.evaluator(as_point(x, self.dimension)), self.dimension)


def affine(matrix, offset) -> SingleMap:
    """``x -> matrix @ x + offset``; a scalar matrix is accepted in one dimension."""
    b = np.array(offset, dtype=float).reshape(-1)
    dim = b.size
    M = np.array(matrix, dtype=float)
    if M.ndim == 0 or M.size == 1 and dim == 1:
        M = M.reshape(1, 1)
    if M.shape != (dim, dim):
        raise ConfigurationError(f"matrix shape {M.shape} does not match offset dimension {dim}")
    M.flags.writeable = False
    b.flags.writeable = False
    return SingleMap("affine", dim, lambda x: M @ x + b,
                     tuple(map(tuple, M.tolist())), tuple(b.tolist()))


def custom_map(fn: Callable[[np.ndarray], np.ndarray], dimension: int) -> SingleMap:
    return SingleMap("custom", dimension, fn)


@dataclass(frozen=True)
class MultiMap:
    """A set-valued map whose image is the set of branch images.

    Coincident branch outputs are merged; ``image(x).origins`` gives the
    branch index behind each stored point.
    """

    branches: tuple[SingleMap, ...]

    def __post_init__(self):
        if not self.branches:
            raise ConfigurationError("a multi-valued map needs at least one branch")
        dims = {b.dimension for b in self.branches}
        if len(dims) != 1:
            raise ConfigurationError(f"branches disagree on dimension: {sorted(dims)}")
        object.__setattr__(self, "branches", tuple(self.branches))

    @property
    def dimension(self) -> int:
        return self.branches[0].dimension

    def image(self, x) -> FiniteCompactSet:
        return FiniteCompactSet([f(x) for f in self.branches], self.dimension)

    __call__ = image


@dataclass(frozen=True)
class Counterexample:
    sample: int
    u: tuple
    v: tuple
    rho: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a sampled inequality check ``lhs >= rhs`` (or ``<=`` for the metric form)."""

    passed: bool
    checked: int
    counterexample: Counterexample | None
    protocol: dict

    def line(self) -> str:
        head = f"{self.protocol.get('check', 'verification')}: {'PASS' if self.passed else 'FAIL'}"
        head += f" ({self.checked} checks, seed={self.protocol.get('seed')})"
        if self.counterexample is not None:
            c = self.counterexample
            head += f"  counterexample: u={list(c.u)} v={list(c.v)} rho={c.rho!r} lhs={c.lhs!r} rhs={c.rhs!r}"
        return head


def _sample_pairs(dim: int, count: int, seed: int, box) -> np.ndarray:
    if count < 1:
        raise DomainError("pair_samples must be positive")
    rng = np.random.default_rng(seed)
    lo, hi = box
    return rng.uniform(lo, hi, size=(count, 2, dim))


def _rho_list(rho_grid) -> list[float]:
    rhos = [float(r) for r in rho_grid]
    if not rhos or any(not r > 0 for r in rhos):
        raise DomainError("rho_grid must be a nonempty list of positive values")
    return rhos


def _run(check, pairs, rhos, lhs_rhs, fails, protocol) -> VerificationReport:
    checked = 0
    for i, (u, v) in enumerate(pairs):
        for rho in rhos:
            lhs, rhs = lhs_rhs(u, v, rho)
            checked += 1
            if fails(lhs, rhs):
                cx = Counterexample(i, tuple(u.tolist()), tuple(v.tolist()), rho, lhs, rhs)
                return VerificationReport(False, checked, cx, protocol)
    return VerificationReport(True, checked, None, protocol)


def _protocol(check, pair_samples, rhos, seed, box, tol):
    return {"check": check, "pair_samples": pair_samples, "rho_grid": tuple(rhos),
            "seed": seed, "box": tuple(box), "tol": tol}


def verify_single_contraction(
    fm: FuzzyMetric,
    f: SingleMap,
    z: ZetaFn,
    pair_samples: int = DEFAULT_PAIR_SAMPLES,
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    seed: int = 0,
    *,
    box=DEFAULT_BOX,
    tol: float = CONTRACTION_TOL,
) -> VerificationReport:
    """Check ``fm(f u, f v, zeta(rho)) >= fm(u, v, rho)`` on seeded random pairs."""
    rhos = _rho_list(rho_grid)
    pairs = _sample_pairs(fm.space.dimension, pair_samples, seed, box)

    def lhs_rhs(u, v, rho):
        return fm.eval(f(u), f(v), zeta_apply(z, rho)), fm.eval(u, v, rho)

    return _run("single-valued contraction", pairs, rhos, lhs_rhs, lambda l, r: l < r - tol,
                _protocol("single-valued contraction", pair_samples, rhos, seed, box, tol))


def verify_multi_contraction(
    fm: FuzzyMetric,
    S: MultiMap,
    z: ZetaFn,
    pair_samples: int = DEFAULT_PAIR_SAMPLES,
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    seed: int = 0,
    *,
    box=DEFAULT_BOX,
    tol: float = CONTRACTION_TOL,
) -> VerificationReport:
    """Check ``H(S u, S v, zeta(rho)) >= fm(u, v, rho)`` with the Hausdorff fuzzy metric ``H``."""
    rhos = _rho_list(rho_grid)
    pairs = _sample_pairs(fm.space.dimension, pair_samples, seed, box)

    def lhs_rhs(u, v, rho):
        return hausdorff_eval(fm, S(u), S(v), zeta_apply(z, rho)), fm.eval(u, v, rho)

    return _run("multi-valued contraction", pairs, rhos, lhs_rhs, lambda l, r: l < r - tol,
                _protocol("multi-valued contraction", pair_samples, rhos, seed, box, tol))


def verify_metric_condition(
    space: PointSpace,
    f: SingleMap,
    z: ZetaFn,
    pair_samples: int = DEFAULT_PAIR_SAMPLES,
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    seed: int = 0,
    *,
    box=DEFAULT_BOX,
    tol: float = CONTRACTION_TOL,
) -> VerificationReport:
    """Check ``rho * d(f u, f v) <= zeta(rho) * d(u, v)`` in the ordinary metric.

    The tolerance is relative to the right-hand side, since both sides scale
    with ``rho`` and the distances.
    """
    rhos = _rho_list(rho_grid)
    pairs = _sample_pairs(space.dimension, pair_samples, seed, box)

    def lhs_rhs(u, v, rho):
        return rho * space.distance(f(u), f(v)), zeta_apply(z, rho) * space.distance(u, v)

    return _run("metric contraction condition", pairs, rhos, lhs_rhs,
                lambda l, r: l > r + tol * max(1.0, r),
                _protocol("metric contraction condition", pair_samples, rhos, seed, box, tol))
