"""Fuzzy metric spaces over real vector points.

A :class:`FuzzyMetric` pairs a point space with a t-norm and an evaluator
``(u, v, rho) -> (0, 1]``.  :func:`standard_from_metric` builds the usual
``rho / (rho + d(u, v))`` construction from an ordinary metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .axioms import AxiomReport, AxiomResult
from .errors import ConfigurationError, DomainError
from .tnorm import PRODUCT, TNorm

__all__ = [
    "as_point",
    "PointSpace",
    "euclidean",
    "FuzzyMetric",
    "standard_from_metric",
    "check_fm_axioms",
    "SequenceVerdict",
    "classify_sequence",
    "tail_start",
    "harmonic_partial_sums",
    "check_base_metric",
    "DEFAULT_RHO_GRID",
]

AXIOM_TOL = 1e-12
DEFAULT_RHO_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)
DEFAULT_BOX = (-10.0, 10.0)

Metric = Callable[[np.ndarray, np.ndarray], float]


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a read-only 1-D float array, checking its dimension."""
    p = np.array(x, dtype=float).reshape(-1)
    if dim is not None and p.size != dim:
        raise DomainError(f"point has dimension {p.size}, expected {dim}")
    p.flags.writeable = False
    return p


def _abs_distance(u, v) -> float:
    return abs(float(u[0]) - float(v[0]))


def _abs_distances(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    return np.abs(U[:, 0] - V[:, 0])


def _euclidean_distance(u, v) -> float:
    return math.hypot(*(float(a) - float(b) for a, b in zip(u, v)))


@dataclass(frozen=True)
class PointSpace:
    """Points are real vectors of length ``dimension``.

    ``batch_metric`` is an optional row-wise twin of ``base_metric`` that must
    return bit-identical values.
    """

    dimension: int
    base_metric: Metric | None = field(default=None, compare=False)
    batch_metric: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = field(
        default=None, compare=False, repr=False
    )
    name: str = "custom"

    def __post_init__(self):
        if isinstance(self.dimension, bool) or int(self.dimension) != self.dimension or self.dimension < 1:
            raise ConfigurationError(f"dimension must be a positive integer, got {self.dimension!r}")

    def point(self, x) -> np.ndarray:
        return as_point(x, self.dimension)

    def distance(self, u, v) -> float:
        if self.base_metric is None:
            raise ConfigurationError("point space has no base metric")
        return float(self.base_metric(u, v))

    def distances(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        if self.base_metric is None:
            raise ConfigurationError("point space has no base metric")
        if self.batch_metric is not None:
            return np.asarray(self.batch_metric(U, V), dtype=float)
        return np.fromiter((self.base_metric(u, v) for u, v in zip(U, V)), float, len(U))

    def sample(self, rng: np.random.Generator, count: int, box=DEFAULT_BOX) -> np.ndarray:
        lo, hi = box
        return rng.uniform(lo, hi, size=(count, self.dimension))


def euclidean(dim: int) -> PointSpace:
    if dim == 1:
        return PointSpace(1, _abs_distance, _abs_distances, "euclidean")
    return PointSpace(dim, _euclidean_distance, None, "euclidean")


@dataclass(frozen=True)
class FuzzyMetric:
    space: PointSpace
    tnorm: TNorm
    evaluator: Callable[[np.ndarray, np.ndarray, float], float] = field(compare=False)
    batch_evaluator: Callable[[np.ndarray, np.ndarray, float], np.ndarray] | None = field(
        default=None, compare=False, repr=False
    )
    name: str = "custom"

    def eval(self, u, v, rho: float) -> float:
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho!r}")
        return float(self.evaluator(u, v, rho))

    __call__ = eval

    def eval_pairs(self, U, V, rho: float) -> np.ndarray:
        """Row-wise ``eval(U[i], V[i], rho)``; ``U`` or ``V`` may be a single point."""
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho!r}")
        U = np.atleast_2d(np.asarray(U, dtype=float))
        V = np.atleast_2d(np.asarray(V, dtype=float))
        U, V = np.broadcast_arrays(U, V)
        if self.batch_evaluator is not None:
            return np.asarray(self.batch_evaluator(U, V, rho), dtype=float)
        return np.fromiter((self.evaluator(u, v, rho) for u, v in zip(U, V)), float, len(U))


def standard_from_metric(space: PointSpace, tnorm: TNorm = PRODUCT) -> FuzzyMetric:
    """The fuzzy metric ``rho / (rho + d(u, v))``, paired with the product t-norm."""
    if space.base_metric is None:
        raise ConfigurationError("standard fuzzy metric needs a point space with a base metric")
    metric = space.base_metric

    def evaluator(u, v, rho):
        return rho / (rho + metric(u, v))

    def batch(U, V, rho):
        return rho / (rho + space.distances(U, V))

    return FuzzyMetric(space, tnorm, evaluator, batch, "standard")


def check_base_metric(space: PointSpace, sample_count: int = 1000, seed: int = 0,
                      box=DEFAULT_BOX, tol: float = AXIOM_TOL) -> AxiomReport:
    """Sample-based check that the base metric is a metric."""
    rng = np.random.default_rng(seed)
    pts = space.sample(rng, 3 * sample_count, box).reshape(sample_count, 3, space.dimension)
    d = space.distance
    zero = sym = tri = None
    for i, (u, v, z) in enumerate(pts):
        if zero is None and d(u, u) != 0.0:
            zero = {"sample": i, "u": u.tolist(), "d(u,u)": d(u, u)}
        if sym is None and abs(d(u, v) - d(v, u)) > tol:
            sym = {"sample": i, "d(u,v)": d(u, v), "d(v,u)": d(v, u)}
        if tri is None and d(u, z) > d(u, v) + d(v, z) + tol * (1 + d(u, z)):
            tri = {"sample": i, "d(u,z)": d(u, z), "d(u,v)+d(v,z)": d(u, v) + d(v, z)}
    res = tuple(
        AxiomResult(name, w is None, sample_count, w)
        for name, w in (("zero_self_distance", zero), ("symmetry", sym), ("triangle", tri))
    )
    return AxiomReport(res, {"sample_count": sample_count, "seed": seed, "box": tuple(box)})


def _first(mask: np.ndarray):
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def check_fm_axioms(
    fm: FuzzyMetric,
    sample_count: int = 1000,
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    seed: int = 0,
    *,
    box=DEFAULT_BOX,
    points: Sequence | None = None,
    tol: float = AXIOM_TOL,
) -> AxiomReport:
    """Check the fuzzy metric space axioms on seeded random point triples.

    Triples are drawn uniformly from ``box`` or, when ``points`` is given,
    from that finite list (which is how a finite space, e.g. a single point,
    is checked).  The reported counterexample for each axiom is the first one
    in sample order.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    rhos = np.array(sorted(float(r) for r in rho_grid))
    if rhos.size == 0 or np.any(rhos <= 0):
        raise DomainError("rho_grid must be a nonempty list of positive values")
    rng = np.random.default_rng(seed)
    dim = fm.space.dimension
    if points is not None:
        pool = np.array([as_point(p, dim) for p in points])
        triples = pool[rng.integers(len(pool), size=(sample_count, 3))]
    else:
        triples = fm.space.sample(rng, 3 * sample_count, box).reshape(sample_count, 3, dim)

    ev = fm.evaluator
    G = rhos.size
    tuv = np.empty((sample_count, G))
    tvu = np.empty((sample_count, G))
    tvz = np.empty((sample_count, G))
    tuu = np.empty((sample_count, G))
    tuz = np.empty((sample_count, G, G))
    tnudge = np.empty((sample_count, G))
    nudged = rhos * (1 + 1e-9)
    for i, (u, v, z) in enumerate(triples):
        for g, r in enumerate(rhos):
            tuv[i, g] = ev(u, v, r)
            tvu[i, g] = ev(v, u, r)
            tvz[i, g] = ev(v, z, r)
            tuu[i, g] = ev(u, u, r)
            tnudge[i, g] = ev(u, v, nudged[g])
            for h, s in enumerate(rhos):
                tuz[i, g, h] = ev(u, z, r + s)

    results = []

    def add(name, bad, make_witness):
        idx = _first(bad)
        results.append(AxiomResult(name, idx is None, int(bad.size),
                                   None if idx is None else make_witness(idx)))

    def pt(i, k):
        return triples[i, k].tolist()

    vals = np.stack([tuv, tvz], axis=1)
    add("positivity", ~((vals > 0) & (vals <= 1.0 + tol)),
        lambda i: {"sample": i[0], "u": pt(i[0], i[1]), "v": pt(i[0], i[1] + 1),
                   "rho": rhos[i[2]], "value": vals[i]})

    distinct = np.array([not np.array_equal(t[0], t[1]) for t in triples])
    identity_bad = np.abs(tuu - 1.0) > tol
    # Distinct points must have value below 1 somewhere on the grid.
    identity_bad[:, 0] |= distinct & np.all(tuv == 1.0, axis=1)

    def identity_witness(i):
        s = i[0]
        if abs(tuu[s, i[1]] - 1.0) > tol:
            return {"sample": s, "u": pt(s, 0), "v": pt(s, 0), "rho": rhos[i[1]], "value": tuu[s, i[1]]}
        return {"sample": s, "u": pt(s, 0), "v": pt(s, 1), "value": 1.0, "note": "distinct points at value 1"}

    add("identity", identity_bad, identity_witness)

    add("symmetry", np.abs(tuv - tvu) > tol,
        lambda i: {"sample": i[0], "u": pt(i[0], 0), "v": pt(i[0], 1), "rho": rhos[i[1]],
                   "M(u,v)": tuv[i], "M(v,u)": tvu[i]})

    bound = fm.tnorm.evaluate_array(tuv[:, :, None], tvz[:, None, :])
    add("triangle", tuz < bound - tol,
        lambda i: {"sample": i[0], "u": pt(i[0], 0), "v": pt(i[0], 1), "z": pt(i[0], 2),
                   "rho": rhos[i[1]], "s": rhos[i[2]], "M(u,z,rho+s)": tuz[i], "T(...)": bound[i]})

    mono_bad = np.zeros((sample_count, G), dtype=bool)
    mono_bad[:, 1:] = np.diff(tuv, axis=1) < -tol
    mono_bad |= (tnudge < tuv - tol) | (np.abs(tnudge - tuv) > 1e-6)
    add("monotone_continuous", mono_bad,
        lambda i: {"sample": i[0], "u": pt(i[0], 0), "v": pt(i[0], 1), "rho": rhos[i[1]],
                   "value": tuv[i], "nudged": tnudge[i]})

    params = {"sample_count": sample_count, "rho_grid": tuple(rhos.tolist()), "seed": seed,
              "box": tuple(box), "tol": tol, "finite_points": points is not None}
    return AxiomReport(tuple(results), params)


@dataclass(frozen=True)
class SequenceVerdict:
    """Finite-prefix classification of a sequence.

    A condition is certified when the least tail start ``N`` from which it
    holds on every available index satisfies ``N <= tail_fraction * (len - 1)``.
    Witnesses are the violating index pair with the largest first index.
    """

    classification: str
    eps: float
    rho: float
    p_max: int
    length: int
    tail_fraction: float
    cauchy: bool
    cauchy_N: int
    cauchy_witness: tuple[int, int] | None
    g_cauchy: bool
    g_cauchy_N: int
    g_cauchy_N_by_p: dict
    g_cauchy_witness: tuple[int, int] | None
    convergent: bool | None = None
    convergent_N: int | None = None
    limit: tuple | None = None


def tail_start(values_ok: np.ndarray) -> int:
    """Least ``N`` such that ``values_ok[N:]`` is all True."""
    bad = np.flatnonzero(~np.asarray(values_ok, dtype=bool))
    return 0 if bad.size == 0 else int(bad[-1]) + 1


def classify_sequence(
    fm: FuzzyMetric,
    seq,
    eps: float = 0.05,
    rho: float = 1.0,
    p_max: int = 5,
    *,
    limit=None,
    tail_fraction: float = 0.5,
) -> SequenceVerdict:
    """Classify a finite sequence as convergent, Cauchy, G-Cauchy or none of these."""
    X = np.array([as_point(x, fm.space.dimension) for x in seq])
    L = len(X)
    if L < 2:
        raise DomainError("sequence needs at least two terms")
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if not rho > 0:
        raise DomainError("rho must be positive")
    if p_max < 1:
        raise DomainError("p_max must be positive")
    threshold = 1.0 - eps
    cutoff = int(tail_fraction * (L - 1))

    g_N = {}
    g_witness = None
    g_worst = -1
    g_ok = True
    for p in range(1, p_max + 1):
        if p >= L:
            # No pair at this gap inside the prefix.
            g_N[p] = 0
            continue
        ok = fm.eval_pairs(X[:-p], X[p:], rho) > threshold
        N = tail_start(ok)
        g_N[p] = N
        if N > cutoff:
            g_ok = False
        if N > 0 and N - 1 > g_worst:
            g_worst = N - 1
            g_witness = (N - 1, N - 1 + p)
    g_overall = max(g_N.values())

    c_N = 0
    c_witness = None
    for n in range(L - 2, -1, -1):
        ok = fm.eval_pairs(X[n], X[n + 1:], rho) > threshold
        if not ok.all():
            c_N = n + 1
            c_witness = (n, n + 1 + int(np.flatnonzero(~ok)[0]))
            break
    c_ok = c_N <= cutoff

    conv = conv_N = lim = None
    if limit is not None:
        x = as_point(limit, fm.space.dimension)
        lim = tuple(x.tolist())
        conv_N = tail_start(fm.eval_pairs(X, x, rho) > threshold)
        conv = conv_N <= cutoff

    if conv:
        label = "convergent"
    elif c_ok:
        label = "cauchy"
    elif g_ok:
        label = "g-cauchy"
    else:
        label = "none-detected"
    return SequenceVerdict(
        label, float(eps), float(rho), int(p_max), L, tail_fraction,
        c_ok, c_N, None if c_ok else c_witness,
        g_ok, g_overall, g_N, None if g_ok else g_witness,
        conv, conv_N, lim,
    )


def harmonic_partial_sums(terms: int) -> np.ndarray:
    """``u_n = 1 + 1/2 + ... + 1/n`` for ``n = 1..terms``, as points of the real line."""
    return np.cumsum(1.0 / np.arange(1, terms + 1)).reshape(-1, 1)
