"""Hausdorff fuzzy metric between finite point sets.

Nonempty finite sets are compact, so every sup/inf in the construction is
attained and computed exactly as a max/min over the stored points.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DomainError
from .fuzzy_metric import FuzzyMetric, as_point

__all__ = ["FiniteCompactSet", "point_to_set", "attaining_index", "hausdorff_eval", "directed_terms"]


class FiniteCompactSet:
    """A nonempty finite set of points, deduplicated by exact coordinate equality.

    Insertion order is kept (first occurrence wins) because witness
    tie-breaking uses the stored index.  ``origins[i]`` is the position in the
    input list that produced ``points[i]``.
    """

    __slots__ = ("points", "origins")

    def __init__(self, points: Iterable, dim: int | None = None):
        kept = []
        origins = []
        seen = set()
        for i, p in enumerate(points):
            p = as_point(p, dim)
            if dim is None:
                dim = p.size
            key = tuple(p.tolist())
            if key in seen:
                continue
            seen.add(key)
            kept.append(p)
            origins.append(i)
        if not kept:
            raise DomainError("a compact set must be nonempty")
        arr = np.array(kept, dtype=float).reshape(len(kept), dim)
        arr.flags.writeable = False
        self.points = arr
        self.origins = tuple(origins)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i) -> np.ndarray:
        return self.points[i]

    def __contains__(self, x) -> bool:
        x = as_point(x, self.dimension)
        return bool(np.any(np.all(self.points == x, axis=1)))

    def as_set(self) -> frozenset:
        return frozenset(tuple(p) for p in self.points.tolist())

    def __eq__(self, other):
        if not isinstance(other, FiniteCompactSet):
            return NotImplemented
        return self.as_set() == other.as_set()

    def __hash__(self):
        return hash(self.as_set())

    def __repr__(self):
        return f"FiniteCompactSet({self.points.tolist()!r})"


def _check_rho(rho):
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho!r}")


def attaining_index(fm: FuzzyMetric, u, B: FiniteCompactSet, rho: float) -> tuple[float, int]:
    """Max of ``fm(u, b, rho)`` over ``b`` in ``B`` and the lowest index attaining it."""
    _check_rho(rho)
    best, best_i = -1.0, -1
    for i, b in enumerate(B.points):
        val = float(fm.evaluator(u, b, rho))
        if val > best:
            best, best_i = val, i
    return best, best_i


def point_to_set(fm: FuzzyMetric, u, B: FiniteCompactSet, rho: float) -> tuple[float, np.ndarray]:
    """Return ``sup_{v in B} fm(u, v, rho)`` and a point of ``B`` attaining it."""
    u = as_point(u, B.dimension)
    value, i = attaining_index(fm, u, B, rho)
    return value, B.points[i]


def directed_terms(fm: FuzzyMetric, A: FiniteCompactSet, B: FiniteCompactSet, rho: float) -> tuple[float, float]:
    """The two directed terms: min over B of the sup over A, and min over A of the sup over B."""
    _check_rho(rho)
    M = np.array([[float(fm.evaluator(a, b, rho)) for b in B.points] for a in A.points])
    return float(M.max(axis=0).min()), float(M.max(axis=1).min())


def hausdorff_eval(fm: FuzzyMetric, A: FiniteCompactSet, B: FiniteCompactSet, rho: float) -> float:
    return min(directed_terms(fm, A, B, rho))
