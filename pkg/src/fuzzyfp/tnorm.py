"""Triangular norms on [0, 1].

Three built-ins are provided (Lukasiewicz, product, minimum) together with
support for user-defined binary operations.  Custom operations are accepted
as-is; :func:`check_tnorm_axioms` is the tool for checking them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .axioms import AxiomReport, AxiomResult
from .errors import DomainError

__all__ = [
    "TNorm",
    "HTypeWitness",
    "HTypeVerdict",
    "LUKASIEWICZ",
    "PRODUCT",
    "MINIMUM",
    "BUILTIN",
    "get_tnorm",
    "custom",
    "apply",
    "fold",
    "power",
    "check_tnorm_axioms",
    "probe_h_type",
]

AXIOM_TOL = 1e-12

DEFAULT_EPSILONS = (0.5, 0.1, 0.01)
DEFAULT_LAMBDA_GRID = tuple(float(x) for x in np.geomspace(1e-3, 0.5, 20))
DEFAULT_H_TYPE_N_MAX = 200
# Points probed inside the band (1 - lambda, 1]: rho = 1 - lambda * fraction.
H_TYPE_RHO_FRACTIONS = (1.0 - 1e-6, 0.75, 0.5, 0.25, 0.1, 0.01, 0.0)


def _lukasiewicz(a, b):
    # Branch on the unit so that apply(a, 1) == a holds exactly in floating point.
    if a == 1.0:
        return b
    if b == 1.0:
        return a
    s = a + b - 1.0
    return s if s > 0.0 else 0.0


def _lukasiewicz_array(a, b):
    return np.where(a == 1.0, b, np.where(b == 1.0, a, np.maximum(a + b - 1.0, 0.0)))


def _product(a, b):
    return a * b


def _minimum(a, b):
    return a if a <= b else b


@dataclass(frozen=True)
class TNorm:
    """A binary operation on the unit interval with identity 1.

    ``array_evaluator`` is an optional numpy-broadcasting twin of ``evaluator``
    used by the grid checks; without it the scalar evaluator is vectorized.
    """

    kind: str
    evaluator: Callable[[float, float], float] = field(compare=False)
    array_evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = field(
        default=None, compare=False, repr=False
    )
    name: str = ""

    def __call__(self, a: float, b: float) -> float:
        return apply(self, a, b)

    def apply(self, a: float, b: float) -> float:
        return apply(self, a, b)

    def fold(self, values: Iterable[float]) -> float:
        return fold(self, values)

    def power(self, a: float, n: int) -> float:
        return power(self, a, n)

    def evaluate_array(self, a, b) -> np.ndarray:
        """Evaluate on broadcast arrays, without domain checks."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.array_evaluator is not None:
            return np.asarray(self.array_evaluator(a, b), dtype=float)
        return np.vectorize(self.evaluator, otypes=[float])(a, b)


LUKASIEWICZ = TNorm("lukasiewicz", _lukasiewicz, _lukasiewicz_array, "lukasiewicz")
PRODUCT = TNorm("product", _product, np.multiply, "product")
MINIMUM = TNorm("minimum", _minimum, np.minimum, "minimum")

BUILTIN = {t.kind: t for t in (LUKASIEWICZ, PRODUCT, MINIMUM)}


def get_tnorm(kind: str) -> TNorm:
    try:
        return BUILTIN[kind]
    except KeyError:
        raise DomainError(f"unknown t-norm kind {kind!r}; expected one of {sorted(BUILTIN)}") from None


def custom(evaluator: Callable[[float, float], float], name: str = "custom", array_evaluator=None) -> TNorm:
    return TNorm("custom", evaluator, array_evaluator, name)


def _check_unit(x, what: str) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{what}={x!r} is outside [0, 1]")
    return x


def apply(t: TNorm, a: float, b: float) -> float:
    a = _check_unit(a, "a")
    b = _check_unit(b, "b")
    return float(t.evaluator(a, b))


def fold(t: TNorm, values: Iterable[float]) -> float:
    """Left fold of ``t`` over ``values``; the empty fold is 1."""
    values = [_check_unit(v, "value") for v in values]
    if not values:
        return 1.0
    acc = values[0]
    for v in values[1:]:
        acc = float(t.evaluator(acc, v))
    return acc


def power(t: TNorm, a: float, n: int) -> float:
    """Iterated power: ``t^0(a) = 1`` and ``t^n(a) = t(t^(n-1)(a), a)``."""
    a = _check_unit(a, "a")
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"power exponent must be a non-negative integer, got {n!r}")
    if n == 0:
        return 1.0
    acc = a
    for _ in range(int(n) - 1):
        acc = float(t.evaluator(acc, a))
    return acc


def _first(mask: np.ndarray):
    """Index tuple of the first True entry in C order, or None."""
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def check_tnorm_axioms(t: TNorm, grid_resolution: int = 100, tol: float = AXIOM_TOL) -> AxiomReport:
    """Check the t-norm axioms on the grid ``{i / grid_resolution}``.

    Monotonicity is checked non-strictly.  Every axiom reports the first
    counterexample in grid order.
    """
    if grid_resolution < 2:
        raise DomainError("grid_resolution must be at least 2")
    grid = np.arange(grid_resolution + 1) / grid_resolution
    n = grid.size
    A = grid[:, None]
    B = grid[None, :]
    T = t.evaluate_array(np.broadcast_to(A, (n, n)), np.broadcast_to(B, (n, n)))
    results = []

    def add(name, bad, checked, make_witness):
        idx = _first(bad)
        results.append(
            AxiomResult(name, idx is None, checked, None if idx is None else make_witness(idx))
        )

    bad = ~((T >= -tol) & (T <= 1.0 + tol)) | ~np.isfinite(T)
    add("range", bad, T.size, lambda i: {"a": grid[i[0]], "b": grid[i[1]], "value": T[i]})

    bad = np.abs(T - T.T) > tol
    add("commutativity", bad, T.size,
        lambda i: {"a": grid[i[0]], "b": grid[i[1]], "ab": T[i], "ba": T[i[1], i[0]]})

    left = t.evaluate_array(grid[:, None, None], T[None, :, :])   # a * (b * c)
    right = t.evaluate_array(T[:, :, None], grid[None, None, :])  # (a * b) * c
    bad = np.abs(left - right) > tol
    add("associativity", bad, left.size,
        lambda i: {"a": grid[i[0]], "b": grid[i[1]], "c": grid[i[2]],
                   "a(bc)": left[i], "(ab)c": right[i]})

    # Non-strict monotonicity in each argument along the sorted grid.
    d_second = np.diff(T, axis=1) < -tol
    d_first = np.diff(T, axis=0) < -tol
    mono_bad = np.concatenate([d_second, d_first.T], axis=0)

    def mono_witness(i):
        if i[0] < n:
            a, b, c = grid[i[0]], grid[i[1]], grid[i[1] + 1]
            return {"a": a, "b": b, "c": c, "T(a,b)": T[i[0], i[1]], "T(a,c)": T[i[0], i[1] + 1]}
        r, k = i[0] - n, i[1]
        return {"b": grid[r], "a": grid[k], "c": grid[k + 1],
                "T(a,b)": T[k, r], "T(c,b)": T[k + 1, r]}

    add("monotonicity", mono_bad, d_second.size + d_first.size, mono_witness)

    ones = np.ones(n)
    right_unit = t.evaluate_array(grid, ones)
    left_unit = t.evaluate_array(ones, grid)
    bad = (np.abs(right_unit - grid) > tol) | (np.abs(left_unit - grid) > tol)
    add("identity", bad, 2 * n,
        lambda i: {"a": grid[i[0]], "T(a,1)": right_unit[i[0]], "T(1,a)": left_unit[i[0]]})

    bad = T > np.minimum(A, B) + tol
    add("bounded_by_minimum", bad, T.size,
        lambda i: {"a": grid[i[0]], "b": grid[i[1]], "value": T[i]})

    return AxiomReport(tuple(results), {"grid_resolution": grid_resolution, "tol": tol, "kind": t.kind})


@dataclass(frozen=True)
class HTypeWitness:
    n: int
    rho: float
    eps: float
    lam: float
    value: float


@dataclass(frozen=True)
class HTypeVerdict:
    """Result of a bounded falsification search for the H-type property.

    ``holds=True`` only means that no counterexample was found within
    ``probe_bounds``.
    """

    holds: bool
    witness: HTypeWitness | None
    probe_bounds: dict
    admissible_lambda: dict = field(default_factory=dict)


def _first_power_failure(t: TNorm, rho: float, threshold: float, n_max: int):
    acc = rho
    for n in range(1, n_max + 1):
        if n > 1:
            acc = float(t.evaluator(acc, rho))
        if not acc > threshold:
            return n, acc
    return None


def probe_h_type(
    t: TNorm,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    n_max: int = DEFAULT_H_TYPE_N_MAX,
) -> HTypeVerdict:
    """Search for an epsilon admitting no lambda in ``lambda_grid``.

    For each lambda the band ``(1 - lambda, 1]`` is probed at
    ``rho = 1 - lambda * f`` for ``f`` in :data:`H_TYPE_RHO_FRACTIONS`, and every
    power up to ``n_max`` must stay above ``1 - eps``.  When no lambda works,
    the witness comes from the smallest lambda, so its ``rho`` lies inside
    every band that was tried.
    """
    for v in list(epsilons) + list(lambda_grid):
        if not 0.0 < v < 1.0:
            raise DomainError(f"probe grid value {v!r} is not in (0, 1)")
    if n_max < 1:
        raise DomainError("n_max must be positive")
    lambdas = sorted(float(x) for x in lambda_grid)
    bounds = {
        "epsilons": tuple(float(e) for e in epsilons),
        "lambda_grid": tuple(lambdas),
        "rho_fractions": H_TYPE_RHO_FRACTIONS,
        "n_max": n_max,
    }
    admissible = {}
    for eps in epsilons:
        threshold = 1.0 - eps
        first_failure = None
        for lam in lambdas:
            failure = None
            for f in H_TYPE_RHO_FRACTIONS:
                rho = 1.0 - lam * f
                hit = _first_power_failure(t, rho, threshold, n_max)
                if hit is not None:
                    failure = HTypeWitness(hit[0], rho, float(eps), lam, hit[1])
                    break
            if failure is None:
                admissible[float(eps)] = lam
                break
            if first_failure is None:
                first_failure = failure
        else:
            return HTypeVerdict(False, first_failure, bounds, admissible)
    return HTypeVerdict(True, None, bounds, admissible)
