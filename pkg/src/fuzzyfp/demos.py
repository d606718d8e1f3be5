"""Built-in demo problems, addressable from the CLI with ``--demo NAME``."""

from __future__ import annotations

from .problem import ProblemSpec, parse_problem

__all__ = ["DEMOS", "demo", "demo_names"]

_COMMON = """
[tnorm] kind = product
[fuzzy] kind = standard
[sample] pair_samples = 1000 rho_grid = 0.01, 0.1, 1, 10, 100 seed = 0 box = -10, 10
"""

DEMOS = {
    "harmonic": """
[problem] name = harmonic
[space] dim = 1
[sequence] kind = harmonic terms = 10000
[diagnostics] eps = 0.05 rho = 1 p_max = 5
""",
    "halving": """
[problem] name = halving
[space] dim = 1
[zeta] kind = linear k = 0.5
[map] matrix = 0.5 offset = 0
[solver] x0 = 1 tol = 1e-9 uniqueness_starts = 3
""",
    "shifted_halving": """
[problem] name = shifted_halving
[space] dim = 1
[zeta] kind = linear k = 0.5
[map] matrix = 0.5 offset = 1
[solver] method = classic x0 = 0 tol = 1e-9 uniqueness_starts = 3
""",
    "affine2d": """
[problem] name = affine2d
[space] dim = 2
[zeta] kind = linear k = 0.5
[map]
matrix = 0.5, 0; 0, 0.25
offset = 1, 1
[solver] x0 = 0, 0 tol = 1e-9 uniqueness_starts = 3
""",
    "two_branch": """
[problem] name = two_branch
[space] dim = 1
[zeta] kind = linear k = 0.5
[multimap]
branch = 0.3333333333333333 | 0
branch = 0.5 | 0
[solver] x0 = 1 tol = 1e-9
[sets] A = [0; 1] B = [0; 2]
""",
    "inclusion": """
[problem] name = inclusion
[space] dim = 1
[zeta] kind = linear k = 0.5
[multimap]
branch = 0.5 | 0
branch = 0.5 | 0.5
[solver] x0 = 0 tol = 1e-9
""",
    "expanding": """
[problem] name = expanding
[space] dim = 1
[zeta] kind = linear k = 0.5
[map] matrix = 2 offset = 0
[solver] x0 = 1 tol = 1e-9
""",
    "translation": """
[problem] name = translation
[space] dim = 1
[zeta] kind = linear k = 0.9
[map] matrix = 1 offset = 1
[solver] x0 = 0 tol = 1e-9 max_iter = 1000 uniqueness_starts = 0
""",
}


def demo_names() -> list[str]:
    return sorted(DEMOS)


def demo_text(name: str) -> str:
    try:
        return DEMOS[name].lstrip() + _COMMON
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; available: {', '.join(demo_names())}") from None


def demo(name: str) -> ProblemSpec:
    return parse_problem(demo_text(name))
