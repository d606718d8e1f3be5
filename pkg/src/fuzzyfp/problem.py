"""Problem files: a line-oriented ``[section]`` / ``key = value`` format.

Vectors are comma-separated reals, matrices are row-major with rows
separated by ``;``.  Several ``key = value`` pairs may share a line, and a
section header may be followed by pairs on the same line.  A ``[multimap]``
section holds one ``branch = <matrix> | <offset>`` entry per branch, and an
optional ``[sets]`` section holds two finite point sets ``A`` and ``B`` as
bracketed row lists, e.g. ``A = [0, 0; 1, 1]``.  Comments start with ``#``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import FuzzyFPError

__all__ = [
    "ParseError",
    "ValidationError",
    "AffineSpec",
    "SequenceSpec",
    "ProblemSpec",
    "parse_problem",
    "render_problem",
]


class ParseError(FuzzyFPError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


class ValidationError(FuzzyFPError, ValueError):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


@dataclass(frozen=True)
class AffineSpec:
    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]


@dataclass(frozen=True)
class SequenceSpec:
    kind: str = "harmonic"
    terms: int = 10000


@dataclass(frozen=True)
class ProblemSpec:
    dim: int
    metric: str = "euclidean"
    tnorm: str = "product"
    fuzzy: str = "standard"
    zeta_kind: str | None = None
    zeta_k: float | None = None
    map: AffineSpec | None = None
    multimap: tuple[AffineSpec, ...] | None = None
    sequence: SequenceSpec | None = None
    method: str = "fuzzy"
    x0: tuple[float, ...] | None = None
    tol: float = 1e-9
    max_iter: int = 10000
    rho_ref: float = 1.0
    uniqueness_starts: int = 3
    pair_samples: int = 1000
    rho_grid: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0, 100.0)
    seed: int | None = None
    box: tuple[float, float] = (-10.0, 10.0)
    diag_eps: float = 0.05
    diag_rho: float = 1.0
    diag_p_max: int = 5
    set_a: tuple[tuple[float, ...], ...] | None = None
    set_b: tuple[tuple[float, ...], ...] | None = None
    name: str | None = None

    @property
    def kind(self) -> str:
        if self.map is not None:
            return "map"
        if self.multimap is not None:
            return "multimap"
        return "sequence"

    def start(self) -> tuple[float, ...]:
        return self.x0 if self.x0 is not None else (0.0,) * self.dim


# ---------------------------------------------------------------- values

def _float(text: str, line: int, key: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, key) from None
    return v


def _int(text: str, line: int, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"not an integer: {text!r}", line, key) from None


def _vector(text: str, line: int, key: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if any(not p for p in parts):
        raise ParseError(f"malformed vector {text!r}", line, key)
    return tuple(_float(p, line, key) for p in parts)


def _matrix(text: str, line: int, key: str) -> tuple[tuple[float, ...], ...]:
    rows = tuple(_vector(r, line, key) for r in text.split(";"))
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths", line, key)
    return rows


def _point_list(text: str, line: int, key: str) -> tuple[tuple[float, ...], ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("point sets are written as [x, y; x, y; ...]", line, key)
    return _matrix(text[1:-1], line, key)


def _branch(text: str, line: int, key: str) -> AffineSpec:
    if text.count("|") != 1:
        raise ParseError("branch must read '<matrix> | <offset>'", line, key)
    m, b = text.split("|")
    return AffineSpec(_matrix(m, line, key), _vector(b, line, key))


_SCHEMA = {
    "problem": {"name": str},
    "space": {"dim": _int, "metric": str},
    "tnorm": {"kind": str},
    "fuzzy": {"kind": str},
    "zeta": {"kind": str, "k": _float},
    "map": {"matrix": _matrix, "offset": _vector},
    "multimap": {"branch": _branch},
    "sequence": {"kind": str, "terms": _int},
    "solver": {"x0": _vector, "tol": _float, "max_iter": _int, "rho_ref": _float,
               "uniqueness_starts": _int, "method": str},
    "sample": {"pair_samples": _int, "rho_grid": _vector, "seed": _int, "box": _vector},
    "sets": {"A": _point_list, "B": _point_list},
    "diagnostics": {"eps": _float, "rho": _float, "p_max": _int},
}
_REPEATABLE = {("multimap", "branch")}

NEAR_DUPLICATE = 1e-12

_HEADER = re.compile(r"^\[\s*([A-Za-z_]\w*)\s*\]\s*(.*)$")
_PAIR = re.compile(r"([A-Za-z_]\w*)\s*=\s*(.*?)\s*(?=\s[A-Za-z_]\w*\s*=|$)")


def _split_pairs(text: str, lineno: int):
    pos = 0
    pairs = []
    text = text.strip()
    while pos < len(text):
        m = _PAIR.match(text, pos)
        if m is None:
            raise ParseError(f"expected 'key = value', got {text[pos:]!r}", lineno)
        pairs.append((m.group(1), m.group(2)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return pairs


def _raw_sections(text: str) -> dict:
    sections: dict[str, dict] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            current, line = m.group(1), m.group(2)
            if current not in _SCHEMA:
                raise ParseError(f"unknown section [{current}]", lineno)
            if current in sections:
                raise ValidationError(f"duplicate section [{current}]", current)
            sections[current] = {}
            if not line:
                continue
        if current is None:
            raise ParseError("key/value pair before any section header", lineno)
        for key, value in _split_pairs(line, lineno):
            schema = _SCHEMA[current]
            if key not in schema:
                raise ParseError(f"unknown key in [{current}]", lineno, f"{current}.{key}")
            if value == "":
                raise ParseError("empty value", lineno, f"{current}.{key}")
            conv = schema[key]
            parsed = value if conv is str else conv(value, lineno, f"{current}.{key}")
            sect = sections[current]
            if (current, key) in _REPEATABLE:
                sect.setdefault(key, []).append(parsed)
            elif key in sect:
                raise ParseError("duplicate key", lineno, f"{current}.{key}")
            else:
                sect[key] = parsed
    return sections


def _finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValidationError("value must be finite", name)


def _check_affine(a: AffineSpec, dim: int, name: str) -> None:
    if len(a.matrix) != dim or any(len(r) != dim for r in a.matrix):
        raise ValidationError(f"dimension mismatch: matrix is {len(a.matrix)}x{len(a.matrix[0])}, "
                              f"space dim is {dim}", name)
    if len(a.offset) != dim:
        raise ValidationError(f"dimension mismatch: offset has {len(a.offset)} entries, space dim is {dim}", name)
    _finite(name, *(x for r in a.matrix for x in r), *a.offset)


def validate(spec: ProblemSpec) -> ProblemSpec:
    if spec.dim < 1:
        raise ValidationError("must be a positive integer", "space.dim")
    if spec.metric != "euclidean":
        raise ValidationError(f"unsupported metric {spec.metric!r}", "space.metric")
    if spec.tnorm not in ("lukasiewicz", "product", "minimum"):
        raise ValidationError(f"unknown t-norm {spec.tnorm!r}", "tnorm.kind")
    if spec.fuzzy != "standard":
        raise ValidationError(f"unsupported fuzzy metric {spec.fuzzy!r}", "fuzzy.kind")
    present = [s for s in ("map", "multimap", "sequence") if getattr(spec, s) is not None]
    if not present:
        raise ValidationError("no mapping: need one of [map], [multimap] or [sequence]")
    if len(present) > 1:
        raise ValidationError(f"duplicate mapping sections: {', '.join(present)}")
    if spec.map is not None:
        _check_affine(spec.map, spec.dim, "map")
    if spec.multimap is not None:
        if not spec.multimap:
            raise ValidationError("needs at least one branch", "multimap.branch")
        for i, b in enumerate(spec.multimap):
            _check_affine(b, spec.dim, f"multimap.branch[{i}]")
    if spec.sequence is not None:
        if spec.sequence.kind != "harmonic":
            raise ValidationError(f"unknown sequence {spec.sequence.kind!r}", "sequence.kind")
        if spec.dim != 1:
            raise ValidationError("dimension mismatch: the harmonic sequence lives in dim 1", "space.dim")
        if spec.sequence.terms < 2:
            raise ValidationError("need at least 2 terms", "sequence.terms")
    else:
        if spec.zeta_kind is None:
            raise ValidationError("a [zeta] section is required for mapping problems", "zeta")
        if spec.zeta_kind != "linear":
            raise ValidationError(f"unsupported zeta kind {spec.zeta_kind!r}", "zeta.kind")
        if spec.zeta_k is None:
            raise ValidationError("missing", "zeta.k")
        _finite("zeta.k", spec.zeta_k)
        if not spec.zeta_k > 0:
            raise ValidationError("must be positive", "zeta.k")
    if spec.method not in ("fuzzy", "classic"):
        raise ValidationError(f"unknown method {spec.method!r}", "solver.method")
    if spec.method == "classic" and spec.map is None:
        raise ValidationError("the classic method needs a single-valued [map]", "solver.method")
    if spec.x0 is not None:
        if len(spec.x0) != spec.dim:
            raise ValidationError(f"dimension mismatch: {len(spec.x0)} entries for dim {spec.dim}", "solver.x0")
        _finite("solver.x0", *spec.x0)
    _finite("solver.tol", spec.tol)
    if not 0 < spec.tol < 1:
        raise ValidationError("out of range: must lie in (0, 1)", "solver.tol")
    if spec.max_iter < 1:
        raise ValidationError("must be at least 1", "solver.max_iter")
    _finite("solver.rho_ref", spec.rho_ref)
    if not spec.rho_ref > 0:
        raise ValidationError("must be positive", "solver.rho_ref")
    if spec.uniqueness_starts < 0:
        raise ValidationError("must be non-negative", "solver.uniqueness_starts")
    if spec.pair_samples < 1:
        raise ValidationError("must be positive", "sample.pair_samples")
    _finite("sample.rho_grid", *spec.rho_grid)
    if not spec.rho_grid or any(r <= 0 for r in spec.rho_grid):
        raise ValidationError("must be a nonempty list of positive values", "sample.rho_grid")
    _finite("sample.box", *spec.box)
    if len(spec.box) != 2 or not spec.box[0] < spec.box[1]:
        raise ValidationError("must read 'low, high' with low < high", "sample.box")
    if (spec.set_a is None) != (spec.set_b is None):
        raise ValidationError("both A and B are required", "sets")
    for name, pts in (("sets.A", spec.set_a), ("sets.B", spec.set_b)):
        if pts is None:
            continue
        if any(len(p) != spec.dim for p in pts):
            raise ValidationError(f"dimension mismatch: points must have {spec.dim} coordinates", name)
        _finite(name, *(x for p in pts for x in p))
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if math.dist(pts[i], pts[j]) < NEAR_DUPLICATE:
                    raise ValidationError(f"points {i} and {j} are closer than {NEAR_DUPLICATE}", name)
    _finite("diagnostics", spec.diag_eps, spec.diag_rho)
    if not 0 < spec.diag_eps < 1:
        raise ValidationError("must lie in (0, 1)", "diagnostics.eps")
    if not spec.diag_rho > 0:
        raise ValidationError("must be positive", "diagnostics.rho")
    if spec.diag_p_max < 1:
        raise ValidationError("must be positive", "diagnostics.p_max")
    return spec


def parse_problem(text: str) -> ProblemSpec:
    """Parse and validate a problem file.

    Raises :class:`ParseError` for syntax problems and unknown keys, and
    :class:`ValidationError` for semantic ones.
    """
    s = _raw_sections(text)
    if "space" not in s or "dim" not in s["space"]:
        raise ValidationError("missing", "space.dim")
    kw = {"dim": s["space"]["dim"]}
    if "metric" in s["space"]:
        kw["metric"] = s["space"]["metric"]
    if "name" in s.get("problem", {}):
        kw["name"] = s["problem"]["name"]
    if "kind" in s.get("tnorm", {}):
        kw["tnorm"] = s["tnorm"]["kind"]
    if "kind" in s.get("fuzzy", {}):
        kw["fuzzy"] = s["fuzzy"]["kind"]
    if "zeta" in s:
        kw["zeta_kind"] = s["zeta"].get("kind", "linear")
        kw["zeta_k"] = s["zeta"].get("k")
    if "map" in s:
        m = s["map"]
        for k in ("matrix", "offset"):
            if k not in m:
                raise ValidationError("missing", f"map.{k}")
        kw["map"] = AffineSpec(m["matrix"], m["offset"])
    if "multimap" in s:
        kw["multimap"] = tuple(s["multimap"].get("branch", ()))
    if "sequence" in s:
        kw["sequence"] = SequenceSpec(**s["sequence"])
    solver = s.get("solver", {})
    for k in ("x0", "tol", "max_iter", "rho_ref", "uniqueness_starts", "method"):
        if k in solver:
            kw[k] = solver[k]
    for k, v in s.get("sample", {}).items():
        kw[k] = v
    if "sets" in s:
        kw["set_a"] = s["sets"].get("A")
        kw["set_b"] = s["sets"].get("B")
    for k, v in s.get("diagnostics", {}).items():
        kw["diag_" + k] = v
    return validate(ProblemSpec(**kw))


def _num(x: float) -> str:
    return repr(float(x))


def _vec(v) -> str:
    return ", ".join(_num(x) for x in v)


def _mat(m) -> str:
    return "; ".join(_vec(r) for r in m)


def render_problem(spec: ProblemSpec) -> str:
    """Canonical text for ``spec``; ``parse_problem(render_problem(s)) == s``."""
    out = []
    if spec.name is not None:
        out += ["[problem]", f"name = {spec.name}", ""]
    out += ["[space]", f"dim = {spec.dim}", f"metric = {spec.metric}", ""]
    out += ["[tnorm]", f"kind = {spec.tnorm}", ""]
    out += ["[fuzzy]", f"kind = {spec.fuzzy}", ""]
    if spec.zeta_kind is not None:
        out += ["[zeta]", f"kind = {spec.zeta_kind}"]
        if spec.zeta_k is not None:
            out.append(f"k = {_num(spec.zeta_k)}")
        out.append("")
    if spec.map is not None:
        out += ["[map]", f"matrix = {_mat(spec.map.matrix)}", f"offset = {_vec(spec.map.offset)}", ""]
    if spec.multimap is not None:
        out.append("[multimap]")
        out += [f"branch = {_mat(b.matrix)} | {_vec(b.offset)}" for b in spec.multimap]
        out.append("")
    if spec.sequence is not None:
        out += ["[sequence]", f"kind = {spec.sequence.kind}", f"terms = {spec.sequence.terms}", ""]
    out.append("[solver]")
    out.append(f"method = {spec.method}")
    if spec.x0 is not None:
        out.append(f"x0 = {_vec(spec.x0)}")
    out += [f"tol = {_num(spec.tol)}", f"max_iter = {spec.max_iter}", f"rho_ref = {_num(spec.rho_ref)}",
            f"uniqueness_starts = {spec.uniqueness_starts}", ""]
    out += ["[sample]", f"pair_samples = {spec.pair_samples}", f"rho_grid = {_vec(spec.rho_grid)}"]
    if spec.seed is not None:
        out.append(f"seed = {spec.seed}")
    out += [f"box = {_vec(spec.box)}", ""]
    if spec.set_a is not None:
        out += ["[sets]", f"A = [{_mat(spec.set_a)}]", f"B = [{_mat(spec.set_b)}]", ""]
    out += ["[diagnostics]", f"eps = {_num(spec.diag_eps)}", f"rho = {_num(spec.diag_rho)}",
            f"p_max = {spec.diag_p_max}", ""]
    return "\n".join(out)
