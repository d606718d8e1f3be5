import csv
import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyfp.cli import main, run
from fuzzyfp.demos import demo, demo_names, demo_text
from fuzzyfp.problem import AffineSpec, ParseError, ProblemSpec, ValidationError, parse_problem, render_problem

MINIMAL = """
[space] dim=1
[zeta] kind=linear k=0.5
[map] matrix=0.5 offset=1
[solver] x0=0 tol=1e-9
"""


def read_kv(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_minimal_problem():
    spec = parse_problem(MINIMAL)
    assert spec.dim == 1 and spec.zeta_k == 0.5
    assert spec.map == AffineSpec(((0.5,),), (1.0,))
    assert spec.x0 == (0.0,) and spec.tol == 1e-9
    assert spec.kind == "map"


def test_one_pair_per_line_is_equivalent():
    text = "[space]\ndim = 1\n[zeta]\nkind = linear\nk = 0.5\n[map]\nmatrix = 0.5\noffset = 1\n[solver]\nx0 = 0\ntol = 1e-9\n"
    assert parse_problem(text) == parse_problem(MINIMAL)


def test_comments_ignored():
    assert parse_problem("# header\n" + MINIMAL.replace("[map]", "[map] # affine\n")) == parse_problem(MINIMAL)


def test_no_mapping():
    with pytest.raises(ValidationError, match="no mapping"):
        parse_problem("[space] dim=1\n[zeta] kind=linear k=0.5\n")


def test_dimension_mismatch():
    with pytest.raises(ValidationError, match="dimension mismatch"):
        parse_problem(MINIMAL.replace("matrix=0.5", "matrix=0.5, 0.1"))
    with pytest.raises(ValidationError, match="dimension mismatch"):
        parse_problem(MINIMAL.replace("x0=0", "x0=0, 0"))


def test_duplicate_mapping_sections():
    with pytest.raises(ValidationError, match="duplicate mapping"):
        parse_problem(MINIMAL + "[multimap] branch = 0.5 | 0\n")
    with pytest.raises(ValidationError, match="duplicate section"):
        parse_problem(MINIMAL + "[map] matrix=1 offset=0\n")


def test_tol_out_of_range():
    with pytest.raises(ValidationError, match="solver.tol"):
        parse_problem(MINIMAL.replace("tol=1e-9", "tol=1.5"))


@pytest.mark.parametrize("text, line, field", [
    (MINIMAL.replace("tol=1e-9", "tol=1e-9 colour=red"), 5, "solver.colour"),
    (MINIMAL.replace("k=0.5", "k=half"), 3, "zeta.k"),
    (MINIMAL.replace("matrix=0.5", "matrix=0.5,,1"), 4, "map.matrix"),
    (MINIMAL.replace("[solver] x0=0", "[solver] x0=0 x0=1"), 5, "solver.x0"),
])
def test_parse_errors_name_line_and_field(text, line, field):
    with pytest.raises(ParseError) as exc:
        parse_problem(text)
    assert exc.value.line == line and exc.value.field == field
    assert f"line {line}" in str(exc.value) and field in str(exc.value)


def test_syntax_errors():
    with pytest.raises(ParseError, match="before any section"):
        parse_problem("dim = 1\n")
    with pytest.raises(ParseError, match="unknown section"):
        parse_problem("[nonsense]\n")
    with pytest.raises(ParseError, match="key = value"):
        parse_problem("[space] dim 1\n")


def test_semantic_checks():
    with pytest.raises(ValidationError, match="zeta.k"):
        parse_problem(MINIMAL.replace("k=0.5", "k=-1"))
    with pytest.raises(ValidationError, match="finite"):
        parse_problem(MINIMAL.replace("offset=1", "offset=inf"))
    with pytest.raises(ValidationError, match="zeta"):
        parse_problem("[space] dim=1\n[map] matrix=0.5 offset=1\n")


def test_sets_section():
    spec = parse_problem(MINIMAL + "[sets] A = [0; 1] B = [0; 2]\n")
    assert spec.set_a == ((0.0,), (1.0,)) and spec.set_b == ((0.0,), (2.0,))
    with pytest.raises(ValidationError, match="closer than"):
        parse_problem(MINIMAL + "[sets] A = [0; 1e-13] B = [0]\n")
    with pytest.raises(ParseError, match="written as"):
        parse_problem(MINIMAL + "[sets] A = 0; 1 B = [0]\n")
    with pytest.raises(ValidationError, match="both"):
        parse_problem(MINIMAL + "[sets] A = [0]\n")


@pytest.mark.parametrize("name", demo_names())
def test_demo_round_trip(name):
    spec = demo(name)
    assert parse_problem(render_problem(spec)) == spec


finite = st.floats(-1e6, 1e6, allow_subnormal=False)


@st.composite
def specs(draw):
    dim = draw(st.integers(1, 3))
    vec = st.tuples(*[finite] * dim)
    aff = st.builds(AffineSpec, st.tuples(*[vec] * dim), vec)
    kind = draw(st.sampled_from(["map", "multimap"]))
    mapping = {"map": draw(aff)} if kind == "map" else {"multimap": tuple(draw(st.lists(aff, min_size=1, max_size=3)))}
    return ProblemSpec(
        dim=dim,
        tnorm=draw(st.sampled_from(["lukasiewicz", "product", "minimum"])),
        zeta_kind="linear",
        zeta_k=draw(st.floats(1e-6, 10)),
        x0=draw(st.none() | vec),
        tol=draw(st.floats(1e-15, 0.5)),
        max_iter=draw(st.integers(1, 10**6)),
        rho_ref=draw(st.floats(1e-6, 1e6)),
        uniqueness_starts=draw(st.integers(0, 5)),
        pair_samples=draw(st.integers(1, 5000)),
        rho_grid=tuple(draw(st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=6))),
        seed=draw(st.none() | st.integers(0, 2**31)),
        diag_eps=draw(st.floats(0.001, 0.9)),
        diag_p_max=draw(st.integers(1, 9)),
        name=draw(st.none() | st.from_regex(r"[a-z][a-z0-9_]{0,10}", fullmatch=True)),
        **mapping,
    )


@settings(max_examples=150, deadline=None)
@given(specs())
def test_render_parse_round_trip(spec):
    assert parse_problem(render_problem(spec)) == spec


def test_run_solve_shifted_halving(tmp_path, capsys):
    code = run("solve", demo("shifted_halving"), tmp_path)
    assert code == 0
    kv = read_kv(tmp_path / "certificate.kv")
    assert kv["status"] == "converged"
    assert abs(float(kv["fixed_point"]) - 2.0) <= 1e-9
    assert "metric contraction condition: PASS" in (tmp_path / "report.txt").read_text()
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    assert list(rows[0]) == ["n", "x0", "theta_step"]
    assert float(rows[-1]["x0"]) == float(kv["fixed_point"])
    assert "status: converged" in capsys.readouterr().out


def test_run_verify_expanding(tmp_path):
    assert run("verify", demo("expanding"), tmp_path) == 2
    kv = read_kv(tmp_path / "certificate.kv")
    assert kv["status"] == "counterexample" and kv["verification"] == "fail"
    assert float(kv["counterexample_lhs"]) < float(kv["counterexample_rhs"])
    assert "counterexample" in (tmp_path / "report.txt").read_text()


def test_run_translation_outcomes(tmp_path):
    assert run("solve", demo("translation"), tmp_path / "a") == 2
    assert read_kv(tmp_path / "a" / "certificate.kv")["status"] == "hypothesis_failed"
    assert run("solve", demo("translation"), tmp_path / "b", skip_verify=True) == 3
    assert read_kv(tmp_path / "b" / "certificate.kv")["status"] == "max_iter_exceeded"


def test_run_multimap_trace(tmp_path):
    assert run("trace", demo("two_branch"), tmp_path) == 0
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    assert list(rows[0]) == ["n", "x0", "theta_step", "branch_index", "g_cauchy", "cauchy"]
    assert {r["branch_index"] for r in rows[:-1]} == {"1"}
    kv = read_kv(tmp_path / "certificate.kv")
    assert float(kv["inclusion_residual"]) <= 1e-9
    assert kv["hausdorff_rho_1.0"] == "0.5"


def test_trace_harmonic_flags(tmp_path):
    assert run("trace", demo("harmonic"), tmp_path) == 0
    kv = read_kv(tmp_path / "certificate.kv")
    assert kv["g_cauchy"] == "certified" and kv["cauchy"] == "failed"
    n, m = map(int, kv["cauchy_witness"].split(","))
    assert m > n
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    assert len(rows) == 10000
    mid = rows[len(rows) // 2]
    assert mid["g_cauchy"] == "1" and mid["cauchy"] == "0"


def test_csv_round_trip_precision(tmp_path):
    run("solve", demo("halving"), tmp_path)
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    for n, r in enumerate(rows):
        assert float(r["x0"]) == 2.0 ** -n
        if r["theta_step"]:
            assert float(r["theta_step"]) == 1.0 / (1.0 + 2.0 ** (-n - 1))


def _outputs(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


@pytest.mark.parametrize("command", ["verify", "solve", "trace"])
def test_seeded_runs_byte_identical(tmp_path, command):
    spec = dataclasses.replace(demo("affine2d"), seed=7)
    run(command, spec, tmp_path / "a")
    run(command, spec, tmp_path / "b")
    assert _outputs(tmp_path / "a") == _outputs(tmp_path / "b")


def test_seed_precedence(tmp_path, monkeypatch):
    spec = dataclasses.replace(demo("halving"), seed=None)
    monkeypatch.setenv("FFP_SEED", "41")
    run("verify", spec, tmp_path / "env")
    assert read_kv(tmp_path / "env" / "certificate.kv")["seed"] == "41"
    assert main(["verify", "--demo", "halving", "--output", str(tmp_path / "file")]) == 0
    assert read_kv(tmp_path / "file" / "certificate.kv")["seed"] == "0"
    assert main(["verify", "--demo", "halving", "--seed", "5", "--output", str(tmp_path / "flag")]) == 0
    assert read_kv(tmp_path / "flag" / "certificate.kv")["seed"] == "5"


def test_main_flag_overrides(tmp_path):
    assert main(["solve", "--demo", "halving", "--tol", "1e-3", "--output", str(tmp_path)]) == 0
    assert int(read_kv(tmp_path / "certificate.kv")["iterations"]) < 15
    assert main(["solve", "--demo", "halving", "--max-iter", "3", "--output", str(tmp_path)]) == 3
    assert main(["solve", "--demo", "halving", "--tol", "2", "--output", str(tmp_path)]) == 2


def test_main_problem_file_and_errors(tmp_path, capsys):
    path = tmp_path / "p.ffp"
    path.write_text(MINIMAL)
    assert main(["solve", str(path), "--output", str(tmp_path / "out")]) == 0
    assert main(["solve", str(tmp_path / "missing.ffp"), "--output", str(tmp_path / "o")]) == 1
    path.write_text(MINIMAL.replace("k=0.5", "k=oops"))
    assert main(["verify", str(path), "--output", str(tmp_path / "o")]) == 2
    assert "zeta.k" in capsys.readouterr().err


def test_render_and_demos_commands(capsys):
    assert main(["demos"]) == 0
    assert "harmonic" in capsys.readouterr().out.split()
    assert main(["render", "--demo", "affine2d"]) == 0
    assert parse_problem(capsys.readouterr().out) == demo("affine2d")


def test_demo_text_unknown():
    with pytest.raises(KeyError):
        demo_text("nope")
