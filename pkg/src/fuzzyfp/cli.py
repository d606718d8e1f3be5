"""Command-line front end.

Exit codes: 0 success / converged, 1 I/O error, 2 counterexample, failed
hypothesis or invalid input, 3 iteration limit reached without convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from . import contraction as ctr
from .demos import demo_names, demo_text
from .errors import FuzzyFPError
from .export import fmt, kv_block, sequence_csv, trace_csv
from .fuzzy_metric import classify_sequence, euclidean, harmonic_partial_sums, standard_from_metric
from .hausdorff import FiniteCompactSet, hausdorff_eval
from .problem import ProblemSpec, parse_problem, render_problem, validate
from .solver import (
    CONVERGED,
    HYPOTHESIS_FAILED,
    MAX_ITER_EXCEEDED,
    Certificate,
    OrbitTrace,
    SolverConfig,
    solve_classic,
    solve_multi,
    solve_single,
)
from .tnorm import check_tnorm_axioms, get_tnorm, probe_h_type

EXIT_OK = 0
EXIT_IO = 1
EXIT_FAILED = 2
EXIT_NO_CONVERGENCE = 3

SEED_ENV = "FFP_SEED"


def _r(x) -> str:
    return repr(float(x))


def effective_seed(spec: ProblemSpec) -> int:
    if spec.seed is not None:
        return spec.seed
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


@dataclasses.dataclass
class Problem:
    """Library objects built from a :class:`ProblemSpec`."""

    spec: ProblemSpec
    seed: int
    space: object
    fm: object
    zeta: object = None
    f: object = None
    S: object = None

    @classmethod
    def build(cls, spec: ProblemSpec) -> "Problem":
        space = euclidean(spec.dim)
        fm = standard_from_metric(space, get_tnorm(spec.tnorm))
        p = cls(spec, effective_seed(spec), space, fm)
        if spec.zeta_kind is not None:
            p.zeta = ctr.linear(spec.zeta_k)
        if spec.map is not None:
            p.f = ctr.affine(spec.map.matrix, spec.map.offset)
        if spec.multimap is not None:
            p.S = ctr.MultiMap(tuple(ctr.affine(b.matrix, b.offset) for b in spec.multimap))
        return p

    def config(self) -> SolverConfig:
        s = self.spec
        return SolverConfig(s.start(), s.tol, s.max_iter, s.rho_ref, s.uniqueness_starts,
                            self.seed, s.box, s.diag_eps, s.diag_p_max)


def _checks(p: Problem, report: list, kv: list, *, contraction: bool = True) -> bool:
    """Run t-norm, scale-function and contraction checks; True when all pass."""
    spec = p.spec
    ok = True
    axioms = check_tnorm_axioms(p.fm.tnorm, 100)
    report.append(f"t-norm {spec.tnorm}: axioms {'PASS' if axioms.passed else 'FAIL'} on 101-point grid")
    report += ["  " + line for line in axioms.lines()]
    kv.append(("tnorm_axioms", "pass" if axioms.passed else "fail"))
    ok &= axioms.passed

    h = probe_h_type(p.fm.tnorm)
    note = "no falsification within bounds" if h.holds else (
        f"falsified: n={h.witness.n} rho={_r(h.witness.rho)} eps={_r(h.witness.eps)}")
    report.append(f"t-norm {spec.tnorm}: H-type probe {note} (informational)")
    kv.append(("h_type", "not_falsified" if h.holds else "falsified"))

    if p.zeta is None:
        return ok
    pi = ctr.probe_pi_membership(p.zeta)
    line = f"zeta linear k={_r(spec.zeta_k)}: limit-to-zero probe {'PASS' if pi.member else 'FAIL'}"
    if pi.witness is not None:
        line += f"  witness: rho={_r(pi.witness.rho)} n={pi.witness.n} value={_r(pi.witness.value)}"
    report.append(line)
    kv.append(("pi_member", "pass" if pi.member else "fail"))
    ok &= pi.member

    if not contraction:
        return ok
    args = (spec.pair_samples, spec.rho_grid, p.seed)
    if p.S is not None:
        rep = ctr.verify_multi_contraction(p.fm, p.S, p.zeta, *args, box=spec.box)
    elif spec.method == "classic":
        rep = ctr.verify_metric_condition(p.space, p.f, p.zeta, *args, box=spec.box)
    else:
        rep = ctr.verify_single_contraction(p.fm, p.f, p.zeta, *args, box=spec.box)
    report.append(rep.line())
    _verification_kv(rep, kv)
    return ok and rep.passed


def _verification_kv(rep, kv):
    kv.append(("verification", "pass" if rep.passed else "fail"))
    kv.append(("verification_checks", rep.checked))
    if rep.counterexample is not None:
        c = rep.counterexample
        kv += [("counterexample_sample", c.sample), ("counterexample_u", c.u), ("counterexample_v", c.v),
               ("counterexample_rho", c.rho), ("counterexample_lhs", c.lhs), ("counterexample_rhs", c.rhs)]


def _sets_report(p: Problem, report, kv):
    spec = p.spec
    if spec.set_a is None:
        return
    A = FiniteCompactSet(spec.set_a, spec.dim)
    B = FiniteCompactSet(spec.set_b, spec.dim)
    for rho in spec.rho_grid:
        val = hausdorff_eval(p.fm, A, B, rho)
        report.append(f"Hausdorff fuzzy metric H(A, B, {rho!r}) = {_r(val)}")
        kv.append((f"hausdorff_rho_{rho!r}", val))


def _sequence(p: Problem, report, kv, files):
    spec = p.spec
    seq = harmonic_partial_sums(spec.sequence.terms)
    v = classify_sequence(p.fm, seq, spec.diag_eps, spec.diag_rho, spec.diag_p_max)
    report.append(f"sequence {spec.sequence.kind} ({v.length} terms) at eps={_r(v.eps)} rho={_r(v.rho)}: "
                  f"classification {v.classification}")
    report.append(f"  g-cauchy (p <= {v.p_max}): {'certified' if v.g_cauchy else 'failed'} tail start N={v.g_cauchy_N}"
                  + (f" witness {v.g_cauchy_witness}" if v.g_cauchy_witness else ""))
    report.append(f"  cauchy: {'certified' if v.cauchy else 'failed'} tail start N={v.cauchy_N}"
                  + (f" witness {v.cauchy_witness}" if v.cauchy_witness else ""))
    kv += [("classification", v.classification), ("g_cauchy", "certified" if v.g_cauchy else "failed"),
           ("g_cauchy_N", v.g_cauchy_N), ("cauchy", "certified" if v.cauchy else "failed"),
           ("cauchy_N", v.cauchy_N)]
    if v.cauchy_witness:
        kv.append(("cauchy_witness", v.cauchy_witness))
    if v.g_cauchy_witness:
        kv.append(("g_cauchy_witness", v.g_cauchy_witness))
    files["trace.csv"] = sequence_csv(p.fm, seq, v)


def _certificate_kv(cert, kv):
    kv += [("status", cert.status), ("iterations", cert.iterations)]
    if cert.fixed_point is not None:
        kv.append(("fixed_point", cert.fixed_point))
    if cert.final_residual is not None:
        kv.append(("final_residual", cert.final_residual))
    g = cert.diagnostics.get("g_cauchy")
    if g is not None:
        kv.append(("g_cauchy_diagnostic", "pass" if g.passed else "fail"))
        for q, n in g.tail_start_by_p.items():
            kv.append((f"g_cauchy_N_p{q}", "none" if n is None else n))
    for key in ("inclusion_residual", "selection_scale", "step_inequality_min_margin"):
        if cert.diagnostics.get(key) is not None:
            kv.append((key, cert.diagnostics[key]))
    u = cert.uniqueness_check
    if u is not None:
        kv += [("uniqueness_starts", len(u["starts"])), ("uniqueness_max_distance", u["max_pairwise_distance"]),
               ("uniqueness_agree", "yes" if u["agree"] else "no")]


def _certificate_report(cert, report):
    report.append(f"status: {cert.status} after {cert.iterations} iterations")
    if cert.fixed_point is not None:
        report.append(f"fixed point: {[float(x) for x in cert.fixed_point]}")
    if cert.final_residual is not None:
        report.append(f"final residual 1 - M(z, image, rho_ref): {_r(cert.final_residual)}")
    g = cert.diagnostics.get("g_cauchy")
    if g is not None:
        report.append(f"G-Cauchy orbit diagnostic (eps={_r(g.eps)}): {'pass' if g.passed else 'fail'} "
                      f"tail starts {g.tail_start_by_p}")
    if cert.uniqueness_check is not None:
        u = cert.uniqueness_check
        report.append(f"uniqueness: {len(u['starts'])} extra starts, max endpoint distance "
                      f"{_r(u['max_pairwise_distance'])} ({'agree' if u['agree'] else 'disagree'})")


def run(command: str, spec: ProblemSpec, output_dir, *, skip_verify: bool = False, out=None) -> int:
    """Execute ``verify``, ``solve`` or ``trace`` and write report.txt, certificate.kv, trace.csv."""
    out = out if out is not None else sys.stdout
    if command not in ("verify", "solve", "trace"):
        raise ValueError(f"unknown command {command!r}")
    p = Problem.build(spec)
    report = [f"problem: {spec.name or 'unnamed'} ({spec.kind}, dim={spec.dim}, seed={p.seed})"]
    kv = [("command", command), ("problem", spec.name or "unnamed"), ("seed", p.seed)]
    files = {}
    code = EXIT_OK

    if command == "verify":
        ok = _checks(p, report, kv)
        if spec.sequence is not None:
            _sequence(p, report, kv, files)
        _sets_report(p, report, kv)
        kv.insert(3, ("status", "verified" if ok else "counterexample"))
        code = EXIT_OK if ok else EXIT_FAILED
    elif spec.sequence is not None:
        _checks(p, report, kv)
        _sequence(p, report, kv, files)
    else:
        ok = True
        if not skip_verify:
            ok = _checks(p, report, kv, contraction=spec.method != "classic")
        cfg = p.config()
        if not ok:
            cert = Certificate(HYPOTHESIS_FAILED, None, None, OrbitTrace([np.array(cfg.x0)], []))
        elif p.S is not None:
            cert = solve_multi(p.fm, p.S, p.zeta, cfg)
        elif spec.method == "classic":
            cert = solve_classic(p.space, p.f, p.zeta, cfg, verify=not skip_verify,
                                 pair_samples=spec.pair_samples, rho_grid=spec.rho_grid)
            if cert.verification is not None:
                report.append(cert.verification.line())
                _verification_kv(cert.verification, kv)
        else:
            cert = solve_single(p.fm, p.f, cfg)
        _certificate_report(cert, report)
        _certificate_kv(cert, kv)
        _sets_report(p, report, kv)
        tr = cert.trace
        flags = None
        if command == "trace" and len(tr.iterates) >= 2:
            v = classify_sequence(p.fm, tr.iterates, spec.diag_eps, spec.diag_rho, spec.diag_p_max)
            n = np.arange(len(tr.iterates))
            flags = {"g_cauchy": n >= v.g_cauchy_N, "cauchy": n >= v.cauchy_N}
            kv += [("trace_g_cauchy", "certified" if v.g_cauchy else "failed"),
                   ("trace_cauchy", "certified" if v.cauchy else "failed")]
        elif command == "trace":
            flags = {"g_cauchy": [""] * len(tr.iterates), "cauchy": [""] * len(tr.iterates)}
        files["trace.csv"] = trace_csv(tr.iterates, tr.step_residuals,
                                       branch_index=tr.selection_witnesses, flags=flags)
        code = {CONVERGED: EXIT_OK, MAX_ITER_EXCEEDED: EXIT_NO_CONVERGENCE,
                HYPOTHESIS_FAILED: EXIT_FAILED}[cert.status]

    files["report.txt"] = "\n".join(report) + "\n"
    files["certificate.kv"] = kv_block(kv)
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text)
    out.write(files["report.txt"])
    return code


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("problem", nargs="?", help="problem file")
    src.add_argument("--demo", choices=demo_names(), help="use a built-in demo problem")
    common.add_argument("--output", default="ffp-out", help="output directory (default: ffp-out)")
    common.add_argument("--seed", type=int, help="sampling seed; overrides the file and $FFP_SEED")
    common.add_argument("--tol", type=float, help="residual tolerance in (0, 1)")
    common.add_argument("--max-iter", type=int, dest="max_iter", help="iteration limit")
    common.add_argument("--skip-verify", action="store_true", help="iterate without checking hypotheses first")

    parser = argparse.ArgumentParser(prog="ffp", description="Fixed points in fuzzy metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="check the t-norm, scale function and contraction")
    sub.add_parser("solve", parents=[common], help="verify, then iterate to a fixed point")
    sub.add_parser("trace", parents=[common], help="solve and write G-Cauchy diagnostic columns")
    sub.add_parser("demos", help="list built-in demos")
    r = sub.add_parser("render", help="print a problem file in canonical form")
    rsrc = r.add_mutually_exclusive_group(required=True)
    rsrc.add_argument("problem", nargs="?")
    rsrc.add_argument("--demo", choices=demo_names())
    return parser


def _load(args) -> ProblemSpec:
    text = demo_text(args.demo) if args.demo else Path(args.problem).read_text()
    return parse_problem(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "demos":
        print("\n".join(demo_names()))
        return EXIT_OK
    try:
        spec = _load(args)
        if args.command == "render":
            sys.stdout.write(render_problem(spec))
            return EXIT_OK
        overrides = {k: getattr(args, k) for k in ("seed", "tol", "max_iter") if getattr(args, k) is not None}
        if overrides:
            spec = validate(dataclasses.replace(spec, **overrides))
        return run(args.command, spec, args.output, skip_verify=args.skip_verify)
    except OSError as exc:
        print(f"ffp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FuzzyFPError as exc:
        print(f"ffp: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
