"""Command line interface.

Subcommands: classify a problem file, scan the model-family parameter
grid to CSV, run the cross-validation suites, or run oracle experiments.
Problem files are YAML with every complex number written as a two-element
[re, im] array; reports are JSON in the same convention.

Exit codes: 0 ok, 1 verify failure, 2 inadmissible input, 3 numerical
failure or verdict disagreement.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import yaml

from .errors import InadmissibleProblem, NumericalFailure, ProblemFileError
from .forms import ComplexQuadraticForm, Weight
from .toeplitz import ToeplitzProblem, Verdict, VerdictClass, canonical_map, classify_operator
from . import bergman, model, oracle, verify, weyl

EXIT_OK = 0
EXIT_VERIFY_FAILURE = 1
EXIT_INADMISSIBLE = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# problem file IO

def _complex_entry(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ProblemFileError(f"{where}: complex entries must be [re, im] number pairs")
    return complex(float(value[0]), float(value[1]))


def _complex_matrix(rows, n: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise ProblemFileError(f"{where}: expected {n} rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFileError(f"{where}[{i}]: expected {n} entries")
        for j, entry in enumerate(row):
            out[i, j] = _complex_entry(entry, f"{where}[{i}][{j}]")
    return out


def load_problem(path: str) -> ToeplitzProblem:
    """Parse a YAML problem file into a problem instance."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ProblemFileError(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ProblemFileError(f"{path}: top level must be a mapping")
    if "n" not in data:
        raise ProblemFileError("n: field is required")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ProblemFileError("n: must be a positive integer")
    phi = data.get("phi0")
    if not isinstance(phi, dict) or "hermitian" not in phi:
        raise ProblemFileError("phi0.hermitian: field is required")
    h = _complex_matrix(phi["hermitian"], n, "phi0.hermitian")
    zero = [[[0.0, 0.0]] * n for _ in range(n)]
    p = _complex_matrix(phi.get("pluriharmonic", zero), n, "phi0.pluriharmonic")
    qdata = data.get("q", {})
    if not isinstance(qdata, dict):
        raise ProblemFileError("q: must be a mapping")
    qxx = _complex_matrix(qdata.get("xx", zero), n, "q.xx")
    qxbx = _complex_matrix(qdata.get("xbarx", zero), n, "q.xbarx")
    qxbxb = _complex_matrix(qdata.get("xbarxbar", zero), n, "q.xbarxbar")
    try:
        weight = Weight(h, p)
        q = ComplexQuadraticForm(qxx, qxbx, qxbxb)
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc
    return ToeplitzProblem(weight, q)


def _load_tolerance(path: str):
    with open(path) as fh:
        data = yaml.safe_load(fh)
    tols = data.get("tolerances") if isinstance(data, dict) else None
    if tols is None:
        return None
    value = tols.get("classification")
    return None if value is None else float(value)


# ---------------------------------------------------------------------------
# report serialization: complex numbers strictly as [re, im]

def _cpx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _cmatrix(m) -> list:
    return [[_cpx(v) for v in row] for row in np.asarray(m, dtype=complex)]


def build_report(problem: ToeplitzProblem, verdict: Verdict, elapsed: float) -> dict:
    report = {
        "verdict": verdict.verdict.value,
        "boundary": verdict.boundary,
        "margins": {
            name: {"verdict": sub.verdict.value, "margin": sub.margin, "scale": sub.scale}
            for name, sub in verdict.witnesses.items()
        },
        "timing_seconds": elapsed,
    }
    if verdict.verdict is VerdictClass.INADMISSIBLE:
        report["failures"] = list(verdict.admissibility.failures)
        return report
    report["kappa"] = _cmatrix(canonical_map(problem).k)
    symbol = weyl.weyl_symbol(problem)
    report["weyl_exponent"] = {
        "xx": _cmatrix(symbol.g.qxx),
        "xbarx": _cmatrix(symbol.g.qxbx),
        "xbarxbar": _cmatrix(symbol.g.qxbxb),
    }
    report["weyl_prefactor_modulus"] = symbol.prefactor_modulus
    f = bergman.bergman_exponent(problem.reduced())
    report["bergman_exponent"] = {
        "xx": _cmatrix(f.fxx),
        "xz": _cmatrix(f.fxz),
        "zz": _cmatrix(f.fzz),
    }
    return report


# ---------------------------------------------------------------------------
# classify

def _cmd_classify(args) -> int:
    try:
        problem = load_problem(args.file)
        tol = _load_tolerance(args.file)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    start = time.perf_counter()
    try:
        verdict = classify_operator(problem, tol=tol)
        report = build_report(problem, verdict, time.perf_counter() - start)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps(report, indent=2, sort_keys=True))
    if verdict.verdict is VerdictClass.INADMISSIBLE:
        for line in verdict.admissibility.failures:
            print(f"inadmissible: {line}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan

def _parse_range(text: str, what: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{what}: expected a:b:steps")
    a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1 or (steps == 1 and a != b) or (steps > 1 and b <= a):
        raise ValueError(f"{what}: invalid range {text}")
    return np.linspace(a, b, steps)


def _parse_values(text: str, what: str) -> list:
    vals = [float(v) for v in text.split(",") if v != ""]
    if not vals:
        raise ValueError(f"{what}: empty list")
    if len(set(vals)) != len(vals):
        raise ValueError(f"{what}: duplicate values")
    return vals


def _scan_point(point):
    re_lam, im_lam, norm_a = (float(v) for v in point)
    inst = model.ModelInstance(1, complex(re_lam, im_lam), np.array([[norm_a]]))
    if not inst.is_admissible:
        return (re_lam, im_lam, norm_a, "inadmissible", math.nan)
    verdict = classify_operator(model.model_problem(inst))
    closed = model.classify_model(inst)
    mismatch = (
        verdict.verdict is not closed.verdict
        and verdict.witnesses["certificate"].confident
        and closed.witnesses["model"].confident
    )
    if mismatch:
        raise NumericalFailure(
            f"pipeline={verdict.verdict.value} but closed form={closed.verdict.value} "
            f"at lam={complex(re_lam, im_lam)}, ||A||={norm_a}"
        )
    return (re_lam, im_lam, norm_a, verdict.verdict.value, verdict.margin)


def _cmd_scan(args) -> int:
    try:
        res = _parse_range(args.lambda_re, "--lambda-re")
        ims = _parse_values(args.lambda_im, "--lambda-im")
        nas = _parse_range(args.norm_a, "--norm-a")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    points = [(re, im, na) for re in res for im in ims for na in nas]
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                rows = list(pool.map(_scan_point, points, chunksize=32))
        else:
            rows = [_scan_point(p) for p in points]
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_lambda", "im_lambda", "normA", "verdict", "margin"])
        for re_lam, im_lam, norm_a, verdict, margin in rows:
            writer.writerow([repr(re_lam), repr(im_lam), repr(norm_a), verdict, repr(margin)])
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _cmd_verify(args) -> int:
    names = [args.suite] if args.suite else None
    try:
        results = verify.run_suites(names, seed=args.seed, n=args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    failed = []
    for res in results:
        worst = res.worst
        status = "pass" if res.passed else "FAIL"
        detail = f"worst {worst.label}: {worst.value:.3e} (bound {worst.bound:.1e})" if worst else ""
        print(f"{res.name}: {status}  {detail}")
        if not res.passed:
            failed.append(res.name)
            for c in res.checks:
                if not c.ok:
                    print(f"  FAIL {c.label}: {c.value:.6e} > {c.bound:.1e}")
    if failed:
        print(f"failing suites: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle experiments

def _cmd_oracle(args) -> int:
    try:
        problem = load_problem(args.file)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    sizes = [int(v) for v in args.sizes.split(",")]
    try:
        problem.require_admissible()
        out = {"experiment": args.experiment}
        if args.experiment == "trend":
            norms = oracle.norm_trend(problem, sizes)
            out.update(sizes=sorted(sizes), norms=norms, plateau=oracle.is_plateau(norms))
        elif args.experiment == "decay":
            est = oracle.singular_decay(problem, max(sizes))
            out.update(size=max(sizes), ratio=est.ratio,
                       singular_values=[float(s) for s in est.singular_values[:12]])
        elif args.experiment == "weyl":
            symbol = weyl.weyl_symbol(problem)
            points = [np.zeros(problem.n, dtype=complex)]
            for r in (1.0, 2.0):
                pt = np.zeros(problem.n, dtype=complex)
                pt[0] = r
                points.append(pt)
            rows = []
            for pt in points:
                num = oracle.numeric_weyl(problem, pt)
                ref = symbol.evaluate(pt)
                rows.append({
                    "x": [_cpx(v) for v in pt],
                    "numeric": _cpx(num),
                    "closed_form": _cpx(ref),
                    "rel_error": abs(num - ref) / max(abs(ref), 1e-300),
                })
            out["points"] = rows
            out["max_rel_error"] = max(r["rel_error"] for r in rows)
        elif args.experiment == "coherent":
            radii = [1.0, 2.0, 4.0]
            logs = []
            for r in radii:
                w = np.zeros(problem.n, dtype=complex)
                w[0] = r
                logs.append(float(np.log(oracle.numeric_coherent_norm(problem, w))))
            slope = float(np.polyfit(np.array(radii) ** 2, logs, 1)[0])
            f = bergman.bergman_exponent(problem.reduced())
            w = np.zeros(problem.n, dtype=complex)
            w[0] = 1.0
            predicted = bergman.growth_exponent(f, problem.reduced().weight, w) / 2.0
            out.update(radii=radii, log_norms=logs, slope=slope,
                       predicted_slope=predicted if math.isfinite(predicted) else "inf")
        print(json.dumps(out, indent=2, sort_keys=True))
        return EXIT_OK
    except InadmissibleProblem as exc:
        print(f"inadmissible: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


# ---------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bargtop",
        description="Classify Gaussian-symbol Toeplitz operators on Bargmann spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="classify a problem file")
    p_classify.add_argument("file")
    p_classify.set_defaults(fn=_cmd_classify)

    p_scan = sub.add_parser("scan", help="sweep the model-family grid to CSV")
    p_scan.add_argument("--lambda-re", required=True, metavar="A:B:STEPS")
    p_scan.add_argument("--lambda-im", default="0", metavar="V[,V...]")
    p_scan.add_argument("--norm-a", required=True, metavar="A:B:STEPS")
    p_scan.add_argument("-o", "--output", required=True)
    p_scan.add_argument("--workers", type=int, default=1)
    p_scan.set_defaults(fn=_cmd_scan)

    p_verify = sub.add_parser("verify", help="run cross-validation suites")
    p_verify.add_argument("--suite", choices=sorted(verify.SUITES), default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--n", type=int, choices=(1, 2), default=1)
    p_verify.set_defaults(fn=_cmd_verify)

    p_oracle = sub.add_parser("oracle", help="run a brute-force experiment")
    p_oracle.add_argument("file")
    p_oracle.add_argument("--experiment", required=True,
                          choices=("trend", "decay", "weyl", "coherent"))
    p_oracle.add_argument("-N", "--sizes", default="10,20,40")
    p_oracle.set_defaults(fn=_cmd_oracle)
    return parser


def _join_negative_values(argv):
    # argparse reads a value like "-1:0:3" as an option string; fold such
    # values into --flag=value form so negative grid bounds parse
    flags = {"--lambda-re", "--lambda-im", "--norm-a"}
    out = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in flags and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = make_parser().parse_args(_join_negative_values(list(argv)))
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
