"""Command-line surface: classify, sweep, simulate, verify.

Single reports are emitted as JSON, grids and trajectories as CSV (header
row, comma separator, '.' decimal).  Exit codes: 0 success, 2 input/parse
error, 3 precondition violation, 4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import checks
from .errors import MalformedDocumentError, ToolError, VerificationFailure
from .foldfold import (
    FixedPointClass,
    make_parameters,
    normal_parameters,
    report_from_params,
    return_map_analysis,
    stability_verdict,
)
from .integrator import IntegratorConfig, filippov_trajectory
from .sigma import SigmaKind, classify_point, default_tolerance, tangency_type
from .sliding import sliding_region_class
from .system import Box, load_system, validate


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    if dataclasses.is_dataclass(obj):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def _parse_floats(text, n, what):
    parts = text.split(",")
    if len(parts) != n:
        raise MalformedDocumentError(f"{what} needs {n} comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise MalformedDocumentError(f"{what}: {exc}") from exc


def _parse_range(text, what):
    parts = text.split(":")
    if len(parts) != 3:
        raise MalformedDocumentError(f"{what} must be min:max:count")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise MalformedDocumentError(f"{what}: {exc}") from exc
    if n < 2 or not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise MalformedDocumentError(f"{what}: need finite min < max and count >= 2")
    return lo, hi, n


def _read_system(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedDocumentError(f"cannot read {path}: {exc}") from exc
    return load_system(text)


def _write_out(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args):
    system = _read_system(args.system)
    point = _parse_floats(args.point, 3, "--point")
    tol = args.tol if args.tol is not None else default_tolerance(system)
    cls = classify_point(system, point, tol)
    report = {
        "system": system.name,
        "point": list(point),
        "tolerance": tol,
        "classification": {
            "kind": cls.kind.value,
            "witness": {"Xf": cls.witness[0], "Yf": cls.witness[1]},
        },
        "validation_warnings": validate(system, grid=21).warnings,
    }
    if cls.kind is SigmaKind.TANGENCY:
        info = tangency_type(system, point, tol)
        report["tangency"] = _jsonable(info)
        if info.ttype.value == "fold-fold":
            params = normal_parameters(system, point, tol)
            ff = report_from_params(params)
            report["foldfold"] = {
                "normal_parameters": _jsonable(params),
                "region": ff.region.value,
                "claim": ff.claim,
                "return_map": _jsonable(ff.analysis),
                "verdict": _jsonable(ff.verdict),
                "moduli": _jsonable(ff.moduli),
            }
            if ff.moduli is not None:
                from .foldfold import InstabilityReason

                report["foldfold"]["obstruction"] = (
                    InstabilityReason.MODULI_FOLIATION.value
                )
        else:
            report["verdict"] = _jsonable(stability_verdict(system, point, tol))
    else:
        report["verdict"] = _jsonable(stability_verdict(system, point, tol))
    if args.curves:
        from .sigma import tangency_curves

        curves = tangency_curves(system)
        report["tangency_curves"] = {
            side: [
                {"points": c.points.tolist(), "closed": c.closed, "complete": c.complete}
                for c in lst
            ]
            for side, lst in curves.items()
        }
    _write_out(json.dumps(report, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# sweep


@dataclass
class SweepSpec:
    alpha: tuple  # (lo, hi, n)
    beta: tuple
    gamma: float
    delta: float
    out: str | None = None

    def __post_init__(self):
        if self.alpha[2] < 2 or self.beta[2] < 2:
            raise MalformedDocumentError("sweep resolution must be >= 2 per axis")
        if not math.isfinite(self.gamma) or self.gamma == 0.0:
            raise MalformedDocumentError("gamma must be finite and nonzero")
        if self.delta not in (-1.0, 1.0):
            raise MalformedDocumentError("delta must be -1 or 1")


def _sweep_row(alpha, beta, gamma, delta):
    params = make_parameters(alpha, beta, gamma, delta)
    tag = sliding_region_class(params)
    fp_class = ""
    tau = ""
    if params.subtype.value == "invisible":
        analysis = return_map_analysis(params)
        fp_class = analysis.fixed_point_class.value
        if analysis.fixed_point_class is FixedPointClass.NONHYPERBOLIC_COMPLEX:
            tau = repr(analysis.tau)
    report = report_from_params(params)
    verdict = report.verdict
    reason = verdict.reason.kind.value if verdict.reason else ""
    return (
        f"{alpha!r},{beta!r},{gamma!r},{int(delta)},{tag.value},{tag.claim.value},"
        f"{fp_class},{verdict.kind.value},{reason},{tau}"
    )


def run_sweep(spec):
    alphas = np.linspace(*spec.alpha[:2], spec.alpha[2])
    betas = np.linspace(*spec.beta[:2], spec.beta[2])
    cells = [(float(a), float(b)) for a in alphas for b in betas]
    threads = max(1, int(os.environ.get("TOOL_THREADS", "1") or "1"))
    header = "alpha,beta,gamma,delta,region,claim,fixed_point_class,verdict,reason,tau"
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(
                pool.map(
                    lambda ab: _sweep_row(ab[0], ab[1], spec.gamma, spec.delta), cells
                )
            )
    else:
        rows = [_sweep_row(a, b, spec.gamma, spec.delta) for a, b in cells]
    return header + "\n" + "\n".join(rows) + "\n"


def cmd_sweep(args):
    spec = SweepSpec(
        alpha=_parse_range(args.alpha, "--alpha"),
        beta=_parse_range(args.beta, "--beta"),
        gamma=args.gamma,
        delta=args.delta,
        out=args.out,
    )
    _write_out(run_sweep(spec), spec.out)
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args):
    system = _read_system(args.system)
    p0 = _parse_floats(args.p0, 3, "--p0")
    box = Box.from_sequence(_parse_floats(args.box, 6, "--box")) if args.box else system.box
    cfg = IntegratorConfig(box=box)
    traj = filippov_trajectory(system, p0, args.T, cfg)
    lines = ["segment,mode,terminal,t,x,y,z"]
    for i, seg in enumerate(traj.segments):
        for t, p in zip(seg.times, seg.points):
            lines.append(
                f"{i},{seg.mode.value},{seg.terminal.value},"
                f"{t!r},{p[0]!r},{p[1]!r},{p[2]!r}"
            )
    lines.append(f"# status={traj.status} total_time={traj.total_time!r}")
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def _system_checks(path, point_text, seed):
    """Consistency checks for one concrete system at a two-fold candidate."""
    import numpy as np
    from .checks import CheckResult
    from .errors import IntegrationFailure, PreconditionError
    from .foldfold import FoldFoldSubtype
    from .integrator import fold_map_numeric, jacobian_numeric, return_map_numeric
    from .sigma import TangencyType

    system = _read_system(path)
    point = _parse_floats(point_text, 3, "--point") if point_text else (0.0, 0.0, 0.0)
    cfg = IntegratorConfig(box=system.box)
    results = []
    try:
        info = tangency_type(system, point)
        is_two_fold = info.ttype is TangencyType.FOLD_FOLD
        detail = info.ttype.value
    except PreconditionError as exc:
        is_two_fold = False
        detail = str(exc)
    results.append(
        CheckResult("two-fold classification", is_two_fold, 0.0 if is_two_fold else 1.0,
                    0.0, detail)
    )
    if not is_two_fold:
        return results

    rng = np.random.default_rng(seed)
    for side in ("X", "Y"):
        worst = 0.0
        failures = 0
        for _ in range(25):
            q = (
                point[0] + rng.uniform(-0.05, 0.05),
                point[1] + rng.uniform(-0.05, 0.05),
            )
            try:
                back = fold_map_numeric(
                    system, side, fold_map_numeric(system, side, q, cfg), cfg
                )
                worst = max(worst, math.hypot(back[0] - q[0], back[1] - q[1]))
            except IntegrationFailure:
                failures += 1
        passed = failures == 0 and worst <= 1e-6
        results.append(
            CheckResult(
                f"{side}-fold involution", passed, worst, 1e-6,
                f"{failures} failed flights" if failures else "",
            )
        )

    params = normal_parameters(system, point)
    try:
        jac = jacobian_numeric(
            lambda q: return_map_numeric(system, q, cfg),
            (point[0], point[1]),
            1e-3,
        )
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        results.append(
            CheckResult("return-map determinant", abs(det - 1.0) <= 1e-6,
                        abs(det - 1.0), 1e-6)
        )
        if params.subtype is FoldFoldSubtype.INVISIBLE:
            analysis = return_map_analysis(params)
            tr = jac[0, 0] + jac[1, 1]
            results.append(
                CheckResult(
                    "return-map trace vs normal parameters",
                    abs(tr - analysis.trace) <= 1e-3,
                    abs(tr - analysis.trace),
                    1e-3,
                )
            )
    except IntegrationFailure as exc:
        results.append(
            CheckResult("return-map spectrum", False, 1.0, 0.0, str(exc))
        )
    return results


def cmd_verify(args):
    if args.suite == "none" and not args.system:
        print("no checks selected")
        return 0
    if args.system:
        results = _system_checks(args.system, args.point, args.seed)
        if args.suite not in ("all", "none"):
            results += checks.run_suites([args.suite], scale=args.scale, seed=args.seed)
    else:
        names = list(checks.SUITES) if args.suite == "all" else [args.suite]
        results = checks.run_suites(names, scale=args.scale, seed=args.seed)
    lines = [r.row() for r in results]
    csv_lines = ["name,passed,residual,threshold,detail"]
    for r in results:
        csv_lines.append(
            f"{r.name},{int(r.passed)},{r.residual!r},{r.threshold!r},\"{r.detail}\""
        )
    print("\n".join(lines))
    if args.out:
        _write_out("\n".join(csv_lines) + "\n", args.out)
    if not all(r.passed for r in results):
        raise VerificationFailure("one or more checks failed")
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="foldatlas",
        description=(
            "Classify switching-surface singularities of 3D piecewise-smooth "
            "vector fields and cross-validate against numeric integration."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a surface point of a system")
    p.add_argument("system", help="system JSON file")
    p.add_argument("--point", required=True, help="x,y,z (z must be ~0)")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--curves", action="store_true",
                   help="embed sampled tangency curves in the report")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("sweep", help="normal-parameter atlas as CSV")
    p.add_argument("--alpha", required=True, help="min:max:count")
    p.add_argument("--beta", required=True, help="min:max:count")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--delta", type=float, default=-1.0, choices=(-1.0, 1.0))
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("simulate", help="Filippov trajectory as CSV")
    p.add_argument("system", help="system JSON file")
    p.add_argument("--p0", required=True, help="x,y,z initial point")
    p.add_argument("--T", type=float, default=10.0, help="horizon (<0 reverses time)")
    p.add_argument("--box", default=None, help="xmin,xmax,ymin,ymax,zmin,zmax")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="analytic-vs-numeric verification suite")
    p.add_argument("system", nargs="?", default=None,
                   help="optional system JSON file to check at --point")
    p.add_argument("--point", default=None, help="x,y,z (default origin)")
    p.add_argument(
        "--suite",
        default="all",
        choices=["all", "none", *checks.SUITES],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0,
                   help="sample-count multiplier (1.0 = CLI defaults)")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)
    return parser


_VALUE_OPTIONS = {
    "--point", "--p0", "--alpha", "--beta", "--gamma", "--delta", "--T",
    "--box", "--tol", "--seed", "--scale", "--suite", "--out",
}


def _merge_negative_values(argv):
    """Join '--opt value' pairs so that values like '-3:3:200' survive
    argparse's option detection."""
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in _VALUE_OPTIONS and i + 1 < len(argv):
            merged.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            merged.append(tok)
    return merged


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        return args.fn(args)
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
