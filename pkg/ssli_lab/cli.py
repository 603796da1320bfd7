"""Command-line front end.

JSON reports go to stdout, human-readable progress to stderr. Exit codes:
0 for "holds" or "hypotheses_unmet", 2 for "violation", 1 for bad input.
The ``run_*`` functions build the report documents and are shared with the
MCP tools.
"""

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from .config import SSLI_LAB_LOG_LEVEL, SSLI_LAB_SEED, ToleranceConfig
from .dominance import (
    coefficient_verdict,
    random_dominated_pair,
    random_entropy_pair,
    report_from_values,
    trace_path,
    verify_entropy_dominance,
    verify_ssli,
)
from .errors import GenerationFailure, InvalidInstance, SsliError
from .logfun import METHODS, derivative_report, entropy_g, f_squared_log
from .matrixapps import (
    SO_N_GRID,
    SO_N_RESTARTS,
    HenckyParams,
    becker_energy,
    geodesic_distance,
    geodesic_point,
    hencky_energy,
    kellogg_sector_check,
    log_euclidean_distance,
    matrix_log_spd,
    polar_stretch,
    so_n_optimality_gap,
    spd_invariants,
    verify_becker_monotonicity,
    verify_density_entropy,
    verify_matrix_ssli,
)
from .models import CampaignSummary, InstanceFile, ReportDocument, SsliReport
from .rootmap import phi
from .symfun import as_coefficient_vector

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2

VERIFY_MODES = ("ssli", "entropy", "matrix", "becker")
RANDOM_MODES = ("ssli", "entropy")
MATRIX_OPS = (
    "invariants",
    "log",
    "hencky",
    "becker",
    "ssli",
    "becker-monotonicity",
    "entropy",
    "geodesic-point",
    "geodesic-distance",
    "log-euclidean",
    "polar",
    "so-n-gap",
    "kellogg",
)


# ==== Instance I/O ====
def load_instance(path: str | Path) -> InstanceFile:
    """Read and validate an instance document; failures raise InvalidInstance."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InvalidInstance(f"{path}: {exc.strerror or exc}") from exc
    return parse_instance(raw)


def parse_instance(raw: Any) -> InstanceFile:
    try:
        return InstanceFile.model_validate(raw)
    except ValidationError as exc:
        messages = "; ".join(f"{'.'.join(map(str, err['loc'])) or 'instance'}: {err['msg']}" for err in exc.errors())
        raise InvalidInstance(messages) from exc


def resolve_tolerances(instance: InstanceFile | None = None, flags: dict[str, Any] | None = None) -> ToleranceConfig:
    """defaults < environment < instance file < command-line flags"""
    tol = ToleranceConfig.from_env()
    if instance is not None:
        tol = tol.merged(instance.tolerances)
    return tol.merged(flags)


def _instance_dict(instance: InstanceFile) -> dict[str, Any]:
    return instance.model_dump(exclude_none=True, exclude={"tolerances"})


def _report_values(report: SsliReport) -> dict[str, Any]:
    values = {
        "f_x": report.f_x,
        "f_y": report.f_y,
        "margin": report.margin,
        "per_k_slack": report.verdict.per_k_slack,
        "last_gap": report.verdict.last_gap,
        "strict": report.strict,
        "functional": report.functional,
    }
    if report.hencky is not None:
        values["hencky"] = report.hencky.model_dump()
    return values


def _document(command: str, instance: dict[str, Any] | None, report: SsliReport) -> ReportDocument:
    return ReportDocument(
        command=command,
        instance=instance,
        verdict=report.verdict,
        values=_report_values(report),
        status=report.status,
    )


# ==== Runners ====
def _verify_coefficients(instance: InstanceFile, mode: str, tol: ToleranceConfig) -> SsliReport:
    ex, ey = as_coefficient_vector(instance.e_x), as_coefficient_vector(instance.e_y)
    if mode == "ssli":
        verdict = coefficient_verdict(ex, ey, ex.size, tol)
        return report_from_values(verdict, f_squared_log(phi(ex, tol)).value, f_squared_log(phi(ey, tol)).value, tol)
    if mode == "entropy":
        verdict = coefficient_verdict(ex, ey, 1, tol)
        return report_from_values(verdict, entropy_g(phi(ex, tol)).value, entropy_g(phi(ey, tol)).value, tol, functional="entropy")
    raise InvalidInstance(f"mode {mode!r} needs a vector or matrix instance")


def run_verify(
    instance: InstanceFile,
    mode: str = "ssli",
    tol: ToleranceConfig | None = None,
    hencky: HenckyParams | None = None,
) -> ReportDocument:
    if mode not in VERIFY_MODES:
        raise InvalidInstance(f"unknown mode {mode!r}; expected one of {', '.join(VERIFY_MODES)}")
    tol = tol or resolve_tolerances(instance)
    form = instance.form
    if form == "coefficients":
        report = _verify_coefficients(instance, mode, tol)
    elif form == "vector":
        if mode == "ssli":
            report = verify_ssli(instance.x, instance.y, tol)
        elif mode == "entropy":
            report = verify_entropy_dominance(instance.x, instance.y, tol)
        elif mode == "matrix":
            report = verify_matrix_ssli(np.diag(instance.x), np.diag(instance.y), tol, hencky)
        else:
            report = verify_becker_monotonicity(np.diag(instance.x), np.diag(instance.y), tol)
    else:
        if instance.matrix_v is None:
            raise InvalidInstance("verification needs both matrix_u and matrix_v")
        u, v = instance.matrix_u, instance.matrix_v
        if mode in ("ssli", "matrix"):
            report = verify_matrix_ssli(u, v, tol, hencky)
        elif mode == "entropy":
            report = verify_density_entropy(u, v, tol)
        else:
            report = verify_becker_monotonicity(u, v, tol)
    log.info("verify[%s]: %s (margin %.6g)", mode, report.status, report.margin)
    return _document("verify", _instance_dict(instance), report)


def run_derivative(
    e: Sequence[float],
    ks: Iterable[int] | None = None,
    methods: Iterable[str] = METHODS,
    tol: ToleranceConfig | None = None,
) -> ReportDocument:
    tol = tol or resolve_tolerances()
    arr = as_coefficient_vector(e)
    ks = list(ks) if ks is not None else list(range(1, arr.size))
    methods = tuple(methods)
    reports = [derivative_report(arr, k, methods, tol) for k in ks]
    for r in reports:
        log.info("d f/d e_%d: %s", r.k, ", ".join(f"{name}={value:.10g}" for name, value in r.present().items()))
    scales = {r.contour_scale for r in reports if r.contour_scale is not None}
    values: dict[str, Any] = {"methods": list(methods)}
    if scales:
        values["contour_normalization"] = {"c": scales.pop(), "rule": "z_hat = z / e_n^(1/n)"}
    return ReportDocument(command="derivative", instance={"e": arr.tolist()}, derivatives=reports, values=values)


def write_trace_csv(path: str | Path, rows) -> None:
    """Header s,e_1..e_n,f,discriminant; every number with 17 significant digits."""
    rows = list(rows)
    n = len(rows[0].e) if rows else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", *(f"e_{k}" for k in range(1, n + 1)), "f", "discriminant"])
        for row in rows:
            writer.writerow(f"{v:.17g}" for v in (row.s, *row.e, row.f_value, row.discriminant))


def run_path(
    instance: InstanceFile,
    samples: int = 101,
    csv_path: str | Path | None = None,
    tol: ToleranceConfig | None = None,
) -> ReportDocument:
    if instance.form != "vector":
        raise InvalidInstance("path tracing needs an instance with x and y")
    tol = tol or resolve_tolerances(instance)
    trace = trace_path(instance.x, instance.y, samples, tol)
    if csv_path is not None:
        write_trace_csv(csv_path, trace.samples)
        log.info("wrote %d rows to %s", len(trace.samples), csv_path)
    values = {
        "samples": len(trace.samples),
        "monotone": trace.monotone,
        "max_drop": trace.max_drop,
        "degenerate_s": trace.degenerate_s,
        "f_start": trace.samples[0].f_value,
        "f_end": trace.samples[-1].f_value,
    }
    return ReportDocument(
        command="path",
        instance=_instance_dict(instance),
        values=values,
        trace_csv_path=str(csv_path) if csv_path is not None else None,
        status="holds" if trace.monotone else "violation",
    )


def _campaign_item(index: int, n: int, seed: int, spread: float, mode: str, tol: ToleranceConfig) -> tuple[int, SsliReport | None]:
    generate, check = (random_dominated_pair, verify_ssli) if mode == "ssli" else (random_entropy_pair, verify_entropy_dominance)
    try:
        x, y = generate(n, seed, spread, tol)
    except GenerationFailure as exc:
        log.debug("instance %d: %s", index, exc)
        return index, None
    return index, check(x, y, tol)


def run_random(
    n: int,
    count: int,
    seed: int = SSLI_LAB_SEED,
    spread: float = 0.5,
    mode: str = "ssli",
    tol: ToleranceConfig | None = None,
    workers: int = 1,
) -> ReportDocument:
    """Fuzz campaign; instance i is generated from the i-th child of SeedSequence(seed)."""
    if n < 2 or count < 1:
        raise InvalidInstance("random campaigns need n >= 2 and count >= 1")
    if mode not in RANDOM_MODES:
        raise InvalidInstance(f"unknown mode {mode!r}; expected one of {', '.join(RANDOM_MODES)}")
    if workers < 1:
        raise InvalidInstance("workers must be >= 1")
    tol = tol or resolve_tolerances()
    seeds = [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]

    def work(i: int) -> tuple[int, SsliReport | None]:
        return _campaign_item(i, n, seeds[i], spread, mode, tol)

    if workers == 1:
        results = [work(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, range(count)))
    results.sort(key=lambda item: item[0])

    reports = [r for _, r in results if r is not None]
    failures = count - len(reports)
    if not reports:
        raise GenerationFailure(f"all {count} instances failed to generate")
    margins = [r.margin for r in reports if r.verdict.dominated]
    summary = CampaignSummary(
        generated=len(reports),
        holds=sum(r.status == "holds" for r in reports),
        hypotheses_unmet=sum(r.status == "hypotheses_unmet" for r in reports),
        violations=sum(r.status == "violation" for r in reports),
        generation_failures=failures,
        min_margin=min(margins, default=None),
    )
    log.info(
        "random[%s] n=%d: %d generated, %d holds, %d unmet, %d violations, %d generation failures",
        mode, n, summary.generated, summary.holds, summary.hypotheses_unmet, summary.violations, failures,
    )
    return ReportDocument(
        command="random",
        instance={"n": n, "count": count, "seed": seed, "spread": spread, "mode": mode},
        values=summary.model_dump(),
        status="violation" if summary.violations else "holds",
    )


def _matrix_values(
    op: str,
    u,
    v,
    hencky: HenckyParams | None,
    t: float | None,
    tol: ToleranceConfig,
    grid: int = SO_N_GRID,
    restarts: int = SO_N_RESTARTS,
) -> dict[str, Any] | SsliReport:
    def need_v():
        if v is None:
            raise InvalidInstance(f"matrix op {op!r} needs matrix_v")
        return v

    if op == "invariants":
        return {"invariants": spd_invariants(u).tolist()}
    if op == "log":
        return {"log": matrix_log_spd(u).tolist()}
    if op == "hencky":
        if hencky is None:
            raise InvalidInstance("hencky needs --mu and one of --lam/--kappa")
        return {"energy": hencky_energy(u, hencky)}
    if op == "becker":
        return {"energy": becker_energy(u)}
    if op == "ssli":
        return verify_matrix_ssli(u, need_v(), tol, hencky)
    if op == "becker-monotonicity":
        return verify_becker_monotonicity(u, need_v(), tol)
    if op == "entropy":
        return verify_density_entropy(u, need_v(), tol)
    if op == "geodesic-point":
        if t is None:
            raise InvalidInstance("geodesic-point needs --t")
        return {"t": t, "point": geodesic_point(u, need_v(), t).matrix.tolist()}
    if op == "geodesic-distance":
        return {"distance": geodesic_distance(u, need_v())}
    if op == "log-euclidean":
        return {"distance": log_euclidean_distance(u, need_v())}
    if op == "polar":
        rotation, stretch = polar_stretch(u)
        return {"rotation": rotation.tolist(), "stretch": stretch.matrix.tolist()}
    if op == "so-n-gap":
        return so_n_optimality_gap(u, grid=grid, restarts=restarts).model_dump()
    if op == "kellogg":
        return kellogg_sector_check(u).model_dump()
    raise InvalidInstance(f"unknown matrix op {op!r}; expected one of {', '.join(MATRIX_OPS)}")


def run_matrix(
    op: str,
    instance: InstanceFile,
    hencky: HenckyParams | None = None,
    t: float | None = None,
    tol: ToleranceConfig | None = None,
    grid: int = SO_N_GRID,
    restarts: int = SO_N_RESTARTS,
) -> ReportDocument:
    if instance.form != "matrix":
        raise InvalidInstance("matrix ops need matrix_u (and matrix_v for two-matrix ops)")
    tol = tol or resolve_tolerances(instance)
    result = _matrix_values(op, instance.matrix_u, instance.matrix_v, hencky, t, tol, grid, restarts)
    if isinstance(result, SsliReport):
        log.info("matrix[%s]: %s (margin %.6g)", op, result.status, result.margin)
        doc = _document("matrix", _instance_dict(instance), result)
        doc.values["op"] = op
        return doc
    if op == "kellogg" and result["invariants_nonneg"] and not result["all_in_sector"]:
        status = "violation"
    else:
        status = "holds"
    return ReportDocument(command="matrix", instance=_instance_dict(instance), values={"op": op, **result}, status=status)


# ==== Argument parsing ====
def _csv_list(cast):
    def parse(text: str):
        try:
            return [cast(part) for part in text.split(",") if part.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    return parse


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tolerance overrides")
    for name, field in ToleranceConfig.model_fields.items():
        group.add_argument(
            f"--tol-{name.replace('_', '-')}",
            dest=f"tol_{name}",
            type=int if field.annotation is int else float,
            default=None,
            metavar="V",
            help=f"default {field.default}",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssli_lab", description="Sum-of-squared-logarithms inequality lab")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check one instance against its theorem")
    verify.add_argument("--instance", required=True, metavar="PATH")
    verify.add_argument("--mode", choices=VERIFY_MODES, default="ssli")
    verify.add_argument("--mu", type=float, help="Hencky shear modulus (matrix mode)")
    modulus = verify.add_mutually_exclusive_group()
    modulus.add_argument("--lam", type=float)
    modulus.add_argument("--kappa", type=float)

    derivative = sub.add_parser("derivative", help="compare the derivative evaluators")
    source = derivative.add_mutually_exclusive_group(required=True)
    source.add_argument("--e", type=_csv_list(float), help="comma-separated coefficients e_1..e_n")
    source.add_argument("--instance", metavar="PATH", help="instance file with e_x")
    derivative.add_argument("--k", type=int, action="append", help="index, repeatable (default: 1..n-1)")
    derivative.add_argument("--methods", type=_csv_list(str), default=list(METHODS))

    path = sub.add_parser("path", help="trace f along the linear coefficient path")
    path.add_argument("--instance", required=True, metavar="PATH")
    path.add_argument("--samples", type=int, default=101)
    path.add_argument("--csv", metavar="PATH")

    random = sub.add_parser("random", help="fuzz campaign over generated dominated pairs")
    random.add_argument("--n", type=int, required=True)
    random.add_argument("--count", type=int, default=100)
    random.add_argument("--seed", type=int, default=SSLI_LAB_SEED)
    random.add_argument("--spread", type=float, default=0.5)
    random.add_argument("--mode", choices=RANDOM_MODES, default="ssli")
    random.add_argument("--workers", type=int, default=1)

    matrix = sub.add_parser("matrix", help="matrix applications")
    matrix.add_argument("--instance", required=True, metavar="PATH")
    matrix.add_argument("--op", choices=MATRIX_OPS, required=True)
    matrix.add_argument("--mu", type=float)
    matrix_modulus = matrix.add_mutually_exclusive_group()
    matrix_modulus.add_argument("--lam", type=float)
    matrix_modulus.add_argument("--kappa", type=float)
    matrix.add_argument("--t", type=float)
    matrix.add_argument("--grid", type=int, default=SO_N_GRID, help="angle grid for so-n-gap (n = 2)")
    matrix.add_argument("--restarts", type=int, default=SO_N_RESTARTS, help="random starts for so-n-gap (n = 3)")

    for p in (verify, derivative, path, random, matrix):
        _add_tolerance_flags(p)
    return parser


def _tolerance_flags(args: argparse.Namespace) -> dict[str, Any]:
    return {name: getattr(args, f"tol_{name}") for name in ToleranceConfig.model_fields if getattr(args, f"tol_{name}") is not None}


def _hencky_from_args(args: argparse.Namespace) -> HenckyParams | None:
    if args.mu is None:
        if args.lam is not None or args.kappa is not None:
            raise InvalidInstance("--lam/--kappa need --mu")
        return None
    if args.lam is not None:
        return HenckyParams(mu=args.mu, modulus="lambda", value=args.lam)
    return HenckyParams(mu=args.mu, modulus="kappa", value=args.kappa or 0.0)


def dispatch(args: argparse.Namespace) -> ReportDocument:
    flags = _tolerance_flags(args)
    if args.command == "verify":
        instance = load_instance(args.instance)
        return run_verify(instance, args.mode, resolve_tolerances(instance, flags), _hencky_from_args(args))
    if args.command == "derivative":
        if args.e is not None:
            e, tol = args.e, resolve_tolerances(None, flags)
        else:
            instance = load_instance(args.instance)
            if instance.e_x is None:
                raise InvalidInstance("derivative instances need e_x")
            e, tol = instance.e_x, resolve_tolerances(instance, flags)
        return run_derivative(e, args.k, args.methods, tol)
    if args.command == "path":
        instance = load_instance(args.instance)
        return run_path(instance, args.samples, args.csv, resolve_tolerances(instance, flags))
    if args.command == "random":
        return run_random(args.n, args.count, args.seed, args.spread, args.mode, resolve_tolerances(None, flags), args.workers)
    instance = load_instance(args.instance)
    return run_matrix(
        args.op, instance, _hencky_from_args(args), args.t, resolve_tolerances(instance, flags), args.grid, args.restarts
    )


def exit_code(doc: ReportDocument) -> int:
    return EXIT_VIOLATION if doc.status == "violation" else EXIT_OK


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


def configure_logging(level: str = SSLI_LAB_LOG_LEVEL) -> None:
    logging.basicConfig(stream=sys.stderr, level=level.upper(), format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors must not collide with the violation code
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        doc = dispatch(args)
    except (SsliError, ValidationError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, _one_line(exc))
        return EXIT_INPUT
    print(doc.model_dump_json(indent=2))
    return exit_code(doc)


if __name__ == "__main__":
    sys.exit(main())
