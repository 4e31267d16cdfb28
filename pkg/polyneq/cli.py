"""
polyneq 명령행 인터페이스
- check / scan / sharpness / falsify / catalog
- 종료 코드: 0 통과, 2 부등식 위반, 3 가정 불충족, 1 사용/파싱 오류
- stdout 에는 JSON/CSV 결과만, 로그는 stderr
"""

import argparse
import csv
import io
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from polyneq import __version__
from polyneq.config import Settings, get_settings
from polyneq.errors import ContractViolation, PolyneqError
from polyneq.models import (
    CheckReport,
    DiskRadius,
    EnsembleConfig,
    GammaWeights,
    InequalityId,
    PolarPoint,
    Polynomial,
    RootForm,
    RunManifest,
)

logger = logging.getLogger("polyneq.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_HYPOTHESIS = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

SHARPNESS_FIELDS = ["id", "n", "k", "alpha", "lhs", "rhs", "slack", "rel_slack", "pass", "hypothesis_ok"]
CATALOG_FIELDS = ["id", "eq_label", "k_range", "alpha_constraint", "form", "direction", "formula"]


class _Parser(argparse.ArgumentParser):
    """사용 오류를 종료 코드 1 로 보고하는 파서"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ============================================================================
# 인자 해석
# ============================================================================

def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _inequality(text: str) -> InequalityId:
    try:
        return InequalityId(text.upper())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"unknown inequality id {text!r}") from exc


def parse_gamma(text: Optional[str], n: int) -> GammaWeights:
    """--gamma ones | --gamma 1,0.5,2 (길이 n)"""
    if text is None or text == "ones":
        return GammaWeights.ones(n)
    weights = _float_list(text)
    if len(weights) != n:
        raise ContractViolation(f"--gamma has {len(weights)} weights, polynomial degree is {n}")
    return GammaWeights(gamma=tuple(weights))


def parse_alpha(pair: Optional[str], modulus: Optional[float]) -> Optional[PolarPoint]:
    """--alpha re,im 또는 --alpha-mod m (양의 실수축)"""
    if pair is not None:
        parts = _float_list(pair)
        if len(parts) != 2:
            raise ContractViolation(f"--alpha expects re,im, got {pair!r}")
        return PolarPoint(alpha=complex(parts[0], parts[1]))
    if modulus is not None:
        if modulus <= 0:
            raise ContractViolation(f"--alpha-mod must be positive, got {modulus}")
        return PolarPoint(alpha=complex(modulus, 0.0))
    return None


def load_instance(path: str, residual_tol: float) -> Tuple[Optional[RootForm], Optional[List[float]]]:
    """RootForm / Polynomial / {"x": [...]} JSON 을 읽는다. 계수 입력은 근을 찾아 변환"""
    from polyneq.poly_core import find_roots

    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ContractViolation(f"{path}: expected a JSON object")
    if "x" in data:
        return None, [float(v) for v in data["x"]]
    if "roots" in data:
        return RootForm.model_validate(data), None
    if "coeffs" in data:
        return find_roots(Polynomial.model_validate(data), tol=residual_tol), None
    raise ContractViolation(f"{path}: expected 'roots', 'coeffs' or 'x'")


def _ensemble_config(args: argparse.Namespace) -> EnsembleConfig:
    return EnsembleConfig(
        degree=args.degree,
        k=args.k,
        trials=args.trials,
        seed=args.seed,
        gamma_mode=args.gamma_mode,
        alpha_mode=args.alpha_mode,
        alpha_grid=tuple(args.alpha_grid),
        zero_mode=args.zero_mode,
    )


# ============================================================================
# 출력
# ============================================================================

def _csv_text(rows: List[Dict[str, Any]], fields: Sequence[str], header: Optional[str] = None) -> str:
    buffer = io.StringIO()
    if header is not None:
        buffer.write(f"# {header}\n")
    writer = csv.DictWriter(buffer, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def emit(
    args: argparse.Namespace,
    command: str,
    started_at: str,
    payload: Any,
    rows: Optional[List[Dict[str, Any]]] = None,
    fields: Optional[Sequence[str]] = None,
    stdout_csv: bool = False,
) -> None:
    """--out 이 없으면 stdout 으로, 있으면 파일에 쓰고 manifest 한 줄만 출력"""
    if args.out is None:
        if stdout_csv and rows is not None:
            sys.stdout.write(_csv_text(rows, fields))
        else:
            sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [str(out_dir / f"{command}.json")]
    if rows is not None:
        outputs.append(str(out_dir / f"{command}.csv"))

    flags = {key: value for key, value in vars(args).items() if key != "func"}
    manifest = RunManifest(
        command=command,
        flags=json.loads(json.dumps(flags, default=str)),
        version=__version__,
        started_at=started_at,
        finished_at=_now(),
        outputs=outputs,
    )
    header = manifest.model_dump(mode="json")
    Path(outputs[0]).write_text(json.dumps({"manifest": header, "report": payload}, indent=2) + "\n", encoding="utf-8")
    if rows is not None:
        Path(outputs[1]).write_text(_csv_text(rows, fields, header=json.dumps(header)), encoding="utf-8")
    print(manifest.model_dump_json())


def _report_dict(report: CheckReport) -> Dict[str, Any]:
    return report.model_dump(mode="json", by_alias=True)


def _check_exit(report: CheckReport) -> int:
    if not report.hypothesis_ok:
        return EXIT_HYPOTHESIS
    return EXIT_OK if report.passed else EXIT_VIOLATION


# ============================================================================
# 명령
# ============================================================================

def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    from polyneq.inequality_catalog import lemma1_check, run_check

    started_at = _now()
    roots, x = load_instance(args.poly_file, settings.residual_tol)
    if args.id is InequalityId.LEMMA1:
        if x is None:
            raise ContractViolation("LEMMA1 takes an {\"x\": [...]} file")
        report = lemma1_check(x)
    else:
        if roots is None:
            raise ContractViolation(f"{args.id.value} takes a polynomial file")
        report = run_check(
            args.id,
            roots,
            parse_gamma(args.gamma, roots.degree),
            parse_alpha(args.alpha, args.alpha_mod),
            DiskRadius(k=args.k).k,
            **settings.check_tolerances().model_dump(),
        )
    emit(args, "check", started_at, _report_dict(report))
    return _check_exit(report)


def _scan_exit(report) -> int:
    if report.violations:
        return EXIT_VIOLATION
    if report.checked == 0:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_scan(args: argparse.Namespace, settings: Settings) -> int:
    from polyneq.ensemble_search import SUMMARY_FIELDS, scan, summary_row

    started_at = _now()
    report = scan(
        args.id,
        _ensemble_config(args),
        workers=args.threads or settings.worker_count(),
        tolerances=settings.check_tolerances(),
    )
    emit(args, "scan", started_at, report.model_dump(mode="json"), [summary_row(report)], SUMMARY_FIELDS)
    return _scan_exit(report)


def cmd_falsify(args: argparse.Namespace, settings: Settings) -> int:
    from polyneq.ensemble_search import SUMMARY_FIELDS, falsify, summary_row

    started_at = _now()
    report = falsify(
        args.id,
        _ensemble_config(args),
        args.budget,
        workers=args.threads or settings.worker_count(),
        tolerances=settings.check_tolerances(),
    )
    emit(args, "falsify", started_at, report.model_dump(mode="json"), [summary_row(report)], SUMMARY_FIELDS)
    return _scan_exit(report)


def cmd_sharpness(args: argparse.Namespace, settings: Settings) -> int:
    from polyneq.ensemble_search import sharpness_probe

    started_at = _now()
    reports = sharpness_probe(
        args.id, args.family, args.n, args.k, args.alpha, tolerances=settings.check_tolerances()
    )
    rows = []
    for report in reports:
        witness = report.witness
        alpha = witness.get("alpha")
        rows.append({
            "id": report.id.value,
            "n": len(witness["roots"]["roots"]),
            "k": witness["k"],
            "alpha": alpha[0] if alpha is not None else None,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "slack": report.slack,
            "rel_slack": report.rel_slack,
            "pass": report.passed,
            "hypothesis_ok": report.hypothesis_ok,
        })
    emit(
        args, "sharpness", started_at, [_report_dict(r) for r in reports], rows, SHARPNESS_FIELDS,
        stdout_csv=args.format == "csv",
    )
    if any(r.passed is False for r in reports):
        return EXIT_VIOLATION
    if not any(r.hypothesis_ok for r in reports):
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace, settings: Settings) -> int:
    from polyneq.inequality_catalog import catalog_table

    started_at = _now()
    entries = catalog_table()
    rows = [
        {
            "id": entry.id.value,
            "eq_label": entry.eq_label,
            "k_range": entry.schema_.k_range,
            "alpha_constraint": entry.schema_.alpha_constraint,
            "form": entry.schema_.form,
            "direction": entry.schema_.direction,
            "formula": entry.formula,
        }
        for entry in entries
    ]
    emit(
        args, "catalog", started_at, [e.model_dump(mode="json", by_alias=True) for e in entries], rows,
        CATALOG_FIELDS, stdout_csv=args.format == "csv",
    )
    return EXIT_OK


# ============================================================================
# 파서
# ============================================================================

def _add_ensemble_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("id", type=_inequality)
    sub.add_argument("--degree", "--n", dest="degree", type=int, required=True)
    sub.add_argument("--k", type=float, default=1.0)
    sub.add_argument("--trials", type=int, default=1000)
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--gamma-mode", choices=["ones", "uniform01", "exp1"], default="ones")
    sub.add_argument("--alpha-mode", choices=["none", "radial", "annulus"], default="none")
    sub.add_argument("--alpha-grid", type=_float_list, default=[1.5, 2.0, 4.0, 10.0])
    sub.add_argument("--zero-mode", choices=["disk-uniform", "boundary", "clustered", "exterior"], default="disk-uniform")
    sub.add_argument("--threads", type=int, default=0, help="worker processes (0 = POLYNEQ_THREADS)")
    sub.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyneq", description="Bernstein/Turan-type inequality checks for complex polynomials")
    parser.add_argument("--version", action="version", version=f"polyneq {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="check one inequality on one polynomial")
    check.add_argument("id", type=_inequality)
    check.add_argument("poly_file")
    check.add_argument("--k", type=float, default=1.0)
    check.add_argument("--gamma", default=None, help="ones | comma list of n weights")
    alpha = check.add_mutually_exclusive_group()
    alpha.add_argument("--alpha", default=None, help="re,im")
    alpha.add_argument("--alpha-mod", type=float, default=None)
    check.add_argument("--out", default=None)
    check.set_defaults(func=cmd_check)

    scan = commands.add_parser("scan", help="scan a random ensemble")
    _add_ensemble_flags(scan)
    scan.set_defaults(func=cmd_scan)

    falsify = commands.add_parser("falsify", help="minimize slack starting from the worst scan witness")
    _add_ensemble_flags(falsify)
    falsify.add_argument("--budget", type=int, default=1000)
    falsify.set_defaults(func=cmd_falsify)

    sharpness = commands.add_parser("sharpness", help="rel_slack profile on an extremal family")
    sharpness.add_argument("id", type=_inequality)
    sharpness.add_argument("--family", choices=["binom_k", "monomial", "alpha_zn_beta"], default="binom_k")
    sharpness.add_argument("--n", type=_int_list, default=[2, 3, 5])
    sharpness.add_argument("--k", type=_float_list, default=[1.0])
    sharpness.add_argument("--alpha", type=_float_list, default=None, help="comma list of |alpha| values")
    sharpness.add_argument("--format", choices=["json", "csv"], default="json")
    sharpness.add_argument("--out", default=None)
    sharpness.set_defaults(func=cmd_sharpness)

    catalog = commands.add_parser("catalog", help="list the 22 inequalities")
    catalog.add_argument("--format", choices=["json", "csv"], default="csv")
    catalog.add_argument("--out", default=None)
    catalog.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    settings = get_settings()
    logging.basicConfig(level=settings.log_level.upper(), stream=sys.stderr, format=LOG_FORMAT)

    args = build_parser().parse_args(argv)
    try:
        return args.func(args, settings)
    except (PolyneqError, ValueError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
