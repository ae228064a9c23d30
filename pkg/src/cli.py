"""
Command line interface: ``deformae <command> [flags]``.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .config import Settings
from .core.cohomology import (
    classify_EDB, ddbar_lemma_check, frolicher_check, hodge_numbers
)
from .core.constants import Backend, ExitCode, ExtensionKind
from .core.exceptions import DeformaeError, ParseError
from .core.extension import extend_0q, extend_p0, hodge_scan
from .core.identities import DEFAULT_T_VALUES, identity_suite
from .core.loader import load_beltrami, load_model
from .core.report import Report
from .core.scalars import parse_scalar, value_ring
from .core.transport import TransportContext
from .utils.codec import parse_form, parse_form_label, read_json

logger = logging.getLogger(__name__)

def _split_values(text: str) -> List[str]:
    values = [v.strip() for v in text.split(",") if v.strip()]
    if not values:
        raise ParseError("Expected a comma-separated list of exact values")
    for v in values:
        parse_scalar(v)
    return values

def _load_form(text: str, model):
    if Path(text).exists():
        return parse_form(read_json(text), model.n, value_ring())
    return parse_form_label(text, model.n, value_ring())

def _require_invariant(model) -> None:
    if model.backend is not Backend.INVARIANT:
        raise ParseError(f"Command needs an invariant model; {model.name} is a chart model")

def cmd_validate(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    report.results = {
        "name": model.name,
        "dim": model.n,
        "backend": model.backend.name.lower(),
        "generators_checked": [label for label, _ in model.generators()],
        "valid": True,
    }

def cmd_hodge(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    _require_invariant(model)
    central = hodge_numbers(model)
    results = {"central": central.to_dict(), "frolicher": frolicher_check(model, central)}
    if args.t is not None and not args.beltrami:
        raise ParseError("--t needs --beltrami")
    if args.beltrami:
        report.add_input("beltrami", args.beltrami)
        phi = load_beltrami(args.beltrami, model)
        t0 = parse_scalar(args.t if args.t is not None else "0")
        deformed = hodge_numbers(model, TransportContext.value(model, phi, t0))
        results["deformed"] = deformed.to_dict()
        results["changed"] = sorted(f"{p},{q}" for (p, q), v in deformed.h.items() if central.h[(p, q)] != v)
    report.results = results

def cmd_classify(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    _require_invariant(model)
    if (args.p is None) != (args.q is None):
        raise ParseError("--p and --q go together")
    if args.p is not None and not args.all:
        memberships = [classify_EDB(model, args.p, args.q)]
        results = {"classes": {f"{args.p},{args.q}": memberships[0].to_dict()}}
    else:
        results = {
            "classes": {
                f"{p},{q}": classify_EDB(model, p, q).to_dict()
                for p in range(1, model.n + 1) for q in range(model.n + 1)
            },
            "ddbar_lemma": ddbar_lemma_check(model).to_dict(),
        }
    report.results = results

def cmd_extend(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    _require_invariant(model)
    report.add_input("beltrami", args.beltrami)
    order = args.order or settings.order
    phi = load_beltrami(args.beltrami, model, order=order)
    if Path(args.form).exists():
        report.add_input("form", args.form)
    sigma0 = _load_form(args.form, model)
    kind = ExtensionKind(args.kind)
    run = extend_p0(model, phi, sigma0, order) if kind is ExtensionKind.P0 else extend_0q(model, phi, sigma0, order)
    report.warnings.extend(run.warnings)
    report.results = run.to_dict()
    if not run.succeeded:
        report.exit_code = ExitCode.OBSTRUCTION

def cmd_verify(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    seed = settings.seed if args.seed is None else args.seed
    if model.backend is Backend.CHART:
        result = identity_suite(model, seed=seed)
    else:
        if not args.beltrami:
            raise ParseError("verify on an invariant model needs --beltrami")
        report.add_input("beltrami", args.beltrami)
        phi = load_beltrami(args.beltrami, model)
        t_values = _split_values(args.t_values) if args.t_values else list(DEFAULT_T_VALUES)
        result = identity_suite(
            model, phi, order=args.order or settings.order, t_values=t_values,
            samples=args.samples, seed=seed
        )
        if result.integrability and not result.integrability["integrable"]:
            report.warn("Beltrami series is not integrable; identities that need integrability were skipped")
    report.results = result.to_dict()
    if not result.passed:
        report.exit_code = ExitCode.OBSTRUCTION

def cmd_scan(args: argparse.Namespace, settings: Settings, report: Report) -> None:
    model = load_model(args.model, settings.chart_degree)
    _require_invariant(model)
    report.add_input("beltrami", args.beltrami)
    phi = load_beltrami(args.beltrami, model)
    values = _split_values(args.t_values)
    scan = hodge_scan(model, phi, values, workers=args.workers or settings.workers)
    report.results = scan.to_dict()
    for key in scan.jumps:
        report.warn(f"h^{{{key}}} jumps along the sampled values")
    if scan.violations and args.expect == "invariant":
        report.exit_code = ExitCode.OBSTRUCTION

COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings, Report], None]] = {
    "validate": cmd_validate,
    "hodge": cmd_hodge,
    "classify": cmd_classify,
    "extend": cmd_extend,
    "verify": cmd_verify,
    "scan": cmd_scan,
}

def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the JSON report to stdout")
    common.add_argument("--out", type=Path, help="Write the JSON report to this path")
    common.add_argument("--log-level", dest="log_level", help="Logging level (default from DEFORMAE_LOG_LEVEL)")

    parser = argparse.ArgumentParser(prog="deformae", description="Exact deformation calculus on finite models")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Load and validate a model")
    p.add_argument("model", help="Model file or bundled model name")

    p = sub.add_parser("hodge", parents=[common], help="Hodge numbers, central or deformed")
    p.add_argument("model")
    p.add_argument("--beltrami")
    p.add_argument("--t", help="Exact parameter value, e.g. 1/10 or 1/10+1/7i")

    p = sub.add_parser("classify", parents=[common], help="E/D/B classes and the ddbar lemma")
    p.add_argument("model")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--all", action="store_true")

    p = sub.add_parser("extend", parents=[common], help="Order-by-order extension of a form")
    p.add_argument("model")
    p.add_argument("--beltrami", required=True)
    p.add_argument("--form", required=True, help="Form file or label such as w1 or wb1")
    p.add_argument("--kind", choices=[k.value for k in ExtensionKind], default=ExtensionKind.P0.value)
    p.add_argument("--order", type=int)

    p = sub.add_parser("verify", parents=[common], help="Run the identity suite")
    p.add_argument("model")
    p.add_argument("--beltrami")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--t-values", dest="t_values")

    p = sub.add_parser("scan", parents=[common], help="Hodge numbers along a family")
    p.add_argument("model")
    p.add_argument("--beltrami", required=True)
    p.add_argument("--t-values", dest="t_values", required=True)
    p.add_argument("--expect", choices=["invariant", "report"], default="invariant")
    p.add_argument("--workers", type=int)

    return parser.parse_args(argv)

def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as e:
        # usage errors are parse errors
        return int(ExitCode.PARSE) if e.code else int(ExitCode.SUCCESS)
    try:
        settings = Settings.from_env()
    except ValueError as e:
        print(f"deformae: {e}", file=sys.stderr)
        return int(ExitCode.PARSE)
    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")

    report = Report(args.command)
    try:
        report.add_input("model", args.model)
        COMMANDS[args.command](args, settings, report)
    except DeformaeError as e:
        logger.error(f"{args.command} failed: {e}")
        report.fail(e, e.exit_code)
    except ValueError as e:
        logger.error(f"{args.command} failed: {e}")
        report.fail(e, ExitCode.PARSE)

    if args.out:
        report.write(args.out)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return int(report.exit_code)

if __name__ == "__main__":
    sys.exit(main())
