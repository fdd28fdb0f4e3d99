"""Command-line driver ``atmet``.

Exit codes: 0 success, 1 validation or semantic error (or a DIFF), 2 parse
error, 3 width or enumeration cap exceeded.
"""
import argparse
import asyncio
import json
import logging
import random
import sys
from typing import List, Optional, TextIO

from .async_processor import AsyncComparer
from .channels import check_axioms
from .config import Settings, load_settings, validate_environment
from .decomposition import decompose
from .dsl import parse_assignment, parse_attribution, parse_component, read_source
from .emit import to_dot
from .engine import SEMANTICS, run_semantics
from .errors import AtmetError
from .functions import BOOL, FunctionsBackend, semiring_carrier
from .matrices import BoolStochBackend
from .models import CompareOutcome, ComponentDoc, EvalRequest
from .semirings import METRIC_SEMIRINGS, format_value, metric_semiring
from .workflow import ComparisonWorkflow

logger = logging.getLogger(__name__)


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atmet", description="Compositional attack-tree metrics.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="check a component file")
    validate.add_argument("file")

    decomp = sub.add_parser("decompose", help="print a layered decomposition")
    decomp.add_argument("file")
    decomp.add_argument("--format", choices=("text", "json"), default="text")

    for name, help_text in (
        ("eval", "evaluate compositionally"),
        ("oracle", "evaluate by brute-force enumeration"),
        ("compare", "run both paths and compare"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file", nargs="+" if name == "compare" else None)
        cmd.add_argument("--semantics", choices=SEMANTICS, required=True)
        cmd.add_argument("--semiring", choices=tuple(METRIC_SEMIRINGS))
        cmd.add_argument("--attr", help="attribution file")
        cmd.add_argument("--assign", help="truth assignment file")
        cmd.add_argument("--max-width", type=int, default=settings.max_width)
        cmd.add_argument("--enum-cap", type=int, default=settings.enum_cap)
        if name != "compare":
            cmd.add_argument("--format", choices=("text", "json"), default="text")

    dot = sub.add_parser("dot", help="print the component as a DOT digraph")
    dot.add_argument("file")

    sub.add_parser("semirings", help="list the metric semirings")

    axioms = sub.add_parser("axioms", help="sample the channel-category laws of a backend")
    axioms.add_argument("--backend", choices=("functions", "boolstoch"), required=True)
    axioms.add_argument("--semiring", choices=tuple(METRIC_SEMIRINGS))
    axioms.add_argument("--samples", type=int, default=100)
    axioms.add_argument("--seed", type=int, default=0)
    return parser


def _load(path: str) -> ComponentDoc:
    return parse_component(read_source(path))


def _request(args, doc: ComponentDoc, settings: Settings) -> EvalRequest:
    return EvalRequest(
        semantics=args.semantics,
        semiring=args.semiring,
        attribution=parse_attribution(read_source(args.attr), doc.labels) if args.attr else None,
        assignment=parse_assignment(read_source(args.assign), doc.labels) if args.assign else None,
        max_width=args.max_width,
        enum_cap=args.enum_cap,
        tolerance=settings.tolerance,
    )


def _cmd_validate(args, settings, out: TextIO) -> int:
    doc = _load(args.file)
    graph = doc.graph
    out.write(
        f"ok: {doc.name} ({graph.n_inputs} -> {graph.n_outputs}, "
        f"{len(graph.nodes)} nodes, {len(graph.bas_nodes)} basic steps)\n"
    )
    return 0


def _cmd_decompose(args, settings, out: TextIO) -> int:
    layers = decompose(_load(args.file).graph)
    if args.format == "json":
        out.write(json.dumps(layers.to_json()) + "\n")
    else:
        out.write("\n".join(layers.to_text().split(" ; ")) + "\n")
    return 0


def _cmd_evaluate(args, settings, out: TextIO, oracle: bool) -> int:
    doc = _load(args.file)
    result = run_semantics(doc, _request(args, doc, settings), oracle=oracle)
    if args.format == "json":
        out.write(json.dumps(result.to_json()) + "\n")
    else:
        out.write(result.to_text() + "\n")
    return 0


def _print_outcome(outcome: CompareOutcome, out: TextIO, err: TextIO, header: bool) -> None:
    if header:
        out.write(f"== {outcome.path} ==\n")
    if outcome.error:
        err.write(f"error: {outcome.path}: {outcome.error}\n")
        return
    for label, result in (("compositional", outcome.compositional), ("oracle", outcome.oracle)):
        text = result.to_text()
        if "\n" in text:
            out.write(f"{label}:\n" + "".join(f"  {line}\n" for line in text.splitlines()))
        else:
            out.write(f"{label}: {text}\n")
    out.write("EQUAL\n" if outcome.equal else "DIFF\n")


def _cmd_compare(args, settings, out: TextIO, err: TextIO) -> int:
    request = EvalRequest(
        semantics=args.semantics,
        semiring=args.semiring,
        max_width=args.max_width,
        enum_cap=args.enum_cap,
        tolerance=settings.tolerance,
    )
    workflow = ComparisonWorkflow()
    files = {"attribution_path": args.attr, "assignment_path": args.assign}
    if len(args.file) == 1:
        outcomes = [workflow.compare(args.file[0], request, **files)]
    else:
        comparer = AsyncComparer(workflow, max_concurrent=settings.max_concurrent)
        outcomes = asyncio.run(comparer.compare_batch(args.file, request, **files))
    for outcome in outcomes:
        _print_outcome(outcome, out, err, header=len(outcomes) > 1)
    return max(o.exit_code for o in outcomes)


def _cmd_dot(args, settings, out: TextIO) -> int:
    out.write(to_dot(_load(args.file)))
    return 0


def _cmd_semirings(args, settings, out: TextIO) -> int:
    out.write(f"{'name':<14}{'structure':<30}{'zero':<6}{'one':<6}absorbing\n")
    for name in METRIC_SEMIRINGS:
        R = metric_semiring(name)
        out.write(
            f"{name:<14}{R.description:<30}{format_value(R.zero):<6}{format_value(R.one):<6}"
            f"{'yes' if R.is_absorbing else 'no'}\n"
        )
    return 0


def _cmd_axioms(args, settings, out: TextIO) -> int:
    if args.backend == "functions":
        carrier = semiring_carrier(metric_semiring(args.semiring)) if args.semiring else BOOL
        backend = FunctionsBackend(carrier)
    else:
        backend = BoolStochBackend(metric_semiring(args.semiring or "mincost"), settings.max_width)
    report = check_axioms(backend, backend.random_channel, args.samples, random.Random(args.seed))
    out.write(report.to_text() + "\n")
    return 0 if report.passed else 1


def run_cli(
    argv: Optional[List[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    settings: Optional[Settings] = None,
) -> int:
    """Run one ``atmet`` command; results go to ``stdout``, diagnostics to ``stderr``."""
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        settings = settings or load_settings()
    except AtmetError as e:
        err.write(f"error: {e}\n")
        return e.exit_code
    args = build_parser(settings).parse_args(argv)
    if args.verbose:
        logging.getLogger("src").setLevel(logging.DEBUG)

    try:
        if args.command == "eval":
            return _cmd_evaluate(args, settings, out, oracle=False)
        if args.command == "oracle":
            return _cmd_evaluate(args, settings, out, oracle=True)
        if args.command == "compare":
            return _cmd_compare(args, settings, out, err)
        handler = {
            "validate": _cmd_validate,
            "decompose": _cmd_decompose,
            "dot": _cmd_dot,
            "semirings": _cmd_semirings,
            "axioms": _cmd_axioms,
        }[args.command]
        return handler(args, settings, out)
    except AtmetError as e:
        err.write(f"error: {e}\n")
        return e.exit_code
    except OSError as e:
        err.write(f"error: {e}\n")
        return 1


def main(argv: Optional[List[str]] = None) -> int:
    try:
        settings = load_settings()
    except AtmetError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    logging.basicConfig(
        stream=sys.stderr,
        level=settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    validate_environment()
    return run_cli(argv, settings=settings)
