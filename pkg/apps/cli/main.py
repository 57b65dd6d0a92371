"""
knotlens: integral HOMFLY-PT and sl(n) homology of braid closures.

Tables and JSON go to stdout, diagnostics to stderr. The exit status is the
verdict: 0 success, 2 bad input, 3 window too small, 4 a cross-check
disagreed, 5 an internal identity failed.
"""
import argparse
import sys
from typing import List, Optional

from apps.cli.render import render_json, render_report
from schemas.run_config import build_run_config
from services.metrics import metrics_text
from services.observability import observability_service
from workflows.error_handler import KnotLensError
from workflows.executor import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knotlens",
        description="HOMFLY-PT and sl(n) homology over the integers from braid words.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "examples:\n"
            "  knotlens --braid \"1 1 1\" --check-euler\n"
            "  knotlens --braid \"\" --strands 1\n"
            "  knotlens --knot 4_1 --sln 2 --pages 5 --format json\n"
        ),
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--braid", help='signed generator indices, e.g. "1 -2 1 -2"')
    source.add_argument("--knot", help="catalog name such as 3_1, 4_1 or m3_1")
    parser.add_argument("--strands", type=int, help="strand count (default: 1 + largest index)")

    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--reduced", dest="reduced", action="store_true", default=True,
                      help="reduced theory (default)")
    mode.add_argument("--unreduced", dest="reduced", action="store_false",
                      help="unreduced theory; tables are truncated to the window")

    parser.add_argument("--mark", type=int, help="marked edge (default: edge 0)")
    parser.add_argument("--sln", type=int, metavar="N",
                        help="compute the spectral sequence for p(x) = x^(N+1)")
    parser.add_argument("--pages", type=int, help="last page to compute (default from settings)")
    parser.add_argument("--qmin", type=int, help="lower end of the quantum window")
    parser.add_argument("--qmax", type=int, help="upper end of the quantum window")
    parser.add_argument("--format", dest="output_format", choices=("table", "json", "report"),
                        default="table",
                        help="table: aligned text; json: bare entry arrays; report: the whole run as JSON")
    parser.add_argument("--check-euler", action="store_true",
                        help="compare the Euler characteristic with the skein oracle")
    parser.add_argument("--crosscheck-hochschild", action="store_true",
                        help="compare Koszul Hochschild homology with d_plus homology per resolution")
    parser.add_argument("--hochschild-degree", type=int, default=3, metavar="D",
                        help="polynomial degree limit of the Hochschild comparison")
    parser.add_argument("--compare", metavar="BRAID",
                        help="second presentation whose table must agree exactly")
    parser.add_argument("--metrics", action="store_true", help="print prometheus metrics to stderr")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    values = dict(
        braid=args.braid,
        knot=args.knot,
        strands=args.strands,
        reduced=args.reduced,
        mark=args.mark,
        sln=args.sln,
        q_min=args.qmin,
        q_max=args.qmax,
        output_format=args.output_format,
        check_euler=args.check_euler,
        crosscheck_hochschild=args.crosscheck_hochschild,
        hochschild_degree_limit=args.hochschild_degree,
        compare=args.compare,
        metrics=args.metrics,
    )
    if args.pages is not None:
        values["pages"] = args.pages

    try:
        config = build_run_config(**values)
    except KnotLensError as e:
        observability_service.log_error(str(e))
        return e.exit_code

    report, exit_code = run(config)
    if config.output_format == "json":
        sys.stdout.write(render_json(report) + "\n")
    elif config.output_format == "report":
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(render_report(report) + "\n")
    if config.metrics:
        sys.stderr.write(metrics_text())
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
