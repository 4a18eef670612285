"""
Command-line interface for lcm_indist

Subcommands
-----------
validate FILE                      report model invariant violations
forests FILE --k K [--star] [--path I J]
                                   list k-edge incoming forests of the augmented graph
ioeq FILE [--format text|json]     print the input-output equation
indist A B [--format text|json]    search for a parameter bijection between two models
simulate FILE --params a_{21}=1.1,... [--signal ...] [--tmax T] [--dt H] [--csv OUT]
                                   integrate the model and print t,y samples
verify-theorems [--n N]            regenerate the path-family results up to order N

Exit codes: 0 success, 1 negative verdict, 2 usage or input error.
"""
import argparse
import json
import logging
import re
import sys
from typing import List, Optional, Sequence

from .config import settings
from .core.graph_model import build_gtilde, build_gtilde_star, validate
from .errors import LCMError
from .graphs.forest_enum import Forest, incoming_forests, path_forests
from .analysis.indist import distinguishing_witness, search_bijection
from .analysis.ioeq import ioeq_forests
from .analysis.numeric import InputSignal, parse_params, simulate
from .analysis.theorems import verify_theorems
from .storage.model_files import load_model, write_trajectory_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

# commas inside a_{10,9} do not separate assignments
_PARAM_SPLIT = re.compile(r",(?![^{]*\})")


def _render_forest(forest: Forest) -> str:
    if not forest:
        return "(empty)"
    return ",".join(str(label) for label in sorted(forest, key=lambda label: (label.is_leak, label)))


# ===================================================================
#  Subcommands
# ===================================================================

def cmd_validate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    violations = validate(model)
    if not violations:
        print(f"✅ valid: {model.describe()}")
        return EXIT_OK
    print(f"❌ invalid: {len(violations)} violation(s)")
    for violation in violations:
        print(f"  - {violation}")
    return EXIT_NEGATIVE


def cmd_forests(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    graph = build_gtilde_star(model) if args.star else build_gtilde(model)
    if args.path:
        start, end = args.path
        forests = path_forests(graph, args.k, start, end)
    else:
        forests = incoming_forests(graph, args.k)
    for forest in forests:
        print(_render_forest(forest))
    logger.info("%d forests with %d edges", len(forests), args.k)
    return EXIT_OK


def cmd_ioeq(args: argparse.Namespace) -> int:
    equation = ioeq_forests(load_model(args.model))
    if args.format == "json":
        print(json.dumps(equation.to_json(), indent=2))
    else:
        print(equation.render())
    return EXIT_OK


def cmd_indist(args: argparse.Namespace) -> int:
    eq_a = ioeq_forests(load_model(args.model_a))
    eq_b = ioeq_forests(load_model(args.model_b))
    phi = search_bijection(eq_a, eq_b)
    witness = None if phi is not None else (distinguishing_witness(eq_a, eq_b) or "none")

    if args.format == "json":
        payload = {"indistinguishable": phi is not None}
        if phi is not None:
            payload["map"] = {str(src): str(dst) for src, dst in phi.items()}
        else:
            payload["witness"] = witness
        print(json.dumps(payload, indent=2))
    elif phi is not None:
        print("✅ INDISTINGUISHABLE")
        for line in phi.render():
            print(line)
    else:
        print("❌ DISTINGUISHABLE")
        print(f"witness: {witness}")
    return EXIT_OK if phi is not None else EXIT_NEGATIVE


def cmd_simulate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    assignments = [part for part in _PARAM_SPLIT.split(args.params) if part.strip()]
    theta = parse_params(assignments)
    trajectory = simulate(model, theta, InputSignal(args.signal), args.tmax, args.dt)
    if args.csv:
        write_trajectory_csv(trajectory, args.csv)
        print(f"✅ wrote {len(trajectory)} samples to {args.csv}")
    else:
        write_trajectory_csv(trajectory, sys.stdout)
    return EXIT_OK


def cmd_verify_theorems(args: argparse.Namespace) -> int:
    report = verify_theorems(args.n)
    for line in report.render():
        print(line)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


# ===================================================================
#  Parser
# ===================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcm_tool",
        description="Input-output equations and permutation indistinguishability of linear compartmental models.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug detail to stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # -- validate --
    p_validate = subparsers.add_parser("validate", help="Check a model file against every invariant")
    p_validate.add_argument("model", help="Model JSON file")
    p_validate.set_defaults(handler=cmd_validate)

    # -- forests --
    p_forests = subparsers.add_parser("forests", help="List incoming forests with k edges")
    p_forests.add_argument("model", help="Model JSON file")
    p_forests.add_argument("--k", type=int, required=True, help="Number of edges per forest")
    p_forests.add_argument("--star", action="store_true",
                           help="Drop the edges leaving the output compartment first")
    p_forests.add_argument("--path", type=int, nargs=2, metavar=("I", "J"),
                           help="Keep only forests holding a directed path I -> J")
    p_forests.set_defaults(handler=cmd_forests)

    # -- ioeq --
    p_ioeq = subparsers.add_parser("ioeq", help="Print the input-output equation")
    p_ioeq.add_argument("model", help="Model JSON file")
    p_ioeq.add_argument("--format", choices=("text", "json"), default="text")
    p_ioeq.set_defaults(handler=cmd_ioeq)

    # -- indist --
    p_indist = subparsers.add_parser("indist", help="Search for a certifying parameter bijection")
    p_indist.add_argument("model_a", help="First model JSON file")
    p_indist.add_argument("model_b", help="Second model JSON file")
    p_indist.add_argument("--format", choices=("text", "json"), default="text")
    p_indist.set_defaults(handler=cmd_indist)

    # -- simulate --
    p_simulate = subparsers.add_parser("simulate", help="Integrate the model and print t,y samples")
    p_simulate.add_argument("model", help="Model JSON file")
    p_simulate.add_argument("--params", required=True,
                            help="Comma-separated rates, e.g. a_{21}=1.1,a_{03}=0.7")
    p_simulate.add_argument("--signal", choices=[s.value for s in InputSignal], default=InputSignal.IMPULSE.value)
    p_simulate.add_argument("--tmax", type=float, default=settings.NUMERIC_T_MAX,
                            help=f"End time (default: {settings.NUMERIC_T_MAX})")
    p_simulate.add_argument("--dt", type=float, default=settings.NUMERIC_DT,
                            help=f"Step size (default: {settings.NUMERIC_DT})")
    p_simulate.add_argument("--csv", help="Write the samples to this file instead of stdout")
    p_simulate.set_defaults(handler=cmd_simulate)

    # -- verify-theorems --
    p_verify = subparsers.add_parser("verify-theorems", help="Regenerate the path-family results")
    p_verify.add_argument("--n", type=int, default=6, help="Largest order to check, 2..8 (default: 6)")
    p_verify.set_defaults(handler=cmd_verify_theorems)

    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else settings.parse_log_level(settings.LOG_LEVEL)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and return the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        # argparse has already printed usage or help
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    try:
        _configure_logging(args.verbose)
        return args.handler(args)
    except LCMError as e:
        print(f"❌ error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
