"""Command-line workflow.

Exit codes are part of the contract:

* 0 - success (empty validation report, completed walk, certificate emitted)
* 1 - parse or schema error in the scenario file or command line
* 2 - refusal: validation failure, impossible wall crossing, failed maximum
* 3 - strict mode only: the walk completed but certification failed
* 4 - internal invariant breach (always a bug)
"""

from __future__ import annotations

import argparse
import sys

from .classify import (
    Certificate,
    DataCertificate,
    classify_general,
    classify_isolated,
    small_data_bootstrap,
)
from .errors import (
    BootstrapError,
    DhwalkError,
    GluingError,
    InternalInvariantError,
    PreconditionError,
    ScenarioFormatError,
    WalkError,
)
from .io import (
    dump_scenario,
    load_scenario,
    profile_csv,
    profile_svg,
    profile_text,
    trace_csv,
    trace_text,
)
from .lattice import default_lattice, enumeration_certified, exceptional_classes
from .rigidity import certify, citation_table
from .scenario import validate_structure
from .walk import run_walk

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_REFUSED = 2
EXIT_UNCERTIFIED = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; keep 2 for refusals
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="dhwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural validation report for a scenario file")
    p.add_argument("file")

    p = sub.add_parser("walk", help="run the wall-crossing walk and print the trace")
    p.add_argument("file")
    p.add_argument("--trace", choices=["text", "csv"], default="text")
    p.add_argument(
        "--strict", action="store_true", help="fail (exit 3) on uncertified intervals"
    )

    p = sub.add_parser("classify", help="emit a classification certificate or a refusal")
    p.add_argument("file")

    p = sub.add_parser("dh-profile", help="tabulate or plot the piecewise volume")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--emit", choices=["csv", "svg", "text"], default="text")

    p = sub.add_parser("lattice", help="lattice utilities")
    lattice_sub = p.add_subparsers(dest="lattice_command", required=True)
    pe = lattice_sub.add_parser("exc", help="enumerate exceptional classes")
    pe.add_argument("-k", type=int, required=True, help="blow-up count")

    p = sub.add_parser("bootstrap", help="recover full fixed point data from small data")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)

    sub.add_parser("rigidity-table", help="print the cited rigidity facts")
    return parser


def _cmd_validate(args) -> int:
    data = load_scenario(args.file)
    report = validate_structure(data)
    if report.ok:
        print(f"{data.name}: structurally valid ({len(data.levels)} levels)")
        return EXIT_OK
    for line in report.lines():
        print(line)
    return EXIT_REFUSED


def _cmd_walk(args) -> int:
    data = load_scenario(args.file)
    trace = run_walk(data)
    sys.stdout.write(trace_csv(trace) if args.trace == "csv" else trace_text(trace))
    if trace.final_report is not None and not trace.final_report.passed:
        print("walk refused: maximum data inconsistent", file=sys.stderr)
        return EXIT_REFUSED
    if args.strict:
        certification = certify(trace)
        if not certification.certified:
            print(f"strict mode: {certification.reason}", file=sys.stderr)
            return EXIT_UNCERTIFIED
    return EXIT_OK


def _cmd_classify(args) -> int:
    data = load_scenario(args.file)
    outcome = classify_isolated(data) if data.is_isolated() else classify_general(data)
    for line in outcome.lines():
        print(line)
    return EXIT_OK if isinstance(outcome, (Certificate, DataCertificate)) else EXIT_REFUSED


def _cmd_profile(args) -> int:
    data = load_scenario(args.file)
    trace = run_walk(data)
    emit = {"csv": profile_csv, "svg": profile_svg, "text": profile_text}[args.emit]
    sys.stdout.write(emit(trace, args.samples))
    return EXIT_OK


def _cmd_lattice_exc(args) -> int:
    if args.k < 0:
        print("blow-up count must be nonnegative", file=sys.stderr)
        return EXIT_PARSE
    lattice = default_lattice(args.k)
    classes = exceptional_classes(lattice)
    if not enumeration_certified(lattice):
        print(f"# enumeration uncertified for k = {args.k} (bounded box search)")
    print(f"# {len(classes)} exceptional classes on the {args.k}-fold blow-up")
    for c in classes:
        print(f"{lattice.name_of(c)} = {tuple(int(x) for x in c.integer_coeffs())}")
    return EXIT_OK


def _cmd_bootstrap(args) -> int:
    data = load_scenario(args.file)
    full = small_data_bootstrap(data)
    dump_scenario(full, args.output)
    filled = sum(1 for lv in full.levels if lv.euler_minus is not None)
    print(f"wrote full fixed point data to {args.output} ({filled} levels with bundle data)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "walk":
            return _cmd_walk(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "dh-profile":
            return _cmd_profile(args)
        if args.command == "lattice":
            return _cmd_lattice_exc(args)
        if args.command == "bootstrap":
            return _cmd_bootstrap(args)
        if args.command == "rigidity-table":
            print(citation_table())
            return EXIT_OK
        raise InternalInvariantError(f"unhandled command {args.command!r}")
    except (ScenarioFormatError, FileNotFoundError, IsADirectoryError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (WalkError, PreconditionError, BootstrapError, GluingError) as err:
        print(f"refused: {err}", file=sys.stderr)
        return EXIT_REFUSED
    except DhwalkError as err:
        print(f"internal invariant breach (this is a bug): {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as err:  # noqa: BLE001 - the contract maps bugs to exit 4
        print(f"internal error (this is a bug): {err!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
