"""Command-line entry point: ``relphase {phase,protocol,uhlmann,oracle}``."""

import argparse
import sys
from pathlib import Path

from .errors import ContractViolation, RelPhaseError
from .scenario import ScenarioError, emit, execute, parse_scenario

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3

# verb -> (kinds it accepts, kind assumed when the scenario omits one)
VERBS = {
    "phase": (("discrete-phase", "continuous-phase"), "discrete-phase"),
    "protocol": (("protocol",), "protocol"),
    "uhlmann": (("uhlmann",), "uhlmann"),
    "oracle": (("model-oracle",), "model-oracle"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relphase", description="Geometric phases of Everett relative states.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb, help=f"run a {verb} scenario")
        p.add_argument("--scenario", required=True, type=Path, help="scenario TOML file")
        p.add_argument("--out", type=Path, help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv-fringe"), default="json")
        p.add_argument("--seed", type=int, help="override options.seed (unsigned 64-bit)")
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    accepted, default_kind = VERBS[args.verb]
    try:
        text = args.scenario.read_text()
    except OSError as exc:
        print(f"error: cannot read scenario: {exc}", file=stderr)
        return EXIT_INVALID
    try:
        scenario = parse_scenario(text, kind=default_kind, seed=args.seed)
        if scenario.kind not in accepted:
            raise ScenarioError([("kind", f"verb '{args.verb}' cannot run kind {scenario.kind!r}")])
    except ScenarioError as exc:
        for loc, msg in exc.errors:
            print(f"invalid scenario: {loc}: {msg}", file=stderr)
        return EXIT_INVALID
    try:
        report = execute(scenario)
    except ContractViolation as exc:
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except RelPhaseError as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=stderr)
        return EXIT_NUMERIC
    payload = emit(report, args.format)
    if args.out:
        args.out.write_bytes(payload)
    else:
        stdout.write(payload)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
