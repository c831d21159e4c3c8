"""Command-line front end: ``ptmom <verb> [flags]``.

Exit codes
----------
0  success (certify: maximally entangled; check-rana: bound holds)
1  usage error, or a moment vector that no Hermitian spectrum realizes
2  unreadable or invalid state file, or a state of the wrong dimensions
3  certify: not maximally entangled
4  check-rana: bound violated
5  selftest: at least one check failed

Reports go to standard output as one JSON document; diagnostics go to
standard error.
"""

import argparse
import sys

from . import _json, certify, moments, selftest, states
from .config import DEFAULTS
from .errors import ComplexRootsDetected, InvalidMoments, InvalidRank, InvalidState, WrongDimensions

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_STATE = 2
EXIT_NOT_MAX_ENTANGLED = 3
EXIT_RANA_VIOLATED = 4
EXIT_SELFTEST_FAILED = 5

KIND_CHOICES = ("bell", "haar-pure", "ginibre", "max-entangled", "separable")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _tolerance(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"tolerance must be nonnegative, got {text}")
    return value


def _csv_floats(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = _Parser(prog="ptmom", description="Partial-transpose moments of bipartite states.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def state_input(p):
        p.add_argument("-i", "--input", required=True, metavar="PATH", help="state file")

    def tolerance(p):
        p.add_argument("--tol", type=_tolerance, default=DEFAULTS.certify, help="default %(default)g")

    gen = sub.add_parser("generate", help="write a random or fixture state file")
    gen.add_argument("--kind", required=True, choices=KIND_CHOICES)
    gen.add_argument("--d", type=_positive_int, help="local dimension for both parties")
    gen.add_argument("--da", type=_positive_int)
    gen.add_argument("--db", type=_positive_int)
    gen.add_argument("--rank", type=_positive_int)
    gen.add_argument("--seed", type=_nonnegative_int, default=0)
    gen.add_argument("-o", "--output", metavar="PATH", help="default: standard output")

    mom = sub.add_parser("moments", help="print the PT-moment vector of a state")
    state_input(mom)
    mom.add_argument("--k", type=_positive_int, help="highest moment order (default: d)")

    rec = sub.add_parser("reconstruct", help="recover a PT spectrum from its moments")
    rec.add_argument("--moments", type=_csv_floats, required=True, metavar="CSV")

    cer = sub.add_parser("certify", help="test a two-qubit state for maximal entanglement")
    state_input(cer)
    tolerance(cer)

    ran = sub.add_parser("check-rana", help="check the PT spectrum against Rana's bound")
    state_input(ran)
    tolerance(ran)

    sub.add_parser("selftest", help="run the built-in fixture checks")
    return parser


def _dims(args):
    if args.d is not None and (args.da is not None or args.db is not None):
        raise UsageError("give either --d or --da/--db, not both")
    if args.d is not None:
        return args.d, args.d
    if args.da is None and args.db is None:
        return None
    if args.da is None or args.db is None:
        raise UsageError("--da and --db must be given together")
    return args.da, args.db


def _emit(obj, out):
    out.write(_json.dumps(obj) + "\n")


def _generate(args, out):
    dims = _dims(args)
    if args.kind == "bell":
        if dims not in (None, (2, 2)):
            raise UsageError("bell states are two-qubit states")
        if args.rank not in (None, 1):
            raise UsageError("bell states have rank 1")
        state = states.max_entangled(2)
    else:
        if dims is None:
            raise UsageError(f"--kind {args.kind} needs --d or --da/--db")
        try:
            state = states.random_state(args.kind, *dims, rank=args.rank, seed=args.seed)
        except (InvalidRank, ValueError) as exc:
            raise UsageError(str(exc)) from None
    text = states.state_to_json(state) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _moments(args, out):
    state = states.load_state(args.input)
    if args.k is not None and args.k > state.d:
        raise UsageError(f"--k {args.k} exceeds the dimension {state.d}")
    _emit(moments.pt_moments(state, args.k).values, out)
    return EXIT_OK


def _reconstruct(args, out):
    p = moments.PTMomentVector(args.moments, len(args.moments))
    spectrum = moments.reconstruct_spectrum(p)
    e = moments.moments_to_elementary(p)
    _emit(
        {
            "spectrum": spectrum,
            "elementary": e.values,
            "characteristic_polynomial": moments.characteristic_polynomial(e),
        },
        out,
    )
    return EXIT_OK


def _certify(args, out):
    state = states.load_state(args.input)
    report = certify.certify_max_entangled_2q(state, args.tol)
    _emit(report.to_dict(), out)
    return EXIT_OK if report.verdict is certify.Verdict.MAXIMALLY_ENTANGLED else EXIT_NOT_MAX_ENTANGLED


def _check_rana(args, out):
    state = states.load_state(args.input)
    report = moments.check_rana(states.pt_spectrum(state), state.dim_a, state.dim_b, args.tol)
    _emit(report.to_dict(), out)
    return EXIT_OK if report.holds else EXIT_RANA_VIOLATED


def _selftest(args, out):
    results = selftest.run()
    for name, passed, message in results:
        if not passed:
            print(f"selftest {name} FAILED: {message}", file=sys.stderr)
    ok = all(passed for _, passed, _ in results)
    _emit({"passed": ok, "checks": [{"name": n, "passed": p} for n, p, _ in results]}, out)
    return EXIT_OK if ok else EXIT_SELFTEST_FAILED


_HANDLERS = {
    "generate": _generate,
    "moments": _moments,
    "reconstruct": _reconstruct,
    "certify": _certify,
    "check-rana": _check_rana,
    "selftest": _selftest,
}


def run(argv, out=None):
    """Execute one command and return its exit code."""
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.verb](args, out)
    except UsageError as exc:
        print(f"ptmom {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidMoments, ComplexRootsDetected) as exc:
        print(f"ptmom {args.verb}: moments not realizable: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidState, WrongDimensions) as exc:
        print(f"ptmom {args.verb}: invalid state: {exc}", file=sys.stderr)
        return EXIT_BAD_STATE
    except OSError as exc:
        print(f"ptmom {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
