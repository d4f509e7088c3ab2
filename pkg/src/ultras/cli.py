"""Command-line interface.

Exit status: 0 equivalent / success, 1 distinguished, 2 usage or model
error, 3 state budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .domain import KindMismatchError
from .equivalence import DEFAULT_DEPTH, RefinementDisagreement, bisim_equiv, trace_equiv
from .statespace import ExplorationConfig, StateBudgetExceeded, explore, export_graph
from .syntax import ModelError, parse_model
from .testing import DeltaFn, ObserverError, generate_battery, load_observer, testing_equiv

EXIT_OK, EXIT_DISTINGUISHED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _depth(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ultras", description="ULTraS process-calculus workbench")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def model_cmd(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="model file")
        p.add_argument("--max-states", type=_positive, default=None)
        return p

    def pair_cmd(name, help):
        p = model_cmd(name, help)
        p.add_argument("--left", required=True, help="left term, in the model's calculus")
        p.add_argument("--right", required=True, help="right term, in the model's calculus")
        p.add_argument("--depth", type=_depth, default=DEFAULT_DEPTH)
        return p

    sub.add_parser("parse", help="print the canonical model").add_argument("file")
    model_cmd("space", help="print state and transition counts")
    p = model_cmd("export", help="write the explored graph")
    p.add_argument("--format", choices=("dot", "tra"), required=True)
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    pair_cmd("check-trace", help="bounded trace equivalence")
    pair_cmd("check-bisim", help="bisimulation by refinement, validated to a depth")
    p = pair_cmd("check-testing", help="testing equivalence against an observer battery")
    p.add_argument("--tests", nargs="+", default=[], metavar="OBS", help="observer model files")
    p.add_argument("--delta", choices=[d.value for d in DeltaFn], default=None)
    p.add_argument("--gen-depth", type=_depth, default=None, help="add generated observers up to this depth")
    return parser


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_model(text)


def _config(args) -> ExplorationConfig:
    if args.max_states is not None:
        return ExplorationConfig(max_states=args.max_states)
    return ExplorationConfig.from_environ()


def _run(args, out) -> int:
    if args.command == "parse":
        out.write(str(_load(args.file)))
        return EXIT_OK

    env = _load(args.file)
    cfg = _config(args)

    if args.command in ("space", "export"):
        g = explore(env, cfg)
        if args.command == "space":
            out.write(f"STATES {len(g)}\nTRANSITIONS {sum(1 for _ in g.edges())}\n")
            return EXIT_OK
        text = export_graph(g, args.format)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            out.write(text)
        return EXIT_OK

    left, right = env.with_terms(args.left, args.right)
    if args.command == "check-testing":
        if not args.tests and args.gen_depth is None:
            raise _UsageError("check-testing needs --tests and/or --gen-depth")
        battery = [load_observer(path) for path in args.tests]
        if args.gen_depth is not None:
            # generated observers cover the actions of the system and of the given observers
            g0 = explore(env, cfg, roots=(left, right))
            alphabet = dict.fromkeys(g0.alphabet)
            for obs in battery:
                alphabet.update(dict.fromkeys(obs.graph.alphabet))
            battery += generate_battery(tuple(alphabet), args.gen_depth, env.calculus)
        g = explore(env, cfg, roots=(left, right))
        delta = DeltaFn(args.delta) if args.delta else None
        verdict = testing_equiv(g, *g.roots, battery, delta, args.depth, cfg)
    else:
        g = explore(env, cfg, roots=(left, right))
        check = trace_equiv if args.command == "check-trace" else bisim_equiv
        verdict = check(g, *g.roots, args.depth)
    out.write(f"{verdict}\n")
    return EXIT_OK if verdict else EXIT_DISTINGUISHED


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except (_UsageError, ModelError, KindMismatchError, ObserverError, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except StateBudgetExceeded as e:
        err.write(f"error: {e}\n")
        return EXIT_BUDGET
    except RefinementDisagreement as e:
        err.write(f"error: refined partition fails bounded validation: {e}\n")
        return EXIT_DISTINGUISHED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
