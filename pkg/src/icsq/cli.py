"""Command-line front end.

Exit codes: 0 success (no error diagnostics), 1 at least one error-severity
diagnostic from `check`, 2 parse or input errors, 3 invalid flags. JSON
output uses fixed key order and compact separators, so identical invocations
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bell, casebook, ks, quantum
from .checker import InternalLimit, check
from .elaborate import elaborate, resolve_pair
from .lang import parse, render_diagnostics
from .lang.diagnostics import severity_for


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the CLI contract reserves 2 for input
    errors and uses 3 for flag errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _fail(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return 2


def _json_dump(payload) -> str:
    return json.dumps(payload, separators=(",", ":"))


def _num(x: float) -> str:
    return repr(float(x))


def _read_source(path: str):
    with open(path, "r", encoding="utf-8", errors="replace") as handle:
        return handle.read()


def _parse_scenario(path: str):
    """Returns (scenario, source, None) or (None, None, exit_code)."""
    try:
        source = _read_source(path)
    except OSError as exc:
        return None, None, _fail(f"cannot read {path}: {exc}")
    result = parse(source)
    if not result.ok:
        for error in result.errors:
            sys.stderr.write(f"{path}: {error}\n")
        return None, None, 2
    return result.scenario, source, None


# --- subcommands -------------------------------------------------------------


def _cmd_check(args) -> int:
    scenario, source, failure = _parse_scenario(args.file)
    if failure is not None:
        return failure
    try:
        report = check(scenario)
    except InternalLimit as exc:
        return _fail(str(exc))
    _emit(render_diagnostics(report.diagnostics, args.format, source=source))
    has_errors = any(severity_for(d.code) == "error" for d in report.diagnostics)
    return 1 if has_errors else 0


def _cmd_prob(args) -> int:
    scenario, _, failure = _parse_scenario(args.file)
    if failure is not None:
        return failure
    try:
        env = elaborate(scenario)
        structure, config = resolve_pair(env, args.structure, args.config)
        dist = quantum.born_probabilities(structure, config)
    except (InternalLimit, KeyError, quantum.QuantumError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        return _fail(str(message))
    entries = {casebook.label_text(label): p for label, p in dist.items()}
    if args.format == "json":
        _emit(_json_dump({
            "structure": args.structure,
            "config": args.config,
            "probabilities": entries,
        }))
    else:
        _emit(f"P(outcome | {args.structure}, {args.config}):")
        for label, p in entries.items():
            _emit(f"  {label}: {_num(p)}")
    return 0


def _angles_from(args):
    parts = args.angles.split(",")
    if len(parts) != 4:
        raise ValueError("--angles needs exactly four comma-separated values a,a',b,b'")
    values = [float(p) for p in parts]
    if args.degrees:
        values = [math.radians(v) for v in values]
    return bell.AngleSettings(alice=(values[0], values[1]), bob=(values[2], values[3]))


def _cmd_bell(args) -> int:
    try:
        settings = _angles_from(args)
    except ValueError as exc:
        return _fail(str(exc))
    a, ap = settings.alice
    b, bp = settings.bob
    correlations = {
        "E_ab": bell.correlation(a, b),
        "E_ab_prime": bell.correlation(a, bp),
        "E_a_prime_b": bell.correlation(ap, b),
        "E_a_prime_b_prime": bell.correlation(ap, bp),
    }
    s_value = (
        correlations["E_ab"]
        - correlations["E_ab_prime"]
        + correlations["E_a_prime_b"]
        + correlations["E_a_prime_b_prime"]
    )
    lhv = bell.lhv_max_chsh()
    feasibility = bell.joint_distribution_exists(bell.table_from_singlet(settings))
    if args.format == "json":
        _emit(_json_dump({
            "angles": {"a": a, "a_prime": ap, "b": b, "b_prime": bp},
            "correlations": correlations,
            "S": s_value,
            "abs_S": abs(s_value),
            "lhv_max": lhv.max,
            "lhv_witness": {
                "alice": list(lhv.witness.alice_values),
                "bob": list(lhv.witness.bob_values),
            },
            "joint_distribution_exists": feasibility.exists,
        }))
    else:
        _emit(f"settings: a={_num(a)} a'={_num(ap)} b={_num(b)} b'={_num(bp)}")
        for key, value in correlations.items():
            _emit(f"{key} = {_num(value)}")
        _emit(f"S = {_num(s_value)}  (|S| = {_num(abs(s_value))})")
        _emit(f"lhv_max = {_num(lhv.max)} with alice={list(lhv.witness.alice_values)} bob={list(lhv.witness.bob_values)}")
        _emit(f"joint_distribution_exists = {str(feasibility.exists).lower()}")
    return 0


def _cmd_ks(args) -> int:
    name = args.instance
    try:
        if name in ks.BUILTIN_FILES:
            instance = ks.load_builtin(name)
        elif os.path.exists(name):
            instance = ks.load_file(name)
        else:
            return _fail(f"no builtin instance or file named {name!r}")
    except (OSError, ValueError) as exc:
        return _fail(f"cannot load instance {name!r}: {exc}")
    problems = ks.verify_instance(instance)
    if problems:
        for problem in problems:
            sys.stderr.write(f"{name}: {problem.message}\n")
        return 2
    result = ks.color(instance)
    witness = (
        [result.witness.assignment[i] for i in range(len(instance.rays))]
        if result.witness is not None
        else None
    )
    if args.format == "json":
        _emit(_json_dump({
            "instance": name,
            "dim": instance.dim,
            "rays": len(instance.rays),
            "contexts": len(instance.contexts),
            "colorable": result.colorable,
            "witness": witness,
            "nodes_explored": result.nodes_explored,
        }))
    else:
        _emit(
            f"instance: {name} (dim {instance.dim}, {len(instance.rays)} rays, "
            f"{len(instance.contexts)} contexts)"
        )
        _emit(f"colorable: {str(result.colorable).lower()}")
        if witness is not None:
            _emit("witness: " + " ".join(str(v) for v in witness))
        _emit(f"nodes_explored: {result.nodes_explored}")
    return 0


def _cmd_repeat(args) -> int:
    scenario, _, failure = _parse_scenario(args.file)
    if failure is not None:
        return failure
    try:
        env = elaborate(scenario)
        structure, config = resolve_pair(env, args.structure, args.config)
        report = quantum.repeatability_check(structure, config, args.seed, args.n, args.tol)
    except (InternalLimit, KeyError, quantum.QuantumError, ValueError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        return _fail(str(message))
    if args.format == "json":
        _emit(_json_dump({
            "structure": args.structure,
            "config": args.config,
            "n": args.n,
            "seed": args.seed,
            "tol": args.tol,
            "max_abs_deviation": report.max_abs_deviation,
            "pass": report.passed,
        }))
    else:
        _emit(f"repeatability of ({args.structure}, {args.config}) over n={args.n} seed={args.seed}:")
        _emit(f"max_abs_deviation = {_num(report.max_abs_deviation)}")
        _emit(f"pass = {str(report.passed).lower()}")
    return 0


def _cmd_examples(args) -> int:
    names = list(casebook.CASE_NAMES)
    if args.write is not None:
        try:
            os.makedirs(args.write, exist_ok=True)
            written = []
            for name in names:
                path = os.path.join(args.write, f"{name}.icsq")
                with open(path, "w", encoding="utf-8") as handle:
                    handle.write(casebook.case_source(name))
                written.append(path)
        except OSError as exc:
            return _fail(f"cannot write case files: {exc}")
        if args.format == "json":
            _emit(_json_dump({"examples": names, "written": written}))
        else:
            for path in written:
                _emit(f"wrote {path}")
        return 0
    if args.format == "json":
        _emit(_json_dump({"examples": names}))
    else:
        for name in names:
            _emit(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="icsq",
        description=(
            "Check configuration-relative outcome claims, compute outcome "
            "probabilities, and run Bell/CHSH, Kochen-Specker, and "
            "repeatability analyses."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="report format (default: text)")

    p_check = subparsers.add_parser("check", help="parse and type-check a scenario file")
    p_check.add_argument("file", help="scenario file (.icsq)")
    add_format(p_check)
    p_check.set_defaults(func=_cmd_check)

    p_prob = subparsers.add_parser("prob", help="outcome probabilities for a declared pair")
    p_prob.add_argument("file", help="scenario file (.icsq)")
    p_prob.add_argument("--structure", required=True, help="structure id")
    p_prob.add_argument("--config", required=True, help="configuration id")
    add_format(p_prob)
    p_prob.set_defaults(func=_cmd_prob)

    p_bell = subparsers.add_parser(
        "bell", help="singlet correlations, CHSH value, LHV bound, joint-distribution existence"
    )
    p_bell.add_argument("--angles", required=True, help="a,a',b,b' (radians unless --degrees)")
    p_bell.add_argument("--degrees", action="store_true", help="interpret angles as degrees")
    add_format(p_bell)
    p_bell.set_defaults(func=_cmd_bell)

    p_ks = subparsers.add_parser("ks", help="decide 0/1 colorability of a ray/context instance")
    p_ks.add_argument("--instance", required=True,
                      help="builtin name (cabello-18, peres-33) or instance file path")
    add_format(p_ks)
    p_ks.set_defaults(func=_cmd_ks)

    p_repeat = subparsers.add_parser("repeat", help="seeded frequency stability check")
    p_repeat.add_argument("file", help="scenario file (.icsq)")
    p_repeat.add_argument("--structure", required=True, help="structure id")
    p_repeat.add_argument("--config", required=True, help="configuration id")
    p_repeat.add_argument("--n", type=int, default=100000, help="number of draws (default 100000)")
    p_repeat.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_repeat.add_argument("--tol", type=float, default=0.01, help="frequency tolerance (default 0.01)")
    add_format(p_repeat)
    p_repeat.set_defaults(func=_cmd_repeat)

    p_examples = subparsers.add_parser("examples", help="list or write the bundled case studies")
    p_examples.add_argument("--write", metavar="DIR", default=None,
                            help="write the bundled .icsq files into DIR")
    add_format(p_examples)
    p_examples.set_defaults(func=_cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
