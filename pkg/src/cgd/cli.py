"""Command-line entry point ``cgd``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 engine error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from cgd.engine import compose, evaluate, lift_radius_one, run
from cgd.errors import BadParameters, CGDError, InvariantViolation, ParseError
from cgd.generators import FAMILIES, generate, grid, line
from cgd.graph import PointedGraph
from cgd.io import export_dot, parse_graph, serialize_graph
from cgd.rules import LocalRule
from cgd.rulespec import parse_rule
from cgd.verify import (
    GraphSpace,
    VerificationReport,
    check_causality,
    check_dynamics_axioms,
    check_invertibility,
    check_limit_preservation,
    check_local_rule,
    check_reversibility,
    default_space,
    reports_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3
PROPERTIES = ("all", "dynamics", "local", "causality", "limits", "invertibility")


class UsageError(Exception):
    pass


def _read_graph(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    G = parse_graph(text)
    return G.graph if isinstance(G, PointedGraph) else G


def _rule(spec: str) -> LocalRule:
    try:
        return parse_rule(spec)
    except BadParameters as e:
        raise UsageError(str(e)) from None


def cmd_run(args) -> int:
    rule = _rule(args.rule)
    G = _read_graph(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traj = run(rule, G, args.steps)
    for k, g in enumerate(traj):
        (out / f"step_{k}.cgd").write_text(serialize_graph(g))
        if args.dot:
            (out / f"step_{k}.dot").write_text(export_dot(g, title=f"step_{k}"))
    print(f"{rule.name}: {args.steps} step(s), final graph has {len(traj[-1])} vertices")
    return EXIT_OK


def cmd_compose(args) -> int:
    f1, f2 = _rule(args.rule1), _rule(args.rule2)
    g = compose(f1, f2)
    G = _read_graph(args.input)
    composed = evaluate(g, G, provenance=False).graph
    print(f"composed rule {g.name}: radius {g.radius}, bound {g.bound}")
    if args.check_extensional:
        seq = evaluate(f2, evaluate(f1, G, provenance=False).graph, provenance=False).graph
        if composed != seq:
            print("FAIL extensional: composed dynamics differs from sequential evaluation")
            sys.stdout.write(serialize_graph(composed))
            sys.stdout.write(serialize_graph(seq))
            return EXIT_FAIL
        print("PASS extensional: composed dynamics equals sequential evaluation")
    sys.stdout.write(serialize_graph(composed))
    return EXIT_OK


def cmd_lift(args) -> int:
    rule = _rule(args.rule)
    if args.l < 0:
        raise UsageError("--l must be >= 0")
    if rule.radius != 2 ** args.l:
        raise UsageError(f"rule radius {rule.radius} is not 2^{args.l}")
    lift = lift_radius_one(rule)
    G = _read_graph(args.input)
    traj = run(lift.rule, lift.encode(G), lift.step_count())
    result = lift.decode(traj[-1])
    print(f"lifted {rule.name}: radius 1, degree {lift.degree}, {lift.step_count()} steps per base step")
    if args.check:
        expected = evaluate(rule, G, provenance=False).graph
        if result != expected:
            print("FAIL lift: decoded lifted run differs from the base step")
            return EXIT_FAIL
        print("PASS lift: decoded lifted run equals the base step")
    sys.stdout.write(serialize_graph(result))
    return EXIT_OK


def limit_input(rule: LocalRule, seed: int):
    """Default graph and pointer set for the limit-preservation check."""
    rng = random.Random(seed)
    states = sorted(rule.sigma) if rule.sigma else ["0", "1"]
    if rule.family == "line":
        G = line([rng.choice(states) for _ in range(12)])
    elif (rule.pi or 2) >= 4:
        G = grid(4, 4, [rng.choice(states) for _ in range(16)])
    else:
        from cgd.generators import cycle

        G = cycle([rng.choice(states) for _ in range(8)])
    return G, [min(G.vertices)]


def verify_rule(
    rule: LocalRule, properties: str, samples: int, seed: int, space: GraphSpace | None = None
) -> list[VerificationReport]:
    wanted = PROPERTIES[1:] if properties == "all" else (properties,)
    space = space or default_space(rule)
    out = []
    for prop in wanted:
        if prop == "dynamics":
            out.append(check_dynamics_axioms(rule, samples, seed))
        elif prop == "local":
            out.append(check_local_rule(rule, space))
        elif prop == "causality":
            out.append(check_causality(rule, samples, seed))
        elif prop == "limits":
            G, A = limit_input(rule, seed)
            out.append(check_limit_preservation(rule, G, A))
        elif prop == "invertibility":
            rep, table = check_invertibility(rule, space)
            out.append(rep)
            if table is not None:
                out.append(check_reversibility(rule, table, 3, space))
    return out


def cmd_verify(args) -> int:
    rule = _rule(args.rule)
    space = default_space(rule)
    if args.space:
        try:
            space = GraphSpace.parse(args.space, space)
        except ValueError as e:
            raise UsageError(f"bad --space: {e}") from None
    reports = verify_rule(rule, args.properties, args.samples, args.seed, space)
    for rep in reports:
        print(rep.to_text())
    if args.report:
        Path(args.report).write_text(reports_to_json(reports) + "\n")
    return EXIT_FAIL if any(r.failed for r in reports) else EXIT_OK


def cmd_gen(args) -> int:
    states = args.states.split(",") if args.states else None
    try:
        G = generate(args.family, args.n, states)
    except BadParameters as e:
        raise UsageError(str(e)) from None
    Path(args.out).write_text(serialize_graph(G))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgd", description="Causal graph dynamics on port graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a rule for a number of steps")
    r.add_argument("--rule", required=True)
    r.add_argument("--input", required=True)
    r.add_argument("--steps", type=int, required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--dot", action="store_true", help="also write step_<k>.dot files")
    r.add_argument("--seed", type=int, default=0, help="recorded for reproducibility; runs are deterministic")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compose", help="compose two rules and evaluate on an input")
    c.add_argument("--rule1", required=True)
    c.add_argument("--rule2", required=True)
    c.add_argument("--input", required=True)
    c.add_argument("--check-extensional", action="store_true")
    c.set_defaults(func=cmd_compose)

    lf = sub.add_parser("lift", help="lift a radius-2^l rule to radius one")
    lf.add_argument("--rule", required=True)
    lf.add_argument("--l", type=int, required=True)
    lf.add_argument("--input", required=True)
    lf.add_argument("--check", action="store_true")
    lf.set_defaults(func=cmd_lift)

    v = sub.add_parser("verify", help="check axioms and theorems for a rule")
    v.add_argument("--rule", required=True)
    v.add_argument("--properties", choices=PROPERTIES, default="all")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--space", help="override the enumerated space, e.g. n=3,sigma=2,pi=2")
    v.add_argument("--report", help="write the reports as JSON to this file")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a graph family")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--states", help="comma-separated vertex states")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParseError, InvariantViolation) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CGDError as e:
        step = getattr(e, "step", None)
        where = f" at step {step}" if step is not None else ""
        print(f"engine error{where}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
