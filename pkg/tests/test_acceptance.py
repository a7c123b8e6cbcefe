"""Acceptance criteria 1-7.

Each test prints one ``PASS``/``FAIL`` line for its criterion (visible with or
without ``-s``) and then asserts.
"""

import random
import time
from collections import Counter

import pytest

from cgd.cli import limit_input, main
from cgd.engine import compose, composed_radius, evaluate, lift_radius_one, run
from cgd.generators import generate, grid, line, normalize_line
from cgd.io import parse_graph, serialize_graph
from cgd.iso import isomorphic
from cgd.mutants import boundary_conflict_rule, constant_name_rule, radius_cheating_rule
from cgd.rules import builtin_rules, identity_rule, inflating_grid_rule, permutation_rule, xor_ca_rule
from cgd.sampling import random_line, random_port_graph
from cgd.verify import (
    FAIL,
    PASS,
    GraphSpace,
    check_causality,
    check_dynamics_axioms,
    check_invertibility,
    check_limit_preservation,
    check_local_rule,
    check_reversibility,
    default_space,
)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def test_criterion_1_ca_golden_trace(tmp_path, report):
    t = time.perf_counter()
    src = tmp_path / "c.cgd"
    src.write_text(serialize_graph(line("10011")))
    code = main(["run", "--rule", "xor-ca", "--input", str(src), "--steps", "1", "--out", str(tmp_path / "out")])
    out = parse_graph((tmp_path / "out" / "step_1.cgd").read_text())
    expected = line("110101")
    elapsed = time.perf_counter() - t
    ok = code == 0 and isomorphic(out, expected) and normalize_line(out) == expected and elapsed < 1.0
    report(1, ok, f"10011 -> 110101 isomorphic and exact after normalisation, {elapsed:.3f}s < 1s")


def test_criterion_2_grid_growth(report):
    t = time.perf_counter()
    traj = run(inflating_grid_rule(), generate("single", 1), 6)
    counts = [len(g) for g in traj]
    # Graph construction validates port monogamy; re-validate every step explicitly.
    monogamous = all(len(g.ports()) == 2 * len(g.delta) for g in traj)
    iso = isomorphic(traj[3], grid(8))
    elapsed = time.perf_counter() - t
    ok = counts == [4**k for k in range(7)] and monogamous and iso and elapsed < 5.0
    report(2, ok, f"counts {counts}, 8x8 isomorphic {iso}, {elapsed:.2f}s < 5s")


def test_criterion_3_coloured_grid(report):
    out = evaluate(inflating_grid_rule("grey-black"), generate("single", 1, ["grey"])).graph
    states = Counter(out.sigma.values())
    report(3, states == Counter({"grey": 3, "black": 1}), f"state multiset {dict(states)}")


def test_criterion_4_composability(report):
    t = time.perf_counter()
    xor = xor_ca_rule()
    pairs = [(xor, xor), (xor, identity_rule())]
    composed = [compose(f1, f2) for f1, f2 in pairs]
    rng = random.Random(2024)
    mismatches = 0
    for i in range(200):
        n = rng.randint(1, 50)
        g = random_line(rng, n) if i % 2 == 0 else random_port_graph(rng, n, ("0", "1"), 2, rng.random(), wiring="line")
        for (f1, f2), g12 in zip(pairs, composed):
            if evaluate(g12, g).graph != evaluate(f2, evaluate(f1, g).graph).graph:
                mismatches += 1
    radius = composed[0].radius
    elapsed = time.perf_counter() - t
    # The radius is the value of 2*r1*r2 + r1 + r2 at r1 = r2 = 1, which is 4.
    ok = mismatches == 0 and radius == composed_radius(1, 1) == 4 and elapsed < 30.0
    report(4, ok, f"{mismatches} mismatches on 200 graphs x 2 pairs, composed radius {radius}, {elapsed:.2f}s < 30s")


def test_criterion_5_radius_one_lift(report):
    t = time.perf_counter()
    f = compose(xor_ca_rule(), xor_ca_rule(), radius=2)
    lift = lift_radius_one(f)
    rng = random.Random(77)
    bad = 0
    for i in range(100):
        n = rng.randint(1, 20)
        g = random_line(rng, n) if i % 2 == 0 else random_port_graph(rng, n, ("0", "1"), 2, rng.random(), wiring="line")
        lifted = run(lift.rule, lift.encode(g), 2)[-1]
        if lift.decode(lifted) != evaluate(f, g).graph:
            bad += 1
    elapsed = time.perf_counter() - t
    ok = lift.l == 1 and lift.rule.radius == 1 and bad == 0 and elapsed < 60.0
    report(5, ok, f"l=1, {bad} mismatches on 100 graphs, lifted degree {lift.degree}, {elapsed:.2f}s < 60s")


def test_criterion_6_axiom_suite(report):
    t = time.perf_counter()
    failures = []
    for key, f in builtin_rules().items():
        G, A = limit_input(f, 0)
        reps = [
            check_dynamics_axioms(f, samples=200, seed=0),
            check_local_rule(f, default_space(f)),
            check_causality(f, samples=200, seed=0),
            check_limit_preservation(f, G, A, r_max=3),
        ]
        failures += [f"{key}:{r.property}" for r in reps if r.verdict != PASS]

    mutants = [
        (constant_name_rule(), lambda s: check_dynamics_axioms(constant_name_rule(), samples=200, seed=s), "freshness-2"),
        (boundary_conflict_rule(), lambda s: check_local_rule(boundary_conflict_rule()), None),
        (radius_cheating_rule(), lambda s: check_causality(radius_cheating_rule(), samples=200, seed=s), "uniform-continuity"),
    ]
    caught = []
    for rule, check, sub in mutants:
        first, replay = check(0), check(0)
        hit = first.verdict == FAIL and bool(first.counterexample) and first.to_dict() == replay.to_dict()
        if sub is not None:
            hit = hit and first.subchecks.get(sub) == FAIL
        caught.append(hit)
    elapsed = time.perf_counter() - t
    ok = not failures and all(caught) and elapsed < 120.0
    report(6, ok, f"built-in failures {failures}, mutants caught {caught}, {elapsed:.1f}s < 120s")


def test_criterion_7_invertibility(report):
    t = time.perf_counter()
    xor = xor_ca_rule()
    rep, table = check_invertibility(xor, GraphSpace(n=4, wiring="line"))
    witness = rep.verdict == FAIL and table is None
    if witness:
        p1, p2 = rep.counterexample["preimage1"], rep.counterexample["preimage2"]
        witness = p1 != p2 and evaluate(xor, p1).graph == evaluate(xor, p2).graph
    perm = permutation_rule({"0": "1", "1": "0"})
    space = default_space(perm)
    prep, ptable = check_invertibility(perm, space)
    rev = check_reversibility(perm, ptable, 3, space) if ptable is not None else None
    reversible = prep.verdict == PASS and rev is not None and rev.verdict == PASS and rev.data["radius"] == 0
    elapsed = time.perf_counter() - t
    ok = witness and reversible and elapsed < 120.0
    report(7, ok, f"xor-ca two-preimage witness {witness}, permutation inverse causal at radius 0 {reversible}, {elapsed:.1f}s < 120s")
