import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cgd.engine import compose, evaluate
from cgd.errors import SpaceTooLarge
from cgd.generators import grid, line
from cgd.mutants import boundary_conflict_rule, constant_name_rule, radius_cheating_rule
from cgd.names import name
from cgd.rules import (
    builtin_rules,
    identity_rule,
    inflating_grid_rule,
    inverse_permutation_rule,
    permutation_rule,
    xor_ca_rule,
)
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
    reports_to_json,
    truncation,
)

XOR = xor_ca_rule()
PERM = permutation_rule({"0": "1", "1": "0"})


def brute_count(space):
    return sum(1 for _ in space)


@pytest.mark.parametrize(
    "space",
    [
        GraphSpace(n=2, pi=1),
        GraphSpace(n=2, pi=2),
        GraphSpace(n=3, pi=2),
        GraphSpace(n=2, pi=2, delta=(None, "a")),
        GraphSpace(n=4, wiring="line"),
        GraphSpace(n=1, pi=4, sigma=("x",)),
    ],
)
def test_space_size_matches_enumeration(space):
    graphs = list(space)
    assert len(graphs) == space.size()
    assert len(set(graphs)) == len(graphs)


def test_space_small_cases_by_hand():
    # One vertex, two ports: no edge, or a loop 1->2 or 2->1.
    assert GraphSpace(n=1, pi=2, sigma=("0",)).size() == 1 + 3
    # Two cells: 4 state pairs times 7 wirings (none, either loop, either
    # single link, both loops, the 2-cycle).
    two = [g for g in GraphSpace(n=2, wiring="line") if len(g) == 2]
    assert len(two) == 4 * 7


def test_space_guard():
    with pytest.raises(SpaceTooLarge):
        check_local_rule(identity_rule(), GraphSpace(n=5, pi=3, max_size=1000))


def test_space_parse():
    base = GraphSpace()
    s = GraphSpace.parse("n=2,sigma=1,pi=1", base)
    assert (s.n, s.sigma, s.pi) == (2, ("0",), 1)
    with pytest.raises(ValueError):
        GraphSpace.parse("foo=1", base)


@pytest.mark.parametrize("key", sorted(builtin_rules()))
def test_builtins_pass_all_axioms(key):
    f = builtin_rules()[key]
    assert check_dynamics_axioms(f, samples=60, seed=1).verdict == PASS
    assert check_local_rule(f).verdict == PASS
    assert check_causality(f, samples=60, seed=1).verdict == PASS


def test_composed_and_lifted_rules_pass():
    two = compose(XOR, XOR, radius=2)
    assert check_local_rule(two).verdict == PASS
    assert check_causality(two, samples=40, seed=2).verdict == PASS
    rep = check_dynamics_axioms(two, samples=40, seed=2)
    assert rep.verdict == PASS


def test_xor_local_rule_on_four_cells():
    rep = check_local_rule(XOR, GraphSpace(n=4, wiring="line"))
    assert rep.verdict == PASS and rep.samples > 0


def test_constant_name_fails_freshness():
    rep = check_dynamics_axioms(constant_name_rule(), samples=20, seed=0)
    assert rep.verdict == FAIL
    assert rep.subchecks["freshness-2"] == FAIL
    assert rep.subchecks["conjugacy"] == PASS
    assert {"freshness-2_disk1", "freshness-2_disk2"} <= set(rep.counterexample)
    d1, d2 = rep.counterexample["freshness-2_disk1"], rep.counterexample["freshness-2_disk2"]
    assert not d1.graph.vertices & d2.graph.vertices
    f = constant_name_rule()
    assert name("x") in f.apply(d1).vertices & f.apply(d2).vertices


def test_boundary_conflict_fails_local_rule():
    rep = check_local_rule(boundary_conflict_rule())
    assert rep.verdict == FAIL
    f = boundary_conflict_rule()
    du, dv = rep.counterexample["disk_u"], rep.counterexample["disk_v"]
    assert f.apply(du).vertices & f.apply(dv).vertices
    from cgd.graph import consistent

    assert not consistent(f.apply(du), f.apply(dv))


def test_radius_cheat_fails_uniform_continuity():
    rep = check_causality(radius_cheating_rule(), samples=100, seed=0)
    assert rep.verdict == FAIL and rep.subchecks["uniform-continuity"] == FAIL
    f = radius_cheating_rule()
    G, H = rep.counterexample["G"], rep.counterexample["H"]
    v = name(rep.data["vertex"])
    from cgd.graph import disk, induced_subgraph

    assert disk(G, [v], 1) == disk(H, [v], 1)
    eg, eh = evaluate(f, G), evaluate(f, H)
    assert induced_subgraph(eg.graph, eg.provenance.successors([v])) != induced_subgraph(
        eh.graph, eh.provenance.successors([v])
    )
    # Declared honestly, the same rule is causal at its real radius.
    assert check_causality(f, samples=100, seed=0, radius=2).verdict == PASS


@pytest.mark.parametrize(
    "check",
    [
        lambda s: check_dynamics_axioms(constant_name_rule(), samples=30, seed=s),
        lambda s: check_causality(radius_cheating_rule(), samples=50, seed=s),
    ],
)
def test_failures_replay_from_seed(check):
    a, b = check(7), check(7)
    assert a.verdict == FAIL
    assert a.to_dict() == b.to_dict()
    assert a.to_text() == b.to_text()


def test_report_formats():
    rep = check_dynamics_axioms(constant_name_rule(), samples=5, seed=3)
    text = rep.to_text()
    assert text.startswith("FAIL\tdynamics")
    assert "counterexample freshness-2_disk1:" in text
    data = json.loads(reports_to_json([rep]))
    assert data[0]["verdict"] == "fail"
    assert data[0]["counterexample"]["freshness-2_disk1"].startswith("pi ")
    assert data[0]["subchecks"]["freshness-2"] == "fail"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_keystone_local_rules_are_causal(seed):
    for f in builtin_rules().values():
        if check_dynamics_axioms(f, samples=10, seed=seed).passed and check_local_rule(f).passed:
            assert check_causality(f, samples=15, seed=seed).verdict == PASS


def test_limits_xor_twelve_cells():
    rng = random.Random(9)
    g = line([rng.choice("01") for _ in range(12)])
    rep = check_limit_preservation(XOR, g, ["v0"], r_max=4)
    assert rep.verdict == PASS
    for rp, s in rep.data["stabilisation"].items():
        assert s <= rp + XOR.radius


def test_limits_grid_corner():
    rep = check_limit_preservation(inflating_grid_rule(), grid(4), ["v0"], r_max=3)
    assert rep.verdict == PASS


def test_limits_trivial_when_truncation_is_whole_graph():
    g = line("0110")
    assert truncation(g, ["v0"], 3) == g
    assert check_limit_preservation(identity_rule(), g, ["v0"], 2).verdict == PASS


@pytest.mark.parametrize("key", sorted(builtin_rules()))
def test_causal_builtins_preserve_limits(key):
    f = builtin_rules()[key]
    rng = random.Random(4)
    states = sorted(f.sigma) if f.sigma else ["0", "1"]
    if f.family == "line":
        g = line([rng.choice(states) for _ in range(10)])
    elif f.pi == 4:
        g = grid(3, 3, [rng.choice(states) for _ in range(9)])
    else:
        from cgd.generators import cycle

        g = cycle([rng.choice(states) for _ in range(7)])
    assert check_limit_preservation(f, g, [min(g.vertices)], 3).verdict == PASS


def test_xor_not_injective():
    rep, table = check_invertibility(XOR, GraphSpace(n=4, wiring="line"))
    assert rep.verdict == FAIL and table is None
    p1, p2, img = (rep.counterexample[k] for k in ("preimage1", "preimage2", "image"))
    assert p1 != p2
    assert evaluate(XOR, p1).graph == img == evaluate(XOR, p2).graph


def test_permutation_invertible_and_reversible():
    space = default_space(PERM)
    rep, table = check_invertibility(PERM, space)
    assert rep.verdict == PASS
    inv = inverse_permutation_rule(PERM)
    for H, G in table.items():
        assert evaluate(inv, H).graph == G
    rev = check_reversibility(PERM, table, 3, space)
    assert rev.verdict == PASS and rev.data["radius"] == 0


def test_identity_reversible_at_zero():
    rev = check_reversibility(identity_rule(), None, 3, default_space(identity_rule()))
    assert rev.verdict == PASS and rev.data["radius"] == 0


def test_grid_reversible_on_single_vertices():
    f = inflating_grid_rule()
    rep, table = check_invertibility(f, GraphSpace(n=1, pi=4, sigma=("0", "1")))
    assert rep.verdict == PASS
    assert check_reversibility(f, table, 3).verdict == PASS


def test_reversibility_reports_non_invertible():
    rev = check_reversibility(XOR, None, 2, GraphSpace(n=3, wiring="line"))
    assert rev.verdict == FAIL and rev.property == "reversibility"
