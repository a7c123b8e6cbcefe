import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from cgd.engine import evaluate, run
from cgd.errors import BadParameters, MalformedDisk
from cgd.generators import generate, line, line_states
from cgd.graph import Graph, disk
from cgd.names import name
from cgd.rules import (
    XOR_TABLE,
    builtin_rules,
    ca_rule,
    identity_rule,
    inflating_grid_rule,
    inverse_permutation_rule,
    permutation_rule,
    xor_ca_rule,
)

from conftest import ca_oracle, port_graphs


def test_xor_trace():
    out = evaluate(xor_ca_rule(), line("10011")).graph
    assert "".join(line_states(out)) == "110101"


def test_quiescent_line_stays_quiescent():
    out = evaluate(xor_ca_rule(), line("0000")).graph
    assert set(line_states(out)) == {"0"}


def test_single_cell_two_steps_matches_oracle():
    traj = run(xor_ca_rule(), line("1"), 2)
    assert line_states(traj[2]) == ca_oracle(ca_oracle(["1"]))


@given(st.lists(st.sampled_from("01"), min_size=1, max_size=15), st.integers(1, 3))
def test_xor_matches_array_oracle(cells, steps):
    g = run(xor_ca_rule(), line(cells), steps)[-1]
    expected = list(cells)
    for _ in range(steps):
        expected = ca_oracle(expected)
    assert line_states(g) == expected


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=8))
def test_general_ca_table(cells):
    h = {(x, y): "abc"[("abc".index(x) * 2 + "abc".index(y)) % 3] for x in "abc" for y in "abc"}
    f = ca_rule(h, "a")
    assert line_states(evaluate(f, line(cells)).graph) == ca_oracle(cells, h, "a")


def test_ca_rejects_bad_tables():
    with pytest.raises(BadParameters):
        ca_rule({("0", "0"): "1", ("0", "1"): "0", ("1", "0"): "0", ("1", "1"): "0"}, "0")
    with pytest.raises(BadParameters):
        ca_rule({("0", "0"): "0", ("0", "1"): "1"}, "0")


def test_ca_rejects_non_line_disks():
    g = Graph(["a", "b"], {"a": "0", "b": "1"}, {("a:1", "b:2"): None})
    with pytest.raises(MalformedDisk):
        xor_ca_rule().apply(disk(g, ["a"], 1))
    with pytest.raises(MalformedDisk):
        xor_ca_rule().apply(disk(line("01"), ["v0"], 2))


def test_xor_metadata():
    f = xor_ca_rule()
    assert (f.radius, f.bound, f.family) == (1, 3, "line")
    assert f.params["h"] == XOR_TABLE


def test_grid_single_vertex_cluster():
    img = evaluate(inflating_grid_rule(), generate("single", 1, ["grey"])).graph
    assert len(img) == 4 and len(img.delta) == 4
    assert Counter(img.sigma.values()) == {"grey": 4}


def test_grid_colours():
    grey = generate("single", 1, ["grey"])
    gb = evaluate(inflating_grid_rule("grey-black"), grey).graph
    assert Counter(gb.sigma.values()) == {"grey": 3, "black": 1}
    gwb = evaluate(inflating_grid_rule("grey-white-black"), grey).graph
    assert Counter(gwb.sigma.values()) == {"white": 4}
    white = evaluate(inflating_grid_rule("grey-white-black"), gwb).graph
    assert Counter(white.sigma.values()) == {"white": 12, "black": 4}


@pytest.mark.parametrize("k", range(5))
def test_grid_growth(k):
    traj = run(inflating_grid_rule(), generate("single", 1), k)
    assert [len(g) for g in traj] == [4**i for i in range(k + 1)]


def test_grid_all_neighbour_cases_are_consistent():
    # Every subset of the four neighbours of a centre.
    f = inflating_grid_rule()
    for mask in range(16):
        vs = ["c"]
        edges = {}
        spec = [("e", "c:1", "e:3"), ("n", "c:2", "n:4"), ("w", "w:1", "c:3"), ("s", "s:2", "c:4")]
        for bit, (nb, a, b) in enumerate(spec):
            if mask >> bit & 1:
                vs.append(nb)
                edges[(a, b)] = None
        g = Graph(vs, {u: "0" for u in vs}, edges, 4)
        out = evaluate(f, g).graph
        assert len(out) == 4 * len(vs)
        assert len(out.delta) == 4 * len(vs) + 2 * len(edges)


def test_grid_rejects_high_ports():
    g = Graph(["a", "b"], {}, {("a:5", "b:1"): None}, pi=5)
    with pytest.raises(MalformedDisk):
        inflating_grid_rule().apply(disk(g, ["a"], 0))
    with pytest.raises(BadParameters):
        inflating_grid_rule("purple")


@given(port_graphs())
def test_identity_is_identity(g):
    assert evaluate(identity_rule(), g).graph == g


@given(port_graphs())
def test_permutation_and_inverse(g):
    f = permutation_rule({"0": "1", "1": "0"})
    out = evaluate(f, g).graph
    assert out.delta == g.delta
    assert all(out.state(v) != g.state(v) for v in g.vertices)
    assert evaluate(inverse_permutation_rule(f), out).graph == g


def test_permutation_must_be_bijective():
    with pytest.raises(BadParameters):
        permutation_rule({"0": "1", "1": "1"})


def test_builtins_have_names():
    assert set(builtin_rules()) == {"identity", "xor-ca", "grid", "grid-grey-black", "grid-grey-white-black", "perm"}
