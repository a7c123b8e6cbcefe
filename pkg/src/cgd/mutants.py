"""Deliberately broken rules, one per axiom, used to show the checkers bite."""

from __future__ import annotations

from cgd.graph import Disk, Graph, Port
from cgd.names import VertexName
from cgd.rules import XOR_TABLE, LocalRule, line_context

CONSTANT = VertexName("x")


def constant_name_rule(pi: int = 2) -> LocalRule:
    """Identity plus a stateless vertex ``x`` emitted by every centre.

    Conjugacy holds on renamings that avoid ``x``, but any two disks produce
    images that share ``x``: freshness fails.
    """

    def fn(d: Disk) -> Graph:
        g = d.graph
        return Graph(g.vertices | {CONSTANT}, g.sigma, g.delta, g.pi, check=False)

    return LocalRule("mutant-constant-name", 0, fn, bound=2 + pi, fanout=1, depths=(0, 0), pi=pi)


def boundary_conflict_rule() -> LocalRule:
    """XOR automaton whose centre also writes its own state onto ``m.0`` to its right.

    The right neighbour ``m`` computes ``h(n, m)`` for ``m.0``, which differs
    from ``n``'s state whenever ``m`` is 1: overlapping images disagree.
    """
    h = XOR_TABLE
    q = "0"

    def fn(d: Disk) -> Graph:
        g = d.graph
        c, left, right = line_context(d)
        me = c.child(0)
        sc = g.sigma.get(c, q)
        vertices = {me}
        sigma = {me: h[(g.sigma.get(left, q) if left else q, sc)]}
        delta = {}
        if left is not None:
            delta[(Port(left.child(0), 2), Port(me, 1))] = None
            vertices.add(left.child(0))
        if right is not None:
            rv = right.child(0)
            vertices.add(rv)
            sigma[rv] = sc
            delta[(Port(me, 2), Port(rv, 1))] = None
        else:
            grow = c.child(1)
            vertices.add(grow)
            sigma[grow] = h[(sc, q)]
            delta[(Port(me, 2), Port(grow, 1))] = None
        return Graph(frozenset(vertices), sigma, delta, 2, check=False)

    return LocalRule(
        "mutant-boundary-conflict", 1, fn, bound=3, fanout=2, depths=(1, 1), pi=2,
        sigma=frozenset("01"), out_sigma=frozenset("01"), family="line",
    )


def radius_cheating_rule() -> LocalRule:
    """Declares radius 1 but reads the cell two to the left.

    Each centre ``n`` emits ``n.0`` with the XOR of its state and the state of
    the cell two positions to its left.  The engine feeds it radius-2 disks,
    so the rule is a perfectly good radius-2 rule; only the declaration lies.
    """
    q = "0"

    def fn(d: Disk) -> Graph:
        g = d.graph
        c, left, right = line_context(d)
        far = None
        if left is not None:
            for a, b in g.incident(left):
                if b.owner == left and b.index == 1 and a.index == 2:
                    far = a.owner
        me = c.child(0)
        vertices = {me}
        sigma = {me: XOR_TABLE[(g.sigma.get(far, q) if far else q, g.sigma.get(c, q))]}
        delta = {}
        if left is not None:
            vertices.add(left.child(0))
            delta[(Port(left.child(0), 2), Port(me, 1))] = None
        if right is not None:
            vertices.add(right.child(0))
            delta[(Port(me, 2), Port(right.child(0), 1))] = None
        return Graph(frozenset(vertices), sigma, delta, 2, check=False)

    return LocalRule(
        "mutant-radius-cheat", 1, fn, bound=3, fanout=1, depths=(1, 1), pi=2,
        sigma=frozenset("01"), out_sigma=frozenset("01"), family="line", view_radius=2,
    )


def mutant_rules() -> dict[str, LocalRule]:
    return {
        "mutant-constant-name": constant_name_rule(),
        "mutant-boundary-conflict": boundary_conflict_rule(),
        "mutant-radius-cheat": radius_cheating_rule(),
    }
