"""Deterministic graph families and line-encoding helpers."""

from __future__ import annotations

from typing import Sequence

from cgd.errors import BadParameters, InvariantViolation
from cgd.graph import Graph, Port
from cgd.names import Renaming, VertexName
from cgd.graph import rename

FAMILIES = ("single", "line", "cycle", "grid")


def _states(states: Sequence | None, n: int) -> list:
    if not states:
        return [None] * n
    states = list(states)
    if len(states) == 1:
        return states * n
    if len(states) != n:
        raise BadParameters(f"expected 1 or {n} states, got {len(states)}")
    return states


def _v(i: int, prefix: str = "v") -> VertexName:
    return VertexName(f"{prefix}{i}")


def line(states: Sequence, prefix: str = "v") -> Graph:
    """Line ``v0 - v1 - ...`` wired ``vi:2 -> v(i+1):1``."""
    n = len(states)
    vs = [_v(i, prefix) for i in range(n)]
    sigma = {v: s for v, s in zip(vs, states) if s is not None}
    delta = {(Port(vs[i], 2), Port(vs[i + 1], 1)): None for i in range(n - 1)}
    return Graph(vs, sigma, delta, 2)


def cycle(states: Sequence, prefix: str = "v") -> Graph:
    n = len(states)
    vs = [_v(i, prefix) for i in range(n)]
    sigma = {v: s for v, s in zip(vs, states) if s is not None}
    delta = {(Port(vs[i], 2), Port(vs[(i + 1) % n], 1)): None for i in range(n)}
    return Graph(vs, sigma, delta, 2)


def grid(width: int, height: int | None = None, states: Sequence | None = None, prefix: str = "v") -> Graph:
    """Rectangular grid, row-major names; ``u:1 -> east:3`` and ``u:2 -> north:4``.

    Row 0 is the top row.
    """
    height = width if height is None else height
    n = width * height
    st = _states(states, n)
    vs = [_v(i, prefix) for i in range(n)]
    sigma = {v: s for v, s in zip(vs, st) if s is not None}
    delta = {}
    for y in range(height):
        for x in range(width):
            u = vs[y * width + x]
            if x + 1 < width:
                delta[(Port(u, 1), Port(vs[y * width + x + 1], 3))] = None
            if y > 0:
                delta[(Port(u, 2), Port(vs[(y - 1) * width + x], 4))] = None
    return Graph(vs, sigma, delta, 4)


def generate(family: str, n: int, states: Sequence | None = None) -> Graph:
    if n < 1:
        raise BadParameters("n must be >= 1")
    if family == "single":
        if n != 1:
            raise BadParameters("family 'single' has exactly one vertex")
        st = _states(states, 1)
        return Graph([_v(0)], {_v(0): st[0]} if st[0] is not None else {}, {}, 4)
    if family == "line":
        return line(_states(states, n))
    if family == "cycle":
        return cycle(_states(states, n))
    if family == "grid":
        return grid(n, n, states)
    raise BadParameters(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def line_order(G: Graph) -> list[VertexName]:
    """Vertices of a single line-wired path from left to right."""
    if not G.vertices:
        return []
    right = {}
    has_left = set()
    for (a, b) in G.delta:
        if a.index != 2 or b.index != 1:
            raise InvariantViolation(f"edge {a}->{b} is not line-wired")
        right[a.owner] = b.owner
        has_left.add(b.owner)
    heads = sorted(G.vertices - has_left)
    if len(heads) != 1:
        raise InvariantViolation("graph is not a single path")
    order = [heads[0]]
    while order[-1] in right:
        order.append(right[order[-1]])
    if len(order) != len(G):
        raise InvariantViolation("graph is not a single path")
    return order


def line_states(G: Graph) -> list:
    return [G.state(v) for v in line_order(G)]


def normalize_line(G: Graph, prefix: str = "v") -> Graph:
    """Rename a path to ``v0, v1, ...`` from left to right."""
    order = line_order(G)
    tmp = Renaming({v: VertexName(f"tmp{i}") for i, v in enumerate(order)})
    fin = Renaming({VertexName(f"tmp{i}"): _v(i, prefix) for i in range(len(order))})
    return rename(fin, rename(tmp, G))
