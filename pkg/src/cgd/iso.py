"""Brute-force isomorphism test for small port graphs.

Ports are rigid: once a vertex is mapped, every edge at one of its ports forces
the image of the partner.  Search therefore branches only once per connected
component, over candidates with a matching local signature.
"""

from __future__ import annotations

from collections import Counter

from cgd.errors import SizeGuardExceeded
from cgd.graph import Graph, Port
from cgd.names import VertexName

MAX_VERTICES = 64


def _signature(G: Graph, v: VertexName):
    sig = []
    for key in G.incident(v):
        (a, b), d = key, G.delta[key]
        if a.owner == v:
            sig.append(("out", a.index, b.index, b.owner == v, d))
        if b.owner == v:
            sig.append(("in", b.index, a.index, a.owner == v, d))
    return (G.state(v), tuple(sorted(sig, key=repr)))


def _forced(G: Graph, v: VertexName):
    """(port index, direction, partner, partner port, state) for each edge at v."""
    out = []
    for key in G.incident(v):
        a, b = key
        d = G.delta[key]
        if a.owner == v:
            out.append((a.index, "out", b.owner, b.index, d))
        if b.owner == v:
            out.append((b.index, "in", a.owner, a.index, d))
    return out


def _edge_from(G: Graph, v: VertexName, i: int, direction: str):
    key = G.edge_at(Port(v, i))
    if key is None:
        return None
    a, b = key
    if direction == "out" and a == Port(v, i):
        return b, G.delta[key]
    if direction == "in" and b == Port(v, i):
        return a, G.delta[key]
    return None


def isomorphic(G: Graph, H: Graph, max_vertices: int = MAX_VERTICES) -> bool:
    """True iff a name bijection maps ``G`` exactly onto ``H``."""
    if max(len(G), len(H)) > max_vertices:
        raise SizeGuardExceeded(f"isomorphism test limited to {max_vertices} vertices")
    if len(G) != len(H) or len(G.delta) != len(H.delta) or len(G.sigma) != len(H.sigma):
        return False
    gsig = {v: _signature(G, v) for v in G.vertices}
    hsig = {v: _signature(H, v) for v in H.vertices}
    if Counter(gsig.values()) != Counter(hsig.values()):
        return False

    order = sorted(G.vertices)

    def extend(mapping: dict, used: set, v, w) -> bool:
        """Map v->w and propagate along ports; undo on failure."""
        stack = [(v, w)]
        added = []
        ok = True
        while stack:
            a, b = stack.pop()
            if a in mapping:
                if mapping[a] != b:
                    ok = False
                    break
                continue
            if b in used or gsig[a] != hsig[b]:
                ok = False
                break
            mapping[a] = b
            used.add(b)
            added.append(a)
            for i, direction, partner, pj, d in _forced(G, a):
                hit = _edge_from(H, b, i, direction)
                if hit is None or hit[0].index != pj or hit[1] != d:
                    ok = False
                    break
                stack.append((partner, hit[0].owner))
            if not ok:
                break
        if not ok:
            for a in added:
                used.discard(mapping.pop(a))
        return ok, added

    def search(mapping: dict, used: set) -> bool:
        rest = [v for v in order if v not in mapping]
        if not rest:
            return True
        v = rest[0]
        for w in sorted(H.vertices - used):
            if hsig[w] != gsig[v]:
                continue
            ok, added = extend(mapping, used, v, w)
            if ok:
                if search(mapping, used):
                    return True
                for a in added:
                    used.discard(mapping.pop(a))
        return False

    return search({}, set())
