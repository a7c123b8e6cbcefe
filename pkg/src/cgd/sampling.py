"""Seeded random graphs and outside-the-disk perturbations."""

from __future__ import annotations

import random
from typing import Sequence

from cgd.graph import Graph, Port, distances
from cgd.names import VertexName

DEFAULT_SIGMA = ("0", "1")


def random_port_graph(
    rng: random.Random,
    n: int,
    sigma: Sequence = DEFAULT_SIGMA,
    pi: int = 2,
    edge_prob: float = 0.5,
    wiring: str = "all",
    prefix: str = "v",
    delta: Sequence = (None,),
) -> Graph:
    """Random port graph on ``v0..v(n-1)``.

    Candidate edges join free ports; ``wiring="line"`` only joins a free port 2
    to a free port 1, so the result is a disjoint union of paths and cycles.
    """
    vs = [VertexName(f"{prefix}{i}") for i in range(n)]
    states = {v: rng.choice(list(sigma)) for v in vs} if sigma else {}
    free = [Port(v, i) for v in vs for i in range(1, pi + 1)]
    used: set[Port] = set()
    edges = {}
    attempts = int(edge_prob * len(free)) if vs else 0
    for _ in range(attempts):
        if wiring == "line":
            a = Port(rng.choice(vs), 2)
            b = Port(rng.choice(vs), 1)
        else:
            a, b = rng.choice(free), rng.choice(free)
        if a == b or a in used or b in used:
            continue
        edges[(a, b)] = rng.choice(list(delta))
        used.update((a, b))
    return Graph(vs, states, edges, pi)


def random_line(rng: random.Random, n: int, sigma: Sequence = DEFAULT_SIGMA, prefix: str = "v") -> Graph:
    vs = [VertexName(f"{prefix}{i}") for i in range(n)]
    states = {v: rng.choice(list(sigma)) for v in vs}
    delta = {(Port(vs[i], 2), Port(vs[i + 1], 1)): None for i in range(n - 1)}
    return Graph(vs, states, delta, 2)


def sample_graph(rng: random.Random, family: str, max_n: int, sigma=None, pi: int | None = None) -> Graph:
    """A random input for a rule's family (``line`` or ``port``)."""
    sigma = tuple(sorted(sigma)) if sigma else DEFAULT_SIGMA
    n = rng.randint(1, max_n)
    if family == "line":
        if rng.random() < 0.5:
            return random_line(rng, n, sigma)
        return random_port_graph(rng, n, sigma, 2, rng.random(), wiring="line")
    return random_port_graph(rng, n, sigma, pi or 2, rng.random())


def perturb_outside(
    rng: random.Random,
    G: Graph,
    center: VertexName,
    radius: int,
    sigma: Sequence = DEFAULT_SIGMA,
    wiring: str = "all",
    fresh_prefix: str = "p",
) -> Graph:
    """Random graph agreeing with ``G`` on its radius-``radius`` disk at ``center``.

    Only vertices at distance > radius are touched: their states are redrawn,
    edges between them may be dropped, and fresh vertices or edges may be
    attached to their free ports.  Callers re-check the disk.
    """
    dist = distances(G, (center,), radius)
    outside = sorted(v for v in G.vertices if v not in dist)
    sigma = list(sigma)
    states = dict(G.sigma)
    for v in outside:
        if sigma and rng.random() < 0.5:
            states[v] = rng.choice(sigma)
    delta = {}
    for key, d in G.delta.items():
        a, b = key
        if a.owner not in dist and b.owner not in dist and rng.random() < 0.3:
            continue
        delta[key] = d
    used = {p for key in delta for p in key}
    vertices = set(G.vertices)
    pi = G.pi

    def free_ports(v):
        return [Port(v, i) for i in range(1, pi + 1) if Port(v, i) not in used]

    for k in range(rng.randint(0, 3)):
        if not outside:
            break
        x = rng.choice(outside)
        ports = free_ports(x)
        if not ports:
            continue
        p = rng.choice(ports)
        y = VertexName(f"{fresh_prefix}{k}")
        if y in vertices:
            continue
        vertices.add(y)
        if sigma:
            states[y] = rng.choice(sigma)
        if wiring == "line":
            if p.index == 2:
                key = (p, Port(y, 1))
            elif p.index == 1:
                key = (Port(y, 2), p)
            else:
                continue
        else:
            q = Port(y, rng.randint(1, pi))
            key = (p, q) if rng.random() < 0.5 else (q, p)
        delta[key] = None
        used.update(key)
        outside.append(y)
    if len(outside) >= 2 and rng.random() < 0.5:
        x, y = rng.choice(outside), rng.choice(outside)
        if wiring == "line":
            a, b = Port(x, 2), Port(y, 1)
        else:
            a, b = Port(x, rng.randint(1, pi)), Port(y, rng.randint(1, pi))
        if a != b and a not in used and b not in used:
            delta[(a, b)] = None
    return Graph(vertices, states, delta, pi)
