"""Port graphs and their structural operations.

A graph is a finite set of named vertices, a partial vertex-state map and a
partial edge-state map keyed by oriented port pairs ``(u:i, v:j)``.  Each port
occurs in at most one edge (port monogamy).  Values are immutable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Optional

from cgd.errors import InconsistentUnion, InvariantViolation
from cgd.names import NameLike, Renaming, VertexName, name

State = Hashable
EdgeState = Optional[Hashable]


class Port(NamedTuple):
    owner: VertexName
    index: int

    def __str__(self) -> str:
        return f"{self.owner}:{self.index}"


Edge = tuple[Port, Port]


def _port(p) -> Port:
    if isinstance(p, Port):
        return p
    if isinstance(p, str):
        owner, _, index = p.rpartition(":")
        return Port(name(owner), int(index))
    owner, index = p
    return Port(name(owner), int(index))


class Graph:
    """Immutable port graph.

    ``sigma`` and ``delta`` are read-only views.  Equality and hashing use the
    vertex set and both maps; the degree bound ``pi`` is ambient metadata.
    """

    __slots__ = ("_vertices", "_sigma", "_delta", "pi", "_ports", "_incident", "_adj", "_hash")

    def __init__(
        self,
        vertices: Iterable[NameLike] = (),
        sigma: Mapping[NameLike, State] | None = None,
        delta: Mapping[tuple, EdgeState] | None = None,
        pi: int = 2,
        *,
        check: bool = True,
    ):
        if check:
            vs = frozenset(name(v) for v in vertices)
            sg = {name(k): s for k, s in (sigma or {}).items() if s is not None}
            dl = {(_port(a), _port(b)): d for (a, b), d in (delta or {}).items()}
        else:
            vs = vertices if isinstance(vertices, frozenset) else frozenset(vertices)
            sg = dict(sigma or {})
            dl = dict(delta or {})
        self._vertices = vs
        self._sigma = sg
        self._delta = dl
        self.pi = pi
        ports: dict[Port, Edge] = {}
        for key in dl:
            a, b = key
            if a in ports or b in ports or a == b:
                raise InvariantViolation(f"port monogamy violated at {a if a in ports or a == b else b}")
            ports[a] = key
            ports[b] = key
        self._ports = ports
        self._incident = None
        self._adj = None
        self._hash = None
        if check:
            self._validate()

    def _validate(self) -> None:
        if self.pi < 1:
            raise InvariantViolation("degree pi must be >= 1")
        for v in self._sigma:
            if v not in self._vertices:
                raise InvariantViolation(f"state given for non-vertex {v}")
        for p in self._ports:
            if p.owner not in self._vertices:
                raise InvariantViolation(f"edge endpoint {p} is not a vertex")
            if not 1 <= p.index <= self.pi:
                raise InvariantViolation(f"port {p} outside 1..{self.pi}")

    # -- views -----------------------------------------------------------
    @property
    def vertices(self) -> frozenset[VertexName]:
        return self._vertices

    @property
    def sigma(self) -> Mapping[VertexName, State]:
        return MappingProxyType(self._sigma)

    @property
    def delta(self) -> Mapping[Edge, EdgeState]:
        return MappingProxyType(self._delta)

    def state(self, v: NameLike) -> State | None:
        return self._sigma.get(name(v))

    def edge_at(self, port) -> Edge | None:
        return self._ports.get(_port(port))

    def ports(self) -> Mapping[Port, Edge]:
        return MappingProxyType(self._ports)

    def edges(self) -> list[tuple[Port, Port, EdgeState]]:
        return [(a, b, d) for (a, b), d in sorted(self._delta.items())]

    def incident(self, v: VertexName) -> tuple[Edge, ...]:
        """Edges with at least one endpoint owned by ``v``."""
        if self._incident is None:
            inc: dict[VertexName, list[Edge]] = {}
            for key in self._delta:
                a, b = key
                inc.setdefault(a.owner, []).append(key)
                if b.owner != a.owner:
                    inc.setdefault(b.owner, []).append(key)
            self._incident = {k: tuple(v) for k, v in inc.items()}
        return self._incident.get(v, ())

    def adjacent(self, v: VertexName) -> frozenset[VertexName]:
        if self._adj is None:
            adj: dict[VertexName, set[VertexName]] = {}
            for a, b in self._delta:
                adj.setdefault(a.owner, set()).add(b.owner)
                adj.setdefault(b.owner, set()).add(a.owner)
            self._adj = {k: frozenset(s) for k, s in adj.items()}
        return self._adj.get(v, frozenset())

    def with_pi(self, pi: int) -> "Graph":
        return Graph(self._vertices, self._sigma, self._delta, pi, check=False)

    @classmethod
    def empty(cls, pi: int = 2) -> "Graph":
        return cls((), None, None, pi, check=False)

    # -- value semantics -------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._sigma == other._sigma
            and self._delta == other._delta
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self._vertices, frozenset(self._sigma.items()), frozenset(self._delta.items()))
            )
        return self._hash

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v) -> bool:
        return name(v) in self._vertices

    def __iter__(self) -> Iterator[VertexName]:
        return iter(sorted(self._vertices))

    def __repr__(self) -> str:
        vs = ", ".join(
            f"{v}={self._sigma[v]}" if v in self._sigma else str(v) for v in sorted(self._vertices)
        )
        es = ", ".join(f"{a}->{b}" + (f"[{d}]" if d is not None else "") for a, b, d in self.edges())
        return f"Graph({{{vs}}}, {{{es}}})"


@dataclass(frozen=True)
class PointedGraph:
    graph: Graph
    pointers: frozenset[VertexName]

    def __post_init__(self):
        bad = self.pointers - self.graph.vertices
        if bad:
            raise InvariantViolation(f"pointers {sorted(map(str, bad))} are not vertices")


@dataclass(frozen=True)
class Disk:
    """Envelope of a pointer set at a given radius."""

    pointed: PointedGraph
    radius: int

    @property
    def graph(self) -> Graph:
        return self.pointed.graph

    @property
    def pointers(self) -> frozenset[VertexName]:
        return self.pointed.pointers

    @property
    def center(self) -> VertexName:
        if len(self.pointed.pointers) != 1:
            raise ValueError("disk is not centred on a single vertex")
        (c,) = self.pointed.pointers
        return c


# -- neighbourhoods ----------------------------------------------------------

def distances(G: Graph, A: Iterable[NameLike], r: int) -> dict[VertexName, int]:
    """Undirected BFS distances from ``A`` (restricted to ``V(G)``) up to ``r``."""
    dist: dict[VertexName, int] = {}
    queue: deque[VertexName] = deque()
    for a in A:
        a = name(a)
        if a in G.vertices and a not in dist:
            dist[a] = 0
            queue.append(a)
    while queue:
        u = queue.popleft()
        d = dist[u]
        if d == r:
            continue
        for w in G.adjacent(u):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def neighbors(G: Graph, A: Iterable[NameLike], r: int) -> frozenset[VertexName]:
    """Vertices of ``G`` within undirected distance ``r`` of ``A``, ``A`` included."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    return frozenset(distances(G, A, r))


def induced_subgraph(G: Graph, U: Iterable[NameLike]) -> Graph:
    """Radius-one closure of ``U``; states kept on ``U`` only, edges kept when touching ``U``."""
    core = {name(u) for u in U} & G.vertices
    verts = set(core)
    delta = {}
    dl = G._delta
    for u in core:
        for key in G.incident(u):
            if key not in delta:
                delta[key] = dl[key]
                verts.add(key[0].owner)
                verts.add(key[1].owner)
    sg = G._sigma
    sigma = {u: sg[u] for u in core if u in sg}
    return Graph(frozenset(verts), sigma, delta, G.pi, check=False)


def disk(G: Graph, A: Iterable[NameLike], r: int) -> Disk:
    A = [name(a) for a in A]
    ball = neighbors(G, A, r)
    sub = induced_subgraph(G, ball)
    return Disk(PointedGraph(sub, frozenset(a for a in A if a in G.vertices)), r)


# -- consistency and union ---------------------------------------------------

@dataclass(frozen=True)
class Conflict:
    """First disagreement between two graphs: a vertex state or a port's edge."""

    kind: str  # "state" or "port"
    vertex: VertexName
    port: Port | None
    left: object
    right: object

    def __str__(self) -> str:
        where = str(self.port) if self.port is not None else str(self.vertex)
        return f"{self.kind} conflict at {where}: {self.left!r} vs {self.right!r}"


def find_conflict(G: Graph, H: Graph) -> Conflict | None:
    common = G.vertices & H.vertices
    if not common:
        return None
    gs, hs = G._sigma, H._sigma
    gp, hp = G._ports, H._ports
    for u in sorted(common):
        if u in gs and u in hs and gs[u] != hs[u]:
            return Conflict("state", u, None, gs[u], hs[u])
        for i in range(1, max(G.pi, H.pi) + 1):
            p = Port(u, i)
            eg, eh = gp.get(p), hp.get(p)
            if eg is not None and eh is not None:
                if eg != eh or G._delta[eg] != H._delta[eh]:
                    return Conflict("port", u, p, (eg, G._delta[eg]), (eh, H._delta[eh]))
    return None


def consistent(G: Graph, H: Graph) -> bool:
    return find_conflict(G, H) is None


class Merger:
    """Incremental union with consistency checking and per-element origin tags."""

    def __init__(self, pi: int = 1):
        self.pi = pi
        self.vertices: set[VertexName] = set()
        self.sigma: dict[VertexName, State] = {}
        self.delta: dict[Edge, EdgeState] = {}
        self._ports: dict[Port, Edge] = {}
        self._state_tag: dict[VertexName, object] = {}
        self._port_tag: dict[Port, object] = {}

    def add(self, g: Graph, tag: object = None) -> None:
        self.pi = max(self.pi, g.pi)
        sigma, ports, delta = self.sigma, self._ports, self.delta
        for v, s in g._sigma.items():
            old = sigma.get(v)
            if old is None:
                sigma[v] = s
                self._state_tag[v] = tag
            elif old != s:
                self._fail(Conflict("state", v, None, old, s), self._state_tag[v], tag)
        for key, d in g._delta.items():
            if key in delta:
                if delta[key] != d:
                    p = key[0]
                    self._fail(Conflict("port", p.owner, p, (key, delta[key]), (key, d)),
                               self._port_tag[p], tag)
                continue
            for p in key:
                other = ports.get(p)
                if other is not None:
                    self._fail(Conflict("port", p.owner, p, (other, delta[other]), (key, d)),
                               self._port_tag[p], tag)
            delta[key] = d
            for p in key:
                ports[p] = key
                self._port_tag[p] = tag
        self.vertices.update(g._vertices)

    def _fail(self, conflict: Conflict, old_tag, new_tag):
        centers = (old_tag, new_tag) if new_tag is not None or old_tag is not None else None
        raise InconsistentUnion(conflict, centers)

    def graph(self) -> Graph:
        return Graph(frozenset(self.vertices), self.sigma, self.delta, self.pi, check=False)


def union(G: Graph, H: Graph) -> Graph:
    conflict = find_conflict(G, H)
    if conflict is not None:
        raise InconsistentUnion(conflict)
    m = Merger(max(G.pi, H.pi))
    m.add(G)
    m.add(H)
    return m.graph()


def union_all(graphs: Iterable[Graph], pi: int = 1) -> Graph:
    m = Merger(pi)
    for g in graphs:
        m.add(g)
    return m.graph()


# -- renaming ----------------------------------------------------------------

def rename(R: Renaming, G):
    """Apply ``R`` to a graph, pointed graph or disk."""
    if isinstance(G, Disk):
        return Disk(rename(R, G.pointed), G.radius)
    if isinstance(G, PointedGraph):
        return PointedGraph(rename(R, G.graph), frozenset(R(p) for p in G.pointers))
    R.check_injective(G.vertices)
    vs = frozenset(R(v) for v in G.vertices)
    sigma = {R(v): s for v, s in G._sigma.items()}
    delta = {
        (Port(R(a.owner), a.index), Port(R(b.owner), b.index)): d for (a, b), d in G._delta.items()
    }
    return Graph(vs, sigma, delta, G.pi, check=False)


def restrict(G: Graph, U: Iterable[NameLike]) -> Graph:
    """Plain subgraph on ``U``: states on ``U`` and edges with both ends in ``U``."""
    keep = {name(u) for u in U} & G.vertices
    sigma = {u: s for u, s in G._sigma.items() if u in keep}
    delta = {k: d for k, d in G._delta.items() if k[0].owner in keep and k[1].owner in keep}
    return Graph(frozenset(keep), sigma, delta, G.pi, check=False)


def is_closed(G: Graph) -> bool:
    """True when every vertex carries a state (no boundary stubs)."""
    return all(v in G._sigma for v in G.vertices)
