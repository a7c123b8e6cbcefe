"""Line-oriented graph documents and DOT export.

Document grammar, one record per line (``#`` starts a comment)::

    pi 2
    sigma 0 1                 # optional: declared vertex states
    delta *                   # optional: declared edge states
    vertex v0 1
    vertex v1                 # stateless vertex
    edge v0:2 -> v1:1 [state]
    pointer v0
"""

from __future__ import annotations

from cgd.errors import InvariantViolation, ParseError
from cgd.graph import Graph, PointedGraph, Port
from cgd.names import VertexName


def _name(tok: str, lineno: int, col: int) -> VertexName:
    try:
        return VertexName.parse(tok)
    except ValueError as e:
        raise ParseError(str(e), lineno, col) from None


def _port(tok: str, lineno: int, col: int) -> Port:
    owner, sep, idx = tok.rpartition(":")
    if not sep or not idx.isdigit():
        raise ParseError(f"expected <name>:<port>, got {tok!r}", lineno, col)
    return Port(_name(owner, lineno, col), int(idx))


def _columns(line: str) -> list[tuple[str, int]]:
    out = []
    i = 0
    for tok in line.split():
        i = line.index(tok, i)
        out.append((tok, i + 1))
        i += len(tok)
    return out


def parse_graph(text: str) -> Graph | PointedGraph:
    """Parse a document; a document with pointer records yields a PointedGraph."""
    pi = None
    sigma_decl = delta_decl = None
    vertices: dict[VertexName, object] = {}
    edges: dict = {}
    pointers: list[tuple[VertexName, int]] = []
    port_seen: dict[Port, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        toks = _columns(line)
        if not toks:
            continue
        kw, kcol = toks[0]
        args = toks[1:]
        if kw == "pi":
            if len(args) != 1 or not args[0][0].isdigit() or int(args[0][0]) < 1:
                raise ParseError("pi expects one positive integer", lineno, kcol)
            pi = int(args[0][0])
        elif kw == "sigma":
            sigma_decl = {t for t, _ in args}
        elif kw == "delta":
            delta_decl = {t for t, _ in args}
        elif kw == "vertex":
            if len(args) not in (1, 2):
                raise ParseError("vertex expects a name and an optional state", lineno, kcol)
            v = _name(args[0][0], lineno, args[0][1])
            if v in vertices:
                raise InvariantViolation(f"line {lineno}: duplicate vertex record {v}")
            state = args[1][0] if len(args) == 2 else None
            if state is not None and sigma_decl is not None and state not in sigma_decl:
                raise InvariantViolation(f"line {lineno}: state {state!r} not in declared sigma")
            vertices[v] = state
        elif kw == "edge":
            if len(args) not in (3, 4) or args[1][0] != "->":
                raise ParseError("edge expects <name>:<i> -> <name>:<j> [<state>]", lineno, kcol)
            a = _port(args[0][0], lineno, args[0][1])
            b = _port(args[2][0], lineno, args[2][1])
            state = args[3][0] if len(args) == 4 else None
            if state is not None and delta_decl is not None and state not in delta_decl:
                raise InvariantViolation(f"line {lineno}: edge state {state!r} not in declared delta")
            for p in (a, b):
                if p in port_seen or a == b:
                    first = port_seen.get(p, lineno)
                    raise InvariantViolation(
                        f"line {lineno}: port {p} already used on line {first} (port monogamy)"
                    )
                port_seen[p] = lineno
            edges[(a, b)] = state
        elif kw == "pointer":
            if len(args) != 1:
                raise ParseError("pointer expects one name", lineno, kcol)
            pointers.append((_name(args[0][0], lineno, args[0][1]), lineno))
        else:
            raise ParseError(f"unknown record {kw!r}", lineno, kcol)
    for (a, b) in edges:
        for p in (a, b):
            if p.owner not in vertices:
                raise InvariantViolation(f"edge endpoint {p} has no vertex record")
    if pi is None:
        pi = max((p.index for key in edges for p in key), default=1)
    sigma = {v: s for v, s in vertices.items() if s is not None}
    G = Graph(vertices, sigma, edges, pi)
    if pointers:
        for p, lineno in pointers:
            if p not in vertices:
                raise InvariantViolation(f"line {lineno}: pointer {p} is not a vertex")
        return PointedGraph(G, frozenset(p for p, _ in pointers))
    return G


def serialize_graph(G: Graph | PointedGraph) -> str:
    """Canonical document: records sorted by the total name order."""
    pointers = ()
    if isinstance(G, PointedGraph):
        pointers = sorted(G.pointers)
        G = G.graph
    lines = [f"pi {G.pi}"]
    for v in sorted(G.vertices):
        s = G.state(v)
        lines.append(f"vertex {v}" if s is None else f"vertex {v} {s}")
    for a, b, d in G.edges():
        lines.append(f"edge {a} -> {b}" if d is None else f"edge {a} -> {b} {d}")
    lines.extend(f"pointer {p}" for p in pointers)
    return "\n".join(lines) + "\n"


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(G: Graph | PointedGraph, title: str = "G") -> str:
    pointers = set()
    if isinstance(G, PointedGraph):
        pointers = set(G.pointers)
        G = G.graph
    out = [f"digraph {_q(title)} {{"]
    for v in sorted(G.vertices):
        s = G.state(v)
        label = str(v) if s is None else f"{v}\\n{s}"
        extra = ", peripheries=2" if v in pointers else ""
        out.append(f'  {_q(v)} [label="{label}"{extra}];')
    for a, b, d in G.edges():
        attrs = f'taillabel="{a.index}", headlabel="{b.index}"'
        if d is not None:
            attrs += f", label={_q(d)}"
        out.append(f"  {_q(a.owner)} -> {_q(b.owner)} [{attrs}];")
    out.append("}")
    return "\n".join(out) + "\n"
