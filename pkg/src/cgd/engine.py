"""Global dynamics induced by local rules.

``evaluate`` applies a rule to the disk around every vertex and glues the
images together; ``compose`` and ``lift_radius_one`` build new rules from old
ones.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from cgd.errors import (
    AlphabetMismatch,
    BadParameters,
    CGDError,
    InvariantViolation,
    PortBudgetExceeded,
    RadiusNotPowerOfTwo,
    UnknownVertex,
)
from cgd.graph import Disk, Graph, Merger, Port, disk, neighbors
from cgd.names import NameLike, VertexName, name
from cgd.rules import LocalRule


class Provenance:
    """Antecedents of output vertices, read off the naming of the images.

    For an output vertex ``w`` let ``C(w)`` be the centres whose image contains
    it.  Its antecedent is the shallowest name-ancestor of ``w`` (within the
    rule's naming depths) that belongs to ``C(w)``.  Vertices with no such
    ancestor get an empty set; checkers report that as a failure.
    """

    __slots__ = ("_ante", "_occurs")

    def __init__(self, ante: Mapping[VertexName, frozenset], occurs: Mapping[VertexName, frozenset]):
        self._ante = dict(ante)
        self._occurs = dict(occurs)

    def antecedents(self, v: NameLike) -> frozenset[VertexName]:
        v = name(v)
        if v not in self._ante:
            raise UnknownVertex(f"{v} is not an output vertex")
        return self._ante[v]

    def occurrences(self, v: NameLike) -> frozenset[VertexName]:
        """Centres whose image mentions ``v`` (including as a stub)."""
        return self._occurs[name(v)]

    def successors(self, A: Iterable[NameLike]) -> frozenset[VertexName]:
        """``a^-1(A)``: output vertices with an antecedent in ``A``."""
        A = {name(a) for a in A}
        return frozenset(w for w, s in self._ante.items() if s & A)

    def items(self):
        return sorted(self._ante.items())

    def __len__(self) -> int:
        return len(self._ante)

    def __eq__(self, other) -> bool:
        return isinstance(other, Provenance) and self._ante == other._ante


def antecedents(P: Provenance, v: NameLike) -> frozenset[VertexName]:
    return P.antecedents(v)


def derive_provenance(rule: LocalRule, images: Sequence[tuple[VertexName, Graph]]) -> Provenance:
    occurs: dict[VertexName, set] = {}
    for c, img in images:
        for w in img.vertices:
            occurs.setdefault(w, set()).add(c)
    lo, hi = rule.depths
    ante = {}
    for w, cs in occurs.items():
        found = frozenset()
        for d in range(lo, hi + 1):
            a = w.strip(d)
            if a is None:
                break
            if a in cs:
                found = frozenset((a,))
                break
        ante[w] = found
    return Provenance(ante, {w: frozenset(cs) for w, cs in occurs.items()})


class Evaluation(NamedTuple):
    graph: Graph
    provenance: Provenance | None


def _images(rule: LocalRule, G: Graph, centers: Sequence[VertexName], workers: int | None):
    r = rule.view_radius

    def one(v):
        return rule.apply(disk(G, (v,), r))

    if workers and workers > 1 and len(centers) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            imgs = list(ex.map(one, centers))
    else:
        imgs = [one(v) for v in centers]
    return list(zip(centers, imgs))


def evaluate(
    F,
    G: Graph,
    *,
    order: Sequence[NameLike] | None = None,
    workers: int | None = None,
    provenance: bool = True,
) -> Evaluation:
    """``F(G)``: union of the rule's images of every radius-r disk of ``G``.

    Images are merged in total name order unless ``order`` is given; the
    result does not depend on the order.  ``workers > 1`` computes images on a
    thread pool; merging stays sequential.
    """
    if isinstance(F, Dynamics):
        workers = workers if workers is not None else F.workers
        provenance = provenance and F.provenance
        F = F.rule
    centers = [name(v) for v in order] if order is not None else sorted(G.vertices)
    if order is not None and set(centers) != G.vertices:
        raise BadParameters("evaluation order must enumerate every vertex exactly once")
    images = _images(F, G, centers, workers)
    m = Merger(F.out_pi or G.pi)
    for c, img in images:
        m.add(img, tag=c)
    out = m.graph()
    return Evaluation(out, derive_provenance(F, images) if provenance else None)


@dataclass(frozen=True)
class Dynamics:
    """Handle on the global dynamics of a rule."""

    rule: LocalRule
    provenance: bool = True
    workers: int | None = None

    @property
    def radius(self) -> int:
        return self.rule.radius

    @property
    def bound(self) -> int:
        return self.rule.bound

    def __call__(self, G: Graph) -> Graph:
        return evaluate(self, G, provenance=False).graph

    def evaluate(self, G: Graph) -> Evaluation:
        return evaluate(self, G)

    def run(self, G: Graph, steps: int) -> list[Graph]:
        return run(self, G, steps)


def as_dynamics(F) -> Dynamics:
    return F if isinstance(F, Dynamics) else Dynamics(F)


def run(F, G: Graph, steps: int) -> list[Graph]:
    """Trajectory ``[G, F(G), ..., F^steps(G)]``.

    Errors carry the index of the failing step in ``err.step``.
    """
    if steps < 0:
        raise BadParameters("steps must be >= 0")
    traj = [G]
    for k in range(steps):
        try:
            traj.append(evaluate(F, traj[-1], provenance=False).graph)
        except CGDError as err:
            err.step = k + 1
            raise
    return traj


# -- composition ---------------------------------------------------------------

def composed_radius(r1: int, r2: int) -> int:
    return 2 * r1 * r2 + r1 + r2


def compose(f1: LocalRule, f2: LocalRule, radius: int | None = None) -> LocalRule:
    """Rule ``g`` whose dynamics is ``F2 o F1``.

    On a disk ``N`` of radius ``R`` centred at ``v``, ``g`` rebuilds ``F1``
    around ``v`` from the centres whose ``r1``-disks lie entirely inside
    ``N``, then applies ``f2`` at each vertex that ``v`` owns in its own
    ``f1`` image.  ``R`` defaults to ``2 r1 r2 + r1 + r2``; a smaller radius
    may be requested when the pair is known to need less.
    """
    if f1.out_pi is not None and f2.pi is not None and f1.out_pi > f2.pi:
        raise AlphabetMismatch(f"{f1.name} emits degree {f1.out_pi}, {f2.name} reads {f2.pi}")
    if f1.out_sigma is not None and f2.sigma is not None and not f1.out_sigma <= f2.sigma:
        raise AlphabetMismatch(f"{f1.name} emits states outside the alphabet of {f2.name}")
    r1, r2 = f1.view_radius, f2.view_radius
    R = composed_radius(r1, r2) if radius is None else radius
    if R < r1:
        raise BadParameters(f"composed radius {R} smaller than first radius {r1}")

    def fn(N: Disk) -> Graph:
        g = N.graph
        v = N.center
        inner = sorted(neighbors(g, (v,), R - r1))
        images = [(u, f1.apply(disk(g, (u,), r1))) for u in inner]
        mid = Merger(f1.out_pi or g.pi)
        for u, img in images:
            mid.add(img, tag=u)
        M = mid.graph()
        prov = derive_provenance(f1, images)
        own = sorted(prov.successors((v,)))
        out = Merger(f2.out_pi or M.pi)
        for w in own:
            out.add(f2.apply(disk(M, (w,), r2)), tag=w)
        return out.graph()

    lo1, hi1 = f1.depths
    lo2, hi2 = f2.depths
    return LocalRule(
        f"{f1.name}+{f2.name}", R, fn,
        bound=max(1, f1.fanout) * f2.bound,
        fanout=max(1, f1.fanout) * max(1, f2.fanout),
        depths=(lo1 + lo2, hi1 + hi2),
        pi=f1.pi, out_pi=f2.out_pi, sigma=f1.sigma, out_sigma=f2.out_sigma,
        family=f1.family, params={"parts": (f1, f2)},
    )


# -- radius-one lift -----------------------------------------------------------

STAR = "*"
COUNTER_SEP = "@"


def encode_state(s, counter: int) -> str:
    return f"{'' if s is None else s}{COUNTER_SEP}{counter}"


def decode_state(s: str) -> tuple[str | None, int]:
    base, sep, count = str(s).rpartition(COUNTER_SEP)
    if not sep:
        raise InvariantViolation(f"state {s!r} carries no step counter")
    return (base if base != "" else None), int(count)


class PathCodes:
    """Bijection between port paths ``(i1..ik)``, ``1 <= k <= r``, and ancillary ports.

    Paths are numbered in shortlex order and packed after the ``pi`` base
    ports, so the lifted degree is ``pi + pi + pi^2 + ... + pi^r``.
    """

    def __init__(self, pi: int, r: int):
        self.pi = pi
        self.r = r
        self._to_port: dict[tuple[int, ...], int] = {}
        self._to_path: dict[int, tuple[int, ...]] = {}
        port = pi
        for k in range(1, r + 1):
            for path in itertools.product(range(1, pi + 1), repeat=k):
                port += 1
                self._to_port[path] = port
                self._to_path[port] = path
        self.degree = port

    def port(self, path: tuple[int, ...]) -> int:
        return self._to_port[path]

    def path(self, port: int) -> tuple[int, ...]:
        return self._to_path[port]


@dataclass(frozen=True)
class Lift:
    """Radius-one rule ``lifted`` with ``lifted^(l+1) = base`` through ``encode``/``decode``."""

    base: LocalRule
    rule: LocalRule
    l: int
    codes: PathCodes

    @property
    def degree(self) -> int:
        return self.codes.degree

    def encode(self, G: Graph) -> Graph:
        if any(d == STAR for d in G.delta.values()):
            raise InvariantViolation("input already carries ancillary * edges")
        sigma = {v: encode_state(G.state(v), 0) for v in G.vertices}
        return Graph(G.vertices, sigma, G.delta, self.degree, check=False)

    def decode(self, G: Graph) -> Graph:
        sigma = {}
        for v, s in G.sigma.items():
            base, c = decode_state(s)
            if c != 0:
                raise InvariantViolation(f"vertex {v} is mid-cycle (counter {c})")
            if base is not None:
                sigma[v] = base
        delta = {k: d for k, d in G.delta.items() if d != STAR}
        return Graph(G.vertices, sigma, delta, self.codes.pi, check=False)

    def step_count(self) -> int:
        return self.l + 1


def _links(g: Graph, phase: int, codes: PathCodes):
    """Adjacency used to grow visibility: code at each end of every link.

    Phase 0 uses the original edges (codes of length one); later phases use the
    ancillary edges laid down by the previous phase.
    """
    links: dict[VertexName, dict[VertexName, tuple[int, ...]]] = {}

    def put(a, b, code):
        if a == b:
            return
        cur = links.setdefault(a, {}).get(b)
        if cur is None or (len(code), code) < (len(cur), cur):
            links[a][b] = code

    for (a, b), d in g.delta.items():
        if phase == 0 and d != STAR:
            put(a.owner, b.owner, (a.index,))
            put(b.owner, a.owner, (b.index,))
        elif phase > 0 and d == STAR:
            put(a.owner, b.owner, codes.path(a.index))
            put(b.owner, a.owner, codes.path(b.index))
    return links


def _shortlex(links, a: VertexName, b: VertexName) -> tuple[int, ...] | None:
    """Shortest, then lexicographically least, port path from ``a`` to ``b``."""
    best = links.get(a, {}).get(b)
    for x, ax in links.get(a, {}).items():
        xb = links.get(x, {}).get(b)
        if xb is None or x == b:
            continue
        cand = ax + xb
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand
    return best


def lift_radius_one(F, max_ports: int = 4096) -> Lift:
    """Radius-one rule simulating ``F`` (radius ``r = 2^l``) in ``l + 1`` steps.

    States become ``sigma@counter``.  While the counter is below ``l`` each
    vertex links itself by a ``*`` edge to everything within two links, so
    after step ``i`` all pairs at original distance ``<= 2^i`` are linked.  A
    ``*`` edge sits at each end on the port encoding the shortlex port path to
    the other end.  At counter ``l`` the centre strips the ancillary structure,
    rebuilds its original radius-``r`` disk and applies ``F``'s rule.
    """
    f = F.rule if isinstance(F, Dynamics) else F
    r = f.view_radius
    if r < 1 or r & (r - 1):
        raise RadiusNotPowerOfTwo(f"radius {r} is not a power of two")
    l = r.bit_length() - 1
    if f.pi is None:
        raise BadParameters("lifting needs a rule with a declared degree")
    pi = f.pi
    if sum(pi ** k for k in range(r + 1)) > max_ports:
        raise PortBudgetExceeded(f"lifted degree exceeds the port limit {max_ports}")
    codes = PathCodes(pi, r)

    def fn(D: Disk) -> Graph:
        g = D.graph
        v = D.center
        base, counter = decode_state(g.sigma[v])
        if counter < l:
            links = _links(g, counter, codes)
            near = set(links.get(v, {}))
            reach = set(near)
            for x in near:
                reach.update(links.get(x, {}))
            reach.discard(v)
            vertices = {v}
            delta = {}
            for key in g.incident(v):
                if g.delta[key] != STAR:
                    delta[key] = g.delta[key]
                    vertices.update((key[0].owner, key[1].owner))
            for y in reach:
                a, b = (v, y) if v < y else (y, v)
                ab, ba = _shortlex(links, a, b), _shortlex(links, b, a)
                delta[(Port(a, codes.port(ab)), Port(b, codes.port(ba)))] = STAR
                vertices.add(y)
            return Graph(frozenset(vertices), {v: encode_state(base, counter + 1)}, delta,
                         codes.degree, check=False)
        plain_sigma = {}
        for u, s in g.sigma.items():
            b, _ = decode_state(s)
            if b is not None:
                plain_sigma[u] = b
        plain = Graph(
            g.vertices, plain_sigma, {k: d for k, d in g.delta.items() if d != STAR}, pi, check=False
        )
        img = f.apply(disk(plain, (v,), r))
        sigma = {u: encode_state(s, 0) for u, s in img.sigma.items()}
        return Graph(img.vertices, sigma, img.delta, codes.degree, check=False)

    lo, hi = f.depths
    rule = LocalRule(
        f"lift({f.name})", 1, fn,
        bound=max(f.bound, codes.degree + 1),
        fanout=max(1, f.fanout),
        depths=(0 if l > 0 else lo, hi),
        pi=codes.degree, out_pi=codes.degree, family="port",
        params={"base": f, "l": l},
    )
    return Lift(f, rule, l, codes)
