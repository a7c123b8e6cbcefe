"""Local rules: functions from radius-r disks to small graphs.

Rules name their output vertices after the disk's names.  A rule of naming
depth ``d`` emits names ``u.k1...kd`` derived from a name ``u`` in the disk;
depth 0 reuses disk names.  This makes freshness structural and fixes the
conjugate of any renaming.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from cgd.errors import BadParameters, MalformedDisk
from cgd.graph import Disk, Graph, Port
from cgd.names import Renaming, VertexName


@dataclass(frozen=True)
class LocalRule:
    """A local rule together with the metadata the engine and checkers use.

    ``radius`` is the declared radius; ``view_radius`` is the radius of the
    disks the engine actually feeds to ``fn`` (they differ only for
    deliberately dishonest rules).  ``bound`` caps the vertex count of one
    image, ``fanout`` the number of vertices a centre owns in its image.
    ``depths`` is the (min, max) naming depth.
    """

    name: str
    radius: int
    fn: Callable[[Disk], Graph] = field(repr=False, compare=False)
    bound: int
    fanout: int
    depths: tuple[int, int] = (1, 1)
    pi: int | None = None
    out_pi: int | None = None
    sigma: frozenset | None = None
    out_sigma: frozenset | None = None
    family: str = "port"
    view_radius: int | None = None
    params: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.view_radius is None:
            object.__setattr__(self, "view_radius", self.radius)
        if self.out_pi is None and self.pi is not None:
            object.__setattr__(self, "out_pi", self.pi)

    def apply(self, d: Disk) -> Graph:
        if d.radius != self.view_radius:
            raise MalformedDisk(f"{self.name} expects disks of radius {self.view_radius}, got {d.radius}")
        if self.pi is not None and d.graph.pi > self.pi:
            raise MalformedDisk(f"{self.name} expects degree {self.pi}, got {d.graph.pi}")
        return self.fn(d)

    def __call__(self, d: Disk) -> Graph:
        return self.apply(d)

    def accepts(self, G: Graph) -> bool:
        """Whether ``G`` lies in the input family the rule is defined on."""
        if self.pi is not None and G.pi > self.pi:
            return False
        if self.sigma is not None:
            if any(s not in self.sigma for s in G.sigma.values()):
                return False
            if len(G.sigma) != len(G):
                return False
        if self.family == "line":
            return all(a.index == 2 and b.index == 1 for (a, b) in G.delta)
        return True

    @property
    def depth(self) -> int | None:
        lo, hi = self.depths
        return lo if lo == hi else None

    def conjugate(self, R: Renaming) -> Renaming | None:
        """Conjugate of ``R`` through this rule, or None for mixed naming depth."""
        d = self.depth
        return None if d is None else R.at_depth(d)

    def renamed(self, name: str) -> "LocalRule":
        return replace(self, name=name)


def _check_center(d: Disk) -> VertexName:
    try:
        return d.center
    except ValueError as e:
        raise MalformedDisk(str(e)) from None


# -- identity and state permutations ----------------------------------------

def identity_rule(sigma: Sequence | None = None, delta: Sequence | None = None, pi: int = 2) -> LocalRule:
    """Radius 0: returns the centre, its state and incident edge stubs unchanged."""

    def fn(d: Disk) -> Graph:
        _check_center(d)
        return d.graph

    return LocalRule(
        "identity", 0, fn, bound=1 + pi, fanout=1, depths=(0, 0), pi=pi,
        sigma=frozenset(sigma) if sigma is not None else None,
        out_sigma=frozenset(sigma) if sigma is not None else None,
    )


def permutation_rule(perm: Mapping, pi: int = 2) -> LocalRule:
    """Radius 0 bijective relabelling of vertex states; topology untouched."""
    perm = dict(perm)
    if set(perm) != set(perm.values()):
        raise BadParameters("state permutation must be a bijection of its alphabet")

    def fn(d: Disk) -> Graph:
        c = _check_center(d)
        g = d.graph
        s = g.sigma.get(c)
        if s not in perm:
            raise MalformedDisk(f"state {s!r} of {c} outside permutation alphabet")
        return Graph(g.vertices, {c: perm[s]}, g.delta, g.pi, check=False)

    spec = ",".join(f"{a}={b}" for a, b in sorted(perm.items()))
    return LocalRule(
        f"perm:{spec}", 0, fn, bound=1 + pi, fanout=1, depths=(0, 0), pi=pi,
        sigma=frozenset(perm), out_sigma=frozenset(perm), params={"perm": perm},
    )


def inverse_permutation_rule(rule: LocalRule) -> LocalRule:
    perm = rule.params["perm"]
    return permutation_rule({b: a for a, b in perm.items()}, pi=rule.pi or 2)


# -- finite unbounded one-dimensional cellular automata ------------------------

XOR_TABLE = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"}


def line_context(d: Disk) -> tuple[VertexName, VertexName | None, VertexName | None]:
    """Centre plus left and right neighbours of a disk on a line-wired graph.

    Lines are wired ``x:2 -> y:1`` (port 1 = left, port 2 = right).
    """
    c = _check_center(d)
    g = d.graph
    left = right = None
    for key in g.incident(c):
        a, b = key
        if a.owner == c and a.index == 2 and b.index == 1:
            right = b.owner
        if b.owner == c and b.index == 1 and a.index == 2:
            left = a.owner
        if not (a.index == 2 and b.index == 1):
            raise MalformedDisk(f"edge {a}->{b} at {c} is not line-wired (x:2 -> y:1)")
    return c, left, right


def ca_rule(h: Mapping[tuple, object], q, name: str = "ca") -> LocalRule:
    """Radius-1 rule of the finite unbounded CA with local map ``h`` and quiescent ``q``.

    Centre ``n`` emits ``n.0`` with state ``h(left, n)`` (``left`` defaults to
    ``q`` at the left border).  A centre without right neighbour also emits
    ``n.1`` with state ``h(n, q)``: the configuration grows one cell to the
    right per step.  Output edges ``n.0:2 -> m.0:1`` mirror the input line.
    """
    h = dict(h)
    sigma = frozenset(s for pair in h for s in pair) | frozenset(h.values())
    if h.get((q, q)) != q:
        raise BadParameters("local map must fix the quiescent state: h(q,q) = q")
    for a in sigma:
        for b in sigma:
            if (a, b) not in h:
                raise BadParameters(f"local map undefined on ({a}, {b})")

    def state_of(g: Graph, v: VertexName | None):
        if v is None:
            return q
        s = g.sigma.get(v)
        if s not in sigma:
            raise MalformedDisk(f"vertex {v} has state {s!r} outside the alphabet")
        return s

    def fn(d: Disk) -> Graph:
        g = d.graph
        c, left, right = line_context(d)
        sc = state_of(g, c)
        me = c.child(0)
        vertices = {me}
        sigma_out = {me: h[(state_of(g, left), sc)]}
        delta = {}
        if left is not None:
            lv = left.child(0)
            vertices.add(lv)
            delta[(Port(lv, 2), Port(me, 1))] = None
        if right is not None:
            rv = right.child(0)
            vertices.add(rv)
            delta[(Port(me, 2), Port(rv, 1))] = None
        else:
            grow = c.child(1)
            vertices.add(grow)
            sigma_out[grow] = h[(sc, q)]
            delta[(Port(me, 2), Port(grow, 1))] = None
        return Graph(frozenset(vertices), sigma_out, delta, 2, check=False)

    return LocalRule(
        name, 1, fn, bound=3, fanout=2, depths=(1, 1), pi=2, sigma=sigma, out_sigma=sigma,
        family="line", params={"h": h, "q": q},
    )


def xor_ca_rule(h: Mapping[tuple, object] | None = None, q="0") -> LocalRule:
    return ca_rule(h if h is not None else XOR_TABLE, q, name="xor-ca")


# -- inflating grid ----------------------------------------------------------

EAST, NORTH, WEST, SOUTH = 1, 2, 3, 4
NW, NE, SW, SE = 0, 1, 2, 3

# Cluster positions along each side, listed clockwise.
SIDES = {NORTH: (NW, NE), EAST: (NE, SE), SOUTH: (SE, SW), WEST: (SW, NW)}
INTERNAL = (
    ((NW, EAST), (NE, WEST)),
    ((SW, EAST), (SE, WEST)),
    ((SW, NORTH), (NW, SOUTH)),
    ((SE, NORTH), (NE, SOUTH)),
)

GRID_VARIANTS = {
    "plain": None,
    "grey-black": {"grey": ("grey", "grey", "grey", "black"), "black": ("black",) * 4},
    "grey-white-black": {
        "black": ("black",) * 4,
        "white": ("white", "white", "white", "black"),
        "grey": ("white",) * 4,
    },
}


def inflating_grid_rule(variant: str = "plain") -> LocalRule:
    """Radius-0 rule replacing each vertex by a 2x2 cluster ``v.0..v.3``.

    Ports are 1..4 = East, North, West, South; cluster positions are
    0=NW, 1=NE, 2=SW, 3=SE.  An input edge ``v:i -> w:j`` glues side ``i`` of
    v's cluster face to face with side ``j`` of w's cluster, so all sixteen
    neighbour-presence cases fall out of the same construction.
    """
    if variant not in GRID_VARIANTS:
        raise BadParameters(f"unknown grid variant {variant!r}")
    colours = GRID_VARIANTS[variant]

    def fn(d: Disk) -> Graph:
        c = _check_center(d)
        g = d.graph
        s = g.sigma.get(c)
        if colours is None:
            states = (s,) * 4
        elif s in colours:
            states = colours[s]
        else:
            raise MalformedDisk(f"state {s!r} of {c} not handled by grid variant {variant}")
        cluster = [c.child(k) for k in range(4)]
        vertices = set(cluster)
        sigma = {v: st for v, st in zip(cluster, states) if st is not None}
        delta = {}
        for (pa, ia), (pb, ib) in INTERNAL:
            delta[(Port(cluster[pa], ia), Port(cluster[pb], ib))] = None
        for key in g.incident(c):
            a, b = key
            if not (1 <= a.index <= 4 and 1 <= b.index <= 4):
                raise MalformedDisk(f"edge {a}->{b} exceeds grid degree 4")
            src = SIDES[a.index]
            dst = tuple(reversed(SIDES[b.index]))
            for ps, pt in zip(src, dst):
                u, w = a.owner.child(ps), b.owner.child(pt)
                vertices.add(u)
                vertices.add(w)
                delta[(Port(u, a.index), Port(w, b.index))] = g.delta[key]
        return Graph(frozenset(vertices), sigma, delta, 4, check=False)

    sigma = frozenset(colours) if colours else None
    name = "grid" if variant == "plain" else f"grid-{variant}"
    return LocalRule(
        name, 0, fn, bound=12, fanout=4, depths=(1, 1), pi=4, sigma=sigma, out_sigma=sigma,
        params={"variant": variant},
    )


def builtin_rules() -> dict[str, LocalRule]:
    return {
        "identity": identity_rule(),
        "xor-ca": xor_ca_rule(),
        "grid": inflating_grid_rule("plain"),
        "grid-grey-black": inflating_grid_rule("grey-black"),
        "grid-grey-white-black": inflating_grid_rule("grey-white-black"),
        "perm": permutation_rule({"0": "1", "1": "0"}),
    }
