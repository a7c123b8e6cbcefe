"""Sampled and exhaustive checks of the dynamics, local-rule and causality axioms.

Every check returns a :class:`VerificationReport`.  Failing reports carry the
graphs that witness the failure plus the seed that reproduces them.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from cgd.engine import Dynamics, composed_radius, evaluate
from cgd.errors import CGDError, MalformedDisk, SpaceTooLarge
from cgd.graph import (
    Disk,
    Graph,
    PointedGraph,
    Port,
    disk,
    find_conflict,
    induced_subgraph,
    neighbors,
    rename,
    restrict,
)
from cgd.io import serialize_graph
from cgd.names import Renaming, VertexName
from cgd.rules import LocalRule
from cgd.sampling import DEFAULT_SIGMA, perturb_outside, sample_graph

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class VerificationReport:
    property: str
    verdict: str
    samples: int
    seed: int | None = None
    detail: str = ""
    counterexample: dict = field(default_factory=dict)
    subchecks: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "samples": self.samples,
            "seed": self.seed,
            "detail": self.detail,
            "subchecks": dict(self.subchecks),
            "data": {k: _jsonable(v) for k, v in self.data.items()},
            "counterexample": {k: _doc(v) for k, v in self.counterexample.items()},
        }

    def to_text(self) -> str:
        head = f"{self.verdict.upper()}\t{self.property}\tsamples={self.samples}\tseed={self.seed}"
        if self.detail:
            head += f"\t{self.detail}"
        lines = [head]
        for k, v in self.subchecks.items():
            lines.append(f"  check {k}: {v}")
        for k, v in self.data.items():
            lines.append(f"  data {k}: {_jsonable(v)}")
        for label, g in self.counterexample.items():
            lines.append(f"  counterexample {label}:")
            lines.extend("    " + ln for ln in _doc(g).splitlines())
        return "\n".join(lines)


def _doc(g) -> str:
    if isinstance(g, Disk):
        g = g.pointed
    if isinstance(g, (Graph, PointedGraph)):
        return serialize_graph(g)
    return str(g)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


# -- finite graph spaces -------------------------------------------------------

@dataclass(frozen=True)
class GraphSpace:
    """All graphs on ``v1..vk`` (``k <= n``) with total states over ``sigma``.

    ``wiring="all"`` enumerates every port-monogamous edge set; ``"line"``
    only edges ``x:2 -> y:1`` (disjoint paths and cycles).
    """

    n: int = 3
    sigma: tuple = DEFAULT_SIGMA
    delta: tuple = (None,)
    pi: int = 2
    wiring: str = "all"
    max_size: int = 200_000

    def _matchings(self, k: int) -> int:
        D = len(self.delta)
        if self.wiring == "line":
            return sum(math.comb(k, j) ** 2 * math.factorial(j) * D ** j for j in range(k + 1))
        P = k * self.pi
        return sum(
            math.comb(P, 2 * m) * _double_factorial(2 * m - 1) * (2 * D) ** m for m in range(P // 2 + 1)
        )

    def size(self) -> int:
        return sum(len(self.sigma) ** k * self._matchings(k) for k in range(self.n + 1))

    def check_size(self) -> None:
        if self.size() > self.max_size:
            raise SpaceTooLarge(f"space has {self.size()} graphs, limit {self.max_size}")

    def names(self, k: int) -> list[VertexName]:
        return [VertexName(f"v{i}") for i in range(1, k + 1)]

    def _edge_sets(self, vs: list[VertexName]) -> Iterator[dict]:
        if self.wiring == "line":
            outs = [Port(v, 2) for v in vs]
            ins = [Port(v, 1) for v in vs]

            def rec(i, used, acc):
                if i == len(outs):
                    yield dict(acc)
                    return
                yield from rec(i + 1, used, acc)
                for b in ins:
                    if b in used:
                        continue
                    for d in self.delta:
                        acc[(outs[i], b)] = d
                        yield from rec(i + 1, used | {b}, acc)
                        del acc[(outs[i], b)]

            yield from rec(0, frozenset(), {})
            return
        ports = [Port(v, i) for v in vs for i in range(1, self.pi + 1)]

        def rec_all(rest, acc):
            if not rest:
                yield dict(acc)
                return
            p, tail = rest[0], rest[1:]
            yield from rec_all(tail, acc)
            for j, q in enumerate(tail):
                remaining = tail[:j] + tail[j + 1:]
                for key in ((p, q), (q, p)):
                    for d in self.delta:
                        acc[key] = d
                        yield from rec_all(remaining, acc)
                        del acc[key]

        yield from rec_all(ports, {})

    def __iter__(self) -> Iterator[Graph]:
        for k in range(self.n + 1):
            vs = self.names(k)
            edge_sets = list(self._edge_sets(vs))
            for states in itertools.product(self.sigma, repeat=k):
                sigma = dict(zip(vs, states))
                for edges in edge_sets:
                    yield Graph(frozenset(vs), sigma, edges, self.pi, check=False)

    @classmethod
    def parse(cls, text: str, base: "GraphSpace") -> "GraphSpace":
        """Override fields from ``n=3,sigma=2,pi=2``; ``sigma`` is a count."""
        kw = {}
        for part in filter(None, text.split(",")):
            key, _, val = part.partition("=")
            key = key.strip()
            if key == "n":
                kw["n"] = int(val)
            elif key == "pi":
                kw["pi"] = int(val)
            elif key == "sigma":
                count = int(val)
                states = list(base.sigma)
                kw["sigma"] = tuple(states[:count]) if count <= len(states) else tuple(
                    str(i) for i in range(count)
                )
            elif key == "max":
                kw["max_size"] = int(val)
            else:
                raise ValueError(f"unknown space field {key!r}")
        return cls(**{**base.__dict__, **kw})


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def default_space(rule: LocalRule, n: int | None = None) -> GraphSpace:
    sigma = tuple(sorted(rule.sigma)) if rule.sigma else DEFAULT_SIGMA
    pi = rule.pi or 2
    if rule.family == "line":
        return GraphSpace(n=3 if n is None else n, sigma=sigma, pi=2, wiring="line")
    if pi >= 4:
        return GraphSpace(n=1 if n is None else n, sigma=sigma, pi=pi)
    return GraphSpace(n=3 if n is None else n, sigma=sigma, pi=pi)


# -- helpers ---------------------------------------------------------------------

def _rule(F) -> LocalRule:
    return F.rule if isinstance(F, Dynamics) else F


def _engine_failure(report: VerificationReport, err: CGDError, G: Graph) -> VerificationReport:
    report.verdict = FAIL
    report.detail = f"evaluation failed: {type(err).__name__}: {err}"
    report.counterexample["graph"] = G
    return report


def _sample(rng: random.Random, f: LocalRule, max_n: int) -> Graph:
    for _ in range(100):
        G = sample_graph(rng, f.family, max_n, f.sigma, f.pi)
        if f.accepts(G):
            return G
    raise CGDError(f"could not sample an input accepted by {f.name}")


def _random_disk(rng: random.Random, f: LocalRule, max_n: int) -> Disk:
    G = _sample(rng, f, max_n)
    v = rng.choice(sorted(G.vertices))
    return disk(G, (v,), f.view_radius)


def random_renaming(rng: random.Random, names: Sequence[VertexName]) -> Renaming:
    names = sorted(names)
    pool = list(names)
    for j in range(len(names)):
        path = tuple(rng.randrange(3) for _ in range(rng.randrange(2)))
        pool.append(VertexName(f"r{j}", path))
    targets = rng.sample(pool, len(names))
    return Renaming(dict(zip(names, targets)))


def _fresh_apart(disks: list[Disk]) -> list[Disk]:
    """Rename the last disk so the family has empty common name intersection."""
    common = set.intersection(*(set(d.graph.vertices) for d in disks))
    if not common:
        return disks
    R = Renaming({w: VertexName(f"fresh{i}") for i, w in enumerate(sorted(common))})
    return disks[:-1] + [rename(R, disks[-1])]


def _naming_ok(f: LocalRule, d: Disk, img: Graph) -> VertexName | None:
    src = d.graph.vertices
    lo, hi = f.depths
    limit = max(1, f.fanout)
    for w in img.vertices:
        if not any(
            w.strip(k) in src and all(s < limit for s in w.tail(k))
            for k in range(lo, hi + 1)
            if w.strip(k) is not None
        ):
            return w
    return None


# -- dynamics axioms -------------------------------------------------------------

def check_dynamics_axioms(f, samples: int = 200, seed: int = 0, max_n: int = 6) -> VerificationReport:
    """Conjugacy and freshness (families of 2 and 3 disks) plus naming discipline."""
    f = _rule(f)
    rng = random.Random(seed)
    report = VerificationReport("dynamics", PASS, samples, seed)
    sub = {"conjugacy": PASS, "naming": PASS, "freshness-2": PASS, "freshness-3": PASS}

    for _ in range(samples):
        if sub["conjugacy"] != PASS:
            break
        D = _random_disk(rng, f, max_n)
        R = random_renaming(rng, D.graph.vertices)
        Rc = f.conjugate(R)
        if Rc is None:
            sub["conjugacy"] = INCONCLUSIVE
            report.detail = "mixed naming depth: no fixed conjugate"
            break
        img = f.apply(D)
        bad = _naming_ok(f, D, img)
        if bad is not None and sub["naming"] == PASS:
            sub["naming"] = FAIL
            report.counterexample.setdefault("naming_disk", D)
            report.data["naming_vertex"] = str(bad)
        lhs = f.apply(rename(R, D))
        try:
            rhs = rename(Rc, img)
        except CGDError:
            rhs = None
        if lhs != rhs:
            sub["conjugacy"] = FAIL
            report.counterexample.update({"conjugacy_disk": D, "conjugacy_renamed": rename(R, D)})
            report.data["renaming"] = repr(R)

    for k in (2, 3):
        key = f"freshness-{k}"
        for _ in range(samples):
            family = _fresh_apart([_random_disk(rng, f, max_n) for _ in range(k)])
            images = [f.apply(d) for d in family]
            shared = set.intersection(*(set(g.vertices) for g in images))
            if shared:
                sub[key] = FAIL
                for i, d in enumerate(family, 1):
                    report.counterexample[f"{key}_disk{i}"] = d
                report.data[f"{key}_shared"] = sorted(map(str, shared))
                break

    report.subchecks = sub
    if FAIL in sub.values():
        report.verdict = FAIL
        report.detail = "failed: " + ", ".join(k for k, v in sub.items() if v == FAIL)
    elif INCONCLUSIVE in sub.values():
        report.verdict = INCONCLUSIVE
    return report


# -- local-rule axioms -------------------------------------------------------------

def check_local_rule(f, space: GraphSpace | None = None) -> VerificationReport:
    """Exhaustive pairwise consistency and boundedness over a finite space."""
    f = _rule(f)
    space = space or default_space(f)
    space.check_size()
    report = VerificationReport("local", PASS, 0, None)
    checked = 0
    for G in space:
        if not f.accepts(G):
            continue
        checked += 1
        disks = [disk(G, (v,), f.view_radius) for v in sorted(G.vertices)]
        try:
            images = [f.apply(d) for d in disks]
        except MalformedDisk as e:
            report.verdict = FAIL
            report.detail = f"rule undefined on an accepted input: {e}"
            report.counterexample["graph"] = G
            break
        for d, img in zip(disks, images):
            if len(img) > f.bound:
                report.verdict = FAIL
                report.detail = f"image of {d.center} has {len(img)} > {f.bound} vertices"
                report.counterexample.update({"graph": G, "disk": d})
                break
        if report.failed:
            break
        for i, j in itertools.combinations(range(len(disks)), 2):
            c = find_conflict(images[i], images[j])
            if c is not None:
                report.verdict = FAIL
                report.detail = f"images of {disks[i].center} and {disks[j].center} disagree: {c}"
                report.counterexample.update({"graph": G, "disk_u": disks[i], "disk_v": disks[j]})
                break
        if report.failed:
            break
    report.samples = checked
    report.data["space_size"] = space.size()
    return report


# -- causality -------------------------------------------------------------------

def check_causality(
    F, samples: int = 200, seed: int = 0, radius: int | None = None, max_n: int = 8
) -> VerificationReport:
    """Uniform continuity at ``radius`` (default: declared radius) and bounded fan-out.

    Each sample draws ``G``, a vertex ``v`` and a graph ``H`` that agrees with
    ``G`` on the disk at ``v`` but differs beyond it; the output subgraphs
    induced around ``a^-1(v)`` must coincide.
    """
    f = _rule(F)
    rho = f.radius if radius is None else radius
    rng = random.Random(seed)
    wiring = "line" if f.family == "line" else "all"
    sigma = tuple(sorted(f.sigma)) if f.sigma else DEFAULT_SIGMA
    report = VerificationReport("causality", PASS, samples, seed)
    sub = {"uniform-continuity": PASS, "boundedness": PASS, "antecedents": PASS}
    max_fanout = 0
    for _ in range(samples):
        G = _sample(rng, f, max_n)
        v = rng.choice(sorted(G.vertices))
        D = disk(G, (v,), rho)
        H = None
        for _ in range(20):
            cand = perturb_outside(rng, G, v, rho, sigma, wiring)
            if cand != G and f.accepts(cand) and disk(cand, (v,), rho) == D:
                H = cand
                break
        try:
            eG = evaluate(f, G)
        except CGDError as err:
            report.subchecks = sub
            return _engine_failure(report, err, G)
        succ = eG.provenance.successors((v,))
        max_fanout = max(max_fanout, len(succ))
        if len(succ) > f.bound and sub["boundedness"] == PASS:
            sub["boundedness"] = FAIL
            report.counterexample["boundedness_graph"] = G
            report.data["fanout_vertex"] = str(v)
        empty = [w for w, a in eG.provenance.items() if not a]
        if empty and sub["antecedents"] == PASS:
            sub["antecedents"] = FAIL
            report.counterexample["antecedents_graph"] = G
            report.data["orphan_vertex"] = str(empty[0])
        if H is None or sub["uniform-continuity"] != PASS:
            continue
        try:
            eH = evaluate(f, H)
        except CGDError as err:
            report.subchecks = sub
            return _engine_failure(report, err, H)
        outG = induced_subgraph(eG.graph, succ)
        outH = induced_subgraph(eH.graph, eH.provenance.successors((v,)))
        if outG != outH:
            sub["uniform-continuity"] = FAIL
            report.counterexample.update({"G": G, "H": H, "shared_disk": D})
            report.data["vertex"] = str(v)
    report.subchecks = sub
    report.data["radius"] = rho
    report.data["max_fanout"] = max_fanout
    if FAIL in sub.values():
        report.verdict = FAIL
        report.detail = "failed: " + ", ".join(k for k, val in sub.items() if val == FAIL)
    return report


# -- limits ------------------------------------------------------------------------

def truncation(G: Graph, A, s: int) -> Graph:
    """``G(s)``: plain subgraph on the vertices within distance ``s`` of ``A``."""
    return restrict(G, neighbors(G, A, s))


def check_limit_preservation(F, G: Graph, A, r_max: int = 3) -> VerificationReport:
    """Outputs of the truncations ``G(s)`` must converge to ``F(G)`` around ``a^-1(A)``.

    For each output radius ``r'`` the stabilisation index is the least ``s``
    after which every truncation agrees with ``F(G)`` on the radius-``r'``
    disk.  A radius-``r`` rule must stabilise by ``2 r r' + r + r' + 1``.
    """
    f = _rule(F)
    A = [a if isinstance(a, VertexName) else VertexName.parse(a) for a in A]
    report = VerificationReport("limits", PASS, 0, None)
    try:
        full = evaluate(f, G)
    except CGDError as err:
        return _engine_failure(report, err, G)
    targets = full.provenance.successors(A)
    limit = len(G)
    ref = {rp: disk(full.graph, targets, rp) for rp in range(r_max + 1)}
    agree = {}
    for s in range(limit + 1):
        Gs = truncation(G, A, s)
        try:
            out = evaluate(f, Gs, provenance=False).graph
        except CGDError as err:
            return _engine_failure(report, err, Gs)
        for rp in range(r_max + 1):
            agree[s, rp] = disk(out, targets, rp) == ref[rp]
    report.samples = limit + 1
    stab = {}
    for rp in range(r_max + 1):
        idx = limit + 1
        for s in range(limit, -1, -1):
            if not agree[s, rp]:
                break
            idx = s
        stab[rp] = idx
        allowed = composed_radius(f.radius, rp) + 1
        if idx > allowed:
            report.verdict = FAIL
            report.detail = f"radius {rp} stabilises only at s={idx} > {allowed}"
            report.counterexample.setdefault("graph", PointedGraph(G, frozenset(A)))
    report.data["stabilisation"] = stab
    return report


# -- invertibility and reversibility ---------------------------------------------

def check_invertibility(F, space: GraphSpace | None = None):
    """Tabulate ``F`` over ``space``; return ``(report, inverse_table_or_None)``."""
    f = _rule(F)
    space = space or default_space(f)
    space.check_size()
    table: dict[Graph, Graph] = {}
    report = VerificationReport("invertibility", PASS, 0, None)
    vertex_preserving = True
    for G in space:
        if not f.accepts(G):
            continue
        report.samples += 1
        try:
            img = evaluate(f, G, provenance=False).graph
        except CGDError as err:
            return _engine_failure(report, err, G), None
        if len(img) != len(G):
            vertex_preserving = False
        prev = table.get(img)
        if prev is not None and prev != G:
            report.verdict = FAIL
            report.detail = "not injective: two graphs share one image"
            report.counterexample.update({"preimage1": prev, "preimage2": G, "image": img})
            report.subchecks["vertex-preserving"] = PASS if vertex_preserving else FAIL
            return report, None
        table[img] = G
    report.subchecks["vertex-preserving"] = PASS if vertex_preserving else FAIL
    report.data["table_size"] = len(table)
    return report, table


def check_reversibility(F, table: dict | None = None, r_max: int = 3, space: GraphSpace | None = None):
    """Least radius at which the tabulated inverse meets causality condition (i)."""
    f = _rule(F)
    if table is None:
        inv, table = check_invertibility(f, space)
        if table is None:
            inv.property = "reversibility"
            inv.detail = "not invertible on the space: " + inv.detail
            return inv
    prov = {H: evaluate(f, G).provenance for H, G in table.items()}
    report = VerificationReport("reversibility", FAIL, len(table), None)
    for rho in range(r_max + 1):
        seen: dict = {}
        witness = None
        for H, G in table.items():
            P = prov[H]
            for w in sorted(H.vertices):
                key = (w, disk(H, (w,), rho))
                val = induced_subgraph(G, P.antecedents(w))
                old = seen.setdefault(key, (val, G))
                if old[0] != val:
                    witness = (key[1], old[1], G)
                    break
            if witness:
                break
        if witness is None:
            report.verdict = PASS
            report.data["radius"] = rho
            report.detail = f"inverse is causal at radius {rho}"
            return report
        report.counterexample = {"shared_disk": witness[0], "preimage1": witness[1], "preimage2": witness[2]}
    report.detail = f"no radius <= {r_max} makes the inverse causal"
    return report
