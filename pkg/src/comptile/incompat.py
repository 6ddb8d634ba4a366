"""Incompatibility systems: storage, bound reports, queries, generation.

A system F over a graph G assigns to each vertex v a family F_v of
unordered pairs {e, e'} of edges whose intersection is exactly {v}.  Two
edges are incompatible when some F_v contains them; a subgraph is
compatible when no pair of its edges is incompatible.  Edges that share
no vertex are always compatible, so a pair {e, e'} can only ever live in
F_v for the single shared vertex v.

The Delta-bound of a system is the maximum, over vertices v and edges e
at v, of the number of other edges at v declared incompatible with e.

File format: one line per pair, "v a b" meaning {va, vb} in F_v, ids
0-based, '#' starts a comment.  JSON mirror: {"pairs": [[v, a, b], ...]}.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import FormatError, ValidationError
from .graphs import Graph
from .util import bits


def edge_key(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


def _pair_key(e: tuple, f: tuple) -> tuple:
    return (e, f) if e <= f else (f, e)


@dataclass(frozen=True)
class BoundReport:
    delta: int
    per_vertex: dict  # v -> max partner count over edges at v

    def to_json_dict(self) -> dict:
        return {"delta": self.delta,
                "per_vertex": {str(v): c for v, c in sorted(self.per_vertex.items())}}


class IncompatibilitySystem:
    """Immutable per-vertex family of incompatible incident-edge pairs."""

    __slots__ = ("graph", "_pairs_at", "_partner_count")

    def __init__(self, graph: Graph, triples):
        """Build from (v, a, b) triples meaning {va, vb} in F_v."""
        pairs_at = {}
        for v, a, b in triples:
            if a == b:
                raise ValidationError(f"pair at {v} names the same edge twice")
            for x in (a, b):
                if not (0 <= x < graph.n) or not (0 <= v < graph.n):
                    raise ValidationError(f"triple ({v},{a},{b}) outside vertex range")
                if not graph.has_edge(v, x):
                    raise ValidationError(f"({v},{x}) is not an edge of the bound graph")
            key = _pair_key(edge_key(v, a), edge_key(v, b))
            pairs_at.setdefault(v, set()).add(key)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "_pairs_at",
                           {v: frozenset(s) for v, s in pairs_at.items()})
        counts = {}
        for v, pairs in self._pairs_at.items():
            local = {}
            for e, f in pairs:
                local[e] = local.get(e, 0) + 1
                local[f] = local.get(f, 0) + 1
            counts[v] = local
        object.__setattr__(self, "_partner_count", counts)

    def __setattr__(self, *_):
        raise AttributeError("IncompatibilitySystem is immutable")

    @classmethod
    def empty(cls, graph: Graph) -> "IncompatibilitySystem":
        return cls(graph, ())

    def triples(self) -> list:
        """Canonical (v, a, b) list with a < b, sorted."""
        out = []
        for v, pairs in self._pairs_at.items():
            for e, f in pairs:
                a = e[0] if e[1] == v else e[1]
                b = f[0] if f[1] == v else f[1]
                a, b = min(a, b), max(a, b)
                out.append((v, a, b))
        return sorted(out)

    @property
    def total_pairs(self) -> int:
        return sum(len(s) for s in self._pairs_at.values())

    def pairs_at(self, v: int) -> frozenset:
        return self._pairs_at.get(v, frozenset())

    def partner_count(self, v: int, e: tuple) -> int:
        return self._partner_count.get(v, {}).get(e, 0)

    def are_compatible(self, e: tuple, f: tuple) -> bool:
        """False iff e and f share a vertex v and {e, f} lies in F_v."""
        e = edge_key(*e)
        f = edge_key(*f)
        for edge in (e, f):
            if not (0 <= edge[0] < self.graph.n and 0 <= edge[1] < self.graph.n) \
                    or not self.graph.has_edge(*edge):
                raise ValidationError(f"{edge} is not an edge of the bound graph")
        if e == f:
            return True
        shared = set(e) & set(f)
        if not shared:
            return True
        v = shared.pop()
        return _pair_key(e, f) not in self._pairs_at.get(v, frozenset())

    def is_compatible_subgraph(self, edges) -> tuple:
        """(ok, witness): witness is the first incompatible pair, else None.

        Only pairs sharing a vertex are inspected; disjoint pairs are
        compatible by definition.
        """
        edges = sorted(edge_key(*e) for e in set(map(tuple, edges)))
        at = {}
        for e in edges:
            if not self.graph.has_edge(*e):
                raise ValidationError(f"{e} is not an edge of the bound graph")
            at.setdefault(e[0], []).append(e)
            at.setdefault(e[1], []).append(e)
        for v in sorted(at):
            pairs = self._pairs_at.get(v)
            if not pairs:
                continue
            local = at[v]
            for i in range(len(local)):
                for j in range(i + 1, len(local)):
                    if _pair_key(local[i], local[j]) in pairs:
                        return False, (local[i], local[j])
        return True, None

    def bound_report(self) -> BoundReport:
        per_vertex = {v: max(counts.values(), default=0)
                      for v, counts in self._partner_count.items()}
        delta = max(per_vertex.values(), default=0)
        return BoundReport(delta, per_vertex)

    def induced(self, vertices) -> "IncompatibilitySystem":
        """Restriction to the induced subgraph on ``vertices`` (relabeled).

        Must be paired with graph.induced(vertices): new ids follow the
        same sorted order.
        """
        old = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(old)}
        sub_graph, _ = self.graph.induced(old)
        triples = []
        for v, a, b in self.triples():
            if v in pos and a in pos and b in pos:
                triples.append((pos[v], pos[a], pos[b]))
        return IncompatibilitySystem(sub_graph, triples)

    def with_added(self, triples) -> "IncompatibilitySystem":
        return IncompatibilitySystem(self.graph, self.triples() + list(triples))


def count_bad_pairs_at(f: IncompatibilitySystem, v: int) -> int:
    """Pairs {v1, v2} of neighbors of v that obstruct a triangle at v.

    A pair counts when (1) vv1 and vv2 are incompatible at v, or (2)
    v1v2 is an edge and vv1 is incompatible with v1v2 at v1, or the same
    with the roles of v1 and v2 swapped.  The union of the three events
    is what blocks {v, v1, v2} from being a compatible triangle through
    an incompatibility involving v's edges.
    """
    g = f.graph
    nbrs = g.neighbors(v)
    count = 0
    for i in range(len(nbrs)):
        v1 = nbrs[i]
        e1 = edge_key(v, v1)
        for j in range(i + 1, len(nbrs)):
            v2 = nbrs[j]
            e2 = edge_key(v, v2)
            if _pair_key(e1, e2) in f.pairs_at(v):
                count += 1
                continue
            if g.has_edge(v1, v2):
                cross = edge_key(v1, v2)
                if (_pair_key(e1, cross) in f.pairs_at(v1)
                        or _pair_key(e2, cross) in f.pairs_at(v2)):
                    count += 1
    return count


def random_bounded_system(g: Graph, mu, seed: int) -> IncompatibilitySystem:
    """Seeded random system that is genuinely floor(mu*n)-bounded.

    Every (v, e) attempts to pick floor(mu*n) incompatible partners
    without replacement among the other edges at v; a pair is inserted
    only while both of its edges still have fewer than floor(mu*n)
    partners at v, so the cap holds for the total count (own picks plus
    pairs contributed by sibling edges).  Reproducible from the seed;
    the achieved bound is whatever bound_report() measures.
    """
    mu = Fraction(mu)
    n = g.n
    if mu < 0:
        raise ValidationError("mu must be non-negative")
    q = math.floor(mu * n)
    rng = random.Random(seed)
    triples = []
    if q > 0:
        count = {}  # (v, edge) -> partners so far
        for v in range(n):
            edges_at = [edge_key(v, u) for u in bits(g.adj[v])]
            present = set()
            for e in edges_at:
                cands = [f2 for f2 in edges_at if f2 != e]
                rng.shuffle(cands)
                added = 0
                for f2 in cands:
                    if added >= q or count.get((v, e), 0) >= q:
                        break
                    if count.get((v, f2), 0) >= q:
                        continue
                    key = _pair_key(e, f2)
                    if key in present:
                        continue
                    present.add(key)
                    count[(v, e)] = count.get((v, e), 0) + 1
                    count[(v, f2)] = count.get((v, f2), 0) + 1
                    added += 1
            for e, f2 in present:
                a = e[0] if e[1] == v else e[1]
                b = f2[0] if f2[1] == v else f2[1]
                triples.append((v, a, b))
    return IncompatibilitySystem(g, triples)


# ---------------------------------------------------------------------------
# file formats


def format_system(f: IncompatibilitySystem) -> str:
    lines = [f"{v} {a} {b}" for v, a, b in f.triples()]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_system(text: str, graph: Graph) -> IncompatibilitySystem:
    triples = []
    for ln in (raw.strip() for raw in text.splitlines()):
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"bad incompatibility line {ln!r}")
        try:
            triples.append(tuple(int(x) for x in parts))
        except ValueError as exc:
            raise FormatError(f"non-integer incompatibility line {ln!r}") from exc
    try:
        return IncompatibilitySystem(graph, triples)
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def system_to_json(f: IncompatibilitySystem) -> dict:
    return {"pairs": [list(t) for t in f.triples()]}


def system_from_json(obj, graph: Graph) -> IncompatibilitySystem:
    if not isinstance(obj, dict) or "pairs" not in obj:
        raise FormatError("incompatibility JSON must be an object with a 'pairs' key")
    try:
        triples = [tuple(int(x) for x in row) for row in obj["pairs"]]
    except (TypeError, ValueError) as exc:
        raise FormatError("incompatibility JSON pairs must be integer triples") from exc
    if any(len(t) != 3 for t in triples):
        raise FormatError("incompatibility JSON pairs must be integer triples")
    try:
        return IncompatibilitySystem(graph, triples)
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def parse_system_any(text: str, graph: Graph) -> IncompatibilitySystem:
    """Accept either the line format or the JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad incompatibility JSON: {exc}") from exc
        return system_from_json(obj, graph)
    return parse_system(text, graph)
