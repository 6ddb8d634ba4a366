"""Exact enumeration of compatible copies, factor decision, tilings.

Copies are counted as subgraphs: two embeddings with the same image
vertex set and the same image edge set are one copy, matching how the
counting arguments treat them.  Enumeration is backtracking over an
adjacency-pruned, compatibility-pruned search tree; the factor decision
is exact-cover search (rows = compatible copies, columns = vertices)
branching on the uncovered vertex with the fewest admissible copies.

Results are tri-state where search can be cut off: FOUND / NONE /
INDETERMINATE.  NONE always means the search space was exhausted; budget
exhaustion is never silently reported as absence.

A tiling is a set of vertex-disjoint copies, each individually
compatible.  Edges of distinct copies never share a vertex, so the union
of compatible copies is automatically a compatible subgraph; no
cross-copy check is needed or performed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BudgetExceeded, ValidationError
from .graphs import Graph, MultipartiteSpec, complete_multipartite
from .incompat import IncompatibilitySystem, edge_key
from .util import bits, mask_of

FOUND = "found"
NONE = "none"
INDETERMINATE = "indeterminate"

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class Embedding:
    """Injective pattern-to-host map with its image subgraph."""

    phi: tuple            # phi[i] = host vertex of pattern vertex i
    vertices: tuple       # sorted image vertices
    edges: tuple          # sorted image edges (u, v) with u < v

    @classmethod
    def from_phi(cls, pattern: Graph, phi) -> "Embedding":
        phi = tuple(phi)
        edges = sorted(edge_key(phi[u], phi[v]) for u, v in pattern.edges())
        return cls(phi, tuple(sorted(phi)), tuple(edges))

    @property
    def key(self) -> tuple:
        return (self.vertices, self.edges)

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint copies; covered() is the union of their images."""

    embeddings: tuple

    def covered(self) -> int:
        m = 0
        for e in self.embeddings:
            m |= e.mask
        return m

    def covered_count(self) -> int:
        return self.covered().bit_count()

    def uncovered(self, g: Graph) -> list:
        return list(bits(((1 << g.n) - 1) & ~self.covered()))

    def __len__(self):
        return len(self.embeddings)


@dataclass
class CopyEnumeration:
    copies: list
    truncated: bool
    expansions: int

    def __iter__(self):
        return iter(self.copies)

    def __len__(self):
        return len(self.copies)


@dataclass
class FactorResult:
    status: str                      # found / none / indeterminate
    tiling: object = None            # Tiling when found
    reason: str = ""                 # divisibility / exhausted / budget
    expansions: int = 0
    copies_considered: int = 0


@dataclass
class MaxTilingResult:
    tiling: Tiling
    optimal: bool
    expansions: int


def _pattern_order(h: Graph) -> list:
    """Static assignment order: BFS per component from a max-degree root.

    Keeps every prefix as connected as the pattern allows, so candidate
    sets stay small (each new vertex is adjacency-constrained by at least
    one already-placed neighbor whenever the component permits).
    """
    order = []
    placed = 0
    while len(order) < h.n:
        remaining = [v for v in range(h.n) if not placed >> v & 1]
        root = max(remaining, key=lambda v: (h.degree(v), -v))
        queue = [root]
        placed |= 1 << root
        while queue:
            v = queue.pop(0)
            order.append(v)
            nxt = [u for u in h.neighbors(v) if not placed >> u & 1]
            nxt.sort(key=lambda u: (-h.degree(u), u))
            for u in nxt:
                placed |= 1 << u
                queue.append(u)
    return order


def _is_complete(h: Graph) -> bool:
    return h.m == h.n * (h.n - 1) // 2


class _CompatChecker:
    """Incremental compatibility bookkeeping for a growing image subgraph."""

    __slots__ = ("f", "edges_at")

    def __init__(self, f: IncompatibilitySystem):
        self.f = f
        self.edges_at = {}  # host vertex -> list of image edges incident

    def ok_to_add(self, new_edges) -> bool:
        """Are the new edges compatible with each other and the image so far?

        All new edges share their new endpoint, so pairs among them are
        checked at that vertex; pairs against existing image edges are
        checked at every shared endpoint.
        """
        f = self.f
        for i, e in enumerate(new_edges):
            for g2 in new_edges[i + 1:]:
                if not f.are_compatible(e, g2):
                    return False
            for v in e:
                for old in self.edges_at.get(v, ()):
                    if not f.are_compatible(e, old):
                        return False
        return True

    def add(self, new_edges):
        for e in new_edges:
            for v in e:
                self.edges_at.setdefault(v, []).append(e)

    def remove(self, new_edges):
        for e in new_edges:
            for v in e:
                self.edges_at[v].pop()


def enumerate_compatible_copies(pattern: Graph, g: Graph,
                                f: IncompatibilitySystem = None,
                                budget: int = DEFAULT_BUDGET,
                                pool: int = None) -> CopyEnumeration:
    """Every compatible copy of ``pattern`` in ``g``, one per image subgraph.

    ``pool`` restricts image vertices to a bitmask.  Copies come back in
    canonical order (sorted image vertices, then sorted image edges).  A
    blown budget yields truncated=True; the copies found so far are still
    valid.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    if f.graph is not g and f.graph != g:
        raise ValidationError("incompatibility system is bound to a different graph")
    if pattern.n == 0:
        raise ValidationError("empty pattern")
    if pool is None:
        pool = (1 << g.n) - 1

    order = _pattern_order(pattern)
    pos_in_order = {v: i for i, v in enumerate(order)}
    preds = []  # for each step, pattern neighbors already placed
    for i, pv in enumerate(order):
        preds.append([u for u in pattern.neighbors(pv) if pos_in_order[u] < i])

    clique_mode = _is_complete(pattern)
    phi = {}
    checker = _CompatChecker(f)
    seen = set()
    out = []
    expansions = 0
    truncated = False

    def rec(i: int, used: int):
        nonlocal expansions, truncated
        if truncated:
            return
        if i == pattern.n:
            full_phi = tuple(phi[v] for v in range(pattern.n))
            emb = Embedding.from_phi(pattern, full_phi)
            if clique_mode:
                out.append(emb)
            elif emb.key not in seen:
                seen.add(emb.key)
                out.append(emb)
            return
        pv = order[i]
        cands = pool & ~used
        for u in preds[i]:
            cands &= g.adj[phi[u]]
        if clique_mode and i > 0:
            # complete patterns: ascending images kill the automorphisms
            prev = phi[order[i - 1]]
            cands &= ~((1 << (prev + 1)) - 1)
        for c in bits(cands):
            expansions += 1
            if expansions > budget:
                truncated = True
                return
            new_edges = [edge_key(c, phi[u]) for u in preds[i]]
            if new_edges and not checker.ok_to_add(new_edges):
                continue
            phi[pv] = c
            checker.add(new_edges)
            rec(i + 1, used | 1 << c)
            checker.remove(new_edges)
            del phi[pv]

    rec(0, 0)
    out.sort(key=lambda e: e.key)
    return CopyEnumeration(out, truncated, expansions)


def enumerate_transversal_copies(spec: MultipartiteSpec, g: Graph,
                                 f: IncompatibilitySystem = None,
                                 parts: list = None,
                                 budget: int = DEFAULT_BUDGET) -> CopyEnumeration:
    """Compatible copies of K_r(h_1..h_r) inside the r-partite restriction
    of g to ``parts``, with exactly h_i image vertices in parts[i].

    Only cross-part edges exist in the restriction, which forces the
    pattern classes to align with the parts (a class split over two parts
    would leave another class with nowhere adjacent to sit), so choosing
    an ascending h_i-subset per part enumerates every copy exactly once.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    if parts is None or len(parts) != spec.r:
        raise ValidationError("need one vertex set per pattern part")
    parts = [sorted(set(p)) for p in parts]
    masks = [mask_of(p) for p in parts]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if masks[i] & masks[j]:
                raise ValidationError("parts must be pairwise disjoint")
    for i, (p, h_i) in enumerate(zip(parts, spec.sizes)):
        if len(p) < h_i:
            return CopyEnumeration([], False, 0)

    pattern, _ = complete_multipartite(spec)
    checker = _CompatChecker(f)
    chosen = []          # list per part of chosen host vertices
    out = []
    expansions = 0
    truncated = False
    other_mask = [0] * spec.r  # union of earlier parts' masks

    def place(part_idx: int, slot: int, min_v: int, cross_mask: int):
        """Pick vertex #slot of part part_idx, ids ascending within the part."""
        nonlocal expansions, truncated
        if truncated:
            return
        if slot == spec.sizes[part_idx]:
            next_part(part_idx + 1)
            return
        for v in parts[part_idx]:
            if v < min_v:
                continue
            if truncated:
                return
            # must be host-adjacent to every vertex chosen in other parts
            if cross_mask & ~g.adj[v]:
                continue
            expansions += 1
            if expansions > budget:
                truncated = True
                return
            new_edges = [edge_key(v, u) for i2 in range(part_idx) for u in chosen[i2]]
            if new_edges and not checker.ok_to_add(new_edges):
                continue
            chosen[part_idx].append(v)
            checker.add(new_edges)
            place(part_idx, slot + 1, v + 1, cross_mask)
            checker.remove(new_edges)
            chosen[part_idx].pop()

    def next_part(part_idx: int):
        if part_idx == spec.r:
            phi = [v for grp in chosen for v in grp]
            out.append(Embedding.from_phi(pattern, phi))
            return
        chosen.append([])
        cross = 0
        for grp in chosen[:-1]:
            cross |= mask_of(grp)
        place(part_idx, 0, 0, cross)
        chosen.pop()

    next_part(0)
    out.sort(key=lambda e: e.key)
    return CopyEnumeration(out, truncated, expansions)


def verify_embedding(g: Graph, f: IncompatibilitySystem, pattern: Graph,
                     emb: Embedding) -> bool:
    """Injective, adjacency-preserving, image compatible."""
    if len(set(emb.phi)) != pattern.n:
        return False
    if any(not 0 <= v < g.n for v in emb.phi):
        return False
    for u, v in pattern.edges():
        if not g.has_edge(emb.phi[u], emb.phi[v]):
            return False
    ok, _ = f.is_compatible_subgraph(emb.edges)
    return ok


def verify_tiling(g: Graph, f: IncompatibilitySystem, pattern: Graph,
                  tiling: Tiling, require_cover: bool = False) -> bool:
    used = 0
    for emb in tiling.embeddings:
        if not verify_embedding(g, f, pattern, emb):
            return False
        if used & emb.mask:
            return False
        used |= emb.mask
    if require_cover and used != (1 << g.n) - 1:
        return False
    return True


def find_compatible_factor(pattern: Graph, g: Graph,
                           f: IncompatibilitySystem = None,
                           budget: int = DEFAULT_BUDGET) -> FactorResult:
    """Exact compatible-factor decision via exact-cover search.

    NONE carries reason "divisibility" (|G| not divisible by |H|) or
    "exhausted" (complete search).  INDETERMINATE only ever means the
    budget ran out, either during copy enumeration or during the cover
    search.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    if pattern.n == 0:
        raise ValidationError("empty pattern")
    if g.n % pattern.n != 0:
        return FactorResult(NONE, reason="divisibility")
    if g.n == 0:
        return FactorResult(FOUND, tiling=Tiling(()))

    enum = enumerate_compatible_copies(pattern, g, f, budget=budget)
    rows = enum.copies
    row_masks = [e.mask for e in rows]
    by_vertex = [[] for _ in range(g.n)]
    for idx, mask in enumerate(row_masks):
        for v in bits(mask):
            by_vertex[v].append(idx)

    full = (1 << g.n) - 1
    expansions = enum.expansions
    chosen = []

    def search(covered: int):
        nonlocal expansions
        if covered == full:
            return True
        best_v, best_opts = -1, None
        for v in bits(full & ~covered):
            opts = [r for r in by_vertex[v] if not row_masks[r] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best_v, best_opts = v, opts
                if not opts:
                    return False
        for r in best_opts:
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded()
            chosen.append(r)
            if search(covered | row_masks[r]):
                return True
            chosen.pop()
        return False

    try:
        found = search(0)
    except BudgetExceeded:
        return FactorResult(INDETERMINATE, reason="budget",
                            expansions=expansions, copies_considered=len(rows))
    if found:
        tiling = Tiling(tuple(rows[r] for r in chosen))
        if not verify_tiling(g, f, pattern, tiling, require_cover=True):
            raise AssertionError("internal: factor failed re-verification")
        return FactorResult(FOUND, tiling=tiling,
                            expansions=expansions, copies_considered=len(rows))
    if enum.truncated:
        # absence over a truncated row set proves nothing
        return FactorResult(INDETERMINATE, reason="budget",
                            expansions=expansions, copies_considered=len(rows))
    return FactorResult(NONE, reason="exhausted",
                        expansions=expansions, copies_considered=len(rows))


def _first_copy_through(pattern: Graph, g: Graph, f: IncompatibilitySystem,
                        anchor: int, pool: int, priority: list) -> Embedding:
    """First compatible copy containing ``anchor`` inside ``pool``, or None.

    Host candidates are tried in ``priority`` order (a permutation of the
    vertices); the anchor is tried at every pattern position since the
    pattern's orbit structure is unknown.
    """
    order = _pattern_order(pattern)
    pos_in_order = {v: i for i, v in enumerate(order)}
    preds = [[u for u in pattern.neighbors(pv) if pos_in_order[u] < i]
             for i, pv in enumerate(order)]
    rank = {v: i for i, v in enumerate(priority)}
    checker = _CompatChecker(f)
    phi = {}

    def rec(i: int, used: int, anchor_at: int):
        if i == pattern.n:
            return Embedding.from_phi(pattern, tuple(phi[v] for v in range(pattern.n)))
        pv = order[i]
        cands_mask = pool & ~used
        for u in preds[i]:
            cands_mask &= g.adj[phi[u]]
        if i == anchor_at:
            cands = [anchor] if cands_mask >> anchor & 1 else []
        else:
            cands = sorted(bits(cands_mask), key=lambda v: rank.get(v, v))
        for c in cands:
            if i != anchor_at and c == anchor:
                continue
            new_edges = [edge_key(c, phi[u]) for u in preds[i]]
            if new_edges and not checker.ok_to_add(new_edges):
                continue
            phi[pv] = c
            checker.add(new_edges)
            hit = rec(i + 1, used | 1 << c, anchor_at)
            checker.remove(new_edges)
            del phi[pv]
            if hit is not None:
                return hit
        return None

    for anchor_step in range(pattern.n):
        hit = rec(0, 0, anchor_step)
        if hit is not None:
            return hit
    return None


def greedy_almost_tiling(pattern: Graph, g: Graph,
                         f: IncompatibilitySystem = None,
                         seed: int = 0) -> Tiling:
    """Maximal-by-inclusion tiling: repeatedly take the first compatible
    copy found through the next anchor in a seed-shuffled vertex order.

    An anchor with no copy inside the current uncovered set can never be
    covered later (the uncovered set only shrinks), so it is marked dead;
    when every vertex is covered or dead the tiling is maximal.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    rng = random.Random(seed)
    priority = list(range(g.n))
    rng.shuffle(priority)
    pool = (1 << g.n) - 1
    embs = []
    for anchor in priority:
        if not pool >> anchor & 1:
            continue
        emb = _first_copy_through(pattern, g, f, anchor, pool, priority)
        if emb is None:
            pool &= ~(1 << anchor)  # dead: no copy through it can appear later
            continue
        embs.append(emb)
        pool &= ~emb.mask
    return Tiling(tuple(embs))


def max_compatible_tiling(pattern: Graph, g: Graph,
                          f: IncompatibilitySystem = None,
                          budget: int = DEFAULT_BUDGET) -> MaxTilingResult:
    """Maximum-cardinality compatible tiling by branch and bound.

    Branches on the smallest undecided vertex: either some copy covers it
    or it stays uncovered.  The bound current + floor(free/h) prunes; the
    optimality flag is True only when the search completed in budget.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    enum = enumerate_compatible_copies(pattern, g, f, budget=budget)
    rows = enum.copies
    row_masks = [e.mask for e in rows]
    by_vertex = [[] for _ in range(g.n)]
    for idx, mask in enumerate(row_masks):
        for v in bits(mask):
            by_vertex[v].append(idx)
    h = pattern.n
    best = []
    expansions = enum.expansions
    complete = not enum.truncated
    chosen = []

    def search(v: int, covered: int, skipped: int):
        nonlocal best, expansions, complete
        while v < g.n and (covered | skipped) >> v & 1:
            v += 1
        free = g.n - covered.bit_count() - skipped.bit_count()
        if len(chosen) + free // h <= len(best):
            return
        if v == g.n:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        for r in by_vertex[v]:
            if row_masks[r] & (covered | skipped):
                continue
            expansions += 1
            if expansions > budget:
                complete = False
                return
            chosen.append(r)
            search(v + 1, covered | row_masks[r], skipped)
            chosen.pop()
            if not complete:
                return
        search(v + 1, covered, skipped | 1 << v)

    search(0, 0, 0)
    tiling = Tiling(tuple(rows[r] for r in best))
    return MaxTilingResult(tiling, complete, expansions)


def good_pair(g: Graph, f: IncompatibilitySystem, v: int, emb: Embedding) -> bool:
    """Can ``v`` extend the copy: adjacent to the whole image, its edges
    mutually compatible at v, and each new edge compatible with every
    image edge at the shared endpoint.

    The last clause goes beyond the bare good-pair definition; it is the
    closure needed for the extension to yield a compatible larger copy.
    """
    if v in emb.vertices:
        raise ValidationError("v must lie outside the image")
    ok, _ = f.is_compatible_subgraph(emb.edges)
    if not ok:
        return False
    for u in emb.vertices:
        if not g.has_edge(v, u):
            return False
    new_edges = [edge_key(v, u) for u in emb.vertices]
    for i, e in enumerate(new_edges):
        for e2 in new_edges[i + 1:]:
            if not f.are_compatible(e, e2):
                return False
    at = {}
    for e in emb.edges:
        at.setdefault(e[0], []).append(e)
        at.setdefault(e[1], []).append(e)
    for u in emb.vertices:
        ve = edge_key(v, u)
        for old in at.get(u, ()):
            if not f.are_compatible(ve, old):
                return False
    return True


def count_compatible_copies(pattern: Graph, g: Graph,
                            f: IncompatibilitySystem = None,
                            budget: int = DEFAULT_BUDGET) -> int:
    enum = enumerate_compatible_copies(pattern, g, f, budget=budget)
    if enum.truncated:
        raise BudgetExceeded("copy enumeration truncated; count would be a lie")
    return len(enum.copies)
