"""Lower-bound instance generators: unbalanced multipartite bases, the
in-part bipartite augmentation, and the induced incompatibility system.

The full instance starts from a complete r-partite base graph chosen to
admit no pattern factor, adds inside every part a near-regular bipartite
circulant (minimum degree >= mu*n/2 + 1, maximum degree <= mu*n, hence
triangle-free parts), and declares vu, vw incompatible at v whenever v
lies outside a part containing the edge uw.  With that system every
compatible complete-multipartite copy is forced to be transversal, so a
compatible factor of the augmented graph would induce a factor of the
base.

Construction claims are verified, not asserted: factor absence is proved
by the exact solver when the search completes and reported UNVERIFIED
when it does not, and every emitted certificate inequality is checked
numerically before the instance is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import solver
from .coloring import chi_star
from .errors import ValidationError
from .graphs import (Graph, MultipartiteSpec, VertexPartition, complete_multipartite,
                     components)
from .incompat import IncompatibilitySystem
from .lattice import index_vector
from .util import frac_ceil, frac_floor, format_fraction

KOMLOS = "komlos"
KUHN_OSTHUS = "ko"

CONFIRMED_ABSENT = "confirmed_absent"
FACTOR_EXISTS = "factor_exists"
UNVERIFIED = "unverified"


@dataclass(frozen=True)
class BaseInstance:
    graph: Graph
    partition: VertexPartition
    sizes: tuple
    min_degree: int
    window_low: Fraction          # observed lower bound (chi_cr+1-r)/r * n
    window_high: int              # ceil(n/chi_cr) + 1
    parts_in_window: tuple        # per-part boolean report, not a gate
    factor_status: str            # confirmed_absent / factor_exists / unverified

    def to_json_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "min_degree": self.min_degree,
            "window_low": format_fraction(self.window_low),
            "window_high": self.window_high,
            "parts_in_window": list(self.parts_in_window),
            "factor_status": self.factor_status,
        }


# The no-factor probe on a freshly built base is a report, not a gate; its
# search can be astronomically large for n past desk scale, so it gets its
# own bounded budget and reports UNVERIFIED when that runs out.
DEFAULT_FACTOR_PROBE_BUDGET = 200_000


def _sizes_to_instance(pattern: Graph, sizes, window_low, window_high,
                       budget: int) -> BaseInstance:
    g, part = complete_multipartite(MultipartiteSpec(tuple(sizes)))
    in_window = tuple(window_low <= s <= window_high for s in sizes)
    res = solver.find_compatible_factor(pattern, g, budget=budget)
    if res.status == solver.NONE:
        status = CONFIRMED_ABSENT
    elif res.status == solver.FOUND:
        status = FACTOR_EXISTS
    else:
        status = UNVERIFIED
    return BaseInstance(g, part, tuple(sizes), g.min_degree(),
                        window_low, window_high, in_window, status)


def komlos_base(pattern: Graph, n: int,
                budget: int = DEFAULT_FACTOR_PROBE_BUDGET,
                sizes=None) -> BaseInstance:
    """Complete r-partite graph of order n with min degree (1-1/chi_cr)n - 1.

    Default part sizes are one admissible choice: the largest part gets
    ceil(n/chi_cr) + 1 (the maximal degree deficit), the remainder is
    split as evenly as possible.  Whether every part lands inside the
    observed window [(chi_cr+1-r)/r * n, ceil(n/chi_cr)+1] is reported
    per part; balanced patterns miss the lower end by one at every n, so
    the window is a diagnostic rather than a gate.  Factor absence is
    checked by the solver, never assumed; at small n the even split can
    admit a factor for some patterns, in which case pass explicit
    ``sizes`` (same order, largest first) to pick another member of the
    admissible family.
    """
    prof = chi_star(pattern)
    r = prof.chi
    if r < 2:
        raise ValidationError("base construction needs chi >= 2")
    if n % pattern.n != 0:
        raise ValidationError(f"n = {n} is not divisible by |H| = {pattern.n}")
    cr = prof.chi_cr
    big = frac_ceil(Fraction(n) / cr) + 1
    if sizes is None:
        rest = n - big
        if rest < r - 1:
            raise ValidationError(
                f"n = {n} too small: largest part {big} leaves {rest} vertices "
                f"for {r - 1} non-empty parts")
        base, extra = divmod(rest, r - 1)
        sizes = [big] + [base + (1 if i < extra else 0) for i in range(r - 1)]
    else:
        sizes = [int(s) for s in sizes]
        if len(sizes) != r or sum(sizes) != n or any(s < 1 for s in sizes):
            raise ValidationError(
                f"override sizes must be {r} positive parts summing to {n}")
        if max(sizes) != big:
            raise ValidationError(
                f"override sizes must keep the largest part at {big} "
                f"(the target degree deficit)")
    window_low = (cr + 1 - r) / r * n
    return _sizes_to_instance(pattern, sizes, window_low, big, budget)


def kuhn_osthus_base(pattern: Graph, n: int,
                     budget: int = DEFAULT_FACTOR_PROBE_BUDGET) -> BaseInstance:
    """Complete r-partite graph with |V_1| = floor(n/r)+1, |V_2| = ceil(n/r)-1,
    the rest balanced in [floor(n/r), ceil(n/r)]; delta = ceil((1-1/r)n) - 1.

    Preconditions: chi(H) = r >= 3, hcf(H) != 1, n divisible by |H|.
    """
    prof = chi_star(pattern)
    r = prof.chi
    if r < 3:
        raise ValidationError(f"precondition chi(H) >= 3 failed (chi = {r})")
    if prof.hcf_is_one:
        raise ValidationError("precondition hcf(H) != 1 failed (hcf(H) = 1)")
    if n % pattern.n != 0:
        raise ValidationError(f"precondition n divisible by |H| failed ({n} % {pattern.n})")
    lo, hi = n // r, -(-n // r)
    sizes = [lo + 1, hi - 1]
    rest = n - sum(sizes)
    base, extra = divmod(rest, r - 2)
    for i in range(r - 2):
        sizes.append(base + (1 if i < extra else 0))
    for s in sizes[2:]:
        if not lo <= s <= hi:
            raise ValidationError(f"balanced tail size {s} escaped [{lo}, {hi}]")
    inst = _sizes_to_instance(pattern, sizes, Fraction(lo), hi, budget)
    want = frac_ceil(Fraction((r - 1) * n, r)) - 1
    if inst.min_degree != want:
        raise ValidationError(
            f"degree check failed: delta = {inst.min_degree}, formula gives {want}")
    return inst


@dataclass(frozen=True)
class ConstructionSpec:
    """Parameters of a full lower-bound instance for K_r(h_1..h_r)."""

    pattern_spec: MultipartiteSpec
    n: int
    mu: Fraction
    base: str = KOMLOS
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mu", Fraction(self.mu))
        if self.base not in (KOMLOS, KUHN_OSTHUS):
            raise ValidationError(f"unknown base {self.base!r}")
        pattern, _ = complete_multipartite(self.pattern_spec)
        h = pattern.n
        if self.n % h != 0:
            raise ValidationError(f"n = {self.n} not divisible by |H| = {h}")
        prof = chi_star(pattern)
        r = prof.chi
        upper = (prof.chi_cr + 1 - r) / r
        if not 0 < self.mu < upper:
            raise ValidationError(
                f"mu = {self.mu} outside the open interval (0, {upper})")
        if self.base == KUHN_OSTHUS:
            if r < 3:
                raise ValidationError("ko base needs chi(H) >= 3")
            if prof.hcf_is_one:
                raise ValidationError("ko base needs hcf(H) != 1")

    def pattern(self) -> Graph:
        return complete_multipartite(self.pattern_spec)[0]


@dataclass(frozen=True)
class Certificates:
    min_degree: int
    min_degree_bound: Fraction
    part_internal_degrees: tuple   # (min, max) per part
    internal_min_bound: Fraction   # mu*n/2 + 1
    internal_max_bound: Fraction   # mu*n
    parts_bipartite: tuple
    f_delta: int
    f_delta_bound: int             # floor(mu*n)

    def all_hold(self) -> bool:
        return (self.min_degree >= self.min_degree_bound
                and all(lo >= self.internal_min_bound and hi <= self.internal_max_bound
                        for lo, hi in self.part_internal_degrees)
                and all(self.parts_bipartite)
                and self.f_delta <= self.f_delta_bound)

    def to_json_dict(self) -> dict:
        return {
            "min_degree": self.min_degree,
            "min_degree_bound": format_fraction(self.min_degree_bound),
            "part_internal_degrees": [list(t) for t in self.part_internal_degrees],
            "internal_min_bound": format_fraction(self.internal_min_bound),
            "internal_max_bound": format_fraction(self.internal_max_bound),
            "parts_bipartite": list(self.parts_bipartite),
            "f_delta": self.f_delta,
            "f_delta_bound": self.f_delta_bound,
            "all_hold": self.all_hold(),
        }


@dataclass(frozen=True)
class ExtremalInstance:
    spec: ConstructionSpec
    graph: Graph
    partition: VertexPartition
    system: IncompatibilitySystem
    base: BaseInstance
    certificates: Certificates


def _bipartite_circulant(block: tuple, d: int, name: str) -> list:
    """Spanning bipartite graph on the block: one half of size ceil(s/2),
    each of its vertices joined to d cyclically consecutive vertices of
    the other half.  Degrees land in {d, d+1}.
    """
    s = len(block)
    half = (s + 1) // 2
    xs, ys = block[:half], block[half:]
    if not ys or d > len(ys):
        raise ValidationError(
            f"{name} (size {s}) too small for the requested mu: needs a half "
            f"of size >= d = {d}")
    edges = []
    for i, x in enumerate(xs):
        for j in range(d):
            edges.append((x, ys[(i + j) % len(ys)]))
    return edges


def _is_bipartite(g: Graph, block) -> bool:
    """Two-colorability of the internal graph on ``block`` (independent check)."""
    color = {}
    for start in block:
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for u in g.neighbors(v):
                if u not in block:
                    continue
                if u not in color:
                    color[u] = color[v] ^ 1
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def augment_and_incompat(spec: ConstructionSpec,
                         budget: int = solver.DEFAULT_BUDGET) -> ExtremalInstance:
    """Build the full instance and check every certificate inequality.

    Raises ValidationError with a part-naming diagnostic when the
    requested mu cannot be realized (part too small, or the circulant's
    degree cap mu*n is violated on an odd part).
    """
    pattern = spec.pattern()
    prof = chi_star(pattern)
    n, mu = spec.n, spec.mu
    probe = min(budget, DEFAULT_FACTOR_PROBE_BUDGET)
    if spec.base == KOMLOS:
        base = komlos_base(pattern, n, budget=probe)
    else:
        base = kuhn_osthus_base(pattern, n, budget=probe)

    d = frac_ceil(mu * n / 2) + 1
    min_bound = mu * n / 2 + 1
    max_bound = mu * n
    q_bound = frac_floor(mu * n)

    rows = list(base.graph.adj)
    internal_edges = {}  # part index -> edge list
    for pi, block in enumerate(base.partition.blocks):
        name = f"part {pi}"
        if len(block) < 2 * d:
            raise ValidationError(
                f"{name} (size {len(block)}) too small for mu = {mu}: "
                f"needs size >= 2*(ceil(mu*n/2)+1) = {2 * d}")
        edges = _bipartite_circulant(block, d, name)
        internal_edges[pi] = edges
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    graph = Graph(n, rows)

    part_windows = []
    for pi, block in enumerate(base.partition.blocks):
        degs = [sum(1 for u, v in internal_edges[pi] if w in (u, v)) for w in block]
        lo, hi = min(degs), max(degs)
        if hi > max_bound:
            raise ValidationError(
                f"part {pi}: circulant max degree {hi} exceeds mu*n = {max_bound} "
                f"(odd part sizes push one side to d+1)")
        part_windows.append((lo, hi))

    triples = []
    for pj, block in enumerate(base.partition.blocks):
        for u, w in internal_edges[pj]:
            a, b = min(u, w), max(u, w)
            for pi, vblock in enumerate(base.partition.blocks):
                if pi == pj:
                    continue
                for v in vblock:
                    triples.append((v, a, b))
    system = IncompatibilitySystem(graph, triples)

    certs = Certificates(
        min_degree=graph.min_degree(),
        min_degree_bound=(1 - 1 / prof.chi_star + mu / 2) * n,
        part_internal_degrees=tuple(part_windows),
        internal_min_bound=min_bound,
        internal_max_bound=max_bound,
        parts_bipartite=tuple(_is_bipartite(graph, set(b)) for b in base.partition.blocks),
        f_delta=system.bound_report().delta,
        f_delta_bound=q_bound,
    )
    if not certs.all_hold():
        raise ValidationError(f"certificate inequalities failed: {certs.to_json_dict()}")
    return ExtremalInstance(spec, graph, base.partition, system, base, certs)


@dataclass(frozen=True)
class ClaimReport:
    status: str            # true / false / indeterminate
    copies_checked: int
    witness: object = None  # violating Embedding when status == "false"


def verify_index_vector_claim(inst: ExtremalInstance,
                              budget: int = solver.DEFAULT_BUDGET) -> ClaimReport:
    """Is every compatible copy of the pattern transversal?

    Enumerates all compatible copies in the full augmented graph and
    checks each copy's index vector against the construction partition:
    it must be a permutation of (h_1..h_r).  Needs r >= 3 (with two parts
    an in-part edge need not close a triangle, so the forcing argument
    has no teeth).
    """
    hs = inst.spec.pattern_spec
    if hs.r < 3:
        raise ValidationError("index-vector claim needs r >= 3")
    pattern = inst.spec.pattern()
    enum = solver.enumerate_compatible_copies(pattern, inst.graph, inst.system,
                                              budget=budget)
    want = tuple(sorted(hs.sizes))
    for emb in enum.copies:
        vec = index_vector(emb.vertices, inst.partition)
        if tuple(sorted(vec)) != want:
            return ClaimReport("false", len(enum.copies), emb)
    if enum.truncated:
        return ClaimReport("indeterminate", len(enum.copies))
    return ClaimReport("true", len(enum.copies))


def strip_augmentation(inst: ExtremalInstance) -> Graph:
    """Remove the in-part augmentation; must reproduce the base exactly."""
    base_rows = []
    blocks = inst.partition
    for v in range(inst.graph.n):
        row = inst.graph.adj[v]
        same_block = 0
        for u in blocks.blocks[blocks.block_of(v)]:
            same_block |= 1 << u
        base_rows.append(row & ~same_block)
    return Graph(inst.graph.n, base_rows)


def detect_multipartite(g: Graph) -> MultipartiteSpec:
    """Recognize a complete multipartite graph; returns its part sizes
    (parts ordered by minimum vertex) or raises ValidationError.

    The complement of K_r(h_1..h_r) is a disjoint union of cliques, so
    the candidate parts are the complement's components; they are then
    validated directly.
    """
    full = (1 << g.n) - 1
    comp = Graph(g.n, tuple((full & ~g.adj[v]) & ~(1 << v) for v in range(g.n)))
    parts = components(comp)
    for block in parts:
        for i, u in enumerate(block):
            for v in block[i + 1:]:
                if g.has_edge(u, v):
                    raise ValidationError("not complete multipartite: edge inside a part")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            for u in parts[i]:
                for v in parts[j]:
                    if not g.has_edge(u, v):
                        raise ValidationError(
                            "not complete multipartite: missing cross edge")
    return MultipartiteSpec(tuple(len(b) for b in parts))
