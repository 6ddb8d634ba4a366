"""Independent brute-force reference implementations.

These are deliberately dumb: raw assignment enumeration with no pruning
and no shared code with the operations they check.  The acceptance
battery and the test suite compare the fast paths against these; keep
them simple enough to be obviously correct.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np

from .coloring import INFINITY
from .graphs import Graph, components
from .incompat import IncompatibilitySystem, edge_key


def raw_coloring_profiles(g: Graph, k: int) -> frozenset:
    """Sorted class-size multisets over ALL k^n raw assignments that are
    proper and use all k colors.  No symmetry pruning of any kind.
    """
    profiles = set()
    edges = g.edges()
    for assignment in product(range(k), repeat=g.n):
        if any(assignment[u] == assignment[v] for u, v in edges):
            continue
        if len(set(assignment)) != k:
            continue
        sizes = [0] * k
        for c in assignment:
            sizes[c] += 1
        profiles.add(tuple(sorted(sizes)))
    return frozenset(profiles)


def raw_chromatic_number(g: Graph) -> int:
    for k in range(1, g.n + 1):
        edges = g.edges()
        for assignment in product(range(k), repeat=g.n):
            if all(assignment[u] != assignment[v] for u, v in edges):
                return k
    raise AssertionError("every graph is n-colorable")


def raw_chromatic_profile(g: Graph) -> dict:
    """Profile dict computed from scratch: raw chi, raw enumeration, exact
    rationals.  Mirrors the documented invariant definitions directly.
    """
    chi = raw_chromatic_number(g)
    profs = raw_coloring_profiles(g, chi)
    sig = min(p[0] for p in profs)
    gaps = set()
    for p in profs:
        gaps.update(p[i + 1] - p[i] for i in range(len(p) - 1))
    nonzero = [x for x in gaps if x]
    hcf_chi = math.gcd(*nonzero) if nonzero else INFINITY
    hcf_c = math.gcd(*(len(c) for c in components(g)))
    if chi > 2:
        one = hcf_chi == 1
    elif chi == 2:
        one = hcf_c == 1 and hcf_chi <= 2
    else:
        one = False
    chi_cr = Fraction(chi) if g.n == sig else Fraction((chi - 1) * g.n, g.n - sig)
    return {
        "chi": chi, "sigma": sig, "d_set": frozenset(gaps),
        "hcf_chi": hcf_chi, "hcf_c": hcf_c, "hcf_is_one": one,
        "chi_cr": chi_cr, "chi_star": chi_cr if one else Fraction(chi),
    }


def _image_compatible(f: IncompatibilitySystem, image_edges) -> bool:
    edges = sorted(set(image_edges))
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if not f.are_compatible(edges[i], edges[j]):
                return False
    return True


def raw_compatible_copies(pattern: Graph, g: Graph,
                          f: IncompatibilitySystem = None) -> set:
    """All compatible copies as (vertices, edges) keys, by filtering every
    injective map of the pattern into the host.
    """
    if f is None:
        f = IncompatibilitySystem.empty(g)
    pat_edges = pattern.edges()
    out = set()
    for phi in permutations(range(g.n), pattern.n):
        if any(not g.has_edge(phi[u], phi[v]) for u, v in pat_edges):
            continue
        image = tuple(sorted(edge_key(phi[u], phi[v]) for u, v in pat_edges))
        if not _image_compatible(f, image):
            continue
        out.add((tuple(sorted(phi)), image))
    return out


def raw_factor_exists(pattern: Graph, g: Graph,
                      f: IncompatibilitySystem = None) -> bool:
    """Brute-force compatible-factor decision over the raw copy list."""
    if g.n % max(pattern.n, 1) != 0:
        return False
    copies = sorted(raw_compatible_copies(pattern, g, f))
    masks = []
    for verts, _ in copies:
        m = 0
        for v in verts:
            m |= 1 << v
        masks.append(m)
    full = (1 << g.n) - 1

    def rec(covered: int, start: int) -> bool:
        if covered == full:
            return True
        low = (~covered & full)
        low = (low & -low).bit_length() - 1
        for i in range(len(masks)):
            if masks[i] & covered:
                continue
            if not masks[i] >> low & 1:
                continue
            if rec(covered | masks[i], 0):
                return True
        return False

    return rec(0, 0)


def bounded_combination_membership(generators, target, bound: int = 4):
    """Is target a sum of generators with every |coefficient| <= bound?

    Enumerates the full coefficient grid with numpy; returns (found,
    coefficients or None).  This under-approximates lattice membership:
    a miss only proves no SMALL certificate exists.
    """
    gens = np.asarray(list(generators), dtype=np.int64)
    tgt = np.asarray(list(target), dtype=np.int64)
    if gens.size == 0:
        return (not tgt.any()), ()
    m = gens.shape[0]
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([rng] * m), indexing="ij")
    coeffs = np.stack([gg.ravel() for gg in grids], axis=1)
    sums = coeffs @ gens
    hits = np.nonzero((sums == tgt).all(axis=1))[0]
    if hits.size == 0:
        return False, None
    return True, tuple(int(c) for c in coeffs[hits[0]])


def raw_transversal_count(spec_sizes, g: Graph, f: IncompatibilitySystem,
                          parts) -> int:
    """Transversal copy count by brute combination choice per part."""
    if f is None:
        f = IncompatibilitySystem.empty(g)
    parts = [sorted(set(u)) for u in parts]
    count = 0

    def rec(idx: int, chosen: list):
        nonlocal count
        if idx == len(parts):
            edges = []
            for i in range(len(chosen)):
                for j in range(i + 1, len(chosen)):
                    for a in chosen[i]:
                        for b in chosen[j]:
                            if not g.has_edge(a, b):
                                return
                            edges.append(edge_key(a, b))
            if _image_compatible(f, edges):
                count += 1
            return
        for combo in combinations(parts[idx], spec_sizes[idx]):
            rec(idx + 1, chosen + [list(combo)])

    rec(0, [])
    return count
