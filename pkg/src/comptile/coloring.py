"""Exact chromatic invariants behind the chi*/chi_cr dichotomy.

Everything here is decided by exhaustive proper-coloring enumeration and
exact rational arithmetic.  The invariants of a pattern graph H:

    chi       chromatic number
    sigma     minimum size of the smallest color class over all proper
              chi-colorings
    chi_cr    critical chromatic number (chi-1)|H| / (|H|-sigma)
    D(H)      union over proper chi-colorings of the consecutive gaps
              h_{i+1}-h_i of the sorted color-class sizes
    hcf_chi   gcd of D(H) ignoring zeros; INFINITY when D(H) is {0}
    hcf_c     gcd of the component orders
    hcf=1     chi>2: hcf_chi == 1
              chi=2: hcf_c == 1 and hcf_chi <= 2 (INFINITY fails "<= 2")
    chi*      chi_cr if hcf=1 else chi

A proper chi-coloring necessarily uses all chi colors (otherwise chi would
be smaller), so the profile enumeration applies no surjectivity filter.

Enumeration prunes color permutations by only introducing a new color when
all smaller color indices already appear (canonical set partitions); class
size multisets are invariant under color permutation, so no profile is
lost.  The default size cap keeps |C(H)| from exploding; override it
explicitly when you mean it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import SizeCapError, ValidationError
from .graphs import Graph, MultipartiteSpec, complete_multipartite, components
from .util import bits, format_fraction

INFINITY = float("inf")

DEFAULT_COLORING_CAP = 12


@dataclass(frozen=True)
class ChromaticProfile:
    chi: int
    sigma: int
    d_set: frozenset
    hcf_chi: object  # positive int, or INFINITY when D(H) == {0}
    hcf_c: int
    hcf_is_one: bool
    chi_cr: Fraction
    chi_star: Fraction

    def to_json_dict(self) -> dict:
        return {
            "chi": self.chi,
            "sigma": self.sigma,
            "d_set": sorted(self.d_set),
            "hcf_chi": "inf" if self.hcf_chi == INFINITY else int(self.hcf_chi),
            "hcf_c": self.hcf_c,
            "hcf_is_one": self.hcf_is_one,
            "chi_cr": format_fraction(self.chi_cr),
            "chi_star": format_fraction(self.chi_star),
        }


def _greedy_clique(g: Graph) -> int:
    """Size of a greedily grown clique; cheap lower bound for chi."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    best = 0
    for start in order[: min(g.n, 8)]:
        clique_mask = 1 << start
        size = 1
        cand = g.adj[start]
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique_mask |= 1 << v
            size += 1
            cand &= g.adj[v]
        best = max(best, size)
    return best


def _colorable(g: Graph, k: int) -> bool:
    """Does a proper k-coloring exist?  Canonical-color backtracking."""
    if g.n == 0:
        return True
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    colors = [-1] * g.n

    def rec(i: int, used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        forbidden = 0
        for u in range(g.n):
            if g.adj[v] >> u & 1 and colors[u] >= 0:
                forbidden |= 1 << colors[u]
        limit = min(k, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            colors[v] = c
            if rec(i + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    return rec(0, 0)


def chromatic_number(g: Graph) -> int:
    if g.n == 0:
        raise ValidationError("chromatic number of the empty graph is undefined")
    if g.m == 0:
        return 1
    lo = max(2, _greedy_clique(g))
    for k in range(lo, g.n + 1):
        if _colorable(g, k):
            return k
    return g.n  # unreachable; K_n colorable with n colors


def enumerate_coloring_profiles(g: Graph, k: int, max_vertices: int = DEFAULT_COLORING_CAP,
                                force: bool = False) -> frozenset:
    """Distinct sorted class-size multisets over proper k-colorings of g.

    Returns the empty set when k < chi(g) (no proper k-coloring exists);
    at k = chi(g) the result is never empty.
    """
    if g.n > max_vertices and not force:
        raise SizeCapError(
            f"coloring enumeration capped at {max_vertices} vertices "
            f"(graph has {g.n}); pass force=True to override")
    if k < 1:
        raise ValidationError("need k >= 1")
    profiles = set()
    sizes = [0] * k
    colors = [-1] * g.n

    def rec(v: int, used: int):
        if v == g.n:
            if used == k:
                profiles.add(tuple(sorted(sizes[:k])))
            return
        forbidden = 0
        for u in bits(g.adj[v] & ((1 << v) - 1)):
            forbidden |= 1 << colors[u]
        # pruning: remaining vertices must still be able to open the
        # missing color classes
        if used + (g.n - v) < k:
            return
        limit = min(k, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            colors[v] = c
            sizes[c] += 1
            rec(v + 1, max(used, c + 1))
            sizes[c] -= 1
            colors[v] = -1

    rec(0, 0)
    return frozenset(profiles)


def sigma(g: Graph) -> int:
    profs = enumerate_coloring_profiles(g, chromatic_number(g))
    return min(p[0] for p in profs)


def d_set(g: Graph) -> frozenset:
    profs = enumerate_coloring_profiles(g, chromatic_number(g))
    gaps = set()
    for p in profs:
        gaps.update(p[i + 1] - p[i] for i in range(len(p) - 1))
    return frozenset(gaps)


def gcd_ignoring_zeros(values) -> object:
    """gcd of the non-zero values; INFINITY when every value is zero.

    gcd(0, x) = x makes zeros vacuous, so they are dropped unless nothing
    else remains.  An empty input also maps to INFINITY (no gaps at all).
    """
    nz = [abs(v) for v in values if v != 0]
    if not nz:
        return INFINITY
    return math.gcd(*nz)


def hcf_profile(g: Graph) -> tuple:
    """(hcf_chi, hcf_c, hcf_is_one) for g."""
    chi = chromatic_number(g)
    hcf_chi = gcd_ignoring_zeros(d_set(g))
    hcf_c = math.gcd(*(len(c) for c in components(g)))
    if chi > 2:
        one = hcf_chi == 1
    elif chi == 2:
        one = hcf_c == 1 and hcf_chi <= 2
    else:
        one = False
    return hcf_chi, hcf_c, one


@lru_cache(maxsize=None)
def chi_star(g: Graph) -> ChromaticProfile:
    """Fully populated chromatic profile of g, all rationals exact."""
    chi = chromatic_number(g)
    profs = enumerate_coloring_profiles(g, chi)
    sig = min(p[0] for p in profs)
    gaps = set()
    for p in profs:
        gaps.update(p[i + 1] - p[i] for i in range(len(p) - 1))
    dset = frozenset(gaps)
    hcf_chi = gcd_ignoring_zeros(dset)
    hcf_c = math.gcd(*(len(c) for c in components(g)))
    if chi > 2:
        one = hcf_chi == 1
    elif chi == 2:
        one = hcf_c == 1 and hcf_chi <= 2
    else:
        one = False
    if g.n == sig:
        # chi == 1 (edgeless): the defining formula divides by zero; use
        # the convention chi_cr = chi, which keeps chi-1 < chi_cr <= chi.
        cr = Fraction(chi)
    else:
        cr = Fraction((chi - 1) * g.n, g.n - sig)
    star = cr if one else Fraction(chi)
    return ChromaticProfile(chi, sig, dset, hcf_chi, hcf_c, one, cr, star)


def bottle_graph(h: Graph) -> tuple:
    """Complete r-partite graph with parts ((r-1)sigma, h-sigma, ..., h-sigma).

    r = chi(h).  The bottle graph B keeps the critical chromatic number of
    h and contains an h-factor made of r-1 copies of h; both facts are
    exercised by the test suite rather than assumed here.
    """
    if h.n == 0:
        raise ValidationError("bottle graph of the empty graph is undefined")
    prof = chi_star(h)
    r, sig = prof.chi, prof.sigma
    if r < 2:
        raise ValidationError("bottle graph needs chi >= 2")
    sizes = ((r - 1) * sig,) + (h.n - sig,) * (r - 1)
    return complete_multipartite(MultipartiteSpec(sizes))
