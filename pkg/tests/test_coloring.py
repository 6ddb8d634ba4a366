import random
from fractions import Fraction

import pytest

from comptile import oracles, solver
from comptile.coloring import (INFINITY, bottle_graph, chi_star, chromatic_number,
                               d_set, enumerate_coloring_profiles, hcf_profile, sigma)
from comptile.errors import SizeCapError
from comptile.graphs import (MultipartiteSpec, complete_graph, complete_multipartite,
                             cycle_graph, disjoint_union, path_graph)

from .helpers import random_graph


def test_chromatic_number_examples():
    assert chromatic_number(complete_graph(3)) == 3
    assert chromatic_number(cycle_graph(5)) == 3
    assert chromatic_number(disjoint_union(complete_graph(2), complete_graph(2))) == 2


def test_profile_examples():
    assert enumerate_coloring_profiles(path_graph(3), 2) == {(1, 2)}
    assert enumerate_coloring_profiles(complete_graph(3), 3) == {(1, 1, 1)}
    assert enumerate_coloring_profiles(cycle_graph(4), 2) == {(2, 2)}
    # below chi: empty set is the distinct signal
    assert enumerate_coloring_profiles(complete_graph(3), 2) == frozenset()


def test_sigma_and_d_set_examples():
    assert sigma(complete_graph(3)) == 1
    assert sigma(cycle_graph(4)) == 2
    k112 = complete_multipartite(MultipartiteSpec((1, 1, 2)))[0]
    assert sigma(k112) == 1
    assert d_set(complete_graph(3)) == {0}
    assert d_set(path_graph(3)) == {1}
    assert d_set(k112) == {0, 1}


def test_hcf_examples():
    assert hcf_profile(complete_graph(3)) == (INFINITY, 3, False)
    assert hcf_profile(path_graph(3)) == (1, 3, False)
    hc, cc, one = hcf_profile(disjoint_union(complete_graph(2), path_graph(3)))
    assert cc == 1 and one == (hc <= 2)


def test_chi_star_spot_values():
    assert chi_star(complete_graph(3)).chi_star == 3
    k2 = chi_star(complete_graph(2))
    assert k2.chi_cr == 2 and not k2.hcf_is_one and k2.chi_star == 2
    k112 = chi_star(complete_multipartite(MultipartiteSpec((1, 1, 2)))[0])
    assert k112.chi_cr == Fraction(8, 3) and k112.hcf_is_one
    assert k112.chi_star == Fraction(8, 3)


def test_profiles_match_raw_oracle_on_corpus(corpus):
    for name, g in corpus.items():
        prof = chi_star(g)
        raw = oracles.raw_chromatic_profile(g)
        assert prof.chi == raw["chi"], name
        assert prof.sigma == raw["sigma"], name
        assert prof.d_set == raw["d_set"], name
        assert prof.hcf_chi == raw["hcf_chi"], name
        assert prof.hcf_c == raw["hcf_c"], name
        assert prof.hcf_is_one == raw["hcf_is_one"], name
        assert prof.chi_cr == raw["chi_cr"], name
        assert prof.chi_star == raw["chi_star"], name


def test_profiles_match_raw_oracle_on_random_graphs():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 7)
        g = random_graph(n, rng.uniform(0.2, 0.9), rng.getrandbits(30))
        prof = chi_star(g)
        raw = oracles.raw_chromatic_profile(g)
        assert (prof.chi, prof.sigma, prof.d_set) == (raw["chi"], raw["sigma"], raw["d_set"])
        assert prof.chi_cr == raw["chi_cr"] and prof.chi_star == raw["chi_star"]


def test_rational_bound_chi_minus_one_lt_cr_le_chi(corpus):
    for g in corpus.values():
        prof = chi_star(g)
        assert prof.chi - 1 < prof.chi_cr <= prof.chi
        assert prof.chi_star in (prof.chi_cr, Fraction(prof.chi))


def test_bottle_graph_shapes_and_chi_cr(corpus):
    for name, g in corpus.items():
        b, part = bottle_graph(g)
        prof = chi_star(g)
        sizes = tuple(len(blk) for blk in part.blocks)
        assert sizes[0] == (prof.chi - 1) * prof.sigma, name
        assert all(s == g.n - prof.sigma for s in sizes[1:]), name
        assert chi_star(b).chi_cr == prof.chi_cr, name


def test_bottle_graph_contains_pattern_factor(corpus):
    # r-1 disjoint copies of the pattern tile its bottle graph
    for name in ("K_2", "K_3", "K_3(1,1,2)"):
        g = corpus[name]
        b, _ = bottle_graph(g)
        res = solver.find_compatible_factor(g, b)
        assert res.status == solver.FOUND
        assert len(res.tiling) == chi_star(g).chi - 1


def test_multipartite_d_set_is_part_size_gap_set():
    rng = random.Random(11)
    for _ in range(50):
        r = rng.randint(1, 4)
        sizes = []
        while sum(sizes) + (r - len(sizes)) > 9 or len(sizes) < r:
            sizes = [rng.randint(1, 4) for _ in range(r)]
        g, _ = complete_multipartite(MultipartiteSpec(tuple(sizes)))
        ordered = sorted(sizes)
        want = {ordered[i + 1] - ordered[i] for i in range(len(ordered) - 1)}
        assert d_set(g) == frozenset(want)


def test_coloring_cap():
    big = complete_graph(13)
    with pytest.raises(SizeCapError):
        enumerate_coloring_profiles(big, 13)
    assert enumerate_coloring_profiles(big, 13, force=True) == {(1,) * 13}
