import random
from fractions import Fraction

import pytest

from comptile.errors import FormatError, ValidationError
from comptile.graphs import Graph, complete_graph, cycle_graph
from comptile.incompat import (IncompatibilitySystem, count_bad_pairs_at, format_system,
                               parse_system_any, random_bounded_system, system_to_json)

from .helpers import random_graph, random_system


def test_pair_validation():
    k3 = complete_graph(3)
    with pytest.raises(ValidationError):
        IncompatibilitySystem(k3, [(0, 1, 1)])      # same edge twice
    with pytest.raises(ValidationError):
        IncompatibilitySystem(k3, [(0, 1, 3)])      # vertex out of range
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(ValidationError):
        IncompatibilitySystem(g, [(0, 1, 2)])       # (0,2) not an edge


def test_are_compatible_semantics():
    k4 = complete_graph(4)
    f = IncompatibilitySystem(k4, [(0, 1, 2)])
    assert not f.are_compatible((0, 1), (0, 2))
    assert not f.are_compatible((2, 0), (1, 0))     # orientation-insensitive
    assert f.are_compatible((0, 1), (0, 3))
    assert f.are_compatible((0, 1), (2, 3))         # disjoint edges always compatible
    assert f.are_compatible((1, 2), (0, 2))         # the pair lives at 0, not at 2
    empty = IncompatibilitySystem.empty(k4)
    assert empty.are_compatible((0, 1), (0, 2))
    with pytest.raises(ValidationError):
        f.are_compatible((0, 1), (4, 5))


def test_is_compatible_subgraph_and_witness():
    k4 = complete_graph(4)
    f = IncompatibilitySystem(k4, [(0, 1, 2)])
    ok, wit = f.is_compatible_subgraph([(0, 1), (0, 2), (1, 2)])
    assert not ok and set(wit) == {(0, 1), (0, 2)}
    ok, wit = f.is_compatible_subgraph([(0, 1), (2, 3)])
    assert ok and wit is None
    assert f.is_compatible_subgraph([])[0]


def test_subgraph_check_equals_pairwise_oracle():
    rng = random.Random(2)
    for _ in range(60):
        g = random_graph(7, 0.7, rng.getrandbits(30))
        if g.m < 2:
            continue
        f = random_system(g, rng.randint(0, 10), rng.getrandbits(30))
        edges = rng.sample(g.edges(), min(g.m, rng.randint(2, 8)))
        ok, _ = f.is_compatible_subgraph(edges)
        pairwise = all(f.are_compatible(e1, e2)
                       for i, e1 in enumerate(edges) for e2 in edges[i + 1:])
        assert ok == pairwise


def test_every_matching_is_compatible():
    rng = random.Random(3)
    for _ in range(1000):
        g = random_graph(rng.randint(2, 10), 0.6, rng.getrandbits(30))
        f = random_system(g, rng.randint(0, 12), rng.getrandbits(30))
        # greedy matching over shuffled edges
        edges = g.edges()
        rng.shuffle(edges)
        used = 0
        matching = []
        for u, v in edges:
            if not (used >> u & 1 or used >> v & 1):
                matching.append((u, v))
                used |= 1 << u | 1 << v
        assert f.is_compatible_subgraph(matching)[0]


def test_bound_report_examples():
    k4 = complete_graph(4)
    assert IncompatibilitySystem.empty(k4).bound_report().delta == 0
    assert IncompatibilitySystem(k4, [(0, 1, 2)]).bound_report().delta == 1
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    full = IncompatibilitySystem(star, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    assert full.bound_report().delta == 2


def test_random_bounded_system_contract():
    c6 = cycle_graph(6)
    assert random_bounded_system(c6, 0, 1).total_pairs == 0
    a = random_bounded_system(c6, Fraction(1, 6), 42)
    b = random_bounded_system(c6, Fraction(1, 6), 42)
    assert format_system(a) == format_system(b)          # byte-identical from seed
    k8 = complete_graph(8)
    assert random_bounded_system(k8, Fraction(1, 4), 42).triples() \
        != random_bounded_system(k8, Fraction(1, 4), 43).triples()
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(4, 16)
        g = random_graph(n, 0.8, rng.getrandbits(30))
        mu = Fraction(rng.randint(0, 3), 10)
        f = random_bounded_system(g, mu, rng.getrandbits(30))
        delta = f.bound_report().delta
        assert delta <= int(mu * n)                      # capped generator
        assert delta <= 2 * int(mu * n)                  # the documented worst case
        assert delta <= max(g.max_degree() - 1, 0)


def test_count_bad_pairs_examples():
    k4 = complete_graph(4)
    assert count_bad_pairs_at(IncompatibilitySystem.empty(k4), 0) == 0
    f = IncompatibilitySystem(k4, [(0, 1, 2)])
    assert count_bad_pairs_at(f, 0) >= 1
    # {(1,3), (1,2)} in F_1 blocks exactly the neighbor pair {1, 2} of vertex 3
    f2 = IncompatibilitySystem(k4, [(1, 3, 2)])
    assert count_bad_pairs_at(f2, 3) == 1
    # a pair with no edge at 3 blocks nothing at 3
    f3 = IncompatibilitySystem(k4, [(1, 0, 2)])
    assert count_bad_pairs_at(f3, 3) == 0


def test_file_roundtrip_and_json():
    g = complete_graph(5)
    f = random_system(g, 6, 4)
    text = format_system(f)
    again = parse_system_any(text, g)
    assert again.triples() == f.triples()
    blob = system_to_json(f)
    import json
    again2 = parse_system_any(json.dumps(blob), g)
    assert again2.triples() == f.triples()
    with pytest.raises(FormatError):
        parse_system_any("0 1\n", g)
    with pytest.raises(FormatError):
        parse_system_any('{"pairs": [[0, 1]]}', g)


def test_comment_lines_ignored():
    g = complete_graph(3)
    f = parse_system_any("# header\n0 1 2\n", g)
    assert f.triples() == [(0, 1, 2)]
