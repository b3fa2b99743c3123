import random

import pytest
from hypothesis import given

from ctrlmode.control import (
    INPUT,
    REDUNDANT,
    ControlError,
    alternating_successors,
    classify,
    components,
    driver_reach,
    mode_of,
)
from ctrlmode.digraph import DiGraph
from ctrlmode.matching import Matching, MatchingError, maximum_matching
from ctrlmode.oracle import enumerate_matchings

from .conftest import random_digraph, small_digraphs


def fan():
    return DiGraph.from_edges(3, [(0, 1), (0, 2)])


def path3():
    return DiGraph.from_edges(3, [(0, 1), (1, 2)])


def naive_input_components(g, m, drivers):
    sets = [set(driver_reach(g, m, d)) for d in drivers]
    merged = True
    while merged:
        merged = False
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if sets[i] and sets[j] and sets[i] & sets[j]:
                    sets[i] |= sets[j]
                    sets[j] = set()
                    merged = True
    return sorted((frozenset(s) for s in sets if s), key=min)


def test_driver_reach_fan():
    g = fan()
    m = Matching.from_edges(3, [(0, 1)])
    assert classify(g, m).drivers == {0, 2}
    assert driver_reach(g, m, 2) == {1, 2}
    assert driver_reach(g, m, 0) == {0}
    # oracle: 1 and 2 are each free in some maximum matching
    assert enumerate_matchings(g).ever_unmatched == (True, True, True)


def test_driver_reach_path():
    g = path3()
    m = maximum_matching(g)
    assert driver_reach(g, m, 0) == {0}
    assert enumerate_matchings(g).input_nodes == {0}


def test_driver_reach_isolated():
    g = DiGraph.from_edges(2, [])
    assert driver_reach(g, maximum_matching(g), 1) == {1}


def test_driver_reach_rejects_matched_node():
    g = path3()
    with pytest.raises(ControlError):
        driver_reach(g, maximum_matching(g), 1)


def test_classify_fan():
    c = classify(fan(), maximum_matching(fan()))
    assert c.input_nodes == {0, 1, 2}
    assert c.redundant_nodes == set()
    assert c.kind(1) == INPUT
    assert c.n_d == pytest.approx(2 / 3)
    assert c.i_d == 1.0
    assert c.mode == "distributed"


def test_classify_path():
    c = classify(path3(), maximum_matching(path3()))
    assert c.input_nodes == {0}
    assert c.redundant_nodes == {1, 2}
    assert c.unsaturated == {2}
    assert c.kind(2) == REDUNDANT


def test_classify_requires_maximum():
    with pytest.raises(MatchingError):
        classify(path3(), Matching.from_edges(3, [(1, 2)]))


def test_perfect_matching_flag():
    g = DiGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    c = classify(g, maximum_matching(g))
    assert c.perfect_matching
    assert c.n_input == 0
    assert not classify(fan(), maximum_matching(fan())).perfect_matching


def test_mode_threshold():
    assert mode_of(0.5) == "centralized"
    assert mode_of(0.51) == "distributed"


def test_components_fan():
    g = fan()
    m = Matching.from_edges(3, [(0, 1)])
    cc = components(g, m, classify(g, m))
    assert cc.of_side(INPUT) == [{0}, {1, 2}]
    assert cc.largest(INPUT) == {1, 2}
    assert cc.largest_redundant is None


def test_components_path():
    g = path3()
    m = maximum_matching(g)
    cc = components(g, m, classify(g, m))
    assert cc.of_side(INPUT) == [{0}]
    red = cc.of_side(REDUNDANT)
    assert frozenset().union(*red) == {1, 2}


def test_components_edgeless():
    g = DiGraph.from_edges(4, [])
    m = maximum_matching(g)
    cc = components(g, m, classify(g, m))
    assert cc.of_side(INPUT) == [{0}, {1}, {2}, {3}]
    assert cc.largest(INPUT) == {0}  # ties to the smallest id


def test_redundant_component_joins_alternating_neighbours():
    # 0 -> 1 -> 2 -> 3 plus 1 -> 3: matched (0,1),(1,2),(2,3); the unmatched
    # edge 1 -> 3 gives 3- -> 1+ -> 2-, joining 2 and 3
    g = DiGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    m = maximum_matching(g)
    assert m.edges == {(0, 1), (1, 2), (2, 3)}
    cc = components(g, m, classify(g, m))
    assert {2, 3} in cc.of_side(REDUNDANT)


def check_partition(g, m, c, cc):
    inp = cc.of_side(INPUT)
    red = cc.of_side(REDUNDANT)
    assert sum(map(len, inp)) == c.n_input
    assert frozenset().union(*inp) == c.input_nodes
    assert sum(map(len, red)) == g.n - c.n_input
    assert frozenset().union(*red) == c.redundant_nodes
    for comp in inp:
        assert comp & c.drivers
    # each redundant component is alternating-connected, and no alternating
    # step joins two different redundant components
    where = {v: i for i, comp in enumerate(red) for v in comp}
    for x in c.redundant_nodes:
        for y in alternating_successors(g, m, x):
            if y in where:
                assert where[x] == where[y]


@given(small_digraphs())
def test_oracle_equivalence(g):
    m = maximum_matching(g)
    c = classify(g, m)
    r = enumerate_matchings(g)
    assert c.nu == r.nu
    assert c.is_input == r.ever_unmatched
    assert c.drivers <= c.input_nodes
    assert c.n_d + c.nu / g.n == pytest.approx(1.0)


@given(small_digraphs())
def test_matching_invariance(g):
    a = classify(g, maximum_matching(g, "ascending"))
    b = classify(g, maximum_matching(g, "descending"))
    assert a.is_input == b.is_input


@given(small_digraphs())
def test_components_partition_small(g):
    m = maximum_matching(g)
    c = classify(g, m)
    cc = components(g, m, c)
    check_partition(g, m, c, cc)
    assert cc.of_side(INPUT) == naive_input_components(g, m, sorted(c.drivers))


def test_components_partition_larger():
    rng = random.Random(2)
    for _ in range(60):
        g = random_digraph(rng, rng.randint(20, 120), rng.choice([0.01, 0.03, 0.06]))
        m = maximum_matching(g)
        c = classify(g, m)
        cc = components(g, m, c)
        check_partition(g, m, c, cc)
        assert cc.of_side(INPUT) == naive_input_components(g, m, sorted(c.drivers))
        if cc.largest_input is not None:
            big = cc.largest(INPUT)
            assert all(len(s) <= len(big) for s in cc.of_side(INPUT))
