"""Fiber products, intersections, joins, pushouts, and double cosets."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from stallings import (
    Alphabet,
    LEFT,
    RIGHT,
    LabeledGraph,
    RANK2,
    Word,
    based_meet_core,
    double_cosets,
    embed_into_rank2,
    fiber_product,
    intersection,
    isolated_vertex_scan,
    join,
    join_with_maps,
    subgroup_graph,
    topological_pushout,
)
from stallings.verify import random_subgroup

from conftest import FIGURE_LEFT, FIGURE_MEET_WORD, FIGURE_RIGHT, make


def embedded(*texts, rank=3):
    A = Alphabet(rank)
    return subgroup_graph([embed_into_rank2(A.word(t)) for t in texts], RANK2)


# -- fiber product ------------------------------------------------------------------


def test_fiber_product_of_disjoint_loops():
    fp = fiber_product(make("a"), make("b"))
    assert (fp.graph.vertex_count, fp.graph.edge_count) == (1, 0)
    assert fp.basepoint == (fp.left.graph.basepoint, fp.right.graph.basepoint)


def test_fiber_product_of_roses():
    F = make("a", "b")
    fp = fiber_product(F, F)
    assert (fp.graph.vertex_count, fp.graph.edge_count) == (1, 2)


def test_fiber_product_vertex_count_multiplies():
    H, K = make("a", "bab"), make(*FIGURE_RIGHT)
    fp = fiber_product(H, K)
    assert fp.graph.vertex_count == H.graph.vertex_count * K.graph.vertex_count


def test_fiber_product_rejects_alphabet_mismatch():
    with pytest.raises(ValueError):
        fiber_product(make("a"), subgroup_graph(["a"], Alphabet(3)))


def test_fiber_product_projections_preserve_labels():
    H, K = make("a", "bab"), make("b", "aa")
    fp = fiber_product(H, K)
    for eid, label, src, dst in fp.graph.edges():
        lh = H.graph.edge(fp.left_edge(eid))
        lk = K.graph.edge(fp.right_edge(eid))
        assert lh[0] == lk[0] == label
        assert (lh[1], lk[1]) == src and (lh[2], lk[2]) == dst


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8),
)
def test_fiber_product_lifts_common_loops(seed, letters):
    """A word closing up in both cores closes up in the product."""
    rng = random.Random(seed)
    H = random_subgroup(rng, rng.randint(1, 3), 6)
    K = random_subgroup(rng, rng.randint(1, 3), 6)
    w = Word(RANK2, letters)
    fp = fiber_product(H, K)
    lifted = fp.graph.trace(fp.basepoint, w)
    in_both = H.contains(w) and K.contains(w)
    assert in_both == (lifted.ok and lifted.vertex == fp.basepoint)


def test_based_meet_core_of_figure_pair_is_a_cycle():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    core = based_meet_core(H, K)
    assert core.chi == 0
    assert core.edge_count == core.vertex_count
    assert all(core.valence(v) == 2 for v in core.vertices)


# -- intersection -------------------------------------------------------------------


def test_intersection_example():
    got = intersection(make("a", "bab"), make("b", "aa"))
    assert got == make("aa")


def test_intersection_can_be_trivial():
    got = intersection(make("a", "bab"), make("b", "aBabA"))
    assert got.is_trivial


def test_intersection_of_embedded_free_factors():
    got = intersection(embedded("a", "b"), embedded("b", "c"))
    assert got.rank == 1
    assert got == make("abA")


def test_intersection_with_whole_group():
    H = make("a", "bab")
    assert intersection(H, make("a", "b")) == H


def test_intersection_is_symmetric_and_contained():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    M = intersection(H, K)
    assert M == intersection(K, H)
    for w in M.basis():
        assert H.contains(w) and K.contains(w)


def test_figure_intersection_is_the_known_loop():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    M = intersection(H, K)
    assert M.rank == 1
    assert M == make(FIGURE_MEET_WORD)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_intersection_membership_agrees_with_factors(seed):
    """Dual route: meet membership == simultaneous membership, on its basis."""
    rng = random.Random(seed)
    H = random_subgroup(rng, rng.randint(1, 3), 6)
    K = random_subgroup(rng, rng.randint(1, 3), 6)
    M = intersection(H, K)
    for w in M.basis():
        assert H.contains(w) and K.contains(w)
    for w in H.basis():
        assert M.contains(w) == K.contains(w)


# -- join ---------------------------------------------------------------------------


def test_join_fills_the_group():
    J = join(make("a", "bab"), make("b", "aa"))
    assert J == make("a", "b")
    assert (J.graph.vertex_count, J.graph.edge_count) == (1, 2)


def test_join_of_embedded_factors_has_rank_three():
    J = join(embedded("a", "b"), embedded("b", "c"))
    assert J.rank == 3
    assert J == embedded("a", "b", "c")


def test_join_with_itself_is_identity():
    H = make("a", "bab")
    assert join(H, H) == H


def test_join_contains_both_factors():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    J = join(H, K)
    assert J.rank == 2
    for w in H.basis() + K.basis():
        assert J.contains(w)


def test_join_with_maps_sends_basepoints_together():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    res = join_with_maps(H, K)
    bp = res.subgroup.graph.basepoint
    assert res.left_vertex_map[H.graph.basepoint] == bp
    assert res.right_vertex_map[K.graph.basepoint] == bp
    for v, img in res.left_vertex_map.items():
        assert img is None or res.subgroup.graph.has_vertex(img)


def test_join_rank_can_exceed_ambient_when_factors_are_small():
    H, K = make("b", "abA"), make("aabAA", "aaabAAA")
    assert join(H, K).rank == 4
    assert intersection(H, K).is_trivial


# -- topological pushout ------------------------------------------------------------


def test_pushout_of_equal_factors_collapses_to_the_core():
    H = make("a", "bab")
    po = topological_pushout(H, H, [based_meet_core(H, H)])
    assert po.graph.isomorphic(H.graph, based=False)
    assert po.chi == H.graph.chi


def test_pushout_with_no_cores_is_the_disjoint_union():
    H, K = make("a"), make("b")
    po = topological_pushout(H, K, [])
    assert po.graph.vertex_count == 2
    assert po.graph.edge_count == 2
    assert po.chi == H.graph.chi + K.graph.chi


def test_pushout_along_a_single_point_is_the_wedge():
    H, K = make("a", "bab"), make("b", "aBabA")
    point = LabeledGraph(
        2,
        [(H.graph.basepoint, K.graph.basepoint)],
        {},
        basepoint=(H.graph.basepoint, K.graph.basepoint),
    )
    po = topological_pushout(H, K, [point])
    assert po.chi == H.graph.chi + K.graph.chi - 1
    assert po.graph.vertex_count == (
        H.graph.vertex_count + K.graph.vertex_count - 1
    )


def test_pushout_folds_to_the_join():
    for left, right in (
        (make("a", "bab"), make("b", "aa")),
        (make(*FIGURE_LEFT), make(*FIGURE_RIGHT)),
        (embedded("a", "b"), embedded("b", "c")),
    ):
        po = topological_pushout(left, right, [based_meet_core(left, right)])
        assert po.folded_core() == join(left, right).graph


def test_figure_pushout_chi_gap():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    po = topological_pushout(H, K, [based_meet_core(H, K)])
    assert po.chi == -3
    assert join(H, K).graph.chi == -1


def test_pushout_vertex_classes_partition_the_factors():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    po = topological_pushout(H, K, [based_meet_core(H, K)])
    tagged = {(LEFT, v) for v in H.graph.vertices}
    tagged |= {(RIGHT, v) for v in K.graph.vertices}
    assert set(po.vertex_class) == tagged
    assert set(po.vertex_class.values()) == set(po.graph.vertices)


def test_pushout_edge_classes_preserve_labels_and_ends():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    po = topological_pushout(H, K, [based_meet_core(H, K)])
    for side, graph in ((LEFT, H.graph), (RIGHT, K.graph)):
        for eid, label, src, dst in graph.edges():
            image = po.edge_class[(side, eid)]
            ilabel, isrc, idst = po.graph.edge(image)
            assert ilabel == label
            assert isrc == po.vertex_class[(side, src)]
            assert idst == po.vertex_class[(side, dst)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pushout_chi_never_exceeds_join_chi(seed):
    rng = random.Random(seed)
    H = random_subgroup(rng, rng.randint(1, 3), 6)
    K = random_subgroup(rng, rng.randint(1, 3), 6)
    po = topological_pushout(H, K, [based_meet_core(H, K)])
    assert po.chi <= join(H, K).graph.chi


# -- double cosets ------------------------------------------------------------------


def test_double_cosets_of_equal_cyclic_groups():
    d = double_cosets(make("a"), make("a"))
    assert d.ranks == (1,)
    assert d.entries[0].based
    assert d.excess_sum == 0


def test_double_cosets_can_be_empty():
    d = double_cosets(make("a"), make("b"))
    assert d.ranks == ()
    assert d.excess_sum == 0


def test_double_cosets_of_the_whole_group():
    F = make("a", "b")
    d = double_cosets(F, F)
    assert d.ranks == (2,)
    assert d.entries[0].based
    assert d.excess_sum == 1


def test_double_cosets_split_by_parity():
    # <a^2> meets g<a^2>g^-1 nontrivially iff g has even a-exponent along
    # the coset; the two a-residues give two entries.
    d = double_cosets(make("aa"), make("aa"))
    assert d.ranks == (1, 1)
    assert d.entries[0].based and not d.entries[1].based


def test_double_coset_entries_are_unbased_cores():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    d = double_cosets(H, K)
    assert any(e.based for e in d.entries)
    for entry in d.entries:
        assert entry.core.basepoint is None
        assert entry.rank == entry.core.edge_count - entry.core.vertex_count + 1
        assert entry.rank >= 1
        assert all(entry.core.valence(v) >= 2 for v in entry.core.vertices)


def test_based_double_coset_matches_intersection_rank():
    H, K = make(*FIGURE_LEFT), make(*FIGURE_RIGHT)
    d = double_cosets(H, K)
    based = [e for e in d.entries if e.based]
    assert len(based) == 1
    assert based[0].rank == intersection(H, K).rank


# -- isolated vertices --------------------------------------------------------------


def test_isolated_vertex_scan_finds_the_lonely_pair():
    fp = fiber_product(make("a"), make("b"))
    assert isolated_vertex_scan(fp) == [fp.basepoint]


def test_isolated_vertex_scan_on_roses_is_empty():
    F = make("a", "b")
    assert isolated_vertex_scan(fiber_product(F, F)) == []
