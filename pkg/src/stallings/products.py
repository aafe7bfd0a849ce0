"""Pairwise constructions on subgroup cores.

The vertex-pair product of two cores synchronizes every joint move: its
based component computes the intersection, its other positive-rank
components enumerate the conjugacy classes of intersections with
conjugates, and pushing the two cores out along any family of common
immersed subgraphs produces the quotient whose Euler characteristic
controls the join.

Throughout, product vertices are coordinate pairs (left vertex, right
vertex) and product edges are pairs (left edge, right edge); the
projection maps are literally the coordinate projections.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Hashable, Iterable

from .core import Subgroup
from .graphs import (
    IN,
    OUT,
    LabeledGraph,
    fold_to_immersion,
    trim_to_core,
    wedge,
)

LEFT = 0
RIGHT = 1


# -- fiber product -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FiberProduct:
    """The full vertex-pair product, isolated vertices included."""

    left: Subgroup
    right: Subgroup
    graph: LabeledGraph

    @property
    def basepoint(self) -> tuple:
        return self.graph.basepoint

    @staticmethod
    def left_vertex(v: tuple) -> Hashable:
        return v[0]

    @staticmethod
    def right_vertex(v: tuple) -> Hashable:
        return v[1]

    @staticmethod
    def left_edge(e: tuple) -> Hashable:
        return e[0]

    @staticmethod
    def right_edge(e: tuple) -> Hashable:
        return e[1]


def _paired_edges(gH: LabeledGraph, gK: LabeledGraph):
    """Every (left edge, right edge) pair sharing a label, as product edges."""
    by_label_K: dict[int, list] = defaultdict(list)
    for eid, label, src, dst in gK.edges():
        by_label_K[label].append((eid, src, dst))
    for eidH, label, srcH, dstH in gH.edges():
        for eidK, srcK, dstK in by_label_K[label]:
            yield (eidH, eidK), (label, (srcH, srcK), (dstH, dstK))


def fiber_product(H: Subgroup, K: Subgroup) -> FiberProduct:
    """Materialize the whole product of the two cores."""
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch")
    gH, gK = H.graph, K.graph
    vertices = list(cartesian(gH.vertices, gK.vertices))
    edges = dict(_paired_edges(gH, gK))
    graph = LabeledGraph(
        gH.rank, vertices, edges, basepoint=(gH.basepoint, gK.basepoint)
    )
    return FiberProduct(H, K, graph)


def _based_component(gH: LabeledGraph, gK: LabeledGraph) -> LabeledGraph:
    """Only the product component of the pair of basepoints, grown lazily."""
    start = (gH.basepoint, gK.basepoint)
    seen: dict = {start: None}
    edges: dict = {}
    queue = deque([start])
    while queue:
        u, v = queue.popleft()
        for label in range(gH.rank):
            eh = gH.dart_edge(u, label, OUT)
            ek = gK.dart_edge(v, label, OUT)
            if eh is not None and ek is not None:
                nxt = (gH.edge(eh)[2], gK.edge(ek)[2])
                edges[(eh, ek)] = (label, (u, v), nxt)
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
            eh = gH.dart_edge(u, label, IN)
            ek = gK.dart_edge(v, label, IN)
            if eh is not None and ek is not None:
                prv = (gH.edge(eh)[1], gK.edge(ek)[1])
                edges[(eh, ek)] = (label, prv, (u, v))
                if prv not in seen:
                    seen[prv] = None
                    queue.append(prv)
    return LabeledGraph(gH.rank, seen, edges, basepoint=start)


def based_meet_core(H: Subgroup, K: Subgroup) -> LabeledGraph:
    """The intersection's core in product coordinates (basepoint kept)."""
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch")
    return trim_to_core(_based_component(H.graph, K.graph))


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    """The meet, generated by a spanning-tree basis of its core."""
    return Subgroup.from_core(based_meet_core(H, K), H.alphabet)


# -- join -----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class JoinResult:
    subgroup: Subgroup
    # factor core vertex -> canonical join core vertex (None when trimmed away)
    left_vertex_map: dict
    right_vertex_map: dict


def join_with_maps(H: Subgroup, K: Subgroup) -> JoinResult:
    """Wedge the cores at their basepoints, fold, trim, canonicalize."""
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch")
    wedged, mapH, mapK = wedge(H.graph, K.graph)
    folded = fold_to_immersion(wedged)
    core = trim_to_core(folded.graph)
    canon = core.canonical()
    sub = Subgroup.from_core(core, H.alphabet, generators=H.generators + K.generators)

    def compose(pre: dict) -> dict:
        out = {}
        for v, tagged in pre.items():
            folded_v = folded.vertex_map[tagged]
            out[v] = canon.vertex_map.get(folded_v)
        return out

    # from_core canonicalizes the same trimmed core, so numbering agrees
    assert sub.graph == canon.graph
    return JoinResult(sub, compose(mapH), compose(mapK))


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    """The subgroup generated by both factors together."""
    return join_with_maps(H, K).subgroup


# -- topological pushout ----------------------------------------------------------


class _Partition:
    """Disjoint-set over arbitrary hashables."""

    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> list[list]:
        grouped: dict = defaultdict(list)
        for x in self.parent:
            grouped[self.find(x)].append(x)
        return [sorted(members) for members in grouped.values()]


@dataclass(frozen=True, slots=True)
class StarClassSummary:
    """Equivalence classes of 3-valent vertex stars under star identification."""

    count: int
    # tagged (side, vertex) -> class index
    assignment: dict
    # class index -> tagged members
    members: tuple[tuple, ...]
    # quotient vertex -> class indices of the stars mapping onto it
    by_quotient_vertex: dict


class PushoutResult:
    """Quotient of the disjoint union of two cores along common subgraphs.

    Vertices and edges of the two sides are identified whenever some
    supplied core maps onto both at once; the quotient generally fails to
    be properly labeled, and folding it recovers the join's core.
    """

    def __init__(
        self,
        left: LabeledGraph,
        right: LabeledGraph,
        graph: LabeledGraph,
        vertex_class: dict,
        edge_class: dict,
        star_seeds: tuple = (),
    ):
        self.left = left
        self.right = right
        self.graph = graph
        self.vertex_class = vertex_class  # (side, vertex) -> quotient vertex
        self.edge_class = edge_class  # (side, edge) -> quotient edge
        # ((LEFT, u), (RIGHT, v)) pairs whose full stars a core identifies
        self.star_seeds = star_seeds

    @property
    def chi(self) -> int:
        return self.graph.chi

    def _sides(self):
        yield LEFT, self.left
        yield RIGHT, self.right

    def star_classes(self) -> StarClassSummary:
        """Partition the 3-valent stars by the identifications the cores force.

        A 3-valent core vertex maps its star bijectively onto a 3-valent
        star on each side, identifying the two in full; the classes are
        the transitive closure of those identifications.  A star no such
        vertex reaches stays a singleton, even when its darts happen to
        land on the same quotient edges as another star's.
        """
        parts = _Partition()
        for side, graph in self._sides():
            for v in graph.vertices:
                if graph.valence(v) == 3:
                    parts.add((side, v))
        for a, b in self.star_seeds:
            if a in parts.parent and b in parts.parent:
                parts.union(a, b)
        assignment = {}
        members = []
        for index, tagged_list in enumerate(sorted(parts.classes())):
            members.append(tuple(tagged_list))
            for tagged in tagged_list:
                assignment[tagged] = index
        by_vertex: dict = defaultdict(set)
        for tagged, index in assignment.items():
            by_vertex[self.vertex_class[tagged]].add(index)
        return StarClassSummary(
            count=len(members),
            assignment=assignment,
            members=tuple(members),
            by_quotient_vertex={z: tuple(sorted(s)) for z, s in by_vertex.items()},
        )

    def special_vertices(self) -> list:
        """Quotient branch vertices with no branch vertex above them."""
        out = []
        branched_under: set = set()
        for side, graph in self._sides():
            for v in graph.vertices:
                if graph.valence(v) >= 3:
                    branched_under.add(self.vertex_class[(side, v)])
        for z in self.graph.vertices:
            if self.graph.valence(z) >= 3 and z not in branched_under:
                out.append(z)
        return out

    def valence_bound_violations(self) -> list:
        """Branch vertices whose valence exceeds 2 + (star classes above)."""
        stars = self.star_classes()
        out = []
        for z in self.graph.vertices:
            valence = self.graph.valence(z)
            if valence >= 3:
                allowed = 2 + len(stars.by_quotient_vertex.get(z, ()))
                if valence > allowed:
                    out.append((z, valence, allowed))
        return out

    def loop_quotient_edges(self) -> list:
        """Quotient edges with equal endpoints (an edge failing to embed)."""
        return [e for e, _, src, dst in self.graph.edges() if src == dst]

    def folded_core(self) -> LabeledGraph:
        """Fold and trim the quotient; lands on the join's core."""
        folded = fold_to_immersion(self.graph).graph
        return trim_to_core(folded).canonical().graph


def topological_pushout(
    H: Subgroup, K: Subgroup, cores: Iterable[LabeledGraph]
) -> PushoutResult:
    """Quotient the two cores along product-coordinate core graphs.

    Each supplied core must have vertex pairs / edge pairs for identifiers,
    its coordinates giving the two immersions.  Supplying the based meet
    core yields the join-controlling quotient; supplying every
    positive-rank product component tightens it further.
    """
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch")
    gH, gK = H.graph, K.graph
    vparts = _Partition()
    eparts = _Partition()
    for side, graph in ((LEFT, gH), (RIGHT, gK)):
        for v in graph.vertices:
            vparts.add((side, v))
        for e, *_ in graph.edges():
            eparts.add((side, e))

    star_seeds = []
    for core in cores:
        for v in core.vertices:
            vH, vK = v
            if not (gH.has_vertex(vH) and gK.has_vertex(vK)):
                raise ValueError(f"core vertex {v!r} does not project into both factors")
            vparts.union((LEFT, vH), (RIGHT, vK))
            if core.valence(v) == 3:
                star_seeds.append(((LEFT, vH), (RIGHT, vK)))
        for eid, label, src, dst in core.edges():
            eH, eK = eid
            for side_graph, e, s, d in (
                (gH, eH, src[0], dst[0]),
                (gK, eK, src[1], dst[1]),
            ):
                try:
                    got = side_graph.edge(e)
                except KeyError:
                    got = None
                if got != (label, s, d):
                    raise ValueError(
                        f"core edge {eid!r} does not commute with the projections"
                    )
            eparts.union((LEFT, eH), (RIGHT, eK))

    vertex_classes = sorted(vparts.classes())
    vertex_class = {}
    for index, members in enumerate(vertex_classes):
        for tagged in members:
            vertex_class[tagged] = index
    edge_classes = sorted(eparts.classes())
    edge_class = {}
    quotient_edges = {}
    graphs = {LEFT: gH, RIGHT: gK}
    for index, members in enumerate(edge_classes):
        for tagged in members:
            edge_class[tagged] = index
        records = set()
        for side, e in members:
            label, src, dst = graphs[side].edge(e)
            records.add((label, vertex_class[(side, src)], vertex_class[(side, dst)]))
        if len(records) != 1:
            raise ValueError("identified edges disagree on label or endpoints")
        quotient_edges[index] = next(iter(records))

    basepoint = vertex_class[(LEFT, gH.basepoint)]
    graph = LabeledGraph(
        gH.rank, range(len(vertex_classes)), quotient_edges, basepoint=basepoint
    )
    return PushoutResult(
        gH, gK, graph, vertex_class, edge_class, star_seeds=tuple(star_seeds)
    )


# -- double cosets -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class DoubleCosetEntry:
    """One conjugacy class of nontrivial intersection with a conjugate."""

    core: LabeledGraph  # unbased, product coordinates
    rank: int
    based: bool  # whether this component holds the pair of basepoints


@dataclass(frozen=True, slots=True)
class DoubleCosetDecomposition:
    entries: tuple[DoubleCosetEntry, ...]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(entry.rank for entry in self.entries)

    @property
    def excess_sum(self) -> int:
        """Sum of (rank - 1) over all entries."""
        return sum(r - 1 for r in self.ranks)


def double_cosets(H: Subgroup, K: Subgroup) -> DoubleCosetDecomposition:
    """Positive-rank components of the product, trimmed to unbased cores.

    Each entry realizes one double coset whose conjugate meets the left
    factor nontrivially; the based entry (when present) is listed first,
    the rest in decreasing rank with canonical tie-breaking.
    """
    fp = fiber_product(H, K)
    base = fp.graph.basepoint
    comps = fp.graph.components()
    comp_of = {v: i for i, comp in enumerate(comps) for v in comp}
    edge_totals = [0] * len(comps)
    for _, _, src, _ in fp.graph.edges():
        edge_totals[comp_of[src]] += 1
    entries = []
    for comp, edge_total in zip(comps, edge_totals):
        betti = edge_total - len(comp) + 1
        if betti < 1:
            continue
        comp_set = set(comp)
        piece = fp.graph.subgraph(comp_set, basepoint=None)
        core = trim_to_core(piece, keep_basepoint=False)
        entries.append(DoubleCosetEntry(core, betti, based=base in comp_set))
    entries.sort(
        key=lambda entry: (
            not entry.based,
            -entry.rank,
            entry.core.canonical_key(based=False),
        )
    )
    return DoubleCosetDecomposition(tuple(entries))


def isolated_vertex_scan(fp: FiberProduct) -> list:
    """Product vertices with no incident edge at all."""
    return [v for v in fp.graph.vertices if fp.graph.valence(v) == 0]
