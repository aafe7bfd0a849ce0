"""Finitely generated subgroups of a free group, presented by folded cores.

A subgroup is stored as its core: the folded, trimmed, canonically numbered
based graph whose reduced based loops spell exactly the subgroup's elements.
Construction from generators is bouquet -> fold -> trim -> canonical form,
so equal subgroups always produce identical graphs regardless of how the
generating sets were written down.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .graphs import IN, OUT, LabeledGraph, bouquet_of, fold_to_immersion, trim_to_core
from .words import Alphabet, Word, square_commutator_embed


class TrivialIntersectionError(ValueError):
    """The operation needs the two subgroups to intersect nontrivially."""


class Subgroup:
    """An f.g. subgroup with its canonical core graph."""

    __slots__ = ("alphabet", "generators", "graph", "rank")

    def __init__(self, alphabet: Alphabet, generators: tuple[Word, ...], graph: LabeledGraph):
        self.alphabet = alphabet
        self.generators = generators
        self.graph = graph
        self.rank = graph.edge_count - graph.vertex_count + 1

    @classmethod
    def from_core(
        cls,
        graph: LabeledGraph,
        alphabet: Alphabet,
        generators: Iterable[Word] | None = None,
    ) -> "Subgroup":
        """Wrap an already folded core; the graph is canonicalized here."""
        if graph.basepoint is None:
            raise ValueError("a subgroup core needs a basepoint")
        if not graph.is_properly_labeled():
            raise ValueError("a subgroup core must be properly labeled")
        if graph.stats().component_count != 1:
            raise ValueError("a subgroup core must be connected")
        if not graph.is_core():
            raise ValueError("a subgroup core may not have non-basepoint valence <= 1 vertices")
        canon = graph.canonical().graph
        sub = cls(alphabet, (), canon)
        gens = tuple(generators) if generators is not None else tuple(basis(sub))
        for w in gens:
            if w.alphabet != alphabet:
                raise ValueError("generator alphabet mismatch")
            outcome = canon.trace(canon.basepoint, w)
            if not outcome.ok or outcome.vertex != canon.basepoint:
                raise ValueError(f"generator {w} does not trace a based loop in the core")
        sub.generators = gens
        return sub

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    def contains(self, w: Word) -> bool:
        return membership(self, w)

    def basis(self) -> list[Word]:
        return basis(self)

    def conj(self, g: Word) -> "Subgroup":
        """The conjugate subgroup g * self * g^-1."""
        return subgroup_graph([x.conj(g) for x in self.generators], self.alphabet)

    def spec_dict(self) -> dict:
        """JSON-friendly form: alphabet rank plus generator words."""
        return {
            "alphabet_rank": self.alphabet.rank,
            "generators": [str(w) for w in self.generators],
        }

    def __eq__(self, other: object) -> bool:
        """Equality as subgroups: identical canonical cores."""
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.alphabet == other.alphabet and self.graph == other.graph

    def __hash__(self) -> int:
        return hash((self.alphabet, self.graph))

    def __repr__(self) -> str:
        gens = ", ".join(str(w) for w in self.generators)
        return f"Subgroup(<{gens}>, rank={self.rank})"


def subgroup_graph(gens: Iterable[Word | str], alphabet: Alphabet | None = None) -> Subgroup:
    """Build the subgroup generated by words (strings are parsed)."""
    parsed: list[Word] = []
    for w in gens:
        if isinstance(w, str):
            if alphabet is None:
                raise ValueError("an alphabet is required to parse string generators")
            w = alphabet.word(w)
        parsed.append(w)
    if alphabet is None:
        if not parsed:
            raise ValueError("an alphabet is required for an empty generator list")
        alphabet = parsed[0].alphabet
    folded = fold_to_immersion(bouquet_of(parsed, alphabet)).graph
    core = trim_to_core(folded)
    kept = tuple(w for w in parsed if not w.is_identity)
    return Subgroup.from_core(core, alphabet, generators=kept)


def subgroup_from_spec(data: dict) -> Subgroup:
    """Inverse of :meth:`Subgroup.spec_dict`: rebuild from the JSON form."""
    rank = data.get("alphabet_rank", 2)
    gens = data.get("generators")
    if not isinstance(rank, int) or rank < 1:
        raise ValueError("alphabet_rank must be a positive integer")
    if gens is None or not isinstance(gens, list):
        raise ValueError("generators must be a list of words")
    return subgroup_graph([str(g) for g in gens], Alphabet(rank))


def membership(H: Subgroup, w: Word) -> bool:
    """Whether ``w`` lies in ``H``: its trace closes up at the basepoint."""
    if w.alphabet != H.alphabet:
        raise ValueError("word alphabet differs from subgroup alphabet")
    outcome = H.graph.trace(H.graph.basepoint, w)
    return outcome.ok and outcome.vertex == H.graph.basepoint


def _tree_paths(graph: LabeledGraph) -> tuple[dict, set]:
    """BFS spanning tree from the basepoint: letter paths and tree edge ids."""
    bp = graph.basepoint
    path: dict = {bp: ()}
    tree_edges: set = set()
    queue = deque([bp])
    while queue:
        v = queue.popleft()
        for label in range(graph.rank):
            for direction in (OUT, IN):
                e = graph.dart_edge(v, label, direction)
                if e is None:
                    continue
                _, src, dst = graph.edge(e)
                w = dst if direction == OUT else src
                if w not in path:
                    letter = (label + 1) if direction == OUT else -(label + 1)
                    path[w] = path[v] + (letter,)
                    tree_edges.add(e)
                    queue.append(w)
    return path, tree_edges


def basis(H: Subgroup) -> list[Word]:
    """A free basis from a spanning tree: one word per non-tree edge."""
    graph = H.graph
    path, tree_edges = _tree_paths(graph)
    out: list[Word] = []
    for eid in sorted(e for e, *_ in graph.edges() if e not in tree_edges):
        label, src, dst = graph.edge(eid)
        letters = path[src] + (label + 1,) + tuple(-x for x in reversed(path[dst]))
        out.append(Word(H.alphabet, letters))
    return out


def three_regularize(H: Subgroup) -> Subgroup:
    """Re-embed so every branch vertex of the core is 3-valent, of one type.

    Applies a -> a^2, b -> a b a^-1 b^-1 to every generator; the rank is
    preserved and the resulting core has no single-edge loops.
    """
    if H.alphabet.rank != 2:
        raise ValueError("three_regularize is defined for rank-2 alphabets")
    return subgroup_graph(
        [square_commutator_embed(w) for w in H.generators], H.alphabet
    )


# -- basepoint normalization -------------------------------------------------


def _stem_word(graph: LabeledGraph) -> Word:
    """Letters along the unique path from an extremal basepoint to the
    nearest vertex of valence >= 3."""
    bp = graph.basepoint
    seen = {bp: ()}
    queue = deque([bp])
    while queue:
        v = queue.popleft()
        if graph.valence(v) >= 3:
            return Word(Alphabet(graph.rank), seen[v])
        for label in range(graph.rank):
            for direction in (OUT, IN):
                e = graph.dart_edge(v, label, direction)
                if e is None:
                    continue
                _, src, dst = graph.edge(e)
                w = dst if direction == OUT else src
                if w not in seen:
                    letter = (label + 1) if direction == OUT else -(label + 1)
                    seen[w] = seen[v] + (letter,)
                    queue.append(w)
    raise ValueError("no branch vertex reachable; cannot normalize a rank <= 0 core")


def _meet_is_trivial(H: Subgroup, K: Subgroup) -> bool:
    """Whether the based component of the vertex-pair product is a tree."""
    gH, gK = H.graph, K.graph
    start = (gH.basepoint, gK.basepoint)
    seen = {start}
    edges = 0
    queue = deque([start])
    while queue:
        u, v = queue.popleft()
        for label in range(gH.rank):
            eh = gH.dart_edge(u, label, OUT)
            ek = gK.dart_edge(v, label, OUT)
            if eh is not None and ek is not None:
                edges += 1
                nxt = (gH.edge(eh)[2], gK.edge(ek)[2])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
            eh = gH.dart_edge(u, label, IN)
            ek = gK.dart_edge(v, label, IN)
            if eh is not None and ek is not None:
                nxt = (gH.edge(eh)[1], gK.edge(ek)[1])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    # every component edge is counted exactly once: at its source vertex's
    # out-step (in-steps only widen the search)
    return edges < len(seen)


def _conjugate_pair(H: Subgroup, K: Subgroup, v: Word) -> tuple[Subgroup, Subgroup]:
    return H.conj(v), K.conj(v)


def normalize_nonextremal(H: Subgroup, K: Subgroup) -> tuple[Subgroup, Subgroup, Word]:
    """Conjugate the pair until neither core has an extremal vertex.

    Requires a nontrivial intersection.  First the basepoint of the left
    core is pushed to its nearest branch vertex; then, if the right core
    still has an extremal basepoint, its stem word (readable from the left
    basepoint too, because the intersection is nontrivial) is used for a
    second conjugation.  Returns the adjusted pair and the conjugator v,
    with each returned subgroup equal to v * original * v^-1.
    """
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch")
    if H.is_trivial or K.is_trivial or _meet_is_trivial(H, K):
        raise TrivialIntersectionError(
            "basepoint normalization needs a nontrivial intersection"
        )
    total = H.alphabet.identity()
    if H.graph.stats().extremal_count:
        w = _stem_word(H.graph)
        step = ~w
        H, K = _conjugate_pair(H, K, step)
        total = step * total
    if K.graph.stats().extremal_count:
        w = _stem_word(K.graph)
        if not H.graph.trace(H.graph.basepoint, w).ok:
            raise AssertionError("stem word must be readable in both cores")
        step = ~w
        H, K = _conjugate_pair(H, K, step)
        total = step * total
    if H.graph.stats().extremal_count or K.graph.stats().extremal_count:
        raise AssertionError("normalization failed to remove extremal vertices")
    return H, K, total
