"""Labeled oriented graphs: folding, cores, traces, canonical forms.

Vertices and edges carry arbitrary hashable identifiers (kept homogeneous
and sortable within any one graph), edges carry a generator label and an
orientation, and a graph may have a distinguished basepoint.  A graph is
*properly labeled* when no vertex has two outgoing (or two incoming) edges
with the same label; properly labeled graphs are deterministic in both
directions, which is what makes traces, membership and canonical forms
well defined.

Graphs are values: construct once, never mutate.  The folding and trimming
operations return fresh graphs together with vertex/edge correspondence
maps.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, NamedTuple

from .words import Alphabet, Word

OUT = 1
IN = -1

_DOT_COLORS = ("black", "red2", "blue2", "forestgreen", "darkorange", "purple")


class ImproperLabelingError(ValueError):
    """The operation requires a properly labeled graph."""


@dataclass(frozen=True, slots=True)
class GraphStats:
    """Size and shape summary of a labeled graph."""

    vertex_count: int
    edge_count: int
    chi: int
    rank: int
    branch_count: int
    max_valence: int
    extremal_count: int
    component_count: int


@dataclass(frozen=True, slots=True)
class VertexType:
    """The multiset of (label, direction) dart kinds in a vertex star."""

    darts: tuple[tuple[int, int], ...]  # sorted (label, OUT/IN) pairs

    @property
    def valence(self) -> int:
        return len(self.darts)

    def describe(self, alphabet: Alphabet) -> str:
        parts = []
        for label, direction in self.darts:
            name = alphabet.letter_name(label + 1)
            parts.append(f"{name}-{'out' if direction == OUT else 'in'}")
        return "{" + ", ".join(parts) + "}"


def same_type(a: VertexType, b: VertexType) -> bool:
    """Whether one star's dart multiset is contained in the other's."""
    ca, cb = Counter(a.darts), Counter(b.darts)
    return ca <= cb or cb <= ca


class Traversal(NamedTuple):
    """Outcome of tracing a word: the final vertex, or the failure index."""

    vertex: Hashable | None
    failed_at: int | None

    @property
    def ok(self) -> bool:
        return self.failed_at is None


@dataclass(frozen=True, slots=True)
class CanonicalForm:
    graph: "LabeledGraph"
    vertex_map: dict
    edge_map: dict


class LabeledGraph:
    """A finite oriented graph with edges labeled by generator indices."""

    __slots__ = ("rank", "basepoint", "_edge", "_out", "_in", "_vertex_order", "_proper")

    def __init__(
        self,
        rank: int,
        vertices: Iterable[Hashable],
        edges,
        basepoint: Hashable | None = None,
    ):
        """``edges`` maps edge id -> (label, src, dst), or iterates
        (eid, label, src, dst) tuples."""
        self.rank = rank
        self.basepoint = basepoint
        edge_table: dict = {}
        if isinstance(edges, dict):
            items = ((eid, rec[0], rec[1], rec[2]) for eid, rec in edges.items())
        else:
            items = iter(edges)
        order: dict = {}
        for v in vertices:
            order.setdefault(v, None)
        out: dict = {v: [] for v in order}
        inc: dict = {v: [] for v in order}
        for eid, label, src, dst in items:
            if not 0 <= label < rank:
                raise ValueError(f"edge {eid!r} label {label} out of range for rank {rank}")
            if src not in order or dst not in order:
                raise ValueError(f"edge {eid!r} endpoint missing from vertex set")
            if eid in edge_table:
                raise ValueError(f"duplicate edge id {eid!r}")
            edge_table[eid] = (label, src, dst)
            out[src].append(eid)
            inc[dst].append(eid)
        if basepoint is not None and basepoint not in order:
            raise ValueError(f"basepoint {basepoint!r} missing from vertex set")
        self._edge = edge_table
        self._out = out
        self._in = inc
        self._vertex_order = tuple(order)
        self._proper = None

    # -- structure access ----------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertex_order

    @property
    def vertex_count(self) -> int:
        return len(self._vertex_order)

    @property
    def edge_count(self) -> int:
        return len(self._edge)

    def has_vertex(self, v: Hashable) -> bool:
        return v in self._out

    def edge(self, eid: Hashable) -> tuple[int, Hashable, Hashable]:
        return self._edge[eid]

    def edges(self) -> Iterator[tuple[Hashable, int, Hashable, Hashable]]:
        for eid, (label, src, dst) in self._edge.items():
            yield eid, label, src, dst

    def out_edges(self, v: Hashable) -> tuple:
        return tuple(self._out[v])

    def in_edges(self, v: Hashable) -> tuple:
        return tuple(self._in[v])

    def valence(self, v: Hashable) -> int:
        # a loop contributes once as outgoing and once as incoming
        return len(self._out[v]) + len(self._in[v])

    def vertex_type(self, v: Hashable) -> VertexType:
        darts = [(self._edge[e][0], OUT) for e in self._out[v]]
        darts += [(self._edge[e][0], IN) for e in self._in[v]]
        return VertexType(tuple(sorted(darts)))

    def is_properly_labeled(self) -> bool:
        if self._proper is None:
            proper = True
            for v in self._vertex_order:
                out_labels = [self._edge[e][0] for e in self._out[v]]
                in_labels = [self._edge[e][0] for e in self._in[v]]
                if len(set(out_labels)) != len(out_labels) or len(set(in_labels)) != len(in_labels):
                    proper = False
                    break
            self._proper = proper
        return self._proper

    def _require_proper(self) -> None:
        if not self.is_properly_labeled():
            raise ImproperLabelingError("graph is not properly labeled")

    # -- deterministic traversal ----------------------------------------------

    def dart_edge(self, v: Hashable, label: int, direction: int) -> Hashable | None:
        """The unique edge at ``v`` with the given label and direction, if any."""
        self._require_proper()
        pool = self._out[v] if direction == OUT else self._in[v]
        for e in pool:
            if self._edge[e][0] == label:
                return e
        return None

    def step(self, v: Hashable, letter: int) -> Hashable | None:
        """Follow one signed letter from ``v``; None when unreadable."""
        label = abs(letter) - 1
        if letter > 0:
            e = self.dart_edge(v, label, OUT)
            return None if e is None else self._edge[e][2]
        e = self.dart_edge(v, label, IN)
        return None if e is None else self._edge[e][1]

    def trace(self, start: Hashable, w: Word) -> Traversal:
        """Read ``w`` from ``start``; failure records the first unreadable index."""
        if start not in self._out:
            raise ValueError(f"start vertex {start!r} not in graph")
        here = start
        for i, letter in enumerate(w.letters):
            nxt = self.step(here, letter)
            if nxt is None:
                return Traversal(None, i)
            here = nxt
        return Traversal(here, None)

    # -- summaries -------------------------------------------------------------

    def stats(self) -> GraphStats:
        valences = [self.valence(v) for v in self._vertex_order]
        nv, ne = len(valences), len(self._edge)
        comps = self.components()
        return GraphStats(
            vertex_count=nv,
            edge_count=ne,
            chi=nv - ne,
            rank=ne - nv + len(comps),
            branch_count=sum(1 for x in valences if x >= 3),
            max_valence=max(valences, default=0),
            extremal_count=sum(1 for x in valences if x <= 1),
            component_count=len(comps),
        )

    @property
    def chi(self) -> int:
        return self.vertex_count - self.edge_count

    def is_core(self) -> bool:
        """No vertex of valence <= 1 apart from the basepoint."""
        return all(
            self.valence(v) >= 2 for v in self._vertex_order if v != self.basepoint
        )

    def components(self) -> list[list]:
        seen: set = set()
        comps: list[list] = []
        for v0 in self._vertex_order:
            if v0 in seen:
                continue
            comp = [v0]
            seen.add(v0)
            queue = deque([v0])
            while queue:
                v = queue.popleft()
                for e in self._out[v]:
                    w = self._edge[e][2]
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
                for e in self._in[v]:
                    w = self._edge[e][1]
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    # -- rebuilding --------------------------------------------------------------

    def subgraph(self, keep_vertices: set, *, basepoint: Hashable | None = None) -> "LabeledGraph":
        edges = {
            eid: rec
            for eid, rec in self._edge.items()
            if rec[1] in keep_vertices and rec[2] in keep_vertices
        }
        vertices = [v for v in self._vertex_order if v in keep_vertices]
        return LabeledGraph(self.rank, vertices, edges, basepoint=basepoint)

    def with_basepoint(self, v: Hashable | None) -> "LabeledGraph":
        return LabeledGraph(self.rank, self._vertex_order, self._edge, basepoint=v)

    def relabeled(self, vertex_map: dict, edge_map: dict | None = None) -> "LabeledGraph":
        """Rename vertices (and optionally edge ids) through injective maps."""
        if len(set(vertex_map.values())) != len(vertex_map):
            raise ValueError("vertex relabeling is not injective")
        emap = edge_map or {e: e for e in self._edge}
        edges = {
            emap[eid]: (label, vertex_map[src], vertex_map[dst])
            for eid, (label, src, dst) in self._edge.items()
        }
        bp = None if self.basepoint is None else vertex_map[self.basepoint]
        return LabeledGraph(
            self.rank, [vertex_map[v] for v in self._vertex_order], edges, basepoint=bp
        )

    # -- canonical form ------------------------------------------------------------

    def _encode_from(self, start: Hashable, comp: list) -> tuple[dict, tuple]:
        """BFS numbering from ``start`` in (label, out-then-in) dart order."""
        number = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for label in range(self.rank):
                for direction in (OUT, IN):
                    e = self.dart_edge(v, label, direction)
                    if e is None:
                        continue
                    _, src, dst = self._edge[e]
                    w = dst if direction == OUT else src
                    if w not in number:
                        number[w] = len(order)
                        order.append(w)
        if len(order) != len(comp):
            raise ValueError("component not connected under traversal")
        encoded = sorted(
            (number[src], label, number[dst])
            for _, (label, src, dst) in self._edge.items()
            if src in number
        )
        return number, tuple(encoded)

    def _component_encoding(self, comp: list, based_at: Hashable | None) -> tuple[dict, tuple]:
        if based_at is not None:
            return self._encode_from(based_at, comp)
        best: tuple[dict, tuple] | None = None
        for start in comp:
            numbering, code = self._encode_from(start, comp)
            if best is None or code < best[1]:
                best = (numbering, code)
        assert best is not None
        return best

    def canonical(self, *, based: bool = True) -> CanonicalForm:
        """Deterministic relabeling: vertices 0..n-1, edges 0..m-1.

        Two properly labeled graphs are isomorphic (respecting basepoints when
        ``based``) exactly when their canonical forms are equal.
        """
        self._require_proper()
        comps = self.components()
        use_base = self.basepoint if based else None
        encoded = []
        for comp in comps:
            anchor = use_base if use_base is not None and use_base in comp else None
            numbering, code = self._component_encoding(comp, anchor)
            # the based component sorts first, then by code
            key = (0 if anchor is not None else 1, code)
            encoded.append((key, numbering, comp))
        encoded.sort(key=lambda t: t[0])
        vertex_map: dict = {}
        offset = 0
        for _, numbering, comp in encoded:
            for v, n in numbering.items():
                vertex_map[v] = offset + n
            offset += len(comp)
        ordered_edges = sorted(
            self._edge.items(),
            key=lambda item: (vertex_map[item[1][1]], item[1][0], vertex_map[item[1][2]]),
        )
        edge_map = {eid: i for i, (eid, _) in enumerate(ordered_edges)}
        edges = {
            edge_map[eid]: (label, vertex_map[src], vertex_map[dst])
            for eid, (label, src, dst) in ordered_edges
        }
        bp = None
        if based and self.basepoint is not None:
            bp = vertex_map[self.basepoint]
        graph = LabeledGraph(self.rank, range(len(vertex_map)), edges, basepoint=bp)
        return CanonicalForm(graph, vertex_map, edge_map)

    def canonical_key(self, *, based: bool = True) -> tuple:
        g = self.canonical(based=based).graph
        return (
            g.rank,
            g.vertex_count,
            tuple(sorted((src, label, dst) for _, (label, src, dst) in g._edge.items())),
            g.basepoint,
        )

    def isomorphic(self, other: "LabeledGraph", *, based: bool = True) -> bool:
        return self.canonical_key(based=based) == other.canonical_key(based=based)

    def __eq__(self, other: object) -> bool:
        """Structural identity: same ids, edges and basepoint."""
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.basepoint == other.basepoint
            and set(self._vertex_order) == set(other._vertex_order)
            and self._edge == other._edge
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.rank,
                self.basepoint,
                frozenset(self._vertex_order),
                frozenset((e, rec) for e, rec in self._edge.items()),
            )
        )

    def __repr__(self) -> str:
        return (
            f"LabeledGraph(rank={self.rank}, vertices={self.vertex_count}, "
            f"edges={self.edge_count}, basepoint={self.basepoint!r})"
        )

    # -- export -----------------------------------------------------------------

    def to_dot(
        self,
        *,
        name: str = "core",
        alphabet: Alphabet | None = None,
        vertex_text: dict | None = None,
    ) -> str:
        """Graphviz source with one color per label and a doubled basepoint.

        Properly labeled graphs are numbered from the canonical form so the
        output is reproducible; others fall back to sorted identifiers.
        """
        alphabet = alphabet or Alphabet(self.rank)
        if self.is_properly_labeled():
            vmap = self.canonical().vertex_map
        else:
            vmap = {v: i for i, v in enumerate(sorted(self._vertex_order, key=repr))}
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for v in sorted(self._vertex_order, key=lambda u: vmap[u]):
            shape = "doublecircle" if v == self.basepoint else "circle"
            text = vertex_text.get(v, str(vmap[v])) if vertex_text else str(vmap[v])
            lines.append(f'  {vmap[v]} [shape={shape}, label="{text}"];')
        edge_rows = sorted(
            (vmap[src], label, vmap[dst]) for _, (label, src, dst) in self._edge.items()
        )
        for src, label, dst in edge_rows:
            color = _DOT_COLORS[label % len(_DOT_COLORS)]
            lines.append(
                f'  {src} -> {dst} [label="{alphabet.letter_name(label + 1)}", color={color}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- builders ---------------------------------------------------------------------


def bouquet_of(gens: Iterable[Word], alphabet: Alphabet | None = None) -> LabeledGraph:
    """One subdivided loop per nonidentity generator, wedged at a basepoint."""
    gens = list(gens)
    if alphabet is None:
        if not gens:
            raise ValueError("an alphabet is required for an empty generator list")
        alphabet = gens[0].alphabet
    edges: dict = {}
    next_vertex = 1
    next_edge = 0
    for w in gens:
        if w.alphabet != alphabet:
            raise ValueError("generators use mismatched alphabets")
        if w.is_identity:
            continue
        prev = 0
        for i, letter in enumerate(w.letters):
            here = 0 if i == len(w.letters) - 1 else next_vertex
            if here != 0:
                next_vertex += 1
            label = abs(letter) - 1
            if letter > 0:
                edges[next_edge] = (label, prev, here)
            else:
                edges[next_edge] = (label, here, prev)
            next_edge += 1
            prev = here
    return LabeledGraph(alphabet.rank, range(next_vertex), edges, basepoint=0)


def disjoint_union(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Tagged union: ids become (0, x) from ``g1`` and (1, x) from ``g2``."""
    if g1.rank != g2.rank:
        raise ValueError("rank mismatch in disjoint union")
    vertices = [(0, v) for v in g1.vertices] + [(1, v) for v in g2.vertices]
    edges = {}
    for eid, label, src, dst in g1.edges():
        edges[(0, eid)] = (label, (0, src), (0, dst))
    for eid, label, src, dst in g2.edges():
        edges[(1, eid)] = (label, (1, src), (1, dst))
    return LabeledGraph(g1.rank, vertices, edges)


def wedge(g1: LabeledGraph, g2: LabeledGraph) -> tuple[LabeledGraph, dict, dict]:
    """Glue two based graphs at their basepoints.

    Returns the wedge plus vertex maps from each factor into it.
    """
    if g1.basepoint is None or g2.basepoint is None:
        raise ValueError("wedge requires basepoints on both factors")
    if g1.rank != g2.rank:
        raise ValueError("rank mismatch in wedge")
    map1 = {v: (0, v) for v in g1.vertices}
    map2 = {v: ((0, g1.basepoint) if v == g2.basepoint else (1, v)) for v in g2.vertices}
    vertices = list(map1.values()) + [map2[v] for v in g2.vertices if v != g2.basepoint]
    edges = {}
    for eid, label, src, dst in g1.edges():
        edges[(0, eid)] = (label, map1[src], map1[dst])
    for eid, label, src, dst in g2.edges():
        edges[(1, eid)] = (label, map2[src], map2[dst])
    graph = LabeledGraph(g1.rank, vertices, edges, basepoint=(0, g1.basepoint))
    return graph, map1, map2


# -- folding -----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FoldResult:
    """Folded graph plus the original -> surviving id correspondences."""

    graph: LabeledGraph
    vertex_map: dict
    edge_map: dict


def fold_to_immersion(g: LabeledGraph) -> FoldResult:
    """Identify equally labeled edges sharing an endpoint until properly labeled.

    Disjoint-set partitions over vertices and edges driven by a worklist;
    near-linear, and confluent up to isomorphism regardless of fold order.
    """
    parent_v = {v: v for v in g.vertices}
    parent_e = {e: e for e, *_ in g.edges()}

    def find_v(x):
        root = x
        while parent_v[root] != root:
            root = parent_v[root]
        while parent_v[x] != root:
            parent_v[x], x = root, parent_v[x]
        return root

    def find_e(x):
        root = x
        while parent_e[root] != root:
            root = parent_e[root]
        while parent_e[x] != root:
            parent_e[x], x = root, parent_e[x]
        return root

    alive = set(parent_e)
    ends = {e: (src, dst) for e, _, src, dst in g.edges()}
    labels = {e: label for e, label, *_ in g.edges()}
    # per-root dart table: (label, direction) -> edge ids (lazily compacted)
    darts: dict = {v: {} for v in g.vertices}
    for e, label, src, dst in g.edges():
        darts[src].setdefault((label, OUT), []).append(e)
        darts[dst].setdefault((label, IN), []).append(e)

    pending = deque(g.vertices)
    enqueued = set(g.vertices)

    def far_endpoint(e, direction):
        src, dst = ends[e]
        return find_v(dst if direction == OUT else src)

    while pending:
        v = pending.popleft()
        enqueued.discard(v)
        v = find_v(v)
        if v not in darts:
            continue
        rescan = True
        while rescan:
            rescan = False
            table = darts[v]
            for key in list(table):
                compacted = []
                seen: set = set()
                for e in table[key]:
                    r = find_e(e)
                    if r in alive and r not in seen:
                        seen.add(r)
                        compacted.append(r)
                table[key] = compacted
                if len(compacted) < 2:
                    continue
                keep, drop = compacted[0], compacted[1]
                _, direction = key
                t1 = far_endpoint(keep, direction)
                t2 = far_endpoint(drop, direction)
                parent_e[drop] = keep
                alive.discard(drop)
                table[key] = [e for e in compacted if e != drop]
                if t1 != t2:
                    # absorb the smaller dart table into the larger
                    big, small = (t1, t2) if len(darts[t1]) >= len(darts[t2]) else (t2, t1)
                    parent_v[small] = big
                    for k, lst in darts[small].items():
                        darts[big].setdefault(k, []).extend(lst)
                    del darts[small]
                    if big not in enqueued:
                        pending.append(big)
                        enqueued.add(big)
                    v = find_v(v)
                    if v not in darts:
                        rescan = False
                        break
                rescan = True
                break

    vertex_map = {v: find_v(v) for v in g.vertices}
    edge_map = {e: find_e(e) for e in parent_e}
    edges = {}
    for e in alive:
        src, dst = ends[e]
        edges[e] = (labels[e], find_v(src), find_v(dst))
    vertices = dict.fromkeys(vertex_map.values())
    bp = None if g.basepoint is None else find_v(g.basepoint)
    folded = LabeledGraph(g.rank, vertices, edges, basepoint=bp)
    assert folded.is_properly_labeled(), "folding left duplicate darts"
    return FoldResult(folded, vertex_map, edge_map)


def trim_to_core(g: LabeledGraph, *, keep_basepoint: bool = True) -> LabeledGraph:
    """Iteratively delete valence <= 1 vertices (never the kept basepoint)."""
    protected = g.basepoint if keep_basepoint else None
    degree = {v: g.valence(v) for v in g.vertices}
    dead_vertices: set = set()
    dead_edges: set = set()
    queue = deque(v for v in g.vertices if degree[v] <= 1 and v != protected)
    while queue:
        v = queue.popleft()
        if v in dead_vertices or degree[v] > 1:
            continue
        dead_vertices.add(v)
        for e in list(g.out_edges(v)) + list(g.in_edges(v)):
            if e in dead_edges:
                continue
            dead_edges.add(e)
            _, src, dst = g.edge(e)
            for endpoint in (src, dst):
                degree[endpoint] -= 1
                if (
                    endpoint not in dead_vertices
                    and degree[endpoint] <= 1
                    and endpoint != protected
                ):
                    queue.append(endpoint)
    keep = {v for v in g.vertices if v not in dead_vertices}
    bp = g.basepoint if (keep_basepoint and g.basepoint in keep) else None
    return g.subgraph(keep, basepoint=bp)
