"""Undirected graphs on vertices 1..n: chordality, maximal cliques, gadget packing.

All collections returned from this module are in a canonical order, so that
reports built on top of them are reproducible byte for byte.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .exceptions import CliqueCapExceeded, InvalidGraphError, ParseError

DEFAULT_CLIQUE_CAP = 10**6
EXACT_PACKING_LIMIT = 16

Edge = tuple[int, int]


def _norm_edge(e) -> Edge:
    i, j = e
    return (i, j) if i < j else (j, i)


def clique_key(clique: Iterable[int]) -> tuple[int, ...]:
    """Sort key for cliques: lexicographic on the sorted vertex list."""
    return tuple(sorted(clique))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``1..n``.

    ``edges`` holds normalized pairs ``(i, j)`` with ``i < j``.
    """

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable = ()):
        if not isinstance(n, int) or n < 1:
            raise InvalidGraphError(f"vertex count must be a positive integer, got {n!r}")
        seen = set()
        for e in edges:
            i, j = e
            if i == j:
                raise InvalidGraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidGraphError(f"edge {i} {j} has an endpoint outside 1..{n}")
            seen.add(_norm_edge((i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(seen))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise InvalidGraphError("a cycle needs at least 3 vertices")
        return cls(n, [(k, k % n + 1) for k in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(k, k + 1) for k in range(1, n)])

    @classmethod
    def from_non_edges(cls, n: int, non_edges: Iterable) -> "Graph":
        """Complement construction: every pair not listed is an edge."""
        missing = {_norm_edge(e) for e in non_edges}
        return cls(n, (e for e in itertools.combinations(range(1, n + 1), 2) if e not in missing))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        """``adjacency[v]`` is the neighbor set of ``v``; index 0 is unused."""
        adj = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return tuple(frozenset(s) for s in adj)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_edge((i, j)) in self.edges

    @cached_property
    def non_edges(self) -> tuple[Edge, ...]:
        return tuple(
            e for e in itertools.combinations(range(1, self.n + 1), 2) if e not in self.edges
        )

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for a, b in itertools.combinations(vs, 2))

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def add_edge(self, e) -> "Graph":
        i, j = _norm_edge(e)
        if (i, j) in self.edges:
            raise InvalidGraphError(f"{i} {j} is already an edge")
        return Graph(self.n, self.edges | {(i, j)})


# -- text format ----------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: ``n m`` then ``m`` lines ``i j``."""
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ParseError("empty graph file", line=1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("header must be 'n m'", line=lineno, column=1)
    n, m = (_parse_int(tok, lineno, header) for tok in parts)
    if n < 1:
        raise ParseError("vertex count must be positive", line=lineno, column=1)
    if m < 0:
        raise ParseError("edge count must be nonnegative", line=lineno)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}", line=lineno)
    edges = set()
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError("edge line must be 'i j'", line=lineno, column=1)
        i, j = (_parse_int(tok, lineno, ln) for tok in parts)
        for tok, v in zip(parts, (i, j)):
            if not 1 <= v <= n:
                raise ParseError(
                    f"endpoint {v} outside 1..{n}", line=lineno, column=ln.index(tok) + 1
                )
        if i == j:
            raise ParseError(f"self-loop at vertex {i}", line=lineno, column=1)
        e = _norm_edge((i, j))
        if e in edges:
            raise ParseError(f"duplicate edge {e[0]} {e[1]}", line=lineno, column=1)
        edges.add(e)
    return Graph(n, edges)


def _parse_int(tok: str, lineno: int, line: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line=lineno,
                         column=line.index(tok) + 1) from None


def format_graph(g: Graph) -> str:
    out = [f"{g.n} {len(g.edges)}"]
    out.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(out) + "\n"


# -- chordality -------------------------------------------------------------


@dataclass(frozen=True)
class ChordalityResult:
    """Exactly one of ``peo`` and ``hole`` is set."""

    peo: Optional[tuple[int, ...]] = None
    hole: Optional[tuple[int, ...]] = None

    @property
    def is_chordal(self) -> bool:
        return self.peo is not None

    def __bool__(self) -> bool:
        return self.is_chordal


def maximum_cardinality_search(g: Graph) -> tuple[int, ...]:
    """Return the elimination order produced by maximum cardinality search.

    Vertices are visited by largest count of already visited neighbors, ties
    going to the largest index; the returned order is the reverse of the visit
    order, so small indices tend to be eliminated first.
    """
    weight = [0] * (g.n + 1)
    unvisited = set(g.vertices)
    visit = []
    while unvisited:
        v = max(unvisited, key=lambda u: (weight[u], u))
        unvisited.remove(v)
        visit.append(v)
        for u in g.adjacency[v]:
            if u in unvisited:
                weight[u] += 1
    return tuple(reversed(visit))


def is_perfect_elimination_ordering(g: Graph, order) -> bool:
    pos = {v: k for k, v in enumerate(order)}
    if sorted(pos) != list(g.vertices):
        return False
    for v in order:
        later = [u for u in g.adjacency[v] if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        if any(u != parent and u not in g.adjacency[parent] for u in later):
            return False
    return True


def is_chordal(g: Graph) -> ChordalityResult:
    order = maximum_cardinality_search(g)
    if is_perfect_elimination_ordering(g, order):
        return ChordalityResult(peo=order)
    hole = find_chordless_cycle(g)
    # MCS failing the PEO test certifies non-chordality
    assert hole is not None
    return ChordalityResult(hole=hole)


def find_chordless_cycle(g: Graph) -> Optional[tuple[int, ...]]:
    """Induced cycle of length >= 4, or None if ``g`` is chordal.

    Scans vertices ``v`` and nonadjacent neighbor pairs ``x < y`` in index order;
    a shortest ``x``-``y`` path avoiding the rest of the closed neighborhood of
    ``v`` closes an induced cycle through ``v``.
    """
    adj = g.adjacency
    for v in g.vertices:
        nbrs = sorted(adj[v])
        for x, y in itertools.combinations(nbrs, 2):
            if y in adj[x]:
                continue
            blocked = (adj[v] | {v}) - {x, y}
            path = _shortest_path(adj, x, y, blocked)
            if path is not None:
                return canonical_cycle((v, *path))
    return None


def _shortest_path(adj, src, dst, blocked) -> Optional[list[int]]:
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for w in sorted(adj[u]):
            if w not in prev and w not in blocked:
                prev[w] = u
                queue.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def canonical_cycle(cycle) -> tuple[int, ...]:
    """Rotate to start at the smallest vertex, heading to its smaller neighbor."""
    cyc = list(cycle)
    k = cyc.index(min(cyc))
    cyc = cyc[k:] + cyc[:k]
    if len(cyc) > 2 and cyc[-1] < cyc[1]:
        cyc = [cyc[0]] + cyc[:0:-1]
    return tuple(cyc)


# -- cliques ----------------------------------------------------------------


@dataclass(frozen=True)
class CliqueSet:
    """Canonically ordered family of pairwise non-nested cliques."""

    cliques: tuple[frozenset, ...]

    def __init__(self, cliques: Iterable[Iterable[int]]):
        fs = {frozenset(c) for c in cliques}
        object.__setattr__(self, "cliques", tuple(sorted(fs, key=clique_key)))

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self.cliques)

    def __len__(self) -> int:
        return len(self.cliques)

    def __contains__(self, item) -> bool:
        return frozenset(item) in self.cliques

    def __getitem__(self, k):
        return self.cliques[k]

    def as_lists(self) -> list[list[int]]:
        return [sorted(c) for c in self.cliques]


def _bron_kerbosch(adj, candidates: set, cap: int, prefix: frozenset = frozenset()):
    """Tomita-style pivoting Bron-Kerbosch over ``candidates``."""
    found = []

    def expand(r, p, x):
        if not p and not x:
            found.append(r)
            if len(found) > cap:
                raise CliqueCapExceeded(cap)
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), -u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(prefix, set(candidates), set())
    return found


def maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueSet:
    return CliqueSet(_bron_kerbosch(g.adjacency, set(g.vertices), cap))


def new_maximal_cliques_after_edge(g: Graph, e, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueSet:
    """Maximal cliques of ``g + e`` that are not cliques of ``g``.

    These are exactly ``{i, j}`` joined with each maximal clique of the common
    neighborhood of ``i`` and ``j``.
    """
    i, j = _norm_edge(e)
    if g.has_edge(i, j):
        raise InvalidGraphError(f"{i} {j} is already an edge")
    common = g.adjacency[i] & g.adjacency[j]
    return CliqueSet(_bron_kerbosch(g.adjacency, common, cap, prefix=frozenset((i, j))))


# -- gadget packing ---------------------------------------------------------


def induced_four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """All induced chordless 4-cycles, as sorted vertex 4-tuples in sorted order.

    An induced 4-cycle has exactly two non-edges (its diagonals), and they are
    disjoint, so each cycle is generated once from a pair of non-edges.
    """
    out = []
    non = g.non_edges
    for (a, c), (b, d) in itertools.combinations(non, 2):
        if len({a, b, c, d}) < 4:
            continue
        if all(g.has_edge(p, q) for p in (a, c) for q in (b, d)):
            out.append(tuple(sorted((a, b, c, d))))
    return sorted(out)


def four_cycle_order(g: Graph, block) -> tuple[int, int, int, int]:
    """Cycle order ``(a, b, c, d)`` of an induced 4-cycle: non-edges ``ac``, ``bd``."""
    a = min(block)
    rest = [v for v in block if v != a]
    c = [v for v in rest if not g.has_edge(a, v)]
    if len(c) != 1:
        raise InvalidGraphError(f"{sorted(block)} does not induce a chordless 4-cycle")
    c = c[0]
    b, d = sorted(v for v in rest if v != c)
    if g.has_edge(b, d) or g.has_edge(a, c) or not all(
        g.has_edge(p, q) for p in (a, c) for q in (b, d)
    ):
        raise InvalidGraphError(f"{sorted(block)} does not induce a chordless 4-cycle")
    return (a, b, c, d)


def cross_pairs_are_edges(g: Graph, blocks) -> bool:
    for s, t in itertools.combinations(blocks, 2):
        if any(not g.has_edge(p, q) for p in s for q in t):
            return False
    return True


@dataclass(frozen=True)
class GadgetPacking:
    blocks: tuple[tuple[int, ...], ...]
    exact: bool

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def disjoint_gadget_packing(g: Graph, exact_limit: int = EXACT_PACKING_LIMIT) -> GadgetPacking:
    """Vertex-disjoint induced 4-cycles, pairwise fully cross-adjacent.

    Exact (maximum cardinality, lexicographically first among maxima) by
    branch and bound when ``g.n <= exact_limit``; greedy in index order above.
    """
    cycles = induced_four_cycles(g)
    sets = [frozenset(c) for c in cycles]
    adj = g.adjacency

    def compatible(s, t):
        return not (s & t) and all(t <= adj[p] for p in s)

    if g.n > exact_limit:
        chosen = []
        for s in sets:
            if all(compatible(s, t) for t in chosen):
                chosen.append(s)
        return GadgetPacking(tuple(tuple(sorted(s)) for s in chosen), exact=False)

    best: list = []

    def search(chosen, candidates, used):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        room = (g.n - used) // 4
        if len(chosen) + min(len(candidates), room) <= len(best):
            return
        for k, s in enumerate(candidates):
            rest = [t for t in candidates[k + 1:] if compatible(s, t)]
            chosen.append(s)
            search(chosen, rest, used + 4)
            chosen.pop()
            if len(chosen) + min(len(candidates) - k - 1, room) <= len(best):
                return

    search([], sets, 0)
    return GadgetPacking(tuple(tuple(sorted(s)) for s in best), exact=True)
