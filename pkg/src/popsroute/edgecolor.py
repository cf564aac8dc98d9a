"""1-factorization of regular bipartite multigraphs.

An r-regular bipartite multigraph splits into r perfect matchings (Konig).
``one_factorize`` extracts them one at a time with Hopcroft-Karp on the
support graph; parallel edges are handed out lowest edge id first, so the
result depends only on the input edge order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import PopsError


class IrregularGraph(PopsError):
    def __init__(self, message: str, side: str | None = None, node: int | None = None):
        super().__init__(message)
        self.side = side
        self.node = node


class InfeasiblePadding(PopsError):
    pass


@dataclass(frozen=True)
class BipartiteMultigraph:
    """Bipartite multigraph; edge ``k`` of ``edges`` has edge id ``k``.

    ``edges`` holds ``(left_node, right_node)`` pairs. Parallel edges are
    simply repeated pairs.
    """

    left_count: int
    right_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.left_count < 0 or self.right_count < 0:
            raise PopsError("node counts must be non-negative")
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.left_count and 0 <= v < self.right_count):
                raise PopsError(f"edge {eid} = ({u}, {v}) references a missing node")

    @classmethod
    def from_pairs(cls, left_count: int, right_count: int,
                   pairs: Iterable[tuple[int, int]]) -> BipartiteMultigraph:
        return cls(left_count, right_count, tuple((int(u), int(v)) for u, v in pairs))

    @classmethod
    def from_triples(cls, left_count: int, right_count: int,
                     triples: Iterable[tuple[int, int, int]]) -> BipartiteMultigraph:
        """Build from ``(left, right, edge_id)`` triples with ids ``0..m-1`` in any order."""
        triples = list(triples)
        slots: list[tuple[int, int] | None] = [None] * len(triples)
        for u, v, eid in triples:
            if not 0 <= eid < len(triples) or slots[eid] is not None:
                raise PopsError(f"edge ids must be distinct and contiguous from 0 (bad id {eid})")
            slots[eid] = (u, v)
        return cls(left_count, right_count, tuple(slots))  # type: ignore[arg-type]

    def triples(self) -> list[tuple[int, int, int]]:
        return [(u, v, eid) for eid, (u, v) in enumerate(self.edges)]

    def degrees(self) -> tuple[list[int], list[int]]:
        left = [0] * self.left_count
        right = [0] * self.right_count
        for u, v in self.edges:
            left[u] += 1
            right[v] += 1
        return left, right


@dataclass(frozen=True)
class Factorization:
    """Edge colouring: ``color_of[edge_id]`` in ``0..r-1``."""

    color_of: tuple[int, ...]
    r: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.r)]
        for eid, c in enumerate(self.color_of):
            out[c].append(eid)
        return out

    def dump(self) -> str:
        return "".join(f"{eid} {c}\n" for eid, c in enumerate(self.color_of))


def check_regular(graph: BipartiteMultigraph) -> int:
    """Return the common degree r of every node, or raise IrregularGraph.

    A graph without edges is 0-regular. Sides of different sizes cannot be
    regular with r >= 1.
    """
    if not graph.edges:
        return 0
    left, right = graph.degrees()
    r = left[0] if left else 0
    for side, degs in (("left", left), ("right", right)):
        for node, deg in enumerate(degs):
            if deg != r:
                raise IrregularGraph(
                    f"{side} node {node} has degree {deg}, expected {r}", side=side, node=node)
    return r


def pad_to_regular(left_degrees: Sequence[int], right_degrees: Sequence[int],
                   target_r: int) -> BipartiteMultigraph:
    """Build a bipartite multigraph with the given node degrees.

    Stubs are laid out per node in node order on each side and the k-th left
    stub is joined to the k-th right stub. ``target_r`` is the regularity the
    padding is meant to complete; no single degree may exceed it.
    """
    for side, degs in (("left", left_degrees), ("right", right_degrees)):
        for node, deg in enumerate(degs):
            if deg < 0:
                raise InfeasiblePadding(f"{side} node {node} has negative deficit {deg}")
            if deg > target_r:
                raise InfeasiblePadding(
                    f"{side} node {node} deficit {deg} exceeds target degree {target_r}")
    if sum(left_degrees) != sum(right_degrees):
        raise InfeasiblePadding(
            f"deficit sums differ: left {sum(left_degrees)} != right {sum(right_degrees)}")
    left_stubs = [u for u, deg in enumerate(left_degrees) for _ in range(deg)]
    right_stubs = [v for v, deg in enumerate(right_degrees) for _ in range(deg)]
    return BipartiteMultigraph(len(left_degrees), len(right_degrees),
                               tuple(zip(left_stubs, right_stubs)))


def _perfect_matching(adj: list[list[int]], n: int) -> list[int]:
    """Hopcroft-Karp on a support graph with n nodes per side.

    ``adj[u]`` must be sorted; left roots and right neighbours are tried in
    increasing order. Returns ``match[u]`` for every left node.
    """
    match_l = [-1] * n
    match_r = [-1] * n
    for u in range(n):
        for v in adj[u]:
            if match_r[v] < 0:
                match_l[u] = v
                match_r[v] = u
                break
    free = [u for u in range(n) if match_l[u] < 0]
    while free:
        dist = [-1] * n
        for u in free:
            dist[u] = 0
        queue = deque(free)
        limit = -1
        while queue:
            u = queue.popleft()
            du = dist[u]
            if limit >= 0 and du >= limit:
                continue
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    if limit < 0:
                        limit = du
                elif dist[w] < 0:
                    dist[w] = du + 1
                    queue.append(w)
        if limit < 0:
            raise IrregularGraph("no perfect matching exists in the remaining graph")

        cursor = [0] * n
        for root in free:
            stack = [root]
            via: list[int] = []
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                du = dist[u]
                pushed = False
                while cursor[u] < len(nbrs):
                    v = nbrs[cursor[u]]
                    cursor[u] += 1
                    w = match_r[v]
                    if w < 0:
                        if du == limit:
                            via.append(v)
                            for x, y in zip(stack, via):
                                match_l[x] = y
                                match_r[y] = x
                            for x in stack:
                                dist[x] = -1
                            stack = []
                            pushed = True
                            break
                    elif du < limit and dist[w] == du + 1:
                        via.append(v)
                        stack.append(w)
                        pushed = True
                        break
                if not pushed:
                    dist[u] = -1
                    stack.pop()
                    if via:
                        via.pop()
        free = [u for u in range(n) if match_l[u] < 0]
    return match_l


def one_factorize(graph: BipartiteMultigraph) -> Factorization:
    """Split an r-regular bipartite multigraph into r perfect matchings.

    Colour k is the k-th matching extracted.
    """
    r = check_regular(graph)
    if r == 0:
        return Factorization((), 0)
    n = graph.left_count
    if graph.right_count != n:
        raise IrregularGraph(f"sides differ in size ({n} vs {graph.right_count})")

    buckets: dict[tuple[int, int], deque[int]] = {}
    for eid, pair in enumerate(graph.edges):
        buckets.setdefault(pair, deque()).append(eid)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in buckets:
        adj[u].append(v)
    for nbrs in adj:
        nbrs.sort()

    color_of = [-1] * len(graph.edges)
    for color in range(r):
        match = _perfect_matching(adj, n)
        for u, v in enumerate(match):
            bucket = buckets[(u, v)]
            color_of[bucket.popleft()] = color
            if not bucket:
                adj[u].remove(v)
    return Factorization(tuple(color_of), r)


def is_valid_factorization(graph: BipartiteMultigraph, fact: Factorization) -> bool:
    """Each colour class is a perfect matching and the classes cover every edge once."""
    return factorization_violation(graph, fact) is None


def factorization_violation(graph: BipartiteMultigraph, fact: Factorization) -> str | None:
    if len(fact.color_of) != len(graph.edges):
        return f"colouring covers {len(fact.color_of)} edges, graph has {len(graph.edges)}"
    seen: set[tuple[str, int, int]] = set()
    for eid, ((u, v), c) in enumerate(zip(graph.edges, fact.color_of)):
        if not 0 <= c < fact.r:
            return f"edge {eid} has colour {c} outside 0..{fact.r - 1}"
        for key in (("L", u, c), ("R", v, c)):
            if key in seen:
                return f"node {key[0]}{key[1]} has two edges of colour {c}"
            seen.add(key)
    expected = (graph.left_count + graph.right_count) * fact.r
    if len(seen) != expected:
        return "some colour class misses a node"
    return None
