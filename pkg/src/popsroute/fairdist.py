"""List systems and fair distributions.

A list system gives each of ``n1`` sources a list of ``delta1`` (not
necessarily distinct) source labels. A fair distribution assigns every list
position a target in ``0..n2-1`` so that

1. positions of one source get pairwise distinct targets,
2. every target is used exactly ``delta2 = n1 * delta1 / n2`` times,
3. positions carrying the same label get pairwise distinct targets.

``find_fair_distribution`` builds the multigraph source -> label, pads it to
an ``n2``-regular bipartite multigraph, 1-factorizes it and reads the
targets off the colours of the original edges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .edgecolor import BipartiteMultigraph, check_regular, one_factorize, pad_to_regular
from .model import PopsError


class ImproperListSystem(PopsError):
    pass


@dataclass(frozen=True)
class ListSystem:
    n1: int
    n2: int
    delta1: int
    lists: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 1 or self.delta1 < 0:
            raise PopsError(f"bad list system sizes n1={self.n1} n2={self.n2} delta1={self.delta1}")
        if self.delta1 > self.n2:
            raise PopsError(f"list length {self.delta1} exceeds target count {self.n2}")
        if len(self.lists) != self.n1:
            raise PopsError(f"expected {self.n1} lists, got {len(self.lists)}")
        for s, lst in enumerate(self.lists):
            if len(lst) != self.delta1:
                raise PopsError(f"list {s} has length {len(lst)}, expected {self.delta1}")
            for x in lst:
                if not 0 <= x < self.n1:
                    raise PopsError(f"list {s} holds {x}, not a source label")

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]], n2: int) -> ListSystem:
        lists = tuple(tuple(lst) for lst in lists)
        delta1 = len(lists[0]) if lists else 0
        return cls(len(lists), n2, delta1, lists)

    def multiplicity(self, s: int, label: int) -> int:
        return self.lists[s].count(label)

    @property
    def delta2(self) -> int:
        return self.n1 * self.delta1 // self.n2


@dataclass(frozen=True)
class FairDistribution:
    f: tuple[tuple[int, ...], ...]
    delta2: int

    def dump(self) -> str:
        return "".join(" ".join(str(t) for t in row) + "\n" for row in self.f)


class Diagnostic(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_proper(ls: ListSystem) -> Diagnostic:
    if (ls.n1 * ls.delta1) % ls.n2:
        return Diagnostic(False, f"n2={ls.n2} does not divide n1*delta1={ls.n1 * ls.delta1}")
    counts = Counter(x for lst in ls.lists for x in lst)
    for label in range(ls.n1):
        if counts[label] != ls.delta1:
            return Diagnostic(
                False, f"label {label} appears {counts[label]} times, expected {ls.delta1}")
    return Diagnostic(True)


def padded_graph(ls: ListSystem) -> tuple[BipartiteMultigraph, int]:
    """The n2-regular multigraph to factorize, and the number of original edges.

    Left side is sources then the ``n1 - delta2`` extra nodes V; right side
    is labels then their copies V'. Original edges come first, in
    (source, position) order, so edge id ``s * delta1 + i`` is position i of
    source s. Extra V -> labels edges follow, then V' -> sources edges.
    """
    n1, n2, delta1 = ls.n1, ls.n2, ls.delta1
    extra = n1 - ls.delta2
    deficit = n2 - delta1
    pairs = [(s, label) for s, lst in enumerate(ls.lists) for label in lst]
    original = len(pairs)
    if extra and deficit:
        # H1: V (degree n2) against the labels (degree n2 - delta1).
        h1 = pad_to_regular([n2] * extra, [deficit] * n1, n2)
        pairs.extend((n1 + v, label) for v, label in h1.edges)
        # H2: V' (degree n2) against the sources; V' sits on the right.
        h2 = pad_to_regular([n2] * extra, [deficit] * n1, n2)
        pairs.extend((s, n1 + v) for v, s in h2.edges)
    size = n1 + extra
    return BipartiteMultigraph(size, size, tuple(pairs)), original


def find_fair_distribution(ls: ListSystem) -> FairDistribution:
    diag = is_proper(ls)
    if not diag:
        raise ImproperListSystem(f"list system is not proper: {diag.reason}")
    graph, original = padded_graph(ls)
    if original:
        r = check_regular(graph)
        if r != ls.n2 or graph.left_count != 2 * ls.n1 - ls.delta2:
            raise AssertionError(f"padded graph is {r}-regular on {graph.left_count} nodes per side")
    colours = one_factorize(graph).color_of
    # Colour k is target k. Parallel edges keep increasing colours along
    # increasing positions.
    f: list[list[int]] = []
    for s in range(ls.n1):
        base = s * ls.delta1
        row = list(colours[base:base + ls.delta1])
        by_label: dict[int, list[int]] = {}
        for i, label in enumerate(ls.lists[s]):
            by_label.setdefault(label, []).append(i)
        for positions in by_label.values():
            if len(positions) > 1:
                for i, c in zip(positions, sorted(row[i] for i in positions)):
                    row[i] = c
        f.append(row)
    return FairDistribution(tuple(tuple(row) for row in f), ls.delta2)


class FairnessReport(NamedTuple):
    ok: bool
    prop: int | None = None
    witness: tuple = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_fair(ls: ListSystem, fd: FairDistribution) -> FairnessReport:
    """Check the three fairness properties literally; report the first failure.

    ``prop`` is 0 when the list system itself is improper.
    """
    if len(fd.f) != ls.n1 or any(len(row) != ls.delta1 for row in fd.f):
        raise PopsError("distribution shape does not match the list system")
    diag = is_proper(ls)
    if not diag:
        return FairnessReport(False, 0, (), f"improper list system: {diag.reason}")
    for s, row in enumerate(fd.f):
        for t in row:
            if not 0 <= t < ls.n2:
                return FairnessReport(False, 1, (s,), f"source {s} maps to {t}, not a target")
        if len(set(row)) != ls.delta1:
            return FairnessReport(False, 1, (s,), f"source {s} repeats a target: {row}")
    load = Counter(t for row in fd.f for t in row)
    for t in range(ls.n2):
        if load[t] != ls.delta2:
            return FairnessReport(False, 2, (t,), f"target {t} used {load[t]} times, expected {ls.delta2}")
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    for s, (lst, row) in enumerate(zip(ls.lists, fd.f)):
        for i, (label, t) in enumerate(zip(lst, row)):
            prev = owner.setdefault((label, t), (s, i))
            if prev != (s, i):
                return FairnessReport(
                    False, 3, (prev, (s, i)),
                    f"positions {prev} and {(s, i)} share label {label} and target {t}")
    return FairnessReport(True)
