"""Independent brute-force checkers used as test oracles.

Nothing here imports the code under test beyond plain data access, so a
bug in the library cannot leak into the expected values.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter


def is_fair(lists, n2, f) -> bool:
    """Literal check of the three fairness properties on plain lists."""
    n1 = len(lists)
    delta1 = len(lists[0]) if lists else 0
    if n1 * delta1 % n2:
        return False
    delta2 = n1 * delta1 // n2
    for row in f:
        if len(set(row)) != delta1:
            return False
    load = Counter(t for row in f for t in row)
    if any(load[t] != delta2 for t in range(n2)):
        return False
    cells = [(s, i) for s in range(n1) for i in range(delta1)]
    for (s1, i1), (s2, i2) in itertools.combinations(cells, 2):
        if lists[s1][i1] == lists[s2][i2] and f[s1][i1] == f[s2][i2]:
            return False
    return True


def all_fair_distributions(lists, n2):
    """Every fair distribution, by enumerating all n2 ** (n1 * delta1) assignments."""
    n1 = len(lists)
    delta1 = len(lists[0])
    out = []
    for flat in itertools.product(range(n2), repeat=n1 * delta1):
        f = [list(flat[s * delta1:(s + 1) * delta1]) for s in range(n1)]
        if is_fair(lists, n2, f):
            out.append(tuple(tuple(row) for row in f))
    return out


def is_one_factorization(left_count, right_count, edges, colors, r) -> bool:
    """Each colour class touches every node exactly once; every edge gets one colour."""
    if len(colors) != len(edges):
        return False
    if any(not 0 <= c < r for c in colors):
        return False
    for c in range(r):
        cls = [e for e, col in zip(edges, colors) if col == c]
        lefts = sorted(u for u, _ in cls)
        rights = sorted(v for _, v in cls)
        if lefts != list(range(left_count)) or rights != list(range(right_count)):
            return False
    return True


def brute_force_factorization(left_count, right_count, edges, r):
    """Backtracking search for any valid r-colouring; None if none exists."""
    used_l = [[False] * r for _ in range(left_count)]
    used_r = [[False] * r for _ in range(right_count)]
    colors = [-1] * len(edges)

    def place(k):
        if k == len(edges):
            return True
        u, v = edges[k]
        for c in range(r):
            if not used_l[u][c] and not used_r[v][c]:
                used_l[u][c] = used_r[v][c] = True
                colors[k] = c
                if place(k + 1):
                    return True
                used_l[u][c] = used_r[v][c] = False
        return False

    if place(0):
        return list(colors)
    return None


def random_regular_multigraph(rng: random.Random, size: int, r: int):
    """Union of r uniformly random perfect matchings, edges shuffled."""
    edges = []
    for _ in range(r):
        perm = list(range(size))
        rng.shuffle(perm)
        edges.extend((u, perm[u]) for u in range(size))
    rng.shuffle(edges)
    return edges


def route_positions(d, g, pi, schedule):
    """Replay a schedule naively: returns packet -> processor after every slot."""
    where = {p: p for p in range(d * g)}
    history = []
    for slot in schedule.slots:
        driven = {t.coupler: t.packet for t in slot.transmissions}
        for rx in slot.receptions:
            where[driven[rx.coupler]] = rx.dst
        history.append(dict(where))
    return history
