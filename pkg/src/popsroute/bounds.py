"""Slot lower bounds for three permutation classes.

P1  derangement                                  -> ceil(d/g)
P2  group-collapsing, no packet stays in group   -> 2*ceil(d/g)
P3  group-collapsing derangement                 -> 2*ceil(d/(1+g))

P1 follows from counting: every packet needs a hop and at most g*g
packets move per slot. P2 and P3 only hold for d > 1; on POPS(1, n) every
permutation goes through in a single slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import NetworkConfig, Permutation, ceil_div


@dataclass(frozen=True)
class BoundReport:
    applicable_props: frozenset[str]
    lower_bound: int
    bounds: dict[str, int] = field(default_factory=dict)
    hypothesis_witnesses: dict[str, str] = field(default_factory=dict)

    @property
    def p1(self) -> bool:
        return "P1" in self.applicable_props

    @property
    def p2(self) -> bool:
        return "P2" in self.applicable_props

    @property
    def p3(self) -> bool:
        return "P3" in self.applicable_props

    def to_json(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "p3": self.p3, "bound": self.lower_bound}


def fixed_point(pi: Permutation) -> int | None:
    for i, v in enumerate(pi.image):
        if v == i:
            return i
    return None


def is_derangement(pi: Permutation) -> bool:
    return fixed_point(pi) is None


def collapsing_witness(cfg: NetworkConfig, pi: Permutation) -> tuple[int, int] | None:
    """Two co-grouped processors whose destinations lie in different groups."""
    d = cfg.d
    for h in range(cfg.g):
        first = pi.image[h * d] // d
        for i in range(h * d + 1, (h + 1) * d):
            if pi.image[i] // d != first:
                return h * d, i
    return None


def is_group_collapsing(cfg: NetworkConfig, pi: Permutation) -> bool:
    return collapsing_witness(cfg, pi) is None


def group_fixed_point(cfg: NetworkConfig, pi: Permutation) -> int | None:
    d = cfg.d
    for i, v in enumerate(pi.image):
        if i // d == v // d:
            return i
    return None


def lower_bound(cfg: NetworkConfig, pi: Permutation) -> BoundReport:
    d, g = cfg.d, cfg.g
    props: set[str] = set()
    bounds: dict[str, int] = {}
    why: dict[str, str] = {}

    fixed = fixed_point(pi)
    collapse = collapsing_witness(cfg, pi)
    stays = group_fixed_point(cfg, pi)

    if fixed is None:
        props.add("P1")
        bounds["P1"] = ceil_div(d, g)
    else:
        why["P1"] = f"processor {fixed} is a fixed point"

    for name, extra, extra_why, value in (
        ("P2", stays, f"packet {stays} stays in group {0 if stays is None else stays // d}",
         2 * ceil_div(d, g)),
        ("P3", fixed, f"processor {fixed} is a fixed point", 2 * ceil_div(d, 1 + g)),
    ):
        if d == 1:
            why[name] = "d == 1: every permutation routes in one slot"
        elif collapse is not None:
            i, j = collapse
            why[name] = f"processors {i} and {j} share a group but not a destination group"
        elif extra is not None:
            why[name] = extra_why
        else:
            props.add(name)
            bounds[name] = value

    return BoundReport(frozenset(props), max(bounds.values(), default=0), bounds, why)
