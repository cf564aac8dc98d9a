"""Compile a permutation into a slot schedule for POPS(d, g).

d == 1: one slot, every packet straight through c(dst, src).

d > 1: ceil(d/g) rounds of two slots. A fair distribution ``f`` of the
list system "group h holds packets for groups L[h][0..d-1]" says where each
packet makes its intermediate stop. With d <= g there is one round and
f-value j sends the packet to group j. With d > g, round k moves the
packets whose f-value falls in [k*g, min((k+1)*g, d)), and value k*g + j
sends the packet to group j on coupler c(j, h). Inside group j the arrivals are read by local
processors 0, 1, ... in increasing source-group order. After that slot no
group holds two moved packets bound for the same group, so the second slot
sends each of them home on c(dst_group, current_group).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .fairdist import FairDistribution, ListSystem, find_fair_distribution
from .model import Coupler, NetworkConfig, Permutation, PopsError, ceil_div


class ScheduleFormatError(PopsError):
    pass


class Transmission(NamedTuple):
    src: int
    coupler: Coupler
    packet: int


class Reception(NamedTuple):
    dst: int
    coupler: Coupler


@dataclass(frozen=True)
class Slot:
    transmissions: tuple[Transmission, ...]
    receptions: tuple[Reception, ...]


@dataclass(frozen=True)
class Schedule:
    config: NetworkConfig
    slots: tuple[Slot, ...]
    rounds: int
    inverse: Permutation | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.slots)

    def to_json(self) -> dict[str, Any]:
        return {
            "d": self.config.d,
            "g": self.config.g,
            "rounds": self.rounds,
            "slots": [
                {
                    "tx": [{"src": t.src, "dst_group": t.coupler.dst_group,
                            "src_group": t.coupler.src_group, "packet": t.packet}
                           for t in slot.transmissions],
                    "rx": [{"dst": r.dst, "dst_group": r.coupler.dst_group,
                            "src_group": r.coupler.src_group}
                           for r in slot.receptions],
                }
                for slot in self.slots
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, data: Any) -> Schedule:
        """Parse the JSON form; structure and types are checked, legality is not."""
        try:
            cfg = NetworkConfig(_int(data["d"]), _int(data["g"]))
            rounds = _int(data["rounds"])
            slots = []
            for raw in data["slots"]:
                tx = tuple(Transmission(_int(t["src"]),
                                        Coupler(_int(t["dst_group"]), _int(t["src_group"])),
                                        _int(t["packet"]))
                           for t in raw["tx"])
                rx = tuple(Reception(_int(r["dst"]),
                                     Coupler(_int(r["dst_group"]), _int(r["src_group"])))
                           for r in raw["rx"])
                slots.append(Slot(tx, rx))
        except (KeyError, TypeError) as exc:
            raise ScheduleFormatError(f"malformed schedule: missing or mistyped field {exc}") from None
        except PopsError as exc:
            raise ScheduleFormatError(f"malformed schedule: {exc}") from None
        return cls(cfg, tuple(slots), rounds)

    @classmethod
    def loads(cls, text: str) -> Schedule:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScheduleFormatError(f"schedule is not valid JSON: {exc}") from None
        return cls.from_json(data)


def _int(x: Any) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(repr(x))
    return x


def _check_instance(cfg: NetworkConfig, pi: Permutation) -> None:
    if pi.n != cfg.n:
        raise PopsError(f"permutation has {pi.n} entries but {cfg} has {cfg.n} processors")


def build_list_system(cfg: NetworkConfig, pi: Permutation) -> ListSystem:
    """Destination group of every packet, listed per source group in local order.

    Targets are the g groups when d <= g and the d round positions when d > g.
    """
    _check_instance(cfg, pi)
    d, g = cfg.d, cfg.g
    if d == 1:
        raise PopsError("d == 1 is routed directly; no list system is needed")
    lists = tuple(tuple(pi.image[i + h * d] // d for i in range(d)) for h in range(g))
    return ListSystem(g, max(g, d), d, lists)


def _direct_slot(cfg: NetworkConfig, pi: Permutation, inv: Permutation) -> Slot:
    d = cfg.d
    tx = tuple(Transmission(i, Coupler(pi.image[i] // d, i // d), i) for i in range(cfg.n))
    rx = tuple(Reception(j, Coupler(j // d, inv.image[j] // d)) for j in range(cfg.n))
    return Slot(tx, rx)


def route(cfg: NetworkConfig, pi: Permutation,
          fd: FairDistribution | None = None) -> Schedule:
    """Route ``pi`` in 1 slot (d == 1) or 2*ceil(d/g) slots (d > 1).

    ``fd`` may supply a precomputed fair distribution of
    ``build_list_system(cfg, pi)``.
    """
    _check_instance(cfg, pi)
    inv = pi.inverse()
    d, g = cfg.d, cfg.g
    if d == 1:
        return Schedule(cfg, (_direct_slot(cfg, pi, inv),), 1, inv)

    if fd is None:
        fd = find_fair_distribution(build_list_system(cfg, pi))
    dest = pi.image
    rounds = ceil_div(d, g)
    slots: list[Slot] = []
    for k in range(rounds):
        lo, hi = k * g, min((k + 1) * g, max(d, g))
        arrivals: list[list[int]] = [[] for _ in range(g)]
        tx1 = []
        for h in range(g):
            row = fd.f[h]
            for i in range(d):
                if lo <= row[i] < hi:
                    src = i + h * d
                    j = row[i] - lo
                    tx1.append(Transmission(src, Coupler(j, h), src))
                    arrivals[j].append(src)
        holder: dict[int, int] = {}
        rx1 = []
        for j, packets in enumerate(arrivals):
            # packets are already in increasing source-group order
            for local, packet in enumerate(packets):
                p = local + j * d
                rx1.append(Reception(p, Coupler(j, packet // d)))
                holder[packet] = p
        tx2 = []
        rx2 = []
        for packet in sorted(holder, key=holder.__getitem__):
            p = holder[packet]
            c = Coupler(dest[packet] // d, p // d)
            tx2.append(Transmission(p, c, packet))
            rx2.append(Reception(dest[packet], c))
        rx1.sort()
        rx2.sort()
        slots.append(Slot(tuple(tx1), tuple(rx1)))
        slots.append(Slot(tuple(tx2), tuple(rx2)))
    return Schedule(cfg, tuple(slots), rounds, inv)


def single_slot_route_if_possible(cfg: NetworkConfig, pi: Permutation) -> Schedule | None:
    """One-slot schedule when no two packets share source and destination group.

    Returns None (declines) otherwise. This is a sufficient test only.
    """
    _check_instance(cfg, pi)
    d = cfg.d
    used: set[tuple[int, int]] = set()
    for i, j in enumerate(pi.image):
        key = (j // d, i // d)
        if key in used:
            return None
        used.add(key)
    inv = pi.inverse()
    return Schedule(cfg, (_direct_slot(cfg, pi, inv),), 1, inv)
