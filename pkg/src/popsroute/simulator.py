"""Slot-synchronous execution of schedules on a modeled POPS(d, g).

Rules checked for every slot, by letter:

(a) a transmitting processor holds the packet it names;
(b) a processor sends at most one packet per slot (possibly on several of
    its couplers);
(c) a transmission uses a coupler leaving the sender's group and a
    reception uses a coupler entering the receiver's group;
(d) a coupler carries at most one transmission;
(e) a processor reads at most one coupler;
(f) a read coupler is driven by some transmission.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple

from .model import Coupler, NetworkConfig, Permutation, PopsError
from .router import Reception, Schedule, Slot, Transmission


class Violation(NamedTuple):
    slot: int
    rule: str
    witness: str

    def __str__(self) -> str:
        return f"slot {self.slot}: rule ({self.rule}) {self.witness}"


@dataclass
class SimState:
    holding: list[set[int]]
    slot_cursor: int = 0

    @classmethod
    def initial(cls, n: int) -> SimState:
        return cls([{i} for i in range(n)])

    def packet_count(self) -> int:
        return sum(len(h) for h in self.holding)

    def location(self) -> dict[int, int]:
        return {p: proc for proc, held in enumerate(self.holding) for p in held}


def validate_slot(cfg: NetworkConfig, state: SimState, slot: Slot,
                  index: int | None = None) -> list[Violation]:
    """Every rule violation of ``slot`` applied to ``state``; empty means legal."""
    k = state.slot_cursor if index is None else index
    n, d, g = cfg.n, cfg.d, cfg.g
    out: list[Violation] = []
    sent: dict[int, int] = {}
    driven: dict[tuple[int, int], int] = {}
    for t in slot.transmissions:
        b, a = t.coupler
        if not (0 <= t.src < n and 0 <= b < g and 0 <= a < g):
            out.append(Violation(k, "c", f"transmission {t.src}->c({b},{a}) out of range for {cfg}"))
            continue
        if t.packet not in state.holding[t.src]:
            out.append(Violation(k, "a", f"processor {t.src} does not hold packet {t.packet}"))
        prev = sent.setdefault(t.src, t.packet)
        if prev != t.packet:
            out.append(Violation(k, "b", f"processor {t.src} sends packets {prev} and {t.packet}"))
        if a != t.src // d:
            out.append(Violation(k, "c", f"processor {t.src} (group {t.src // d}) cannot drive c({b},{a})"))
        if (b, a) in driven:
            out.append(Violation(k, "d", f"coupler c({b},{a}) driven by processors "
                                         f"{driven[(b, a)]} and {t.src}"))
        else:
            driven[(b, a)] = t.src
    readers: set[int] = set()
    for r in slot.receptions:
        b, a = r.coupler
        if not (0 <= r.dst < n and 0 <= b < g and 0 <= a < g):
            out.append(Violation(k, "c", f"reception {r.dst}<-c({b},{a}) out of range for {cfg}"))
            continue
        if b != r.dst // d:
            out.append(Violation(k, "c", f"processor {r.dst} (group {r.dst // d}) cannot read c({b},{a})"))
        if r.dst in readers:
            out.append(Violation(k, "e", f"processor {r.dst} reads more than one coupler"))
        readers.add(r.dst)
        if (b, a) not in driven:
            out.append(Violation(k, "f", f"processor {r.dst} reads undriven coupler c({b},{a})"))
    return out


def apply_slot(cfg: NetworkConfig, state: SimState, slot: Slot) -> None:
    """Apply a legal slot in place.

    A packet leaves its sender when at least one processor reads one of the
    couplers it was put on, and lands at every such reader. An unread
    transmission leaves the packet where it was.
    """
    on_coupler = {t.coupler: t for t in slot.transmissions}
    delivered: list[tuple[int, int]] = []
    moved: set[tuple[int, int]] = set()
    for r in slot.receptions:
        t = on_coupler[r.coupler]
        delivered.append((r.dst, t.packet))
        moved.add((t.src, t.packet))
    for src, packet in moved:
        state.holding[src].discard(packet)
    for dst, packet in delivered:
        state.holding[dst].add(packet)
    state.slot_cursor += 1


@dataclass
class Verdict:
    delivered: bool
    slots_used: int
    violations: list[Violation] = field(default_factory=list)
    state: SimState | None = None

    def to_json(self) -> dict:
        return {
            "delivered": self.delivered,
            "slots_used": self.slots_used,
            "violations": [{"slot": v.slot, "rule": v.rule, "witness": v.witness}
                           for v in self.violations],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def is_delivered(pi: Permutation, state: SimState) -> bool:
    """Every processor holds exactly one packet, and packet i sits at pi(i)."""
    return all(len(held) == 1 for held in state.holding) and all(
        pi.image[p] == proc for proc, held in enumerate(state.holding) for p in held)


def execute(cfg: NetworkConfig, pi: Permutation, schedule: Schedule, *,
            after_slot: Callable[[int, SimState], None] | None = None) -> Verdict:
    """Run ``schedule`` from the initial placement and judge delivery.

    Stops at the first slot with violations and reports all of that slot's
    violations. ``after_slot(k, state)`` is called after slot k is applied.
    """
    if pi.n != cfg.n:
        raise PopsError(f"permutation has {pi.n} entries but {cfg} has {cfg.n} processors")
    if schedule.config != cfg:
        raise PopsError(f"schedule is for {schedule.config}, not {cfg}")
    state = SimState.initial(cfg.n)
    for k, slot in enumerate(schedule.slots):
        problems = validate_slot(cfg, state, slot, k)
        if problems:
            return Verdict(False, k, problems, state)
        apply_slot(cfg, state, slot)
        if after_slot is not None:
            after_slot(k, state)
    return Verdict(is_delivered(pi, state), len(schedule.slots), [], state)


def one_slot_fair_check(cfg: NetworkConfig, placement: Mapping[int, int],
                        destinations: Mapping[int, int]) -> bool:
    """True iff no group holds two of the packets bound for the same group.

    ``placement`` and ``destinations`` map packet -> processor.
    """
    d = cfg.d
    seen: set[tuple[int, int]] = set()
    for packet, proc in placement.items():
        key = (proc // d, destinations[packet] // d)
        if key in seen:
            return False
        seen.add(key)
    return True


def greedy_one_slot(cfg: NetworkConfig, placement: Mapping[int, int],
                    destinations: Mapping[int, int]) -> Slot:
    """Send every placed packet on c(dst_group, cur_group) straight to its destination."""
    d = cfg.d
    tx = []
    rx = []
    for packet in sorted(placement):
        src, dst = placement[packet], destinations[packet]
        c = Coupler(dst // d, src // d)
        tx.append(Transmission(src, c, packet))
        rx.append(Reception(dst, c))
    return Slot(tuple(tx), tuple(sorted(rx)))


def moved_packets(schedule: Schedule, round_index: int) -> list[int]:
    """Packets sent in the first slot of a two-slot round."""
    return [t.packet for t in schedule.slots[2 * round_index].transmissions]
