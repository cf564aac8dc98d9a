import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import route_positions
from popsroute.fairdist import is_proper
from popsroute.model import NetworkConfig, Permutation, PopsError, ceil_div
from popsroute.permgen import PermSpec, generate, random_permutation
from popsroute.router import (Schedule, ScheduleFormatError, build_list_system, route,
                              single_slot_route_if_possible)
from popsroute.simulator import execute

# processors 4 and 5 (group 1) both head for group 0
CONFLICT_3_3 = Permutation((3, 6, 7, 8, 0, 1, 2, 4, 5))


def test_list_system_reversal_2_2():
    ls = build_list_system(NetworkConfig(2, 2), Permutation((3, 2, 1, 0)))
    assert ls.lists == ((1, 1), (0, 0))
    assert (ls.n1, ls.n2, ls.delta1) == (2, 2, 2)
    assert is_proper(ls)


def test_list_system_conflict_permutation():
    ls = build_list_system(NetworkConfig(3, 3), CONFLICT_3_3)
    assert ls.lists[1].count(0) == 2


@pytest.mark.parametrize("d,g", [(2, 3), (3, 3), (5, 2), (4, 1)])
def test_list_system_identity(d, g):
    cfg = NetworkConfig(d, g)
    ls = build_list_system(cfg, Permutation.identity(cfg.n))
    assert ls.lists == tuple((h,) * d for h in range(g))
    assert ls.n2 == max(d, g)
    assert is_proper(ls)


def test_list_system_not_for_d1():
    with pytest.raises(PopsError):
        build_list_system(NetworkConfig(1, 4), Permutation.identity(4))


def test_size_mismatch():
    with pytest.raises(PopsError):
        route(NetworkConfig(2, 2), Permutation.identity(6))


def test_d1_single_slot():
    cfg = NetworkConfig(1, 4)
    pi = Permutation((2, 0, 3, 1))
    schedule = route(cfg, pi)
    assert len(schedule) == 1
    slot = schedule.slots[0]
    assert [(t.src, tuple(t.coupler)) for t in slot.transmissions] == [
        (0, (2, 0)), (1, (0, 1)), (2, (3, 2)), (3, (1, 3))]
    assert [(r.dst, tuple(r.coupler)) for r in slot.receptions] == [
        (0, (0, 1)), (1, (1, 3)), (2, (2, 0)), (3, (3, 2))]
    assert execute(cfg, pi, schedule).delivered


def test_self_packets_in_d1_use_own_coupler():
    cfg = NetworkConfig(1, 3)
    schedule = route(cfg, Permutation.identity(3))
    assert [tuple(t.coupler) for t in schedule.slots[0].transmissions] == [(0, 0), (1, 1), (2, 2)]


def test_reversal_2_2_two_slots_delivered():
    cfg = NetworkConfig(2, 2)
    pi = Permutation((3, 2, 1, 0))
    schedule = route(cfg, pi)
    assert len(schedule) == 2 and schedule.rounds == 1
    assert execute(cfg, pi, schedule).delivered


def test_pops_8_2_random_eight_slots():
    cfg = NetworkConfig(8, 2)
    pi = random_permutation(16, 2024)
    schedule = route(cfg, pi)
    assert len(schedule) == 8 == 2 * ceil_div(8, 2)
    assert schedule.rounds == 4
    assert execute(cfg, pi, schedule).delivered


def test_conflict_permutation_two_slots():
    cfg = NetworkConfig(3, 3)
    assert single_slot_route_if_possible(cfg, CONFLICT_3_3) is None
    schedule = route(cfg, CONFLICT_3_3)
    assert len(schedule) == 2
    assert execute(cfg, CONFLICT_3_3, schedule).delivered


def test_single_slot_baseline():
    cfg = NetworkConfig(2, 2)
    pi = Permutation((2, 0, 3, 1))
    schedule = single_slot_route_if_possible(cfg, pi)
    assert schedule is not None and len(schedule) == 1
    assert execute(cfg, pi, schedule).delivered


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_single_slot_always_on_clique(n, seed):
    cfg = NetworkConfig(1, n)
    pi = random_permutation(n, seed)
    schedule = single_slot_route_if_possible(cfg, pi)
    assert schedule is not None and execute(cfg, pi, schedule).delivered


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_routing_invariants(d, g, seed):
    cfg = NetworkConfig(d, g)
    pi = random_permutation(cfg.n, seed)
    schedule = route(cfg, pi)
    assert len(schedule) == cfg.theorem_slots()

    for slot in schedule.slots:
        couplers = [t.coupler for t in slot.transmissions]
        assert len(couplers) == len(set(couplers))
        for t in slot.transmissions:
            assert t.coupler.src_group == t.src // d

    history = route_positions(d, g, pi, schedule)
    assert all(history[-1][p] == pi(p) for p in range(cfg.n))
    if d == 1:
        return

    for k in range(schedule.rounds):
        first = schedule.slots[2 * k]
        moved = [t.packet for t in first.transmissions]
        after = history[2 * k]
        # co-located moved packets head for distinct groups
        keys = [(after[p] // d, pi(p) // d) for p in moved]
        assert len(keys) == len(set(keys))
        # arrivals per intermediate group
        per_group = {}
        for p in moved:
            per_group[after[p] // d] = per_group.get(after[p] // d, 0) + 1
        if d <= g:
            assert sorted(per_group.values()) == [d] * g
            # every processor holds exactly one packet after slot 1
            assert sorted(after.values()) == list(range(cfg.n))
        elif (k + 1) * g <= d:
            assert sorted(per_group.values()) == [g] * g
        else:
            assert len(moved) == g * (d % g)


def test_d_greater_than_g_receiver_is_source_group():
    cfg = NetworkConfig(7, 3)
    schedule = route(cfg, random_permutation(cfg.n, 8))
    for k in range(schedule.rounds):
        for r in schedule.slots[2 * k].receptions:
            assert r.dst % cfg.d == r.coupler.src_group


def test_deterministic_json():
    cfg = NetworkConfig(4, 3)
    pi = random_permutation(12, 99)
    a, b = route(cfg, pi).dumps(), route(cfg, pi).dumps()
    assert a == b
    data = json.loads(a)
    assert set(data) == {"d", "g", "rounds", "slots"}
    assert set(data["slots"][0]) == {"tx", "rx"}
    assert set(data["slots"][0]["tx"][0]) == {"src", "dst_group", "src_group", "packet"}
    assert set(data["slots"][0]["rx"][0]) == {"dst", "dst_group", "src_group"}


def test_json_round_trip():
    cfg = NetworkConfig(5, 2)
    schedule = route(cfg, generate(PermSpec("reversal", 10)))
    again = Schedule.loads(schedule.dumps())
    assert again == schedule
    assert again.dumps() == schedule.dumps()


@pytest.mark.parametrize("text", [
    "not json",
    '{"d": 2, "g": 2, "rounds": 1}',
    '{"d": 2, "g": 2, "rounds": 1, "slots": [{"tx": [{"src": "0"}], "rx": []}]}',
    '{"d": 0, "g": 2, "rounds": 1, "slots": []}',
])
def test_malformed_schedule_json(text):
    with pytest.raises(ScheduleFormatError):
        Schedule.loads(text)
