import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from popsroute.model import (Coupler, IndexRangeError, InvalidPermutation, NetworkConfig,
                             Permutation, PopsError, format_permutation, group_of, local_index,
                             parse_permutation_text, processor_at, validate_permutation)


@pytest.mark.parametrize("d,g,i,expected", [(3, 2, 4, 1), (1, 5, 3, 3), (4, 4, 15, 3)])
def test_group_of(d, g, i, expected):
    assert group_of(NetworkConfig(d, g), i) == expected


@pytest.mark.parametrize("d,g,i,expected", [(3, 2, 4, 1), (2, 2, 0, 0), (8, 2, 11, 3)])
def test_local_index(d, g, i, expected):
    assert local_index(NetworkConfig(d, g), i) == expected


@pytest.mark.parametrize("i", [-1, 6, 100])
def test_index_out_of_range(i):
    cfg = NetworkConfig(3, 2)
    with pytest.raises(IndexRangeError):
        group_of(cfg, i)
    with pytest.raises(IndexRangeError):
        local_index(cfg, i)


@pytest.mark.parametrize("d,g", [(0, 1), (1, 0), (-2, 3)])
def test_config_rejects_nonpositive(d, g):
    with pytest.raises(PopsError):
        NetworkConfig(d, g)


def test_config_derived_values():
    cfg = NetworkConfig(3, 2)
    assert (cfg.n, cfg.couplers) == (6, 4)
    assert NetworkConfig(1, 7).theorem_slots() == 1
    assert NetworkConfig(8, 2).theorem_slots() == 8
    assert NetworkConfig(3, 5).theorem_slots() == 2


@given(st.integers(1, 12), st.integers(1, 12))
def test_decomposition_and_fibers(d, g):
    cfg = NetworkConfig(d, g)
    fibers = {}
    for i in range(cfg.n):
        assert local_index(cfg, i) + group_of(cfg, i) * d == i
        assert processor_at(cfg, group_of(cfg, i), local_index(cfg, i)) == i
        fibers.setdefault(group_of(cfg, i), []).append(i)
    assert sorted(fibers) == list(range(g))
    assert all(len(members) == d for members in fibers.values())


def test_coupler_field_order():
    c = Coupler(2, 0)
    assert c.dst_group == 2 and c.src_group == 0
    assert tuple(c) == (2, 0)


def test_validate_reversal():
    assert validate_permutation([3, 2, 1, 0], 4).image == (3, 2, 1, 0)


def test_validate_length_error():
    with pytest.raises(InvalidPermutation, match="expected 4 entries"):
        validate_permutation([0, 1, 2], 4)


def test_validate_duplicate_names_value():
    with pytest.raises(InvalidPermutation) as err:
        validate_permutation([0, 0, 2, 3], 4)
    assert err.value.value == 0 and err.value.position == 1


def test_validate_out_of_range():
    with pytest.raises(InvalidPermutation) as err:
        validate_permutation([0, 4, 2, 3], 4)
    assert err.value.value == 4


@given(st.permutations(list(range(10))))
def test_validate_round_trip(image):
    p = Permutation(tuple(image))
    assert validate_permutation(p.image, len(image)) == p
    assert p.inverse().compose(p) == Permutation.identity(len(image))


def test_parse_permutation_formats():
    assert parse_permutation_text("3 2\n1   0\n") == [3, 2, 1, 0]
    assert parse_permutation_text(json.dumps([3, 2, 1, 0])) == [3, 2, 1, 0]
    assert parse_permutation_text(format_permutation(Permutation((1, 0)))) == [1, 0]
    with pytest.raises(InvalidPermutation):
        parse_permutation_text("1 two 3")
    with pytest.raises(InvalidPermutation):
        parse_permutation_text("[1, 2")
