"""Bitmask coalition semantics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eac.coalition import Coalition
from eac.errors import CoalitionSizeMismatch


def test_empty_and_full():
    assert Coalition.empty(5).bits == 0
    assert Coalition.full(5).bits == 0b11111
    assert Coalition.empty(5).size == 0
    assert Coalition.full(5).size == 5


def test_members_and_contains():
    s = Coalition.from_indices([0, 3], 5)
    assert s.members() == (0, 3)
    assert s.contains(0) and s.contains(3)
    assert not s.contains(1)
    assert s.size == 2


def test_add_remove_are_pure():
    s = Coalition.empty(4)
    t = s.add(2)
    assert s.bits == 0 and t.bits == 0b100
    assert t.remove(2).bits == 0
    assert t.remove(0).bits == t.bits  # removing an absent member is a no-op


def test_indicator():
    s = Coalition.from_indices([1, 3], 4)
    np.testing.assert_array_equal(s.indicator(), [0.0, 1.0, 0.0, 1.0])
    assert s.indicator().dtype == np.float64


def test_bits_out_of_range_rejected():
    with pytest.raises(CoalitionSizeMismatch):
        Coalition(1 << 4, 4)
    with pytest.raises(CoalitionSizeMismatch):
        Coalition(-1, 4)


def test_from_indices_out_of_range_rejected():
    with pytest.raises(CoalitionSizeMismatch):
        Coalition.from_indices([4], 4)
    with pytest.raises(CoalitionSizeMismatch):
        Coalition.from_indices([-1], 4)


def test_add_past_n_rejected():
    with pytest.raises(CoalitionSizeMismatch):
        Coalition.empty(3).add(3)


def test_wide_coalitions_beyond_machine_word():
    s = Coalition.from_indices([0, 70], 80)
    assert s.contains(70) and s.size == 2
    ind = s.indicator()
    assert ind.shape == (80,) and ind[70] == 1.0 and ind.sum() == 2.0


@given(st.integers(1, 16).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, n - 1)))))
@settings(max_examples=200, deadline=None)
def test_round_trip_members(case):
    n, idx = case
    s = Coalition.from_indices(sorted(idx), n)
    assert set(s.members()) == idx
    assert s.size == len(idx)
    np.testing.assert_array_equal(
        s.indicator(), [1.0 if i in idx else 0.0 for i in range(n)]
    )
