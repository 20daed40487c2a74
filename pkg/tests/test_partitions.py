from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st
from sympy import bell
from sympy.functions.combinatorial.numbers import stirling
from sympy.utilities.iterables import multiset_partitions, partitions as sym_partitions

from strata_chow.partitions import (IntPartition, SetPartition, count_good, count_good_closed,
                                    enumerate_int_partitions, enumerate_set_partitions,
                                    enumerate_set_partitions_all, good_partitions, is_good, rank,
                                    stirling2)

sp_ = SetPartition.parse


def good_by_definition(P: SetPartition) -> bool:
    """Try every ordered choice of the first two parts."""
    for A1, A2 in permutations(P.parts, 2):
        if set(A1) | set(A2) != set(range(1, len(A1) + len(A2) + 1)):
            continue
        rest = [p for p in P.parts if p not in (A1, A2)]
        if all(list(p) == list(range(p[0], p[0] + len(p))) for p in rest):
            return True
    return False


def test_parse_and_canonical_order():
    P = sp_("4,5|2|1,3")
    assert P.parts == ((1, 3), (2,), (4, 5))
    assert str(P) == "1,3|2|4,5"
    assert sp_("{{1,3},{2},{4,5}}") == P
    for bad in ("1,2|2", "1,1|2", "1|3", "a|b", ""):
        with pytest.raises(ValueError):
            sp_(bad)


@pytest.mark.parametrize("text", ["3+2+1", "3^1 2^1 1^1", "[3,2,1]", "{3,2,1}", "1+3+2"])
def test_int_partition_notations(text):
    assert IntPartition.parse(text) == IntPartition([3, 2, 1])


def test_enumeration_counts():
    for n in range(1, 8):
        for d in range(1, n + 1):
            assert len(enumerate_set_partitions(d, n)) == stirling(n, d) == stirling2(n, d)
        assert len(enumerate_set_partitions_all(n)) == bell(n)
        assert len(enumerate_int_partitions(n)) == sum(1 for _ in sym_partitions(n))
    assert enumerate_set_partitions(3, 3) == [SetPartition.singletons(3)]
    assert enumerate_set_partitions(1, 4) == [sp_("1,2,3,4")]


def test_set_partitions_match_sympy():
    ours = {tuple(sorted(P.parts)) for P in enumerate_set_partitions(3, 5)}
    theirs = {tuple(sorted(tuple(b) for b in blocks)) for blocks in multiset_partitions(list(range(1, 6)), 3)}
    assert ours == theirs


@pytest.mark.parametrize("text,n,expected", [
    ("1,3|2|4,5", 5, True), ("1,4|2,3|5", 5, True), ("1,3|2,4", 4, True), ("1|2,4|3", 4, False)])
def test_is_good_examples(text, n, expected):
    assert is_good(SetPartition.parse(text, n)) is expected


def test_is_good_needs_two_parts():
    with pytest.raises(ValueError):
        is_good(sp_("1,2,3"))


def test_is_good_against_definition():
    for n in range(2, 8):
        for d in range(2, n + 1):
            for P in enumerate_set_partitions(d, n):
                assert is_good(P) == good_by_definition(P), P


def test_count_good_examples():
    assert count_good(2, 4) == (7, 7)
    assert all(count_good(d, 2) == (0, 0) for d in (3, 4))
    direct, closed = count_good(3, 5)
    assert direct == closed == len(good_partitions(3, 5))


def test_count_good_all_small():
    for n in range(2, 10):
        for d in range(2, n + 1):
            direct, closed = count_good(d, n)
            k = n - d
            binomial_sum = sum(comb(n, i) for i in range(k + 1) if (k - i) % 2 == 0)
            assert direct == closed == rank(k, n) == binomial_sum


def test_pascal_recurrence():
    for n in range(3, 10):
        for d in range(2, n):
            assert count_good_closed(d, n) + count_good_closed(d + 1, n) == count_good_closed(d + 1, n + 1)


def test_merge():
    assert sp_("1|2|3").merge(1, 2) == sp_("1,2|3")
    assert sp_("1,2|3,4").merge(2, 3) == sp_("1,2,3,4")
    with pytest.raises(ValueError):
        sp_("1,2|3").merge(1, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 7), st.data())
def test_merge_depends_only_on_parts(n, data):
    parts = enumerate_set_partitions_all(n)
    P = data.draw(st.sampled_from([Q for Q in parts if Q.d >= 2]))
    A, B = data.draw(st.sampled_from([(a, b) for a in P.parts for b in P.parts if a < b]))
    i, i2 = data.draw(st.sampled_from(A)), data.draw(st.sampled_from(A))
    j, j2 = data.draw(st.sampled_from(B)), data.draw(st.sampled_from(B))
    assert P.merge(i, j) == P.merge(i2, j2)


def test_shape_and_normalization():
    assert sp_("1,2,4|3,6|5").shape() == IntPartition([3, 2, 1])
    assert IntPartition([2, 2, 2]).normalization() == 6
    assert IntPartition([4, 1, 1]).normalization() == 2


def test_special():
    assert IntPartition([3, 3]).is_special()
    assert not IntPartition([2, 2, 2]).is_special()
    assert IntPartition([1] * 6).is_special()
    assert not IntPartition([3, 1, 1, 1]).is_special()
    # d = 4 with e = (2, 2): 4!/(2!2!) = 6 is even
    assert not IntPartition([3, 3, 1, 1]).is_special()
    with pytest.raises(ValueError):
        IntPartition([2, 1]).is_special()


def test_merges_of_partition():
    got = {tuple(m.parts) for m in IntPartition([2, 1, 1]).merges()}
    assert got == {(2, 1, 1), (3, 1), (2, 2), (4,)}


def test_without_renumbers():
    assert sp_("1,3|2|4").without(2) == sp_("1,2|3")
