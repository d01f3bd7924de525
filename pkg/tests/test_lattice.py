"""Lattice path and pattern class unit tests."""

import math

import pytest

from walkpatterns import (
    Kind,
    LatticePath,
    PatternClass,
    PatternError,
    count_class,
    custom_collection,
    dump_patterns,
    enumerate_class,
    is_member,
    lambda_n,
    load_patterns,
)
from walkpatterns.lattice import EnumerationCapError, count_positive_walks


def test_path_roundtrip():
    p = LatticePath.from_string("+-+")
    assert p.increments == (1, -1, 1)
    assert p.heights == (1, 0, 1)
    assert p.to_string() == "+-+"
    assert LatticePath.from_increments([1, -1, 1]) == p
    assert len(p) == 3


def test_path_validation():
    with pytest.raises(PatternError):
        LatticePath.from_string("+x-")
    with pytest.raises(PatternError):
        LatticePath.from_increments([1, 0])
    with pytest.raises(PatternError):
        LatticePath(0, 0)


def test_window_int_orders_earliest_first():
    # (+,+,-): earliest step in the top bit -> 0b110
    assert LatticePath.from_string("++-").window_int == 0b110
    assert LatticePath.from_string("-++").window_int == 0b011


def test_negated_and_bits_helpers():
    p = LatticePath.from_string("++-")
    assert p.negated().to_string() == "--+"
    assert p.prefix_bits(2) == LatticePath.from_string("++").bits
    assert p.suffix_bits(2) == LatticePath.from_string("+-").bits


def test_lambda_n_parity_correction():
    assert lambda_n(-1.0, 100) == -10
    assert lambda_n(-1.0, 9) == -3
    assert lambda_n(0.0, 6) == 0
    # floor(-1*sqrt(200)) = -15, parity of 200 forces -14
    assert lambda_n(-1.0, 200) == -14
    assert lambda_n(-2.0, 4) == -4
    for lam in (-1.7, -0.3, 0.4, 2.2):
        for n in range(1, 40):
            assert (lambda_n(lam, n) - n) % 2 == 0


def test_class_validation():
    with pytest.raises(PatternError):
        PatternClass(Kind.EXCURSION, 5)
    with pytest.raises(PatternError):
        PatternClass(Kind.POSITIVE, 4)
    with pytest.raises(PatternError):
        PatternClass(Kind.BRIDGE, 4)  # needs a level
    with pytest.raises(PatternError):
        PatternClass(Kind.FIRST_PASSAGE, 4, level=1.0)
    with pytest.raises(PatternError):
        # endpoint rounds to 0
        PatternClass(Kind.FIRST_PASSAGE, 2, level=-0.1)


def test_counts_match_enumeration():
    cases = [
        PatternClass(Kind.EXCURSION, 8),
        PatternClass(Kind.POSITIVE, 7),
        PatternClass(Kind.BRIDGE, 8, level=0.0),
        PatternClass(Kind.BRIDGE, 9, level=1.0),
        PatternClass(Kind.FIRST_PASSAGE, 9, level=-1.0),
        PatternClass(Kind.FIRST_PASSAGE, 10, level=-2.0),
    ]
    for pc in cases:
        coll = enumerate_class(pc)
        assert len(coll) == count_class(pc)
        assert all(is_member(p, pc) for p in coll.paths)
        # sorted and deduplicated
        keys = [p.sort_key() for p in coll.paths]
        assert keys == sorted(keys)
        assert len({p.bits for p in coll.paths}) == len(coll)


def test_known_counts():
    # Catalan numbers for excursions, central binomials for positive walks
    assert count_class(PatternClass(Kind.EXCURSION, 6)) == 2
    assert count_class(PatternClass(Kind.EXCURSION, 8)) == 5
    assert count_positive_walks(3) == 2
    assert count_positive_walks(5) == 6
    assert count_class(PatternClass(Kind.BRIDGE, 6, level=0.0)) == math.comb(6, 3)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_class(PatternClass(Kind.BRIDGE, 40, level=0.0))


def test_membership_predicates():
    exc = PatternClass(Kind.EXCURSION, 4)
    assert is_member(LatticePath.from_string("++--"), exc)
    assert not is_member(LatticePath.from_string("+-+-"), exc)
    fp = PatternClass(Kind.FIRST_PASSAGE, 9, level=-1.0)
    assert is_member(LatticePath.from_string("++----+--"), fp)
    # touches lambda_9 = -3 before the end
    assert not is_member(LatticePath.from_string("---++--+-"), fp)
    # wrong endpoint
    assert not is_member(LatticePath.from_string("+-+-+-+-+"), fp)


def test_negation_closure():
    b0 = enumerate_class(PatternClass(Kind.BRIDGE, 6, level=0.0))
    assert b0.closed_under_negation()
    e4 = enumerate_class(PatternClass(Kind.EXCURSION, 4))
    assert not e4.closed_under_negation()


def test_load_dump_roundtrip():
    coll = custom_collection(["++-", "-++"])
    text = dump_patterns(coll)
    again = load_patterns(text.splitlines())
    assert [p.bits for p in again.paths] == [p.bits for p in coll.paths]
    with pytest.raises(PatternError):
        load_patterns(["++", "++"])  # duplicate
    with pytest.raises(PatternError):
        load_patterns(["++", "+++"])  # length mismatch
    with pytest.raises(PatternError):
        load_patterns(["# only a comment"])
