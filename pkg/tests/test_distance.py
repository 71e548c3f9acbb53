"""
Tests for free distance, slope and the zero-run property, each against a
brute-force oracle.
"""

import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cnecc.algebra import parse_code
from cnecc.codes import (
    analyze,
    build_state_graph,
    encode,
    free_distance,
    free_distance_bruteforce,
    iter_rate_1_generators,
    slope,
    slope_bound_check,
    slope_by_cycles,
    zero_run_check,
)

C1 = "[1+z, 1]"
C2 = "[1+z+z^2, 1+z^2]"


def code(text):
    return analyze(parse_code(text))


@pytest.fixture(scope="module")
def minimal_rate_half_codes():
    """Every minimal-basic 1 x 2 generator with degree 1..3."""
    codes = [analyze(G) for G in iter_rate_1_generators(2, 3)]
    return [c for c in codes if c.minimal_basic]


@pytest.mark.parametrize("text,expected", [(C1, 3), (C2, 5), ("[1, z]", 2)])
def test_free_distance(text, expected):
    """Free distances of the reference codes."""
    assert free_distance(code(text)) == expected


@pytest.mark.parametrize("text", [C1, C2, "[1+z+z^2, z]", "[z, 1+z^2]", "[[1+z, z, 1], [z, 1, 0]]"])
def test_free_distance_matches_bruteforce(text):
    """The state-graph search agrees with exhaustive enumeration."""
    c = code(text)
    max_len = 10 if c.b == 1 else 6
    assert free_distance(c) == free_distance_bruteforce(c, max_len=max_len)


@pytest.mark.parametrize("text", [C1, C2])
def test_codeword_weight_at_least_free_distance(text):
    """No short nonzero input encodes below the free distance."""
    c = code(text)
    d = free_distance(c)
    for L in range(1, 9):
        for bits in product((0, 1), repeat=L):
            if any(bits):
                assert encode(c, np.array(bits).reshape(L, 1)).weight >= d


@pytest.mark.parametrize("text,expected", [
    (C1, Fraction(1)),
    (C2, Fraction(1, 2)),
    ("[1, z]", Fraction(1)),
])
def test_slope(text, expected):
    """Slopes are exact fractions."""
    result = slope(code(text))
    assert isinstance(result, Fraction)
    assert result == expected


def test_slope_of_degree_zero_code_is_infinite():
    """A memoryless code has infinite slope."""
    assert slope(code("[1, 1]")) == math.inf
    assert slope_by_cycles(code("[1, 1]")) == math.inf


@pytest.mark.parametrize("text", [C1, C2, "[1+z+z^2, z]", "[[1+z, z, 1], [z, 1, 0]]"])
def test_slope_matches_cycle_enumeration(text):
    """Minimum mean cycle agrees with enumerating simple cycles."""
    c = code(text)
    sg = build_state_graph(c)
    assert slope(c, sg) == slope_by_cycles(c, sg)


@pytest.mark.parametrize("text,bound", [(C1, Fraction(1, 2)), (C2, Fraction(1, 3))])
def test_slope_bound_check(text, bound):
    """The slope is at least 1/(degree+1)."""
    check = slope_bound_check(code(text))
    assert check.bound == bound
    assert check.passed


def test_slope_bound_holds_for_all_small_rate_half_codes(minimal_rate_half_codes):
    """The slope bound holds for every small minimal-basic rate-1/2 code."""
    assert minimal_rate_half_codes
    for c in minimal_rate_half_codes:
        sg = build_state_graph(c)
        check = slope_bound_check(c, sg)
        assert check.passed, str(c.G)
        assert check.slope == slope_by_cycles(c, sg), str(c.G)


def test_every_degree_is_swept(minimal_rate_half_codes):
    """The sweep covers degrees 1 to 3."""
    assert {c.degree for c in minimal_rate_half_codes} == {1, 2, 3}


@pytest.mark.parametrize("text", [C1, C2, "[1+z+z^2, z]", "[[1+z, z, 1], [z, 1, 0]]"])
def test_zero_run_check(text):
    """Minimal-basic codes leave the zero state within degree+1 zero blocks."""
    assert zero_run_check(code(text))


def test_zero_run_check_for_all_small_rate_half_codes(minimal_rate_half_codes):
    """The zero-run property holds for every small minimal-basic rate-1/2 code."""
    for c in minimal_rate_half_codes:
        assert zero_run_check(c), str(c.G)


def test_catastrophic_encoder_has_long_zero_runs():
    """[1+z, 1+z^2] loops on the all-ones state with zero output."""
    c = code("[1+z, 1+z^2]")
    sg = build_state_graph(c, require_minimal=False)
    assert not zero_run_check(c, sg)
