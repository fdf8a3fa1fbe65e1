import json
import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from em_lab.errors import DimensionError, ParseError
from em_lab.wreath import (ColoredPermutation, bar, classify, compose, cycle_type,
                           enumerate_group, format_window, inverse, is_absolute_involution,
                           is_involution, parse_window)

SIX = "3^1 2^0 1^3 4^2 6^3 5^1"
SIX_ABS = "3^1 2^0 1^1 4^2 6^3 5^3"


@st.composite
def colored_perms(draw, max_n=6, max_r=4):
    n = draw(st.integers(0, max_n))
    r = draw(st.integers(1, max_r))
    vals = draw(st.permutations(range(1, n + 1)))
    cols = draw(st.lists(st.integers(0, r - 1), min_size=n, max_size=n))
    return ColoredPermutation(vals, cols, r)


def same_group_pair(draw_n=4, draw_r=3):
    return st.integers(0, draw_n).flatmap(lambda n: st.integers(1, draw_r).flatmap(
        lambda r: st.tuples(*[st.builds(ColoredPermutation, st.permutations(range(1, n + 1)),
                                        st.lists(st.integers(0, r - 1), min_size=n, max_size=n),
                                        st.just(r)) for _ in range(3)])))


class TestGroupLaws:
    def test_identity_left(self):
        w = parse_window(SIX, 4)
        assert compose(ColoredPermutation.identity(6, 4), w) == w

    def test_inverse_right(self):
        w = parse_window(SIX, 4)
        assert compose(w, inverse(w)) == ColoredPermutation.identity(6, 4)

    def test_colors_add(self):
        w = parse_window("1^1", 2)
        assert compose(w, w) == parse_window("1^0", 2)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            compose(ColoredPermutation.identity(2, 2), ColoredPermutation.identity(2, 3))

    def test_inverse_examples(self):
        assert inverse(parse_window("1^1", 4)) == parse_window("1^3", 4)
        assert inverse(parse_window("2^0 1^1", 2)) == parse_window("2^1 1^0", 2)

    @pytest.mark.parametrize("n,r", [(n, r) for n in range(4) for r in range(1, 4)])
    def test_exhaustive_laws(self, n, r):
        elems = list(enumerate_group(n, r))
        e = ColoredPermutation.identity(n, r)
        for u in elems:
            assert compose(u, inverse(u)) == e == compose(inverse(u), u)
            assert compose(e, u) == u == compose(u, e)
        sample = elems[:: max(1, len(elems) // 12)]
        for u, v, w in itertools.product(sample, repeat=3):
            assert compose(compose(u, v), w) == compose(u, compose(v, w))

    @settings(max_examples=80, deadline=None)
    @given(same_group_pair())
    def test_associative_random(self, triple):
        u, v, w = triple
        assert compose(compose(u, v), w) == compose(u, compose(v, w))

    @pytest.mark.parametrize("n,r", [(n, r) for n in range(4) for r in range(1, 5)])
    def test_bar_commutes_with_inverse(self, n, r):
        for w in enumerate_group(n, r):
            assert bar(inverse(w)) == inverse(bar(w))

    def test_bar_example(self):
        assert bar(parse_window(SIX, 4)) == parse_window("3^3 2^0 1^1 4^2 6^1 5^3", 4)

    @settings(max_examples=80, deadline=None)
    @given(colored_perms())
    def test_bar_involution(self, w):
        assert bar(bar(w)) == w
        if w.r == 1:
            assert bar(w) == w


class TestCycles:
    def test_identity(self):
        ct = cycle_type(ColoredPermutation.identity(4, 3))
        assert [tuple(p) for p in ct.rtype] == [(1, 1, 1, 1), (), ()]
        assert ct.cycle_color_counts == (4, 0, 0)

    def test_six(self):
        ct = cycle_type(parse_window(SIX, 4))
        assert [tuple(p) for p in ct.rtype] == [(2, 2, 1), (), (1,), ()]

    def test_single_colored_point(self):
        ct = cycle_type(parse_window("1^1", 2))
        assert [tuple(p) for p in ct.rtype] == [(), (1,)]

    @settings(max_examples=80, deadline=None)
    @given(colored_perms(max_n=5).flatmap(
        lambda w: st.tuples(st.just(w), st.builds(
            ColoredPermutation, st.permutations(range(1, w.n + 1)),
            st.lists(st.integers(0, w.r - 1), min_size=w.n, max_size=w.n), st.just(w.r)))))
    def test_conjugation_invariant(self, pair):
        w, u = pair
        ct = cycle_type(w)
        assert sum(p.size for p in ct.rtype) == w.n
        assert ct.cycle_color_counts == tuple(len(p) for p in ct.rtype)
        assert cycle_type(compose(compose(u, w), inverse(u))) == ct


class TestClassify:
    def test_involution_not_absolute(self):
        c = classify(parse_window(SIX, 4))
        assert c.is_involution and not c.is_absolute_involution

    def test_absolute_not_involution(self):
        c = classify(parse_window(SIX_ABS, 4))
        assert c.is_absolute_involution and not c.is_involution

    def test_identity(self):
        c = classify(ColoredPermutation.identity(3))
        assert c.is_involution and c.is_absolute_involution and c.fix_by_color == (3,)

    @pytest.mark.parametrize("n,r", [(n, r) for n in range(5) for r in (1, 2)])
    def test_small_r_sets_coincide(self, n, r):
        for w in enumerate_group(n, r):
            assert is_involution(w) == is_absolute_involution(w)

    @settings(max_examples=80, deadline=None)
    @given(colored_perms())
    def test_predicates_match_definitions(self, w):
        e = ColoredPermutation.identity(w.n, w.r)
        assert is_involution(w) == (compose(w, w) == e)
        assert is_absolute_involution(w) == (inverse(bar(w)) == w)
        c = classify(w)
        fixed = [(i, col) for i, (v, col) in enumerate(zip(w.values, w.colors), 1) if v == i]
        assert c.is_derangement == all(col for _, col in fixed)
        assert sum(c.fix_by_color) == len(fixed)


class TestEnumerate:
    def test_count(self):
        assert sum(1 for _ in enumerate_group(2, 2)) == 8

    def test_derangements(self):
        assert sum(1 for _ in enumerate_group(2, 2, "derangements")) == 5
        assert [format_window(w) for w in enumerate_group(3, 1, "derangements")] == ["2 3 1", "3 1 2"]

    @pytest.mark.parametrize("subset", ["all", "derangements", "involutions", "absolute_involutions"])
    def test_empty_permutation(self, subset):
        assert [w.n for w in enumerate_group(0, 3, subset)] == [0]

    @pytest.mark.parametrize("n,r", [(3, 2), (2, 3), (4, 1)])
    def test_lexicographic_and_complete(self, n, r):
        elems = list(enumerate_group(n, r))
        keys = [(w.values, w.colors) for w in elems]
        assert keys == sorted(keys) and len(set(keys)) == r ** n * factorial(n)


class TestWindow:
    def test_parse_example(self):
        w = parse_window(SIX, 4)
        assert w.values == (3, 2, 1, 4, 6, 5) and w.colors == (1, 0, 3, 2, 3, 1)
        assert w.to_json_obj() == {"n": 6, "r": 4, "values": [3, 2, 1, 4, 6, 5],
                                   "colors": [1, 0, 3, 2, 3, 1]}

    def test_default_color(self):
        assert parse_window("2 1").colors == (0, 0)

    @pytest.mark.parametrize("text,pos", [("1^5", 0), ("1 1", 1), ("1 x", 1), ("1 3", 1)])
    def test_errors(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_window(text, 4)
        assert info.value.position == pos

    @settings(max_examples=80, deadline=None)
    @given(colored_perms())
    def test_round_trip(self, w):
        assert parse_window(format_window(w), w.r) == w
        assert ColoredPermutation.from_json_obj(json.loads(w.to_json())) == w
