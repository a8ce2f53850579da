from itertools import product as cartesian

import pytest

from cocycle_lab.errors import BracketUndefined, BudgetExceeded, NonAdmissibleAlphabet, NotIrreducible
from cocycle_lab.symbolic import (
    PeriodicOrbit,
    SymbolSequence,
    bracket,
    connecting_word,
    distance,
    enumerate_periodic,
    full_shift,
    min_rotation,
    shift,
    splice,
    stable_index,
    unstable_index,
    validate_sft,
)

from corpus import FULL2, GOLDEN

Q = SymbolSequence((0,), (1,), (0,), 0)
ZERO = SymbolSequence.constant(0)


def single_one(at):
    return SymbolSequence((0,), (1,), (0,), at)


def necklaces(n):
    """Aperiodic binary necklaces of length n, by brute force."""
    seen = set()
    for w in cartesian((0, 1), repeat=n):
        rots = {w[i:] + w[:i] for i in range(n)}
        if len(rots) == n:
            seen.add(min(rots))
    return len(seen)


class TestValidate:
    def test_full_shift_irreducible(self):
        q = validate_sft([[1, 1], [1, 1]])
        assert q.irreducible
        assert all(q.m(a, b) == 1 for a in (1, 2) for b in (1, 2))

    def test_identity_not_irreducible(self):
        q = validate_sft([[1, 0], [0, 1]])
        assert not q.irreducible
        assert q.m(1, 2) is None

    def test_golden_mean(self):
        assert GOLDEN.irreducible
        assert GOLDEN.m(2, 2) == 2
        assert GOLDEN.max_m == 2

    @pytest.mark.parametrize("rows", [[[0, 0], [1, 1]], [[1, 0], [1, 0]], [[1, 1]], [[2, 0], [0, 1]]])
    def test_rejects_stranded_or_malformed(self, rows):
        with pytest.raises(NonAdmissibleAlphabet):
            validate_sft(rows)


class TestSequence:
    def test_normalization_makes_equality_structural(self):
        a = SymbolSequence((0, 0), (0, 1, 0), (0, 0, 0), -1)
        assert a == single_one(0)
        assert SymbolSequence((0, 1, 0, 1), (), (0, 1), 4) == SymbolSequence.periodic((0, 1))

    def test_coordinates(self):
        x = SymbolSequence((1, 2), (5,), (3,), 0)
        assert x.window(-3, 3) == (2, 1, 2, 5, 3, 3, 3)


class TestDistance:
    def test_equal(self):
        assert distance(Q, Q) == 0.0

    def test_differ_at_origin(self):
        assert distance(ZERO, single_one(0)) == 1.0

    def test_differ_at_three(self):
        assert distance(ZERO, single_one(3)) == 0.125
        assert distance(ZERO, single_one(-3)) == 0.125


class TestShift:
    def test_zero(self):
        assert shift(Q, 0) == Q

    def test_period(self):
        o = PeriodicOrbit((0, 0, 1))
        assert shift(o.base_point, o.period) == o.base_point

    def test_moves_index(self):
        assert shift(Q, 1) == single_one(-1)
        assert shift(Q, 1)[-1] == 1

    def test_inverse(self):
        x = SymbolSequence((1,), (0, 1, 1), (0, 1), 2)
        assert shift(shift(x, 1), -1) == x


class TestBracket:
    def test_idempotent(self):
        assert bracket(Q, Q) == Q

    def test_splice(self):
        p = SymbolSequence.periodic((0, 1))
        y = bracket(p, ZERO)
        assert y.window(-5, 5) == (1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0)

    def test_undefined(self):
        with pytest.raises(BracketUndefined):
            bracket(SymbolSequence.constant(1), ZERO)

    def test_local_sets(self):
        p = SymbolSequence.periodic((0, 1, 1))
        x = SymbolSequence((1,), (0, 0, 1), (0,), -1)
        y = bracket(p, x)
        assert unstable_index(p, y) >= 0
        assert stable_index(x, y) <= 0

    def test_splice_cut(self):
        s = splice(ZERO, SymbolSequence.constant(1), 4)
        assert s.window(2, 5) == (0, 0, 1, 1)


class TestConnectingWord:
    def test_direct_edge(self):
        assert connecting_word(FULL2, 0, 1) == ((), 1)

    def test_golden(self):
        assert connecting_word(GOLDEN, 2, 2) == ((1,), 2)

    def test_self_loop(self):
        assert connecting_word(GOLDEN, 1, 1) == ((), 1)

    def test_not_irreducible(self):
        with pytest.raises(NotIrreducible):
            connecting_word(validate_sft([[1, 0], [0, 1]]), 1, 2)

    def test_splice_admissible(self):
        q = validate_sft([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
        for a in q.symbols:
            for b in q.symbols:
                c, n1 = connecting_word(q, a, b)
                assert n1 == q.m(a, b) == len(c) + 1 <= q.max_m
                assert q.admits_word((a, *c, b))


class TestEnumerate:
    def test_fixed_points(self):
        words = [o.word for o in enumerate_periodic(FULL2, 1)]
        assert words == [(0,), (1,)]

    def test_period_two(self):
        assert len(enumerate_periodic(FULL2, 2)) == 3

    def test_golden(self):
        words = {o.word for o in enumerate_periodic(GOLDEN, 3)}
        assert words == {(1,), (1, 2), (1, 1, 2)}

    @pytest.mark.parametrize("n", range(1, 11))
    def test_necklace_counts(self, n):
        got = [o for o in enumerate_periodic(FULL2, n) if o.period == n]
        assert len(got) == necklaces(n)

    def test_least_period(self):
        for o in enumerate_periodic(GOLDEN, 8):
            b = o.base_point
            assert shift(b, o.period) == b
            assert all(shift(b, k) != b for k in range(1, o.period))
            assert o.word == min_rotation(o.word)

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            enumerate_periodic(FULL2, 12, cap=10)

    def test_bad_period(self):
        with pytest.raises(ValueError):
            enumerate_periodic(FULL2, 0)

    def test_other_alphabet(self):
        q3 = full_shift(3, 1)
        assert len(enumerate_periodic(q3, 2)) == 3 + 3
