import pytest
from hypothesis import given, strategies as st

from teichlab import words as W
from teichlab.errors import DomainError, TrivialCurveError

letters = st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0)
raw_words = st.lists(letters, min_size=0, max_size=24).map(tuple)


def test_free_reduce_cancels():
    assert W.free_reduce((1, 2, -2, -1)) == ()
    assert W.free_reduce((1, -2, 2, 3)) == (1, 3)
    assert W.free_reduce(()) == ()


@given(raw_words)
def test_free_reduce_idempotent(w):
    r = W.free_reduce(w)
    assert W.free_reduce(r) == r
    for x, y in zip(r, r[1:]):
        assert x != -y


def test_cyclic_reduce_strips_conjugation():
    assert W.cyclic_reduce((3, 1, 2, -3)) == (1, 2)
    with pytest.raises(TrivialCurveError):
        W.cyclic_reduce((1, 2, -2, -1))
    with pytest.raises(TrivialCurveError):
        W.cyclic_reduce(())


@given(raw_words.filter(lambda w: len(W.free_reduce(w)) > 0), raw_words)
def test_canonical_cyclic_conjugation_invariant(w, c):
    try:
        base = W.canonical_cyclic(w)
    except TrivialCurveError:
        return
    conj = tuple(c) + tuple(w) + W.invert_word(c)
    try:
        assert W.canonical_cyclic(conj) == base
    except TrivialCurveError:
        return


@given(raw_words.filter(lambda w: len(W.free_reduce(w)) > 0))
def test_canonical_cyclic_inversion_invariant(w):
    try:
        assert W.canonical_cyclic(w) == W.canonical_cyclic(W.invert_word(w))
    except TrivialCurveError:
        pass


def test_rotations_and_period():
    assert set(W.rotations((1, 2, 3))) == {(1, 2, 3), (2, 3, 1), (3, 1, 2)}
    assert W.word_period((1, 2, 1, 2)) == 2
    assert W.word_period((1, 2, 3)) == 3
    assert W.is_primitive((1, 2))
    assert not W.is_primitive((1, 2, 1, 2))


def test_commutator_convention():
    assert W.commutator((1,), (2,)) == (1, 2, -1, -2)


def test_word_power():
    assert W.word_power((1, 2), 3) == (1, 2, 1, 2, 1, 2)
    assert W.word_power((1, 2), -2) == (-2, -1, -2, -1)
    assert W.word_power((1, 2), 0) == ()


def test_word_str_round_trip():
    w = (1, 2, -1, -2, 3)
    s = W.word_str(w)
    assert s == "a1.b1.A1.B1.a2"
    assert W.parse_word_str(s) == w
    assert W.parse_word_str("1,2,-1,-2,3") == w


@given(raw_words)
def test_word_str_parses_back(w):
    assert W.parse_word_str(W.word_str(w)) == tuple(w)


def test_check_letters():
    with pytest.raises(DomainError):
        W.check_letters((0,), 4)
    with pytest.raises(DomainError):
        W.check_letters((5,), 4)
    W.check_letters((4, -4), 4)


def test_concat_reduce():
    assert W.concat_reduce((1, 2), (-2, 3)) == (1, 3)
    assert W.concat_reduce((1,), (-1,)) == ()
