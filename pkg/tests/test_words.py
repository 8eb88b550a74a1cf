from hypothesis import given, strategies as st

from gogout.words import (commutator, cyclic_reduce, format_word, free_conjugate, free_cyclic_log,
                          inv, mul, parse_word, power, reduce, root, substitute)

letters = st.tuples(st.sampled_from("abc"), st.integers(-3, 3).filter(bool))
words = st.lists(letters, max_size=8).map(reduce)


def test_parse_and_format():
    assert parse_word("a b^-1 c^3") == (("a", 1), ("b", -1), ("c", 3))
    assert parse_word("1") == ()
    assert parse_word("  ") == ()
    assert parse_word("a a^-1") == ()
    assert format_word(()) == "1"
    assert format_word(parse_word("a^-1 t")) == "a^-1 t"


def test_commutator_convention():
    a, b = parse_word("a"), parse_word("b")
    assert commutator(a, b) == parse_word("a b a^-1 b^-1")


@given(words)
def test_format_round_trip(w):
    assert parse_word(format_word(w)) == w


@given(words)
def test_reduce_idempotent_and_inverse(w):
    assert reduce(w) == w
    assert mul(w, inv(w)) == ()
    assert inv(inv(w)) == w


@given(words, words, words)
def test_mul_associative(u, v, w):
    assert mul(mul(u, v), w) == mul(u, mul(v, w))


@given(words.filter(bool), st.integers(1, 4))
def test_root_and_cyclic_log(w, k):
    u, r, m = root(w)
    assert mul(u, power(r, m), inv(u)) == w
    assert free_cyclic_log(power(w, k), w) == k
    assert free_cyclic_log(power(w, -k), w) == -k


def test_cyclic_log_rejects_non_powers():
    assert free_cyclic_log(parse_word("a b"), parse_word("a")) is None
    assert free_cyclic_log(parse_word("a^2"), parse_word("a^4")) is None
    assert free_cyclic_log(parse_word("a^4"), parse_word("a^2")) == 2


@given(words, words)
def test_conjugates_are_recognised(w, u):
    assert free_conjugate(w, mul(u, w, inv(u)))


def test_cyclic_reduce():
    u, c = cyclic_reduce(parse_word("b a c b^-1"))
    assert u == parse_word("b") and c == parse_word("a c")


def test_substitute():
    w = parse_word("a b^-2")
    assert substitute(w, {"b": parse_word("c d")}) == parse_word("a d^-1 c^-1 d^-1 c^-1")
