import pytest
from hypothesis import given, strategies as st

from shiftcodes.errors import EmptyShift, ParseError, ShiftError
from shiftcodes.language import in_language, words
from shiftcodes.presentations import (EdgeShiftPresentation, ForbiddenWordSpec, as_labeled,
                                      compile_forbidden, cycle, edge_shift, even_shift,
                                      from_document, from_matrix, full_shift, golden_mean,
                                      higher_block, higher_power, labeled, sgap_explicit,
                                      sgap_presentation, sgap_rule, to_document, trim_essential)

import oracles


def test_from_matrix_multiplicities():
    G = from_matrix([[0, 2], [2, 0]])
    assert len(G.edges) == 4
    assert G.matrix() == [[0, 2], [2, 0]]


def test_bad_matrix():
    with pytest.raises(ShiftError):
        from_matrix([[1, 1]])
    with pytest.raises(ShiftError):
        from_matrix([[-1]])


def test_duplicate_edge_ids():
    with pytest.raises(ShiftError):
        edge_shift(["a"], [("e", "a", "a"), ("e", "a", "a")])


def test_unknown_state():
    with pytest.raises(ShiftError):
        edge_shift(["a"], [("e", "a", "b")])


def test_label_outside_alphabet():
    with pytest.raises(ShiftError):
        labeled(["a"], [("e", "a", "a", "x")], ["y"])


def test_trim_removes_transient_states():
    G = edge_shift(["a", "b", "c"], [("1", "a", "a"), ("2", "a", "b"), ("3", "c", "a")])
    T = trim_essential(G)
    assert T.states == ("a",) and [e for e, _, _ in T.edges] == ["1"]


def test_trim_empty():
    with pytest.raises(EmptyShift):
        trim_essential(edge_shift(["a", "b"], [("1", "a", "b")]))


def test_golden_mean_words():
    X = golden_mean()
    assert len(words(X, 5)) == 13
    assert not in_language(X, "0110")


def test_forbidden_compiles_to_golden_mean():
    X = compile_forbidden(ForbiddenWordSpec("01", {"11"}))
    for n in range(1, 8):
        assert words(X, n) == words(golden_mean(), n)


def test_forbidden_longer_word():
    X = compile_forbidden(ForbiddenWordSpec("ab", {"aba", "bb"}))
    for n in range(1, 8):
        got = set(words(X, n))
        # brute force: words avoiding the patterns that extend both ways
        ok = {w for w in map(tuple, _all("ab", n)) if "aba" not in "".join(w) and "bb" not in "".join(w)}
        assert got <= ok


def _all(alphabet, n):
    if n == 0:
        return [""]
    return [w + a for w in _all(alphabet, n - 1) for a in alphabet]


def test_forbidden_rejects_empty_word():
    with pytest.raises(ShiftError):
        ForbiddenWordSpec("ab", {""})


def test_document_roundtrip():
    X = even_shift()
    Y = from_document(to_document(X))
    for n in range(1, 7):
        assert words(X, n) == words(Y, n)


def test_document_errors_carry_location():
    with pytest.raises(ParseError) as e:
        from_document({})
    assert e.value.location == "$"
    with pytest.raises(ParseError) as e:
        from_document({"states": ["a"], "edges": [{"id": "x"}]})
    assert e.value.location == "$.edges[0]"
    with pytest.raises(ParseError):
        from_document({"matrix": [[1, 1]]})


def test_matrix_document():
    X = from_document({"matrix": [[1, 1], [1, 0]]})
    assert len(words(X, 3)) == 8  # sum of the entries of A^3


def test_higher_block_words_are_blocks():
    X = golden_mean()
    X3, code = higher_block(X, 3)
    assert len(words(X3, 4)) == len(words(X, 6))
    assert code.memory == 0 and code.anticipation == 2


def test_higher_power():
    X = full_shift("ab")
    X2, pc = higher_power(X, 2)
    assert len(words(X2, 1)) == 4
    assert pc.invert(pc.apply("abba")) == tuple("abba")


def test_cycle():
    C = cycle("ab")
    assert words(C, 3) == [tuple("aba"), tuple("bab")]


def test_sgap_presentation():
    X = sgap_presentation(sgap_explicit([1, 2]), 2)
    assert not in_language(X, "11")
    assert in_language(X, "1010010")
    assert not in_language(X, "10001")


def test_sgap_rule_flagged_approximate():
    X = sgap_presentation(sgap_rule(lambda n: n % 2 == 1, 100), 9)
    assert "approximate" in X.flags


@given(st.integers(0, 10 ** 6))
def test_edge_shift_language_matches_paths(seed):
    states, edges = oracles.random_irreducible(oracles.rng(seed), 3)
    X = as_labeled(EdgeShiftPresentation(states, edges))
    for n in range(1, 4):
        assert set(words(X, n)) == oracles.label_words(edges, X.labels, n)


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_higher_block_count(seed, N):
    states, edges = oracles.random_irreducible(oracles.rng(seed), 3)
    X = as_labeled(EdgeShiftPresentation(states, edges))
    XN, _ = higher_block(X, N)
    assert len(words(XN, 2)) == len(oracles.edge_paths(edges, N + 1))
