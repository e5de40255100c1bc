import pytest
from hypothesis import given, settings, strategies as st

from shiftcodes.codes import SlidingBlockCode
from shiftcodes.errors import EntropyTie, MalformedWitness, NotSFTDomain
from shiftcodes.gallery import even_cover, extension_fail, two_cycle, yoo_code
from shiftcodes.points import EPPoint
from shiftcodes.presentations import (as_labeled, cycle, even_shift, from_matrix, full_shift,
                                      golden_mean, labeled)
from shiftcodes.sampling import random_factor_code, retract_oracle
from shiftcodes.verify import (bict_report, bounded_falsify, certify, closing_delay,
                               continuing_retract, cyclic_condition, factor_existence,
                               lifting_game, open_decision, reversed_code, search_retract,
                               thomsen_condition, validate_lifting_length)

import oracles


def projection():
    """full 4-shift onto the full 2-shift, forgetting one of two tracks."""
    return SlidingBlockCode(full_shift("abcd"), full_shift("01"), 0, 0,
                            {("a",): "0", ("b",): "0", ("c",): "1", ("d",): "1"})


def identity():
    return SlidingBlockCode.identity(golden_mean())


def test_closing_delays():
    assert closing_delay(identity(), "right") == 0
    assert closing_delay(identity(), "left") == 0
    assert closing_delay(projection(), "right") is None
    assert closing_delay(even_cover(), "right") == 0


def test_retracts_of_simple_codes():
    assert continuing_retract(identity(), "right", 0).ok
    assert continuing_retract(projection(), "right", 0).ok
    assert continuing_retract(projection(), "left", 0).ok
    r = search_retract(identity(), "right")
    assert (r.status, r.n) == ("found", 0)


def test_open_decision_fixtures():
    rep = open_decision(even_cover())
    assert rep.verdict == "no" and bict_report(rep).verdict == "no"
    assert rep.witness["reason"] == "image is not of finite type"
    rep = open_decision(projection())
    assert rep.verdict == "yes" and rep.params["lifting_length"] == 0
    assert open_decision(identity()).verdict == "yes"


def test_open_decision_rejects_sofic_domain():
    with pytest.raises(NotSFTDomain):
        open_decision(yoo_code())


def test_yoo_right_retract_refuted():
    code = yoo_code()
    for n in range(7):
        x = EPPoint(("1'",), ("2",) * (n + 1), ("2",), n)
        y = EPPoint(("1",), ("2",) * (n + 1), ("3",), n)
        rep = bounded_falsify(code, "right-retract", witnesses=[(x, y)], n=n)
        assert rep.verdict == "no" and rep.witness["x"] == x


def test_yoo_left_retract_zero_consistent():
    rep = bounded_falsify(yoo_code(), "left-retract", horizon=20, n=0, count=100)
    assert rep.verdict == "unknown-bounded"


def test_malformed_witness():
    x = EPPoint(("1",), ("3",), ("3",), 0)
    y = EPPoint(("2",), ("2",), ("2",), 0)
    with pytest.raises(MalformedWitness):
        bounded_falsify(yoo_code(), "right-retract", witnesses=[(x, y)], n=0)


def test_cyclic_condition_fixtures():
    X, Xt, phi = extension_fail()
    assert not cyclic_condition(phi, X).ok
    mixing = SlidingBlockCode(Xt, full_shift("a"), 0, 0, {(s,): "a" for s in "1234"})
    assert cyclic_condition(mixing, X).ok
    one = labeled(["A", "B"], [("1", "A", "B", "1"), ("3", "B", "A", "3")])
    single = SlidingBlockCode(one, two_cycle(), 0, 0, {("1",): "a", ("3",): "b"})
    ans = cyclic_condition(single, X)
    assert ans.ok and ans.witness == 0


def test_factor_existence_fixtures():
    rep = factor_existence(full_shift("abc"), golden_mean())
    assert rep.verdict == "yes" and rep.params["open_factor_exists"]
    rep = factor_existence(full_shift("ab"), even_shift())
    assert rep.verdict == "no" and rep.params["factor_exists"] and not rep.params["y_sft"]
    X, _, _ = extension_fail()
    rep = factor_existence(X, two_cycle())
    assert rep.verdict == "yes" and rep.params["thomsen"]
    rep = factor_existence(full_shift("ab"), two_cycle())
    assert rep.verdict == "no" and not rep.params["periodic_condition"]


def test_entropy_tie():
    with pytest.raises(EntropyTie):
        factor_existence(full_shift("ab"), as_labeled(from_matrix([[0, 2], [2, 0]])))


def test_thomsen_phase_condition():
    assert not thomsen_condition(cycle("ab"), cycle("abc")).ok
    assert thomsen_condition(as_labeled(from_matrix([[0, 2], [2, 0]])), cycle("ab")).ok


def test_certify_small_code():
    reps = certify(projection(), retract_bound=3)
    verdicts = {r.property: r.verdict for r in reps}
    assert verdicts == {"factor": "yes", "bi-continuing": "yes", "open": "yes"}
    bict = next(r for r in reps if r.property == "bi-continuing")
    assert bict.params["right_retract_at_bound"] and bict.params["left_retract_at_bound"]


def test_every_no_has_a_witness():
    for code in (even_cover(), projection(), identity()):
        rep = open_decision(code)
        assert rep.verdict != "no" or rep.witness is not None


def _seeded(seed, states=4):
    return random_factor_code(oracles.rng(seed), states)


@given(st.integers(0, 10 ** 6))
def test_lifting_game_is_a_fixpoint(seed):
    code = _seeded(seed, 3)
    game = lifting_game(code)
    # recompute the greatest fixpoint from scratch
    from shiftcodes.language import definite_cover
    FX, FY = definite_cover(code.domain), definite_cover(code.codomain)
    img = {a: code.symbol((a,)) for a in FX.alphabet if any(a == l for l in FX.labels.values())}
    W = {(u, q) for u in FX.states for q in FY.states}
    while True:
        keep = {(u, q) for u, q in W
                if all(any(img[a] == b and (t, q2) in W for _, a, t in FX.moves[u])
                       for _, b, q2 in FY.moves[q])}
        if keep == W:
            break
        W = keep
    assert game.W == frozenset(W)


@given(st.integers(0, 10 ** 6), st.sampled_from(["right", "left"]))
def test_retract_monotone(seed, side):
    code = _seeded(seed)
    verdicts = [continuing_retract(code, side, n).ok for n in range(7)]
    for a, b in zip(verdicts, verdicts[1:]):
        assert b or not a


@given(st.integers(0, 10 ** 6))
def test_left_is_right_of_reversal(seed):
    code = _seeded(seed)
    rev = reversed_code(code)
    for n in range(4):
        assert continuing_retract(code, "left", n).ok == continuing_retract(rev, "right", n).ok
    assert closing_delay(code, "left") == closing_delay(rev, "right")


@given(st.integers(0, 10 ** 6))
def test_open_iff_bicontinuing(seed):
    rep = open_decision(_seeded(seed))
    assert rep.verdict == rep.params["bi_continuing"]


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_retract_agrees_with_oracle(seed):
    code = _seeded(seed, 3)
    for n in range(3):
        assert continuing_retract(code, "right", n).ok == retract_oracle(code, n)[0]


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_bi_retract_gives_lifting_length(seed):
    code = _seeded(seed, 3)
    rep = open_decision(code)
    if rep.verdict != "yes":
        return
    n = rep.params["bi_retract"]
    if n <= 2:
        assert oracles.lifting_length_holds(code, n, k=0, horizon=1)
    assert validate_lifting_length(code, n, radius=2, horizon=n + 3).ok


@given(st.integers(0, 10 ** 6))
def test_failed_retract_witness_is_a_counterexample(seed):
    code = _seeded(seed)
    ans = continuing_retract(code, "right", 1)
    if ans.ok:
        return
    x, y = ans.witness["x"], ans.witness["y"]
    rep = bounded_falsify(code, "right-retract", witnesses=[(x, y)], n=1)
    assert rep.verdict == "no"
