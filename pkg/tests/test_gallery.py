import math

import pytest

from shiftcodes.errors import UnknownGallery
from shiftcodes.gallery import (GALLERY, SGAP_FIXTURES, _w1_lift, run_gallery, sgap_classify,
                                sgap_fixture, w1_admissible, w1_code_rule)
from shiftcodes.presentations import sgap_explicit, sgap_rule


@pytest.mark.parametrize("name", sorted(GALLERY))
def test_every_claim_matches(name):
    claims = run_gallery(name)
    assert claims and all(c["match"] for c in claims)
    assert all(c["status"] in ("decided", "bounded", "witness-only") for c in claims)


def test_unknown_gallery():
    with pytest.raises(UnknownGallery):
        run_gallery("nope")


def test_sgap_exact_small_set():
    r = sgap_classify(sgap_explicit([1, 2]))
    assert (r["aspe"], r["mixing"], r["spec"], r["gcd"]) == ("yes", "yes", "yes", 1)
    assert r["basis"].startswith("exact")


def test_sgap_odds_gcd_two():
    r = sgap_classify(sgap_fixture("odds"))
    assert r["gcd"] == 2 and r["max_gap"] == 2 and r["mixing"] == "no"


def test_sgap_powers_of_two_gap_found():
    r = sgap_classify(sgap_fixture("powers-of-two", 2 ** 12))
    assert r["aspe"] == "no" and r["max_gap"] == 2 ** 11 and r["gap_cap"] == 64


def test_sgap_metadata_overrides_scan():
    S = sgap_rule(lambda n: n in (1, 2), 100, sup_gap=math.inf, gcd=1)
    r = sgap_classify(S)
    assert r["aspe"] == "no" and r["basis"] == "metadata"


def test_sgap_digit_multiples():
    S = sgap_fixture("odd-minus-digit-multiples")
    # one-digit numbers other than 1 are multiples of 1; odd numbers are never
    # multiples of 2; three-digit multiples of 3 are dropped
    assert S.gaps(40) == [1] + list(range(11, 40, 2))
    g = S.gaps(120)
    assert 105 not in g and 107 in g and 111 not in g
    r = sgap_classify(S)
    assert r["max_gap"] == 10 and r["gcd"] == 2


def test_sgap_fixture_names():
    assert set(SGAP_FIXTURES) == {"one-two", "odds", "evens", "powers-of-two",
                                  "odd-minus-digit-multiples"}
    with pytest.raises(UnknownGallery):
        sgap_fixture("primes")


def test_w1_rule():
    assert w1_code_rule("abc") == "b" and w1_code_rule("bca") == "c"
    assert w1_code_rule("bbb") == "a"


def test_w1_admissible():
    assert w1_admissible("abbccab")
    assert w1_admissible("bbcc")
    assert not w1_admissible("abbcab")
    assert not w1_admissible("acb")


def test_w1_no_left_asymptotic_lift():
    assert _w1_lift(6) is False
