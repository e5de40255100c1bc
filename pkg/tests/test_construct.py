import math
import random
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from shiftcodes.codes import apply, is_factor_onto
from shiftcodes.construct import (_Decoder, avoid_subshift, biclosing_subfactor, blow_up,
                                  build_plan, construct_factor, high_entropy_sub_sft,
                                  marker_factor_code, reduce_periodic, stretches)
from shiftcodes.errors import ConditionFailed, NotProper, PlanInfeasible
from shiftcodes.gallery import doubled_two_state, two_cycle
from shiftcodes.language import classify, in_language, language_difference, words
from shiftcodes.presentations import full_shift, golden_mean, join_symbols, labeled
from shiftcodes.spectral import entropy, periodic_profile, trace_counts
from shiftcodes.verify import _random_word, closing_delay

LOG2 = math.log(2)


@lru_cache(maxsize=None)
def plan():
    return build_plan(full_shift("012"), golden_mean())


@lru_cache(maxsize=None)
def code():
    return marker_factor_code(plan())


# -- sub-SFTs --------------------------------------------------------------

def test_x3_is_golden_mean():
    s = high_entropy_sub_sft(full_shift("01"), "0", 3)
    assert language_difference(s.presentation, golden_mean()) is None
    assert abs(s.entropy[0] - math.log((1 + 5 ** 0.5) / 2)) < 1e-9


def test_golden_mean_constraint_vacuous():
    s = high_entropy_sub_sft(golden_mean(), "0", 3)
    for n in range(1, 9):
        assert words(s.presentation, n) == words(golden_mean(), n)


def test_xk_monotone_with_bound():
    X = full_shift("01")
    hs = []
    for k in (3, 4, 5, 6, 8, 10):
        s = high_entropy_sub_sft(X, "0", k)
        assert s.entropy[1] >= math.log(len(words(X, k - 2))) / k
        hs.append(s.entropy)
    assert all(b[1] >= a[0] for a, b in zip(hs, hs[1:]))
    assert hs[-1][0] > LOG2 - 0.08


def test_xk_blocks_contain_marker():
    s = high_entropy_sub_sft(full_shift("01"), "0", 5)
    assert all("0" in w[1:] for w in words(s.presentation, 5))


def test_avoid_runs_of_ones():
    one = labeled(["a"], [("e", "a", "a", "1")], ["0", "1"])
    V = avoid_subshift(full_shift("01"), one, 0.6)
    assert V.entropy[0] > 0.6 and classify(V.presentation)["mixing"]
    assert not in_language(V.presentation, "1" * V.k)


def test_avoid_two_symbols():
    V = avoid_subshift(full_shift("012"), full_shift("01"), 0.5)
    assert V.marker == ("2",)
    assert all("2" in w for w in words(V.presentation, V.k))
    assert V.entropy[0] > 0.5 and classify(V.presentation)["sft"]


def test_avoid_everything_is_improper():
    with pytest.raises(NotProper):
        avoid_subshift(full_shift("01"), full_shift("01"), 0.1)


# -- blow-up and bi-closing sub-factors ------------------------------------

def test_blow_up_counts():
    Y = golden_mean()
    Y2 = blow_up(Y, 2)
    assert len(Y2.states) == 4
    p2, p = trace_counts(Y2, 12), trace_counts(Y.base, 12)
    for k in range(1, 7):
        assert p2[2 * k] == 2 * p[2 * k] and p2[2 * k - 1] == 0


def test_blow_up_period():
    for n in range(1, 5):
        assert periodic_profile(blow_up(golden_mean(), n), 20).per == n


def test_biclosing_subfactor_golden_mean():
    b = biclosing_subfactor(full_shift("012"), golden_mean())
    assert is_factor_onto(b.pi).ok
    assert closing_delay(b.pi, "right") is not None and closing_delay(b.pi, "left") is not None
    assert language_difference(b.Z, full_shift("012")) is not None
    for w in words(b.Z, 4):
        assert in_language(full_shift("012"), w)


def test_biclosing_onto_a_point():
    b = biclosing_subfactor(full_shift("01"), full_shift("a"))
    assert len(words(b.Z, 6)) == 1 and is_factor_onto(b.pi).ok


# -- the plan --------------------------------------------------------------

def test_plan_parameters():
    p = plan()
    assert (p.N, p.I, p.D) == (4, 22, 0)
    assert p.I >= 2 * p.N + 3
    assert p.retract_bound == 2 * p.I + 6 * p.N + 3 * p.D == 68
    assert p.alpha == min(p.V_symbols)


def test_plan_invariants():
    p = plan()
    assert not (p.Z_symbols & p.V_symbols)
    assert entropy(p.Z) <= entropy(p.X) + 1e-9
    assert p.V.entropy[0] > entropy(p.Y)
    for b in p.Z_symbols:
        for a in p.XR_alphabet:
            for cls, key in ((p.hl[b], (p.psi[a], p.psi[b])), (p.lh[b], (p.psi[b], p.psi[a]))):
                if cls.count():
                    assert cls.count() >= p.targets[key].count()
    assert any(c.count() for c in p.hl.values())


def test_psi_surjections_audit():
    p = plan()
    rng = random.Random(0)
    for (c, d), T in sorted(p.targets.items()):
        for b, cls in sorted(p.hl.items()):
            if not cls.count() or p.psi[b] != d:
                continue
            for _ in range(50):
                t = T.unrank(rng.randrange(T.count()))
                r = T.rank(t)
                assert r < cls.count()
                u = cls.unrank(r)
                assert T.unrank(cls.rank(u) % T.count()) == t


def test_fillers_connect():
    p = plan()
    for (c, d, j), w in p.phi_fill.items():
        assert len(w) == j and w[0] == c and w[-1] == d and in_language(p.Y, w)
        assert 2 * p.N <= j <= 2 * p.N + 2 * p.I


def test_plan_infeasible_when_entropy_too_small():
    with pytest.raises(PlanInfeasible):
        build_plan(golden_mean(), full_shift("012"))


def test_plan_document_is_plain():
    doc = plan().to_document()
    assert doc["retract_bound"] == 68 and doc["radius"] == 3 * 4 + 2 * 22


# -- stretches -------------------------------------------------------------

@given(st.lists(st.sampled_from("zv"), min_size=1, max_size=60),
       st.lists(st.sampled_from("zv"), max_size=10), st.lists(st.sampled_from("zv"), max_size=10),
       st.integers(0, 2), st.integers(0, 1), st.integers(1, 4))
def test_stretch_boundaries_are_local(w, u, v, N, D, I):
    a = stretches(w, {"z"}, N, D, I)
    b = stretches(u + w + v, {"z"}, N, D, I)
    for s, e, k in a.segments:
        if s > 0 and e < len(w) - 1:
            assert (s + len(u), e + len(u), k) in b.segments


@given(st.lists(st.sampled_from("zv"), min_size=1, max_size=60),
       st.integers(0, 2), st.integers(0, 1), st.integers(1, 4))
def test_stretches_partition(w, N, D, I):
    segs = stretches(w, {"z"}, N, D, I).segments
    assert segs[0][0] == 0 and segs[-1][1] == len(w) - 1
    for (s, e, k), (s2, e2, k2) in zip(segs, segs[1:]):
        assert s2 == e + 1 and not (k == k2 == "low")
    for s, e, k in segs:
        if k == "low":
            assert all(c == "z" for c in w[s:e + 1]) and e - s + 1 > 2 * N + D


# -- the marker code -------------------------------------------------------

def test_marker_code_window():
    p, c = plan(), code()
    assert c.memory == p.radius + p.offset
    assert c.anticipation == p.radius + p.R - 1 - p.offset


def test_restriction_to_z_is_pi():
    p, c = plan(), code()
    rng = random.Random(1)
    n = c.window + 8
    for _ in range(100):
        w = _random_word(p.Z, rng, n)
        inner = w[c.memory - p.pi.memory:len(w) - c.anticipation + p.pi.anticipation]
        assert apply(c, w, check=False) == apply(p.pi, inner, check=False)


def test_v_point_maps_by_psi():
    p, c = plan(), code()
    rng = random.Random(2)
    for _ in range(20):
        w = _random_word(p.V.presentation, rng, c.window + 5)
        img = apply(c, w, check=False)
        rec = [join_symbols(w[j:j + p.R]) for j in range(len(w) - p.R + 1)]
        expect = [p.psi[s] for s in rec[c.memory - p.offset:][:len(img)]]
        assert list(img) == expect


def _mixed_word(rng, n):
    w = []
    while len(w) < n:
        kind = rng.choice("zvr")
        L = rng.randint(1, 40)
        for _ in range(L):
            if kind == "z":
                w.append("1" if w and w[-1] != "1" and rng.random() < 0.4 else "0")
            elif kind == "v":
                w.append("2" if not w or w[-1] != "2" or rng.random() < 0.5 else rng.choice("01"))
            else:
                w.append(rng.choice("012"))
    return tuple(w[:n])


def test_images_are_codomain_words():
    c = code()
    rng = random.Random(3)
    for _ in range(100):
        assert in_language(golden_mean(), apply(c, _mixed_word(rng, c.window + 30), check=False))


def test_decoder_is_local():
    p = plan()
    d = _Decoder(p)
    M, E = p.radius, 30
    rng = random.Random(4)
    for _ in range(300):
        w = _mixed_word(rng, 2 * (M + E) + p.R)
        rec = tuple(join_symbols(w[j:j + p.R]) for j in range(len(w) - p.R + 1))
        assert d.center(rec, M + E) == d.center(rec[E:E + 2 * M + 1], M)


# -- periodic reduction and the pipeline -----------------------------------

def test_periodic_reduction_example():
    X = doubled_two_state()
    phi = reduce_periodic(X, two_cycle())
    assert is_factor_onto(phi).ok
    rng = random.Random(5)
    for _ in range(20):
        w = _random_word(X, rng, 20 + phi.window)
        img = apply(phi, w, check=False)
        assert apply(phi, w[2:], check=False) == img[2:]


def test_periodic_condition_failure():
    with pytest.raises(ConditionFailed) as e:
        construct_factor(full_shift("01"), two_cycle())
    assert str(e.value).startswith("periodic condition")


def test_construct_point_target():
    c, p = construct_factor(full_shift("01"), full_shift("a"))
    assert p is None and is_factor_onto(c).ok


def test_construct_mixing_uses_marker_code():
    c, p = construct_factor(full_shift("012"), golden_mean())
    assert p is not None and c.window == code().window
