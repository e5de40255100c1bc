"""Fixtures for the worked examples and the S-gap classifier."""

from math import gcd, isqrt

from .codes import SlidingBlockCode, apply, is_factor_onto
from .errors import UnknownGallery
from .points import EPPoint
from .presentations import (as_labeled, cycle, even_shift, full_shift, labeled, sgap_explicit,
                            sgap_rule)
from .spectral import periodic_condition


# -- fixtures --------------------------------------------------------------

def yoo_shift():
    """Alphabet {1, 1', 2, 3} with the words 1' 2^n 3 forbidden."""
    return labeled(["P", "Q"], [
        ("p1", "P", "P", "1"), ("p2", "P", "P", "2"), ("p3", "P", "P", "3"),
        ("pb", "P", "Q", "1'"), ("q2", "Q", "Q", "2"), ("q1", "Q", "P", "1"),
        ("qb", "Q", "Q", "1'"),
    ], ["1", "1'", "2", "3"])


def yoo_code():
    X = yoo_shift()
    return SlidingBlockCode(X, full_shift("123"), 0, 0,
                            {("1",): "1", ("1'",): "1", ("2",): "2", ("3",): "3"})


def even_cover():
    """The edge shift of the even shift's minimal right-resolving
    presentation, mapped to the even shift by its labels."""
    E = even_shift()
    X = as_labeled(E.base)
    return SlidingBlockCode(X, E, 0, 0, {(e,): E.labels[e] for e, _, _ in E.base.edges})


def two_cycle():
    return cycle("ab")


def doubled_two_state():
    """Edge shift of [[0,2],[2,0]]; edges 1, 2 leave state 0 and 3, 4 return."""
    return labeled(["0", "1"], [("1", "0", "1", "1"), ("2", "0", "1", "2"),
                                ("3", "1", "0", "3"), ("4", "1", "0", "4")])


def extension_fail():
    """(X, the subshift of the two orbits (13) and (24), the code on it)."""
    X = doubled_two_state()
    Xt = labeled(["A", "B", "C", "D"], [("1", "A", "B", "1"), ("3", "B", "A", "3"),
                                        ("2", "C", "D", "2"), ("4", "D", "C", "4")])
    phi = SlidingBlockCode(Xt, two_cycle(), 0, 0,
                           {("1",): "a", ("3",): "b", ("2",): "b", ("4",): "a"})
    return X, Xt, phi


def w1_code_rule(block):
    """3-block map: abc -> b, bca -> c, anything else -> a."""
    return {("a", "b", "c"): "b", ("b", "c", "a"): "c"}.get(tuple(block), "a")


def w1_admissible(word):
    """Is word a subword of a concatenation of the blocks a b^k c^k?"""
    parts = "".join(word).split("a")
    shapes = [_bc(p) for p in parts]
    if any(sh is None for sh in shapes):
        return False
    if len(parts) == 1:
        return True
    i, j = shapes[0]
    if i and i > j:
        return False
    if any(i != j for i, j in shapes[1:-1]):
        return False
    i, j = shapes[-1]
    return j <= i


def _bc(s):
    """(i, j) when s = b^i c^j, else None."""
    i = len(s) - len(s.lstrip("b"))
    rest = s[i:]
    if rest.strip("c"):
        return None
    return i, len(rest)


# -- S-gap classification --------------------------------------------------

def sgap_fixture(name, bound=10 ** 4):
    """Named S-sets used by the gallery."""
    if name == "one-two":
        return sgap_explicit([1, 2], name)
    if name == "odds":
        return sgap_rule(lambda n: n % 2 == 1, bound, name)
    if name == "evens":
        return sgap_rule(lambda n: n % 2 == 0, bound, name)
    if name == "powers-of-two":
        return sgap_rule(lambda n: n > 0 and n & (n - 1) == 0, bound, name)
    if name == "odd-minus-digit-multiples":
        # odd n, dropping multiples of k inside (10^(k-1), 10^k)
        return sgap_rule(lambda n: n % 2 == 1 and not (n > 1 and n % len(str(n)) == 0),
                         bound, name)
    raise UnknownGallery(name)


SGAP_FIXTURES = ("one-two", "odds", "evens", "powers-of-two", "odd-minus-digit-multiples")


def sgap_classify(S, gap_cap=None):
    """Almost specification, mixing and specification of the S-gap shift.

    Explicit finite sets are decided exactly.  Rule-based sets use recorded
    metadata when present, otherwise a scan up to S.bound: a largest gap above
    gap_cap (default sqrt(bound)) reads as unbounded gaps, and the gcd of the
    scanned n + 1 is an upper bound for the true gcd (so gcd 1 is exact)."""
    gaps = S.gaps()
    if not gaps:
        return {"aspe": "no", "mixing": "no", "spec": "no", "basis": "empty"}
    g = 0
    for n in gaps:
        g = gcd(g, n + 1)
    diffs = [b - a for a, b in zip(gaps, gaps[1:])]
    widest = max(diffs, default=0)
    out = {"gcd": g, "max_gap": widest, "scanned_to": S.bound}
    if S.kind == "explicit":
        aspe, basis = True, "exact (finite S)"
    elif S.sup_gap is not None:
        aspe, basis = S.sup_gap != float("inf"), "metadata"
    else:
        cap = isqrt(S.bound) if gap_cap is None else gap_cap
        tail = S.bound - gaps[-1]
        aspe = max(widest, tail) <= cap
        basis = f"bounded scan to {S.bound}, gap cap {cap}"
        out["gap_cap"] = cap
    if S.kind == "rule" and S.gcd is not None:
        g = S.gcd
        out["gcd"] = g
    mixing = g == 1
    out.update({"aspe": "yes" if aspe else "no", "mixing": "yes" if mixing else "no",
                "spec": "yes" if aspe and mixing else "no", "basis": basis})
    return out


# -- gallery ---------------------------------------------------------------

def _claim(name, expected, observed, status="decided"):
    return {"claim": name, "expected": expected, "observed": observed,
            "match": expected == observed, "status": status}


def gallery_sgap(bound=10 ** 4):
    expect = {"one-two": ("yes", "yes", "yes"), "odds": ("yes", "no", "no"),
              "evens": ("yes", "yes", "yes"), "powers-of-two": ("no", "yes", "no"),
              "odd-minus-digit-multiples": ("yes", "no", "no")}
    claims = []
    for name in SGAP_FIXTURES:
        r = sgap_classify(sgap_fixture(name, bound))
        status = "decided" if r["basis"].startswith("exact") else "bounded"
        claims.append(_claim(f"{name}: aspe/mixing/spec", list(expect[name]),
                             [r["aspe"], r["mixing"], r["spec"]], status))
    return claims


def gallery_yoo(horizon=20, n_max=6, seed=0):
    from .verify import bounded_falsify
    code = yoo_code()
    claims = []
    rep = bounded_falsify(code, "left-retract", horizon=horizon, n=0, seed=seed, count=100)
    claims.append(_claim("left retract 0 consistent", "unknown-bounded", rep.verdict,
                         "witness-only"))
    refuted = []
    for n in range(n_max + 1):
        x = EPPoint(("1'",), ("2",) * n + ("2",), ("2",), n)
        y = EPPoint(("1",), ("2",) * n + ("2",), ("3",), n)
        r = bounded_falsify(code, "right-retract", witnesses=[(x, y)], n=n)
        refuted.append(r.verdict == "no")
    claims.append(_claim(f"right retract refuted for every n <= {n_max}", True, all(refuted)))
    fam = [EPPoint(("1",), ("1",) + ("2",) * m, ("3",), 0) for m in range(horizon + 1)]
    y = EPPoint(("1",), ("1",), ("2",), 0)
    r = bounded_falsify(code, "open-cylinder", horizon=horizon,
                        witnesses=[({0: "1'"}, y, fam)])
    claims.append(_claim(f"cylinder [1'] image contains no ball up to radius {horizon}",
                         list(range(horizon + 1)), r.params["refuted_radii"], "witness-only"))
    return claims


def gallery_even_cover():
    from .verify import open_decision
    rep = open_decision(even_cover())
    return [_claim("even cover open", "no", rep.verdict),
            _claim("even cover bi-continuing", "no", rep.params["bi_continuing"])]


def gallery_extension_fail():
    from .construct import construct_factor
    from .verify import cyclic_condition
    X, Xt, phi = extension_fail()
    Y = two_cycle()
    code, _ = construct_factor(X, Y)
    return [_claim("periodic condition", True, periodic_condition(X.base, Y.base).ok),
            _claim("cyclic condition", False, cyclic_condition(phi, X).ok),
            _claim("Y is a factor of X (constructed code onto Y)", True,
                   is_factor_onto(code).ok)]


def gallery_w1(k_max=6, depth=6):
    """Negative witnesses for the 3-block code on the coded system of a b^k c^k."""
    code = SlidingBlockCode(full_shift("abc"), full_shift("abc"), 1, 1, w1_code_rule)
    ok = all(apply(code, ("a",) + ("b",) * k + ("c",) * k + ("a",), check=False)
             == ("a",) * (2 * k) for k in range(2, k_max + 1))
    claims = [_claim(f"b^k c^k maps to a^(2k) for 2 <= k <= {k_max}", True, ok)]
    return claims + [_claim("no lift of a^inf.(abc)^inf left asymptotic to b^inf "
                            f"(free from -{depth}, checked to +{depth})", False,
                            _w1_lift(depth), "witness-only")]


def _w1_lift(depth):
    """Search z = b^inf z_[-d..H] with phi(z) = a^inf.(abc)^inf on [-d-1, H-1]."""
    def y(i):
        return "a" if i < 0 else "abc"[i % 3]

    start = -depth - 2
    stack = [("b", "b")]
    while stack:
        z = stack.pop()
        pos = start + len(z)
        if pos > depth:
            return True
        free = pos > -depth
        for c in ("abc" if free else "b"):
            w = z + (c,)
            if not w1_admissible(("b",) * 4 + w):
                continue
            # image at pos - 1 is now determined
            if len(w) >= 3 and w1_code_rule(w[-3:]) != y(pos - 1):
                continue
            stack.append(w)
    return False


GALLERY = {
    "sgap": gallery_sgap,
    "yoo": gallery_yoo,
    "evencover": gallery_even_cover,
    "extensionfail": gallery_extension_fail,
    "w1": gallery_w1,
}


def run_gallery(name, **kw):
    if name not in GALLERY:
        raise UnknownGallery(name)
    return GALLERY[name](**kw)
