"""Decision procedures for closing, continuing and open codes, and the
factor-existence and cyclic conditions."""

import random
from collections import deque
from dataclasses import dataclass, field

from .codes import SlidingBlockCode, image_presentation, is_factor_onto, recode_one_block
from .errors import (EntropyTie, MalformedWitness, NotIrreducible, NotSFT, NotSFTDomain,
                     NotSubshift, ShiftError)
from .graphs import components, period_classes, strongly_connected
from .language import (Answer, classify, definite_cover, in_language, is_synchronizing_word,
                       minimal_automaton, words)
from .points import EPPoint, agree, contains, image, lift_exists
from .presentations import as_labeled, trim_essential
from .spectral import _cover_base, entropy_bracket, periodic_condition

SCHEMA_VERSION = 1


@dataclass
class VerificationReport:
    property: str
    verdict: str
    params: dict = field(default_factory=dict)
    witness: object = None
    assumptions: list = field(default_factory=list)

    def to_document(self):
        return {"property": self.property, "verdict": self.verdict,
                "params": _plain(self.params), "witness": _plain(self.witness),
                "assumptions": list(self.assumptions)}


def _plain(v):
    if isinstance(v, EPPoint):
        return v.text()
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (frozenset, set)):
        return sorted(_plain(x) for x in v)
    return v


# -- code plumbing ---------------------------------------------------------

def one_block(code):
    if code.is_one_block:
        return code
    ob, _ = recode_one_block(code)
    return ob


def reversed_code(code):
    """The same 1-block symbol map between the time-reversed shifts."""
    code = one_block(code)
    table = code.table if code.table is not None else code.rule
    return SlidingBlockCode(code.domain.reversed(), code.codomain.reversed(), 0, 0,
                            table, validate=False)


def _oriented(code, side):
    if side == "right":
        return one_block(code)
    if side == "left":
        return reversed_code(code)
    raise ShiftError(f"side must be 'left' or 'right', not {side!r}")


class _Covers:
    """Definite covers of domain and codomain plus the compatible-pair data."""

    def __init__(self, code):
        self.code = code
        if not classify(code.domain)["sft"]:
            raise NotSFT("domain is not of finite type")
        if not classify(code.codomain)["sft"]:
            raise NotSFT("codomain is not of finite type")
        self.FX = definite_cover(code.domain)
        self.FY = definite_cover(code.codomain)
        self.img = {a: code.symbol((a,)) for a in self.FX.alphabet
                    if any(lab == a for lab in self.FX.labels.values())}
        self.ymove = {q: {b: t for _, b, t in self.FY.moves[q]} for q in self.FY.base.states}
        self._good = {}
        self._compatible = None

    def step(self, S, b):
        return frozenset(t for s in S for _, a, t in self.FX.moves[s] if self.img[a] == b)

    def out_images(self, S):
        return sorted({self.img[a] for s in S for _, a, _ in self.FX.moves[s]})

    def product(self):
        succ = {}
        for v in self.FX.base.states:
            for r in self.FY.base.states:
                succ[(v, r)] = []
        for (v, r) in succ:
            for e, a, t in self.FX.moves[v]:
                u = self.ymove[r].get(self.img[a])
                if u is not None:
                    succ[(v, r)].append(((t, u), e, a))
        return succ

    def compatible(self):
        """Pairs (domain state, codomain state) reachable by an infinite past."""
        if self._compatible is None:
            succ = self.product()
            nodes = list(succ)
            edges = [(None, s, t) for s in nodes for t, _, _ in succ[s]]
            seen = set()
            for comp in components(nodes, edges):
                seen.update(comp)
            stack = list(seen)
            while stack:
                s = stack.pop()
                for t, _, _ in succ[s]:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
            self._succ = succ
            self._cycle_nodes = set().union(*[set(c) for c in components(nodes, edges)]) \
                if nodes else set()
            self._compatible = sorted(seen)
        return self._compatible

    def good(self, S, q):
        """Can every codomain future from q be lifted from some state of S?"""
        key = (S, q)
        if key in self._good:
            return self._good[key]
        nodes = {key: []}
        order = [key]
        dead = set()
        i = 0
        while i < len(order):
            S1, q1 = node = order[i]
            i += 1
            for b, q2 in sorted(self.ymove[q1].items()):
                S2 = self.step(S1, b)
                if not S2:
                    dead.add(node)
                    continue
                nxt = (S2, q2)
                if nxt in self._good:
                    if not self._good[nxt]:
                        dead.add(node)
                    continue
                if nxt not in nodes:
                    nodes[nxt] = []
                    order.append(nxt)
                nodes[nxt].append(node)
        bad = set(dead)
        stack = list(dead)
        while stack:
            n = stack.pop()
            for p in nodes[n]:
                if p not in bad:
                    bad.add(p)
                    stack.append(p)
        for n in order:
            self._good[n] = n not in bad
        return self._good[key]

    def dead_word(self, S, q):
        """Shortest codomain word from q that cannot be lifted from S."""
        prev = {(S, q): None}
        queue = deque([(S, q)])
        while queue:
            S1, q1 = node = queue.popleft()
            for b, q2 in sorted(self.ymove[q1].items()):
                S2 = self.step(S1, b)
                word = [b]
                if not S2:
                    n = node
                    while prev[n] is not None:
                        n, c = prev[n]
                        word.append(c)
                    return tuple(reversed(word)), q2
                if (S2, q2) not in prev:
                    prev[(S2, q2)] = (node, b)
                    queue.append((S2, q2))
        return None


# -- lifting game ----------------------------------------------------------

@dataclass(frozen=True)
class LiftingGameState:
    W: frozenset
    reachable: frozenset


def lifting_game(code, side="right"):
    """Greatest fixpoint W of the online matching game on the definite covers:
    (u, q) in W iff every codomain move from q is answered by a domain move from
    u with the same image and landing back in W."""
    cv = _Covers(_oriented(code, side))
    W = {(u, q) for u in cv.FX.base.states for q in cv.FY.base.states}
    changed = True
    while changed:
        changed = False
        for u, q in sorted(W):
            for b, q2 in cv.ymove[q].items():
                if not any(cv.img[a] == b and (t, q2) in W for _, a, t in cv.FX.moves[u]):
                    W.discard((u, q))
                    changed = True
                    break
    return LiftingGameState(frozenset(W), frozenset(cv.compatible()))


# -- continuing retracts ---------------------------------------------------

@dataclass
class RetractSearch:
    n: object
    status: str          # found | none | cap
    cap: int
    witness: object = None


def _levels(cv):
    """Yield (n, level) where level maps (S, q) to a representative (v, r, path)."""
    level = {}
    for v, r in cv.compatible():
        level.setdefault((frozenset([v]), r), (v, r, ()))
    n = 0
    while True:
        yield n, level
        nxt = {}
        for (S, q), (v, r, path) in sorted(level.items(), key=lambda kv: _key(kv[0])):
            for b in cv.out_images(S):
                q2 = cv.ymove[q].get(b)
                if q2 is None:
                    continue
                S2 = cv.step(S, b)
                if (S2, q2) not in nxt:
                    nxt[(S2, q2)] = (v, r, path + (b,))
        level = nxt
        n += 1


def _key(node):
    S, q = node
    return (sorted(S), q)


def _check_level(cv, level):
    for node in sorted(level, key=_key):
        if not cv.good(*node):
            return node
    return None


def continuing_retract(code, side, n):
    """Is n a right (or left) continuing retract?  Exact for SFT domain and codomain.

    Returns Answer(ok, witness); a failing witness carries the domain state v,
    the image word w of length n and an eventually periodic pair (x, y).
    """
    oriented = _oriented(code, side)
    cv = _Covers(oriented)
    for k, level in _levels(cv):
        if k < n:
            continue
        bad = _check_level(cv, level)
        if bad is None:
            return Answer(True, None)
        return Answer(False, _witness(cv, bad, level[bad], side, n))


def search_retract(code, side, n_cap=64):
    """Least retract n <= n_cap, or a definitive 'none' when the level sets cycle."""
    cv = _Covers(_oriented(code, side))
    seen = set()
    first_bad = None
    for n, level in _levels(cv):
        bad = _check_level(cv, level)
        if bad is None:
            return RetractSearch(n, "found", n_cap)
        if first_bad is None or n <= n_cap:
            first_bad = (bad, level[bad], n)
        frozen = frozenset(level)
        if frozen in seen:
            b, rep, m = first_bad
            return RetractSearch(None, "none", n_cap, _witness(cv, b, rep, side, m))
        seen.add(frozen)
        if n >= n_cap:
            b, rep, m = first_bad
            return RetractSearch(None, "cap", n_cap, _witness(cv, b, rep, side, m))


def _forward_lasso(moves, s):
    """(transient labels, cycle labels) of the lexicographically first walk from s."""
    seen = {s: 0}
    labels = []
    while True:
        _, a, t = min(moves[s], key=lambda m: (m[1], m[0]))
        labels.append(a)
        s = t
        if s in seen:
            k = seen[s]
            return tuple(labels[:k]), tuple(labels[k:])
        seen[s] = len(labels)


def _past_into(cv, node):
    """(cycle labels, transient labels) of an infinite past ending at node."""
    succ = cv._succ
    pred = {}
    for s, outs in succ.items():
        for t, e, a in outs:
            pred.setdefault(t, []).append((s, a))
    # backward BFS to a node lying on a cycle
    prev = {node: None}
    queue = deque([node])
    while queue:
        s = queue.popleft()
        if s in cv._cycle_nodes:
            break
        for p, a in sorted(pred.get(s, []), key=lambda x: (x[1], str(x[0]))):
            if p not in prev:
                prev[p] = (s, a)
                queue.append(p)
    transient = []
    start = s
    n = s
    while prev[n] is not None:
        n, a = prev[n]
        transient.append(a)
    # a cycle through start
    back = {start: None}
    queue = deque([start])
    cycle = None
    while queue and cycle is None:
        s = queue.popleft()
        for t, _, a in sorted(succ[s], key=lambda x: (x[2], str(x[0]))):
            if t == start:
                word = [a]
                m = s
                while back[m] is not None:
                    m, c = back[m]
                    word.append(c)
                cycle = tuple(reversed(word))
                break
            if t not in back:
                back[t] = (s, a)
                queue.append(t)
    return cycle, tuple(transient)


def _witness(cv, node, rep, side, n):
    v, r, w = rep
    S, q = node
    info = {"state": v, "image_word": list(w), "n": n}
    try:
        cycle, transient = _past_into(cv, (v, r))
        # a domain path from v with image w
        path = []
        s = v
        for b in w:
            e, a, t = min((m for m in cv.FX.moves[s] if cv.img[m[1]] == b
                           and _reaches(cv, m[2], w[len(path) + 1:])),
                          key=lambda m: (m[1], m[0]))
            path.append(a)
            s = t
        xt, xc = _forward_lasso(cv.FX.moves, s)
        dead = cv.dead_word(S, q)
        bword, qend = dead
        yt, yc = _forward_lasso(cv.FY.moves, qend)
        past = cycle + transient + tuple(path)
        x = EPPoint(cycle, past + xt, xc if xc else xt, len(past) - 1)
        ypast = tuple(cv.img[a] for a in past)
        y = EPPoint(tuple(cv.img[a] for a in cycle), ypast + bword + yt, yc, len(past) - 1)
        if side == "left":
            x, y = x.reversed(), y.reversed()
        info["x"], info["y"] = x, y
    except (KeyError, ValueError, TypeError):
        pass
    return info


def _reaches(cv, s, rest):
    S = frozenset([s])
    for b in rest:
        S = cv.step(S, b)
        if not S:
            return False
    return True


# -- closing ---------------------------------------------------------------

def closing_delay(code, side="right"):
    """Least delay D of right (left) closing, or None when not closing."""
    cv_code = _oriented(code, side)
    F = definite_cover(cv_code.domain)
    img = {}
    for lab in set(F.labels.values()):
        img[lab] = cv_code.symbol((lab,))
    succ = {}

    def moves(p, q):
        if (p, q) not in succ:
            succ[(p, q)] = [(t, u) for _, a, t in F.moves[p] for _, b, u in F.moves[q]
                            if img[a] == img[b]]
        return succ[(p, q)]

    starts = set()
    for s in F.base.states:
        for e, a, t in F.moves[s]:
            for f, b, u in F.moves[s]:
                if e < f and img[a] == img[b]:
                    starts.add((t, u))
    if not starts:
        return 0
    depth, state = {}, {}
    for root in sorted(starts):
        if root in depth:
            continue
        stack = [(root, iter(moves(*root)))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                state[node] = 2
                depth[node] = 1 + max((depth[c] for c in moves(*node)), default=0)
                continue
            if state.get(child) == 1:
                return None
            if state.get(child) is None:
                state[child] = 1
                stack.append((child, iter(moves(*child))))
    # a divergent first step followed by depth-1 more steps
    return max(depth[s] for s in starts)


# -- lifting length --------------------------------------------------------

def validate_lifting_length(code, l, radius=1, horizon=2, cap=200000):
    """Finite check of the uniform lifting length l: for every u in B_{2k+1}
    (k <= radius) and every codomain word of radius k+l+horizon whose central
    radius-(k+l) block is an image of a u-centred word, some u-centred domain
    word maps onto it.  Returns Answer(ok, witness (u, word))."""
    from .language import _automaton
    code = one_block(code)
    X = trim_essential(code.domain)
    ydfa = _automaton(code.codomain)
    img = {a: code.symbol((a,)) for a in set(X.labels.values())}
    everything = frozenset(X.base.states)

    def step(S, b, forced):
        return frozenset(t for s in S for _, a, t in X.moves[s]
                         if img[a] == b and (forced is None or a == forced))

    for k in range(radius + 1):
        inner = k + l
        K = inner + horizon
        for u in words(X, 2 * k + 1, cap):
            # (codomain state, big, small): big tracks lifts of the whole word,
            # small tracks whether the inner block is an image at all
            layer = {(0, everything, None): ()}
            for pos in range(-K, K + 1):
                forced = u[pos + k] if -k <= pos <= k else None
                nxt = {}
                for (ys, big, small), yw in layer.items():
                    for b, ys2 in sorted(ydfa.delta[ys].items()):
                        small2 = everything if pos == -inner else small
                        if -inner <= pos <= inner:
                            small2 = step(small2, b, forced)
                            if not small2:
                                continue
                        key = (ys2, step(big, b, forced), small2)
                        nxt.setdefault(key, yw + (b,))
                layer = nxt
                if len(layer) > cap:
                    return Answer(True, {"truncated": True})
            for (ys, big, small), yw in sorted(layer.items(), key=lambda kv: kv[1]):
                if not big:
                    return Answer(False, {"u": list(u), "word": list(yw), "radius": K})
    return Answer(True, None)


# -- openness --------------------------------------------------------------

def open_decision(code, retract_cap=64, radius=1, horizon=2):
    """Openness and bi-continuity of a code from an SFT onto its image."""
    assumptions = []
    if not code.is_one_block:
        assumptions.append("code recoded to a 1-block code on a higher block presentation")
    code = one_block(code)
    if not classify(code.domain)["sft"]:
        raise NotSFTDomain("domain is strictly sofic; use bounded_falsify")
    Yimg = image_presentation(code)
    cls = classify(Yimg)
    if not cls["sft"]:
        witness = {"reason": "image is not of finite type",
                   "nonsynchronizing": _nonsync_witness(Yimg)}
        return VerificationReport("open", "no",
                                  {"bi_continuing": "no", "image_sft": False},
                                  witness, assumptions)
    onto_image = SlidingBlockCode(code.domain, Yimg, 0, 0,
                                  code.table if code.table is not None else code.rule,
                                  validate=False)
    right = search_retract(onto_image, "right", retract_cap)
    left = search_retract(onto_image, "left", retract_cap)
    params = {"image_sft": True, "right_retract": right.n, "left_retract": left.n,
              "retract_cap": retract_cap}
    if right.status == "found" and left.status == "found":
        n = max(right.n, left.n)
        params["bi_retract"] = n
        params["bi_continuing"] = "yes"
        check = validate_lifting_length(onto_image, n, radius, horizon)
        params["lifting_length_check"] = {"radius": radius, "horizon": horizon}
        if check.ok and check.witness:
            assumptions.append("lifting length check stopped at its cap; l = n rests on "
                               "the bi-retract alone")
        if check.ok:
            params["lifting_length"] = n
            return VerificationReport("open", "yes", params, {"lifting_length": n}, assumptions)
        return VerificationReport("open", "no", params,
                                  {"lifting_length_counterexample": check.witness}, assumptions)
    for side, res in (("right", right), ("left", left)):
        if res.status == "none":
            params["bi_continuing"] = "no"
            return VerificationReport("open", "no", params,
                                      {"side": side, "retract_failure": res.witness},
                                      assumptions)
    params["bi_continuing"] = "unknown-bounded"
    assumptions.append(f"no retract found up to {retract_cap}")
    return VerificationReport("open", "unknown-bounded", params, None, assumptions)


def bict_report(open_report):
    """The bi-continuity verdict carried by an open_decision report."""
    p = dict(open_report.params)
    return VerificationReport("bi-continuing", p.get("bi_continuing", "unknown-bounded"),
                              p, open_report.witness, open_report.assumptions)


def _nonsync_witness(Y):
    M = minimal_automaton(Y)
    n = len(M.base.states) ** 2 + 1
    from .language import _automaton
    dfa = _automaton(Y)
    # walk the pair graph for a long word that keeps two follower classes apart
    cls = dfa.classes()
    rep = {}
    for i, c in enumerate(cls):
        rep.setdefault(c, i)
    reps = sorted(rep.values())
    for p in reps:
        for q in reps:
            if cls[p] >= cls[q]:
                continue
            word = []
            a_, b_ = p, q
            ok = True
            seen = set()
            while len(word) < n and ok:
                ok = False
                for sym in dfa.alphabet:
                    t, u = dfa.delta[a_].get(sym), dfa.delta[b_].get(sym)
                    if t is not None and u is not None and cls[t] != cls[u]:
                        word.append(sym)
                        a_, b_ = t, u
                        ok = True
                        break
                if (cls[a_], cls[b_]) in seen and len(word) >= n:
                    break
                seen.add((cls[a_], cls[b_]))
            if len(word) >= n:
                ans = is_synchronizing_word(Y, tuple(word))
                if not ans.ok:
                    return {"length": len(word), "certificate": [list(x) for x in ans.witness]}
    return None


# -- bounded falsification -------------------------------------------------

def random_point(X, rng, transient=4):
    """A random eventually periodic point of the shift presented by X."""
    X = trim_essential(as_labeled(X))
    s = rng.choice(list(X.base.states))

    def lasso(moves, s, steps):
        labels = []
        for _ in range(steps):
            _, a, t = rng.choice(moves[s])
            labels.append(a)
            s = t
        seen = {s: len(labels)}
        while True:
            _, a, t = rng.choice(moves[s])
            labels.append(a)
            s = t
            if s in seen:
                k = seen[s]
                return tuple(labels[:k]), tuple(labels[k:])
            seen[s] = len(labels)

    back = {st: [(e, a, src) for e, a, src in []] for st in X.base.states}
    for e, src, dst in X.base.edges:
        back[dst].append((e, X.labels[e], src))
    ft, fc = lasso(X.moves, s, rng.randint(0, transient))
    bt, bc = lasso(back, s, rng.randint(0, transient))
    left = tuple(reversed(bc))
    past = tuple(reversed(bt))
    word = left + past + ft
    origin = rng.randint(0, len(word) - 1)
    return EPPoint(left, word, fc, origin)


def _random_pairs(code, side, n, rng, count, horizon):
    code1 = one_block(code)
    Y = code1.codomain
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        x = random_point(code1.domain, rng, horizon)
        fx = image(code1, x)
        other = random_point(Y, rng, horizon)
        if side == "right":
            span = range(fx.lo - len(fx.left), 1)
            word = tuple(fx.at(i) for i in span) + tuple(other.at(i) for i in range(1, other.hi + 1))
            y = EPPoint(fx.left, word, other.right, -span.start)
        else:
            span = range(0, fx.hi + len(fx.right) + 1)
            word = tuple(other.at(i) for i in range(other.lo, 0)) + tuple(fx.at(i) for i in span)
            y = EPPoint(other.left, word, fx.right, -other.lo)
        if contains(Y, y):
            out.append((x, y))
    return out


def bounded_falsify(code, prop, horizon=20, witnesses=None, n=0, seed=0, count=200):
    """Check a property on eventually periodic witness points.

    prop is 'right-retract' / 'left-retract' (parameter n), 'lifting-length'
    (parameter n = l; witnesses are (cylinder, y_inside, y_outside) triples) or
    'open-cylinder' (witnesses: (cylinder, y, [y_1, y_2, ...])).  The verdict
    is 'no' with a witness or 'unknown-bounded'.
    """
    code1 = one_block(code)
    if prop in ("right-retract", "left-retract"):
        side = prop.split("-")[0]
        if witnesses is None:
            witnesses = _random_pairs(code1, side, n, random.Random(seed), count, horizon)
            source = f"{len(witnesses)} random eventually periodic pairs (seed {seed})"
        else:
            source = f"{len(witnesses)} supplied pairs"
        for x, y in witnesses:
            _check_pair(code1, x, y, side)
            if side == "right":
                ok = lift_exists(code1, y, fixed=x, fixed_upto=-n)
            else:
                ok = lift_exists(code1, y, fixed=x, fixed_from=n)
            if not ok:
                return VerificationReport(prop, "no", {"n": n}, {"x": x, "y": y},
                                          [f"checked {source}"])
        return VerificationReport(prop, "unknown-bounded", {"n": n, "horizon": horizon},
                                  None, [f"no counterexample among {source}"])
    if prop == "lifting-length":
        for cyl, inside, outside in witnesses or ():
            if not lift_exists(code1, inside, cylinder=cyl):
                raise MalformedWitness("reference point is not in the cylinder image")
            r = max(abs(i) for i in cyl) + n
            if agree(inside, outside, -r, r) and not lift_exists(code1, outside, cylinder=cyl):
                return VerificationReport(prop, "no", {"l": n},
                                          {"cylinder": cyl, "y": inside, "y_outside": outside})
        return VerificationReport(prop, "unknown-bounded", {"l": n}, None,
                                  ["no supplied witness refutes this lifting length"])
    if prop == "open-cylinder":
        refuted = []
        for cyl, y, family in witnesses or ():
            if not lift_exists(code1, y, cylinder=cyl):
                raise MalformedWitness("reference point is not in the cylinder image")
            for m, z in enumerate(family[:horizon + 1]):
                if agree(y, z, -m, m) and not lift_exists(code1, z, cylinder=cyl):
                    refuted.append(m)
        return VerificationReport(prop, "unknown-bounded",
                                  {"horizon": horizon, "refuted_radii": refuted},
                                  {"witnesses": [(c, y) for c, y, _ in witnesses or ()]},
                                  ["the cylinder image contains no ball of the refuted radii "
                                   "around the reference point; openness itself is not decided"])
    raise ShiftError(f"unknown property {prop!r}")


def _check_pair(code, x, y, side):
    if not contains(code.domain, x):
        raise MalformedWitness(f"x = {x.text()} is not a point of the domain")
    if not contains(code.codomain, y):
        raise MalformedWitness(f"y = {y.text()} is not a point of the codomain")
    fx = image(code, x)
    same = agree(fx, y, hi=0) if side == "right" else agree(fx, y, lo=0)
    if not same:
        raise MalformedWitness("the pair does not satisfy the asymptotic premise")


# -- cyclic condition and factor existence ---------------------------------

def cyclic_condition(phi_tilde, X, check_len=8):
    """Is there j with phi_tilde(X~ cap D_0) inside E_j?  Returns Answer(ok, j)."""
    phi = one_block(phi_tilde)
    Xt = phi.domain
    X = as_labeled(X)
    for n in range(1, check_len + 1):
        for w in words(Xt, n):
            if not in_language(X, w):
                raise NotSubshift(f"word {w} of the subshift is not in X")
    FX = _cover_base(X)
    FY = _cover_base(phi.codomain)
    if not strongly_connected(FX.base.states, FX.base.edges) or \
            not strongly_connected(FY.base.states, FY.base.edges):
        raise NotIrreducible("cyclic condition needs irreducible shifts")
    p, phX = period_classes(list(FX.base.states), FX.base.edges)
    q, phY = period_classes(list(FY.base.states), FY.base.edges)
    if p % q:
        return Answer(False, {"reason": "per(Y) does not divide per(X)", "p": p, "q": q})
    # product of X~, the cover of X and the cover of Y along x and phi(x)
    Xt = trim_essential(Xt)
    nodes = [(a, b, c) for a in Xt.base.states for b in FX.base.states for c in FY.base.states]
    succ = {n: [] for n in nodes}
    for a, b, c in nodes:
        for _, s, a2 in Xt.moves[a]:
            for _, s2, b2 in FX.moves[b]:
                if s2 != s:
                    continue
                for _, t, c2 in FY.moves[c]:
                    if t == phi.symbol((s,)):
                        succ[(a, b, c)].append((a2, b2, c2))
    # states on bi-infinite paths: reachable from and reaching cycles
    from .points import _bi_infinite_through
    diffs = set()
    for n in nodes:
        if _bi_infinite_through(nodes, succ, [n]):
            diffs.add((phY[n[2]] - phX[n[1]]) % q)
    if len(diffs) <= 1:
        return Answer(True, diffs.pop() if diffs else 0)
    return Answer(False, {"phase_offsets": sorted(diffs), "p": p, "q": q})


def thomsen_condition(X, Y):
    """q | p and phase classes of X in different residues mod q never meet."""
    FX = _cover_base(X)
    FY = _cover_base(Y)
    p, phX = period_classes(list(FX.base.states), FX.base.edges)
    q, _ = period_classes(list(FY.base.states), FY.base.edges)
    if p % q:
        return Answer(False, {"p": p, "q": q, "reason": "q does not divide p"})
    nodes = [(s, t) for s in FX.base.states for t in FX.base.states]
    succ = {n: [] for n in nodes}
    for s, t in nodes:
        for _, a, s2 in FX.moves[s]:
            for _, b, t2 in FX.moves[t]:
                if a == b:
                    succ[(s, t)].append((s2, t2))
    from .points import _bi_infinite_through
    for s, t in nodes:
        if (phX[s] - phX[t]) % q and _bi_infinite_through(nodes, succ, [(s, t)]):
            return Answer(False, {"p": p, "q": q, "shared": (s, t)})
    return Answer(True, {"p": p, "q": q})


def factor_existence(X, Y, tol=1e-9):
    """Entropy, periodic and phase conditions for a lower entropy factor code."""
    X, Y = as_labeled(X), as_labeled(Y)
    hX, hY = entropy_bracket(X, tol), entropy_bracket(Y, tol)
    params = {"h_X": hX, "h_Y": hY}
    if hX[0] <= hY[1] and hY[0] <= hX[1]:
        raise EntropyTie(f"entropy brackets overlap: {hX} vs {hY}")
    clsX, clsY = classify(X), classify(Y)
    params["X"], params["Y"] = clsX, clsY
    assumptions = []
    if hX[0] <= hY[1]:
        return VerificationReport("factor", "no", params, {"reason": "h(X) <= h(Y)"})
    if not clsY["irreducible"] or not clsX["irreducible"]:
        raise NotIrreducible("factor existence needs irreducible X and Y")
    GX = definite_cover(X) if clsX["sft"] else _cover_base(X)
    if not clsX["sft"]:
        assumptions.append("periodic counts of X taken from its Fischer cover")
    GY = definite_cover(Y) if clsY["sft"] else _cover_base(Y)
    pc = periodic_condition(GX.base, GY.base)
    params["periodic_condition"] = pc.ok
    th = thomsen_condition(X, Y)
    params["thomsen"] = th.ok
    params["y_sft"] = clsY["sft"]
    exists = pc.ok and th.ok
    params["factor_exists"] = exists
    params["open_factor_exists"] = exists and clsY["sft"]
    witness = None
    if not pc.ok:
        witness = {"periodic_condition_fails_at": pc.witness}
    elif not th.ok:
        witness = th.witness
    elif not clsY["sft"]:
        witness = {"reason": "Y is not of finite type"}
    verdict = "yes" if params["open_factor_exists"] else "no"
    return VerificationReport("factor", verdict, params, witness, assumptions)


# -- certification of emitted codes ----------------------------------------

def _random_word(X, rng, length):
    X = trim_essential(as_labeled(X))
    s = rng.choice(sorted(X.base.states))
    out = []
    for _ in range(length):
        _, a, s = rng.choice(X.moves[s])
        out.append(a)
    return tuple(out)


def certify(code, retract_bound=None, exact_cap=20000, samples=200, horizon=20, seed=0):
    """Reports on factor / bi-continuing / open for an emitted code.

    Codes whose window has at most exact_cap admissible blocks are decided
    exactly on the 1-block recoding.  Larger codes only get sampled checks:
    images of random domain words must be codomain words, and the verdicts
    stay unknown-bounded."""
    from .codes import apply
    from .language import count_words
    total, _ = count_words(code.domain, code.window, cap=10 ** 12)
    params = {"window": code.window, "window_blocks": total}
    if total <= exact_cap:
        onto = is_factor_onto(code)
        reports = [VerificationReport("factor", "yes" if onto.ok else "no", dict(params),
                                      None if onto.ok else {"word": list(onto.witness)})]
        if not onto.ok:
            return reports
        op = open_decision(code)
        bict = bict_report(op)
        if retract_bound is not None:
            for side in ("right", "left"):
                ans = continuing_retract(code, side, retract_bound)
                bict.params[f"{side}_retract_at_bound"] = ans.ok
            bict.params["retract_bound"] = retract_bound
        return reports + [bict, op]
    rng = random.Random(seed)
    length = code.window + horizon
    for _ in range(samples):
        w = _random_word(code.domain, rng, length)
        img = apply(code, w, check=False)
        if not in_language(code.codomain, img):
            return [VerificationReport("factor", "no", dict(params),
                                       {"domain_word": list(w), "image": list(img)},
                                       ["the image of a domain word is not a codomain word"])]
    note = (f"window of {code.window} symbols has {total} admissible blocks, "
            f"beyond the exact limit {exact_cap}")
    sampled = f"images of {samples} random domain words of length {length} are codomain words"
    extra = {"retract_bound": retract_bound} if retract_bound is not None else {}
    return [VerificationReport("factor", "unknown-bounded", dict(params), None, [note, sampled]),
            VerificationReport("bi-continuing", "unknown-bounded", {**params, **extra}, None,
                               [note]),
            VerificationReport("open", "unknown-bounded", {**params, **extra}, None, [note])]
