"""Eventually periodic points and exact lift-existence checks.

A point ``EPPoint(left, word, right, origin)`` is
``... left left word right right ...`` with ``word[origin]`` at coordinate 0.
"""

from dataclasses import dataclass
from math import lcm

from .errors import MalformedWitness, ShiftError
from .presentations import as_labeled, as_word


@dataclass(frozen=True)
class EPPoint:
    left: tuple
    word: tuple
    right: tuple
    origin: int = 0

    def __post_init__(self):
        for name in ("left", "word", "right"):
            object.__setattr__(self, name, as_word(getattr(self, name)))
        if not self.left or not self.right:
            raise MalformedWitness("periodic parts must be nonempty")

    @classmethod
    def parse(cls, text):
        """'L^inf W.V R^inf' style: parse("1'|22.2|2") with '|' separating the
        periodic parts and '.' marking coordinate 0 (single-character symbols)."""
        try:
            left, mid, right = text.split("|")
        except ValueError:
            raise MalformedWitness(f"expected left|word|right, got {text!r}") from None
        if mid.count(".") != 1:
            raise MalformedWitness("the middle part needs exactly one '.'")
        pre, post = mid.split(".")
        if not post:
            post, right = right[0], right[1:] + right[0]
        return cls(_symbols(left), _symbols(pre) + _symbols(post), _symbols(right),
                   len(_symbols(pre)))

    @property
    def lo(self):
        return -self.origin

    @property
    def hi(self):
        return len(self.word) - self.origin - 1

    def at(self, i):
        j = i + self.origin
        if j < 0:
            return self.left[j % len(self.left)]
        if j >= len(self.word):
            return self.right[(j - len(self.word)) % len(self.right)]
        return self.word[j]

    def map(self, f):
        return EPPoint(tuple(f(a) for a in self.left), tuple(f(a) for a in self.word),
                       tuple(f(a) for a in self.right), self.origin)

    def reversed(self):
        return EPPoint(tuple(reversed(self.right)), tuple(reversed(self.word)),
                       tuple(reversed(self.left)), len(self.word) - 1 - self.origin)

    def text(self):
        def s(w):
            return "".join(w) if all(len(a) == 1 for a in w) else " ".join(w)
        return f"({s(self.left)})^inf {s(self.word[:self.origin])}.{s(self.word[self.origin:])} ({s(self.right)})^inf"


def _symbols(text):
    out = []
    for ch in text:
        if ch == "'" and out:
            out[-1] += "'"
        else:
            out.append(ch)
    return tuple(out)


def _span(points, extra=()):
    lo = min([p.lo for p in points] + [0] + list(extra))
    hi = max([p.hi for p in points] + [0] + list(extra))
    left = lcm(*[len(p.left) for p in points])
    right = lcm(*[len(p.right) for p in points])
    return lo, hi, left, right


def agree(p, q, lo=None, hi=None):
    """Do two EP points agree on coordinates in [lo, hi] (None = unbounded)?"""
    a, b, L, R = _span([p, q])
    start = a - L if lo is None else lo
    stop = b + R if hi is None else hi
    return all(p.at(i) == q.at(i) for i in range(start, stop + 1))


def _infinite(nodes, nbrs):
    """Nodes starting an infinite walk along nbrs (iterated pruning of dead ends)."""
    count = {n: len(nbrs[n]) for n in nodes}
    back = {n: [] for n in nodes}
    for n in nodes:
        for m in nbrs[n]:
            back[m].append(n)
    alive = set(nodes)
    stack = [n for n in nodes if count[n] == 0]
    while stack:
        n = stack.pop()
        if n not in alive:
            continue
        alive.discard(n)
        for m in back[n]:
            count[m] -= 1
            if count[m] == 0 and m in alive:
                stack.append(m)
    return alive


def _bi_infinite_through(states, succ, anchors):
    """Is some anchor node on a bi-infinite path of the finite graph succ?"""
    pred = {s: [] for s in states}
    for s in states:
        for t in succ[s]:
            pred[t].append(s)
    future = _infinite(states, succ)
    past = _infinite(states, pred)
    return any(a in past and a in future for a in anchors)


def path_exists(X, allowed, lo, hi, left, right):
    """Bi-infinite path of presentation X whose label at coordinate i lies in
    allowed(i); allowed must be periodic with period ``left`` below lo and
    ``right`` above hi."""
    X = as_labeled(X)
    moves = X.moves
    table = {i: allowed(i) for i in range(lo - left, hi + right + 1)}

    def post(S, i):
        ok = table[i]
        return frozenset(t for s in S for _, a, t in moves[s] if a in ok)

    def pre(S, i):
        ok = table[i]
        return frozenset(s for s in moves if any(a in ok and t in S for _, a, t in moves[s]))

    # states where an infinite left-periodic path can end (just before lo)
    E = frozenset(X.base.states)
    while True:
        E2 = E
        for i in range(lo - left, lo):
            E2 = post(E2, i)
        if E2 == E:
            break
        E = E2
    # states at hi+1 starting an infinite right-periodic path
    F = frozenset(X.base.states)
    while True:
        F2 = F
        for i in range(hi + right, hi, -1):
            F2 = pre(F2, i)
        if F2 == F:
            break
        F = F2
    S = E
    for i in range(lo, hi + 1):
        S = post(S, i)
        if not S:
            return False
    return bool(S & F)


def contains(X, p):
    """Is the EP point p a point of the shift presented by X?"""
    lo, hi, L, R = _span([p])
    return path_exists(X, lambda i: {p.at(i)}, lo, hi, L, R)


def lift_exists(code, y, fixed=None, fixed_upto=None, fixed_from=None, cylinder=None):
    """Is there x in the domain with code(x) = y (1-block code) such that
    x agrees with ``fixed`` on (-inf, fixed_upto] (or on [fixed_from, inf)),
    and x_i = cylinder[i] for the coordinates given in the dict ``cylinder``?"""
    if not code.is_one_block:
        raise MalformedWitness("lift checks need a 1-block code")
    X = code.domain
    pre = {}
    for a in X.alphabet:
        if _known(code, a):
            pre.setdefault(code.symbol((a,)), set()).add(a)
    pts = [y] + ([fixed] if fixed is not None else [])
    marks = [k for k in (fixed_upto, fixed_from) if k is not None] + list(cylinder or ())
    lo, hi, L, R = _span(pts, marks)

    def allowed(i):
        s = set(pre.get(y.at(i), ()))
        if fixed is not None and ((fixed_upto is not None and i <= fixed_upto)
                                  or (fixed_from is not None and i >= fixed_from)):
            s &= {fixed.at(i)}
        if cylinder and i in cylinder:
            s &= {cylinder[i]}
        return s

    return path_exists(X, allowed, lo, hi, L, R)


def _known(code, a):
    try:
        code.symbol((a,))
        return True
    except ShiftError:
        return False


def image(code, p):
    if not code.is_one_block:
        raise MalformedWitness("image of a point needs a 1-block code")
    return p.map(lambda a: code.symbol((a,)))
