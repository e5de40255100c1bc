"""Seeded random instances and the eventually periodic brute-force oracle."""

import random
from itertools import product

from .codes import SlidingBlockCode, image_presentation
from .errors import EmptyShift
from .graphs import strongly_connected
from .language import classify, definite_cover
from .points import EPPoint, agree, image, lift_exists
from .verify import _forward_lasso
from .presentations import as_labeled, edge_shift, labeled


def random_graph(rng, max_states=4, density=0.45):
    """A random irreducible edge shift with at most max_states states."""
    while True:
        n = rng.randint(1, max_states)
        states = [str(i) for i in range(n)]
        edges = []
        for i in states:
            for j in states:
                for _ in range(2):
                    if rng.random() < density / (1 + len(edges) / (2 * n)):
                        edges.append((f"e{len(edges)}", i, j))
        if edges and strongly_connected(states, edges) and len(edges) > n:
            return edge_shift(states, edges)


def random_factor_code(rng, max_states=4, symbols="ab", require_sft=True, tries=200):
    """A 1-block factor code from a random edge shift onto the shift of its labels."""
    for _ in range(tries):
        G = random_graph(rng, max_states)
        labels = {e: rng.choice(symbols) for e, _, _ in G.edges}
        used = sorted(set(labels.values()))
        X = as_labeled(G)
        Y = labeled(G.states, [(e, s, d, labels[e]) for e, s, d in G.edges], used)
        if require_sft and not classify(Y)["sft"]:
            continue
        return SlidingBlockCode(X, Y, 0, 0, {(e,): labels[e] for e, _, _ in G.edges})
    raise EmptyShift("no instance found")


def _closed_walks(F, max_len):
    out = []
    for s in F.base.states:
        stack = [(s, ())]
        while stack:
            t, w = stack.pop()
            if w and t == s and _primitive(w):
                out.append((s, w))
            if len(w) < max_len:
                for _, a, u in F.moves[t]:
                    stack.append((u, w + (a,)))
    return sorted(set(out))


def _primitive(w):
    """w is not a proper power of a shorter word (powers give the same tail)."""
    n = len(w)
    return all(w != w[:d] * (n // d) for d in range(1, n) if n % d == 0)


def _paths_from(F, s, length):
    out = [((), s)]
    for _ in range(length):
        out = [(w + (a,), u) for w, t in out for _, a, u in F.moves[t]]
    return out


def retract_oracle(code, n, period=4, past=None, future=None):
    """Brute force: is n a right continuing retract on all eventually periodic
    pairs with periods <= period, an x-transient of length past and a
    y-transient of length future?  Returns (ok, counterexample)."""
    past = n + 2 if past is None else past
    future = 2 * n + 2 if future is None else future
    FX = definite_cover(code.domain)
    FY = definite_cover(code.codomain)
    ywalks = _closed_walks(FY, period)
    ycycles = {}
    for s, w in ywalks:
        ycycles.setdefault(s, []).append(w)
    seen = set()
    for s, cyc in _closed_walks(FX, period):
        for k in range(past + 1):
            for tr, t in _paths_from(FX, s, k):
                xpast = cyc + tr
                ft, fc = _forward_lasso(FX.moves, t)
                if len(xpast) < n:
                    continue
                x = EPPoint(cyc, xpast + ft, fc, len(xpast) - 1)
                fx = image(code, x)
                ypast = fx.word[:len(xpast)]
                # pairs agreeing on the cover states at -n and on x_{(-n,0]} are equivalent
                key = (_states_after(FX, x.left, xpast[:len(xpast) - n]),
                       _states_after(FY, fx.left, ypast[:len(ypast) - n]), xpast[len(xpast) - n:])
                if key in seen:
                    continue
                seen.add(key)
                for q in _states_after(FY, fx.left, ypast):
                    # shorter transients are covered by unrolling the cycle
                    for yw, r in _paths_from(FY, q, future):
                        for c in ycycles.get(r, ()):
                            y = EPPoint(fx.left, ypast + yw, c, len(ypast) - 1)
                            if not agree(fx, y, hi=0):
                                continue
                            if not lift_exists(code, y, fixed=x, fixed_upto=-n):
                                return False, (x, y)
    return True, None


def _end(F, s, word):
    for a in word:
        s = next(t for _, b, t in F.moves[s] if b == a)
    return s


def _states_after(F, left, word):
    """Cover states at which a path labeled left^inf word can end."""
    S = set(F.base.states)
    for _ in range(len(F.base.states) + 1):
        S2 = set(S)
        for a in left:
            S2 = {t for s in S2 for _, b, t in F.moves[s] if b == a}
        S = S2
    for a in word:
        S = {t for s in S for _, b, t in F.moves[s] if b == a}
    return tuple(sorted(S))
