"""Entropy, periodic points, periods, cyclic covers."""

from dataclasses import dataclass
from math import gcd, log

import numpy as np

from .errors import NotIrreducible, NotSynchronizing
from .graphs import components, int_matmul, period_classes, strongly_connected
from .language import _automaton, fischer_cover, is_synchronizing_word
from .presentations import (EdgeShiftPresentation, LabeledPresentation, as_labeled,
                            as_word, higher_power, trim_essential)


# -- Perron values ---------------------------------------------------------

def perron_bracket(matrix, tol=1e-12, max_iter=100000):
    """Collatz-Wielandt bracket [lo, hi] of the spectral radius of an
    irreducible nonnegative matrix, with hi - lo <= tol (up to rounding)."""
    A = np.asarray(matrix, dtype=float)
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0]), float(A[0, 0])
    # A + I is primitive, so its Collatz-Wielandt ratios converge
    M = A + np.eye(n)
    vals, vecs = np.linalg.eig(M)
    v = np.abs(np.real(vecs[:, np.argmax(np.real(vals))]))
    v = np.where(v > 0, v, 1e-300) + 1e-15 * v.max()
    lo, hi = 0.0, float("inf")
    for _ in range(max_iter):
        w = M @ v
        r = w / v
        lo, hi = max(lo, float(r.min())), min(hi, float(r.max()))
        if hi - lo <= tol:
            break
        v = w / w.max()
    return lo - 1.0, hi - 1.0


def _dfa_components(X):
    dfa = _automaton(X)
    states = list(range(len(dfa)))
    edges = [(f"{i}:{a}", i, t) for i in states for a, t in dfa.delta[i].items()]
    out = []
    for comp in components(states, edges):
        idx = {s: k for k, s in enumerate(comp)}
        m = [[0] * len(comp) for _ in comp]
        for _, s, d in edges:
            if s in idx and d in idx:
                m[idx[s]][idx[d]] += 1
        out.append(m)
    return out


def entropy_bracket(X, tol=1e-9):
    """Certified interval for h(X), computed on the determinized presentation."""
    mats = _dfa_components(as_labeled(X))
    lo = hi = 0.0
    for m in mats:
        a, b = perron_bracket(m, tol / 4)
        lo, hi = max(lo, a), max(hi, b)
    if hi <= 0:
        return 0.0, 0.0
    lo = max(lo, 1e-300)
    return log(lo), log(hi)


def entropy(X, tol=1e-9):
    lo, hi = entropy_bracket(X, tol)
    return (lo + hi) / 2


# -- periodic points -------------------------------------------------------

def mobius(n):
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _graph(X):
    return X.base if isinstance(X, LabeledPresentation) else X


def trace_counts(X, n_max):
    """{n: trace(A^n)} for n = 1..n_max in exact integers."""
    A = _graph(X).matrix()
    P = A
    out = {}
    for n in range(1, n_max + 1):
        out[n] = sum(P[i][i] for i in range(len(P)))
        if n < n_max:
            P = int_matmul(P, A)
    return out


def least_period_counts(p):
    return {n: sum(mobius(n // d) * p[d] for d in divisors(n)) for n in p}


@dataclass(frozen=True)
class PeriodicProfile:
    p: dict
    q: dict
    per: int
    classes: tuple


def periodic_profile(X, n_max):
    G = _graph(X)
    p = trace_counts(G, n_max)
    q = least_period_counts(p)
    per = 0
    for n, v in p.items():
        if v:
            per = gcd(per, n)
    classes = ()
    if strongly_connected(G.states, G.edges):
        k, phase = period_classes(list(G.states), G.edges)
        classes = tuple(tuple(s for s in G.states if phase[s] == i) for i in range(k))
        per = k
    return PeriodicProfile(p, q, per or None, classes)


def _essential_irreducible(X):
    G = trim_essential(_graph(X))
    if not strongly_connected(G.states, G.edges):
        raise NotIrreducible("periodic condition needs irreducible graphs")
    return G


def periodic_condition(X, Y):
    """Decide P(X) -> P(Y): q_n(X) > 0 implies p_n(Y) > 0 for every n.

    Returns Answer(ok, witness n).  All n up to N* are checked exactly; past
    N* positivity of p_n is governed by the period alone.
    """
    from .language import Answer
    GX, GY = _essential_irreducible(X), _essential_irreducible(Y)
    perX, _ = period_classes(list(GX.states), GX.edges)
    perY, _ = period_classes(list(GY.states), GY.edges)
    bound = max(per * ((len(G.states) - 1) ** 2 + 1)
                for per, G in ((perX, GX), (perY, GY)))
    single_cycle = len(GX.edges) == len(GX.states)
    limit = bound
    if perX % perY and not single_cycle:
        # some large multiple of per(X) avoids per(Y); go find the first one
        k = bound // perX + 1
        while (perX * k) % perY == 0:
            k += 1
        limit = perX * (k + perY)
    pX = trace_counts(GX, limit)
    pY = trace_counts(GY, limit)
    qX = least_period_counts(pX)
    for n in range(1, limit + 1):
        if qX[n] > 0 and pY[n] == 0:
            return Answer(False, n)
    return Answer(True, None)


# -- cyclic covers ---------------------------------------------------------

@dataclass(frozen=True)
class CyclicCover:
    p: int
    components: tuple
    phase: dict
    presentation: LabeledPresentation


def _cover_base(X):
    if isinstance(X, EdgeShiftPresentation):
        return as_labeled(trim_essential(X))
    X = as_labeled(X)
    if X.injective:
        return trim_essential(X)
    return fischer_cover(X)


def cyclic_cover(X):
    """Period p and the components D_0..D_{p-1} as sub-presentations of the
    p-th power presentation, D_i made of p-blocks starting in phase class i."""
    F = _cover_base(X)
    if not strongly_connected(F.base.states, F.base.edges):
        raise NotIrreducible("cyclic cover needs an irreducible presentation")
    p, phase = period_classes(list(F.base.states), F.base.edges)
    Fp, _ = higher_power(F, p)
    comps = []
    for i in range(p):
        keep = [s for s in Fp.base.states if phase[s] == i]
        comps.append(trim_essential(Fp.restrict(keep)))
    return CyclicCover(p, tuple(comps), phase, F)


# -- synchronized entropy --------------------------------------------------

@dataclass(frozen=True)
class SynEntropy:
    lower: float
    upper: float
    exact: float = None


def syn_entropy_estimate(X, w, n_max, tol=1e-9):
    """Bracket for h_syn via C_n = {v in B_n : wvw in B}."""
    X = as_labeled(X)
    w = as_word(w)
    if not is_synchronizing_word(X, w):
        raise NotSynchronizing(w)
    dfa = _automaton(X)
    start = dfa.run(w)
    ways = {start: 1}
    lower = 0.0
    for n in range(1, n_max + 1):
        nxt = {}
        for s, c in ways.items():
            for t in dfa.delta[s].values():
                nxt[t] = nxt.get(t, 0) + c
        ways = nxt
        count = sum(c for s, c in ways.items() if dfa.run(w, s) is not None)
        if count:
            lower = max(lower, log(count) / n)
    lo, hi = entropy_bracket(X, tol)
    exact = None
    irreducible = len(_dfa_components(X)) == 1 or _is_irreducible(X)
    if irreducible:
        exact = (lo + hi) / 2
        lower = max(lower, lo)
    return SynEntropy(min(lower, hi), hi, exact)


def _is_irreducible(X):
    from .language import irreducible_core
    return irreducible_core(X) is not None
