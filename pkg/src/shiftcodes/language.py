"""Languages of sofic shifts: word counts, follower sets, synchronizing words,
transition lengths and classification."""

from collections import deque
from dataclasses import dataclass

from .errors import CapExceeded, NotIrreducible, WordNotInLanguage
from .graphs import bool_matmul, components, period_classes
from .presentations import LabeledPresentation, as_labeled, as_word


@dataclass(frozen=True)
class Answer:
    """A boolean verdict together with its certificate or witness."""
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class FollowerAutomaton:
    """Subset construction of a labeled presentation.

    State 0 is the set of all presentation states; only nonempty subsets
    are kept, so a missing transition means the word left the language.
    """

    def __init__(self, X, start=None):
        X = as_labeled(X)
        self.alphabet = X.alphabet
        start = frozenset(X.base.states if start is None else start)
        self.sets = [start]
        self.delta = [{}]
        index = {start: 0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for a in self.alphabet:
                nxt = frozenset(d for s in self.sets[i] for _, lab, d in X.moves[s] if lab == a)
                if not nxt:
                    continue
                if nxt not in index:
                    index[nxt] = len(self.sets)
                    self.sets.append(nxt)
                    self.delta.append({})
                    queue.append(index[nxt])
                self.delta[i][a] = index[nxt]

    def __len__(self):
        return len(self.sets)

    def run(self, w, state=0):
        for a in w:
            state = self.delta[state].get(a)
            if state is None:
                return None
        return state

    def classes(self):
        """Follower-set classes (Moore refinement; all states accept)."""
        n = len(self.sets)
        cls = [0] * n
        count = 1
        while True:
            sig = {}
            new = []
            for i in range(n):
                key = (cls[i],) + tuple(cls[self.delta[i][a]] if a in self.delta[i] else -1
                                        for a in self.alphabet)
                new.append(sig.setdefault(key, len(sig)))
            if len(sig) == count:
                return new
            cls, count = new, len(sig)


@dataclass(frozen=True)
class TransitionLengths:
    transition: int = None
    weak: int = None


def _automaton(X):
    X = as_labeled(X)
    cache = X.__dict__.setdefault("_follower", {})
    if "dfa" not in cache:
        cache["dfa"] = FollowerAutomaton(X)
    return cache["dfa"]


def in_language(X, w):
    return _automaton(X).run(as_word(w)) is not None


def words(X, n, cap=200000):
    """Sorted list of the words of length n."""
    dfa = _automaton(X)
    out = []
    stack = [((), 0)]
    while stack:
        w, s = stack.pop()
        if len(w) == n:
            out.append(w)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} words of length {n}")
            continue
        for a in reversed(dfa.alphabet):
            if a in dfa.delta[s]:
                stack.append((w + (a,), dfa.delta[s][a]))
    return out


def count_words(X, n, endpoints=None, listing=False, cap=200000):
    """|B_n(X)| (or |B_n^X(a,b)|) and optionally the words themselves."""
    dfa = _automaton(X)
    if n == 0:
        return (1, [()]) if listing else (1, None)
    if endpoints is None:
        ways = {0: 1}
        steps = n
    else:
        a, b = endpoints
        if n == 1:
            c = 1 if a == b and a in dfa.delta[0] else 0
            return (c, [(a,)] * c) if listing else (c, None)
        if a not in dfa.delta[0]:
            return (0, []) if listing else (0, None)
        ways = {dfa.delta[0][a]: 1}
        steps = n - 1
    for k in range(steps):
        last = endpoints is not None and k == steps - 1
        nxt = {}
        for s, c in ways.items():
            for sym, t in dfa.delta[s].items():
                if last and sym != endpoints[1]:
                    continue
                nxt[t] = nxt.get(t, 0) + c
        ways = nxt
    total = sum(ways.values())
    if not listing:
        return total, None
    if total > cap:
        raise CapExceeded(f"{total} words exceed the listing cap {cap}")
    ws = words(X, n, cap)
    if endpoints is not None:
        ws = [w for w in ws if w[0] == endpoints[0] and w[-1] == endpoints[1]]
    return total, ws


def _shortest_word(dfa, targets):
    """Shortest (then lexicographically least) word leading from state 0 into targets."""
    prev = {0: None}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if s in targets:
            w = []
            while prev[s] is not None:
                s, a = prev[s]
                w.append(a)
            return tuple(reversed(w))
        for a in dfa.alphabet:
            t = dfa.delta[s].get(a)
            if t is not None and t not in prev:
                prev[t] = (s, a)
                queue.append(t)
    return None


def _distinguishing_suffix(dfa, big, small):
    """Shortest v readable from state ``big`` but not from ``small``."""
    prev = {(big, small): None}
    queue = deque([(big, small)])
    while queue:
        p, q = queue.popleft()
        for a in dfa.alphabet:
            t = dfa.delta[p].get(a)
            if t is None:
                continue
            u = dfa.delta[q].get(a)
            key = (p, q)
            if u is None:
                v = [a]
                while prev[key] is not None:
                    key, b = prev[key]
                    v.append(b)
                return tuple(reversed(v))
            if (t, u) not in prev:
                prev[(t, u)] = (key, a)
                queue.append((t, u))
    return None


def is_synchronizing_word(X, w):
    """Decide whether w is synchronizing.

    True certificate: the follower-set class reached by w.  False
    certificate: (u, w, v) with uw and wv in the language but not uwv.
    """
    w = as_word(w)
    dfa = _automaton(X)
    target = dfa.run(w)
    if target is None:
        raise WordNotInLanguage(w)
    cls = dfa.classes()
    bad = set()
    for s in range(len(dfa)):
        t = dfa.run(w, s)
        if t is not None and cls[t] != cls[target]:
            bad.add(s)
    if not bad:
        return Answer(True, cls[target])
    u = _shortest_word(dfa, bad)
    v = _distinguishing_suffix(dfa, target, dfa.run(u + w))
    return Answer(False, (u, w, v))


def find_synchronizing_word(X, max_len):
    """Shortest, then lexicographically least, synchronizing word of length <= max_len."""
    dfa = _automaton(X)
    cls = dfa.classes()
    start = frozenset(range(len(dfa)))
    level = [((), start)]
    seen = {start}
    for _ in range(max_len):
        nxt = []
        for w, S in level:
            for a in dfa.alphabet:
                T = frozenset(dfa.delta[s][a] for s in S if a in dfa.delta[s])
                if not T:
                    continue
                if len({cls[t] for t in T}) == 1:
                    return w + (a,)
                if T not in seen:
                    seen.add(T)
                    nxt.append((w + (a,), T))
        level = nxt
    return None


def language_difference(X, Y):
    """Shortest word in exactly one of the two languages, or None if equal."""
    A, B = _automaton(X), _automaton(Y)
    alphabet = sorted(set(A.alphabet) | set(B.alphabet))
    prev = {(0, 0): None}
    queue = deque([(0, 0)])
    while queue:
        p, q = queue.popleft()
        for a in alphabet:
            t = A.delta[p].get(a) if p is not None else None
            u = B.delta[q].get(a) if q is not None else None
            if t is None and u is None:
                continue
            if (t is None) != (u is None):
                w = [a]
                key = (p, q)
                while prev[key] is not None:
                    key, b = prev[key]
                    w.append(b)
                return tuple(reversed(w))
            if (t, u) not in prev:
                prev[(t, u)] = ((p, q), a)
                queue.append((t, u))
    return None


def minimal_automaton(X, essential=False):
    """Follower-class automaton as a right-resolving labeled presentation.

    With ``essential`` only classes on bi-infinite paths are kept; the result
    still presents X, and for an SFT each state is a function of the past.
    """
    from .presentations import labeled, trim_essential
    X = as_labeled(X)
    cache = X.__dict__.setdefault("_follower", {})
    key = ("minimal", essential)
    if key in cache:
        return cache[key]
    dfa = _automaton(X)
    cls = dfa.classes()
    rep = {}
    for i, c in enumerate(cls):
        rep.setdefault(c, i)
    states = [f"m{c}" for c in sorted(rep)]
    edges = [(f"m{c}:{a}", f"m{c}", f"m{cls[t]}", a)
             for c in sorted(rep) for a, t in sorted(dfa.delta[rep[c]].items())]
    M = labeled(states, edges, X.alphabet)
    if essential:
        M = trim_essential(M)
    cache[key] = M
    return M


def definite_cover(X):
    """Right-resolving presentation in which a point's path is read off its past
    (the Fischer cover when X is irreducible)."""
    X = as_labeled(X)
    if irreducible_core(X) is not None:
        return fischer_cover(X)
    return minimal_automaton(X, essential=True)


def determinized(X):
    """The subset automaton as a (right-resolving) labeled presentation."""
    from .presentations import labeled
    dfa = _automaton(X)
    states = [f"d{i}" for i in range(len(dfa))]
    edges = [(f"d{i}:{a}", states[i], states[t], a)
             for i in range(len(dfa)) for a, t in sorted(dfa.delta[i].items())]
    return labeled(states, edges, dfa.alphabet)


def irreducible_core(X):
    """An irreducible component presenting the whole language, or None."""
    X = as_labeled(X)
    for comp in components(X.base.states, X.base.edges):
        H = X.restrict(comp)
        if len(comp) == len(X.base.states) or language_difference(H, X) is None:
            return H
    return None


def fischer_cover(X):
    """Minimal right-resolving presentation of an irreducible sofic shift."""
    from .presentations import labeled
    X = as_labeled(X)
    cache = X.__dict__.setdefault("_follower", {})
    if "fischer" in cache:
        return cache["fischer"]
    H = irreducible_core(X)
    if H is None:
        raise NotIrreducible("no irreducible component presents the shift")
    dfa = _automaton(H)
    cls = dfa.classes()
    w = find_synchronizing_word(H, len(dfa) ** 2 + 1)
    root = cls[dfa.run(w)]
    rep = {}
    for i, c in enumerate(cls):
        rep.setdefault(c, i)
    order = {root: 0}
    queue = deque([root])
    edges = []
    while queue:
        c = queue.popleft()
        i = rep[c]
        for a in dfa.alphabet:
            t = dfa.delta[i].get(a)
            if t is None:
                continue
            d = cls[t]
            if d not in order:
                order[d] = len(order)
                queue.append(d)
            edges.append((f"f{order[c]}:{a}", f"f{order[c]}", f"f{order[d]}", a))
    F = labeled([f"f{k}" for k in range(len(order))], edges, X.alphabet)
    cache["fischer"] = F
    return F


def sft_step(F):
    """For a right-resolving presentation: least m such that all paths with the
    same label of length m end together, or None when no such m exists."""
    F = as_labeled(F)
    succ = {}
    for p in F.base.states:
        for q in F.base.states:
            if p == q:
                continue
            nxt = []
            for _, a, t in F.moves[p]:
                for _, b, u in F.moves[q]:
                    if a == b and t != u:
                        nxt.append((t, u))
            succ[(p, q)] = nxt
    # longest path in the off-diagonal pair graph; a cycle means no bound
    depth = {}
    state = {}
    for root in succ:
        if root in depth:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                state[node] = 2
                depth[node] = 1 + max((depth[c] for c in succ[node]), default=0)
                continue
            if state.get(child) == 1:
                return None
            if state.get(child) is None:
                state[child] = 1
                stack.append((child, iter(succ[child])))
    return max(depth.values(), default=0)


def classify(X):
    """irreducible / mixing / sft flags (plus period and step when known)."""
    X = as_labeled(X)
    try:
        F = fischer_cover(X)
    except NotIrreducible:
        # reducible: decide SFT-ness on the determinized presentation
        step = sft_step(minimal_automaton(X))
        return {"irreducible": False, "mixing": False, "sft": step is not None,
                "period": None, "step": step}
    p, _ = period_classes(F.base.states, F.base.edges)
    step = sft_step(F)
    n = len(F.base.states)
    sft = step is not None and step <= n * n
    return {"irreducible": True, "mixing": p == 1, "sft": sft, "period": p,
            "step": step if sft else None}


def transition_lengths(X):
    """Transition and weak transition lengths from powers of the adjacency matrix.

    ``transition`` is the least k with A^k > 0 (mixing case).  ``weak`` is the
    least k >= 1 with A^k positive on every pair of states of one period class.
    """
    X = as_labeled(X)
    H = irreducible_core(X)
    if H is None:
        raise NotIrreducible("presentation has no irreducible core")
    G = H.base
    states = list(G.states)
    p, phase = period_classes(states, G.edges)
    A = [[v > 0 for v in row] for row in G.matrix()]
    n = len(states)
    pairs = [(i, j) for i in range(n) for j in range(n) if phase[states[i]] == phase[states[j]]]
    P = A
    weak = transition = None
    bound = p * ((n - 1) ** 2 + 1) + n + 1
    for k in range(1, bound + 1):
        if weak is None and all(P[i][j] for i, j in pairs):
            weak = k
        if p == 1 and transition is None and all(all(r) for r in P):
            transition = k
        if weak is not None and (p > 1 or transition is not None):
            break
        P = bool_matmul(P, A)
    return TransitionLengths(transition, weak)


def symbol_transition_length(X, same_class=False):
    """Least n such that B_n^X(a,b) is nonempty for all symbols a, b (or for all
    a, b whose edges lie in one period class when ``same_class``).  Intended
    for edge shifts and vertex-style presentations, where symbols carry phases."""
    X = as_labeled(X)
    dfa = _automaton(X)
    alphabet = [a for a in X.alphabet if a in dfa.delta[0]]
    start = {a: dfa.delta[0][a] for a in alphabet}
    reach = {a: {start[a]} for a in alphabet}
    last = {a: {a} for a in alphabet}
    n = 1
    limit = 4 * len(dfa) ** 2 + 4
    phases = None
    if same_class:
        phases = _symbol_phases(X)
    while n <= limit:
        ok = True
        for a in alphabet:
            for b in alphabet:
                if same_class and phases.get(a) != phases.get(b):
                    continue
                if b not in last[a]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return n
        for a in alphabet:
            nxt = set()
            syms = set()
            for s in reach[a]:
                for sym, t in dfa.delta[s].items():
                    nxt.add(t)
                    syms.add(sym)
            reach[a] = nxt
            last[a] = syms
        n += 1
    return None


def _symbol_phases(X):
    F = fischer_cover(X)
    p, phase = period_classes(F.base.states, F.base.edges)
    out = {}
    for e, s, d in F.base.edges:
        out.setdefault(F.labels[e], set()).add(phase[s])
    return {a: min(v) if len(v) == 1 else None for a, v in out.items()}
