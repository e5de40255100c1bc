"""Constructions: high entropy sub-SFTs, disjoint sub-SFTs, bi-closing
sub-factors, the marker factor code and its periodic reduction."""

from dataclasses import dataclass, field
from math import log

from .codes import SlidingBlockCode, apply
from .errors import (ConditionFailed, EmbeddingNotFound, EmptyShift, ExtensionSearchFailed,
                     NotIrreducible, NotProper, NotSFT, PlanInfeasible, SearchExhausted,
                     ShiftError)
from .graphs import components, period_classes, strongly_connected
from .language import (classify, count_words, definite_cover, in_language,
                       is_synchronizing_word, language_difference, transition_lengths,
                       words)
from .presentations import (EdgeShiftPresentation, as_labeled, as_word, edge_shift,
                            join_symbols, labeled, trim_essential)
from .spectral import entropy_bracket, perron_bracket, periodic_profile, trace_counts


# -- entropy of deterministic presentations --------------------------------

def presentation_entropy(X, tol=1e-9):
    """Entropy bracket; right-resolving presentations skip determinization."""
    X = as_labeled(X)
    if not X.deterministic:
        return entropy_bracket(X, tol)
    G = X.base
    hi_all = lo_all = 0.0
    for comp in components(list(G.states), G.edges):
        idx = {s: k for k, s in enumerate(comp)}
        m = [[0] * len(comp) for _ in comp]
        for _, s, d in G.edges:
            if s in idx and d in idx:
                m[idx[s]][idx[d]] += 1
        lo, hi = perron_bracket(m, tol / 4)
        lo_all, hi_all = max(lo_all, lo), max(hi_all, hi)
    if hi_all <= 0:
        return 0.0, 0.0
    return log(max(lo_all, 1e-300)), log(hi_all)


# -- windowed sub-SFTs -----------------------------------------------------

@dataclass(frozen=True)
class SubSFT:
    presentation: object
    entropy: tuple
    bound: float = None
    marker: tuple = ()
    k: int = 0


def _contains(block, w):
    n = len(w)
    return any(block[i:i + n] == w for i in range(len(block) - n + 1))


def window_sub_sft(X, w, k, positions="tail"):
    """Points of X in which every k-block b has w inside b[1:] ("tail") or
    anywhere in b ("any").  States pair a definite-cover state of X with
    the last k-1 symbols, so the result is right-resolving."""
    X = as_labeled(X)
    w = as_word(w)
    if k <= len(w) or (positions == "tail" and k < len(w) + 1):
        raise EmptyShift(f"window {k} too short for a marker of length {len(w)}")
    F = definite_cover(X)
    need = (lambda b: _contains(b[1:], w)) if positions == "tail" else (lambda b: _contains(b, w))
    start = [(q, ()) for q in F.base.states]
    seen = set(start)
    todo = list(start)
    edges = []
    while todo:
        q, hist = todo.pop()
        for _, a, t in F.moves[q]:
            block = hist + (a,)
            if len(block) == k and not need(block):
                continue
            nxt = (t, block[-(k - 1):] if k > 1 else ())
            edges.append(((q, hist), nxt, a))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    # only states whose history is full length carry the constraint
    full = {s for s in seen if len(s[1]) == k - 1}
    name = {s: f"{s[0]}|{join_symbols(s[1])}" for s in full}
    out = [(f"{name[s]}>{a}", name[s], name[d], a) for s, d, a in edges
           if s in full and d in full]
    if not out:
        raise EmptyShift("no point satisfies the window constraint")
    try:
        Z = trim_essential(labeled(sorted(name.values()), sorted(out), X.alphabet))
    except EmptyShift:
        raise EmptyShift("no point satisfies the window constraint") from None
    used = sorted(set(Z.labels.values()))
    return labeled(Z.base.states, [(e, s, d, Z.labels[e]) for e, s, d in Z.base.edges], used)


def spec_gap(X):
    """Gap length N with which every two words can be joined (transition length - 1)."""
    t = transition_lengths(X).transition
    return None if t is None else max(t - 1, 0)


def high_entropy_sub_sft(X, w, k, positions="tail", tol=1e-9):
    """The SFT X_k of points whose k-blocks all contain the synchronizing word w
    after their first symbol, with its entropy bracket and the counting bound
    (1/k) log |B_{k-2N-2|w|}(X)| (N the gap of X; None if X is not mixing)."""
    X = as_labeled(X)
    w = as_word(w)
    if not is_synchronizing_word(X, w):
        from .errors import NotSynchronizing
        raise NotSynchronizing(w)
    Z = window_sub_sft(X, w, k, positions)
    h = presentation_entropy(Z, tol)
    bound = None
    N = spec_gap(X) if classify(X)["mixing"] else None
    if N is not None:
        m = k - 2 * N - 2 * len(w)
        if m >= 0:
            count, _ = count_words(X, m) if m else (1, None)
            bound = log(count) / k
    return SubSFT(Z, h, bound, w, k)


def avoid_subshift(X, X_tilde, h_target, L_cap=6, k_cap=12, tol=1e-9, exclude=None):
    """Mixing SFT inside X, disjoint from X_tilde, with entropy above h_target.

    Marker words u in B_L(X) but not in B(X_tilde) are tried in order of
    length and then reverse lexicographic order; the candidate is the SFT of
    points with u in every k-window.  ``exclude(u)`` can veto markers.
    """
    X = as_labeled(X)
    if X_tilde is not None:
        X_tilde = as_labeled(X_tilde)
        if language_difference(X, X_tilde) is None:
            raise NotProper("the subshift to avoid is all of X")
    for L in range(1, L_cap + 1):
        cands = [u for u in words(X, L)
                 if X_tilde is None or not in_language(X_tilde, u)]
        for u in sorted(cands, reverse=True):
            if exclude is not None and exclude(u):
                continue
            for k in range(L + 1, k_cap + 1):
                try:
                    Z = window_sub_sft(X, u, k, "any")
                except EmptyShift:
                    continue
                h = presentation_entropy(Z, tol)
                if h[0] <= h_target:
                    continue
                cls = classify(Z)
                if cls["mixing"] and cls["sft"]:
                    return SubSFT(Z, h, None, u, k)
    raise SearchExhausted(f"no marker word of length <= {L_cap} with window <= {k_cap}")


# -- bi-closing sub-factors ------------------------------------------------

def blow_up(Y, n):
    """Edge shift Y_n of the cyclic block matrix B_n: n copies of the graph of
    Y, every edge stepping from copy i to copy i+1 (mod n)."""
    G = as_labeled(Y).base
    states = [f"{s}#{i}" for i in range(n) for s in G.states]
    edges = [(f"{e}#{i}", f"{s}#{i}", f"{d}#{(i + 1) % n}")
             for i in range(n) for e, s, d in G.edges]
    return edge_shift(states, edges)


def _split_copy(name):
    e, _, i = name.rpartition("#")
    return e, int(i)


def _counts_dominated(Yn, X, j_max):
    """First j <= j_max with q_j(Y_n) > q_j(X), or None."""
    from .spectral import least_period_counts
    qY = least_period_counts(trace_counts(Yn, j_max))
    GX = definite_cover(X).base
    qX = least_period_counts(trace_counts(GX, j_max))
    for j in range(1, j_max + 1):
        if qY[j] > qX[j]:
            return j
    return None


def _line_graph(G):
    """Vertices are the edges of G, joined when they are consecutive."""
    verts = [e for e, _, _ in G.edges]
    succ = {e: [f for f, _ in G.out_edges[d]] for e, _, d in G.edges}
    return verts, succ


def _block_graph(X, r, allowed):
    """r-blocks of X kept by ``allowed`` with overlap edges u -> v when
    u + v[-1] is a word of X."""
    verts = [u for u in words(X, r) if allowed(u)]
    keep = set(verts)
    succ = {u: [] for u in verts}
    for u in verts:
        for a in sorted(X.alphabet):
            v = u[1:] + (a,)
            if v in keep and in_language(X, u + (a,)):
                succ[u].append(v)
    return verts, succ


def _injective_homomorphism(verts, succ, targets, tsucc, budget=200000):
    """Injective map of vertices with every edge sent to an edge (lexicographic
    backtracking); None if none exists or the budget runs out."""
    pred = {v: [] for v in verts}
    for v in verts:
        for w in succ[v]:
            pred[w].append(v)
    tset = {t: set(tsucc[t]) for t in targets}
    order = []
    seen = set()
    for root in verts:
        stack = [root]
        while stack:
            v = stack.pop(0)
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            stack.extend(w for w in succ[v] + pred[v] if w not in seen)
    g = {}
    used = set()
    steps = [0]

    def fits(v, t):
        for w in succ[v]:
            if w in g and g[w] not in tset[t]:
                return False
            if w == v and t not in tset[t]:
                return False
        for w in pred[v]:
            if w in g and t not in tset[g[w]]:
                return False
        return True

    def place(k):
        if k == len(order):
            return True
        steps[0] += 1
        if steps[0] > budget:
            return False
        v = order[k]
        for t in targets:
            if t in used or not fits(v, t):
                continue
            g[v] = t
            used.add(t)
            if place(k + 1):
                return True
            del g[v]
            used.discard(t)
        return False

    return dict(g) if place(0) else None


@dataclass(frozen=True)
class BiclosingSubfactor:
    Z: object
    pi: SlidingBlockCode
    n: int
    r: int
    D: int
    embedding: dict
    blow_up: EdgeShiftPresentation


def biclosing_subfactor(X, Y, n_max=4, r_max=4, j_max=30, avoid=None, r_min=1):
    """SFT Z inside X with a bi-closing factor code pi: Z -> Y.

    Y_n (the blow-up) is embedded into X by an injective map of its edges to
    r-blocks of X (blocks failing ``avoid`` are never used); pi reads the
    Y-label of the edge encoded by the last r symbols.
    """
    from .verify import closing_delay
    X, Y = as_labeled(X), as_labeled(Y)
    if not classify(X)["sft"]:
        raise NotSFT("biclosing_subfactor needs an SFT domain")
    step = classify(X)["step"] or 0
    allowed = (lambda u: True) if avoid is None else (lambda u: not avoid(u))
    G = trim_essential(Y.base)
    tried = []
    for n in range(1, n_max + 1):
        Yn = blow_up(Y, n)
        Yn = trim_essential(Yn)
        bad = _counts_dominated(Yn, X, j_max)
        if bad is not None:
            tried.append({"n": n, "periodic_count_fails_at": bad})
            continue
        verts, succ = _line_graph(Yn)
        for r in range(max(1, step, r_min), r_max + 1):
            targets, tsucc = _block_graph(X, r, allowed)
            g = _injective_homomorphism(verts, succ, targets, tsucc)
            tried.append({"n": n, "r": r, "found": g is not None})
            if g is None:
                continue
            edges = []
            for v in verts:
                for w in succ[v]:
                    edges.append((f"{v}>{w}", v, w, g[w][-1]))
            Z = labeled(verts, edges, sorted({g[w][-1] for w in verts}))
            inv = {g[v]: Y.labels[_split_copy(v)[0]] for v in verts}
            table = {}
            for blk in words(Z, r):
                table[blk] = inv[blk]
            last = {}
            for blk, b in table.items():
                last.setdefault(blk[-1], set()).add(b)
            if all(len(v) == 1 for v in last.values()):
                # the label only depends on the current symbol
                pi = SlidingBlockCode(Z, Y, 0, 0, {(a,): v.pop() for a, v in last.items()})
            else:
                pi = SlidingBlockCode(Z, Y, r - 1, 0, table)
            right, left = closing_delay(pi, "right"), closing_delay(pi, "left")
            if right is None or left is None:
                tried[-1]["closing"] = False
                continue
            return BiclosingSubfactor(Z, pi, n, r, max(right, left), g, Yn)
    raise EmbeddingNotFound(f"no embedding found; tried {tried}")


# -- counting words with per-position constraints --------------------------

class _Constrained:
    """Words s_0..s_{L-1} with s_k in sets[k] and consecutive pairs in adj.
    Supports counting, lexicographic rank and unrank."""

    def __init__(self, adj, sets):
        self.adj = adj
        self.sets = [sorted(s) for s in sets]
        L = len(self.sets)
        # tail[k][s]: completions of positions k..L-1 with s_k = s
        self.tail = [None] * L
        self.tail[L - 1] = {s: 1 for s in self.sets[L - 1]}
        for k in range(L - 2, -1, -1):
            nxt = self.tail[k + 1]
            self.tail[k] = {s: sum(c for t, c in nxt.items() if (s, t) in adj)
                            for s in self.sets[k]}

    def count(self):
        return sum(self.tail[0].values())

    def contains(self, w):
        if len(w) != len(self.sets):
            return False
        if any(a not in s for a, s in zip(w, self.sets)):
            return False
        return all((w[k], w[k + 1]) in self.adj for k in range(len(w) - 1))

    def rank(self, w):
        r = 0
        prev = None
        for k, a in enumerate(w):
            for s in self.sets[k]:
                if s >= a:
                    break
                if prev is None or (prev, s) in self.adj:
                    r += self.tail[k][s]
            prev = a
        return r

    def unrank(self, r):
        out = []
        prev = None
        for k in range(len(self.sets)):
            for s in self.sets[k]:
                if prev is not None and (prev, s) not in self.adj:
                    continue
                c = self.tail[k][s]
                if r < c:
                    out.append(s)
                    prev = s
                    break
                r -= c
            else:
                raise IndexError("rank out of range")
        return tuple(out)


# -- the construction plan -------------------------------------------------

@dataclass
class ConstructionPlan:
    X: object
    Y: object
    X_tilde: object
    phi_tilde: object
    Z: object
    pi: SlidingBlockCode
    V: SubSFT
    alpha: str
    N: int
    D: int
    I: int
    R: int
    offset: int
    XR: object
    Z_symbols: frozenset
    V_symbols: frozenset
    psi: dict
    x_adj: frozenset
    y_adj: frozenset
    XR_alphabet: frozenset
    y_alphabet: tuple
    blocks: dict
    hl: dict = field(default_factory=dict)
    lh: dict = field(default_factory=dict)
    targets: dict = field(default_factory=dict)
    phi_fill: dict = field(default_factory=dict)

    @property
    def i(self):
        return self.I + self.N

    @property
    def radius(self):
        """Memory and anticipation of the recoded marker code."""
        return 3 * self.N + 2 * self.I + self.D

    @property
    def retract_bound(self):
        return 2 * self.I + 6 * self.N + 3 * self.D

    def to_document(self):
        return {
            "N": self.N, "D": self.D, "I": self.I, "i": self.i,
            "block_length": self.R, "block_offset": self.offset,
            "alpha": self.alpha, "marker": list(self.V.marker), "marker_window": self.V.k,
            "V_entropy": list(self.V.entropy),
            "Z_symbols": sorted(self.Z_symbols), "V_symbols": sorted(self.V_symbols),
            "psi": dict(sorted(self.psi.items())),
            "radius": self.radius, "retract_bound": self.retract_bound,
            "hl_counts": {b: c.count() for b, c in sorted(self.hl.items())},
            "lh_counts": {b: c.count() for b, c in sorted(self.lh.items())},
        }


def _hl_class(plan, b, I):
    """Suffixes u_{N+2..i} (1-indexed) of HL_i(a;w;b); the count does not
    depend on a or w once a w alpha is a word (1-step symbols)."""
    N, i = plan.N, I + plan.N
    A = plan.XR_alphabet
    sets = []
    for pos in range(N + 2, i + 1):
        if pos == N + 2:
            s = {plan.alpha}
        elif pos < i - 2 * N:
            s = plan.V_symbols
        elif pos < i - N:
            s = A
        elif pos == i - N:
            s = A - plan.Z_symbols
        else:
            s = plan.Z_symbols
        if pos == i:
            s = s & {b}
        sets.append(s)
    return _Constrained(plan.x_adj, sets)


def _lh_class(plan, b, I):
    """Prefixes u_{1..i-N-1} of LH_i(b;w;a), ending in alpha."""
    N, i = plan.N, I + plan.N
    A = plan.XR_alphabet
    sets = []
    for pos in range(1, i - N):
        if pos <= N:
            s = plan.Z_symbols
        elif pos == N + 1:
            s = A - plan.Z_symbols
        elif pos <= 2 * N + 1:
            s = A
        else:
            s = plan.V_symbols
        if pos == 1:
            s = s & {b}
        if pos == i - N - 1:
            s = s & {plan.alpha}
        sets.append(s)
    return _Constrained(plan.x_adj, sets)


def _y_words(plan, c, d, L):
    Yalph = set(plan.y_alphabet)
    sets = [{c}] + [Yalph] * (L - 2) + [{d}] if L >= 2 else [{c} & {d}]
    return _Constrained(plan.y_adj, sets)


def _extend_psi(XR_alphabet, x_adj, y_adj, fixed, y_alphabet, budget=100000):
    """1-block map on the recoded alphabet sending X-edges to Y-edges and
    agreeing with ``fixed`` (lexicographic backtracking)."""
    free = sorted(a for a in XR_alphabet if a not in fixed)
    nbrs = {a: set() for a in XR_alphabet}
    for a, b in x_adj:
        nbrs[a].add((a, b))
        nbrs[b].add((a, b))
    g = dict(fixed)
    for a, b in x_adj:
        if a in g and b in g and (g[a], g[b]) not in y_adj:
            return None
    steps = [0]

    def ok(a):
        return all((g[s], g[t]) in y_adj for s, t in nbrs[a] if s in g and t in g)

    def place(k):
        if k == len(free):
            return True
        steps[0] += 1
        if steps[0] > budget:
            return False
        a = free[k]
        for c in y_alphabet:
            g[a] = c
            if ok(a) and place(k + 1):
                return True
            del g[a]
        return False

    return g if place(0) else None


def _pick_z_and_v(X, Y, X_tilde, h_target, tries=20):
    failed = set()
    for _ in range(tries):
        V = avoid_subshift(X, X_tilde, h_target, exclude=lambda u: u in failed)
        u = V.marker

        def avoid(blk, u=u):
            return _contains(blk, u) or (X_tilde is not None and in_language(X_tilde, blk))

        try:
            return V, biclosing_subfactor(X, Y, avoid=avoid, r_min=len(u))
        except EmbeddingNotFound:
            failed.add(u)
    raise PlanInfeasible(f"no marker leaves room for a bi-closing sub-factor (tried {sorted(failed)})")


def _recode(X, Y, bz, V, X_tilde, phi_tilde, R_cap):
    """Least block length R for which the recoded alphabets separate and a
    1-block psi extending pi (and phi_tilde) exists."""
    from .presentations import higher_block
    X = as_labeled(X)
    pi = bz.pi
    mt = phi_tilde.memory if phi_tilde is not None else 0
    at = phi_tilde.anticipation if phi_tilde is not None else 0
    step = classify(X)["step"] or 0
    offset = max(pi.memory, mt)
    start = max(1, step, bz.r, V.k, offset + at + 1, offset + pi.anticipation + 1)
    y_adj = frozenset(words(Y, 2))
    y_alphabet = tuple(sorted({a for w in y_adj for a in w}))
    for R in range(start, R_cap + 1):
        XR, _ = higher_block(X, R)
        blocks = {join_symbols(w): w for w in words(X, R)}
        x_adj = frozenset((join_symbols(w[:-1]), join_symbols(w[1:])) for w in words(X, R + 1))
        Zs = frozenset(join_symbols(w) for w in words(bz.Z, R))
        Vs = frozenset(join_symbols(w) for w in words(V.presentation, R))
        if Zs & Vs:
            continue
        fixed = {s: pi.symbol(blocks[s][offset - pi.memory:offset + pi.anticipation + 1])
                 for s in Zs}
        if phi_tilde is not None:
            Ts = frozenset(join_symbols(w) for w in words(phi_tilde.domain, R))
            if Ts & Zs:
                continue
            for s in Ts:
                fixed[s] = phi_tilde.symbol(blocks[s][offset - mt:offset + at + 1])
        psi = _extend_psi(frozenset(blocks), x_adj, y_adj, fixed, y_alphabet)
        if psi is None:
            continue
        return R, offset, XR, blocks, x_adj, y_adj, y_alphabet, Zs, Vs, psi
    raise ExtensionSearchFailed(f"no 1-block extension found for block lengths {start}..{R_cap}")


def build_plan(X, Y, X_tilde=None, phi_tilde=None, I_cap=120, R_cap=6, tol=1e-9):
    """Assemble every parameter of the marker construction for mixing SFTs X, Y
    with h(X) > h(Y)."""
    from .language import symbol_transition_length
    from .presentations import higher_block
    X, Y = as_labeled(X), as_labeled(Y)
    cx, cy = classify(X), classify(Y)
    if not (cx["mixing"] and cx["sft"]):
        raise PlanInfeasible("the domain must be a mixing SFT")
    if not (cy["mixing"] and cy["sft"]):
        raise PlanInfeasible("the target must be a mixing SFT")
    if (cy["step"] or 0) > 1:
        raise PlanInfeasible("the target must be a 1-step shift on its symbols")
    hX, hY = entropy_bracket(X, tol), entropy_bracket(Y, tol)
    if hX[0] <= hY[1]:
        raise PlanInfeasible(f"h(X) > h(Y) fails: {hX} vs {hY}")
    if phi_tilde is not None and X_tilde is None:
        X_tilde = phi_tilde.domain
    if X_tilde is not None:
        X_tilde = as_labeled(X_tilde)
        if language_difference(X, X_tilde) is None:
            raise NotProper("the subshift to extend from is all of X")

    V, bz = _pick_z_and_v(X, Y, X_tilde, hY[1])
    R, offset, XR, blocks, x_adj, y_adj, y_alphabet, Zs, Vs, psi = \
        _recode(X, Y, bz, V, X_tilde, phi_tilde, R_cap)
    ZR, _ = higher_block(bz.Z, R)
    N = max(symbol_transition_length(XR), symbol_transition_length(Y),
            symbol_transition_length(ZR, same_class=True))
    plan = ConstructionPlan(
        X=X, Y=Y, X_tilde=X_tilde, phi_tilde=phi_tilde, Z=bz.Z, pi=bz.pi, V=V,
        alpha=min(Vs), N=N, D=bz.D, I=0, R=R, offset=offset, XR=XR,
        Z_symbols=Zs, V_symbols=Vs, psi=psi, x_adj=x_adj, y_adj=y_adj,
        XR_alphabet=frozenset(blocks), y_alphabet=y_alphabet, blocks=blocks)
    A = sorted(blocks)
    for I in range(2 * N + 3, I_cap + 1):
        hl = {b: _hl_class(plan, b, I) for b in sorted(Zs)}
        lh = {b: _lh_class(plan, b, I) for b in sorted(Zs)}
        targets = {}
        ok = True
        for b in sorted(Zs):
            for a in A:
                for c, d, cls in ((psi[a], psi[b], hl[b]), (psi[b], psi[a], lh[b])):
                    if (c, d) not in targets:
                        targets[(c, d)] = _y_words(plan, c, d, I + N)
                    if cls.count() and cls.count() < targets[(c, d)].count():
                        ok = False
        if ok:
            break
    else:
        raise PlanInfeasible(f"counting inequalities fail for every I <= {I_cap}")
    plan.I, plan.hl, plan.lh, plan.targets = I, hl, lh, targets
    if not any(c.count() for c in hl.values()):
        raise PlanInfeasible("every high-low class is empty")
    for c in y_alphabet:
        for d in y_alphabet:
            for j in range(2 * N, 2 * N + 2 * I + 1):
                cls = _y_words(plan, c, d, j)
                if not cls.count():
                    raise PlanInfeasible(f"no filler of length {j} from {c} to {d}")
                plan.phi_fill[(c, d, j)] = cls.unrank(0)
    return plan


# -- stretches and the marker code -----------------------------------------

@dataclass(frozen=True)
class StretchDecomposition:
    """Segments (start, end, kind) of a word, kind in low / long / short.
    A segment touching an end of the word is marked open on that side and
    classified by what is visible."""
    segments: tuple
    open_left: bool
    open_right: bool

    def find(self, k):
        for idx, (s, e, _) in enumerate(self.segments):
            if s <= k <= e:
                return idx
        raise IndexError(k)


def stretches(word, Z_symbols, N, D, I):
    """Low stretches are maximal Z-runs longer than 2N+D; the rest are high
    stretches, long when longer than 2I."""
    n = len(word)
    lows = []
    k = 0
    while k < n:
        if word[k] in Z_symbols:
            j = k
            while j + 1 < n and word[j + 1] in Z_symbols:
                j += 1
            if j - k + 1 > 2 * N + D:
                lows.append((k, j))
            k = j + 1
        else:
            k += 1
    segs = []
    prev = -1
    for s, e in lows:
        if s > prev + 1:
            segs.append((prev + 1, s - 1))
        segs.append((s, e, "low"))
        prev = e
    if prev < n - 1:
        segs.append((prev + 1, n - 1))
    out = []
    for seg in segs:
        if len(seg) == 3:
            out.append(seg)
        else:
            s, e = seg
            out.append((s, e, "long" if e - s + 1 > 2 * I else "short"))
    return StretchDecomposition(tuple(out), bool(out) and out[0][0] == 0,
                                bool(out) and out[-1][1] == n - 1)


class _Decoder:
    """Central output symbol of the recoded marker code."""

    def __init__(self, plan):
        self.plan = plan

    def psi_hl(self, u):
        p = self.plan
        a, b = u[0], u[-1]
        T = p.targets[(p.psi[a], p.psi[b])]
        cls = p.hl.get(b)
        tail = u[p.N + 1:]
        if cls is not None and cls.count() and cls.contains(tail) and \
                all((u[k], u[k + 1]) in p.x_adj for k in range(p.N + 1)):
            return T.unrank(cls.rank(tail) % T.count())
        return T.unrank(0)

    def psi_lh(self, u):
        p = self.plan
        b, a = u[0], u[-1]
        T = p.targets[(p.psi[b], p.psi[a])]
        cls = p.lh.get(b)
        head = u[:p.i - p.N - 1]
        if cls is not None and cls.count() and cls.contains(head) and \
                all((u[k], u[k + 1]) in p.x_adj for k in range(len(head) - 1, len(u) - 1)):
            return T.unrank(cls.rank(head) % T.count())
        return T.unrank(0)

    def fill(self, c, d, j):
        p = self.plan
        return p.phi_fill[(p.psi[c], p.psi[d], j)]

    def center(self, w, c):
        p = self.plan
        N, I = p.N, p.I
        dec = stretches(w, p.Z_symbols, N, p.D, I)
        segs = dec.segments
        k = dec.find(c)
        s, e, kind = segs[k]

        def short(hs, he):
            lo = hs - N
            return self.fill(w[lo], w[he + N], he - hs + 1 + 2 * N)[c - lo]

        def low_high(hs):
            lo = hs - N
            return self.psi_lh(w[lo:hs + I])[c - lo]

        def high_low(he):
            lo = he - I + 1
            return self.psi_hl(w[lo:he + N + 1])[c - lo]

        if kind == "low":
            if s + N <= c <= e - N:
                return p.psi[w[c]]
            if c < s + N:
                hs, he, hk = segs[k - 1]
                return short(hs, he) if hk == "short" else high_low(he)
            hs, he, hk = segs[k + 1]
            return short(hs, he) if hk == "short" else low_high(hs)
        if kind == "short":
            return short(s, e)
        if c < s + I:
            return low_high(s)
        if c > e - I:
            return high_low(e)
        return p.psi[w[c]]


def marker_factor_code(plan):
    """The marker code on X: low stretches follow pi, long high stretches
    follow psi, short high stretches get fillers, and transitions between
    long high and low stretches use the surjections of the plan."""
    dec = _Decoder(plan)
    M = plan.radius
    R, off = plan.R, plan.offset

    def rule(window):
        # recoded symbol at j covers x_[j-off, j-off+R-1]
        rec = tuple(join_symbols(window[j:j + R]) for j in range(2 * M + 1))
        return dec.center(rec, M)

    return SlidingBlockCode(plan.X, plan.Y, M + off, M + R - 1 - off, rule)


# -- periodic reduction ----------------------------------------------------

def _phase_data(X):
    """Cover of X, its period and the phase of each symbol (which must be unique)."""
    from .spectral import _cover_base
    F = _cover_base(X)
    if not strongly_connected(F.base.states, F.base.edges):
        raise NotIrreducible("periodic reduction needs irreducible shifts")
    p, phase = period_classes(list(F.base.states), F.base.edges)
    sym = {}
    for e, s, _ in F.base.edges:
        sym.setdefault(F.labels[e], set()).add(phase[s])
    if any(len(v) > 1 for v in sym.values()):
        raise PlanInfeasible("a symbol occurs in two phase classes")
    return F, p, phase, {a: v.pop() for a, v in sym.items()}


def _phase_zero_power(F, phase, p):
    from .presentations import higher_power
    Fp, code = higher_power(F, p)
    keep = [s for s in Fp.base.states if phase[s] == 0]
    return trim_essential(Fp.restrict(keep)), code.split


def point_builder(C, E):
    """Mixing-case builder for a one-point target: the constant code."""
    targets = sorted(set(E.labels.values()))
    if len(targets) != 1:
        return None
    return SlidingBlockCode(C, E, 0, 0, {w: targets[0] for w in words(C, 1)})


def marker_builder(C, E):
    return marker_factor_code(build_plan(C, E))


def _existence_gate(X, Y, tol):
    from .verify import factor_existence
    rep = factor_existence(X, Y, tol)
    if rep.verdict == "yes":
        return rep
    p = rep.params
    if p.get("periodic_condition") is False:
        raise ConditionFailed("periodic condition", rep.witness)
    if p.get("thomsen") is False:
        raise ConditionFailed("phase condition", rep.witness)
    if p.get("y_sft") is False:
        raise ConditionFailed("target of finite type", rep.witness)
    raise ConditionFailed("entropy condition", rep.witness)


def reduce_periodic(X, Y, mixing_builder=None, tol=1e-9):
    """Factor code X -> Y assembled from a code between the phase-zero parts
    of the p-th power shifts (p = per(X)): on a point whose coordinate t has
    phase j, phi(x)_t is entry j of psi applied to the p-blocks aligned at t - j."""
    X, Y = as_labeled(X), as_labeled(Y)
    _existence_gate(X, Y, tol)
    F, p, phX, symX = _phase_data(X)
    G, q, phY, _ = _phase_data(Y)
    if p % q:
        raise ConditionFailed("phase condition", {"p": p, "q": q})
    C, _ = _phase_zero_power(F, phX, p)
    E, splitY = _phase_zero_power(G, phY, p)
    builders = [mixing_builder] if mixing_builder is not None else [point_builder, marker_builder]
    psi = None
    for build in builders:
        psi = build(C, E)
        if psi is not None:
            break
    if psi is None:
        raise PlanInfeasible("the mixing-case builder returned nothing")
    m, a = psi.memory, psi.anticipation
    memory, anticipation = m * p + p - 1, a * p + p - 1

    def rule(window):
        c = memory
        j = symX[window[c]]
        start = c - j - m * p
        blocks = tuple(join_symbols(window[start + k * p:start + (k + 1) * p])
                       for k in range(m + a + 1))
        return splitY[psi.symbol(blocks)][j]

    return SlidingBlockCode(X, Y, memory, anticipation, rule)


def construct_factor(X, Y, tol=1e-9):
    """Pipeline: a factor code X -> Y, by the marker construction when both are
    mixing and by the periodic reduction otherwise.  Returns (code, plan)."""
    X, Y = as_labeled(X), as_labeled(Y)
    cx, cy = classify(X), classify(Y)
    if cx["mixing"] and cy["mixing"]:
        _existence_gate(X, Y, tol)
        psi = point_builder(X, Y) if len(set(Y.labels.values())) == 1 else None
        if psi is not None:
            return psi, None
        plan = build_plan(X, Y, tol=tol)
        return marker_factor_code(plan), plan
    return reduce_periodic(X, Y, tol=tol), None
