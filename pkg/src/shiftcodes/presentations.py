"""Presentations of shift spaces.

An ``EdgeShiftPresentation`` is a directed multigraph; its bi-infinite
paths form an edge shift.  A ``LabeledPresentation`` adds a labeling of
the edges and presents the sofic shift of label sequences.  Symbols are
strings and words are tuples of symbols.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import EmptyShift, ParseError, ShiftError


def as_word(w):
    """Coerce a string (one symbol per character) or a sequence to a word."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def join_symbols(word):
    """Name for a block of symbols, used by recodings."""
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return "[" + ",".join(word) + "]"


@dataclass(frozen=True, eq=False)
class EdgeShiftPresentation:
    states: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        known = set(self.states)
        if len(known) != len(self.states):
            raise ShiftError("duplicate state ids")
        seen = set()
        for eid, src, dst in self.edges:
            if eid in seen:
                raise ShiftError(f"duplicate edge id {eid!r}")
            seen.add(eid)
            if src not in known or dst not in known:
                raise ShiftError(f"edge {eid!r} references an unknown state")

    @cached_property
    def index(self):
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def ends(self):
        return {eid: (src, dst) for eid, src, dst in self.edges}

    @cached_property
    def out_edges(self):
        out = {s: [] for s in self.states}
        for eid, src, dst in self.edges:
            out[src].append((eid, dst))
        return {s: tuple(v) for s, v in out.items()}

    @cached_property
    def in_edges(self):
        inc = {s: [] for s in self.states}
        for eid, src, dst in self.edges:
            inc[dst].append((eid, src))
        return {s: tuple(v) for s, v in inc.items()}

    def matrix(self):
        m = [[0] * len(self.states) for _ in self.states]
        for _, src, dst in self.edges:
            m[self.index[src]][self.index[dst]] += 1
        return m

    def reversed(self):
        return EdgeShiftPresentation(self.states, [(e, d, s) for e, s, d in self.edges])

    def is_essential(self):
        return all(self.out_edges[s] and self.in_edges[s] for s in self.states)

    def __eq__(self, other):
        if not isinstance(other, EdgeShiftPresentation):
            return NotImplemented
        return self.states == other.states and self.edges == other.edges

    def __repr__(self):
        return f"EdgeShiftPresentation({len(self.states)} states, {len(self.edges)} edges)"


@dataclass(frozen=True, eq=False)
class LabeledPresentation:
    base: EdgeShiftPresentation
    labels: dict
    alphabet: tuple = None
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        labels = dict(self.labels)
        for eid, _, _ in self.base.edges:
            if eid not in labels:
                raise ShiftError(f"edge {eid!r} has no label")
        labels = {eid: labels[eid] for eid, _, _ in self.base.edges}
        object.__setattr__(self, "labels", labels)
        used = set(labels.values())
        if self.alphabet is None:
            alphabet = tuple(sorted(used))
        else:
            alphabet = tuple(self.alphabet)
            missing = used - set(alphabet)
            if missing:
                raise ShiftError(f"labels outside the alphabet: {sorted(missing)}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def states(self):
        return self.base.states

    @property
    def edges(self):
        return self.base.edges

    @cached_property
    def moves(self):
        """state -> tuple of (edge id, label, target)."""
        out = {s: [] for s in self.base.states}
        for eid, src, dst in self.base.edges:
            out[src].append((eid, self.labels[eid], dst))
        return {s: tuple(v) for s, v in out.items()}

    @cached_property
    def deterministic(self):
        for s, mv in self.moves.items():
            labs = [lab for _, lab, _ in mv]
            if len(labs) != len(set(labs)):
                return False
        return True

    @cached_property
    def injective(self):
        return len(set(self.labels.values())) == len(self.labels)

    def reversed(self):
        return LabeledPresentation(self.base.reversed(), self.labels, self.alphabet, self.flags)

    def restrict(self, states=None, edges=None):
        """Sub-presentation on the given states and edges (not trimmed)."""
        keep_s = set(self.base.states if states is None else states)
        keep_e = None if edges is None else set(edges)
        es = [(e, s, d) for e, s, d in self.base.edges
              if s in keep_s and d in keep_s and (keep_e is None or e in keep_e)]
        base = EdgeShiftPresentation([s for s in self.base.states if s in keep_s], es)
        return LabeledPresentation(base, {e: self.labels[e] for e, _, _ in es},
                                   self.alphabet, self.flags)

    def __repr__(self):
        return (f"LabeledPresentation({len(self.base.states)} states, "
                f"{len(self.base.edges)} edges, alphabet={list(self.alphabet)})")


# -- constructors ----------------------------------------------------------

def edge_shift(states, edges):
    return EdgeShiftPresentation(states, edges)


def from_matrix(matrix):
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ShiftError("adjacency matrix must be square and nonempty")
    states = [str(i) for i in range(n)]
    edges = []
    k = 0
    for i, row in enumerate(matrix):
        for j, mult in enumerate(row):
            if mult < 0:
                raise ShiftError("negative matrix entry")
            for _ in range(mult):
                edges.append((f"e{k}", states[i], states[j]))
                k += 1
    return EdgeShiftPresentation(states, edges)


def as_labeled(X):
    """View an edge shift as a labeled presentation whose symbols are the edge ids."""
    if isinstance(X, LabeledPresentation):
        return X
    return LabeledPresentation(X, {e: e for e, _, _ in X.edges})


def labeled(states, edges, alphabet=None):
    """Build from (id, src, dst, label) quadruples."""
    base = EdgeShiftPresentation(states, [(e, s, d) for e, s, d, _ in edges])
    return LabeledPresentation(base, {e: lab for e, _, _, lab in edges}, alphabet)


def vertex_shift(symbols, allowed):
    """1-step shift: states are symbols, an edge a->b carries label b."""
    symbols = list(symbols)
    ok = allowed if callable(allowed) else (lambda a, b: (a, b) in allowed)
    edges = [(f"{a}>{b}", a, b, b) for a in symbols for b in symbols if ok(a, b)]
    return trim_essential(labeled(symbols, edges, sorted(symbols)))


def full_shift(symbols):
    symbols = [str(s) for s in symbols]
    return labeled(["*"], [(s, "*", "*", s) for s in symbols], symbols)


def golden_mean():
    return vertex_shift("01", lambda a, b: not (a == "1" and b == "1"))


def even_shift():
    return labeled(["P", "Q"], [("p1", "P", "P", "1"), ("p0", "P", "Q", "0"),
                                ("q0", "Q", "P", "0")])


def cycle(symbols):
    symbols = list(symbols)
    n = len(symbols)
    states = [f"c{i}" for i in range(n)]
    return labeled(states, [(f"c{i}{symbols[i]}", states[i], states[(i + 1) % n], symbols[i])
                            for i in range(n)])


# -- trimming --------------------------------------------------------------

def _essential_states(states, edges):
    alive = set(states)
    while True:
        has_out = {s for _, s, d in edges if s in alive and d in alive}
        has_in = {d for _, s, d in edges if s in alive and d in alive}
        nxt = alive & has_out & has_in
        if nxt == alive:
            return alive
        alive = nxt


def trim_essential(X):
    """Remove states without incoming or outgoing edges until stable."""
    if isinstance(X, LabeledPresentation):
        alive = _essential_states(X.base.states, X.base.edges)
        if not alive:
            raise EmptyShift("no bi-infinite path survives trimming")
        return X.restrict(alive)
    alive = _essential_states(X.states, X.edges)
    if not alive:
        raise EmptyShift("no bi-infinite path survives trimming")
    return EdgeShiftPresentation([s for s in X.states if s in alive],
                                 [e for e in X.edges if e[1] in alive and e[2] in alive])


# -- forbidden words -------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenWordSpec:
    alphabet: tuple
    forbidden: frozenset

    def __post_init__(self):
        alphabet = tuple(str(a) for a in self.alphabet)
        forbidden = frozenset(as_word(w) for w in self.forbidden)
        for w in forbidden:
            if not w:
                raise ShiftError("the empty word cannot be forbidden")
            if any(s not in alphabet for s in w):
                raise ShiftError(f"forbidden word {w} uses symbols outside the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "forbidden", forbidden)


def _avoids(word, forbidden, lengths):
    n = len(word)
    for L in lengths:
        for i in range(n - L + 1):
            if word[i:i + L] in forbidden:
                return False
    return True


def compile_forbidden(spec):
    """Presentation of the shift avoiding ``spec.forbidden``.

    States are the allowed (m-1)-words, m the longest forbidden length;
    reading a symbol shifts the window.  The result is trimmed.
    """
    F = spec.forbidden
    lengths = sorted({len(w) for w in F})
    m = max(lengths, default=1)
    k = max(m - 1, 0)
    states = [w for w in product(spec.alphabet, repeat=k) if _avoids(w, F, lengths)]
    name = {w: join_symbols(w) if w else "." for w in states}
    edges = []
    for w in states:
        for a in spec.alphabet:
            ext = w + (a,)
            # only windows containing the new symbol can be new violations
            if any(ext[len(ext) - L:] in F for L in lengths if L <= len(ext)):
                continue
            dst = ext[1:] if k else ()
            if dst in name:
                edges.append((f"{name[w]}|{a}", name[w], name[dst], a))
    X = labeled([name[w] for w in states], edges, spec.alphabet)
    return trim_essential(X)


# -- recodings -------------------------------------------------------------

def _paths(X, length):
    """All edge paths of the given length (length 0 gives one empty path per state)."""
    if length == 0:
        return [((), s, s) for s in X.base.states]
    out = []
    stack = [((e,), X.base.ends[e][0], X.base.ends[e][1]) for e, _, _ in X.base.edges]
    while stack:
        p, s, d = stack.pop()
        if len(p) == length:
            out.append((p, s, d))
            continue
        for e, _ in X.base.out_edges[d]:
            stack.append((p + (e,), s, X.base.ends[e][1]))
    out.sort()
    return out


def _path_name(p):
    return "(" + ".".join(p) + ")"


def higher_block(X, N):
    """N-th higher block presentation and the recoding code X -> X^[N]."""
    from .codes import SlidingBlockCode
    from .language import words
    if N < 1:
        raise ShiftError("block length must be positive")
    X = as_labeled(X)
    if N == 1:
        return X, SlidingBlockCode.identity(X)
    states = {p: _path_name(p) for p, _, _ in _paths(X, N)}
    edges = []
    for p, s, d in _paths(X, N + 1):
        sym = join_symbols(tuple(X.labels[e] for e in p[1:]))
        edges.append((_path_name(p), states[p[:-1]], states[p[1:]], sym))
    XN = trim_essential(labeled(sorted(states.values()), edges))
    table = {w: join_symbols(w) for w in words(X, N)}
    return XN, SlidingBlockCode(X, XN, 0, N - 1, table)


class PowerCode:
    """The p-th higher power recoding, x -> (x[ip:ip+p])_i."""

    def __init__(self, domain, codomain, p):
        self.domain = domain
        self.codomain = codomain
        self.p = p
        self.split = {}

    def apply(self, w):
        w = as_word(w)
        if len(w) % self.p:
            raise ShiftError("word length must be a multiple of the power")
        out = []
        for i in range(0, len(w), self.p):
            block = w[i:i + self.p]
            sym = join_symbols(block)
            self.split[sym] = block
            out.append(sym)
        return tuple(out)

    def invert(self, w):
        out = []
        for sym in w:
            out.extend(self.split[sym])
        return tuple(out)


def higher_power(X, p):
    """p-th higher power presentation and its recoding."""
    if p < 1:
        raise ShiftError("power must be positive")
    X = as_labeled(X)
    if p == 1:
        code = PowerCode(X, X, 1)
        code.split = {a: (a,) for a in X.alphabet}
        return X, code
    edges = []
    split = {}
    for path, s, d in _paths(X, p):
        block = tuple(X.labels[e] for e in path)
        sym = join_symbols(block)
        split[sym] = block
        edges.append((_path_name(path), s, d, sym))
    Xp = trim_essential(labeled(X.base.states, edges))
    code = PowerCode(X, Xp, p)
    code.split = split
    return Xp, code


# -- S-gap shifts ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SGapDescriptor:
    """Gap set S of an S-gap shift.

    ``kind`` is "explicit" (``members`` a finite sorted tuple) or "rule"
    (``members`` a predicate consulted only up to ``bound``).  ``sup_gap`` and
    ``gcd`` optionally record known values for rule-based sets (``sup_gap``
    may be ``math.inf``).
    """
    kind: str
    members: object
    bound: int = None
    name: str = ""
    sup_gap: object = None
    gcd: int = None

    def __post_init__(self):
        if self.kind == "explicit":
            m = tuple(sorted(set(int(n) for n in self.members)))
            if any(n < 0 for n in m):
                raise ShiftError("gaps must be nonnegative")
            object.__setattr__(self, "members", m)
            if self.bound is None:
                object.__setattr__(self, "bound", m[-1] if m else 0)
            elif m and self.bound < m[-1]:
                raise ShiftError("bound below the largest gap")
        elif self.kind == "rule":
            if not callable(self.members) or self.bound is None or self.bound < 0:
                raise ShiftError("rule-based S needs a predicate and a bound")
        else:
            raise ShiftError(f"unknown descriptor kind {self.kind!r}")

    def gaps(self, limit=None):
        limit = self.bound if limit is None else min(limit, self.bound)
        if self.kind == "explicit":
            return [n for n in self.members if n <= limit]
        return [n for n in range(limit + 1) if self.members(n)]


def sgap_explicit(members, name=""):
    return SGapDescriptor("explicit", members, name=name)


def sgap_rule(predicate, bound, name="", sup_gap=None, gcd=None):
    return SGapDescriptor("rule", predicate, bound, name, sup_gap, gcd)


def sgap_presentation(S, truncation):
    """Presentation of X(S), or of X(S ∩ [0, truncation]) flagged as approximate.

    State k means "k zeros since the last 1"; a 1 may be read at state k iff
    k is a gap.
    """
    if truncation < 1 and S.kind == "rule":
        raise ShiftError("truncation must be positive")
    gaps = S.gaps(truncation) if S.kind == "rule" else list(S.members)
    if S.kind == "explicit" and gaps and truncation < gaps[-1]:
        raise ShiftError("truncation below the largest gap")
    if not gaps:
        raise EmptyShift("S is empty")
    top = gaps[-1]
    states = [f"z{k}" for k in range(top + 1)]
    edges = [(f"z{k}0", states[k], states[k + 1], "0") for k in range(top)]
    edges += [(f"z{k}1", states[k], states[0], "1") for k in gaps]
    X = labeled(states, edges, ["0", "1"])
    if S.kind == "rule":
        X = LabeledPresentation(X.base, X.labels, X.alphabet, {"approximate"})
    return trim_essential(X)


# -- documents -------------------------------------------------------------

def from_document(doc):
    """Parse a presentation document (dict decoded from JSON)."""
    if not isinstance(doc, dict) or not doc:
        raise ParseError("presentation document must be a nonempty object", "$")
    if "matrix" in doc:
        mat = doc["matrix"]
        if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
            raise ParseError("matrix must be an array of integer rows", "$.matrix")
        try:
            base = from_matrix([[int(v) for v in row] for row in mat])
        except (ValueError, TypeError, ShiftError) as exc:
            raise ParseError(str(exc), "$.matrix") from None
        return as_labeled(base)
    if "states" not in doc or "edges" not in doc:
        raise ParseError("expected 'states' and 'edges' (or 'matrix')", "$")
    states = doc["states"]
    if not isinstance(states, list):
        raise ParseError("states must be an array", "$.states")
    edges = []
    for i, e in enumerate(doc["edges"]):
        loc = f"$.edges[{i}]"
        if not isinstance(e, dict) or not {"id", "src", "dst"} <= set(e):
            raise ParseError("edge needs id, src and dst", loc)
        edges.append((str(e["id"]), str(e["src"]), str(e["dst"]),
                      str(e.get("label", e["id"]))))
    alphabet = doc.get("alphabet")
    try:
        return labeled([str(s) for s in states], edges,
                       None if alphabet is None else [str(a) for a in alphabet])
    except ShiftError as exc:
        raise ParseError(str(exc), "$") from None


def to_document(X):
    X = as_labeled(X)
    return {
        "states": list(X.base.states),
        "edges": [{"id": e, "src": s, "dst": d, "label": X.labels[e]}
                  for e, s, d in X.base.edges],
        "alphabet": list(X.alphabet),
    }
