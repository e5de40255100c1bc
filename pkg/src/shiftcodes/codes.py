"""Sliding block codes between presentations."""

from dataclasses import dataclass

from .errors import EmptyShift, ParseError, ShiftError, TooShort, WordNotInLanguage
from .language import Answer, count_words, in_language, language_difference, words
from .presentations import (LabeledPresentation, as_labeled, as_word, from_document,
                            higher_block, join_symbols, labeled, to_document,
                            trim_essential)


class SlidingBlockCode:
    """phi(x)_i = table[x_{i-m} ... x_{i+a}].

    ``table`` is either a dict over the admissible windows or a callable on
    window tuples (for codes whose windows are too many to list).
    """

    def __init__(self, domain, codomain, memory, anticipation, table, validate=True):
        self.domain = as_labeled(domain)
        self.codomain = as_labeled(codomain)
        self.memory = int(memory)
        self.anticipation = int(anticipation)
        if self.memory < 0 or self.anticipation < 0:
            raise ShiftError("memory and anticipation must be nonnegative")
        if callable(table):
            self.rule = table
            self.table = None
        else:
            self.rule = None
            self.table = {as_word(k): v for k, v in table.items()}
            if validate:
                self._validate()

    def _validate(self, cap=50000):
        n = self.window
        total, _ = count_words(self.domain, n)
        if total > cap:
            return
        admissible = set(words(self.domain, n))
        keys = set(self.table)
        if keys != admissible:
            extra = sorted(keys - admissible)[:1]
            missing = sorted(admissible - keys)[:1]
            raise ShiftError(f"table must cover exactly the admissible {n}-words "
                             f"(missing {missing}, inadmissible {extra})")
        bad = [v for v in self.table.values() if v not in self.codomain.alphabet]
        if bad:
            raise ShiftError(f"image symbol {bad[0]!r} outside the codomain alphabet")

    @classmethod
    def identity(cls, X):
        X = as_labeled(X)
        return cls(X, X, 0, 0, {(a,): a for a in X.alphabet
                                if in_language(X, (a,))})

    @property
    def window(self):
        return self.memory + self.anticipation + 1

    @property
    def is_one_block(self):
        return self.window == 1

    def symbol(self, block):
        block = tuple(block)
        if self.rule is not None:
            return self.rule(block)
        try:
            return self.table[block]
        except KeyError:
            raise WordNotInLanguage(block) from None

    def __repr__(self):
        kind = "rule" if self.rule is not None else f"{len(self.table)} windows"
        return f"SlidingBlockCode(m={self.memory}, a={self.anticipation}, {kind})"


def apply(code, w, check=True):
    """Central image of w, of length |w| - m - a."""
    w = as_word(w)
    n = code.window
    if len(w) < n:
        raise TooShort(f"need at least {n} symbols, got {len(w)}")
    if check and not in_language(code.domain, w):
        raise WordNotInLanguage(w)
    return tuple(code.symbol(w[i:i + n]) for i in range(len(w) - n + 1))


def compose(outer, inner):
    """outer after inner, as a rule-based code with the combined window."""
    m = outer.memory + inner.memory
    a = outer.anticipation + inner.anticipation

    def rule(block):
        return outer.symbol(apply(inner, block, check=False))

    return SlidingBlockCode(inner.domain, outer.codomain, m, a, rule)


def tabulate(code, cap=200000):
    """Turn a rule-based code into a table-based one."""
    if code.table is not None:
        return code
    ws = words(code.domain, code.window, cap)
    return SlidingBlockCode(code.domain, code.codomain, code.memory, code.anticipation,
                            {w: code.symbol(w) for w in ws})


def recode_one_block(code):
    """(one-block code on the window-length higher block presentation, the recoding)."""
    if code.is_one_block:
        return code, SlidingBlockCode.identity(code.domain)
    XN, conj = higher_block(code.domain, code.window)
    table = {}
    for w in words(code.domain, code.window):
        table[(join_symbols(w),)] = code.symbol(w)
    return SlidingBlockCode(XN, code.codomain, 0, 0, table), conj


@dataclass(frozen=True)
class FiberProduct:
    sigma_presentation: LabeledPresentation
    proj1: SlidingBlockCode
    proj2: SlidingBlockCode


def fiber_product(phi, pi):
    """{(x, z) : phi(x) = pi(z)} for 1-block codes with a common codomain."""
    if not (phi.is_one_block and pi.is_one_block):
        raise ShiftError("fiber product needs 1-block codes")
    X, Z = phi.domain, pi.domain
    states = [f"{s}&{t}" for s in X.base.states for t in Z.base.states]
    edges = []
    first, second = {}, {}
    for e, s, d in X.base.edges:
        a = X.labels[e]
        for f, t, u in Z.base.edges:
            c = Z.labels[f]
            if phi.symbol((a,)) != pi.symbol((c,)):
                continue
            sym = join_symbols((a, c)) if len(a) == len(c) == 1 else f"({a}|{c})"
            first[sym], second[sym] = a, c
            edges.append((f"{e}&{f}", f"{s}&{t}", f"{d}&{u}", sym))
    if not edges:
        raise EmptyShift("no compatible pairs")
    S = trim_essential(labeled(states, edges))
    used = set(S.labels.values())
    p1 = SlidingBlockCode(S, X, 0, 0, {(k,): v for k, v in first.items() if k in used})
    p2 = SlidingBlockCode(S, Z, 0, 0, {(k,): v for k, v in second.items() if k in used})
    return FiberProduct(S, p1, p2)


def image_presentation(code):
    """Domain presentation relabeled by the images of its symbols."""
    if not code.is_one_block:
        code, _ = recode_one_block(code)
    X = code.domain
    labels = {e: code.symbol((X.labels[e],)) for e, _, _ in X.base.edges}
    alphabet = sorted(set(code.codomain.alphabet) | set(labels.values()))
    return LabeledPresentation(X.base, labels, alphabet)


def is_factor_onto(code, Y=None):
    """Answer(ok, witness): witness is a shortest word in exactly one language."""
    Y = code.codomain if Y is None else as_labeled(Y)
    diff = language_difference(image_presentation(code), Y)
    return Answer(diff is None, diff)


# -- documents -------------------------------------------------------------

def code_to_document(code, cap=200000):
    code = tabulate(code, cap)
    return {
        "domain": to_document(code.domain),
        "codomain": to_document(code.codomain),
        "memory": code.memory,
        "anticipation": code.anticipation,
        "table": [[list(w), s] for w, s in sorted(code.table.items())],
    }


def code_from_document(doc):
    if not isinstance(doc, dict):
        raise ParseError("code document must be an object", "$")
    for key in ("domain", "codomain", "table"):
        if key not in doc:
            raise ParseError(f"missing {key!r}", "$")
    X = from_document(doc["domain"])
    Y = from_document(doc["codomain"])
    table = {}
    for i, row in enumerate(doc["table"]):
        if not isinstance(row, list) or len(row) != 2:
            raise ParseError("table rows are [window, symbol]", f"$.table[{i}]")
        window, sym = row
        table[as_word(window if isinstance(window, str) else [str(s) for s in window])] = str(sym)
    try:
        return SlidingBlockCode(X, Y, doc.get("memory", 0), doc.get("anticipation", 0), table)
    except ShiftError as exc:
        raise ParseError(str(exc), "$.table") from None
