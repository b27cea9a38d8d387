"""Exact noncommutative algebra over the idempotent base ring R = ⊕_v k e_v.

Words are tuples of generator symbols composed right to left, like functions:
in the word ``(g1, g2)`` the generator ``g2`` acts first, so the word runs
from ``source(g2)`` to ``target(g1)`` and is composable iff
``source(g1) == target(g2)``.  The idempotent e_v is the one-symbol word
``("id(v)",)``.  Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Word = tuple[str, ...]

DEFAULT_STEP_BUDGET = 10**6


class AlgebraError(ValueError):
    pass


class RewriteBudgetExceeded(AlgebraError):
    pass


def idem(v: str) -> str:
    return f"id({v})"


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    tgt: str
    degree: int = 0


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: tuple[tuple[Word, Fraction], ...]


class Presentation:
    """A finitely presented algebra: generators, rewrite rules and named macros.

    ``rules`` are ``(pattern, rhs)`` pairs where ``rhs`` is an expression in the
    grammar of :mod:`mppa.ncalg.expr` or a mapping ``word -> coefficient``.
    ``macros`` and ``inverses`` map names to expressions and are expanded lazily,
    so a :meth:`free_copy` re-reads them without any rewriting.
    """

    def __init__(
        self,
        name: str,
        vertices: Iterable[str],
        generators: Iterable[Generator],
        rules: Iterable[tuple[Word, object]] = (),
        macros: Mapping[str, str] | None = None,
        inverses: Mapping[str, str] | None = None,
        *,
        free: bool = False,
        step_budget: int = DEFAULT_STEP_BUDGET,
    ):
        self.name = name
        self.vertices = tuple(vertices)
        self.generators = {g.name: g for g in generators}
        self.macros = dict(macros or {})
        self.inverses = dict(inverses or {})
        self.free = free
        self.step_budget = step_budget
        self._info: dict[str, tuple[str, str, int]] = {}
        for v in self.vertices:
            self._info[idem(v)] = (v, v, 0)
        for g in self.generators.values():
            if g.src not in self.vertices or g.tgt not in self.vertices:
                raise AlgebraError(f"generator {g.name!r} has an endpoint outside {self.vertices}")
            if g.name in self._info:
                raise AlgebraError(f"duplicate symbol {g.name!r}")
            self._info[g.name] = (g.src, g.tgt, g.degree)
        self._raw_rules = list(rules)
        self._rules: list[Rule] | None = None
        self._by_first: dict[str, list[Rule]] = {}
        self._nf_cache: dict[Word, dict[Word, Fraction]] = {}
        self._macro_cache: dict[str, NCElement] = {}
        self._confluent: bool | None = None
        self._steps = 0
        if free:
            self._rules = []

    # -- structure ---------------------------------------------------------

    @property
    def rules(self) -> list[Rule]:
        if self._rules is None:
            self._rules = []
            for lhs, rhs in self._raw_rules:
                lhs = tuple(lhs)
                if isinstance(rhs, str):
                    from .expr import evaluate
                    terms = evaluate(rhs, self.free_copy()).terms
                else:
                    terms = {tuple(w): Fraction(c) for w, c in dict(rhs).items()}
                rule = Rule(lhs, tuple(sorted(terms.items())))
                self._check_rule(rule)
                self._rules.append(rule)
                self._by_first.setdefault(lhs[0], []).append(rule)
            for rs in self._by_first.values():
                rs.sort(key=lambda r: len(r.lhs))
        return self._rules

    def _check_rule(self, rule: Rule) -> None:
        if not self.composable(rule.lhs) or self.is_idempotent(rule.lhs):
            raise AlgebraError(f"rule pattern {rule.lhs} must be a composable non-idempotent word")
        key = self.block(rule.lhs), self.degree(rule.lhs)
        for w, _ in rule.rhs:
            if (self.block(w), self.degree(w)) != key:
                raise AlgebraError(f"rule {rule.lhs} changes endpoints or degree")

    def free_copy(self) -> "Presentation":
        """Same generators and macros, no rewrite rules: the free path algebra."""
        return Presentation(
            self.name + "/free", self.vertices, self.generators.values(), (),
            self.macros, self.inverses, free=True,
        )

    def with_generators(self, name: str, extra: Iterable[Generator]) -> "Presentation":
        return Presentation(
            name, self.vertices, list(self.generators.values()) + list(extra),
            self._raw_rules, self.macros, self.inverses, step_budget=self.step_budget,
        )

    def symbol(self, s: str) -> tuple[str, str, int]:
        try:
            return self._info[s]
        except KeyError:
            raise AlgebraError(f"unknown symbol {s!r} in {self.name}") from None

    def is_idempotent(self, w: Word) -> bool:
        return len(w) == 1 and w[0].startswith("id(") and w[0] in self._info

    def source(self, w: Word) -> str:
        return self.symbol(w[-1])[0]

    def target(self, w: Word) -> str:
        return self.symbol(w[0])[1]

    def block(self, w: Word) -> tuple[str, str]:
        """``(target, source)`` of a word, the same order a matrix block is indexed."""
        return self.target(w), self.source(w)

    def degree(self, w: Word) -> int:
        return sum(self.symbol(s)[2] for s in w)

    def composable(self, w: Word) -> bool:
        if not w:
            return False
        return all(self.symbol(a)[0] == self.symbol(b)[1] for a, b in zip(w, w[1:]))

    def concat(self, w1: Word, w2: Word) -> Word | None:
        """Product word ``w1·w2`` (``w2`` first), or ``None`` if not composable."""
        if self.source(w1) != self.target(w2):
            return None
        if self.is_idempotent(w1):
            return w2
        if self.is_idempotent(w2):
            return w1
        return w1 + w2

    # -- rewriting ---------------------------------------------------------

    def _find(self, w: Word) -> tuple[int, Rule] | None:
        self.rules
        for i, s in enumerate(w):
            for rule in self._by_first.get(s, ()):
                n = len(rule.lhs)
                if w[i:i + n] == rule.lhs:
                    return i, rule
        return None

    def nf_word(self, w: Word) -> dict[Word, Fraction]:
        if self.free:
            return {w: Fraction(1)}
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        self._steps = 0
        try:
            result = self._nf_word(w)
        except RecursionError:
            raise RewriteBudgetExceeded(f"rewriting {w} does not terminate") from None
        return result

    def _nf_word(self, w: Word) -> dict[Word, Fraction]:
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        hit = self._find(w)
        if hit is None:
            result = {w: Fraction(1)}
        else:
            self._steps += 1
            if self._steps > self.step_budget:
                raise RewriteBudgetExceeded(f"rewrite budget {self.step_budget} exceeded on {w}")
            i, rule = hit
            prefix, suffix = w[:i], w[i + len(rule.lhs):]
            result = {}
            for rw, c in rule.rhs:
                new = self._splice(prefix, rw, suffix)
                for w2, c2 in self._nf_word(new).items():
                    result[w2] = result.get(w2, 0) + c * c2
            result = {k: v for k, v in result.items() if v}
        self._nf_cache[w] = result
        return result

    def _splice(self, prefix: Word, middle: Word, suffix: Word) -> Word:
        if self.is_idempotent(middle):
            return prefix + suffix if (prefix or suffix) else middle
        return prefix + middle + suffix

    def rewrite_once(self, w: Word) -> dict[Word, Fraction] | None:
        hit = self._find(w)
        if hit is None:
            return None
        i, rule = hit
        return {self._splice(w[:i], rw, w[i + len(rule.lhs):]): c for rw, c in rule.rhs}

    # -- element constructors ---------------------------------------------

    def zero(self) -> "NCElement":
        return NCElement(self, {})

    def one(self) -> "NCElement":
        return NCElement(self, {(idem(v),): Fraction(1) for v in self.vertices})

    def e(self, v: str) -> "NCElement":
        if v not in self.vertices:
            raise AlgebraError(f"unknown vertex {v!r}")
        return NCElement(self, {(idem(v),): Fraction(1)})

    def gen(self, name: str) -> "NCElement":
        self.symbol(name)
        return self.word((name,))

    def word(self, w: Iterable[str], coeff=1) -> "NCElement":
        w = tuple(w)
        if not self.composable(w):
            return self.zero()
        return NCElement.from_terms(self, {w: Fraction(coeff)})

    def macro(self, name: str) -> "NCElement":
        if name not in self._macro_cache:
            if name not in self.macros:
                raise AlgebraError(f"unknown macro {name!r} in {self.name}")
            from .expr import evaluate
            self._macro_cache[name] = _PENDING
            self._macro_cache[name] = evaluate(self.macros[name], self)
        value = self._macro_cache[name]
        if value is _PENDING:
            raise AlgebraError(f"macro {name!r} is defined in terms of itself")
        return value

    def inverse_of(self, name: str) -> "NCElement":
        if name not in self.inverses:
            raise AlgebraError(f"no inverse registered for {name!r} in {self.name}")
        from .expr import evaluate
        return evaluate(self.inverses[name], self)

    def parse(self, text: str) -> "NCElement":
        from .expr import evaluate
        return evaluate(text, self)

    # -- confluence --------------------------------------------------------

    @property
    def confluent(self) -> bool:
        if self._confluent is None:
            self._confluent = all(p.joinable for p in critical_pairs(self))
        return self._confluent

    def __repr__(self) -> str:
        return f"Presentation({self.name!r})"


_PENDING = object()


class NCElement:
    """A finite ℚ-linear combination of words, kept in normal form."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: Presentation, terms: Mapping[Word, Fraction]):
        self.pres = pres
        self.terms = dict(terms)

    @classmethod
    def from_terms(cls, pres: Presentation, terms: Mapping[Word, Fraction], reduce: bool = True) -> "NCElement":
        if not reduce or pres.free:
            return cls(pres, {w: Fraction(c) for w, c in terms.items() if c})
        out: dict[Word, Fraction] = {}
        for w, c in terms.items():
            if not c:
                continue
            for w2, c2 in pres.nf_word(w).items():
                out[w2] = out.get(w2, 0) + c * c2
        return cls(pres, {w: c for w, c in out.items() if c})

    def _check(self, other: "NCElement") -> None:
        if other.pres is not self.pres:
            raise AlgebraError(f"presentation mismatch: {self.pres.name} vs {other.pres.name}")

    def __add__(self, other: "NCElement") -> "NCElement":
        if isinstance(other, (int, Fraction)):
            other = self.pres.one() * other
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCElement(self.pres, {w: c for w, c in out.items() if c})

    __radd__ = __add__

    def __neg__(self) -> "NCElement":
        return NCElement(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCElement") -> "NCElement":
        return self + (-other)

    def __rsub__(self, other) -> "NCElement":
        return (-self) + other

    def __mul__(self, other) -> "NCElement":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return NCElement(self.pres, {w: c * v for w, v in self.terms.items()} if c else {})
        self._check(other)
        pres = self.pres
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = pres.concat(w1, w2)
                if w is None:
                    continue
                for w3, c3 in pres.nf_word(w).items():
                    out[w3] = out.get(w3, 0) + c1 * c2 * c3
        return NCElement(pres, {w: c for w, c in out.items() if c})

    def __rmul__(self, other) -> "NCElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "NCElement":
        result = self.pres.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.pres.one() * other
        if not isinstance(other, NCElement):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda t: word_key(self.pres, t[0])))

    def is_zero(self) -> bool:
        return not self.terms

    def sandwich(self, v: str, w: str | None = None) -> "NCElement":
        """The block e_v · self · e_w (``w`` defaults to ``v``)."""
        w = v if w is None else w
        return NCElement(self.pres, {
            word: c for word, c in self.terms.items() if self.pres.block(word) == (v, w)
        })

    def blocks(self) -> dict[tuple[str, str], "NCElement"]:
        out: dict[tuple[str, str], dict[Word, Fraction]] = {}
        for word, c in self.terms.items():
            out.setdefault(self.pres.block(word), {})[word] = c
        return {k: NCElement(self.pres, v) for k, v in out.items()}

    def reduce(self) -> "NCElement":
        return NCElement.from_terms(self.pres, self.terms)

    def __str__(self) -> str:
        from .expr import format_element
        return format_element(self)

    def __repr__(self) -> str:
        return f"NCElement({self.pres.name}: {self})"


def word_key(pres: Presentation, w: Word) -> tuple:
    return (0 if pres.is_idempotent(w) else len(w), w)


def nf(a: NCElement) -> NCElement:
    return a.reduce()


def equals(a: NCElement, b: NCElement, *, trials: int = 20, seed: int = 0) -> tuple[bool, str]:
    """Compare two elements; exact when the rules are certified confluent.

    Returns ``(verdict, method)`` where ``method`` is ``"exact"`` or
    ``"probabilistic"`` (matrix-representation oracle fallback).
    """
    a._check(b)
    if a.pres.confluent:
        return (a - b).reduce().is_zero(), "exact"
    from ..repvar import oracle_equals
    verdict = oracle_equals(a, b, trials=trials, seed=seed)
    return verdict.equal, "probabilistic"


# -- morphisms --------------------------------------------------------------


class AlgebraMorphism:
    """An algebra map given on generators, together with a map on vertices."""

    def __init__(
        self,
        source: Presentation,
        target: Presentation,
        images: Mapping[str, NCElement | str],
        vertex_map: Mapping[str, str] | None = None,
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.name = name or f"{source.name}->{target.name}"
        if vertex_map is None:
            vertex_map = {v: v for v in source.vertices}
        self.vertex_map = dict(vertex_map)
        self.images: dict[str, NCElement] = {}
        for g in source.generators:
            img = images.get(g)
            if img is None:
                raise AlgebraError(f"morphism {self.name}: no image for generator {g!r}")
            self.images[g] = target.parse(img) if isinstance(img, str) else img
        self._cache: dict[Word, NCElement] = {}

    def apply_word(self, w: Word) -> NCElement:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        src = self.source
        if src.is_idempotent(w):
            result = self.target.e(self.vertex_map[src.source(w)])
        else:
            result = self.images[w[0]]
            for s in w[1:]:
                result = result * self.images[s]
        self._cache[w] = result
        return result

    def __call__(self, a: NCElement | str) -> NCElement:
        if isinstance(a, str):
            a = self.source.parse(a)
        out = self.target.zero()
        for w, c in a.terms.items():
            out = out + self.apply_word(w) * c
        return out

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``other ∘ self``."""
        return AlgebraMorphism(
            self.source, other.target,
            {g: other(img) for g, img in self.images.items()},
            {v: other.vertex_map[w] for v, w in self.vertex_map.items()},
            name=f"{other.name}∘{self.name}",
        )

    def __repr__(self) -> str:
        return f"AlgebraMorphism({self.name})"


def check_morphism(m: AlgebraMorphism) -> str | None:
    """``None`` if *m* is well defined, else a description of the first violated condition."""
    src, tgt = m.source, m.target
    for v in src.vertices:
        if m.vertex_map.get(v) not in tgt.vertices:
            return f"vertex {v!r} has no image"
    for name, g in src.generators.items():
        img = m.images[name]
        want = (m.vertex_map[g.tgt], m.vertex_map[g.src])
        for w in img.terms:
            if tgt.block(w) != want or tgt.degree(w) != g.degree:
                return f"image of {name!r} leaves the block e_{want[0]}·B·e_{want[1]} or changes degree"
    for rule in src.rules:
        lhs = m.apply_word(rule.lhs)
        rhs = tgt.zero()
        for w, c in rule.rhs:
            rhs = rhs + m.apply_word(w) * c
        same, _ = equals(lhs, rhs)
        if not same:
            from .expr import format_word
            return f"violated rule {format_word(src, rule.lhs)} -> {NCElement(src, dict(rule.rhs))}"
    return None


# -- critical pairs ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalPair:
    overlap: Word
    left: NCElement
    right: NCElement
    joinable: bool


def _overlaps(r1: Rule, r2: Rule) -> Iterator[tuple[Word, int, int]]:
    """Words covered by both patterns: ``(word, pos1, pos2)``."""
    a, b = r1.lhs, r2.lhs
    for k in range(1, min(len(a), len(b))):
        if a[-k:] == b[:k]:
            yield a + b[k:], 0, len(a) - k
    if r1 is not r2 and len(b) <= len(a):
        for i in range(len(a) - len(b) + 1):
            if a[i:i + len(b)] == b:
                yield a, 0, i


def critical_pairs(pres: Presentation, depth: int = 12) -> list[CriticalPair]:
    """Enumerate overlaps of rule patterns and test whether both one-step reducts join.

    ``depth`` bounds the number of rewrite steps spent normalising each reduct.
    """
    out = []
    rules = pres.rules
    probe = Presentation(
        pres.name, pres.vertices, pres.generators.values(),
        [(r.lhs, dict(r.rhs)) for r in rules], step_budget=depth,
    )
    for r1, r2 in itertools.product(rules, repeat=2):
        for word, i, j in _overlaps(r1, r2):
            if not pres.composable(word):
                continue
            sides = []
            for rule, pos in ((r1, i), (r2, j)):
                terms = {probe._splice(word[:pos], rw, word[pos + len(rule.lhs):]): c for rw, c in rule.rhs}
                sides.append(terms)
            try:
                left = NCElement.from_terms(probe, sides[0])
                right = NCElement.from_terms(probe, sides[1])
                joinable = left == right
            except RewriteBudgetExceeded:
                left = NCElement(probe, sides[0])
                right = NCElement(probe, sides[1])
                joinable = False
            out.append(CriticalPair(word, NCElement(pres, left.terms), NCElement(pres, right.terms), joinable))
    return out
