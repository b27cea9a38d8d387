"""Normalized Hochschild chains over the idempotent base, with b, Connes' B and the mixed complex.

A chain of degree n is a combination of tensors w_0 ⊗ w_1 ⊗ … ⊗ w_n of normal
words, cyclically composable over R: ``source(w_i) == target(w_{i+1})`` and
``source(w_n) == target(w_0)``.  Terms with an idempotent in a slot ≥ 1 vanish
in the normalized complex and are never stored.

Sign conventions::

    b(x_0⊗…⊗x_n) = Σ_{i<n} (−1)^i x_0⊗…⊗x_i x_{i+1}⊗…⊗x_n + (−1)^n x_n x_0⊗x_1⊗…⊗x_{n−1}
    B(x_0⊗…⊗x_n) = Σ_i (−1)^{ni} 1⊗x_i⊗…⊗x_n⊗x_0⊗…⊗x_{i−1}
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .ncalg import AlgebraMorphism, NCElement, Presentation, Word, idem


@dataclass(frozen=True)
class Conventions:
    """Knobs that exist only so negative controls can break the complex on purpose."""

    normalized: bool = True
    connes_sign: str = "ni"  # "ni" is correct; "shifted" uses (−1)^{(n+1)i}, a deliberately wrong rule


_conventions: contextvars.ContextVar[Conventions] = contextvars.ContextVar("conventions", default=Conventions())


def conventions() -> Conventions:
    return _conventions.get()


@contextlib.contextmanager
def using_conventions(**changes):
    token = _conventions.set(replace(_conventions.get(), **changes))
    try:
        yield
    finally:
        _conventions.reset(token)


Tensor = tuple[Word, ...]


class Chain:
    """An element of C_n(A) = A ⊗_R Ā^{⊗_R n}."""

    __slots__ = ("pres", "degree", "terms")

    def __init__(self, pres: Presentation, degree: int, terms: Mapping[Tensor, Fraction] | None = None):
        self.pres = pres
        self.degree = degree
        self.terms: dict[Tensor, Fraction] = {t: Fraction(c) for t, c in (terms or {}).items() if c}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, pres: Presentation, degree: int) -> "Chain":
        return cls(pres, degree)

    @classmethod
    def tensor(cls, *slots: NCElement | str, pres: Presentation | None = None) -> "Chain":
        """Multilinear expansion of slot_0 ⊗ … ⊗ slot_n; strings are parsed in *pres*."""
        if pres is None:
            pres = next(s.pres for s in slots if isinstance(s, NCElement))
        elements = [pres.parse(s) if isinstance(s, str) else s for s in slots]
        out = cls(pres, len(elements) - 1)
        acc: list[tuple[Tensor, Fraction]] = [((), Fraction(1))]
        for el in elements:
            acc = [(t + (w,), c * d) for t, c in acc for w, d in el.terms.items()]
        for t, c in acc:
            out._add_term(t, c)
        return out

    def _add_term(self, t: Tensor, c: Fraction) -> None:
        if not c or not admissible(self.pres, t):
            return
        new = self.terms.get(t, 0) + c
        if new:
            self.terms[t] = new
        else:
            self.terms.pop(t, None)

    def _add_expanded(self, slots: Sequence[Mapping[Word, Fraction]], c: Fraction) -> None:
        acc: list[tuple[Tensor, Fraction]] = [((), c)]
        for el in slots:
            acc = [(t + (w,), a * d) for t, a in acc for w, d in el.items()]
        for t, a in acc:
            self._add_term(t, a)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Chain") -> None:
        if other.pres is not self.pres:
            raise ValueError(f"presentation mismatch: {self.pres.name} vs {other.pres.name}")
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = Chain(self.pres, self.degree if self.terms else other.degree, self.terms)
        for t, c in other.terms.items():
            new = out.terms.get(t, 0) + c
            if new:
                out.terms[t] = new
            else:
                out.terms.pop(t, None)
        return out

    def __neg__(self) -> "Chain":
        return Chain(self.pres, self.degree, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, c) -> "Chain":
        c = Fraction(c)
        return Chain(self.pres, self.degree, {t: c * v for t, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Tensor, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return format_chain(self)

    def __repr__(self) -> str:
        return f"Chain({self.pres.name}, deg {self.degree}: {self})"


def admissible(pres: Presentation, t: Tensor) -> bool:
    """Cyclic composability over R, plus the normalization rule for slots ≥ 1."""
    n = len(t)
    for i in range(n):
        if pres.source(t[i]) != pres.target(t[(i + 1) % n]):
            return False
    if conventions().normalized:
        return not any(pres.is_idempotent(w) for w in t[1:])
    return True


def unit_at(pres: Presentation, v: str) -> Word:
    return (idem(v),)


def format_chain(c: Chain) -> str:
    from .ncalg.expr import format_coeff_word, format_word
    if not c.terms:
        return "0"
    parts = []
    for i, (t, coeff) in enumerate(sorted(c.terms.items())):
        body = " ⊗ ".join(format_word(c.pres, w) for w in t)
        parts.append(format_coeff_word(coeff, body, i == 0))
    return "".join(parts)


# -- operators ----------------------------------------------------------------


def b(c: Chain) -> Chain:
    """Hochschild differential C_n → C_{n−1}; zero on degree 0."""
    pres, n = c.pres, c.degree
    out = Chain(pres, n - 1)
    if n == 0:
        return out
    for t, coeff in c.terms.items():
        for i in range(n):
            prod = _product(pres, t[i], t[i + 1])
            if prod:
                slots = [{w: Fraction(1)} for w in t[:i]] + [prod] + [{w: Fraction(1)} for w in t[i + 2:]]
                out._add_expanded(slots, coeff * (-1) ** i)
        prod = _product(pres, t[n], t[0])
        if prod:
            slots = [prod] + [{w: Fraction(1)} for w in t[1:n]]
            out._add_expanded(slots, coeff * (-1) ** n)
    return out


def _product(pres: Presentation, w1: Word, w2: Word) -> dict[Word, Fraction]:
    w = pres.concat(w1, w2)
    if w is None:
        return {}
    return pres.nf_word(w)


def connes_B(c: Chain) -> Chain:
    """Connes' operator C_n → C_{n+1} on the normalized complex."""
    pres, n = c.pres, c.degree
    out = Chain(pres, n + 1)
    rule = conventions().connes_sign
    for t, coeff in c.terms.items():
        for i in range(n + 1):
            rotated = t[i:] + t[:i]
            sign = (-1) ** (n * i if rule == "ni" else (n + 1) * i)
            out._add_term((unit_at(pres, pres.target(rotated[0])),) + rotated, coeff * sign)
    return out


def push(c: Chain, m: AlgebraMorphism) -> Chain:
    """Functoriality: apply *m* slot-wise and renormalize."""
    if c.pres is not m.source:
        raise ValueError(f"chain lives in {c.pres.name}, morphism starts at {m.source.name}")
    out = Chain(m.target, c.degree)
    for t, coeff in c.terms.items():
        out._add_expanded([m.apply_word(w).terms for w in t], coeff)
    return out


def one_tensor(c: Chain) -> Chain:
    """1 ⊗ c: prepend the unit (the appropriate idempotent) to every term."""
    out = Chain(c.pres, c.degree + 1)
    for t, coeff in c.terms.items():
        out._add_term((unit_at(c.pres, c.pres.source(t[-1])),) + t, coeff)
    return out


# -- mixed complex -------------------------------------------------------------


@dataclass
class MixedChain:
    """Σ_k u^k c_k truncated at u^N; u has cohomological degree 2, so deg c_k = deg c_0 + 2k."""

    chains: list[Chain]

    @property
    def order(self) -> int:
        return len(self.chains) - 1

    def __post_init__(self):
        base = self.chains[0].degree
        for k, ck in enumerate(self.chains):
            if ck.terms and ck.degree != base + 2 * k:
                raise ValueError(f"u^{k} coefficient has degree {ck.degree}, expected {base + 2 * k}")

    def __str__(self) -> str:
        parts = []
        for k, ck in enumerate(self.chains):
            if ck.terms:
                parts.append(f"u^{k}·({ck})")
        return " + ".join(parts) or "0"


@dataclass
class MixedResult:
    coefficients: list[Chain]
    remainder: Chain

    def vanishes_through_order(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def first_nonzero(self) -> int | None:
        for k, c in enumerate(self.coefficients):
            if not c.is_zero():
                return k
        return None


def mixed_differential(m: MixedChain) -> MixedResult:
    """Apply b − uB.  The u^k coefficient is b(c_k) − B(c_{k−1}); B(c_N) spills past u^N.

    The spilled term enters the full differential as −u^{N+1}·B(c_N); the result
    records ``remainder = B(c_N)``.
    """
    out = []
    for k, ck in enumerate(m.chains):
        term = b(ck)
        if k:
            term = term - connes_B(m.chains[k - 1])
        out.append(term)
    return MixedResult(out, connes_B(m.chains[-1]))


def combination(pres: Presentation, degree: int, parts: Iterable[tuple[Fraction | int, Chain]]) -> Chain:
    out = Chain(pres, degree)
    for c, ch in parts:
        out = out + ch * c
    return out
