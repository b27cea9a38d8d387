"""Exact matrix-representation oracle.

A :class:`MatrixRep` sends every generator of a presentation to an exact
rational matrix of shape ``dims[target] × dims[source]``.  Words compose right
to left, so a word evaluates to the product of its generator matrices in
display order.  Inverse generators are sampled as exact inverses and
single-symbol rewrite rules (definitions such as ``y -> q*xinv``) are imposed
after sampling, so every rule of the presentation holds at the sampled point.

Everything here works on raw words without rewriting: elements of
``pres.free_copy()`` evaluate the same way as normal forms.  Chains get their own
unnormalized b and B (:class:`OracleChain`) and are compared through random
multilinear functionals, which gives an independent check on
:mod:`mppa.hochschild`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from flint import fmpq, fmpq_mat

from .ncalg import AlgebraMorphism, NCElement, Presentation, Word, idem, quiver_loc
from .ncalg.expr import evaluate as parse_in
from .quiver import Quiver

ENTRY_RANGE = 3
MAX_ATTEMPTS = 100


class SamplingError(RuntimeError):
    pass


def _q(c) -> fmpq:
    c = Fraction(c)
    return fmpq(c.numerator, c.denominator)


def identity(n: int) -> fmpq_mat:
    m = fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def _random_matrix(rng: random.Random, rows: int, cols: int) -> fmpq_mat:
    return fmpq_mat(rows, cols, [rng.randint(-ENTRY_RANGE, ENTRY_RANGE) for _ in range(rows * cols)])


def _invertible(m: fmpq_mat) -> bool:
    return m.nrows() == m.ncols() and (m.nrows() == 0 or m.det() != 0)


class BlockMatrix(dict):
    """Block sum ``(target, source) -> matrix``; absent blocks are zero."""

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        for key in set(self) | set(other):
            a, b = self.get(key), other.get(key)
            if a is None:
                a, b = b, a
            if b is None:
                if any(x != 0 for x in a.entries()):
                    return False
            elif a != b:
                return False
        return True

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None


@dataclass
class MatrixRep:
    pres: Presentation
    dims: dict[str, int]
    matrices: dict[str, fmpq_mat]
    seed: object
    _words: dict[Word, fmpq_mat] = field(default_factory=dict, repr=False)

    def symbol(self, s: str) -> fmpq_mat:
        m = self.matrices.get(s)
        if m is not None:
            return m
        if s.startswith("id("):
            return identity(self.dims[s[3:-1]])
        raise KeyError(f"no matrix for {s!r}")

    def word(self, w: Word) -> fmpq_mat:
        hit = self._words.get(w)
        if hit is None:
            hit = self.symbol(w[0])
            for s in w[1:]:
                hit = hit * self.symbol(s)
            self._words[w] = hit
        return hit

    def describe(self) -> str:
        parts = [f"dims={self.dims}"]
        for name, m in self.matrices.items():
            parts.append(f"{name}={m.tolist() if hasattr(m, 'tolist') else m}")
        return "; ".join(parts)


def evaluate(a: NCElement, rep: MatrixRep) -> BlockMatrix:
    """ρ(a) as a block matrix, word by word in exact arithmetic."""
    out = BlockMatrix()
    for w, c in a.terms.items():
        key = a.pres.block(w)
        term = rep.word(w) * _q(c)
        out[key] = out[key] + term if key in out else term
    return out


def _dims_for(pres: Presentation, dims) -> dict[str, int]:
    if isinstance(dims, int):
        out = {v: dims for v in pres.vertices}
    elif isinstance(dims, Mapping):
        out = {v: int(dims.get(v, 0)) for v in pres.vertices}
    else:
        dims = list(dims)
        if len(dims) != len(pres.vertices):
            raise SamplingError(f"expected {len(pres.vertices)} dimensions, got {len(dims)}")
        out = dict(zip(pres.vertices, map(int, dims)))
    if any(n < 0 for n in out.values()):
        raise SamplingError("dimensions must be nonnegative")
    if not any(out.values()):
        raise SamplingError("dimension vector is zero at every vertex")
    return out


def random_rep(source: Presentation | Quiver, dims, seed=0) -> MatrixRep:
    """Sample a representation with integer entries in [−3, 3].

    A :class:`Quiver` stands for its localized doubled path algebra.  Samples
    that make some required inverse singular are redrawn, at most 100 times.
    """
    pres = quiver_loc(source) if isinstance(source, Quiver) else source
    dims = _dims_for(pres, dims)
    rng = random.Random(repr(seed))
    for _ in range(MAX_ATTEMPTS):
        rep = _attempt(pres, dims, rng, seed)
        if rep is not None:
            return rep
    raise SamplingError(f"no admissible representation of {pres.name} after {MAX_ATTEMPTS} attempts")


def _definitions(pres: Presentation) -> dict[str, tuple]:
    return {r.lhs[0]: r.rhs for r in pres.rules if len(r.lhs) == 1}


def _attempt(pres: Presentation, dims: dict[str, int], rng: random.Random, seed) -> MatrixRep | None:
    rep = MatrixRep(pres, dims, {}, seed)
    free = pres.free_copy()
    defined = _definitions(pres)
    deferred = []
    for g in pres.generators.values():
        if g.name in defined:
            deferred.append(g.name)
            continue
        partner = pres.inverses.get(g.name)
        if partner is not None and _known(rep, free, partner):
            m = _eval_expr(rep, free, partner)
            if not _invertible(m):
                return None
            rep.matrices[g.name] = m.inv()
            continue
        m = _random_matrix(rng, dims[g.tgt], dims[g.src])
        if partner is not None and partner in pres.generators and partner not in defined:
            if m.nrows() != m.ncols():
                raise SamplingError(f"{g.name} must be invertible but dims differ at its endpoints")
            if not _invertible(m):
                return None
        rep.matrices[g.name] = m
    for name in deferred:
        value = NCElement(free, dict(defined[name]))
        rep.matrices[name] = _block_of(evaluate(value, rep), pres.generators[name], dims)
        rep._words.clear()
    for rule in pres.rules:
        lhs = evaluate(NCElement(free, {rule.lhs: Fraction(1)}), rep)
        rhs = evaluate(NCElement(free, dict(rule.rhs)), rep)
        if lhs != rhs:
            return None
    return rep


def _known(rep: MatrixRep, free: Presentation, expr: str) -> bool:
    try:
        element = parse_in(expr, free)
    except Exception:
        return False
    return all(s in rep.matrices or s.startswith("id(") for w in element.terms for s in w)


def _eval_expr(rep: MatrixRep, free: Presentation, expr: str) -> fmpq_mat:
    element = parse_in(expr, free)
    blocks = evaluate(element, rep)
    if len(blocks) != 1:
        raise SamplingError(f"{expr!r} is not a single block")
    return next(iter(blocks.values()))


def _block_of(blocks: BlockMatrix, g, dims) -> fmpq_mat:
    return blocks.get((g.tgt, g.src), fmpq_mat(dims[g.tgt], dims[g.src]))


# -- equality ----------------------------------------------------------------


@dataclass
class Verdict:
    equal: bool
    trials: int
    counterexample: MatrixRep | None = None

    def __str__(self) -> str:
        return f"probably-equal({self.trials})" if self.equal else "distinct"


def trial_dims(pres: Presentation, trial: int, max_dim: int = 3) -> dict[str, int]:
    n = trial % max_dim + 1
    return {v: n for v in pres.vertices}


def trial_rep(pres: Presentation, trial: int, seed=0, max_dim: int = 3) -> MatrixRep:
    return random_rep(pres, trial_dims(pres, trial, max_dim), (seed, trial))


def oracle_equals(a: NCElement, b: NCElement, trials: int = 20, seed=0, *, max_dim: int = 3,
                  sample_from: Presentation | None = None, dims=None) -> Verdict:
    """Compare two elements at ``trials`` independently seeded representations.

    *sample_from* is the presentation whose relations the sampled points must
    satisfy; it defaults to the elements' own presentation.  A fixed *dims*
    replaces the default cycle through 1, 2, …, max_dim.
    """
    if a.pres is not b.pres:
        raise ValueError(f"presentation mismatch: {a.pres.name} vs {b.pres.name}")
    pres = sample_from or a.pres
    diff = a - b
    for t in range(trials):
        rep = trial_rep(pres, t, seed, max_dim) if dims is None else random_rep(pres, dims, (seed, t))
        if evaluate(diff, rep) != BlockMatrix():
            return Verdict(False, t + 1, rep)
    return Verdict(True, trials)


def det_product(elements: Mapping[str, NCElement], rep: MatrixRep) -> Fraction:
    """∏_v det ρ(x_v) where ``x_v`` lives in the (v, v) block."""
    out = fmpq(1)
    for v, x in elements.items():
        n = rep.dims[v]
        block = evaluate(x, rep).get((v, v), fmpq_mat(n, n))
        if n:
            out *= block.det()
    return Fraction(int(out.p), int(out.q))


# -- chains --------------------------------------------------------------------


Tensor = tuple[Word, ...]


class OracleChain:
    """A Hochschild chain over the free path algebra, kept unnormalized.

    Terms are tensors of raw words; slot products are plain concatenation.
    Idempotents in slots ≥ 1 stay in place and are killed only at evaluation,
    where those slots pass through a projection that vanishes on R.
    """

    __slots__ = ("pres", "degree", "terms")

    def __init__(self, pres: Presentation, degree: int, terms: Mapping[Tensor, Fraction] | None = None):
        self.pres = pres
        self.degree = degree
        self.terms = {t: Fraction(c) for t, c in (terms or {}).items() if c}

    @classmethod
    def tensor(cls, *slots: NCElement) -> "OracleChain":
        pres = slots[0].pres
        out = cls(pres, len(slots) - 1)
        acc: list[tuple[Tensor, Fraction]] = [((), Fraction(1))]
        for el in slots:
            acc = [(t + (w,), c * d) for t, c in acc for w, d in el.terms.items()]
        for t, c in acc:
            out._add(t, c)
        return out

    def _add(self, t: Tensor, c: Fraction) -> None:
        n = len(t)
        if any(self.pres.source(t[i]) != self.pres.target(t[(i + 1) % n]) for i in range(n)):
            return
        new = self.terms.get(t, 0) + c
        if new:
            self.terms[t] = new
        else:
            self.terms.pop(t, None)

    def __add__(self, other: "OracleChain") -> "OracleChain":
        out = OracleChain(self.pres, self.degree if self.terms else other.degree, self.terms)
        for t, c in other.terms.items():
            out._add(t, c)
        return out

    def __neg__(self) -> "OracleChain":
        return OracleChain(self.pres, self.degree, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "OracleChain") -> "OracleChain":
        return self + (-other)

    def __mul__(self, c) -> "OracleChain":
        return OracleChain(self.pres, self.degree, {t: Fraction(c) * v for t, v in self.terms.items()})

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)


def _concat(pres: Presentation, w1: Word, w2: Word) -> Word | None:
    return pres.concat(w1, w2)


def chain_b(c: OracleChain) -> OracleChain:
    pres, n = c.pres, c.degree
    out = OracleChain(pres, n - 1)
    if n == 0:
        return out
    for t, coeff in c.terms.items():
        for i in range(n):
            w = _concat(pres, t[i], t[i + 1])
            if w is not None:
                out._add(t[:i] + (w,) + t[i + 2:], coeff * (-1) ** i)
        w = _concat(pres, t[n], t[0])
        if w is not None:
            out._add((w,) + t[1:n], coeff * (-1) ** n)
    return out


def chain_B(c: OracleChain) -> OracleChain:
    pres, n = c.pres, c.degree
    out = OracleChain(pres, n + 1)
    for t, coeff in c.terms.items():
        for i in range(n + 1):
            r = t[i:] + t[:i]
            out._add(((idem(pres.target(r[0])),),) + r, coeff * (-1) ** (n * i))
    return out


def chain_one_tensor(c: OracleChain) -> OracleChain:
    out = OracleChain(c.pres, c.degree + 1)
    for t, coeff in c.terms.items():
        out._add(((idem(c.pres.source(t[-1])),),) + t, coeff)
    return out


def chain_push(c: OracleChain, m: AlgebraMorphism, target: Presentation) -> OracleChain:
    """Apply *m* slot-wise, reading its generator images as free words in *target*."""
    images = {g: NCElement(target, img.terms) for g, img in m.images.items()}

    def image(w: Word) -> NCElement:
        if c.pres.is_idempotent(w):
            return target.e(m.vertex_map[c.pres.source(w)])
        out = images[w[0]]
        for s in w[1:]:
            out = out * images[s]
        return out

    out = OracleChain(target, c.degree)
    for t, coeff in c.terms.items():
        out = out + OracleChain.tensor(*(image(w) for w in t)) * coeff
    return out


class Functional:
    """Random product functional φ_0 ⊗ … ⊗ φ_n on evaluated tensors."""

    def __init__(self, rep: MatrixRep, seed):
        self.rep = rep
        self.rng = random.Random(repr(("functional", seed)))
        self.weights: dict[tuple[int, tuple[str, str]], fmpq_mat] = {}

    def _weights(self, slot: int, key: tuple[str, str]) -> fmpq_mat:
        hit = self.weights.get((slot, key))
        if hit is None:
            rows, cols = self.rep.dims[key[0]], self.rep.dims[key[1]]
            hit = fmpq_mat(rows, cols, [self.rng.randint(-50, 50) for _ in range(rows * cols)])
            self.weights[(slot, key)] = hit
        return hit

    def slot(self, slot: int, pres: Presentation, w: Word) -> fmpq:
        key = pres.block(w)
        m = self.rep.word(w)
        wts = self._weights(slot, key)
        value = sum((m[i, j] * wts[i, j] for i in range(m.nrows()) for j in range(m.ncols())), fmpq(0))
        if slot and key[0] == key[1] and m.nrows():
            # project away the identity component so that R-slots vanish
            trace = sum((m[i, i] for i in range(m.nrows())), fmpq(0))
            wtrace = sum((wts[i, i] for i in range(m.nrows())), fmpq(0))
            value -= trace * wtrace / m.nrows()
        return value

    def __call__(self, c: OracleChain) -> fmpq:
        total = fmpq(0)
        for t, coeff in c.terms.items():
            term = _q(coeff)
            for i, w in enumerate(t):
                term *= self.slot(i, c.pres, w)
                if term == 0:
                    break
            total += term
        return total


def chain_vanishes(c: OracleChain, sample_from: Presentation, trials: int = 20, seed=0,
                   max_dim: int = 3) -> Verdict:
    """True iff every random functional at every sampled rep gives 0."""
    for t in range(trials):
        rep = trial_rep(sample_from, t, seed, max_dim)
        if Functional(rep, (seed, t))(c) != 0:
            return Verdict(False, t + 1, rep)
    return Verdict(True, trials)


def element_vanishes(a: NCElement, sample_from: Presentation, trials: int = 20, seed=0,
                     max_dim: int = 3) -> Verdict:
    return oracle_equals(a, a.pres.zero(), trials, seed, max_dim=max_dim, sample_from=sample_from)


def sample_dims(dims: Sequence[int] | str, vertices: Iterable[str]) -> dict[str, int]:
    """Parse ``"2,3"`` or a sequence into a dimension vector over *vertices*."""
    if isinstance(dims, str):
        dims = [int(x) for x in dims.split(",") if x.strip()]
    vertices = list(vertices)
    if len(dims) == 1:
        dims = list(dims) * len(vertices)
    if len(dims) != len(vertices):
        raise SamplingError(f"expected {len(vertices)} dimensions, got {len(dims)}")
    return dict(zip(vertices, dims))
