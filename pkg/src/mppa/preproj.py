"""Multiplicative moment maps, fusion, the CBS relation and the dg-algebra Υ^q(Q).

For a vertex v the moment map is the ordered product

    μ_v = ∏_{e: t(e)=v} (e_v + ee*) · ∏_{e: s(e)=v} (e_v + e*e)⁻¹

in the localized doubled path algebra, i.e. ``a2_e`` factors followed by
``l_e`` factors, each family in the order fixed by a :class:`FusionOrder`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from flint import fmpq, fmpq_mat

from . import repvar
from .ncalg import (
    AlgebraMorphism,
    Generator,
    NCElement,
    Presentation,
    check_morphism,
    laurent_coproduct,
    laurent_free,
    quiver_loc,
)
from .ncalg.builtins import POINT_VERTEX, inv_name, loc_inverse
from .quiver import FusionOrder, Quiver, check, sep_source, sep_target, separated, star


class PreprojError(ValueError):
    pass


def _order(Q: Quiver, order: FusionOrder | None) -> FusionOrder:
    order = order or FusionOrder.default(Q)
    order.validate(Q)
    return order


def _product(pres: Presentation, v: str, factors: list[str]) -> NCElement:
    out = pres.e(v)
    for f in factors:
        out = out * (pres.macro(f) if f in pres.macros else pres.gen(f))
    return out


@dataclass
class MomentMap:
    quiver: Quiver
    pres: Presentation
    order: FusionOrder
    mu: dict[str, NCElement]
    mu_inv: dict[str, NCElement]

    def inverse_defects(self) -> list[str]:
        """Vertices where μ_v·μ_v⁻¹ = e_v = μ_v⁻¹·μ_v fails."""
        bad = []
        for v in self.quiver.vertices:
            e = self.pres.e(v)
            if self.mu[v] * self.mu_inv[v] != e or self.mu_inv[v] * self.mu[v] != e:
                bad.append(v)
        return bad

    def morphism(self) -> AlgebraMorphism:
        """∐_v k[z_v^±1] → kQ̄_loc, z_v ↦ μ_v."""
        names = [f"z_{v}" for v in self.quiver.vertices]
        src = laurent_coproduct(names, self.quiver.vertices)
        images = {}
        for v, z in zip(self.quiver.vertices, names):
            images[z] = self.mu[v]
            images[inv_name(z)] = self.mu_inv[v]
        return AlgebraMorphism(src, self.pres, images, name="μ")


def moment_map(Q: Quiver, order: FusionOrder | None = None) -> MomentMap:
    check(Q)
    order = _order(Q, order)
    pres = quiver_loc(Q)
    mu, mu_inv = {}, {}
    for v in Q.vertices:
        ins = [f"a2_{e}" for e in order.incoming[v]]
        outs = [loc_inverse(e) for e in order.outgoing[v]]
        mu[v] = _product(pres, v, ins + outs)
        inverses = [f"a1_{e}" for e in reversed(order.outgoing[v])] + [f"a2inv_{e}" for e in reversed(order.incoming[v])]
        mu_inv[v] = _product(pres, v, inverses)
    return MomentMap(Q, pres, order, mu, mu_inv)


@dataclass
class FusionStep:
    vertex: str
    factors: list[str]
    morphism: AlgebraMorphism


@dataclass
class Fusion:
    moment: MomentMap
    separated: Presentation
    gluing: AlgebraMorphism
    steps: list[FusionStep]


def fusion_build(Q: Quiver, order: FusionOrder | None = None) -> Fusion:
    """μ assembled from one A₂ moment map per edge by ordered fusion at each vertex.

    On the separated quiver each edge e has x_e ↦ (e_{s(e)} + e*e)⁻¹ at s(e) and
    y_e ↦ e_{t(e)} + ee* at t(e).  Gluing s(e) ↦ s(e), t(e) ↦ t(e) lands in
    kQ̄_loc; at a vertex v the factors fuse as z_v ↦ y_{e_1}⋯y_{e_k}·x_{f_1}⋯x_{f_m}.
    """
    check(Q)
    order = _order(Q, order)
    target = quiver_loc(Q)
    sep = separated(Q)
    sep_pres = quiver_loc(sep)
    vertex_map = {}
    for e in Q.edges:
        vertex_map[sep_source(e.id)] = e.src
        vertex_map[sep_target(e.id)] = e.tgt
    images = {}
    for e in Q.edges:
        for g in (e.id, star(e.id), loc_inverse(e.id)):
            images[g] = target.gen(g)
    gluing = AlgebraMorphism(sep_pres, target, images, vertex_map, name="glue")
    problem = check_morphism(gluing)
    if problem:
        raise PreprojError(f"gluing morphism is not well defined: {problem}")

    local = {}
    for e in Q.edges:
        local[f"x_{e.id}"] = (sep_pres.gen(loc_inverse(e.id)), sep_pres.macro(f"a1_{e.id}"))
        local[f"y_{e.id}"] = (sep_pres.macro(f"a2_{e.id}"), sep_pres.macro(f"a2inv_{e.id}"))

    steps, mu, mu_inv = [], {}, {}
    for v in Q.vertices:
        factors = [f"y_{e}" for e in order.incoming[v]] + [f"x_{e}" for e in order.outgoing[v]]
        if not factors:
            mu[v] = mu_inv[v] = target.e(v)
            continue
        C = laurent_free(factors, f"C_{v}")
        phi = AlgebraMorphism(C, target, {
            **{x: gluing(local[x][0]) for x in factors},
            **{inv_name(x): gluing(local[x][1]) for x in factors},
        }, {POINT_VERTEX: v}, name=f"fuse_{v}")
        problem = check_morphism(phi)
        if problem:
            raise PreprojError(f"fusion at {v!r} is not well defined: {problem}")
        steps.append(FusionStep(v, factors, phi))
        mu[v] = phi(C.parse("*".join(factors)))
        mu_inv[v] = phi(C.parse("*".join(inv_name(x) for x in reversed(factors))))
    return Fusion(MomentMap(Q, target, order, mu, mu_inv), sep_pres, gluing, steps)


def global_sequence(Q: Quiver, order: FusionOrder | None = None) -> list[tuple[str, int]]:
    """Ē in the default global order: per vertex, ε = +1 factors then ε = −1 factors.

    ``(e, +1)`` stands for 1 + ee* with t(e) = v; ``(e, −1)`` for 1 + e*e with s(e) = v,
    the factor of the reverse edge e* ∈ E* ∩ t⁻¹(v).
    """
    order = _order(Q, order)
    seq = []
    for v in order.vertices:
        seq += [(e, 1) for e in order.incoming[v]]
        seq += [(e, -1) for e in order.outgoing[v]]
    return seq


def cbs_relation(Q: Quiver, q: Mapping[str, Fraction | int | str], order: FusionOrder | None = None,
                 sequence: list[tuple[str, int]] | None = None) -> NCElement:
    """∏_{ē ∈ Ē} (1 + ē ē*)^{ε(ē)} − Σ_v q_v e_v in the given global order."""
    check(Q)
    pres = quiver_loc(Q)
    seq = sequence if sequence is not None else global_sequence(Q, order)
    want = sorted((e.id, s) for e in Q.edges for s in (1, -1))
    if sorted(seq) != want:
        raise PreprojError("incompatible order: the sequence must list every edge once with each sign")
    out = pres.one()
    for e, s in seq:
        out = out * pres.macro(f"u_{e}" if s == 1 else f"ustarinv_{e}")
    for v in Q.vertices:
        out = out - pres.e(v) * Fraction(q.get(v, 1))
    return out


# -- Υ^q(Q) -----------------------------------------------------------------------------


def zp(v: str) -> str:
    return f"zp_{v}"


@dataclass
class DGAlgebra:
    quiver: Quiver
    base: Presentation
    pres: Presentation
    q: dict[str, Fraction]
    moment: MomentMap
    differential: dict[str, NCElement] = field(default_factory=dict)

    def d(self, a: NCElement) -> NCElement:
        """The degree +1 derivation, with Koszul signs and d = 0 on degree-0 generators."""
        pres = self.pres
        out = pres.zero()
        for w, c in a.terms.items():
            if pres.is_idempotent(w):
                continue
            sign = 1
            for i, s in enumerate(w):
                if s in self.differential:
                    left = pres.word(w[:i]) if i else pres.e(pres.target((s,)))
                    right = pres.word(w[i + 1:]) if i + 1 < len(w) else pres.e(pres.source((s,)))
                    out = out + left * self.differential[s] * right * (c * sign)
                if pres.symbol(s)[2] % 2:
                    sign = -sign
        return out

    def problems(self) -> list[str]:
        out = []
        for v in self.quiver.vertices:
            dz = self.differential[zp(v)]
            if any(self.pres.block(w) != (v, v) for w in dz.terms):
                out.append(f"d({zp(v)}) leaves e_{v}·A·e_{v}")
            if any(self.pres.degree(w) for w in dz.terms):
                out.append(f"d({zp(v)}) is not of degree 0")
            if not self.d(dz).is_zero():
                out.append(f"d∘d({zp(v)}) ≠ 0")
        return out

    def to_json(self) -> dict:
        gens = [
            {"name": g.name, "src": g.src, "tgt": g.tgt, "degree": g.degree}
            for g in self.pres.generators.values()
        ]
        return {
            "algebra": self.pres.name,
            "vertices": list(self.pres.vertices),
            "generators": gens,
            "rules": [
                {"lhs": "*".join(r.lhs), "rhs": str(NCElement(self.pres, dict(r.rhs)))} for r in self.pres.rules
            ],
            "q": {v: str(x) for v, x in self.q.items()},
            "differential": {name: str(x) for name, x in self.differential.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def build_upsilon(Q: Quiver, q: Mapping[str, Fraction | int | str] | None = None,
                  order: FusionOrder | None = None) -> DGAlgebra:
    check(Q)
    q = {v: Fraction((q or {}).get(v, 1)) for v in Q.vertices}
    zero = [v for v, x in q.items() if x == 0]
    if zero:
        raise PreprojError(f"q must be invertible; q_{zero[0]} = 0")
    moment = moment_map(Q, order)
    base = moment.pres
    extra = []
    for v in Q.vertices:
        if zp(v) in base.generators:
            raise PreprojError(f"generator name {zp(v)!r} already used")
        extra.append(Generator(zp(v), v, v, -1))
    pres = base.with_generators(f"Υ({base.name})", extra)
    differential = {}
    for v in Q.vertices:
        rel = moment.mu[v] - base.e(v) * q[v]
        differential[zp(v)] = NCElement(pres, rel.terms)
    dga = DGAlgebra(Q, base, pres, q, moment, differential)
    bad = dga.problems()
    if bad:
        raise PreprojError("; ".join(bad))
    return dga


# -- H⁰ ----------------------------------------------------------------------------------


@dataclass
class Membership:
    element: str
    ideal: str
    status: str            # "identical", "multipliers" or "uncertified"
    certificate: list[tuple[Fraction, str, str, str]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status != "uncertified"


@dataclass
class H0Report:
    memberships: list[Membership]

    @property
    def ok(self) -> bool:
        return all(m.certified for m in self.memberships)

    @property
    def status(self) -> str:
        return "certified" if self.ok else "uncertified"

    def to_text(self) -> str:
        lines = []
        for m in self.memberships:
            lines.append(f"{m.status:<12} {m.element} ∈ ({m.ideal})")
        lines.append(f"ideal equality: {self.status}")
        return "\n".join(lines)


def normal_words(pres: Presentation, max_len: int) -> list[tuple[str, ...]]:
    """Idempotents and all rule-free composable words of length ≤ max_len."""
    words = [(f"id({v})",) for v in pres.vertices]
    layer = [(g,) for g in pres.generators if pres.symbol(g)[2] == 0]
    layer = [w for w in layer if pres.nf_word(w) == {w: 1}]
    for _ in range(max_len):
        words += layer
        nxt = []
        for w in layer:
            for g in pres.generators:
                if pres.symbol(g)[2] != 0:
                    continue
                x = w + (g,)
                if pres.composable(x) and pres.rewrite_once(x) is None:
                    nxt.append(x)
        layer = nxt
    return words


def ideal_member(target: NCElement, generators: list[NCElement], bound: int) -> list | None:
    """Find Σ c·u·g·w = target with normal words u, w of length ≤ bound, or ``None``."""
    pres = target.pres
    words = normal_words(pres, bound)
    columns, labels = [], []
    for j, g in enumerate(generators):
        for (bt, bs) in g.blocks():
            for u in words:
                if pres.source(u) != bt:
                    continue
                for w in words:
                    if pres.target(w) != bs:
                        continue
                    col = NCElement(pres, {u: 1}) * g * NCElement(pres, {w: 1})
                    if col:
                        columns.append(col)
                        labels.append((j, u, w))
    index: dict = {}
    for col in columns + [target]:
        for w in col.terms:
            index.setdefault(w, len(index))
    if not index:
        return []
    m = fmpq_mat(len(index), len(columns) + 1)
    for j, col in enumerate(columns + [target]):
        for w, c in col.terms.items():
            m[index[w], j] = fmpq(c.numerator, c.denominator)
    rref, rank = m.rref()
    n = len(columns)
    cert = []
    for r in range(rank):
        pivot = next(j for j in range(n + 1) if rref[r, j] != 0)
        if pivot == n:
            return None
        value = rref[r, n]
        if value != 0:
            j, u, w = labels[pivot]
            cert.append((Fraction(int(value.p), int(value.q)), j, u, w))
    return cert


def h0_check(Q: Quiver, q: Mapping[str, Fraction | int | str] | None = None, order: FusionOrder | None = None,
             *, relation_q: Mapping[str, Fraction | int | str] | None = None,
             sequence: list[tuple[str, int]] | None = None, bound: int = 2) -> H0Report:
    """Two-sided ideal equality between the blocks of the CBS relation and the d(z′_v).

    Membership is certified either by equality of the elements or by explicit
    multipliers u·g·w with words of length ≤ ``bound``; anything else is
    reported as uncertified, never as false.  ``relation_q`` lets the relation
    use different parameters than Υ (a negative control).
    """
    dga = build_upsilon(Q, q, order)
    base = dga.base
    rel = cbs_relation(Q, relation_q if relation_q is not None else dga.q, order, sequence)
    blocks = {v: rel.sandwich(v) for v in Q.vertices}
    dz = {v: NCElement(base, dga.differential[zp(v)].terms) for v in Q.vertices}
    out = []
    for lhs, rhs, lname, rname in ((blocks, dz, "relation block", "d(z′)"), (dz, blocks, "d(z′)", "relation blocks")):
        gens = [rhs[v] for v in Q.vertices]
        for v in Q.vertices:
            label = f"{lname} at {v}"
            if lhs[v] == rhs[v]:
                out.append(Membership(label, rname, "identical"))
                continue
            cert = ideal_member(lhs[v], gens, bound)
            if cert is None:
                out.append(Membership(label, rname, "uncertified"))
            else:
                out.append(Membership(label, rname, "multipliers", [
                    (c, Q.vertices[j], _fmt(base, u), _fmt(base, w)) for c, j, u, w in cert
                ]))
    return H0Report(out)


def _fmt(pres: Presentation, w) -> str:
    from .ncalg.expr import format_word
    return format_word(pres, w)


# -- matrix checks ---------------------------------------------------------------------------


def det_check(Q: Quiver, trials: int = 20, seed=0, order: FusionOrder | None = None,
              max_dim: int = 3) -> list[Fraction]:
    """∏_v det μ_v(ρ) at ``trials`` random representations; each should be 1."""
    mm = moment_map(Q, order)
    return [repvar.det_product(mm.mu, repvar.trial_rep(mm.pres, t, seed, max_dim)) for t in range(trials)]


def format_moment(mm: MomentMap, v: str) -> str:
    return str(mm.mu[v])
