"""Calabi–Yau witness chains, their homotopies, and the identity suite.

Each identity is written once against a small backend protocol and run twice:
by :class:`ExactBackend` (rewriting to normal form, normalized chains) and,
for cross-validation, by :class:`OracleBackend` (free path algebra evaluated at
random exact matrix representations, see :mod:`mppa.repvar`).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import hochschild as hh
from . import repvar
from .hochschild import Chain, MixedChain, mixed_differential
from .ncalg import (
    AlgebraError,
    AlgebraMorphism,
    NCElement,
    Presentation,
    a2_loc,
    eval_q,
    interval_kI,
    inv_morphism,
    laurent,
    laurent_pair,
    mu1,
    mu2,
    pushout_quotient,
    rescale,
    two_object_groupoid_C,
    z_to_xy,
)

DEFAULT_TRUNCATION = 5


# -- backends ------------------------------------------------------------------


class ExactBackend:
    name = "exact"

    def algebra(self, pres: Presentation) -> Presentation:
        return pres

    def el(self, A: Presentation, text: str | NCElement) -> NCElement:
        return A.parse(text) if isinstance(text, str) else text

    def tensor(self, A: Presentation, *slots) -> Chain:
        return Chain.tensor(*(self.el(A, s) for s in slots), pres=A)

    def b(self, c: Chain) -> Chain:
        return hh.b(c)

    def B(self, c: Chain) -> Chain:
        return hh.connes_B(c)

    def one_tensor(self, c: Chain) -> Chain:
        return hh.one_tensor(c)

    def push(self, c: Chain, m: AlgebraMorphism) -> Chain:
        return hh.push(c, m)

    def mixed(self, chains: list[Chain]) -> tuple[list[Chain], Chain]:
        result = mixed_differential(MixedChain(chains))
        return result.coefficients, result.remainder

    def vanishes(self, x) -> tuple[bool, str]:
        if isinstance(x, NCElement):
            x = x.reduce()
        if hasattr(x, "is_zero"):
            return x.is_zero(), str(x)
        raise TypeError(f"cannot test {type(x).__name__} for vanishing")


class OracleBackend:
    """Free path algebra plus evaluation at ``trials`` random representations."""

    name = "oracle"

    def __init__(self, trials: int = 20, seed=0, max_dim: int = 3):
        self.trials = trials
        self.seed = seed
        self.max_dim = max_dim
        self._free: dict[int, Presentation] = {}
        self._origin: dict[int, Presentation] = {}

    def algebra(self, pres: Presentation) -> Presentation:
        hit = self._free.get(id(pres))
        if hit is None:
            hit = pres.free_copy()
            self._free[id(pres)] = hit
            self._origin[id(hit)] = pres
        return hit

    def origin(self, free: Presentation) -> Presentation:
        return self._origin[id(free)]

    def el(self, A: Presentation, text: str | NCElement) -> NCElement:
        if isinstance(text, str):
            return A.parse(text)
        return text if text.pres is A else NCElement(A, text.terms)

    def tensor(self, A: Presentation, *slots) -> repvar.OracleChain:
        return repvar.OracleChain.tensor(*(self.el(A, s) for s in slots))

    def b(self, c):
        return repvar.chain_b(c)

    def B(self, c):
        return repvar.chain_B(c)

    def one_tensor(self, c):
        return repvar.chain_one_tensor(c)

    def push(self, c, m: AlgebraMorphism):
        return repvar.chain_push(c, m, self.algebra(m.target))

    def mixed(self, chains):
        coeffs = []
        for k, ck in enumerate(chains):
            term = self.b(ck)
            if k:
                term = term - self.B(chains[k - 1])
            coeffs.append(term)
        return coeffs, self.B(chains[-1])

    def vanishes(self, x) -> tuple[bool, str]:
        kw = dict(trials=self.trials, seed=self.seed, max_dim=self.max_dim)
        if isinstance(x, repvar.OracleChain):
            verdict = repvar.chain_vanishes(x, self.origin(x.pres), **kw)
        elif isinstance(x, NCElement):
            verdict = repvar.element_vanishes(x, self.origin(x.pres), **kw)
        elif hasattr(x, "oracle_vanishes"):
            verdict = x.oracle_vanishes(self.origin(x.pres), **kw)
        else:
            raise TypeError(f"cannot test {type(x).__name__} for vanishing")
        detail = str(verdict)
        if verdict.counterexample is not None:
            detail += f" at {verdict.counterexample.describe()}"
        return verdict.equal, detail


Backend = ExactBackend | OracleBackend


# -- witness chains ------------------------------------------------------------


def _inverse_symbol(pres: Presentation, x: str) -> str:
    xi = pres.inverses.get(x)
    if xi is None or xi not in pres.generators:
        raise AlgebraError(f"{x!r} is not an invertible generator of {pres.name}")
    return xi


def _alpha_tilde(K: Backend, A: Presentation, x: str, n: int, xi: str):
    """α̃_n = (x⁻¹⊗x)^{⊗n} − (x⊗x⁻¹)^{⊗n}."""
    return K.tensor(A, *([xi, x] * n)) - K.tensor(A, *([x, xi] * n))


@dataclass(frozen=True)
class AlphaPair:
    alpha: Chain
    alpha_tilde: Chain


def alpha_n(pres: Presentation, x: str = "x", n: int = 1) -> AlphaPair:
    """Both normalizations: α_n = ½α̃_n and α̃_n, of degree 2n − 1."""
    if n < 1:
        raise ValueError("n must be positive")
    xi = _inverse_symbol(pres, x)
    full = _alpha_tilde(ExactBackend(), pres, x, n, xi)
    return AlphaPair(full * Fraction(1, 2), full)


def _alpha_chains(K: Backend, A: Presentation, x: str, N: int, weights=None, xi: str | None = None):
    xi = xi or _inverse_symbol(K.origin(A) if isinstance(K, OracleBackend) else A, x)
    weights = weights or [math.factorial(k) for k in range(N + 1)]
    if len(weights) != N + 1:
        raise ValueError(f"need {N + 1} weights, got {len(weights)}")
    return [_alpha_tilde(K, A, x, k + 1, xi) * (Fraction(w) / 2) for k, w in enumerate(weights)]


def alpha_mixed(pres: Presentation, x: str = "x", N: int = DEFAULT_TRUNCATION,
                weights: Iterable[Fraction | int] | None = None) -> MixedChain:
    """α = Σ_{k≤N} k!·u^k·α_{k+1}; *weights* replaces the k! (negative controls)."""
    return MixedChain(_alpha_chains(ExactBackend(), pres, x, N, list(weights) if weights else None))


def _beta1_cospan(K: Backend, A: Presentation):
    return K.tensor(A, "yinv", "xinv", "x*y") - K.tensor(A, "y", "yinv*xinv", "x")


def beta1_cospan(pres: Presentation | None = None) -> Chain:
    """β₁ = y⁻¹⊗x⁻¹⊗xy − y⊗y⁻¹x⁻¹⊗x, in the free pair or the groupoid C."""
    return _beta1_cospan(ExactBackend(), pres or laurent_pair())


def _beta1_a2(K: Backend, A: Presentation):
    return (
        K.tensor(A, "estar", "e", "l") + K.tensor(A, "l", "estar", "e")
        - K.tensor(A, "estar", "a2inv", "e") - K.tensor(A, "a2inv", "e", "estar")
        + K.B(K.tensor(A, "estar", "e*l"))
    )


def beta1_a2(pres: Presentation | None = None) -> Chain:
    """The homotopy β₁ with b(β₁) = μ₁(α̃₁) + μ₂(α̃₁) in the localized A₂ algebra."""
    return _beta1_a2(ExactBackend(), pres or a2_loc())


# -- identity registry -----------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    id: str
    suite: str
    statement: str
    build: Callable[[Backend], list]
    expect_zero: bool = True
    oracle: bool = True


REGISTRY: list[Identity] = []
SUITES = ("laurent", "cospan", "a2", "invrels")
EXTRA_SUITES: dict[str, Callable[[int], list[Identity]]] = {}


def _identity(id: str, suite: str, statement: str, *, expect_zero: bool = True, oracle: bool = True):
    def wrap(fn):
        REGISTRY.append(Identity(id, suite, statement, fn, expect_zero, oracle))
        return fn
    return wrap


def _laurent_alpha(K: Backend, n: int):
    A = K.algebra(laurent())
    return A, _alpha_tilde(K, A, "x", n, "xinv")


@_identity("laurent/alpha1-cycle", "laurent", "b(α̃₁) = 0")
def _(K):
    A, a1 = _laurent_alpha(K, 1)
    return [K.b(a1)]


for _n in (2, 3):
    @_identity(f"laurent/b-alpha{_n}", "laurent", f"b(α̃_{_n}) − 2·1⊗α̃_{_n - 1} = 0")
    def _(K, n=_n):
        A, an = _laurent_alpha(K, n)
        _, prev = _laurent_alpha(K, n - 1)
        return [K.b(an) - K.one_tensor(prev) * 2]

for _n in (1, 2, 3):
    @_identity(f"laurent/B-alpha{_n}", "laurent", f"B(α̃_{_n}) − {2 * _n}·1⊗α̃_{_n} = 0")
    def _(K, n=_n):
        A, an = _laurent_alpha(K, n)
        return [K.B(an) - K.one_tensor(an) * (2 * n)]


@_identity("laurent/inv", "laurent", "inv(α̃₁) + α̃₁ = 0")
def _(K):
    A, a1 = _laurent_alpha(K, 1)
    return [K.push(a1, inv_morphism()) + a1]


for _q in (3, Fraction(-2, 5)):
    @_identity(f"laurent/rescale-{_q}", "laurent", f"rescale_{_q}(α̃₁) − α̃₁ = 0")
    def _(K, q=_q):
        A, a1 = _laurent_alpha(K, 1)
        return [K.push(a1, rescale(q)) - a1]

    @_identity(f"laurent/eval-{_q}", "laurent", f"eval_{_q}(α̃₁) = 0")
    def _(K, q=_q):
        A, a1 = _laurent_alpha(K, 1)
        return [K.push(a1, eval_q(q))]


@_identity("interval/boundary", "laurent", "e₁ − e₂ − b(α₁) = 0 in kI, α₁ = ½(x⁻¹⊗x − x⊗x⁻¹)")
def _(K):
    A = K.algebra(interval_kI())
    a1 = _alpha_tilde(K, A, "x", 1, "xinv") * Fraction(1, 2)
    return [K.tensor(A, "id(1) - id(2)") - K.b(a1)]


def _cospan_identity(K: Backend, pres: Presentation):
    A = K.algebra(pres)
    za = _alpha_tilde(K, K.algebra(laurent("z")), "z", 1, "zinv")
    rhs = K.push(za, z_to_xy(pres)) - _alpha_tilde(K, A, "x", 1, "xinv") - _alpha_tilde(K, A, "y", 1, "yinv")
    return [K.b(_beta1_cospan(K, A)) - rhs]


@_identity("cospan/beta1-free-pair", "cospan", "b(β₁) − (α̃₁(xy) − α̃₁(x) − α̃₁(y)) = 0 in k⟨x^±1, y^±1⟩")
def _(K):
    return _cospan_identity(K, laurent_pair())


@_identity("cospan/beta1-groupoid", "cospan", "b(β₁) − (α̃₁(xy) − α̃₁(x) − α̃₁(y)) = 0 in C")
def _(K):
    return _cospan_identity(K, two_object_groupoid_C())


for _q in (1, 3, Fraction(-1, 2)):
    @_identity(f"cospan/pushout-{_q}", "cospan", f"α̃₁(x) + α̃₁(y) ↦ 0 in k⟨x^±1, y^±1⟩/(xy={_q})")
    def _(K, q=_q):
        A = K.algebra(laurent_pair())
        c = _alpha_tilde(K, A, "x", 1, "xinv") + _alpha_tilde(K, A, "y", 1, "yinv")
        return [K.push(c, pushout_quotient(q))]


def _a2(K: Backend):
    return K.algebra(a2_loc())


def _mu_images(K: Backend):
    a = _alpha_tilde(K, K.algebra(laurent("x1")), "x1", 1, "x1inv")
    b = _alpha_tilde(K, K.algebra(laurent("x2")), "x2", 1, "x2inv")
    return K.push(a, mu1()), K.push(b, mu2())


@_identity("a2/mu1-image", "a2", "μ₁(α̃₁) − (a₁⊗a₁⁻¹ − a₁⁻¹⊗a₁) = 0")
def _(K):
    A = _a2(K)
    return [_mu_images(K)[0] - (K.tensor(A, "a1", "a1inv") - K.tensor(A, "a1inv", "a1"))]


@_identity("a2/mu2-image", "a2", "μ₂(α̃₁) − (a₂⁻¹⊗a₂ − a₂⊗a₂⁻¹) = 0")
def _(K):
    A = _a2(K)
    return [_mu_images(K)[1] - (K.tensor(A, "a2inv", "a2") - K.tensor(A, "a2", "a2inv"))]


def _four_terms(K: Backend, A):
    return (K.tensor(A, "estar*e", "a1inv") - K.tensor(A, "a1inv", "estar*e")
            + K.tensor(A, "a2inv", "e*estar") - K.tensor(A, "e*estar", "a2inv"))


def _four_term_primitive(K: Backend, A):
    return (K.tensor(A, "estar", "e", "a1inv") + K.tensor(A, "a1inv", "estar", "e")
            - K.tensor(A, "estar", "a2inv", "e") - K.tensor(A, "a2inv", "e", "estar"))


def _one_tensor_difference(K: Backend, A):
    return K.tensor(A, "1", "a1inv - a2inv")


@_identity("a2/expansion", "a2",
           "μ₁(α̃₁) + μ₂(α̃₁) − (e*e⊗a₁⁻¹ − a₁⁻¹⊗e*e + a₂⁻¹⊗ee* − ee*⊗a₂⁻¹ + 1⊗(a₁⁻¹ − a₂⁻¹)) = 0")
def _(K):
    A = _a2(K)
    m1, m2 = _mu_images(K)
    return [m1 + m2 - _four_terms(K, A) - _one_tensor_difference(K, A)]


@_identity("a2/four-term", "a2",
           "e*e⊗a₁⁻¹ − a₁⁻¹⊗e*e + a₂⁻¹⊗ee* − ee*⊗a₂⁻¹ − b(e*⊗e⊗a₁⁻¹ + a₁⁻¹⊗e*⊗e − e*⊗a₂⁻¹⊗e − a₂⁻¹⊗e⊗e*) = 0")
def _(K):
    A = _a2(K)
    return [_four_terms(K, A) - K.b(_four_term_primitive(K, A))]


@_identity("a2/one-tensor-rewrite", "a2", "1⊗(a₁⁻¹ − a₂⁻¹) − 1⊗(ee*a₂⁻¹ − e*ea₁⁻¹) = 0")
def _(K):
    A = _a2(K)
    return [_one_tensor_difference(K, A) - K.tensor(A, "1", "e*estar*a2inv - estar*e*a1inv")]


@_identity("a2/minus-Bb", "a2", "1⊗(a₁⁻¹ − a₂⁻¹) + Bb(e*⊗ea₁⁻¹) = 0")
def _(K):
    A = _a2(K)
    return [_one_tensor_difference(K, A) + K.B(K.b(K.tensor(A, "estar", "e*l")))]


@_identity("a2/bB", "a2", "1⊗(a₁⁻¹ − a₂⁻¹) − bB(e*⊗ea₁⁻¹) = 0")
def _(K):
    A = _a2(K)
    return [_one_tensor_difference(K, A) - K.b(K.B(K.tensor(A, "estar", "e*l")))]


@_identity("a2/homotopy", "a2", "b(β₁) − (μ₁(α̃₁) + μ₂(α̃₁)) = 0")
def _(K):
    m1, m2 = _mu_images(K)
    return [K.b(_beta1_a2(K, _a2(K))) - m1 - m2]


@_identity("a2/homotopy-mu-form", "a2",
           "β₁ − (e*⊗e⊗μ + μ⊗e*⊗e − e*⊗μ⁻¹⊗e − μ⁻¹⊗e⊗e* + 1⊗e*⊗eμ − 1⊗μ⁻¹e⊗e*) = 0, μ = a₁⁻¹ + a₂")
def _(K):
    A = _a2(K)
    mu, mui = "a1inv + a2", "a1 + a2inv"
    other = (K.tensor(A, "estar", "e", mu) + K.tensor(A, mu, "estar", "e")
             - K.tensor(A, "estar", mui, "e") - K.tensor(A, mui, "e", "estar")
             + K.tensor(A, "1", "estar", f"e*({mu})") - K.tensor(A, "1", f"({mui})*e", "estar"))
    return [_beta1_a2(K, A) - other]


# (Y, candidate inverse R, unit of Y's block, optional registered inverse) per line
_INVRELS = [
    ("(1+e*e)⁻¹ = e₂ + a₁⁻¹", "1 + estar*e", "id(2) + l", "1", "ustarinv"),
    ("a₂⁻¹ = e₂ − ea₁⁻¹e*", "a2", "id(2) - e*l*estar", "id(2)", None),
    ("a₁⁻¹ = e₁ − e*a₂⁻¹e", "a1", "id(1) - estar*a2inv*e", "id(1)", "l"),
    ("(1+ee*)⁻¹ = e₁ + a₂⁻¹", "1 + e*estar", "id(1) + a2inv", "1", "uinv"),
]

_INVRELS2 = [
    ("a₂⁻¹e = ea₁⁻¹", "a2inv*e", "e*a1inv"),
    ("e*a₂⁻¹ = a₁⁻¹e*", "estar*a2inv", "a1inv*estar"),
    ("e*ea₁⁻¹ = e₁ − a₁⁻¹", "estar*e*a1inv", "id(1) - a1inv"),
    ("ee*a₂⁻¹ = e₂ − a₂⁻¹", "e*estar*a2inv", "id(2) - a2inv"),
]

for _i, (_st, _y, _r, _u, _named) in enumerate(_INVRELS, 1):
    @_identity(f"invrels/{_i}", "invrels", f"inverse relations, line {_i}: {_st}")
    def _(K, y=_y, r=_r, u=_u, named=_named):
        A = _a2(K)
        Y, R, U = K.el(A, y), K.el(A, r), K.el(A, u)
        out = [Y * R - U, R * Y - U]
        if named:
            out.append(K.el(A, named) - R)
        return out

for _i, (_st, _lhs, _rhs) in enumerate(_INVRELS2, 1):
    @_identity(f"invrels2/{_i}", "invrels", f"consequences, line {_i}: {_st}")
    def _(K, lhs=_lhs, rhs=_rhs):
        A = _a2(K)
        return [K.el(A, lhs) - K.el(A, rhs)]


def mixed_identities(truncation: int = DEFAULT_TRUNCATION) -> list[Identity]:
    """(b − uB)α = 0 through u^N, with remainder N!·B(α_{N+1}) ≠ 0."""
    N = truncation

    def coefficients(K):
        A = K.algebra(laurent())
        return K.mixed(_alpha_chains(K, A, "x", N, xi="xinv"))

    out = []
    for k in range(N + 1):
        out.append(Identity(f"mixed/u{k}", "laurent", f"u^{k} coefficient of (b − uB)α = 0",
                            lambda K, k=k: [coefficients(K)[0][k]]))

    def remainder_formula(K):
        A = K.algebra(laurent())
        a_next = _alpha_tilde(K, A, "x", N + 1, "xinv") * Fraction(1, 2)
        return [coefficients(K)[1] - K.B(a_next) * math.factorial(N)]

    out.append(Identity("mixed/remainder", "laurent", f"remainder − {N}!·B(α_{N + 1}) = 0", remainder_formula))
    out.append(Identity("mixed/remainder-nonzero", "laurent", f"remainder at u^{N + 1} ≠ 0",
                        lambda K: [coefficients(K)[1]], expect_zero=False))
    return out


def identities(suite: str = "all", truncation: int = DEFAULT_TRUNCATION) -> list[Identity]:
    from . import resolutions  # noqa: F401  (registers the a2-diagrams suite)

    known = SUITES + tuple(EXTRA_SUITES)
    if suite != "all" and suite not in known:
        raise KeyError(f"unknown suite {suite!r}; expected one of all, {', '.join(known)}")
    pool = REGISTRY + mixed_identities(truncation)
    for builder in EXTRA_SUITES.values():
        pool = pool + builder(truncation)
    return [i for i in pool if suite == "all" or i.suite == suite]


def suite_names() -> tuple[str, ...]:
    from . import resolutions  # noqa: F401
    return ("all",) + SUITES + tuple(EXTRA_SUITES)


# -- running -----------------------------------------------------------------------


@dataclass
class CheckResult:
    id: str
    suite: str
    statement: str
    passed: bool
    detail: str
    elapsed: float
    oracle: str | None = None  # "pass", "fail: …" or None when not cross-checked

    @property
    def ok(self) -> bool:
        return self.passed and (self.oracle is None or self.oracle == "pass")

    def as_dict(self, timings: bool = False) -> dict:
        d = {"id": self.id, "suite": self.suite, "statement": self.statement,
             "status": "pass" if self.passed else "fail"}
        if not self.passed:
            d["diff"] = self.detail
        if self.oracle is not None:
            d["oracle"] = self.oracle
        if timings:
            d["elapsed"] = round(self.elapsed, 4)
        return d


@dataclass
class WitnessSuiteReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def to_text(self, timings: bool = False) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            line = f"{status}  {r.id:<28} {r.statement}"
            if r.oracle is not None:
                line += f"  [oracle {r.oracle}]"
            if timings:
                line += f"  ({r.elapsed:.3f}s)"
            lines.append(line)
            if not r.passed:
                lines.append(f"      diff: {r.detail}")
        passed = sum(r.ok for r in self.results)
        lines.append(f"{passed}/{len(self.results)} identities pass")
        return "\n".join(lines)

    def to_json(self, timings: bool = False) -> str:
        return json.dumps({"ok": self.ok, "results": [r.as_dict(timings) for r in self.results]},
                          indent=2, ensure_ascii=False)


def _check(identity: Identity, K: Backend) -> tuple[bool, str]:
    try:
        parts = identity.build(K)
    except Exception as exc:  # a crash is a failure entry, not an abort
        return False, f"{type(exc).__name__}: {exc}"
    details = []
    verdicts = []
    for part in parts:
        zero, detail = K.vanishes(part)
        verdicts.append(zero)
        details.append(detail)
    if identity.expect_zero:
        ok = all(verdicts)
        bad = [d for d, z in zip(details, verdicts) if not z]
    else:
        ok = not any(verdicts)
        bad = ["expected a nonzero value, got 0" for z in verdicts if z]
    return ok, "; ".join(_clip(d) for d in bad)


def _clip(text: str, limit: int = 600) -> str:
    return text if len(text) <= limit else text[:limit] + " …"


def run_suite(names: str | Iterable[str] = "all", *, truncation: int = DEFAULT_TRUNCATION,
              oracle_trials: int = 0, seed=0) -> WitnessSuiteReport:
    """Run the named suites exactly; with ``oracle_trials > 0`` also cross-check each identity."""
    if isinstance(names, str):
        names = [names]
    chosen: list[Identity] = []
    seen: set[str] = set()
    for name in names:
        for ident in identities(name, truncation):
            if ident.id not in seen:
                seen.add(ident.id)
                chosen.append(ident)
    exact = ExactBackend()
    oracle = OracleBackend(oracle_trials, seed) if oracle_trials else None
    report = WitnessSuiteReport()
    for ident in chosen:
        start = time.perf_counter()
        passed, detail = _check(ident, exact)
        cross = None
        if oracle is not None and ident.oracle:
            ok, why = _check(ident, oracle)
            cross = "pass" if ok else f"fail: {why}"
        report.results.append(CheckResult(ident.id, ident.suite, ident.statement, passed, detail,
                                          time.perf_counter() - start, cross))
    return report
