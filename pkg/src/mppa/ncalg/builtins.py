"""Built-in presentations: Laurent algebras, the interval category, kQ̄_loc and friends."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..quiver import Quiver, a2, check, double, star
from .core import AlgebraError, AlgebraMorphism, Generator, Presentation, idem

POINT_VERTEX = "o"


def inv_name(x: str) -> str:
    return x + "inv"


@lru_cache(maxsize=None)
def point() -> Presentation:
    """The ground field k as a one-object category."""
    return Presentation("k", [POINT_VERTEX], [])


def laurent(x: str = "x") -> Presentation:
    return _laurent(x)


@lru_cache(maxsize=None)
def _laurent(x: str) -> Presentation:
    xi = inv_name(x)
    return Presentation(
        f"k[{x}^±1]", [POINT_VERTEX],
        [Generator(x, POINT_VERTEX, POINT_VERTEX), Generator(xi, POINT_VERTEX, POINT_VERTEX)],
        [((x, xi), "1"), ((xi, x), "1")],
        inverses={x: xi, xi: x},
    )


def laurent_free(names, label: str | None = None) -> Presentation:
    """Free group algebra k⟨x_1^±1, …⟩ on one object."""
    return _laurent_free(tuple(names), label)


@lru_cache(maxsize=None)
def _laurent_free(names: tuple[str, ...], label: str | None) -> Presentation:
    gens, rules, inverses = [], [], {}
    for x in names:
        xi = inv_name(x)
        gens += [Generator(x, POINT_VERTEX, POINT_VERTEX), Generator(xi, POINT_VERTEX, POINT_VERTEX)]
        rules += [((x, xi), "1"), ((xi, x), "1")]
        inverses |= {x: xi, xi: x}
    return Presentation(label or f"k<{','.join(names)}^±1>", [POINT_VERTEX], gens, rules, inverses=inverses)


@lru_cache(maxsize=None)
def laurent_pair() -> Presentation:
    return laurent_free(["x", "y"], "k<x^±1,y^±1>")


def laurent_coproduct(names, vertices=None) -> Presentation:
    """∐_i k[x_i^±1]: one object per variable."""
    return _laurent_coproduct(tuple(names), tuple(vertices) if vertices else None)


@lru_cache(maxsize=None)
def _laurent_coproduct(names: tuple[str, ...], vertices: tuple[str, ...] | None) -> Presentation:
    vertices = vertices or [f"o{i}" for i in range(1, len(names) + 1)]
    gens, rules, inverses = [], [], {}
    for x, v in zip(names, vertices):
        xi = inv_name(x)
        gens += [Generator(x, v, v), Generator(xi, v, v)]
        rules += [((x, xi), idem(v)), ((xi, x), idem(v))]
        inverses |= {x: xi, xi: x}
    return Presentation("∐".join(f"k[{x}^±1]" for x in names), vertices, gens, rules, inverses=inverses)


@lru_cache(maxsize=None)
def interval_kI() -> Presentation:
    """Two objects 1, 2 and an isomorphism x: 1 → 2."""
    return Presentation(
        "kI", ["1", "2"],
        [Generator("x", "1", "2"), Generator("xinv", "2", "1")],
        [(("x", "xinv"), "id(2)"), (("xinv", "x"), "id(1)")],
        inverses={"x": "xinv", "xinv": "x"},
    )


@lru_cache(maxsize=None)
def two_object_groupoid_C() -> Presentation:
    """Two objects with isomorphisms x: 1 → 2 and y: 2 → 1."""
    return Presentation(
        "C", ["1", "2"],
        [
            Generator("x", "1", "2"), Generator("xinv", "2", "1"),
            Generator("y", "2", "1"), Generator("yinv", "1", "2"),
        ],
        [
            (("x", "xinv"), "id(2)"), (("xinv", "x"), "id(1)"),
            (("y", "yinv"), "id(1)"), (("yinv", "y"), "id(2)"),
        ],
        inverses={"x": "xinv", "xinv": "x", "y": "yinv", "yinv": "y"},
    )


def pushout_xy_q(q: Fraction | int | str = 1) -> Presentation:
    """k⟨x^±1, y^±1⟩/(xy = q), presented by eliminating y."""
    return _pushout_xy_q(Fraction(q))


@lru_cache(maxsize=None)
def _pushout_xy_q(q: Fraction) -> Presentation:
    if q == 0:
        raise AlgebraError("q must be invertible")
    o = POINT_VERTEX
    return Presentation(
        f"k<x^±1,y^±1>/(xy={q})", [o],
        [Generator(n, o, o) for n in ("x", "xinv", "y", "yinv")],
        [
            (("x", "xinv"), "1"), (("xinv", "x"), "1"),
            (("y",), f"{q}*xinv"), (("yinv",), f"{1 / q}*x"),
        ],
        inverses={"x": "xinv", "xinv": "x", "y": "yinv", "yinv": "y"},
    )


def loc_inverse(edge_id: str) -> str:
    return f"l_{edge_id}"


def quiver_loc(q: Quiver, inverse_names: dict[str, str] | None = None, *, suffix: bool = True,
               name: str | None = None) -> Presentation:
    """kQ̄_loc: the doubled path algebra with (e_{s(e)} + e*e) inverted for every e ∈ E.

    Per edge e the generator ``l_e`` stands for (e_{s(e)} + e*e)⁻¹ with rules
    e*·e·l_e → e_{s(e)} − l_e and l_e·e*·e → e_{s(e)} − l_e.  All other inverses
    are macros; for an edge ``e`` with ``suffix=True`` they are named
    ``a1_e, a2_e, a1inv_e, a2inv_e, u_e = 1+ee*, ustar_e = 1+e*e, uinv_e, ustarinv_e``.
    """
    return _quiver_loc(q, tuple(sorted((inverse_names or {}).items())), suffix, name)


@lru_cache(maxsize=None)
def _quiver_loc(q: Quiver, inverse_names, suffix: bool, name: str | None) -> Presentation:
    check(q)
    dq = double(q)
    inverse_names = dict(inverse_names)
    gens = [Generator(e.id, e.src, e.tgt) for e in dq.edges]
    rules, macros, inverses = [], {}, {}
    for e in q.edges:
        es = star(e.id)
        ell = inverse_names.get(e.id, loc_inverse(e.id))
        gens.append(Generator(ell, e.src, e.src))
        s, t = idem(e.src), idem(e.tgt)
        rules.append(((es, e.id, ell), f"{s} - {ell}"))
        rules.append(((ell, es, e.id), f"{s} - {ell}"))
        sfx = f"_{e.id}" if suffix else ""
        m = {
            "a1": f"{s} + {es}*{e.id}",
            "a2": f"{t} + {e.id}*{es}",
            "a1inv": ell,
            "a2inv": f"{t} - {e.id}*{ell}*{es}",
            "u": f"1 + {e.id}*{es}",
            "ustar": f"1 + {es}*{e.id}",
            "uinv": f"1 - {t} + a2inv{sfx}",
            "ustarinv": f"1 - {s} + {ell}",
        }
        for k, v in m.items():
            macros[k + sfx] = v
        for k in ("a1", "a2", "u", "ustar"):
            inverses[k + sfx] = k + "inv" + sfx
            inverses[k + "inv" + sfx] = k + sfx
        inverses[ell] = "a1" + sfx
    return Presentation(name or f"kQ̄_loc({','.join(e.id for e in q.edges)})", q.vertices, gens, rules,
                        macros, inverses)


@lru_cache(maxsize=None)
def a2_loc() -> Presentation:
    """k Ā_2[a_1⁻¹, a_2⁻¹] with e: 1 → 2 and ℓ = a_1⁻¹ named ``l``."""
    return quiver_loc(a2(), {"e": "l"}, suffix=False, name="a2_loc")


BUILTINS = {
    "laurent": laurent,
    "laurent_pair": laurent_pair,
    "interval_kI": interval_kI,
    "a2_loc": a2_loc,
    "two_object_groupoid_C": two_object_groupoid_C,
    "pushout_xy_q": pushout_xy_q,
    "quiver_loc": quiver_loc,
    "point": point,
}

ALIASES = {"a2loc": "a2_loc", "kI": "interval_kI", "C": "two_object_groupoid_C", "pushout": "pushout_xy_q"}


def builtin(name: str, *params) -> Presentation:
    key = ALIASES.get(name, name)
    if key not in BUILTINS:
        raise AlgebraError(f"unknown presentation {name!r}")
    return BUILTINS[key](*params)


# -- standard morphisms between the built-ins ---------------------------------


def inv_morphism(x: str = "x") -> AlgebraMorphism:
    A = laurent(x)
    return AlgebraMorphism(A, A, {x: inv_name(x), inv_name(x): x}, name="inv")


def rescale(q: Fraction | int, x: str = "x") -> AlgebraMorphism:
    A = laurent(x)
    q = Fraction(q)
    return AlgebraMorphism(A, A, {x: A.gen(x) * q, inv_name(x): A.gen(inv_name(x)) * (1 / q)},
                           name=f"rescale_{q}")


def eval_q(q: Fraction | int, x: str = "x") -> AlgebraMorphism:
    """The k-point x ↦ q of k[x^±1]."""
    A, k = laurent(x), point()
    q = Fraction(q)
    return AlgebraMorphism(A, k, {x: k.one() * q, inv_name(x): k.one() * (1 / q)}, name=f"eval_{q}")


def mu1(B: Presentation | None = None) -> AlgebraMorphism:
    B = B or a2_loc()
    return AlgebraMorphism(laurent("x1"), B, {"x1": "l", "x1inv": "a1"}, {POINT_VERTEX: "1"}, name="mu1")


def mu2(B: Presentation | None = None) -> AlgebraMorphism:
    B = B or a2_loc()
    return AlgebraMorphism(laurent("x2"), B, {"x2": "a2", "x2inv": "a2inv"}, {POINT_VERTEX: "2"}, name="mu2")


def z_to_xy(target: Presentation) -> AlgebraMorphism:
    """k[z^±1] → target, z ↦ xy, for the free pair, the groupoid C or the pushout."""
    src = laurent("z")
    v = target.target(("x",))
    return AlgebraMorphism(src, target, {"z": "x*y", "zinv": "yinv*xinv"}, {POINT_VERTEX: v}, name="z->xy")


def pushout_quotient(q: Fraction | int) -> AlgebraMorphism:
    """The quotient map k⟨x^±1, y^±1⟩ → k⟨x^±1, y^±1⟩/(xy = q)."""
    src, tgt = laurent_pair(), pushout_xy_q(q)
    return AlgebraMorphism(src, tgt, {g: g for g in src.generators}, name=f"quotient_{Fraction(q)}")
