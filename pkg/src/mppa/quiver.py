"""Quivers, doubled quivers, separated quivers and fusion orderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping


class QuiverError(ValueError):
    """Raised when a quiver violates one of its structural invariants."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def from_lists(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def incoming(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.tgt == v]

    def outgoing(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.src == v]


def validate(q: Quiver) -> str | None:
    """Return ``None`` if *q* is well formed, else a short description of the first problem."""
    seen: set[str] = set()
    for v in q.vertices:
        if v in seen:
            return f"duplicate id: vertex {v!r}"
        seen.add(v)
    ids: set[str] = set()
    for e in q.edges:
        if e.id in ids:
            return f"duplicate id: edge {e.id!r}"
        ids.add(e.id)
        for end in (e.src, e.tgt):
            if end not in seen:
                return f"dangling endpoint: edge {e.id!r} refers to unknown vertex {end!r}"
    return None


def check(q: Quiver) -> Quiver:
    problem = validate(q)
    if problem is not None:
        raise QuiverError(problem)
    return q


def star(edge_id: str) -> str:
    """Name of the reverse edge e* of a base edge e."""
    return edge_id + "star"


@dataclass(frozen=True)
class DoubleQuiver:
    base: Quiver
    edges: tuple[Edge, ...]
    sign: Mapping[str, int]

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.base.vertices

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def involution(self, edge_id: str) -> str:
        for e in self.base.edges:
            if edge_id == e.id:
                return star(e.id)
            if edge_id == star(e.id):
                return e.id
        raise KeyError(edge_id)


def double(q: Quiver) -> DoubleQuiver:
    if isinstance(q, DoubleQuiver):
        raise TypeError("cannot double a doubled quiver")
    check(q)
    starred = {star(e.id) for e in q.edges}
    clash = starred & {e.id for e in q.edges}
    if clash:
        raise QuiverError(f"duplicate id: reverse edge name {sorted(clash)[0]!r} already used")
    edges = list(q.edges) + [Edge(star(e.id), e.tgt, e.src) for e in q.edges]
    sign = {e.id: 1 for e in q.edges} | {star(e.id): -1 for e in q.edges}
    return DoubleQuiver(q, tuple(edges), sign)


def separated(q: Quiver) -> Quiver:
    """One copy of A_2 per edge: the edge keeps its id, its endpoints become fresh vertices."""
    check(q)
    vertices: list[str] = []
    edges: list[Edge] = []
    for e in q.edges:
        s, t = sep_source(e.id), sep_target(e.id)
        vertices += [s, t]
        edges.append(Edge(e.id, s, t))
    return Quiver(tuple(vertices), tuple(edges))


def sep_source(edge_id: str) -> str:
    return f"s({edge_id})"


def sep_target(edge_id: str) -> str:
    return f"t({edge_id})"


@dataclass(frozen=True)
class FusionOrder:
    """Per-vertex orders on incoming edges and on outgoing edges, plus a vertex order.

    ``incoming[v]`` orders E ∩ t⁻¹(v); ``outgoing[v]`` orders the edges e with
    s(e) = v, i.e. the reverse edges e* of E* ∩ t⁻¹(v).
    """

    vertices: tuple[str, ...]
    incoming: Mapping[str, tuple[str, ...]]
    outgoing: Mapping[str, tuple[str, ...]]

    @classmethod
    def default(cls, q: Quiver) -> "FusionOrder":
        return cls(
            tuple(sorted(q.vertices)),
            {v: tuple(sorted(e.id for e in q.incoming(v))) for v in q.vertices},
            {v: tuple(sorted(e.id for e in q.outgoing(v))) for v in q.vertices},
        )

    def validate(self, q: Quiver) -> None:
        if sorted(self.vertices) != sorted(q.vertices):
            raise QuiverError("fusion order must list every vertex exactly once")
        for v in q.vertices:
            if sorted(self.incoming.get(v, ())) != sorted(e.id for e in q.incoming(v)):
                raise QuiverError(f"fusion order at {v!r} does not cover the incoming edges")
            if sorted(self.outgoing.get(v, ())) != sorted(e.id for e in q.outgoing(v)):
                raise QuiverError(f"fusion order at {v!r} does not cover the outgoing edges")


@dataclass
class QuiverFile:
    quiver: Quiver
    q: dict[str, Fraction] = field(default_factory=dict)
    order: FusionOrder | None = None


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, float):
        raise QuiverError("rationals must be exact strings, not floats")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def load_quiver(path: str | Path) -> QuiverFile:
    return quiver_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def quiver_from_json(data: dict) -> QuiverFile:
    quiver = check(Quiver(
        tuple(data["vertices"]),
        tuple(Edge(e["id"], e["src"], e["tgt"]) for e in data.get("edges", [])),
    ))
    q = {v: parse_rational(x) for v, x in data.get("q", {}).items()}
    order = None
    if "fusion_order" in data:
        default = FusionOrder.default(quiver)
        incoming = dict(default.incoming)
        outgoing = dict(default.outgoing)
        for v, spec in data["fusion_order"].items():
            if isinstance(spec, list):
                incoming[v] = tuple(spec)
            else:
                incoming[v] = tuple(spec.get("in", incoming[v]))
                outgoing[v] = tuple(spec.get("out", outgoing[v]))
        order = FusionOrder(tuple(data.get("vertex_order", default.vertices)), incoming, outgoing)
        order.validate(quiver)
    return QuiverFile(quiver, q, order)


def quiver_to_json(qf: QuiverFile) -> dict:
    data: dict = {
        "vertices": list(qf.quiver.vertices),
        "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in qf.quiver.edges],
    }
    if qf.q:
        data["q"] = {v: format_rational(x) for v, x in qf.q.items()}
    if qf.order is not None:
        data["fusion_order"] = {
            v: {"in": list(qf.order.incoming[v]), "out": list(qf.order.outgoing[v])}
            for v in qf.quiver.vertices
        }
        data["vertex_order"] = list(qf.order.vertices)
    return data


# Test quivers used throughout the suite.

def a2() -> Quiver:
    return Quiver.from_lists(["1", "2"], [("e", "1", "2")])


def jordan() -> Quiver:
    return Quiver.from_lists(["1"], [("e", "1", "1")])


def two_cycle() -> Quiver:
    return Quiver.from_lists(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])


def star_quiver(arms: int = 3) -> Quiver:
    return Quiver.from_lists(
        ["c"] + [f"v{i}" for i in range(1, arms + 1)],
        [(f"e{i}", f"v{i}", "c") for i in range(1, arms + 1)],
    )


TEST_QUIVERS = {"A2": a2, "jordan": jordan, "two_cycle": two_cycle, "star3": star_quiver}
