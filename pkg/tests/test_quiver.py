import json

import pytest

from mppa.quiver import (
    Edge, FusionOrder, Quiver, QuiverError, check, double, jordan, load_quiver, quiver_from_json,
    quiver_to_json, separated, star, star_quiver, two_cycle, validate,
)


def test_double_adds_one_reverse_edge_per_edge():
    dq = double(two_cycle())
    assert [e.id for e in dq.edges] == ["a", "b", "astar", "bstar"]
    assert dq.edge("astar") == Edge("astar", "2", "1")
    assert dq.sign["a"] == 1 and dq.sign["astar"] == -1
    assert dq.involution("a") == "astar" and dq.involution("astar") == "a"


def test_jordan_loop_gets_two_distinct_ids():
    dq = double(jordan())
    assert {e.id for e in dq.edges} == {"e", "estar"}
    assert all(e.src == e.tgt == "1" for e in dq.edges)


@pytest.mark.parametrize("vertices, edges, fragment", [
    (["1", "1"], [], "duplicate id"),
    (["1"], [("e", "1", "2")], "dangling endpoint"),
    (["1", "2"], [("e", "1", "2"), ("e", "2", "1")], "duplicate id"),
])
def test_invalid_quivers_are_rejected(vertices, edges, fragment):
    q = Quiver.from_lists(vertices, edges)
    assert fragment in validate(q)
    with pytest.raises(QuiverError, match=fragment):
        check(q)


def test_double_refuses_name_clash_with_reverse_edge():
    q = Quiver.from_lists(["1"], [("e", "1", "1"), (star("e"), "1", "1")])
    with pytest.raises(QuiverError, match="duplicate id"):
        double(q)


def test_separated_quiver_is_one_a2_per_edge():
    sep = separated(star_quiver(3))
    assert len(sep.vertices) == 6
    assert sep.edge("e2") == Edge("e2", "s(e2)", "t(e2)")


def test_fusion_order_default_and_validation():
    q = star_quiver(3)
    order = FusionOrder.default(q)
    assert order.incoming["c"] == ("e1", "e2", "e3")
    assert order.outgoing["v1"] == ("e1",)
    bad = FusionOrder(order.vertices, {**order.incoming, "c": ("e1", "e2")}, order.outgoing)
    with pytest.raises(QuiverError):
        bad.validate(q)


def test_json_round_trip(tmp_path):
    data = {
        "vertices": ["c", "v1", "v2"],
        "edges": [{"id": "e1", "src": "v1", "tgt": "c"}, {"id": "e2", "src": "v2", "tgt": "c"}],
        "q": {"c": "2/3", "v1": "1", "v2": "-5"},
        "fusion_order": {"c": {"in": ["e2", "e1"], "out": []}},
    }
    qf = quiver_from_json(data)
    assert qf.order.incoming["c"] == ("e2", "e1")
    assert str(qf.q["c"]) == "2/3"
    path = tmp_path / "q.json"
    path.write_text(json.dumps(quiver_to_json(qf)))
    again = load_quiver(path)
    assert again.quiver == qf.quiver and again.q == qf.q and again.order == qf.order


def test_json_rejects_float_parameters():
    with pytest.raises(QuiverError):
        quiver_from_json({"vertices": ["1"], "edges": [], "q": {"1": 0.5}})
