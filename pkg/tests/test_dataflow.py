"""Definition/use graphs checked against hand-derived goldens."""

import json
from pathlib import Path

import pytest

from ranatomy.dataflow import (
    EdgeKind,
    ResourceLimitError,
    Role,
    build_dataflow,
    redefinition_components,
    redefinitions,
    resolve_call_target,
)
from ranatomy.syntax import parse_text

DATAFLOW_FIXTURES = Path(__file__).parent / "fixtures" / "dataflow"
GOLDENS = DATAFLOW_FIXTURES / "goldens"
FIXTURE_NAMES = sorted(p.stem for p in DATAFLOW_FIXTURES.glob("*.R"))


def graph_for(name):
    source = (DATAFLOW_FIXTURES / f"{name}.R").read_text()
    return build_dataflow(parse_text(source)), source


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_graph_matches_golden(name):
    graph, _ = graph_for(name)
    golden = json.loads((GOLDENS / f"{name}.json").read_text())
    assert graph.to_dict() == golden


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_graph_wellformed(name):
    graph, source = graph_for(name)
    ids = [node.id for node in graph.nodes]
    assert ids == list(range(len(graph.nodes)))
    by_id = {node.id: node for node in graph.nodes}
    for node in graph.nodes:
        start, end = node.span
        assert 0 <= start <= end <= len(source)
        assert node.scope_depth >= 0
    for edge in graph.edges:
        src, dst = by_id[edge.src], by_id[edge.dst]
        if edge.kind is EdgeKind.READS_FROM:
            assert src.role is Role.USE
            assert src.name == dst.name
        elif edge.kind is EdgeKind.REDEFINES:
            assert src.name == dst.name
            assert src.role is not Role.USE
            assert dst.role is not Role.USE
        else:
            assert edge.kind is EdgeKind.CALLS_TARGET
            assert src.role is Role.CALL_SITE


def test_fixture_count_covers_claimed_patterns():
    assert len(FIXTURE_NAMES) == 15
    assert len(list(GOLDENS.glob("*.json"))) == 15


def test_super_assignment_binds_enclosing_frame():
    graph, source = graph_for("08_closure_super")
    supers = [n for n in graph.nodes if n.definer == "<<-"]
    assert len(supers) == 1
    inner_def = supers[0]
    # The assignment sits inside the nested function body...
    assert source[inner_def.span[0] : inner_def.span[1]] == "n"
    assert inner_def.span[0] > source.index("function() {")
    # ...but the binding lands in the enclosing function's frame.
    assert inner_def.scope_depth == 1
    outer = next(n for n in graph.nodes if n.definer == "<-" and n.name == "n")
    assert outer.scope_depth == 1
    redef = [
        e
        for e in graph.edges
        if e.kind is EdgeKind.REDEFINES and {e.src, e.dst} == {outer.id, inner_def.id}
    ]
    assert len(redef) == 1
    # The read `n + 1` sees the original definition (the only one before it).
    first_use = next(n for n in graph.nodes if n.role is Role.USE)
    reads = [
        e.dst
        for e in graph.edges
        if e.kind is EdgeKind.READS_FROM and e.src == first_use.id
    ]
    assert reads == [outer.id]


def test_call_resolves_to_latest_definition():
    graph, source = graph_for("09_call_latest_def")
    call = next(n for n in graph.nodes if n.role is Role.CALL_SITE)
    target = resolve_call_target(graph, call.id)
    assert target is not None
    target_node = graph.nodes[target]
    assert target_node.role is Role.DEFINITION
    # Latest definition wins: the second `f <-` line.
    assert target_node.span[0] == source.index("f <- function() 2")


def test_library_and_unknown_calls_stay_unresolved():
    graph, _ = graph_for("10_unresolved_calls")
    calls = [n for n in graph.nodes if n.role is Role.CALL_SITE]
    assert sorted(n.name for n in calls) == ["g", "library"]
    for call in calls:
        assert resolve_call_target(graph, call.id) is None
    unresolved_names = sorted(graph.nodes[i].name for i in graph.unresolved_calls)
    assert unresolved_names == ["g", "library"]
    assert not any(e.kind is EdgeKind.CALLS_TARGET for e in graph.edges)


def test_redefinition_chain_components():
    graph, _ = graph_for("02_redefinition_chain")
    components = redefinition_components(graph)
    assert len(components) == 1
    name, member_ids = components[0]
    assert name == "x"
    assert len(member_ids) == 3
    pairs = redefinitions(graph)
    assert pairs and pairs[0][0] == "x"


def test_replacement_call_reads_then_writes_base():
    graph, _ = graph_for("11_replacement_targets")
    x_nodes = [n for n in graph.nodes if n.name == "x"]
    roles = [n.role for n in sorted(x_nodes, key=lambda n: n.id)]
    # Each replacement form contributes a Use of the old value then a
    # Definition of the new one, in that order.
    assert roles.count(Role.USE) == 3
    assert roles.count(Role.DEFINITION) == 3


def test_member_access_rhs_is_not_a_use():
    graph, _ = graph_for("13_member_rhs_not_use")
    source = (DATAFLOW_FIXTURES / "13_member_rhs_not_use.R").read_text()
    uses = {
        source[n.span[0] : n.span[1]] for n in graph.nodes if n.role is Role.USE
    }
    # Field names after $ / @ and the name after :: never count as reads.
    for member in ("coef", "slot1", "read.csv"):
        assert member not in uses


def test_formula_symbols_are_uses():
    graph, _ = graph_for("14_formula_uses")
    uses = {n.name for n in graph.nodes if n.role is Role.USE}
    assert {"y", "x"} <= uses


def test_dynamic_callee_records_placeholder_site():
    graph, _ = graph_for("15_dynamic_and_dots")
    dynamic = [n for n in graph.nodes if n.role is Role.CALL_SITE and n.name == "<dynamic>"]
    assert dynamic
    # The expression computing the callee is still walked for reads.
    assert any(n.role is Role.USE and n.name == "fns" for n in graph.nodes)


def test_node_cap_raises_resource_limit():
    ast = parse_text("x <- 1\ny <- x + x\n")
    with pytest.raises(ResourceLimitError):
        build_dataflow(ast, node_cap=2)


def test_graph_to_dict_round_trips_through_json():
    graph, _ = graph_for("03_if_else_join")
    payload = json.loads(json.dumps(graph.to_dict()))
    assert payload == graph.to_dict()
