import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from artinqp import obstruct
from artinqp.artin import (
    LabeledGraph, artin_presentation, complete_graph, complete_multipartite, cycle_graph, path_graph, triangle_graph,
)
from artinqp.groups import parse_presentation
from artinqp.obstruct import NOT_QP, PASSED, QP, UNKNOWN, VIOLATED, BatteryOptions, run_battery
from artinqp.subgroups import FiniteQuotientMap, kernel_presentation
from artinqp.sweep import labelled_graphs

# Coxeter diagram 3-3-5; non-adjacent diagram nodes commute
H4 = LabeledGraph.build("abcd", [("a", "b", 3), ("b", "c", 3), ("c", "d", 5), ("a", "c", 2), ("a", "d", 2), ("b", "d", 2)])
NOQP = "gens: x t\nrel: x t t x t^-1 x^-1 x^-1 t^-1 t^-1"


def ids(report, outcome):
    return {t.id for t in report.tests if t.outcome == outcome}


@pytest.mark.parametrize("g,verdict", [
    (triangle_graph(6, 4, 2), NOT_QP), (triangle_graph(4, 4, 4), NOT_QP), (triangle_graph(8, 6, 4), NOT_QP),
    (triangle_graph(3, 3, 3), QP), (triangle_graph(4, 4, 2), QP),
    (triangle_graph(6, 6, 6), UNKNOWN), (triangle_graph(None, 3, 2), UNKNOWN),
    (complete_multipartite([2, 3]), QP), (path_graph([2, 2, 2]), NOT_QP), (path_graph([4, 2]), NOT_QP),
    (cycle_graph([4, 4, 4, 4]), NOT_QP),
], ids=["t642", "t444", "t864", "t333", "t442", "t666", "ti32", "k23", "p4", "path42", "c4even"])
def test_graph_verdicts(g, verdict):
    assert run_battery(g).verdict == verdict


def test_presentation_verdicts():
    r = run_battery(parse_presentation(NOQP))
    assert r.verdict == NOT_QP and "alexander.A2" in ids(r, VIOLATED)


@pytest.mark.parametrize("text", [
    "gens: a b c\n",
    "gens: a b c\nrel: a b a^-1 b^-1\nrel: a c a^-1 c^-1\nrel: b c b^-1 c^-1",
    "gens: a b c d\nrel: a c a^-1 c^-1\nrel: a d a^-1 d^-1\nrel: b c b^-1 c^-1\nrel: b d b^-1 d^-1",
    "gens: a b\nrel: a b a b^-1 a^-1 b^-1",
], ids=["F3", "Z3", "F2xF2", "braid3"])
def test_known_quasi_projective_groups_are_never_violated(text):
    assert run_battery(parse_presentation(text)).violated() == []


@pytest.mark.parametrize("g", [triangle_graph(5, 3, 2), triangle_graph(6, 3, 2), triangle_graph(3, 3, 3),
                               triangle_graph(4, 2, 3), H4, complete_graph(4)],
                         ids=["H3", "G2aff", "A2aff", "B3", "H4", "K4"])
def test_spherical_and_euclidean_inputs(g):
    r = run_battery(g)
    assert r.verdict == QP and r.violated() == []


def test_report_json_is_deterministic():
    g = triangle_graph(6, 4, 2)
    a, b = run_battery(g).dumps(), run_battery(g).dumps()
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == obstruct.SCHEMA
    assert set(doc) == {"schema", "verdict", "tests", "provenance", "notes"}
    assert set(doc["provenance"]) == {"input_sha256", "input_kind", "seed", "order_bound", "max_minors",
                                      "max_points", "max_level", "version"}
    assert all(set(t) >= {"id", "outcome"} for t in doc["tests"])


def test_seed_is_recorded_but_does_not_change_outcomes():
    g = triangle_graph(6, 4, 2)
    a = run_battery(g, BatteryOptions(seed=1)).to_json()
    b = run_battery(g, BatteryOptions(seed=2)).to_json()
    assert a["provenance"]["seed"] == 1 and b["provenance"]["seed"] == 2
    assert a["tests"] == b["tests"]


def _coherent(g):
    analytic = run_battery(g, BatteryOptions(shortcuts=False))
    shortcut = run_battery(g, BatteryOptions(analytic=False))
    full = run_battery(g)
    assert not (shortcut.verdict == QP and analytic.violated()), g
    assert full.verdict in {shortcut.verdict, analytic.verdict} | ({UNKNOWN} if
                                                                 UNKNOWN == shortcut.verdict == analytic.verdict else set())
    if NOT_QP in (shortcut.verdict, analytic.verdict):
        assert full.verdict == NOT_QP


def test_shortcuts_and_analytic_tests_agree_up_to_three_vertices():
    for g in labelled_graphs(3, (2, 3, 4, 5, 6)):
        _coherent(g)


def test_shortcuts_and_analytic_tests_agree_on_four_vertex_sample():
    graphs = list(labelled_graphs(4, (2, 3, 4, 6)))
    for g in random.Random(7).sample(graphs, 25):
        _coherent(g)


def test_case4_index_two_kernel_is_obstructed():
    pres = artin_presentation(triangle_graph(4, 4, 4))
    sub = kernel_presentation(pres, FiniteQuotientMap.cyclic(2, [0, 0, 1]))
    r = run_battery(sub)
    assert r.verdict == NOT_QP
    assert "charvar.intersections" in ids(r, VIOLATED)


def test_unknown_graph_carries_a_note():
    r = run_battery(triangle_graph(6, 6, 6))
    assert r.verdict == UNKNOWN and r.notes


def test_realization_ids():
    assert "realization.right_angled" in ids(run_battery(complete_multipartite([1, 2])), PASSED)
    assert "realization.coxeter" in ids(run_battery(triangle_graph(5, 3, 2)), PASSED)
