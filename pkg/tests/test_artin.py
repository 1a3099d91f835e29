from fractions import Fraction as F
from itertools import combinations, product
from math import cos, gcd, pi

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.utilities.iterables import multiset_partitions

from artinqp import modrank
from artinqp.alexander import char_ideal
from artinqp.artin import (
    FormulaIdeal, LabeledGraph, NotRightAngled, artin_b1, artin_presentation, char1_ideal_formula,
    classify_right_angled, complete_multipartite, coordinate_of, coxeter_type, cycle_graph, edge_relator,
    enumerate_components, formula_zero_mask, gamma_ev, odd_components, parse_graph, path_graph,
    triangle_char_ideals, triangle_graph, triangle_type,
)
from artinqp.groups import abelianization
from artinqp.sweep import compare_formula_with_fox, labelled_graphs
from artinqp.torus import TorsionCharacter

LABELS = (None, 2, 3, 4, 5, 6)


@st.composite
def graphs(draw, max_n=5, labels=LABELS):
    n = draw(st.integers(1, max_n))
    edges = []
    for i, j in combinations(range(n), 2):
        lab = draw(st.sampled_from(labels))
        if lab is not None:
            edges.append((i, j, lab))
    return LabeledGraph(tuple(f"v{k}" for k in range(n)), tuple(edges))


def grid(b1, N):
    """All characters of order dividing N, as integer numerators over N."""
    return np.array(list(product(range(N), repeat=b1)), dtype=np.int64)


def fox_depths(g, X, N):
    """Depth at each character row of X (numerators over N on H1 coordinates)."""
    pres = artin_presentation(g)
    comp = coordinate_of(g)
    orders = [N // gcd(N, gcd(*map(int, row))) if any(row) else 1 for row in X]
    ranks = modrank.exact_ranks_int(pres, X[:, comp], N, orders)
    nontriv = np.array([any(row) for row in X])
    return g.n - ranks - nontriv


# presentations ---------------------------------------------------------------

def test_edge_relator_is_the_braid_relation():
    # x0 x1 x0 = x1 x0 x1
    assert edge_relator(0, 1, 3).syllables == ((0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1))
    assert len(list(edge_relator(0, 1, 4).letters())) == 8


def test_parse_graph_example():
    g = parse_graph("v a\nv b\nv c\ne a b 3\ne b c 4\n")
    assert g.vertices == ("a", "b", "c") and g.edges == ((0, 1, 3), (1, 2, 4))


@given(graphs())
def test_b1_is_number_of_odd_components(g):
    ab = abelianization(artin_presentation(g))
    assert ab.torsion == ()
    assert ab.rank == artin_b1(g) == len(odd_components(g))


def test_gamma_ev_example():
    g = cycle_graph([3, 4, 3, 6])
    ev = gamma_ev(g)
    assert ev.classes == ((0, 1), (2, 3))
    assert ev.edges == ((0, 1, 4), (0, 1, 6)) and not ev.is_simple()


# right-angled classification -------------------------------------------------

def _multipartite_oracle(g):
    adj = {(i, j) for i, j, _ in g.edges}
    for part in multiset_partitions(list(range(g.n))):
        ok = True
        for a, b in combinations(range(g.n), 2):
            same = any(a in blk and b in blk for blk in part)
            if same == ((a, b) in adj):
                ok = False
                break
        if ok:
            return True
    return False


@given(graphs(labels=(None, 2)))
def test_right_angled_matches_partition_oracle(g):
    v = classify_right_angled(g)
    assert (v.verdict == "QP") == _multipartite_oracle(g)


def test_right_angled_examples():
    assert classify_right_angled(complete_multipartite([2, 3])).verdict == "QP"
    assert classify_right_angled(path_graph([2, 2, 2])).verdict == "NOT_QP"
    with pytest.raises(NotRightAngled):
        classify_right_angled(path_graph([3]))


# Coxeter classification ------------------------------------------------------

def _gram_kind(g, verts):
    k = len(verts)
    G = np.eye(k)
    for a, b in combinations(range(k), 2):
        m = g.label(verts[a], verts[b])
        G[a, b] = G[b, a] = -1.0 if m is None else -cos(pi / m)
    ev = np.linalg.eigvalsh(G)
    if ev.min() > 1e-9:
        return "spherical"
    if ev.min() > -1e-9:
        return "affine"
    return "other"


@given(graphs(max_n=6))
def test_coxeter_classifier_matches_gram_matrix(g):
    for verts, kind, _ in coxeter_type(g):
        if kind == "free":
            kind = "affine" if len(verts) == 2 else "other"
        assert kind == _gram_kind(g, verts), (g, verts)


@pytest.mark.parametrize("pqr,kind", [((3, 3, 3), "euclidean"), ((4, 4, 2), "euclidean"), ((6, 3, 2), "euclidean"),
                                      ((5, 3, 2), "spherical"), ((4, 3, 2), "spherical"), ((7, 3, 2), "hyperbolic"),
                                      ((4, 4, 4), "hyperbolic")])
def test_triangle_type(pqr, kind):
    assert triangle_type(*pqr) == kind


# spanning-tree formula -------------------------------------------------------

@pytest.mark.parametrize("g", [triangle_graph(6, 4, 2), triangle_graph(3, 3, 3), triangle_graph(4, 3, 2),
                               path_graph([4, 3, 6]), cycle_graph([4, 2, 4, 6])],
                         ids=["t642", "t333", "t432", "path436", "c4246"])
def test_formula_agrees_with_fox(g):
    nchars, bad = compare_formula_with_fox(g, seed=3)
    assert nchars > 0 and bad == []


def test_formula_agrees_on_small_graph_subset():
    for k, g in enumerate(labelled_graphs(4, (2, 3, 4, 6))):
        if k % 7:
            continue
        _, bad = compare_formula_with_fox(g, seed=k)
        assert bad == [], g


@pytest.mark.parametrize("pqr", [(3, 2, 1), (2, 2, 2), (3, 3, 2), (2, 2, 1)])
def test_triangle_ideals_match_depth(pqr):
    p, q, r = pqr
    g = triangle_graph(2 * p, 2 * q, 2 * r)
    ideals = triangle_char_ideals(p, q, r)
    N = 12
    X = grid(3, N)
    depth = fox_depths(g, X, N)
    z1 = formula_zero_mask(FormulaIdeal("triangle", ideals.char1, 3), X, N)
    z2 = formula_zero_mask(FormulaIdeal("triangle", ideals.char2, 3), X, N)
    for k in range(1, len(X)):
        assert z1[k] == (depth[k] >= 1)
        assert z2[k] == (depth[k] >= 2)


# component enumeration -------------------------------------------------------

def _union_matches_depth(g, comps, N):
    X = grid(artin_b1(g), N)
    depth = fox_depths(g, X, N)
    for k in range(1, len(X)):
        xi = TorsionCharacter(tuple(F(int(x), N) for x in X[k]))
        assert any(c.contains(xi) for c in comps) == (depth[k] >= 1), xi


def test_components_of_t642():
    g = triangle_graph(6, 4, 2)
    comps = enumerate_components(char_ideal(artin_presentation(g), 1).generators, 3)
    assert sorted(c.dim for c in comps) == [0, 1, 1, 1, 1, 1]
    assert sum(c.translation.is_trivial() and c.dim == 0 for c in comps) == 1
    _union_matches_depth(g, comps, 12)


def test_components_of_even_square():
    g = cycle_graph([4, 4, 4, 4])
    comps = enumerate_components(char_ideal(artin_presentation(g), 1).generators, 4)
    assert len(comps) == 16 and all(c.dim == 2 for c in comps)
    _union_matches_depth(g, comps, 4)


def test_formula_factors_enumerate_like_minors():
    g = triangle_graph(6, 4, 2)
    a = enumerate_components(char1_ideal_formula(g).generators, 3)
    b = enumerate_components(char_ideal(artin_presentation(g), 1).generators, 3)
    key = lambda c: str(c)  # noqa: E731
    positive = lambda cs: sorted((c for c in cs if c.dim > 0), key=key)  # noqa: E731
    assert [str(c) for c in positive(a)] == [str(c) for c in positive(b)]
