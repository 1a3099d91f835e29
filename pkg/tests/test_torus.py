from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from artinqp.torus import (
    DegenerateTorus, TooManyPoints, TorsionCharacter, TranslatedSubtorus, intersect, parse_character, sample_character,
    shadow, solve_equations, subtorus_from_equations,
)
from strategies import characters


def eqs(w, c, n):
    (t,) = subtorus_from_equations(w, [F(x) for x in c], n)
    return t


def chi(*xs):
    return TorsionCharacter(tuple(F(x) for x in xs))


def tori(n: int):
    lattice = st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=0, max_size=n)

    @st.composite
    def build(draw):
        rows = draw(lattice)
        c = draw(characters(len(rows), 6))
        try:
            out = subtorus_from_equations(rows, list(c), n) if rows else [TranslatedSubtorus.full(n)]
        except ValueError:
            assume(False)
        assume(out)
        return out[0]

    return build()


def test_character_parsing_and_order():
    xi = parse_character("1/2, 1/3, 0")
    assert xi.exponents == (F(1, 2), F(1, 3), F(0))
    assert xi.order == 6
    assert parse_character("3/2").exponents == (F(1, 2),)
    with pytest.raises(ValueError):
        parse_character("1/x")


def test_case1_intersection_point():
    # {t1 = 1, t2 t3 = ζ} ∩ {t2 t3 = ζ, t1 t2 = ξ} = {(1, ξ, ζ ξ^-1)} with ζ = -1, ξ = e(1/3)
    a = eqs([[1, 0, 0], [0, 1, 1]], [0, F(1, 2)], 3)
    b = eqs([[0, 1, 1], [1, 1, 0]], [F(1, 2), F(1, 3)], 3)
    res = intersect(a, b)
    assert res.kind == "finite"
    assert res.points == (chi(0, F(1, 3), F(1, 6)),)


def test_self_and_empty_intersection():
    a = eqs([[1, 0]], [0], 2)
    res = intersect(a, a)
    assert res.kind == "positive" and res.components == (a,)
    assert intersect(a, eqs([[1, 0]], [F(1, 2)], 2)).kind == "empty"


def test_shadow_examples():
    a = eqs([[1, 1]], [F(1, 3)], 2)
    assert shadow(a) == eqs([[1, 1]], [0], 2)
    b = eqs([[1, 0]], [0], 2)
    assert shadow(b) == b
    assert shadow(eqs([[1, 0]], [F(1, 2)], 2)) == b
    with pytest.raises(DegenerateTorus):
        shadow(TranslatedSubtorus.point(chi(0, 0)))


def test_membership_examples():
    assert eqs([[1, 0]], [0], 2).contains(chi(0, F(1, 3)))
    assert not eqs([[1, 1]], [F(1, 3)], 2).contains_one()
    p = TranslatedSubtorus.point(chi(F(1, 2), F(1, 2)))
    assert p.contains(chi(F(1, 2), F(1, 2)))


def test_sampling_examples():
    full = TranslatedSubtorus.full(2)
    xi = sample_character(full, 7, 64)
    assert not xi.is_trivial() and xi.order <= 64
    assert sample_character(eqs([[1, 0]], [0], 2), 3, 64).exponents[0] == 0
    p = TranslatedSubtorus.point(chi(F(1, 2), F(1, 2)))
    assert sample_character(p, 0, 64, allow_point=True) == chi(F(1, 2), F(1, 2))
    with pytest.raises(DegenerateTorus):
        sample_character(p, 0, 64)


def test_finite_intersection_guard():
    with pytest.raises(TooManyPoints):
        solve_equations([[40, 0], [0, 40]], [0, 0], 2, max_points=1000)
    assert len(solve_equations([[4, 0], [0, 6]], [0, 0], 2)) == 24


@given(tori(3), tori(3))
def test_intersection_is_symmetric_and_sound(a, b):
    r1, r2 = intersect(a, b), intersect(b, a)
    assert r1.kind == r2.kind
    assert sorted(map(repr, r1.points)) == sorted(map(repr, r2.points))
    assert set(r1.components) == set(r2.components)
    for p in r1.points:
        assert a.contains(p) and b.contains(p)
    for c in r1.components:
        assert c.dim <= min(a.dim, b.dim)
        assert a.contains(c.translation) and b.contains(c.translation)


@given(tori(3))
def test_intersection_with_self(a):
    res = intersect(a, a)
    if a.dim:
        assert res.kind == "positive" and res.components == (a,)
    else:
        assert res.points == (a.translation,)


@given(tori(3), st.integers(0, 10**6))
def test_samples_lie_on_torus(a, seed):
    assume(a.dim > 0)
    assert a.contains(sample_character(a, seed, 64))
    assert sample_character(a, seed, 64) == sample_character(a, seed, 64)


@given(tori(3))
def test_shadow_properties(a):
    assume(a.dim > 0)
    s = shadow(a)
    assert shadow(s) == s and s.contains_one() and s.dim == a.dim


def test_complementary_subtori_meet_at_one():
    a = TranslatedSubtorus.through(chi(0, 0, 0), [[1], [0], [0]])
    b = TranslatedSubtorus.through(chi(0, 0, 0), [[0, 0], [1, 0], [0, 1]])
    res = intersect(a, b)
    assert res.kind == "finite" and res.points == (chi(0, 0, 0),)


@given(tori(3), st.lists(st.integers(0, 11), min_size=3, max_size=3))
def test_parametrization_stays_inside(a, s):
    assume(a.dim > 0)
    assert a.contains(a.parametrize([F(x, 12) for x in s[: a.dim]]))
