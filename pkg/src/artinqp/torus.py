"""Torsion characters and translated subtori of (C*)^n.

A character is stored by its exponents x in (Q/Z)^n, meaning
t_i = exp(2πi·x_i).  A translated subtorus is ``χ · exp(2πi·B s)`` for a
saturated integer lattice B (n × d, columns a basis), i.e. the image form.
The equation form ``W x ≡ W χ (mod 1)`` with W·B = 0 follows from the Smith
form of B and is what intersections and membership tests use.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import intmat

#: refuse to enumerate finite intersections larger than this
MAX_POINTS = 10_000


class DegenerateTorus(ValueError):
    """Operation needs a positive-dimensional subtorus."""


class TooManyPoints(RuntimeError):
    """Finite intersection exceeds the enumeration guard."""


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class TorsionCharacter:
    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(_mod1(x) for x in self.exponents))

    @classmethod
    def trivial(cls, n: int) -> "TorsionCharacter":
        return cls((Fraction(0),) * n)

    @classmethod
    def parse(cls, text: str) -> "TorsionCharacter":
        return parse_character(text)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        o = 1
        for x in self.exponents:
            o = lcm(o, x.denominator)
        return o

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def __add__(self, other: "TorsionCharacter") -> "TorsionCharacter":
        # characters multiply, exponents add
        return TorsionCharacter(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __neg__(self):
        return TorsionCharacter(tuple(-a for a in self.exponents))

    def __sub__(self, other):
        return self + (-other)

    def pair(self, v: Sequence[int]) -> Fraction:
        """Exponent of the value at the monomial t^v."""
        return _mod1(sum(a * b for a, b in zip(self.exponents, v)))

    def pullback(self, basis_map: Sequence[Sequence[int]]) -> "TorsionCharacter":
        """Per-generator exponents when self lives on the coordinates of ``basis_map``."""
        ngens = len(basis_map[0]) if basis_map else 0
        return TorsionCharacter(
            tuple(sum(x * row[g] for x, row in zip(self.exponents, basis_map)) for g in range(ngens))
        )

    def __str__(self):
        return format_character(self)


def parse_character(text: str) -> TorsionCharacter:
    """``"1/2,1/3,0"`` → character; entries are reduced mod 1."""
    parts = [p.strip() for p in text.strip().split(",")]
    if parts == [""]:
        return TorsionCharacter(())
    try:
        return TorsionCharacter(tuple(Fraction(p) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad character syntax {text!r}; expected e.g. 1/2,1/3,0") from exc


def format_character(xi: TorsionCharacter) -> str:
    return ",".join(str(x) for x in xi.exponents)


def _canonical_lattice(B: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    d = len(B[0]) if n and B and B[0] is not None and len(B[0]) else 0
    if d == 0:
        return tuple(() for _ in range(n))
    rows = intmat.transpose([list(r) for r in B])  # d × n, one basis vector per row
    h, _ = intmat.hermite_normal_form(rows)
    h = [r for r in h if any(r)]
    if len(h) != d:
        raise ValueError("lattice columns are linearly dependent")
    return tuple(tuple(h[j][i] for j in range(d)) for i in range(n))


@dataclass(frozen=True)
class TranslatedSubtorus:
    translation: TorsionCharacter
    lattice: tuple[tuple[int, ...], ...]  # n × d
    _eq: tuple = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = self.translation.n
        if len(self.lattice) != n:
            raise ValueError("lattice must have one row per coordinate")
        lat = _canonical_lattice(self.lattice, n)
        d = len(lat[0]) if n else 0
        if d:
            dd, _, _ = intmat.smith_normal_form([list(r) for r in lat])
            if any(x != 1 for x in intmat.diagonal(dd)):
                raise ValueError("lattice is not saturated")
        # equations W (rows annihilating the lattice) via a unimodular U with U B = [I; 0]
        if d:
            _, u, _ = intmat.smith_normal_form([list(r) for r in lat])
            w = [u[i] for i in range(d, n)]
            uinv = _inverse_unimodular(u)
        else:
            w = intmat.identity(n)
            u = w
            uinv = w
        # canonical translation: kill the coordinates along the lattice
        y = [sum(Fraction(a) * x for a, x in zip(row, self.translation.exponents)) for row in u]
        y = [Fraction(0)] * d + y[d:]
        chi = TorsionCharacter(tuple(sum(uinv[i][k] * y[k] for k in range(n)) for i in range(n)))
        object.__setattr__(self, "lattice", lat)
        object.__setattr__(self, "translation", chi)
        object.__setattr__(self, "_eq", (tuple(tuple(r) for r in w), tuple(chi.pair(r) for r in w)))

    # constructors ----------------------------------------------------------
    @classmethod
    def full(cls, n: int) -> "TranslatedSubtorus":
        return cls(TorsionCharacter.trivial(n), tuple(tuple(r) for r in intmat.identity(n)))

    @classmethod
    def point(cls, xi: TorsionCharacter) -> "TranslatedSubtorus":
        return cls(xi, tuple(() for _ in range(xi.n)))

    @classmethod
    def through(cls, chi: TorsionCharacter | Sequence, lattice) -> "TranslatedSubtorus":
        if not isinstance(chi, TorsionCharacter):
            chi = TorsionCharacter(tuple(Fraction(x) for x in chi))
        return cls(chi, tuple(tuple(r) for r in lattice))

    # queries ---------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.translation.n

    @property
    def dim(self) -> int:
        return len(self.lattice[0]) if self.n else 0

    def equations(self) -> tuple[tuple[tuple[int, ...], ...], tuple[Fraction, ...]]:
        """(W, c): the subtorus is ``{x : W x ≡ c mod 1}``."""
        return self._eq

    def contains(self, xi: TorsionCharacter) -> bool:
        if xi.n != self.n:
            raise ValueError("arity mismatch")
        w, c = self._eq
        return all(xi.pair(r) == ci for r, ci in zip(w, c))

    def contains_one(self) -> bool:
        return not any(self._eq[1])

    def is_point(self) -> bool:
        return self.dim == 0

    def parametrize(self, s: Sequence) -> TorsionCharacter:
        """χ · exp(2πi B s) for rational s of length dim."""
        return TorsionCharacter(
            tuple(x + sum(b * Fraction(v) for b, v in zip(row, s)) for x, row in zip(self.translation.exponents, self.lattice))
        )

    def describe(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"t{i + 1}" for i in range(self.n)]
        w, c = self._eq
        if not w:
            return "full torus"
        parts = []
        for row, ci in zip(w, c):
            mono = "*".join((nm if a == 1 else f"{nm}^{a}") for nm, a in zip(names, row) if a) or "1"
            rhs = "1" if ci == 0 else ("-1" if ci == Fraction(1, 2) else f"e({ci})")
            parts.append(f"{mono} = {rhs}")
        return "{" + ", ".join(parts) + "}"

    def __str__(self):
        return self.describe()


def _inverse_unimodular(u):
    n = len(u)
    # Gauss-Jordan over Q; entries come back integral
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(u)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for r in out for x in r)
    return [[int(x) for x in r] for r in out]


@dataclass(frozen=True)
class IntersectionResult:
    kind: str  # "empty" | "finite" | "positive"
    points: tuple[TorsionCharacter, ...] = ()
    components: tuple[TranslatedSubtorus, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"


def solve_equations(w: Sequence[Sequence[int]], c: Sequence, n: int, max_points: int = MAX_POINTS) -> list[TranslatedSubtorus]:
    """All components of ``{x ∈ (R/Z)^n : W x ≡ c mod 1}``."""
    rows, rhs = [], []
    for r, ci in zip(w, c):
        if any(r):
            rows.append(list(r))
            rhs.append(Fraction(ci))
        elif _mod1(ci):
            return []  # 1 = nontrivial root of unity
    w, c_eff = rows, rhs
    if not w:
        return [TranslatedSubtorus.full(n)]
    d, u, v = intmat.smith_normal_form(w, ncols=n)
    diag = intmat.diagonal(d)
    r = sum(1 for x in diag if x)
    uc = [_mod1(sum(a * ci for a, ci in zip(row, c_eff))) for row in u]
    if any(uc[i] for i in range(r, len(uc))):
        return []
    count = 1
    for i in range(r):
        count *= diag[i]
    if count > max_points:
        raise TooManyPoints(f"{count} components exceed the guard of {max_points}")
    lattice = tuple(tuple(v[i][j] for j in range(r, n)) for i in range(n))
    out = []

    def rec(i, y):
        if i == r:
            y_full = y + [Fraction(0)] * (n - r)
            x = tuple(sum(v[a][b] * y_full[b] for b in range(n)) for a in range(n))
            out.append(TranslatedSubtorus(TorsionCharacter(x), lattice))
            return
        for k in range(diag[i]):
            rec(i + 1, y + [(uc[i] + k) / diag[i]])

    rec(0, [])
    return out


def subtorus_from_equations(w, c, n: int) -> list[TranslatedSubtorus]:
    return solve_equations(w, c, n)


def intersect(t1: TranslatedSubtorus, t2: TranslatedSubtorus, max_points: int = MAX_POINTS) -> IntersectionResult:
    if t1.n != t2.n:
        raise ValueError("ambient dimensions differ")
    w1, c1 = t1.equations()
    w2, c2 = t2.equations()
    w = [list(r) for r in w1] + [list(r) for r in w2]
    c = list(c1) + list(c2)
    comps = solve_equations(w, c, t1.n, max_points)
    if not comps:
        return IntersectionResult("empty")
    # remove duplicates while keeping order
    uniq = list(dict.fromkeys(comps))
    if uniq[0].dim == 0:
        return IntersectionResult("finite", points=tuple(t.translation for t in uniq))
    return IntersectionResult("positive", components=tuple(uniq))


def shadow(t: TranslatedSubtorus) -> TranslatedSubtorus:
    if t.dim == 0:
        raise DegenerateTorus("the shadow of a point is undefined")
    return TranslatedSubtorus(TorsionCharacter.trivial(t.n), t.lattice)


def _primes_in(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(2, lo + 1), hi + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


def sample_character(t: TranslatedSubtorus, seed, order_bound: int = 64, allow_point: bool = False) -> TorsionCharacter:
    """Pseudo-random torsion point of ``t``: χ · exp(2πi B a/p) with p a random prime."""
    if order_bound < 2:
        raise ValueError("order bound must be at least 2")
    if t.dim == 0:
        if allow_point:
            return t.translation
        raise DegenerateTorus("cannot sample a zero-dimensional torus")
    primes = _primes_in(t.dim, order_bound)
    if not primes:
        raise ValueError(f"no prime in ({t.dim}, {order_bound}]")
    rng = random.Random(repr(seed) if not isinstance(seed, int) else seed)
    p = rng.choice(primes)
    for _ in range(64):
        s = [Fraction(rng.randrange(p), p) for _ in range(t.dim)]
        xi = t.parametrize(s)
        if not xi.is_trivial():
            return xi
    return xi
