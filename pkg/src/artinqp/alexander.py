"""Fox matrices, elementary ideals, depth of characteristic varieties, Alexander polynomials.

Indexing used throughout: for a presentation with g generators,
``char_ideal(pres, k)`` is the ideal of (g−k)×(g−k) minors of the Fox
matrix.  Away from the trivial character its zero set is the locus where
dim H¹(G, C_ξ) ≥ k.  ``fitting(pres, k)`` gives the classical Fitting
numbering, the (g−k+1)×(g−k+1) minors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, lcm
from typing import Sequence

from . import modrank
from .groups import AbelianStructure, FinitePresentation, abelianization, fox_row
from .laurent import (
    QQ, CycloElem, LaurentPoly, PrimeField, Cyclotomic, exact_divide, gcd_list, NonDivisible, evaluate,
)
from .torus import MAX_POINTS, TooManyPoints, TorsionCharacter, TranslatedSubtorus, sample_character

#: refuse minor enumeration beyond this many (row set, column set) pairs
MAX_MINORS = 10**6


class TorsionH1(ValueError):
    """A symbolic Fox matrix was requested but H_1 has torsion."""


class OrderOutOfRange(ValueError):
    pass


class InconsistentCharacter(ValueError):
    """The character does not kill every relator."""


class TooManyMinors(RuntimeError):
    pass


# ----------------------------------------------------------------------------
# Fox matrix


@dataclass(frozen=True)
class FoxMatrix:
    pres: FinitePresentation
    abelian: AbelianStructure
    entries: tuple[tuple[LaurentPoly, ...], ...] | None  # None when only evaluations make sense
    nvars: int

    @property
    def nrows(self) -> int:
        return len(self.pres.relators)

    @property
    def ncols(self) -> int:
        return self.pres.ngens

    def generator_monomials(self) -> list[tuple[int, ...]]:
        fm = self.abelian.free_map
        return [tuple(fm[i][g] for i in range(self.nvars)) for g in range(self.pres.ngens)]

    def row_identity_holds(self) -> bool:
        if self.entries is None:
            raise TorsionH1("row identity needs the symbolic matrix")
        mons = self.generator_monomials()
        for row in self.entries:
            acc = LaurentPoly.zero(self.nvars)
            for entry, e in zip(row, mons):
                acc = acc + entry * (LaurentPoly.monomial(e) - 1)
            if not acc.is_zero():
                return False
        return True

    def evaluate(self, xi) -> list[list[CycloElem]]:
        """J(ξ) with exact cyclotomic entries."""
        exps = character_on_generators(self.pres, xi, self.abelian)
        return evaluate_fox(self.pres, exps)

    def format(self, names=None) -> str:
        if self.entries is None:
            return "<evaluation only: H1 has torsion>"
        return "\n".join("[" + ", ".join(e.format(names) for e in row) + "]" for row in self.entries)


def fox_matrix(pres: FinitePresentation, symbolic: bool = True, project_free: bool = False) -> FoxMatrix:
    """Fox matrix of ``pres`` with generators sent to their images in the free part of H_1.

    With torsion in H_1 a symbolic matrix is only produced when
    ``project_free`` asks for the projection Z[H_1] → Z[H_1/torsion].
    """
    ab = abelianization(pres)
    n = ab.rank
    if not symbolic:
        return FoxMatrix(pres, ab, None, n)
    if ab.torsion and not project_free:
        raise TorsionH1(f"H1 has torsion {list(ab.torsion)}; use character evaluations")
    fm = ab.free_map
    mons = [tuple(fm[i][g] for i in range(n)) for g in range(pres.ngens)]
    images = [LaurentPoly.monomial(e) for e in mons]
    inverses = [LaurentPoly.monomial(tuple(-x for x in e)) for e in mons]
    one, zero = LaurentPoly.one(n), LaurentPoly.zero(n)
    rows = tuple(tuple(fox_row(w, pres.ngens, images, inverses, one, zero)) for w in pres.relators)
    return FoxMatrix(pres, ab, rows, n)


# ----------------------------------------------------------------------------
# characters on generators


def character_on_generators(pres: FinitePresentation, xi, ab: AbelianStructure | None = None) -> tuple[Fraction, ...]:
    """Per-generator exponents of ``xi``.

    ``xi`` may be given on the free coordinates of H_1 (length = rank, only
    when H_1 is torsion-free) or directly on the generators (length = number
    of generators), in which case every relator must evaluate to 1.
    """
    ab = ab or abelianization(pres)
    if isinstance(xi, TorsionCharacter):
        exps = xi.exponents
    else:
        exps = tuple(Fraction(x) % 1 for x in xi)
    g = pres.ngens
    if len(exps) == g:
        for r, w in enumerate(pres.relators):
            s = sum(c * x for c, x in zip(w.exponent_sums(g), exps))
            if s % 1:
                raise InconsistentCharacter(f"relator {r + 1} evaluates to exp(2πi·{s % 1}), not 1")
        return tuple(x % 1 for x in exps)
    if len(exps) == ab.rank and not ab.torsion:
        fm = ab.free_map
        return tuple(sum(x * fm[i][j] for i, x in enumerate(exps)) % 1 for j in range(g))
    raise InconsistentCharacter(
        f"character has {len(exps)} coordinates; expected {g} (generators)"
        + ("" if ab.torsion else f" or {ab.rank} (H1 coordinates)")
    )


def _order(exps) -> int:
    n = 1
    for x in exps:
        n = lcm(n, Fraction(x).denominator)
    return n


def evaluate_fox(pres: FinitePresentation, gen_exps: Sequence[Fraction]) -> list[list[CycloElem]]:
    N = _order(gen_exps)
    images = [CycloElem.root_of_unity(int(x * N), N) for x in gen_exps]
    inverses = [CycloElem.root_of_unity(-int(x * N), N) for x in gen_exps]
    one, zero = CycloElem(N, [1]), CycloElem(N, [0])
    return [fox_row(w, pres.ngens, images, inverses, one, zero) for w in pres.relators]


def rank_cyclotomic(M: list[list[CycloElem]]) -> int:
    """Exact rank by Gaussian elimination over Q(ζ_N)."""
    rows = [list(r) for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if not f.is_zero():
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


# ----------------------------------------------------------------------------
# depth


@dataclass(frozen=True)
class DepthResult:
    character: TorsionCharacter
    depth: int
    rank: int  # rank of J(ξ)


def depth_from_rank(g: int, rank: int, trivial: bool) -> int:
    return g - rank - (0 if trivial else 1)


def depth_at_character(pres: FinitePresentation, xi, ab: AbelianStructure | None = None, method: str = "modular") -> DepthResult:
    """dim H¹(G, C_ξ); at the trivial character this is b_1."""
    ab = ab or abelianization(pres)
    exps = character_on_generators(pres, xi, ab)
    trivial = not any(exps)
    if trivial:
        return DepthResult(TorsionCharacter(exps), ab.rank, pres.ngens - ab.rank)
    if method == "exact":
        rk = rank_cyclotomic(evaluate_fox(pres, exps))
    else:
        rk = int(modrank.exact_ranks(pres, [exps])[0])
    return DepthResult(TorsionCharacter(exps), depth_from_rank(pres.ngens, rk, False), rk)


def depths_at_characters(pres: FinitePresentation, chars: Sequence, ab: AbelianStructure | None = None) -> list[int]:
    """Batched depths; characters grouped by order."""
    ab = ab or abelianization(pres)
    gen = [character_on_generators(pres, xi, ab) for xi in chars]
    rks = modrank.exact_ranks(pres, gen)
    return [ab.rank if not any(e) else depth_from_rank(pres.ngens, int(rk), False) for e, rk in zip(gen, rks)]


def generic_depth(pres: FinitePresentation, torus: TranslatedSubtorus, seed=0, samples: int = 3,
                  order_bound: int = 64, ab: AbelianStructure | None = None) -> int:
    """Minimum depth over ``samples`` pseudo-random torsion points of ``torus``.

    This is an upper bound for the depth at a generic point, and equal to
    it unless every sample lands on a proper closed subset.
    """
    if torus.dim == 0:
        raise ValueError("generic depth needs a positive-dimensional torus")
    pts = [sample_character(torus, (seed, i), order_bound) for i in range(samples)]
    return min(depths_at_characters(pres, pts, ab))


@dataclass(frozen=True)
class GenericDepth:
    depth: int  # depth at a generic point of the torus
    rank: int  # generic rank of J on the torus
    witness: TorsionCharacter  # a grid point where the generic rank is attained
    grid_points: int


def _row_spans(pres: FinitePresentation, gen_dirs: Sequence[Sequence[int]], d: int) -> list[list[int]]:
    """Per relator, the exponent range in each torus parameter of its Fox row."""
    spans = []
    for w in pres.relators:
        pos = [0] * d
        lo, hi = pos[:], pos[:]
        for g, e in w.letters():
            # a letter g contributes the prefix before it, g⁻¹ the prefix after it
            if e < 0:
                pos = [x - y for x, y in zip(pos, gen_dirs[g])]
            lo = [min(a, b) for a, b in zip(lo, pos)]
            hi = [max(a, b) for a, b in zip(hi, pos)]
            if e > 0:
                pos = [x + y for x, y in zip(pos, gen_dirs[g])]
        spans.append([b - a for a, b in zip(lo, hi)])
    return spans


def generic_depth_exact(pres: FinitePresentation, torus: TranslatedSubtorus, ab: AbelianStructure | None = None,
                        max_points: int = MAX_POINTS) -> GenericDepth:
    """Depth at a generic point of ``torus``, certified.

    Restricted to the torus χ·exp(2πi B s), every minor of J is a Laurent
    polynomial in s whose degree in s_j is at most the sum of the largest
    row spans in s_j.  A grid of (span_j + 1) distinct roots of unity per
    parameter therefore detects every nonzero minor, so the largest rank on
    the grid is the generic rank.  One extra root per parameter leaves a
    sub-grid of that size avoiding the trivial character, so the witness can
    always be taken nontrivial.
    """
    ab = ab or abelianization(pres)
    if ab.torsion:
        raise TorsionH1("characters on free H1 coordinates need torsion-free H1")
    if torus.n != ab.rank:
        raise ValueError(f"torus lives in dimension {torus.n}, H1 has rank {ab.rank}")
    d = torus.dim
    if d == 0:
        res = depth_at_character(pres, torus.translation, ab)
        return GenericDepth(res.depth, res.rank, torus.translation, 1)
    fm = ab.free_map
    # s-exponent of generator j: B^T (column j of the free map)
    gen_dirs = [[sum(torus.lattice[i][k] * fm[i][j] for i in range(ab.rank)) for k in range(d)]
                for j in range(pres.ngens)]
    spans = _row_spans(pres, gen_dirs, d)
    m = min(len(spans), pres.ngens)
    bound = [sum(sorted((s[k] for s in spans), reverse=True)[:m]) for k in range(d)]
    total = 1
    for b in bound:
        total *= b + 2
    if total > max_points:
        raise TooManyPoints(f"certifying grid has {total} points (limit {max_points})")
    pts = []
    for idx in product(*(range(b + 2) for b in bound)):
        pts.append(torus.parametrize([Fraction(a, b + 2) for a, b in zip(idx, bound)]))
    gen = [character_on_generators(pres, xi, ab) for xi in pts]
    rks = modrank.exact_ranks(pres, gen)
    best = max(range(len(pts)), key=lambda i: (int(rks[i]), not pts[i].is_trivial(), -i))
    rk = int(rks[best])
    return GenericDepth(depth_from_rank(pres.ngens, rk, False), rk, pts[best], total)


# ----------------------------------------------------------------------------
# elementary ideals


@dataclass(frozen=True)
class ElementaryIdeal:
    order: int
    generators: tuple[LaurentPoly, ...]
    nvars: int

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def is_unit(self) -> bool:
        return any(g.is_monomial() for g in self.generators)

    def vanishes_at(self, xi) -> bool:
        return all(evaluate(g, xi).is_zero() for g in self.generators)

    def format(self, names=None) -> str:
        return "(" + ", ".join(g.format(names) for g in self.generators) + ")"


def _minors_for_rows(rows: list[tuple[LaurentPoly, ...]], ncols: int, d: int, zero) -> dict:
    """All d×d minors using the given d rows, keyed by column subset.

    Laplace expansion along the last row with memoization over column sets.
    """
    level = {(): LaurentPoly.one(zero.nvars, zero.domain)}
    for k in range(d):
        row = rows[k]
        nxt = {}
        for cols, det in level.items():
            if det.is_zero():
                continue
            for j in range(ncols):
                if j in cols or row[j].is_zero():
                    continue
                new = tuple(sorted(cols + (j,)))
                pos = new.index(j)
                sign = -1 if (k + pos) % 2 else 1
                term = row[j] * det
                if sign < 0:
                    term = -term
                nxt[new] = nxt[new] + term if new in nxt else term
        level = nxt
    return level


def elementary_ideal(fm: FoxMatrix, d: int, max_minors: int = MAX_MINORS) -> ElementaryIdeal:
    if fm.entries is None:
        raise TorsionH1("elementary ideals need the symbolic Fox matrix")
    if d < 1 or d > fm.ncols:
        raise OrderOutOfRange(f"minor order {d} outside 1..{fm.ncols}")
    zero = LaurentPoly.zero(fm.nvars)
    if d > fm.nrows:
        return ElementaryIdeal(d, (zero,), fm.nvars)
    total = comb(fm.nrows, d) * comb(fm.ncols, d)
    if total > max_minors:
        raise TooManyMinors(f"{total} minors of order {d} exceed the guard {max_minors}")
    return ElementaryIdeal(d, _minor_generators(fm.pres, d), fm.nvars)


@lru_cache(maxsize=32)
def _minor_generators(pres: FinitePresentation, d: int) -> tuple[LaurentPoly, ...]:
    # the symbolic entries depend only on pres (free part of H_1), so the
    # Alexander polynomial and char_ideal(·, 1) share one computation
    fm = fox_matrix(pres, project_free=True)
    zero = LaurentPoly.zero(fm.nvars)
    seen = {}
    for rset in combinations(range(fm.nrows), d):
        rows = [fm.entries[i] for i in rset]
        for det in _minors_for_rows(rows, fm.ncols, d, zero).values():
            if not det.is_zero():
                nd = det.normalize()
                seen.setdefault(nd, None)
    return tuple(sorted(seen, key=lambda p: (len(p.terms), p.format()))) or (zero,)


def char_ideal(pres_or_fm, k: int, max_minors: int = MAX_MINORS) -> ElementaryIdeal:
    """Ideal whose zero set off the trivial character is {depth ≥ k}."""
    fm = pres_or_fm if isinstance(pres_or_fm, FoxMatrix) else fox_matrix(pres_or_fm)
    d = fm.ncols - k
    if d <= 0:
        return ElementaryIdeal(0, (LaurentPoly.one(fm.nvars),), fm.nvars)
    return elementary_ideal(fm, d, max_minors)


def fitting(pres_or_fm, k: int, max_minors: int = MAX_MINORS) -> ElementaryIdeal:
    """Classical Fitting numbering: minors of order g − k + 1."""
    fm = pres_or_fm if isinstance(pres_or_fm, FoxMatrix) else fox_matrix(pres_or_fm)
    d = fm.ncols - k + 1
    if d <= 0:
        return ElementaryIdeal(0, (LaurentPoly.one(fm.nvars),), fm.nvars)
    return elementary_ideal(fm, d, max_minors)


# ----------------------------------------------------------------------------
# Alexander polynomial


@dataclass(frozen=True)
class AlexanderResult:
    tilde: LaurentPoly  # gcd of the codimension-one minors
    delta: LaurentPoly  # tilde with (t-1) factors stripped when rank is 1
    stripped: int  # multiplicity of (t-1) removed (rank 1 only)
    rank: int
    domain: object

    def is_zero(self) -> bool:
        return self.tilde.is_zero()


def alexander_polynomial(pres: FinitePresentation, domain=QQ, max_minors: int = MAX_MINORS) -> AlexanderResult:
    fm = fox_matrix(pres, project_free=True)
    n = fm.nvars
    if fm.ncols == 1:
        # codimension-one minors of a g=1 matrix are 0×0 determinants
        tilde = LaurentPoly.one(n, domain)
    else:
        ideal = elementary_ideal(fm, fm.ncols - 1, max_minors)
        gens = [g.change_domain(domain) if domain != QQ else g for g in ideal.generators]
        tilde = gcd_list(gens, n, domain)
    delta, stripped = tilde, 0
    if n == 1 and not tilde.is_zero():
        tm1 = LaurentPoly(1, {(1,): 1, (0,): -1}, domain)
        while True:
            try:
                q = exact_divide(delta, tm1)
            except NonDivisible:
                break
            delta, stripped = q, stripped + 1
        delta = delta.normalize()
    return AlexanderResult(tilde.normalize(), delta, stripped, n, domain)
