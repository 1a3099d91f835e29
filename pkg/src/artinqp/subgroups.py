"""Presentations of finite-index kernels by Reidemeister–Schreier rewriting."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .groups import FinitePresentation, PresentationError, Word, abelianization, free_reduce

MAX_INDEX = 10_000


class RelatorSurvives(ValueError):
    """A relator of the presentation has non-trivial image."""


class IndexTooLarge(ValueError):
    pass


class TietzeBroke(RuntimeError):
    """A simplification pass changed the abelianization (a bug, never expected)."""


# ----------------------------------------------------------------------------
# finite targets: permutations of {0..n-1} as tuples, or Z/m as ints


@dataclass(frozen=True)
class FiniteQuotientMap:
    """A homomorphism from a finitely presented group onto a finite group.

    ``kind`` is "perm" (elements are tuples, composed left to right: the
    product p*q applies p first) or "cyclic" (elements are ints mod
    ``modulus``).  ``images[i]`` is the image of generator i.
    """

    kind: str
    modulus: int  # degree for permutations
    images: tuple

    def __post_init__(self):
        if self.kind not in ("perm", "cyclic"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.modulus < 1:
            raise ValueError("degree / modulus must be positive")
        imgs = []
        for x in self.images:
            if self.kind == "cyclic":
                imgs.append(int(x) % self.modulus)
            else:
                x = tuple(int(i) for i in x)
                if sorted(x) != list(range(self.modulus)):
                    raise ValueError(f"not a permutation of degree {self.modulus}: {x}")
                imgs.append(x)
        object.__setattr__(self, "images", tuple(imgs))

    @classmethod
    def cyclic(cls, modulus: int, images: Sequence[int]) -> "FiniteQuotientMap":
        return cls("cyclic", modulus, tuple(images))

    @classmethod
    def permutations(cls, degree: int, cycles: Sequence[Sequence[Sequence[int]]]) -> "FiniteQuotientMap":
        """Images as lists of 1-based cycles, e.g. ``[[(1, 2)], [], [(2, 3)]]``."""
        return cls("perm", degree, tuple(perm_from_cycles(c, degree) for c in cycles))

    @property
    def identity(self):
        return 0 if self.kind == "cyclic" else tuple(range(self.modulus))

    def mul(self, a, b):
        if self.kind == "cyclic":
            return (a + b) % self.modulus
        return tuple(b[i] for i in a)

    def inv(self, a):
        if self.kind == "cyclic":
            return (-a) % self.modulus
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def image(self, w: Word):
        acc = self.identity
        for g, p in w.syllables:
            x = self.images[g] if p > 0 else self.inv(self.images[g])
            for _ in range(abs(p)):
                acc = self.mul(acc, x)
        return acc

    def format_element(self, a) -> str:
        if self.kind == "cyclic":
            return f"{a} mod {self.modulus}"
        return format_cycles(a)

    def to_text(self, generators: Sequence[str]) -> str:
        return "".join(f"{name} -> {self.format_element(x)}\n" for name, x in zip(generators, self.images))


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        pts = [int(c) - 1 for c in cyc]
        if len(set(pts)) != len(pts) or any(not 0 <= c < degree for c in pts):
            raise ValueError(f"bad cycle {cyc} for degree {degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def format_cycles(perm: Sequence[int]) -> str:
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(str(i + 1))
            i = perm[i]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


_CYCLE = re.compile(r"\(([^()]*)\)")
_MOD = re.compile(r"(-?\d+)\s+mod\s+(\d+)$")


def parse_quotient_map(text: str, generators: Sequence[str],
                       aliases: Mapping[str, str] | None = None) -> FiniteQuotientMap:
    """Parse lines ``<gen> -> (1 2)(3 4)`` or ``<gen> -> k mod m``.

    ``()`` and ``id`` denote the identity permutation.  ``aliases`` maps
    alternative names (e.g. graph vertex names) to generator names.
    """
    aliases = dict(aliases or {})
    entries: dict[str, tuple] = {}
    kind = None
    modulus = None
    degree = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rhs = line.partition("->")
        name, rhs = name.strip(), rhs.strip()
        if not sep or not name:
            raise PresentationError("expected '<gen> -> <image>'", lineno, 1)
        name = aliases.get(name, name)
        if name not in generators:
            raise PresentationError(f"unknown generator {name!r}", lineno, 1)
        if name in entries:
            raise PresentationError(f"generator {name!r} mapped twice", lineno, 1)
        m = _MOD.match(rhs)
        if m:
            this_kind = "cyclic"
            k, mm = int(m.group(1)), int(m.group(2))
            if mm < 1:
                raise PresentationError("modulus must be positive", lineno, raw.find(rhs) + 1)
            if modulus is not None and mm != modulus:
                raise PresentationError("all images must use the same modulus", lineno, raw.find(rhs) + 1)
            modulus = mm
            entries[name] = ("cyclic", k)
        else:
            this_kind = "perm"
            if rhs == "id":
                cycles = []
            else:
                stripped = _CYCLE.sub("", rhs).strip()
                if stripped or not rhs.startswith("("):
                    raise PresentationError(f"bad image {rhs!r}", lineno, raw.find(rhs) + 1)
                cycles = []
                for body in _CYCLE.findall(rhs):
                    try:
                        pts = [int(x) for x in body.replace(",", " ").split()]
                    except ValueError:
                        raise PresentationError(f"bad cycle ({body})", lineno, raw.find(body) + 1) from None
                    if any(x < 1 for x in pts):
                        raise PresentationError("points are numbered from 1", lineno, raw.find(body) + 1)
                    if pts:
                        cycles.append(pts)
                        degree = max(degree, max(pts))
            entries[name] = ("perm", cycles)
        if kind is not None and this_kind != kind:
            raise PresentationError("cannot mix permutation and cyclic images", lineno, 1)
        kind = this_kind
    missing = [g for g in generators if g not in entries]
    if missing:
        raise PresentationError(f"no image for generator(s) {', '.join(missing)}")
    if kind == "cyclic":
        return FiniteQuotientMap.cyclic(modulus, [entries[g][1] for g in generators])
    degree = max(degree, 1)
    return FiniteQuotientMap.permutations(degree, [entries[g][1] for g in generators])


# ----------------------------------------------------------------------------
# coset table and rewriting


@dataclass
class CosetData:
    elements: list  # coset i <-> image element elements[i]
    transversal: list[Word]  # shortlex-minimal representative of each coset
    action: list[list[int]]  # action[i][g] = coset of (coset i)·g
    tree: set = field(default_factory=set)  # (coset, gen) pairs that are transversal edges


def check_relators(pres: FinitePresentation, phi: FiniteQuotientMap) -> None:
    if len(phi.images) != pres.ngens:
        raise ValueError(f"map has {len(phi.images)} images for {pres.ngens} generators")
    for i, r in enumerate(pres.relators):
        if phi.image(r) != phi.identity:
            raise RelatorSurvives(f"relator {i + 1} ({pres.format_word(r)}) maps to {phi.format_element(phi.image(r))}")


def coset_data(pres: FinitePresentation, phi: FiniteQuotientMap, max_index: int = MAX_INDEX,
               point: int | None = None) -> CosetData:
    """Breadth-first coset enumeration, giving a shortlex Schreier transversal.

    With ``point=None`` the cosets are the elements of the image (the
    subgroup is ker φ); with a 0-based ``point`` of a permutation target they
    are the points of its orbit (the subgroup is φ⁻¹ of the stabilizer).
    Letters are ordered g1 < g1⁻¹ < g2 < g2⁻¹ < …, and each new coset is
    reached by appending one letter to an earlier representative.
    """
    if point is None:
        start = phi.identity
        act = phi.mul
    else:
        if phi.kind != "perm" or not 0 <= point < phi.modulus:
            raise ValueError("a stabilizer needs a permutation target and a valid point")
        start = point
        act = lambda x, s: s[x]  # noqa: E731
    index = {start: 0}
    elements = [start]
    transversal = [Word()]
    tree = set()
    invs = [phi.inv(x) for x in phi.images]
    head = 0
    while head < len(elements):
        h = elements[head]
        for g in range(pres.ngens):
            for sign, x in ((1, phi.images[g]), (-1, invs[g])):
                y = act(h, x)
                if y not in index:
                    if len(elements) >= max_index:
                        raise IndexTooLarge(f"more than {max_index} cosets")
                    index[y] = len(elements)
                    elements.append(y)
                    transversal.append(transversal[head] * Word(((g, sign),)))
                    tree.add((head, g) if sign > 0 else (index[y], g))
        head += 1
    action = [[index[act(h, phi.images[g])] for g in range(pres.ngens)] for h in elements]
    return CosetData(elements, transversal, action, tree)


def schreier_generators(pres: FinitePresentation, cd: CosetData) -> dict[tuple[int, int], int]:
    """Index of the Schreier generator t_c·g·t_{cg}⁻¹ for each non-tree pair (c, g)."""
    out = {}
    for c in range(len(cd.elements)):
        for g in range(pres.ngens):
            if (c, g) not in cd.tree:
                out[(c, g)] = len(out)
    return out


def rewrite(word: Word, start: int, cd: CosetData, sgens: Mapping[tuple[int, int], int]) -> tuple[Word, int]:
    """Rewrite t_start · word in Schreier generators; returns (word, end coset)."""
    c = start
    letters = []
    inv_action = None
    for g, e in word.letters():
        if e > 0:
            s = sgens.get((c, g))
            if s is not None:
                letters.append((s, 1))
            c = cd.action[c][g]
        else:
            if inv_action is None:
                inv_action = _inverse_action(cd)
            c = inv_action[c][g]
            s = sgens.get((c, g))
            if s is not None:
                letters.append((s, -1))
    return free_reduce(letters), c


def _inverse_action(cd: CosetData) -> list[list[int]]:
    n = len(cd.elements)
    ng = len(cd.action[0]) if cd.action else 0
    inv = [[0] * ng for _ in range(n)]
    for c in range(n):
        for g in range(ng):
            inv[cd.action[c][g]][g] = c
    return inv


SUBGROUPS = ("kernel", "stabilizer")


def kernel_presentation(pres: FinitePresentation, phi: FiniteQuotientMap, simplify: bool = True,
                        max_index: int = MAX_INDEX, subgroup: str = "kernel") -> FinitePresentation:
    """Presentation of ker φ, or of φ⁻¹(Stab(1)) with ``subgroup="stabilizer"``.

    Schreier generators are named ``<gen>_<coset>``; relators are the
    rewritten conjugates t_c·r·t_c⁻¹ over all cosets c.
    """
    if subgroup not in SUBGROUPS:
        raise ValueError(f"subgroup must be one of {SUBGROUPS}")
    check_relators(pres, phi)
    cd = coset_data(pres, phi, max_index, None if subgroup == "kernel" else 0)
    sgens = schreier_generators(pres, cd)
    names = [""] * len(sgens)
    for (c, g), i in sgens.items():
        names[i] = f"{pres.generators[g]}_{c}"
    rels = []
    for c in range(len(cd.elements)):
        for r in pres.relators:
            w, end = rewrite(r, c, cd, sgens)
            assert end == c, "relator does not return to its coset"
            w = cyclic_reduce(w)
            if w:
                rels.append(w)
    out = FinitePresentation(tuple(names), tuple(rels))
    return tietze_simplify(out) if simplify else out


# ----------------------------------------------------------------------------
# Tietze moves


def cyclic_reduce(w: Word) -> Word:
    s = list(w.syllables)
    while len(s) >= 2 and s[0][0] == s[-1][0]:
        g, p = s[0][0], s[0][1] + s[-1][1]
        s = ([(g, p)] if p else []) + s[1:-1]
    return Word(tuple(s))


def _substitute(w: Word, g: int, replacement: Word) -> Word:
    letters = []
    rinv = replacement.inverse()
    for h, e in w.letters():
        if h == g:
            letters.extend((replacement if e > 0 else rinv).letters())
        else:
            letters.append((h, e))
    return free_reduce(letters)


def _find_elimination(rels: Sequence[Word]):
    """First relator of length 1 or 2 defining a generator: (relator index, gen, replacement)."""
    for i, r in enumerate(rels):
        if len(r) == 1:
            (g, _), = r.syllables
            return i, g, Word()
    for i, r in enumerate(rels):
        if len(r) == 2 and len(r.syllables) == 2:
            (a, ea), (b, eb) = r.syllables
            # a^ea b^eb = 1 with a != b; solve for the later generator
            if b > a:
                # b^eb = a^-ea  =>  b = a^(-ea*eb)
                return i, b, Word(((a, -ea * eb),))
            return i, a, Word(((b, -ea * eb),))
    return None


def tietze_simplify(pres: FinitePresentation, check: bool = True) -> FinitePresentation:
    """Eliminate generators defined by relators of length 1 or 2, then tidy.

    Passes run in a fixed order, so the output is deterministic.  Relators
    are cyclically reduced, and duplicates (also up to inversion and
    cyclic permutation) are dropped.  The abelianization is compared
    before and after.
    """
    gens = list(pres.generators)
    rels = [cyclic_reduce(r) for r in pres.relators]
    alive = list(range(len(gens)))
    while True:
        rels = _dedupe([r for r in rels if r])
        found = _find_elimination(rels)
        if found is None:
            break
        i, g, rep = found
        rels = [_substitute(r, g, rep) for k, r in enumerate(rels) if k != i]
        rels = [cyclic_reduce(r) for r in rels]
        alive.remove(g)
    remap = {g: k for k, g in enumerate(alive)}
    new_rels = tuple(Word(tuple((remap[g], p) for g, p in r.syllables)) for r in rels)
    out = FinitePresentation(tuple(gens[g] for g in alive), new_rels)
    if check:
        before, after = abelianization(pres), abelianization(out)
        if (before.rank, before.torsion) != (after.rank, after.torsion):
            raise TietzeBroke("abelianization changed during simplification")
    return out


def _canonical(w: Word) -> tuple:
    """Least rotation of w and of w⁻¹ (as letter tuples), for duplicate detection."""
    best = None
    for v in (w, w.inverse()):
        letters = tuple(v.letters())
        for k in range(len(letters)):
            rot = letters[k:] + letters[:k]
            if best is None or rot < best:
                best = rot
    return best or ()


def _dedupe(rels: Sequence[Word]) -> list[Word]:
    seen = set()
    out = []
    for r in rels:
        key = _canonical(r)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out
