"""Words, finite presentations, abelianization and Fox calculus."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import intmat


class PresentationError(ValueError):
    """Malformed presentation text or inconsistent presentation data."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column else "") + f": {message}"
        super().__init__(message)
        self.line = line
        self.column = column


def free_reduce(letters: Iterable[tuple[int, int]]) -> "Word":
    """Freely reduce a raw letter sequence of ``(generator, ±1)`` pairs."""
    stack: list[list[int]] = []  # run-length syllables [gen, power]
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be ±1, got {e}")
        if g < 0:
            raise ValueError("generator index must be non-negative")
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return Word(tuple((g, p) for g, p in stack))


@dataclass(frozen=True)
class Word:
    """A freely reduced word, stored as syllables ``(generator, power)``.

    Adjacent syllables always have distinct generators and powers are
    nonzero, so equality is equality of reduced forms.
    """

    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for g, p in self.syllables:
            if p == 0 or g == prev:
                raise ValueError(f"syllables not reduced: {self.syllables}")
            prev = g

    @classmethod
    def from_syllables(cls, syllables: Iterable[tuple[int, int]]) -> "Word":
        return free_reduce(letter for g, p in syllables for letter in [(g, 1 if p > 0 else -1)] * abs(p))

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[int, int]]) -> "Word":
        return free_reduce(letters)

    def letters(self):
        for g, p in self.syllables:
            e = 1 if p > 0 else -1
            for _ in range(abs(p)):
                yield g, e

    def __len__(self):
        return sum(abs(p) for _, p in self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        if not self.syllables:
            return other
        if not other.syllables:
            return self
        return free_reduce(list(self.letters()) + list(other.letters()))

    def inverse(self) -> "Word":
        return Word(tuple((g, -p) for g, p in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        out = Word()
        for _ in range(k):
            out = out * self
        return out

    def exponent_sums(self, ngens: int) -> list[int]:
        v = [0] * ngens
        for g, p in self.syllables:
            v[g] += p
        return v

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)

    def is_cyclically_reduced(self) -> bool:
        s = self.syllables
        return len(s) < 2 or s[0][0] != s[-1][0]


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(gens)) != len(gens):
            raise PresentationError("generator names must be distinct")
        for name in gens:
            if not name or not _NAME.fullmatch(name):
                raise PresentationError(f"bad generator name {name!r}")
        for r in self.relators:
            if not r:
                raise PresentationError("relators must be nonempty after free reduction")
            if r.max_generator() >= len(gens):
                raise PresentationError("relator uses an unknown generator index")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def word(self, text: str) -> Word:
        """Parse a word written with generator names, e.g. ``"a b^-1 a^2"``."""
        return parse_word(text, self.generators)

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def exponent_matrix(self) -> list[list[int]]:
        return [r.exponent_sums(self.ngens) for r in self.relators]

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += ["rel: " + self.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*")
_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_.']*)(?:\^(-?\d+))?$")


def parse_word(text: str, generators: Sequence[str], line: int | None = None) -> Word:
    index = {g: i for i, g in enumerate(generators)}
    letters = []
    col = 1
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise PresentationError(f"bad token {tok!r}", line, text.find(tok) + 1)
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in index:
            raise PresentationError(f"unknown generator {name!r}", line, text.find(tok) + 1)
        e = 1 if power > 0 else -1
        letters.extend([(index[name], e)] * abs(power))
        col += len(tok) + 1
    return free_reduce(letters)


def format_word(w: Word, generators: Sequence[str]) -> str:
    parts = []
    for g, p in w.syllables:
        parts.append(generators[g] if p == 1 else f"{generators[g]}^{p}")
    return " ".join(parts)


def parse_presentation(text: str) -> FinitePresentation:
    """Parse the ``gens:`` / ``rel:`` text format (``#`` starts a comment)."""
    gens = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise PresentationError("expected 'gens:' or 'rel:'", lineno, 1)
        if key == "gens":
            if gens is not None:
                raise PresentationError("duplicate gens line", lineno, 1)
            gens = rest.split()
            for name in gens:
                if not _NAME.fullmatch(name):
                    raise PresentationError(f"bad generator name {name!r}", lineno, raw.find(name) + 1)
            if len(set(gens)) != len(gens):
                raise PresentationError("duplicate generator names", lineno, 1)
        elif key == "rel":
            if gens is None:
                raise PresentationError("rel before gens", lineno, 1)
            w = parse_word(rest, gens, lineno)
            if not w:
                raise PresentationError("relator is trivial after free reduction", lineno, 1)
            rels.append(w)
        else:
            raise PresentationError(f"unknown key {key!r}", lineno, 1)
    if gens is None:
        raise PresentationError("missing gens line")
    return FinitePresentation(tuple(gens), tuple(rels))


@dataclass(frozen=True)
class AbelianStructure:
    """H_1 = Z^rank ⊕ ⊕ Z/d_i.

    ``basis_map`` has one row per coordinate (free coordinates first, then
    one per torsion divisor) and one column per generator.  The free rows are
    in Hermite normal form, which for Artin groups gives one coordinate per
    component of the odd-labelled subgraph.
    """

    rank: int
    torsion: tuple[int, ...]
    basis_map: tuple[tuple[int, ...], ...]

    @property
    def free_map(self) -> list[list[int]]:
        return [list(r) for r in self.basis_map[: self.rank]]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    def image(self, w: Word) -> tuple[list[int], list[int]]:
        """Coordinates of ``w`` in H_1: (free part, torsion residues)."""
        ngens = len(self.basis_map[0]) if self.basis_map else 0
        v = w.exponent_sums(ngens) if ngens else []
        coords = [sum(a * b for a, b in zip(row, v)) for row in self.basis_map]
        free = coords[: self.rank]
        tors = [c % d for c, d in zip(coords[self.rank:], self.torsion)]
        return free, tors


def abelianization(pres: FinitePresentation) -> AbelianStructure:
    g = pres.ngens
    mat = pres.exponent_matrix()
    d, _, v = intmat.smith_normal_form(mat, ncols=g)
    diag = intmat.diagonal(d) + [0] * (g - min(len(mat), g))
    diag = diag[:g]
    # coordinate i of generator j is v[j][i]
    tors_idx = [i for i, x in enumerate(diag) if x >= 2]
    free_idx = [i for i, x in enumerate(diag) if x == 0]
    free_rows = [[v[j][i] for j in range(g)] for i in free_idx]
    if free_rows:
        free_rows, _ = intmat.hermite_normal_form(free_rows)
    tors_rows = [[v[j][i] % diag[i] for j in range(g)] for i in tors_idx]
    return AbelianStructure(
        rank=len(free_idx),
        torsion=tuple(diag[i] for i in tors_idx),
        basis_map=tuple(tuple(r) for r in free_rows + tors_rows),
    )


def fox_row(word: Word, ngens: int, images, inverses, one, zero):
    """All Fox derivatives of ``word`` evaluated under ``images``.

    ``images[g]`` / ``inverses[g]`` are the ring elements assigned to the
    generator and its inverse; the ring only needs ``+``, ``-`` and ``*``.
    Uses ∂(uv) = ∂u + ψ(u)·∂v with ∂g/∂g = 1 and ∂g⁻¹/∂g = −ψ(g)⁻¹.
    """
    out = [zero] * ngens
    prefix = one
    for g, p in word.syllables:
        if p > 0:
            x = images[g]
            for _ in range(p):
                out[g] = out[g] + prefix
                prefix = prefix * x
        else:
            x = inverses[g]
            for _ in range(-p):
                prefix = prefix * x
                out[g] = out[g] - prefix
    return out


def fox_derivative_image(word: Word, gen: int, images, inverses, one, zero):
    return fox_row(word, max(gen + 1, word.max_generator() + 1), images, inverses, one, zero)[gen]


def evaluate_word(word: Word, images, inverses, one):
    acc = one
    for g, p in word.syllables:
        x = images[g] if p > 0 else inverses[g]
        for _ in range(abs(p)):
            acc = acc * x
    return acc
