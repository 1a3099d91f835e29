"""The quasi-projectivity test battery.

Every test returns an outcome (violated, passed or inconclusive) with a
witness that can be replayed.  NOT_QP verdicts come only from violated
tests, QP verdicts only from realization facts (right-angled complete
multipartite graphs, spherical/affine/free Coxeter components).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import __version__
from .alexander import (
    MAX_MINORS, TooManyMinors, alexander_polynomial, char_ideal, depth_at_character, generic_depth_exact,
)
from .artin import (
    CombinatorialBlowup, LabeledGraph, Unstructured, artin_presentation, char1_ideal_formula, classify_right_angled,
    commuting_join_factors, coxeter_type, enumerate_components, format_graph, generator_name, _contained,
)
from .groups import AbelianStructure, FinitePresentation, abelianization
from .laurent import LaurentPoly, cyclotomic_monomial_factors, cyclotomic_part, single_essential_variable
from .torus import (
    MAX_POINTS, TooManyPoints, TorsionCharacter, TranslatedSubtorus, format_character, intersect, shadow,
)

SCHEMA = "artinqp-report/1"
VIOLATED, PASSED, INCONCLUSIVE = "violated", "passed", "inconclusive"
QP, NOT_QP, UNKNOWN = "QP", "NOT_QP", "UNKNOWN"
DEFAULT_SEED = 20240521


class ContradictoryEvidence(RuntimeError):
    """A realization fact and a violated obstruction both fired (a bug)."""


@dataclass(frozen=True)
class Outcome:
    id: str
    outcome: str
    witness: dict | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"id": self.id, "outcome": self.outcome, "witness": self.witness, "detail": self.detail}


@dataclass(frozen=True)
class BatteryOptions:
    seed: int = DEFAULT_SEED
    order_bound: int = 64
    max_minors: int = MAX_MINORS
    max_points: int = MAX_POINTS
    max_level: int = 2  # highest Char_k whose components are enumerated
    analytic: bool = True  # run the Alexander and characteristic-variety tests
    shortcuts: bool = True  # run the graph theorems (graph inputs only)


@dataclass
class ObstructionReport:
    verdict: str
    tests: list[Outcome]
    provenance: dict
    notes: list[str] = field(default_factory=list)

    def violated(self) -> list[Outcome]:
        return [t for t in self.tests if t.outcome == VIOLATED]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "verdict": self.verdict,
            "tests": [t.to_json() for t in self.tests],
            "provenance": self.provenance,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        for t in self.tests:
            lines.append(f"  [{t.outcome:>12}] {t.id}" + (f": {t.detail}" if t.detail else ""))
            if t.witness and t.outcome == VIOLATED:
                for k in sorted(t.witness):
                    lines.append(f"      {k}: {_short(t.witness[k])}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        p = self.provenance
        lines.append(f"  input sha256 {p['input_sha256'][:16]}…, seed {p['seed']}, order bound {p['order_bound']}")
        return "\n".join(lines) + "\n"


def _short(x) -> str:
    s = json.dumps(x, ensure_ascii=False, sort_keys=True) if not isinstance(x, str) else x
    return s if len(s) <= 160 else s[:157] + "..."


# ----------------------------------------------------------------------------
# components of characteristic varieties


@dataclass(frozen=True)
class CharComponent:
    torus: TranslatedSubtorus
    level: int  # found as a component of Char_level
    depth: int  # exact generic depth (so also a component of Char_depth)
    witness: TorsionCharacter  # grid point where the generic depth is attained


@dataclass
class CharCensus:
    """Components of Char_level found from factored minors.

    ``complete`` means every component of the factored zero set was
    certified, so the list is exactly the set of components of Char_level
    (up to whether the trivial character is listed).
    """

    level: int
    components: list[CharComponent]
    complete: bool
    source: str
    note: str = ""

    def positive(self) -> list[CharComponent]:
        return [c for c in self.components if c.torus.dim > 0]

    def has_component(self, t: TranslatedSubtorus) -> bool:
        return any(c.torus == t for c in self.components)


def char_census(pres: FinitePresentation, level: int, generators=None, ab: AbelianStructure | None = None,
                opts: BatteryOptions = BatteryOptions(), source: str = "minors") -> CharCensus | None:
    """Enumerate Char_level from generators that factor into Φ_m(t^a) pieces.

    Without ``generators`` the (g−level)-minors of the Fox matrix are used;
    those that do not factor are skipped, which can only enlarge the zero
    set.  Each resulting torus is then certified exactly on Char_level.
    Returns None when nothing usable is available.
    """
    ab = ab or abelianization(pres)
    if ab.torsion or ab.rank == 0:
        return None
    n = ab.rank
    skipped = 0
    if generators is None:
        try:
            ideal = char_ideal(pres, level, opts.max_minors)
        except TooManyMinors:
            return None
        generators = []
        for p in ideal.generators:
            if p.is_zero():
                continue
            if cyclotomic_monomial_factors(p) is None:
                skipped += 1
                continue
            generators.append(p)
        if skipped and not generators:
            return None
    try:
        tori = enumerate_components(generators, n)
    except (Unstructured, CombinatorialBlowup):
        return None
    comps = []
    complete = True
    for t in tori:
        try:
            gd = generic_depth_exact(pres, t, ab, opts.max_points)
        except TooManyPoints:
            complete = False
            continue
        if gd.depth >= level:
            comps.append(CharComponent(t, level, gd.depth, gd.witness))
        else:
            complete = False
    if ab.rank >= level and not any(c.torus.contains_one() for c in comps):
        one = TranslatedSubtorus.point(TorsionCharacter.trivial(n))
        comps.append(CharComponent(one, level, ab.rank, one.translation))
    note = f"{skipped} minors did not factor and were skipped" if skipped else ""
    return CharCensus(level, comps, complete, source, note)


def _torus_json(t: TranslatedSubtorus) -> dict:
    return {
        "equations": t.describe(),
        "translation": format_character(t.translation),
        "lattice": [list(r) for r in t.lattice],
        "dim": t.dim,
    }


# ----------------------------------------------------------------------------
# Alexander polynomial tests


def test_alex_A1(pres: FinitePresentation, alex=None, ab: AbelianStructure | None = None) -> Outcome:
    """Single essential variable of Δ when b1 ≠ 2."""
    ab = ab or abelianization(pres)
    if ab.rank == 2:
        return Outcome("alexander.A1", INCONCLUSIVE, None, "does not apply when b1 = 2")
    alex = alex or alexander_polynomial(pres)
    if alex.delta.is_zero():
        return Outcome("alexander.A1", PASSED, None, "Δ = 0")
    form = single_essential_variable(alex.delta)
    if form is not None:
        return Outcome("alexander.A1", PASSED, {"direction": list(form.direction)}, "single essential variable")
    return Outcome("alexander.A1", VIOLATED, {"b1": ab.rank, "delta": alex.delta.format()},
                   "Δ has no single essential variable (support not on a line)")


def test_alex_A2(pres: FinitePresentation, alex=None, ab: AbelianStructure | None = None) -> Outcome:
    """The essential profile of Δ must be a product of cyclotomic polynomials.

    For b1 = 1 this is the requirement that the roots of Δ, which are the
    nontrivial points of Char_1, are torsion.
    """
    ab = ab or abelianization(pres)
    if ab.rank == 0:
        return Outcome("alexander.A2", INCONCLUSIVE, None, "b1 = 0")
    alex = alex or alexander_polynomial(pres)
    if alex.delta.is_zero():
        return Outcome("alexander.A2", PASSED, None, "Δ = 0")
    form = single_essential_variable(alex.delta)
    if form is None:
        return Outcome("alexander.A2", INCONCLUSIVE, None, "Δ has several essential variables")
    cyc, rest = cyclotomic_part(form.profile)
    if rest.degree_span() == 0:
        return Outcome("alexander.A2", PASSED, {"profile": form.profile.format(["u"])}, "profile is cyclotomic")
    return Outcome("alexander.A2", VIOLATED,
                   {"delta": alex.delta.format(), "profile": form.profile.format(["u"]),
                    "non_cyclotomic_part": rest.format(["u"]), "direction": list(form.direction)},
                   "the essential profile has a non-cyclotomic factor")


# ----------------------------------------------------------------------------
# characteristic variety tests


def test_intersections(pres: FinitePresentation, censuses: Sequence[CharCensus], ab: AbelianStructure | None = None,
                       max_points: int = MAX_POINTS) -> Outcome:
    """Distinct positive-dimensional components meet in torsion points of Char_{k+ℓ}.

    Two components of the same Char_k with a positive-dimensional
    intersection violate the rule outright; a finite intersection point
    must have depth at least k + ℓ.
    """
    ab = ab or abelianization(pres)
    items = [(cs.level, c) for cs in censuses for c in cs.positive()]
    if len(items) < 2:
        return Outcome("charvar.intersections", INCONCLUSIVE, None, "fewer than two positive-dimensional components")
    checked = 0
    cache: dict = {}
    for (k, a), (l, b) in combinations(items, 2):
        if a.torus == b.torus or _contained(a.torus, b.torus) or _contained(b.torus, a.torus):
            continue
        res = intersect(a.torus, b.torus, max_points)
        if res.kind == "empty":
            continue
        if res.kind == "positive":
            if k == l:
                return Outcome("charvar.intersections", VIOLATED, {
                    "level": k, "component_1": _torus_json(a.torus), "component_2": _torus_json(b.torus),
                    "intersection": [_torus_json(t) for t in res.components],
                }, f"two components of Char_{k} meet in positive dimension")
            continue
        for xi in res.points:
            checked += 1
            if xi not in cache:
                cache[xi] = depth_at_character(pres, xi, ab).depth
            if cache[xi] < k + l:
                return Outcome("charvar.intersections", VIOLATED, {
                    "levels": [k, l], "component_1": _torus_json(a.torus), "component_2": _torus_json(b.torus),
                    "point": format_character(xi), "depth": cache[xi], "required": k + l,
                }, f"intersection point has depth {cache[xi]} < {k + l}")
    return Outcome("charvar.intersections", PASSED, {"points_checked": checked}, "")


def test_level_consistency(censuses: Sequence[CharCensus]) -> Outcome:
    """A positive-dimensional component of Char_ℓ is a component of every Char_j, j ≤ ℓ."""
    by_level = {cs.level: cs for cs in censuses}
    base = by_level.get(1)
    if base is None or not base.complete:
        return Outcome("charvar.level_consistency", INCONCLUSIVE, None, "no complete list of Char_1 components")
    for cs in censuses:
        if cs.level <= 1:
            continue
        for c in cs.positive():
            if not base.has_component(c.torus):
                bigger = [d.torus for d in base.components if _contained(c.torus, d.torus)]
                return Outcome("charvar.level_consistency", VIOLATED, {
                    "level": cs.level, "component": _torus_json(c.torus),
                    "contained_in": [_torus_json(t) for t in bigger],
                }, f"a component of Char_{cs.level} is not a component of Char_1")
    return Outcome("charvar.level_consistency", PASSED, None, "")


def test_dimension_rules(pres: FinitePresentation, censuses: Sequence[CharCensus], ab: AbelianStructure | None = None,
                         max_points: int = MAX_POINTS) -> Outcome:
    """Dimension and shadow constraints on positive-dimensional components.

    For a component Σ of dimension d with exact generic depth k: if 1 ∈ Σ
    then k ≤ d − 1; if 1 ∉ Σ then k ≥ d; shadow rules for d > 2, d = 2 and
    d = 1 are checked against the complete component lists when those exist.
    """
    ab = ab or abelianization(pres)
    by_level = {cs.level: cs for cs in censuses}
    inconclusive = []
    seen = set()
    comps = [c for cs in censuses for c in cs.positive()]
    if not comps:
        return Outcome("charvar.dimension_rules", INCONCLUSIVE, None, "no positive-dimensional components")
    for c in comps:
        if c.torus in seen:
            continue
        seen.add(c.torus)
        d, k = c.torus.dim, c.depth
        tj = _torus_json(c.torus)
        if c.torus.contains_one():
            if k > d - 1:
                return Outcome("charvar.dimension_rules", VIOLATED, {
                    "rule": "through_one", "component": tj, "generic_depth": k, "dim": d,
                    "generic_point": format_character(c.witness),
                }, f"component through 1 of dimension {d} lies in Char_{k}, need depth ≤ {d - 1}")
            continue
        if k < d:
            return Outcome("charvar.dimension_rules", VIOLATED, {
                "rule": "translated_depth", "component": tj, "generic_depth": k, "dim": d,
                "generic_point": format_character(c.witness),
            }, f"translated component of dimension {d} is not inside Char_{d}")
        sh = shadow(c.torus)
        try:
            sh_depth = generic_depth_exact(pres, sh, ab, max_points).depth
        except TooManyPoints:
            inconclusive.append("shadow depth grid too large")
            continue
        c1 = by_level.get(1)
        c2 = by_level.get(2)
        in1 = c1.has_component(sh) if c1 is not None and c1.complete else None
        if d > 2:
            if sh_depth < 1:
                return Outcome("charvar.dimension_rules", VIOLATED, {
                    "rule": "shadow_in_char1", "component": tj, "shadow": _torus_json(sh), "shadow_depth": sh_depth,
                }, "shadow of a translated component of dimension > 2 is not in Char_1")
            if in1 is False:
                return Outcome("charvar.dimension_rules", VIOLATED, {
                    "rule": "shadow_component", "component": tj, "shadow": _torus_json(sh),
                }, "shadow is not a component of Char_1")
            if in1 is None:
                inconclusive.append("shadow maximality not certified")
        elif d == 2:
            in2 = c2.has_component(sh) if c2 is not None and c2.complete else None
            if sh_depth < 1:
                in1 = False
            if sh_depth < 2:
                in2 = False
            if in1 is not None and in2 is not None:
                if in1 != in2:
                    return Outcome("charvar.dimension_rules", VIOLATED, {
                        "rule": "shadow_char1_iff_char2", "component": tj, "shadow": _torus_json(sh),
                        "component_of_char1": in1, "component_of_char2": in2,
                    }, "shadow is a component of exactly one of Char_1, Char_2")
            else:
                inconclusive.append("shadow maximality not certified")
        else:
            if sh_depth >= 1:
                if in1 is True:
                    return Outcome("charvar.dimension_rules", VIOLATED, {
                        "rule": "shadow_not_component", "component": tj, "shadow": _torus_json(sh),
                    }, "shadow of a 1-dimensional translated component is a component of Char_1")
                if in1 is None:
                    inconclusive.append("shadow maximality not certified")
    if inconclusive:
        return Outcome("charvar.dimension_rules", INCONCLUSIVE, None, "; ".join(sorted(set(inconclusive))))
    return Outcome("charvar.dimension_rules", PASSED, None, "")


# ----------------------------------------------------------------------------
# graph theorems


def _realization_tests(g: LabeledGraph) -> list[Outcome]:
    out = []
    if g.is_right_angled():
        ra = classify_right_angled(g)
        if ra.verdict == QP:
            out.append(Outcome("realization.right_angled", PASSED, {"parts": [list(p) for p in ra.parts]},
                               "complete multipartite: a product of free groups"))
    types = coxeter_type(g)
    if types and all(kind in ("spherical", "affine", "free") for _, kind, _ in types):
        names = [name for _, _, name in types]
        out.append(Outcome("realization.coxeter", PASSED, {"types": names},
                           "every Coxeter component is spherical, affine or free"))
    return out


def _vertex_names(g: LabeledGraph, vs) -> list[str]:
    return [g.vertices[v] for v in vs]


def _graph_obstructions(g: LabeledGraph) -> list[Outcome]:
    out = []
    n = g.n
    if g.is_right_angled():
        ra = classify_right_angled(g)
        if ra.verdict == NOT_QP:
            out.append(Outcome("graph.right_angled", VIOLATED, {"induced_path_in_complement": _vertex_names(g, ra.witness)},
                               "right-angled but not complete multipartite"))
        return out
    if not g.is_even():
        return out
    comps = g.components()
    if len(comps) > 1:
        if g.edges:
            out.append(Outcome("graph.even_free_product", VIOLATED,
                               {"components": [_vertex_names(g, c) for c in comps]},
                               "free product of even Artin groups that is not free"))
        return out
    # connected and strictly even from here on; a commuting join is a direct
    # product, where that argument breaks (e.g. A(I2(4)) x F2 is realized)
    if n >= 3 and not g.is_complete() and len(commuting_join_factors(g)) == 1:
        u, v = next((a, b) for a in range(n) for b in range(a + 1, n) if g.label(a, b) is None)
        w = sorted(g.neighbors(u))
        out.append(Outcome("graph.strictly_even_noncomplete", VIOLATED,
                           {"separating_set": _vertex_names(g, w), "separated": _vertex_names(g, [u, v])},
                           "strictly even and not complete"))
    if n >= 4 and g.is_cycle():
        out.append(Outcome("graph.strictly_even_cycle", VIOLATED, {"length": n}, "strictly even cycle"))
    if n >= 3 and g.is_tree():
        out.append(Outcome("graph.strictly_even_tree", VIOLATED, {"edges": [list(_vertex_names(g, e[:2])) + [e[2]] for e in g.edges]},
                           "strictly even tree"))
    if n == 3 and g.is_complete():
        labs = sorted((lab // 2 for _, _, lab in g.edges), reverse=True)
        p, q, r = labs
        if 1 / (2 * p) + 1 / (2 * q) + 1 / (2 * r) < 1 and not (p == q == r and p % 2 == 1):
            if r == 1:
                case = "r = 1, p and q coprime" if _gcd(p, q) == 1 else "r = 1, gcd(p, q) > 1"
            elif p == q == r:
                case = "p = q = r even, via the index-2 subgroup"
            else:
                case = "p, q, r ≥ 2 not all equal"
            out.append(Outcome("graph.even_triangle", VIOLATED, {"halved_labels": [p, q, r], "case": case},
                               "hyperbolic even triangle"))
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ----------------------------------------------------------------------------
# battery


def input_hash(obj) -> str:
    text = format_graph(obj) if isinstance(obj, LabeledGraph) else obj.to_text()
    return hashlib.sha256(text.encode()).hexdigest()


def analytic_tests(pres: FinitePresentation, opts: BatteryOptions, graph: LabeledGraph | None = None,
                   extra_censuses: Sequence[CharCensus] = ()) -> tuple[list[Outcome], list[CharCensus], list[str]]:
    ab = abelianization(pres)
    notes = []
    tests = []
    try:
        alex = alexander_polynomial(pres, max_minors=opts.max_minors)
    except TooManyMinors:
        alex = None
        notes.append("Alexander polynomial skipped: too many minors")
    if alex is not None:
        tests.append(test_alex_A1(pres, alex, ab))
        tests.append(test_alex_A2(pres, alex, ab))
    censuses = list(extra_censuses)
    if ab.torsion:
        notes.append("H1 has torsion; characteristic variety tests skipped")
    else:
        for level in range(1, opts.max_level + 1):
            gens, source = None, "minors"
            if level == 1 and graph is not None and graph.is_connected():
                gens, source = char1_ideal_formula(graph).generators, "spanning-tree formula"
            cs = char_census(pres, level, gens, ab, opts, source)
            if cs is None:
                notes.append(f"Char_{level}: components not enumerable from factored minors")
                continue
            if cs.note:
                notes.append(f"Char_{level}: {cs.note}")
            if not cs.complete:
                notes.append(f"Char_{level}: component list incomplete")
            censuses.append(cs)
        if censuses:
            tests.append(test_intersections(pres, censuses, ab, opts.max_points))
            tests.append(test_level_consistency(censuses))
            tests.append(test_dimension_rules(pres, censuses, ab, opts.max_points))
    return tests, censuses, notes


def run_battery(obj, opts: BatteryOptions = BatteryOptions(), extra_censuses: Sequence[CharCensus] = ()) -> ObstructionReport:
    """Run every applicable test on a LabeledGraph or FinitePresentation."""
    graph = obj if isinstance(obj, LabeledGraph) else None
    pres = artin_presentation(graph) if graph is not None else obj
    tests: list[Outcome] = []
    notes: list[str] = []
    if graph is not None and opts.shortcuts:
        tests += _realization_tests(graph)
        tests += _graph_obstructions(graph)
    if opts.analytic:
        more, _, more_notes = analytic_tests(pres, opts, graph, extra_censuses)
        tests += more
        notes += more_notes
    realized = any(t.id.startswith("realization.") and t.outcome == PASSED for t in tests)
    violated = [t for t in tests if t.outcome == VIOLATED]
    if realized and violated:
        raise ContradictoryEvidence(
            "realization fact contradicts " + ", ".join(t.id for t in violated))
    verdict = QP if realized else NOT_QP if violated else UNKNOWN
    if verdict == UNKNOWN and graph is not None:
        notes.append("no obstruction found; general-type Artin groups are conjectured non-quasi-projective, not decided here")
    prov = {
        "input_sha256": input_hash(obj),
        "input_kind": "graph" if graph is not None else "presentation",
        "seed": opts.seed,
        "order_bound": opts.order_bound,
        "max_minors": opts.max_minors,
        "max_points": opts.max_points,
        "max_level": opts.max_level,
        "version": __version__,
    }
    return ObstructionReport(verdict, tests, prov, notes)
