"""Exhaustive small-graph sweeps: labelled graphs up to isomorphism, formula checks."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import numpy as np

from . import modrank
from .artin import (
    FROZEN_READING, LabeledGraph, artin_presentation, char1_ideal_formula, coordinate_of, formula_zero_mask,
)


def _connected(n, edges) -> bool:
    if n <= 1:
        return True
    adj = {v: set() for v in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == n


def connected_shapes(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Connected simple graphs on n vertices, one per isomorphism class."""
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        edges = tuple(p for k, p in enumerate(pairs) if mask >> k & 1)
        if len(edges) < n - 1 or not _connected(n, edges):
            continue
        canon = min(tuple(sorted(tuple(sorted((s[i], s[j]))) for i, j in edges)) for s in perms)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(canon)
    return out


def labelled_graphs(max_vertices: int = 5, labels=(2, 3, 4, 6)):
    """Connected labelled graphs with 1..max_vertices vertices, up to isomorphism."""
    base = len(labels)
    for n in range(1, max_vertices + 1):
        perms = list(permutations(range(n)))
        for edges in connected_shapes(n):
            m = len(edges)
            index = {e: k for k, e in enumerate(edges)}
            auts = []
            for s in perms:
                img = [tuple(sorted((s[i], s[j]))) for i, j in edges]
                if all(e in index for e in img):
                    auts.append([index[e] for e in img])
            codes = np.arange(base**m, dtype=np.int64)
            digits = (codes[:, None] // base ** np.arange(m, dtype=np.int64)) % base if m else np.zeros((1, 0), np.int64)
            weights = base ** np.arange(m, dtype=np.int64)
            canon = codes.copy()
            for pi in auts:
                # labelling moved along the automorphism: edge k carries the label of edge pi^-1(k)
                moved = np.zeros_like(codes)
                for k in range(m):
                    moved += digits[:, k] * weights[pi[k]]
                canon = np.minimum(canon, moved)
            keep = np.nonzero(canon == codes)[0]
            names = [str(i + 1) for i in range(n)]
            for code in keep:
                labs = [labels[int(d)] for d in digits[code]] if m else []
                yield LabeledGraph(tuple(names), tuple((i, j, lab) for (i, j), lab in zip(edges, labs)))


@dataclass
class SweepResult:
    graphs: int = 0
    characters: int = 0
    mismatches: list = None

    def __post_init__(self):
        if self.mismatches is None:
            self.mismatches = []


SWEEP_ORDER = 12
GRID_BUDGET = 243
RANDOM_SAMPLES = 50
RANDOM_MAX_ORDER = 12
#: common denominator of every sweep character: lcm(1..12)
SWEEP_L = 27720


def sweep_characters(b1: int, rng: random.Random) -> tuple[np.ndarray, list[int]]:
    """Grid of order-12 characters (at most 243 points) plus random torsion characters.

    Returned as integer exponents mod SWEEP_L (K × b1) with their orders.
    The trivial character is left out.
    """
    size = 1
    while (size + 1) ** b1 <= GRID_BUDGET and size + 1 <= SWEEP_ORDER:
        size += 1
    axes = []
    for _ in range(b1):
        others = list(range(1, SWEEP_ORDER))
        rng.shuffle(others)
        axes.append([0] + sorted(others[: size - 1]))
    grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(b1, -1).T
    grid = grid[(grid != 0).any(axis=1)]
    rows = (grid * (SWEEP_L // SWEEP_ORDER)).tolist()
    orders = (SWEEP_ORDER // np.gcd(np.gcd.reduce(grid, axis=1), SWEEP_ORDER)).tolist()
    for _ in range(RANDOM_SAMPLES):
        while True:
            N = rng.randint(2, RANDOM_MAX_ORDER)
            xi = [rng.randrange(N) for _ in range(b1)]
            if any(xi):
                rows.append([x * (SWEEP_L // N) for x in xi])
                orders.append(N // gcd(N, gcd_all(xi)))
                break
    return np.array(rows, dtype=np.int64).reshape(len(rows), b1), orders


def gcd_all(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g


def compare_formula_with_fox(g: LabeledGraph, seed: int = 0, reading: str = FROZEN_READING):
    """Characters ξ ≠ 1 where the formula ideal and the Fox minors disagree on vanishing.

    The Fox side is rank J(ξ) < g − 1, i.e. all codimension-one minors vanish.
    """
    rng = random.Random(seed)
    comp = coordinate_of(g)
    b1 = max(comp) + 1
    X, orders = sweep_characters(b1, rng)
    pres = artin_presentation(g)
    ranks = modrank.exact_ranks_int(pres, X[:, comp], SWEEP_L, orders)
    fox_zero = ranks < g.n - 1
    form_zero = formula_zero_mask(char1_ideal_formula(g, reading), X, SWEEP_L)
    bad = [(tuple(Fraction(int(x), SWEEP_L) for x in X[k]), bool(fox_zero[k]), form_zero[k])
           for k in range(len(orders)) if bool(fox_zero[k]) != form_zero[k]]
    return len(orders), bad


def run_formula_sweep(max_vertices: int = 5, labels=(2, 3, 4, 6), seed: int = 0, reading: str = FROZEN_READING,
                      stop_after: int | None = None) -> SweepResult:
    res = SweepResult()
    for k, g in enumerate(labelled_graphs(max_vertices, labels)):
        nchars, bad = compare_formula_with_fox(g, seed=seed * 1_000_003 + k, reading=reading)
        res.graphs += 1
        res.characters += nchars
        if bad:
            res.mismatches.append((g, bad[:3]))
            if stop_after is not None and len(res.mismatches) >= stop_after:
                break
    return res
