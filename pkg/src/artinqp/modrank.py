"""Exact ranks of Fox matrices at torsion characters, via reduction mod primes.

For a character of order N the entries of J(ξ) lie in Z[ζ_N].  Choosing a
prime p ≡ 1 (mod L), L a multiple of N, and ω of exact order L mod p gives a
ring map Z[ζ_N] → F_p, so rank_p ≤ rank.  A nonzero r×r minor has
absolute norm at most H^φ(N), H the Hadamard bound from the letter counts
of r relators; it cannot vanish modulo distinct primes whose product
exceeds that.  The maximum rank over enough primes is therefore exact, and
usually the first prime already reaches the a priori upper bound.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

import numpy as np

from .groups import FinitePresentation

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


_PRIME_CACHE: dict[tuple[int, int], list[tuple[int, int]]] = {}


def primes_with_root(N: int, count: int, start: int = 2**30) -> tuple[tuple[int, int], ...]:
    """``count`` pairs (p, ω) with p ≡ 1 mod N, p < 2^31, ω of exact order N mod p."""
    out = _PRIME_CACHE.setdefault((N, start), [])
    if len(out) >= count:
        return tuple(out[:count])
    if out:
        p = out[-1][0] + N
    else:
        p = start - (start - 1) % N  # p ≡ 1 (mod N)
        if p <= start - N:
            p += N
    facs = _prime_factors(N)
    while len(out) < count:
        if p >= 2**31:
            raise OverflowError("ran out of word-sized primes")
        if is_prime(p):
            e = (p - 1) // N
            for a in range(2, 200):
                w = pow(a, e, p)
                if all(pow(w, N // q, p) != 1 for q in facs):
                    out.append((p, w))
                    break
        p += N
    return tuple(out[:count])


@lru_cache(maxsize=64)
def _powers(w: int, N: int, p: int) -> np.ndarray:
    out = np.empty(N, dtype=np.int64)
    x = 1
    for k in range(N):
        out[k] = x
        x = x * w % p
    out.flags.writeable = False
    return out


def fox_matrix_mod(pres: FinitePresentation, gen_exps: np.ndarray, N: int, p: int, w: int) -> np.ndarray:
    """Batched J(ξ) mod p; ``gen_exps`` is (K, g) ints mod N (ξ(g) = ζ_N^e)."""
    gen_exps = np.asarray(gen_exps, dtype=np.int64) % N
    K = gen_exps.shape[0]
    g = pres.ngens
    powers = _powers(w, N, p)
    img = powers[gen_exps]  # (K, g)
    inv = powers[(-gen_exps) % N]
    out = np.zeros((K, len(pres.relators), g), dtype=np.int64)
    for r, word in enumerate(pres.relators):
        prefix = np.ones(K, dtype=np.int64)
        acc = np.zeros((K, g), dtype=np.int64)
        for gen, k in word.syllables:
            if k > 0:
                x = img[:, gen]
                for _ in range(k):
                    acc[:, gen] = (acc[:, gen] + prefix) % p
                    prefix = prefix * x % p
            else:
                x = inv[:, gen]
                for _ in range(-k):
                    prefix = prefix * x % p
                    acc[:, gen] = (acc[:, gen] - prefix) % p
        out[:, r, :] = acc
    return out


def batch_rank_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack (K, R, C) of matrices with entries in [0, p)."""
    A = np.array(A, dtype=np.int64) % p
    K, R, C = A.shape
    rank = np.zeros(K, dtype=np.int64)
    if R == 0 or C == 0:
        return rank
    used = np.zeros((K, R), dtype=bool)
    ar = np.arange(K)
    for c in range(C):
        cand = (A[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = A[ar, piv, :]  # (K, C)
        pval = np.where(has, prow[:, c], 1)
        f = A[:, :, c].copy()
        f[ar, piv] = 0
        f[~has] = 0
        # fraction-free step: row <- pivot * row - f * pivot_row (scales by a unit)
        A = (A * pval[:, None, None] - f[:, :, None] * prow[:, None, :]) % p
        A[ar[has], piv[has], :] = prow[has]
        used[ar[has], piv[has]] = True
        rank += has
    return rank


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    r = n
    for q in _prime_factors(n):
        r -= r // q
    return r


def row_norms_sq(pres: FinitePresentation) -> list[int]:
    """Per relator max(1, Σ_j c_ij²), sorted in decreasing order."""
    out = []
    for w in pres.relators:
        counts = [0] * pres.ngens
        for g, k in w.syllables:
            counts[g] += abs(k)
        out.append(max(1, sum(c * c for c in counts)))
    return sorted(out, reverse=True)


def exact_ranks(pres: FinitePresentation, gen_exps: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Exact ranks of J(ξ) over Q(ζ_N) for each per-generator exponent vector."""
    K = len(gen_exps)
    if K == 0:
        return np.zeros(0, dtype=np.int64)
    orders = [1] * K
    for i, e in enumerate(gen_exps):
        for x in e:
            orders[i] = lcm(orders[i], Fraction(x).denominator)
    L = 1
    for o in orders:
        L = lcm(L, o)
    ints = np.array([[int((Fraction(x) % 1) * L) for x in e] for e in gen_exps], dtype=np.int64)
    return exact_ranks_int(pres, ints.reshape(K, pres.ngens), L, orders)


def exact_ranks_int(pres: FinitePresentation, ints: np.ndarray, L: int, orders: Sequence[int]) -> np.ndarray:
    """Same as :func:`exact_ranks` with characters given as ints mod L (ξ(g) = ζ_L^ints).

    A nonzero minor of order r+1 involves r+1 rows, so its squared norm is at
    most (product of the r+1 largest squared row bounds)^φ(N); once the
    squared product of the primes used exceeds that, no rank above the best
    one seen is possible.
    """
    ints = np.asarray(ints, dtype=np.int64) % L
    K = ints.shape[0]
    R, g = len(pres.relators), pres.ngens
    nontrivial = (ints != 0).any(axis=1)
    upper = np.minimum(R, g - nontrivial.astype(np.int64))
    tops = [1]
    for n2 in row_norms_sq(pres):
        tops.append(tops[-1] * n2)
    phis = [_phi(int(o)) for o in orders]
    best = np.zeros(K, dtype=np.int64)
    todo = [i for i in range(K) if upper[i] > 0]
    prod_sq = 1
    i = 0
    while todo:
        p, w = primes_with_root(L, i + 1)[i]
        idx = np.array(todo, dtype=np.int64)
        rk = batch_rank_mod(fox_matrix_mod(pres, ints[idx], L, p, w), p)
        best[idx] = np.maximum(best[idx], rk)
        prod_sq *= p * p
        todo = [j for j in todo if best[j] < upper[j] and prod_sq <= tops[best[j] + 1] ** phis[j]]
        i += 1
    return best


def rank_mod_single(M: list[list[int]], p: int) -> int:
    if not M:
        return 0
    return int(batch_rank_mod(np.array([M], dtype=np.int64), p)[0])

