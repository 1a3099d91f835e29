"""Exact sparse multivariate Laurent polynomials.

Coefficients live in one of three domains: the rationals (:data:`QQ`), a
prime field (:func:`GF`), or a cyclotomic field (:func:`Cyclotomic`).  All
identities between Alexander-type polynomials hold only up to units
(±c · monomial), so :meth:`LaurentPoly.normalize` picks a canonical
associate: the lexicographically smallest exponent is shifted to zero and
the coefficient of the lexicographically largest term is made positive
(and the content removed over QQ, or made 1 over a field).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np
from sympy.polys.domains import QQ as _SYM_QQ, GF as _SYM_GF
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyRing


class NonDivisible(ArithmeticError):
    """Exact division left a nonzero remainder."""


# ----------------------------------------------------------------------------
# cyclotomic polynomials and the fields Q(zeta_N)


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    # t^n - 1 divided by Φ_d for proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, list(cyclotomic_coeffs(d)))
    return tuple(num)


def _int_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise NonDivisible("integer polynomial division")
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    if any(num[: len(den) - 1]):
        raise NonDivisible("integer polynomial division")
    return out


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Φ_n as coefficient vectors (length φ(n)) for 0 <= k < n."""
    phi = totient(n)
    cyc = cyclotomic_coeffs(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1] if phi else 0
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cyc[j]
    return tuple(rows)


def _norm_q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class CycloElem:
    """An element of Q(ζ_N), stored in the power basis reduced modulo Φ_N."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Sequence):
        phi = totient(N)
        c = [_norm_q(x) for x in coeffs]
        if len(c) > phi:
            c = _reduce(N, c)
        else:
            c = c + [0] * (phi - len(c))
        self.N = N
        self.coeffs = tuple(c)

    @classmethod
    def root_of_unity(cls, k: int, N: int) -> "CycloElem":
        return cls(N, _power_table(N)[k % N])

    @classmethod
    def from_rational(cls, q, N: int = 1) -> "CycloElem":
        return cls(N, [q])

    def lift(self, M: int) -> "CycloElem":
        """Embed into Q(ζ_M) for a multiple M of N (ζ_N ↦ ζ_M^{M/N})."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"{self.N} does not divide {M}")
        step = M // self.N
        table = _power_table(M)
        acc = [0] * totient(M)
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * step) % M]
                for j, x in enumerate(row):
                    if x:
                        acc[j] += c * x
        return CycloElem(M, acc)

    def _common(self, other):
        if isinstance(other, CycloElem):
            if other.N == self.N:
                return self, other
            M = lcm(self.N, other.N)
            return self.lift(M), other.lift(M)
        return self, CycloElem(self.N, [other])

    def __add__(self, other):
        a, b = self._common(other)
        return CycloElem(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycloElem) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloElem):
            return CycloElem(self.N, [x * other for x in self.coeffs])
        a, b = self._common(other)
        prod = [0] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloElem(a.N, _reduce(a.N, prod))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = CycloElem(self.N, [1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CycloElem):
            a, b = self._common(other)
            return a.coeffs == b.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == CycloElem(self.N, [other]).coeffs
        return NotImplemented

    def __hash__(self):
        # hash on the minimal representation is costly; conductor-specific only
        return hash((self.N, self.coeffs))

    def inverse(self) -> "CycloElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        # extended Euclid in Q[x] against Φ_N
        a = [Fraction(c) for c in self.coeffs]
        b = [Fraction(c) for c in cyclotomic_coeffs(self.N)]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = _trim(a), _trim(b)
        while len(r1) > 0:
            q, rem = _divmod_q(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _trim(_sub_q(s0, _mul_q(q, s1)))
        # r0 is a nonzero constant
        c = r0[0]
        return CycloElem(self.N, [x / c for x in s0])

    def __truediv__(self, other):
        if isinstance(other, CycloElem):
            return self * other.inverse()
        return CycloElem(self.N, [Fraction(x) / other for x in self.coeffs])

    def minimal_conductor(self) -> "CycloElem":
        """Same element expressed in the smallest Q(ζ_d) that contains it."""
        table = _power_table(self.N)
        for d in sorted(d for d in range(1, self.N + 1) if self.N % d == 0):
            step = self.N // d
            basis = [table[(k * step) % self.N] for k in range(totient(d))]
            sol = _solve_q(basis, list(self.coeffs))
            if sol is not None:
                return CycloElem(d, sol)
        return self

    def __repr__(self):
        return f"CycloElem({self.N}, {list(self.coeffs)})"

    def __str__(self):
        return format_cyclo(self)


def _solve_q(basis, target):
    """Solve Σ c_k basis[k] = target over Q, or None."""
    n = len(target)
    m = len(basis)
    rows = [[Fraction(basis[k][i]) for k in range(m)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][m] for i in range(r, n)):
        return None
    sol = [0] * m
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][m]
    return sol


def _reduce(N: int, coeffs: Sequence) -> list:
    phi = totient(N)
    table = None
    out = list(coeffs[:phi]) + [0] * max(0, phi - len(coeffs))
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            if table is None:
                table = _power_table(N)
            row = table[k % N]
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return [_norm_q(x) for x in out]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _sub_q(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _mul_q(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod_q(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def format_cyclo(z: CycloElem, name: str = "z") -> str:
    terms = []
    for k in range(len(z.coeffs) - 1, -1, -1):
        c = z.coeffs[k]
        if c:
            terms.append((c, k))
    if not terms:
        return "0"
    return _format_terms([(c, (k,)) for c, k in terms], [f"{name}{z.N}"] if z.N > 2 else [name], str)


# ----------------------------------------------------------------------------
# coefficient domains


class _Rationals:
    name = "QQ"
    characteristic = 0
    zero, one = 0, 1

    def convert(self, x):
        if isinstance(x, CycloElem):
            raise TypeError("cyclotomic element is not rational")
        return _norm_q(Fraction(x)) if not isinstance(x, int) else x

    def is_zero(self, x):
        return x == 0

    def add(self, a, b):
        return _norm_q(a + b)

    def mul(self, a, b):
        return _norm_q(a * b)

    def neg(self, a):
        return -a

    def inv(self, a):
        return _norm_q(Fraction(1) / a)

    def fmt(self, x):
        return str(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        if p > 2**31:
            raise ValueError("prime fields limited to p <= 2^31")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero, self.one = 0, 1

    def convert(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def is_zero(self, x):
        return x % self.p == 0

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def fmt(self, x):
        return str(x)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class CyclotomicField:
    def __init__(self, N: int):
        self.N = N
        self.characteristic = 0
        self.name = f"QQ(z{N})"
        self.zero = CycloElem(N, [0])
        self.one = CycloElem(N, [1])

    def convert(self, x):
        if isinstance(x, CycloElem):
            return x.lift(self.N)
        return CycloElem(self.N, [x])

    def is_zero(self, x):
        return x.is_zero()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def fmt(self, x):
        s = format_cyclo(x)
        return s if len([c for c in x.coeffs if c]) <= 1 and not s.startswith("-") else f"({s})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("QQz", self.N))


QQ = _Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def Cyclotomic(N: int) -> CyclotomicField:
    return CyclotomicField(N)


# ----------------------------------------------------------------------------
# Laurent polynomials


Exp = tuple[int, ...]


class LaurentPoly:
    """Sparse Laurent polynomial ``Σ c_e t^e`` in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "domain")

    def __init__(self, nvars: int, terms: dict | Iterable = (), domain=QQ):
        self.nvars = nvars
        self.domain = domain
        clean = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = domain.convert(c)
            if e in clean:
                c = domain.add(clean[e], c)
            if domain.is_zero(c):
                clean.pop(e, None)
            else:
                clean[e] = c
        self.terms = clean

    # constructors ---------------------------------------------------------
    @classmethod
    def _raw(cls, nvars, terms, domain):
        obj = cls.__new__(cls)
        obj.nvars, obj.terms, obj.domain = nvars, terms, domain
        return obj

    @classmethod
    def zero(cls, nvars: int, domain=QQ):
        return cls._raw(nvars, {}, domain)

    @classmethod
    def constant(cls, c, nvars: int, domain=QQ):
        return cls(nvars, {(0,) * nvars: c}, domain)

    @classmethod
    def one(cls, nvars: int, domain=QQ):
        return cls.constant(1, nvars, domain)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, domain=QQ):
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff}, domain)

    @classmethod
    def var(cls, i: int, nvars: int, domain=QQ):
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e, 1, domain)

    @classmethod
    def univariate(cls, coeffs: Sequence, domain=QQ, shift: int = 0):
        """From dense coefficients, constant term first (times t^shift)."""
        return cls(1, {(k + shift,): c for k, c in enumerate(coeffs) if c}, domain)

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    is_unit = is_monomial

    def support(self) -> list[Exp]:
        return sorted(self.terms)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.domain.zero)

    def max_abs_degree(self) -> int:
        return max((max(map(abs, e), default=0) for e in self.terms), default=0)

    def degree_span(self, i: int = 0) -> int:
        """max - min exponent in variable ``i`` (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        xs = [e[i] for e in self.terms]
        return max(xs) - min(xs)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("mismatched number of variables")
            if other.domain != self.domain:
                if other.domain == QQ:
                    return other.change_domain(self.domain)
                if self.domain == QQ:
                    raise TypeError("mixed domains; convert the QQ operand first")
                raise TypeError(f"mismatched domains {self.domain} and {other.domain}")
            return other
        return LaurentPoly.constant(other, self.nvars, self.domain)

    def change_domain(self, domain) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: domain.convert(c) for e, c in self.terms.items()}, domain)

    def __add__(self, other):
        other = self._coerce(other)
        dom = self.domain
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = dom.add(out[e], c)
                if dom.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return LaurentPoly._raw(self.nvars, out, dom)

    __radd__ = __add__

    def __neg__(self):
        dom = self.domain
        return LaurentPoly._raw(self.nvars, {e: dom.neg(c) for e, c in self.terms.items()}, dom)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = self.domain.convert(other)
            if self.domain.is_zero(c):
                return LaurentPoly.zero(self.nvars, self.domain)
            return LaurentPoly._raw(self.nvars, {e: self.domain.mul(x, c) for e, x in self.terms.items()}, self.domain)
        other = self._coerce(other)
        dom = self.domain
        out: dict = {}
        small, big = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        for e1, c1 in small.terms.items():
            for e2, c2 in big.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = dom.mul(c1, c2)
                if e in out:
                    out[e] = dom.add(out[e], c)
                else:
                    out[e] = c
        out = {e: c for e, c in out.items() if not dom.is_zero(c)}
        return LaurentPoly._raw(self.nvars, out, dom)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-unit")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(tuple(x * k for x in e), self._pow_c(self.domain.inv(c), -k), self.domain)
        out = LaurentPoly.one(self.nvars, self.domain)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _pow_c(self, c, k):
        out = self.domain.one
        for _ in range(k):
            out = self.domain.mul(out, c)
        return out

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exps."""
        return LaurentPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}, self.domain
        )

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # normal forms ---------------------------------------------------------
    def normalize(self) -> "LaurentPoly":
        """Canonical associate (see module docstring)."""
        if not self.terms:
            return self
        dom = self.domain
        low = min(self.terms)
        high = max(self.terms)
        lead = self.terms[high]
        if dom == QQ:
            num = 0
            den = 1
            for c in self.terms.values():
                f = Fraction(c)
                num = gcd(num, f.numerator)
                den = lcm(den, f.denominator)
            scale = Fraction(den, num)
            if lead < 0:
                scale = -scale
        else:
            scale = dom.inv(lead)
        return LaurentPoly._raw(
            self.nvars,
            {tuple(a - b for a, b in zip(e, low)): dom.mul(c, dom.convert(scale) if dom == QQ else scale)
             for e, c in self.terms.items()},
            dom,
        )

    def is_associate(self, other: "LaurentPoly") -> bool:
        return self.normalize() == other.normalize()

    def content(self):
        """Rational content (positive), QQ only."""
        num, den = 0, 1
        for c in self.terms.values():
            f = Fraction(c)
            num = gcd(num, f.numerator)
            den = lcm(den, f.denominator)
        return _norm_q(Fraction(num, den)) if num else 0

    def min_exponents(self) -> Exp:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    # conversion -----------------------------------------------------------
    def _sympy_ring(self):
        if self.domain == QQ:
            dom = _SYM_QQ
        elif isinstance(self.domain, PrimeField):
            dom = _SYM_GF(self.domain.p)
        else:
            raise TypeError(f"gcd/division not supported over {self.domain}")
        return _ring(max(self.nvars, 1), dom)

    def _to_sympy(self, ring, low):
        dom = ring.domain
        n = max(self.nvars, 1)
        d = {}
        for e, c in self.terms.items():
            key = tuple(a - b for a, b in zip(e, low)) if self.nvars else (0,)
            if self.domain == QQ:
                f = Fraction(c)
                d[key] = dom(f.numerator, f.denominator) if f.denominator != 1 else dom(f.numerator)
            else:
                d[key] = dom(c)
        return ring.from_dict(d) if d else ring.zero

    def _from_sympy(self, p, low=None) -> "LaurentPoly":
        low = low or (0,) * self.nvars
        terms = {}
        for e, c in p.terms():
            e = tuple(a + b for a, b in zip(e[: self.nvars], low)) if self.nvars else ()
            if self.domain == QQ:
                terms[e] = _norm_q(Fraction(int(c.numerator), int(c.denominator)))
            else:
                terms[e] = int(c) % self.domain.p
        return LaurentPoly(self.nvars, terms, self.domain)

    # formatting -----------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        if not self.terms:
            return "0"
        items = [(c, e) for e, c in sorted(self.terms.items(), reverse=True)]
        return _format_terms(items, names, self.domain.fmt)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"LaurentPoly({self.format()!r}, nvars={self.nvars}, domain={self.domain!r})"


def default_names(nvars: int) -> list[str]:
    return ["t"] if nvars == 1 else [f"t{i + 1}" for i in range(nvars)]


def _format_terms(items, names, fmt) -> str:
    out = []
    for c, e in items:
        mono = []
        for n, k in zip(names, e):
            if k == 1:
                mono.append(n)
            elif k:
                mono.append(f"{n}^{k}")
        mono_s = "*".join(mono)
        cs = fmt(c)
        neg = cs.startswith("-") and not cs.startswith("(")
        if neg:
            cs = cs[1:]
        if mono_s:
            body = mono_s if cs == "1" else f"{cs}*{mono_s}"
        else:
            body = cs
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


@lru_cache(maxsize=None)
def _ring(n, dom):
    return PolyRing([f"x{i}" for i in range(n)], dom)


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Return ``f / g`` as a Laurent polynomial; raise NonDivisible otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if g.is_monomial():
        (e, c), = g.terms.items()
        inv = f.domain.inv(c)
        return LaurentPoly._raw(
            f.nvars, {tuple(a - b for a, b in zip(x, e)): f.domain.mul(k, inv) for x, k in f.terms.items()}, f.domain
        )
    ring = f._sympy_ring()
    lf, lg = f.min_exponents(), g.min_exponents()
    pf, pg = f._to_sympy(ring, lf), g._to_sympy(ring, lg)
    try:
        q = pf.exquo(pg)
    except ExactQuotientFailed as exc:
        raise NonDivisible("not divisible") from exc
    return f._from_sympy(q, tuple(a - b for a, b in zip(lf, lg)))


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    try:
        exact_divide(f, g)
    except NonDivisible:
        return False
    return True


def gcd_multivariate(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """gcd up to units, returned as the canonical associate."""
    if f.is_zero():
        return g.normalize()
    if g.is_zero():
        return f.normalize()
    if f.nvars == 0:
        return LaurentPoly.one(0, f.domain)
    ring = f._sympy_ring()
    pf = f._to_sympy(ring, f.min_exponents())
    pg = g._to_sympy(ring, g.min_exponents())
    h = pf.gcd(pg)
    return f._from_sympy(h).normalize()


def gcd_list(polys: Iterable[LaurentPoly], nvars: int, domain=QQ) -> LaurentPoly:
    acc = LaurentPoly.zero(nvars, domain)
    for p in polys:
        acc = gcd_multivariate(acc, p)
        if acc.is_monomial():
            return acc.normalize()
    return acc


# ----------------------------------------------------------------------------
# evaluation at torsion characters


def _char_exponents(xi) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in getattr(xi, "exponents", xi))


def _order(exps) -> int:
    n = 1
    for x in exps:
        n = lcm(n, Fraction(x).denominator)
    return n


def substitute_monomial_map(f: LaurentPoly, B: Sequence[Sequence[int]], chi=None) -> LaurentPoly:
    """Pull ``f`` back along ``s ↦ χ · s^B`` (B is nvars × d).

    Variable i becomes ``χ_i · ∏_j s_j^{B[i][j]}``.  The result lives in
    Q(ζ_N) (N = order of χ, or the conductor of f's coefficients).
    """
    n = f.nvars
    if len(B) != n:
        raise ValueError("B must have one row per variable")
    d = len(B[0]) if n else 0
    exps = _char_exponents(chi) if chi is not None else (Fraction(0),) * n
    if len(exps) != n:
        raise ValueError("character arity does not match")
    N = _order(exps)
    if isinstance(f.domain, CyclotomicField):
        N = lcm(N, f.domain.N)
    elif isinstance(f.domain, PrimeField):
        raise TypeError("substitution into cyclotomic values needs characteristic 0")
    dom = Cyclotomic(N)
    ints = [int(x * N) for x in exps]
    out: dict = {}
    for e, c in f.terms.items():
        k = sum(a * b for a, b in zip(e, ints)) % N
        val = CycloElem.root_of_unity(k, N) * (c.lift(N) if isinstance(c, CycloElem) else c)
        se = tuple(sum(e[i] * B[i][j] for i in range(n)) for j in range(d))
        out[se] = out[se] + val if se in out else val
    return LaurentPoly(d, {e: c for e, c in out.items() if not c.is_zero()}, dom)


def evaluate(f: LaurentPoly, xi) -> CycloElem:
    """Exact value of ``f`` at a torsion character, in Q(ζ_order)."""
    g = substitute_monomial_map(f, [[] for _ in range(f.nvars)], xi)
    if g.is_zero():
        return CycloElem(g.domain.N, [0])
    return g.terms[()]


# ----------------------------------------------------------------------------
# Alexander polynomial structure tests


@dataclass(frozen=True)
class EssentialForm:
    """``f = unit · P(t^direction)`` with ``direction`` primitive."""

    direction: tuple[int, ...]
    profile: LaurentPoly  # univariate
    shift: tuple[int, ...]

    def expand(self) -> LaurentPoly:
        n = len(self.direction)
        out = {}
        for (k,), c in self.profile.terms.items():
            out[tuple(s + k * a for s, a in zip(self.shift, self.direction))] = c
        return LaurentPoly(n, out, self.profile.domain)


def primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    w = [x // g for x in v]
    first = next(x for x in w if x)
    if first < 0:
        w = [-x for x in w]
    return tuple(w)


def single_essential_variable(f: LaurentPoly) -> EssentialForm | None:
    if f.is_zero():
        raise ValueError("single_essential_variable needs f != 0")
    pts = sorted(f.terms)
    base = pts[0]
    n = f.nvars
    if len(pts) == 1:
        direction = tuple(int(i == 0) for i in range(n))
        return EssentialForm(direction, LaurentPoly(1, {(0,): f.terms[base]}, f.domain), base)
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    direction = primitive_vector(diffs[0])
    profile = {(0,): f.terms[base]}
    for p, dv in zip(pts[1:], diffs):
        i = next(j for j, a in enumerate(direction) if a)
        k, r = divmod(dv[i], direction[i])
        if r or tuple(k * a for a in direction) != dv:
            return None
        profile[(k,)] = f.terms[p]
    return EssentialForm(direction, LaurentPoly(1, profile, f.domain), base)


def delta_label(label: int) -> LaurentPoly:
    """Δ_{2k}(t) = (t^k − 1)/(t − 1) and Δ_{2k+1}(t) = (t^{2k+1} + 1)/(t + 1)."""
    if label < 2:
        raise ValueError("labels are >= 2")
    if label % 2 == 0:
        return LaurentPoly.univariate([1] * (label // 2))
    return LaurentPoly.univariate([(-1) ** k for k in range(label)])


def cyclotomic_poly(m: int, nvars: int = 1, direction: Sequence[int] | None = None) -> LaurentPoly:
    """Φ_m(t^direction) as a Laurent polynomial."""
    direction = tuple(direction) if direction is not None else (1,) + (0,) * (nvars - 1)
    return LaurentPoly(
        len(direction), {tuple(k * a for a in direction): c for k, c in enumerate(cyclotomic_coeffs(m)) if c}
    )


#: cyclotomic sweep bound m <= SWEEP_FACTOR * deg^2, from φ(m) >= sqrt(m/2)
SWEEP_FACTOR = 2


def cyclotomic_part(P: LaurentPoly, sweep_factor: int = SWEEP_FACTOR) -> tuple[LaurentPoly, LaurentPoly]:
    """Split univariate ``P`` as (cyclotomic part, remainder), both normalized."""
    if P.nvars != 1:
        raise ValueError("univariate polynomial expected")
    if P.is_zero():
        raise ValueError("P must be nonzero")
    rest = P.normalize()
    cyc = LaurentPoly.one(1, P.domain)
    deg = rest.degree_span()
    m = 1
    while m <= max(1, sweep_factor * deg * deg) and rest.degree_span() > 0:
        if totient(m) <= rest.degree_span():
            tm1 = LaurentPoly(1, {(m,): 1, (0,): -1}, P.domain)
            while True:
                g = gcd_multivariate(rest, tm1)
                if g.degree_span() == 0:
                    break
                rest = exact_divide(rest, g).normalize()
                cyc = cyc * g
        m += 1
    return cyc.normalize(), rest


def cyclotomic_product_test(P: LaurentPoly, sweep_factor: int = SWEEP_FACTOR) -> bool:
    _, rest = cyclotomic_part(P, sweep_factor)
    return rest.degree_span() == 0


def _is_reciprocal(f: LaurentPoly) -> bool:
    """f(t^-1) = ±t^c f(t): necessary for a product of Φ_m(t^a) factors."""
    lo = f.min_exponents()
    hi = tuple(max(e[i] for e in f.terms) for i in range(f.nvars))
    c = tuple(a + b for a, b in zip(lo, hi))
    e0, c0 = next(iter(f.terms.items()))
    mirror = f.terms.get(tuple(x - y for x, y in zip(c, e0)))
    if mirror is None:
        return False
    sign = 1 if mirror == c0 else -1 if mirror == f.domain.neg(c0) else 0
    if not sign:
        return False
    for e, k in f.terms.items():
        r = f.terms.get(tuple(x - y for x, y in zip(c, e)))
        if r is None or r != (k if sign == 1 else f.domain.neg(k)):
            return False
    return True


def _candidate_directions(pts, max_entry: int) -> set[tuple[int, ...]]:
    """Primitive differences of support points with entries bounded by ``max_entry``."""
    P = np.array(pts, dtype=np.int64)
    i, j = np.triu_indices(len(pts), 1)
    D = P[j] - P[i]
    g = np.gcd.reduce(np.abs(D), axis=1)
    D = D[g > 0] // g[g > 0, None]
    D = D[np.abs(D).max(axis=1) <= max_entry]
    out = set()
    for row in np.unique(D, axis=0).tolist():
        out.add(primitive_vector(row))
    return out


_FILTER_POINTS = tuple(tuple(0.1234 + 0.7071 * k + 0.3779 * j * j for j in range(16)) for k in range(2))


def _may_vanish_on(ex, co, scale: float, m: int, a) -> bool:
    """False when f is certainly nonzero somewhere on {t^a = exp(2πi/m)}.

    Floating-point prefilter for trial division: two fixed points of that
    hypersurface are tried and f is declared nonzero only when |f| exceeds
    1e-6 of its coefficient sum, far above rounding error.
    """
    n = ex.shape[1]
    j = next(i for i in range(n) if a[i])
    for pt in _FILTER_POINTS:
        theta = np.array(pt[:n]) * (2 * np.pi)
        rest = sum(a[i] * theta[i] for i in range(n) if i != j)
        theta[j] = (2 * np.pi / m - rest) / a[j]
        val = np.exp(1j * (ex @ theta)) @ co
        if abs(val) > 1e-6 * scale:
            return False
    return True


def cyclotomic_monomial_factors(f: LaurentPoly, max_entry: int = 3):
    """Factor ``f`` as ``unit · ∏ Φ_m(t^a)^k`` with primitive directions ``a``.

    Returns a list of ``(m, a, k)`` or None if ``f`` is not of this shape.
    Candidate directions are primitive differences of support points; a
    factor Φ_m(t^a) forces an edge of the Newton polytope parallel to a.
    """
    if f.is_zero():
        raise ValueError("cannot factor zero")
    rest = f.normalize()
    if not _is_reciprocal(rest):
        return None
    factors: list[tuple[int, tuple[int, ...], int]] = []
    found: dict = {}
    while not rest.is_monomial():
        pts = sorted(rest.terms)
        cands = _candidate_directions(pts, max_entry)
        progress = False
        ex = np.array(pts, dtype=np.float64).reshape(len(pts), rest.nvars)
        co = np.array([float(rest.terms[p]) if rest.domain == QQ else 0.0 for p in pts])
        scale = float(np.abs(co).sum())
        for a in sorted(cands, key=lambda v: (sum(map(abs, v)), v)):
            proj = [sum(x * y for x, y in zip(p, a)) for p in pts]
            span = max(proj) - min(proj)
            norm2 = sum(x * x for x in a)
            # a·(Newton extent) counts the length along a in units of |a|^2
            length = span // norm2 if norm2 else 0
            for m in range(1, 2 * length * length + 2):
                if totient(m) > length:
                    continue
                if rest.domain == QQ and not _may_vanish_on(ex, co, scale, m, a):
                    continue
                phi = cyclotomic_poly(m, direction=a)
                while True:
                    try:
                        q = exact_divide(rest, phi)
                    except NonDivisible:
                        break
                    rest = q.normalize()
                    found[(m, a)] = found.get((m, a), 0) + 1
                    progress = True
                if rest.is_monomial():
                    break
            if progress:
                break
        if not progress:
            return None
    for (m, a), k in sorted(found.items()):
        factors.append((m, a, k))
    return factors
