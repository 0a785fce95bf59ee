"""Exact arithmetic in cyclotomic fields.

An element of Q(zeta_n) is stored as integer numerators over a common
positive denominator, in the power basis 1, zeta_n, ..., zeta_n^(phi(n)-1)
modulo the n-th cyclotomic polynomial.  The power basis is an integral
basis of Z[zeta_n], so an element is an algebraic integer exactly when its
denominator is 1.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import ZZ, factorint
from sympy.polys.galoistools import gf_factor_sqf, gf_from_int_poly


class CycloError(ValueError):
    pass


class BadExponent(CycloError):
    pass


class NotAlgebraicInteger(CycloError):
    pass


# ---------------------------------------------------------------------------
# per-conductor tables


@functools.lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(n))) if n > 1 else ()


@functools.lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def _moebius(n: int) -> int:
    fac = factorint(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def nu(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def p_part(n: int, p: int) -> int:
    return p ** nu(n, p)


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert not any(a[:db]), "inexact polynomial division"
    return q


@functools.lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row m holds the coordinates of zeta_n^m (0 <= m < n)."""
    phi = euler_phi(n)
    poly = cyclotomic_poly(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x, then reduce the x^phi term with the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * poly[j]
    return tuple(rows)


@functools.lru_cache(maxsize=None)
def _sparse_rows(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(
        tuple((j, c) for j, c in enumerate(row) if c) for row in _reduction_table(n)
    )


@functools.lru_cache(maxsize=None)
def _trace_weights(n: int) -> tuple[Fraction, ...]:
    """Normalised trace Tr(zeta_n^m) / phi(n) for m = 0..n-1."""
    out = []
    for m in range(n):
        g = math.gcd(m, n)
        k = n // g
        out.append(Fraction(_moebius(k), euler_phi(k)))
    return tuple(out)


def _reduce_exponents(n: int, terms: Iterable[tuple[int, int]]) -> list[int]:
    rows = _sparse_rows(n)
    acc = [0] * euler_phi(n)
    for e, c in terms:
        if c:
            for j, r in rows[e % n]:
                acc[j] += c * r
    return acc


# ---------------------------------------------------------------------------


class Cyclotomic:
    """Immutable element of the cyclotomic field Q(zeta_n)."""

    __slots__ = ("n", "num", "den", "_cond", "_hash")

    def __init__(self, n: int, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = den
        for c in num:
            if g == 1:
                break
            g = math.gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.n = n
        self.num = tuple(num)
        self.den = den
        self._cond = None
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def rational(cls, value) -> Cyclotomic:
        f = Fraction(value)
        return cls(1, (f.numerator,), f.denominator)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> Cyclotomic:
        return cls(n, _reduce_exponents(n, [(k, 1)]))

    @classmethod
    def from_exponents(cls, n: int, exps: Iterable[tuple[int, int]], den: int = 1):
        """Sum of c * zeta_n^e over (e, c) pairs."""
        return cls(n, _reduce_exponents(n, exps), den)

    @classmethod
    def coerce(cls, x) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # structure ------------------------------------------------------------

    def lift(self, m: int) -> Cyclotomic:
        """Same value written in Q(zeta_m); n must divide m."""
        if m == self.n:
            return self
        if m % self.n:
            raise CycloError(f"cannot lift from Q_{self.n} to Q_{m}")
        s = m // self.n
        return Cyclotomic(
            m, _reduce_exponents(m, ((i * s, c) for i, c in enumerate(self.num))), self.den
        )

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return self.conductor() == 1

    def is_integer_valued(self) -> bool:
        return self.den == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise CycloError(f"{self!r} is not rational")
        return self.normalized_trace()

    def normalized_trace(self) -> Fraction:
        """Tr_{Q_n/Q}(self) / phi(n); independent of the ambient field."""
        w = _trace_weights(self.n)
        # coordinates are in the power basis, so exponents i < phi(n)
        return sum((c * w[i] for i, c in enumerate(self.num) if c), Fraction(0)) / self.den

    def conductor(self) -> int:
        if self._cond is None:
            self._cond = conductor([self])
        return self._cond

    def reduced(self) -> Cyclotomic:
        """Same value in its smallest cyclotomic field."""
        c = self.conductor()
        return self if c == self.n else _descend(self, c)

    # arithmetic -----------------------------------------------------------

    def _common(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        other = Cyclotomic.coerce(other)
        if self.n == other.n:
            return self, other
        m = self.n * other.n // math.gcd(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return Cyclotomic(a.n, [x + y for x, y in zip(a.num, b.num)], a.den)
        return Cyclotomic(
            a.n, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.num], self.den)

    def __sub__(self, other):
        try:
            return self + (-Cyclotomic.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.n, [x * other for x in self.num], self.den)
        if isinstance(other, Fraction):
            return Cyclotomic(
                self.n, [x * other.numerator for x in self.num], self.den * other.denominator
            )
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        n = a.n
        if n == 1:
            return Cyclotomic(1, (a.num[0] * b.num[0],), a.den * b.den)
        conv = [0] * (2 * len(a.num) - 1)
        bn = [(j, y) for j, y in enumerate(b.num) if y]
        for i, x in enumerate(a.num):
            if x:
                for j, y in bn:
                    conv[i + j] += x * y
        return Cyclotomic(n, _reduce_exponents(n, enumerate(conv)), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        if self.n == 1:
            return Cyclotomic(1, (self.den,), self.num[0])
        # product of the other Galois conjugates is rational times the inverse
        other = Cyclotomic.rational(1)
        for k in _units(self.n)[1:]:
            other = other * galois_apply(self, k)
        norm = (self * other).to_fraction()
        return other * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def conjugate(self) -> Cyclotomic:
        return galois_apply(self, -1)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def __repr__(self):
        if self.n == 1:
            return f"Cyclotomic({Fraction(self.num[0], self.den)})"
        terms = []
        for i, c in enumerate(self.num):
            if not c:
                continue
            mono = "1" if i == 0 else (f"z{self.n}" if i == 1 else f"z{self.n}^{i}")
            terms.append(f"{c}*{mono}")
        body = " + ".join(terms) or "0"
        return f"Cyclotomic(({body})/{self.den})" if self.den != 1 else f"Cyclotomic({body})"

    def __str__(self):
        if self.is_rational():
            return str(self.to_fraction())
        out = ""
        for i, c in enumerate(self.num):
            if not c:
                continue
            mono = "" if i == 0 else (f"z{self.n}" if i == 1 else f"z{self.n}^{i}")
            mag = abs(c)
            coef = str(mag) if (mag != 1 or not mono) else ""
            sep = "*" if coef and mono else ""
            sign = "-" if c < 0 else "+"
            out += (("-" if c < 0 else "") if not out else f" {sign} ") + coef + sep + mono
        return f"({out})/{self.den}" if self.den != 1 else out

    def sort_key(self, n: int) -> tuple[Fraction, ...]:
        """Coordinates in Q_n as a totally ordered key; self must lie in Q_n."""
        v = self.lift(n)
        return tuple(Fraction(c, v.den) for c in v.num)


ZERO = Cyclotomic(1, (0,))
ONE = Cyclotomic(1, (1,))


# ---------------------------------------------------------------------------
# Galois action, conductor, level


@functools.lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1) if n > 1 else (1,)


def galois_apply(v: Cyclotomic, k: int) -> Cyclotomic:
    """Image of v under zeta_n -> zeta_n^k."""
    n = v.n
    if math.gcd(k, n) != 1:
        raise BadExponent(f"exponent {k} is not a unit modulo {n}")
    k %= n
    if k == 1 or n == 1:
        return v
    return Cyclotomic(n, _reduce_exponents(n, ((i * k, c) for i, c in enumerate(v.num))), v.den)


@functools.lru_cache(maxsize=None)
def _relative_gens(big: int, small: int) -> tuple[int, ...]:
    """Generators of Gal(Q_big / Q_small) as exponents modulo big."""
    members = [k for k in _units(big) if (k - 1) % small == 0]
    gens: list[int] = []
    span = {1}
    for k in members:
        if k in span:
            continue
        gens.append(k)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g % big
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return tuple(gens)


def _fixed_by(values: Sequence[Cyclotomic], gens: Iterable[int]) -> bool:
    for k in gens:
        for v in values:
            if galois_apply(v, k) != v:
                return False
    return True


def _ambient(values: Iterable[Cyclotomic]) -> int:
    n = 1
    for v in values:
        n = n * v.n // math.gcd(n, v.n)
    return n


def conductor(values: Iterable) -> int:
    """Smallest n with every value in Q(zeta_n), normalised so n != 2 mod 4.

    Descends from the common ambient field one prime at a time, testing
    invariance under Gal(Q_N / Q_m) for the candidate m.
    """
    vals = [Cyclotomic.coerce(v) for v in values]
    if not vals:
        return 1
    big = _ambient(vals)
    vals = [v.lift(big) for v in vals]
    m = big
    progress = True
    while progress and m > 1:
        progress = False
        for ell in prime_factors(m):
            cand = m // ell
            if _fixed_by(vals, _relative_gens(big, cand)):
                m = cand
                progress = True
                break
    if m % 4 == 2:
        m //= 2
    return m


def level(values: Iterable, p: int) -> int:
    """p-rationality level: the p-adic valuation of the conductor."""
    return nu(conductor(values), p)


def galois_stabilizer(values: Iterable, n: int | None = None) -> frozenset[int]:
    """Exponents k mod n fixing every value; n defaults to the conductor and
    must be a multiple of it."""
    vals = [Cyclotomic.coerce(v) for v in values]
    c = conductor(vals)
    if n is None:
        n = c
    if n % c:
        raise CycloError(f"{n} is not a multiple of the conductor {c}")
    vals = [v.reduced().lift(n) for v in vals]
    return frozenset(
        k % n for k in _units(n) if all(galois_apply(v, k) == v for v in vals)
    )


def field_degree(values: Iterable) -> int:
    """[Q(values) : Q]."""
    vals = list(values)
    c = conductor(vals)
    return euler_phi(c) // len(galois_stabilizer(vals, c))


def _descend(v: Cyclotomic, m: int) -> Cyclotomic:
    """Rewrite v (known to lie in Q_m) with ambient m, by exact linear solve."""
    n = v.n
    if m == n:
        return v
    s = n // m
    basis = [Cyclotomic.zeta(m, j).lift(n).num for j in range(euler_phi(m))]
    # solve sum_j a_j * basis[j] = v.num / v.den over Q by elimination
    rows = [[Fraction(basis[j][i]) for j in range(len(basis))] + [Fraction(v.num[i], v.den)]
            for i in range(len(v.num))]
    ncols = len(basis)
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    den = math.lcm(*(x.denominator for x in sol)) if sol else 1
    out = Cyclotomic(m, [int(x * den) for x in sol], den)
    assert out.lift(n) == v and s >= 1
    return out


def crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        # x + m*t = r (mod q)
        t = ((r - x) * pow(m, -1, q)) % q if q > 1 else 0
        x, m = x + m * t, m * q
    return x % m


def sigma_e_exponent(n: int, p: int, e: int) -> int:
    """Exponent k mod n with k = 1+p^e on the p-part and k = 1 on the p'-part."""
    if e < 1:
        raise ValueError("e must be positive")
    npart = p_part(n, p)
    k = crt([1 + p ** e, 1], [npart, n // npart])
    return k if n > 1 else 1


# ---------------------------------------------------------------------------
# reduction modulo a prime ideal above p


@dataclass(frozen=True)
class PrimeIdealData:
    """Prime ideal of Z[zeta_N] above p, for any N whose p'-part divides m.

    ``factor`` is the irreducible factor of Phi_m mod p chosen for the
    residue field (constant term first); zeta_m reduces to its root theta
    and every p-power root of unity reduces to 1.
    """

    p: int
    m: int
    factor: tuple[int, ...]

    @property
    def residue_degree(self) -> int:
        return len(self.factor) - 1


def cyclotomic_factors_mod_p(p: int, m: int) -> list[tuple[int, ...]]:
    """All monic irreducible factors of Phi_m over GF(p), lexicographically sorted
    (coefficients in 0..p-1, constant term first)."""
    if m % p == 0:
        raise ValueError("m must be prime to p")
    f = gf_from_int_poly(list(reversed(cyclotomic_poly(m))), p)
    _, facs = gf_factor_sqf(f, p, ZZ)
    out = [tuple(int(c) % p for c in reversed(g)) for g in facs]
    return sorted(out)


def prime_ideal(p: int, m: int, choice: int = 0) -> PrimeIdealData:
    """Deterministic prime ideal; ``choice`` indexes the sorted factor list."""
    facs = cyclotomic_factors_mod_p(p, m)
    return PrimeIdealData(p, m, facs[choice])


class ResidueField:
    """GF(p)[x]/(factor) with cached powers of theta = x mod factor."""

    def __init__(self, ideal: PrimeIdealData):
        self.ideal = ideal
        self.p = ideal.p
        self.f = ideal.residue_degree
        powers = []
        cur = [1] + [0] * (self.f - 1) if self.f > 0 else []
        for _ in range(ideal.m):
            powers.append(tuple(cur))
            cur = self._mul_x(cur)
        self.theta_powers = tuple(powers)
        self.zero = tuple([0] * self.f)
        self.one = powers[0]

    def _mul_x(self, a: list[int]) -> list[int]:
        p, fac, _f = self.p, self.ideal.factor, self.f
        top = a[-1]
        out = [0] + list(a[:-1])
        if top:
            out = [(x - top * fac[j]) % p for j, x in enumerate(out)]
        return out

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        p, f = self.p, self.f
        conv = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        # reduce high terms using theta^k for k >= f
        out = [0] * f
        for k, c in enumerate(conv):
            if c:
                row = self.theta_powers[k] if k < len(self.theta_powers) else self._pow_row(k)
                for j in range(f):
                    out[j] += c * row[j]
        return tuple(x % p for x in out)

    def _pow_row(self, k: int):
        return self.theta_powers[k % self.ideal.m]

    def scalar(self, t: int):
        return tuple([t % self.p] + [0] * (self.f - 1))

    def element_order(self, a) -> int:
        if a == self.zero:
            raise ZeroDivisionError("zero has no multiplicative order")
        cur = a
        k = 1
        while cur != self.one:
            cur = self.mul(cur, a)
            k += 1
        return k


@functools.lru_cache(maxsize=None)
def residue_field(ideal: PrimeIdealData) -> ResidueField:
    return ResidueField(ideal)


def residue(v, ideal: PrimeIdealData):
    """Image of the algebraic integer v in the residue field of ``ideal``."""
    v = Cyclotomic.coerce(v)
    p, m = ideal.p, ideal.m
    if v.den != 1:
        raise NotAlgebraicInteger(f"{v!r} is not an algebraic integer")
    n = v.n
    a = nu(n, p)
    mn = n // p ** a
    if m % mn:
        raise CycloError(f"p'-part {mn} of Q_{n} does not divide {m}")
    F = residue_field(ideal)
    # zeta_n^i -> theta^(i * (m/mn) * p^-a)
    step = (m // mn) * pow(p ** a, -1, m) % m if m > 1 else 0
    acc = [0] * F.f
    for i, c in enumerate(v.num):
        if c:
            row = F.theta_powers[(i * step) % m]
            for j in range(F.f):
                acc[j] += c * row[j]
    return tuple(x % p for x in acc)
