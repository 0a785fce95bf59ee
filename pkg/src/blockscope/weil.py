"""Explicit value formulas for unitary Weil characters and SL2(2^f)
semisimple characters, used as oracles independent of the Dixon tables.

Field elements of GF(p^k) are coded as integers whose base-p digits are the
coefficients of the residue polynomial, constant term first.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from sympy import factorint

from .chartab import Character, char_level, character_table, inner_product, restricted_level
from .cyclo import Cyclotomic, level
from .perm import Group, Permutation, sylow_subgroup
from .verify import CheckOutcome, ProvenStatementViolated


class SizeBoundExceeded(RuntimeError):
    pass


GU_BOUND = 10**6


# ---------------------------------------------------------------------------
# finite fields


def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over GF(p),
    constant term first, found by trial division."""
    def polys(deg):
        for tail in itertools.product(range(p), repeat=deg):
            yield tuple(reversed(tail)) + (1,)

    def divides(d, f):
        r = list(f)
        while len(r) >= len(d):
            c = r[-1]
            if c:
                shift = len(r) - len(d)
                for i, x in enumerate(d):
                    r[shift + i] = (r[shift + i] - c * x) % p
            r.pop()
        return not any(r)

    for f in sorted(polys(k), key=lambda t: t):
        if all(not divides(d, f) for deg in range(1, k // 2 + 1) for d in polys(deg)):
            return f
    raise AssertionError("no irreducible polynomial")


class FiniteField:
    """GF(p^k) with log/antilog tables."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.size = p ** k
        self.modulus = _irreducible(p, k)
        self._add = [[self._digits_add(a, b) for b in range(self.size)] for a in range(self.size)]
        self._neg = [self._digits_neg(a) for a in range(self.size)]
        self.generator = self._find_generator()
        self.exp = [1]
        for _ in range(self.size - 2):
            self.exp.append(self._poly_mul(self.exp[-1], self.generator))
        self.log = {x: i for i, x in enumerate(self.exp)}

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _code(self, digits: Sequence[int]) -> int:
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def _digits_add(self, a, b):
        return self._code([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _digits_neg(self, a):
        return self._code([(-x) % self.p for x in self._digits(a)])

    def _poly_mul(self, a: int, b: int) -> int:
        p, k, f = self.p, self.k, self.modulus
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] += u * v
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k + 1):
                    prod[d - k + i] -= c * f[i]
        return self._code([c % p for c in prod[:k]])

    def _find_generator(self) -> int:
        n = self.size - 1
        for g in range(1, self.size):
            if all(self._poly_pow(g, n // r) != 1 for r in factorint(n)) or n == 1:
                return g
        raise AssertionError("no primitive element")

    def _poly_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._poly_mul(r, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return r

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.size - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero in a finite field")
        return self.exp[(-self.log[a]) % (self.size - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % (self.size - 1)]

    def order(self, a: int) -> int:
        return (self.size - 1) // math.gcd(self.log[a], self.size - 1)


@lru_cache(maxsize=None)
def finite_field(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)


def _prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


# ---------------------------------------------------------------------------
# matrices over GF(q^2)


@dataclass(frozen=True)
class FqMatrix:
    n: int
    q: int
    entries: tuple[int, ...]  # row-major field codes

    @cached_property
    def field(self) -> FiniteField:
        p, f = _prime_power(self.q)
        return finite_field(p, 2 * f)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __mul__(self, other: FqMatrix) -> FqMatrix:
        F, n = self.field, self.n
        out = []
        for i in range(n):
            for j in range(n):
                acc = 0
                for t in range(n):
                    acc = F.add(acc, F.mul(self[i, t], other[t, j]))
                out.append(acc)
        return FqMatrix(n, self.q, tuple(out))

    @classmethod
    def identity(cls, n: int, q: int) -> FqMatrix:
        return cls(n, q, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, n: int, q: int, a: int) -> FqMatrix:
        return cls(n, q, tuple(a if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, q: int, diag: Sequence[int]) -> FqMatrix:
        n = len(diag)
        return cls(n, q, tuple(diag[i] if i == j else 0 for i in range(n) for j in range(n)))

    def act(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Row vector times matrix."""
        F, n = self.field, self.n
        out = []
        for j in range(n):
            acc = 0
            for t in range(n):
                acc = F.add(acc, F.mul(v[t], self[t, j]))
            out.append(acc)
        return tuple(out)


def kernel_dimension(g: FqMatrix, scalar: int) -> int:
    """dim ker(g - scalar * I) by Gaussian elimination."""
    F, n = g.field, g.n
    rows = [[F.sub(g[i, j], scalar) if i == j else g[i, j] for j in range(n)] for i in range(n)]
    rank = 0
    for c in range(n):
        piv = next((r for r in range(rank, n) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][c])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return n - rank


# ---------------------------------------------------------------------------
# GU_n(q) preserving the identity Hermitian form, x -> x^q as conjugation


def _hermitian(F: FiniteField, q: int, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, F.pow(b, q)))
    return acc


def gu_order(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * math.prod(q ** i - (-1) ** i for i in range(1, n + 1))


def _check_bound(n: int, q: int) -> None:
    if gu_order(n, q) > GU_BOUND:
        raise SizeBoundExceeded(f"|GU_{n}({q})| = {gu_order(n, q)} exceeds {GU_BOUND}")


def gu_group_rows(n: int, q: int) -> list[FqMatrix]:
    """All unitary matrices, built row by row from orthonormal vectors."""
    _check_bound(n, q)
    p, f = _prime_power(q)
    F = finite_field(p, 2 * f)
    unit = [v for v in itertools.product(range(F.size), repeat=n) if _hermitian(F, q, v, v) == 1]
    out = []

    def extend(rows):
        if len(rows) == n:
            out.append(FqMatrix(n, q, tuple(x for r in rows for x in r)))
            return
        for v in unit:
            if all(_hermitian(F, q, v, r) == 0 for r in rows):
                extend(rows + [v])

    extend([])
    return sorted(out, key=lambda g: g.entries)


def unitary_reflections(n: int, q: int) -> list[FqMatrix]:
    """x -> x + (w - 1) <x, v> v / <v, v> for non-isotropic v, w of norm 1
    generating the order q+1 subgroup."""
    p, f = _prime_power(q)
    F = finite_field(p, 2 * f)
    w = F.pow(F.generator, q - 1)
    out = set()
    for v in itertools.product(range(F.size), repeat=n):
        nv = _hermitian(F, q, v, v)
        if nv == 0:
            continue
        c = F.mul(F.sub(w, 1), F.inv(nv))
        # matrix acting on row vectors: x M with M[t][j] = delta + c * conj(v_t) * v_j
        entries = []
        for t in range(n):
            for j in range(n):
                e = F.mul(c, F.mul(F.pow(v[t], q), v[j]))
                entries.append(F.add(e, 1) if t == j else e)
        out.add(FqMatrix(n, q, tuple(entries)))
    return sorted(out, key=lambda g: g.entries)


def unitary_transvections(n: int, q: int) -> list[FqMatrix]:
    """x -> x + c <x, u> u for isotropic u != 0 and c + c^q = 0, c != 0."""
    p, f = _prime_power(q)
    F = finite_field(p, 2 * f)
    traceless = [c for c in range(1, F.size) if F.add(c, F.pow(c, q)) == 0]
    out = set()
    for u in itertools.product(range(F.size), repeat=n):
        if not any(u) or _hermitian(F, q, u, u):
            continue
        for c in traceless:
            entries = []
            for t in range(n):
                for j in range(n):
                    e = F.mul(c, F.mul(F.pow(u[t], q), u[j]))
                    entries.append(F.add(e, 1) if t == j else e)
            out.add(FqMatrix(n, q, tuple(entries)))
    return sorted(out, key=lambda g: g.entries)


def gu_generators(n: int, q: int) -> list[FqMatrix]:
    # reflections alone miss part of GU_2(2), which has few non-isotropic lines
    return unitary_reflections(n, q) + unitary_transvections(n, q)


def gu_group(n: int, q: int) -> list[FqMatrix]:
    """Closure of the unitary reflections and transvections."""
    _check_bound(n, q)
    gens = gu_generators(n, q)
    one = FqMatrix.identity(n, q)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda g: g.entries)


def as_permutation_group(elements: Sequence[FqMatrix],
                         generators: Sequence[FqMatrix] | None = None,
                         ) -> tuple[Group, dict[FqMatrix, Permutation]]:
    """Faithful action on the vectors of GF(q^2)^n."""
    g0 = elements[0]
    F, n = g0.field, g0.n
    vectors = list(itertools.product(range(F.size), repeat=n))
    pos = {v: i for i, v in enumerate(vectors)}
    image = {g: Permutation(pos[g.act(v)] for v in vectors) for g in elements}
    gens = [image[g] for g in generators] if generators else list(image.values())
    G = Group(len(vectors), gens, elements=image.values(), bound=len(elements))
    return G, image


# ---------------------------------------------------------------------------
# value formulas


def xi_hat(q: int) -> int:
    """Generator of the order q+1 subgroup of GF(q^2)^x."""
    p, f = _prime_power(q)
    F = finite_field(p, 2 * f)
    return F.pow(F.generator, q - 1)


def weil_value(g: FqMatrix, i: int) -> Cyclotomic:
    """(-1)^n / (q+1) * sum_k xi^(-ik) (-q)^dim ker(g - xi_hat^(-k))."""
    n, q = g.n, g.q
    F = g.field
    h = xi_hat(q)
    terms = []
    for k in range(q + 1):
        dim = kernel_dimension(g, F.pow(h, (-k) % (q + 1)))
        terms.append(((-i * k) % (q + 1), (-q) ** dim))
    total = Cyclotomic.from_exponents(q + 1, terms)
    return total * Fraction((-1) ** n, q + 1)


def sl2_semisimple_value(q: int, i: int, j: int, eps: int = -1) -> Cyclotomic:
    """zeta^(ij) + zeta^(-ij) with zeta a primitive (q - eps)-th root."""
    m = q - eps
    return Cyclotomic.zeta(m, i * j % m) + Cyclotomic.zeta(m, -i * j % m)


# ---------------------------------------------------------------------------
# cross-checks against the Dixon tables


def weil_consistency(n: int, q: int, p: int, seed: int = 0) -> CheckOutcome:
    """The Weil functions of GU_n(q) are irreducible characters of the
    expected degree whose p-level is that of the matching power of the
    linear character of order q + 1."""
    name = f"GU_{n}({q})"
    if p == 2 or (q + 1) % p:
        return CheckOutcome("weil_consistency", name, p, "not_applicable", [])
    elements = gu_group(n, q)
    ok = len(elements) == gu_order(n, q)
    if gu_order(n, q) <= 1000:
        ok &= gu_group_rows(n, q) == elements
    G, image = as_permutation_group(elements, gu_generators(n, q))
    back = {v: k for k, v in image.items()}
    table = character_table(G)
    degree = (q ** n + 1) // (q + 1)
    records, chars = [], []
    for i in range(1, q + 1):
        class_values, constant = [], True
        for c in G.classes:
            vals = {weil_value(back[x], i) for x in c.elements}
            constant &= len(vals) == 1
            class_values.append(weil_value(back[c.representative], i))
        chi = Character(G, class_values)
        chars.append(chi)
        try:
            index = table.index(chi)
        except ValueError:
            index = None
        lev, lev_alpha = level(class_values, p), level([Cyclotomic.zeta(q + 1, i)], p)
        rec = {"i": i, "degree": chi.degree, "expected_degree": degree,
               "class_function": constant, "norm": str(inner_product(chi, chi)),
               "level": lev, "level_alpha": lev_alpha, "table_index": index}
        ok &= (constant and chi.degree == degree and inner_product(chi, chi) == 1
               and lev == lev_alpha and index is not None)
        records.append(rec)
    for a in range(len(chars)):
        for b in range(a + 1, len(chars)):
            ok &= inner_product(chars[a], chars[b]) == 0
    out = CheckOutcome("weil_consistency", name, p, "pass" if ok else "fail", records)
    if not ok:
        raise ProvenStatementViolated(out)
    return out


def sl2_group(q: int) -> tuple[Group, Permutation, Permutation]:
    """SL_2(q), q = 2^f, on the projective line, with generators of the
    split torus (order q - 1) and of a non-split torus (order q + 1)."""
    p, f = _prime_power(q)
    if p != 2:
        raise ValueError("the SL2 oracle needs q a power of 2")
    F = finite_field(2, f)
    points = list(range(q)) + [q]  # q stands for infinity

    def act(a, b, c, d):
        img = []
        for x in points:
            if x == q:
                y = q if c == 0 else F.mul(a, F.inv(c))
            else:
                num, den = F.add(F.mul(a, x), b), F.add(F.mul(c, x), d)
                y = q if den == 0 else F.mul(num, F.inv(den))
            img.append(y)
        return Permutation(img)

    g = F.generator
    split = act(g, 0, 0, F.inv(g))
    gens = [act(1, 1, 0, 1), split, act(0, 1, 1, 0)]
    G = Group(q + 1, gens)
    nonsplit = next(x for x in G.elements if x.order() == q + 1)
    return G, split, nonsplit


@dataclass
class Sl2Comparison:
    q: int
    eps: int
    degree: int
    literal_match: bool   # values equal zeta^ij + zeta^-ij
    signed_match: bool    # values equal eps' (zeta^ij + zeta^-ij) for one sign eps'
    sign: int | None
    labels: dict[int, int]  # table index -> i
    levels: dict[int, dict[int, tuple[int, int]]]  # p -> index -> (lev chi, lev chi_P)


def sl2_compare(q: int, eps: int, seed: int = 0) -> Sl2Comparison:
    """Compare the characters of degree q + eps with the semisimple value
    formula on the torus of order q - eps."""
    G, split, nonsplit = sl2_group(q)
    t = split if eps == 1 else nonsplit
    m = q - eps
    table = character_table(G)
    idx = G.class_index
    torus = [idx[t ** j] for j in range(1, m)]
    chars = [k for k, chi in enumerate(table) if chi.degree == q + eps]

    def label(k, sign):
        chi = table[k]
        for i in range(1, m):
            if all(chi.values[torus[j - 1]] == sl2_semisimple_value(q, i, j, eps) * sign
                   for j in range(1, m)):
                return i
        return None

    literal = {k: label(k, 1) for k in chars}
    literal_ok = bool(chars) and all(v is not None for v in literal.values())
    sign, labels = None, literal
    for s in (1, -1):
        cand = {k: label(k, s) for k in chars}
        if chars and all(v is not None for v in cand.values()):
            sign, labels = s, cand
            break
    levels = {}
    for p in sorted(r for r in range(3, m + 1, 2) if m % r == 0 and
                    all(r % d for d in range(2, r))):
        P = sylow_subgroup(G, p, seed=seed)
        levels[p] = {k: (char_level(table[k], p), restricted_level(table[k], P, p))
                     for k in chars}
    return Sl2Comparison(q, eps, q + eps, literal_ok, sign is not None, sign,
                         labels, levels)


def sl2_consistency(q: int, seed: int = 0) -> list[CheckOutcome]:
    """Both tori; a failure of the signed comparison or of the level identity
    lev(chi) = lev(chi_P) = lev(alpha^i) is an error."""
    out = []
    for eps in (-1, 1):
        cmp = sl2_compare(q, eps, seed)
        m = q - eps
        records, ok = [], cmp.signed_match
        for p, levs in cmp.levels.items():
            for k, (lev, lev_p) in levs.items():
                i = cmp.labels.get(k)
                lev_alpha = level([Cyclotomic.zeta(m, i)], p) if i else None
                # h = g_j with j the p'-part of the torus order
                j = m
                while j % p == 0:
                    j //= p
                lev_h = level([sl2_semisimple_value(q, i, j, eps)], p) if i else None
                records.append({"character": k, "degree": cmp.degree, "prime": p, "i": i,
                                "level": lev, "level_P": lev_p, "level_alpha": lev_alpha,
                                "level_at_h": lev_h})
                # the Galois-stability argument only separates levels >= 1
                ok &= lev == lev_p and lev_alpha is not None
                ok &= max(lev, 1) == max(lev_alpha, 1) and (lev < 2 or lev_h == lev)
        records.insert(0, {"eps": eps, "torus_order": m, "literal_match": cmp.literal_match,
                           "signed_match": cmp.signed_match, "sign": cmp.sign})
        res = CheckOutcome("sl2_oracle", f"SL_2({q})", 0, "pass" if ok else "fail", records)
        if not ok:
            raise ProvenStatementViolated(res)
        out.append(res)
    return out
