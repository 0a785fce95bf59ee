"""Ordinary character tables and class-function arithmetic.

Tables come from the Dixon–Schneider method: the class matrices of the
centre of the group algebra are simultaneously diagonalised over a prime
field GF(q) with q = 1 mod exp(G), and each eigenvector is turned into a
character whose values are then lifted back to cyclotomic integers from the
multiplicities of the eigenvalues of single elements.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime
from sympy.ntheory import primitive_root

from .cyclo import (
    ONE,
    ZERO,
    BadExponent,
    Cyclotomic,
    conductor,
    galois_apply,
    galois_stabilizer,
    level,
)
from .perm import Group, power_class_map


class LiftingFailure(ArithmeticError):
    """Modular character values did not lift consistently (a bug signal)."""


# ---------------------------------------------------------------------------
# class functions


class Character:
    """A class function on ``group`` with one cyclotomic value per class."""

    __slots__ = ("group", "values", "is_irreducible")

    def __init__(self, group: Group, values: Sequence, is_irreducible: bool = False):
        if len(values) != len(group.classes):
            raise ValueError("one value per conjugacy class expected")
        self.group = group
        self.values = tuple(Cyclotomic.coerce(v) for v in values)
        self.is_irreducible = is_irreducible

    @property
    def degree(self) -> int:
        d = self.values[0].to_fraction()
        if d.denominator != 1:
            raise ValueError("class function with non-integral value at 1")
        return int(d)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i: int) -> Cyclotomic:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def value_at(self, g) -> Cyclotomic:
        return self.values[self.group.class_index[g]]

    def __add__(self, other: Character) -> Character:
        _same_group(self, other)
        return Character(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: Character) -> Character:
        _same_group(self, other)
        return Character(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other) -> Character:
        if isinstance(other, Character):
            _same_group(self, other)
            return Character(self.group, [a * b for a, b in zip(self.values, other.values)])
        return Character(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.group is other.group and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def conjugate(self) -> Character:
        return Character(self.group, [v.conjugate() for v in self.values], self.is_irreducible)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def __repr__(self):
        return f"Character({list(self.values)})"


def _same_group(a: Character, b: Character) -> None:
    if a.group is not b.group:
        raise ValueError("class functions live on different groups")


def trivial_character(G: Group) -> Character:
    return Character(G, [ONE] * len(G.classes), is_irreducible=True)


def regular_character(G: Group) -> Character:
    return Character(G, [Cyclotomic.rational(G.order)] + [ZERO] * (len(G.classes) - 1))


def zero_function(G: Group) -> Character:
    return Character(G, [ZERO] * len(G.classes))


def inner_product(a: Character, b: Character) -> Fraction:
    _same_group(a, b)
    G = a.group
    total = ZERO
    for c, x, y in zip(G.classes, a.values, b.values):
        if x.is_zero() or y.is_zero():
            continue
        total = total + x * y.conjugate() * c.size
    return total.to_fraction() / G.order


# ---------------------------------------------------------------------------
# linear algebra over GF(q)


def _rref(A: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy() % q
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, q) % q
        f = A[:, c].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r])) % q
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _nullspace(A: np.ndarray, q: int) -> np.ndarray:
    """Columns spanning {v : A v = 0}."""
    R, pivots = _rref(A, q)
    n = A.shape[1]
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        out[f, j] = 1
        for i, pc in enumerate(pivots):
            out[pc, j] = -R[i, f] % q
    return out


def _column_echelon(B: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Same column span, with the pivot rows forming an identity block."""
    R, pivots = _rref(B.T, q)
    return R.T.copy(), pivots


def _charpoly(A: np.ndarray, q: int) -> list[int]:
    """Characteristic polynomial mod q via Hessenberg reduction, constant
    term first."""
    H = [[int(x) % q for x in row] for row in A]
    n = len(H)
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        inv = pow(H[m][m - 1], -1, q)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % q
            if not u:
                continue
            Hi, Hm = H[i], H[m]
            for j in range(n):
                Hi[j] = (Hi[j] - u * Hm[j]) % q
            for row in H:
                row[m] = (row[m] + u * row[i]) % q
    polys = [[1]]
    for m in range(n):
        # (x - h_mm) * p_{m}
        prev = polys[m]
        cur = [0] + prev
        for j, c in enumerate(prev):
            cur[j] = (cur[j] - H[m][m] * c) % q
        t = 1
        for i in range(m - 1, -1, -1):
            t = t * H[i + 1][i] % q
            coef = H[i][m] * t % q
            if coef:
                for j, c in enumerate(polys[i]):
                    cur[j] = (cur[j] - coef * c) % q
        polys.append(cur)
    return polys[n]


def _roots(poly: Sequence[int], q: int) -> list[int]:
    x = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * x + c) % q
    return [int(r) for r in np.nonzero(acc == 0)[0]]


def dixon_prime(order: int, exponent: int) -> int:
    bound = 2 * math.isqrt(order - 1) + 2 if order > 1 else 2  # 2 * ceil(sqrt(order))
    q = exponent + 1
    while q <= bound or not isprime(q):
        q += exponent
    return q


# ---------------------------------------------------------------------------
# the table


class CharacterTable:
    """Irr(G) with values indexed by ``group.classes``."""

    def __init__(self, group: Group, irreducibles: Sequence[Character], prime: int):
        self.group = group
        self.classes = group.classes
        self.irreducibles = tuple(irreducibles)
        self.prime = prime
        self._power_maps: dict[int, tuple[int, ...]] = {}

    def __len__(self):
        return len(self.irreducibles)

    def __getitem__(self, i: int) -> Character:
        return self.irreducibles[i]

    def __iter__(self):
        return iter(self.irreducibles)

    @property
    def degrees(self) -> list[int]:
        return [chi.degree for chi in self.irreducibles]

    def power_map(self, k: int) -> tuple[int, ...]:
        k %= self.group.exponent
        if k not in self._power_maps:
            self._power_maps[k] = power_class_map(self.group, k)
        return self._power_maps[k]

    def index(self, chi: Character) -> int:
        return self.irreducibles.index(chi)

    def decompose(self, psi: Character) -> list[Fraction]:
        if psi.group is not self.group:
            raise ValueError("class function lives on another group")
        return [inner_product(psi, chi) for chi in self.irreducibles]


def character_table(G: Group) -> CharacterTable:
    """Character table of G, cached on the group object."""
    table = G.__dict__.get("_character_table")
    if table is None:
        table = _dixon_schneider(G)
        G.__dict__["_character_table"] = table
    return table


def _class_matrix(G: Group, j: int, inverse_class: list[int], q: int) -> np.ndarray:
    classes = G.classes
    idx = G.class_index
    k = len(classes)
    M = np.zeros((k, k), dtype=np.int64)
    ys = classes[inverse_class[j]].elements
    for col, c in enumerate(classes):
        z = c.representative
        for y in ys:
            M[idx[y * z], col] += 1
    return M % q


def _dixon_schneider(G: Group) -> CharacterTable:
    classes = G.classes
    k = len(classes)
    idx = G.class_index
    exp = G.exponent
    q = dixon_prime(G.order, exp)
    inverse_class = [idx[c.representative.inverse()] for c in classes]

    # common eigenvectors of the class matrices
    start = np.eye(k, dtype=np.int64)
    pending = [start] if k > 1 else []
    done: list[np.ndarray] = [] if k > 1 else [start]
    j = 1
    while pending:
        if j >= k:
            raise LiftingFailure("class matrices failed to split the centre")
        M = _class_matrix(G, j, inverse_class, q)
        j += 1
        still = []
        for B in pending:
            B, pivots = _column_echelon(B, q)
            A = (M @ B)[pivots] % q
            for lam in _roots(_charpoly(A, q), q):
                K = _nullspace((A - lam * np.eye(len(pivots), dtype=np.int64)) % q, q)
                V = B @ K % q
                (still if V.shape[1] > 1 else done).append(V)
        pending = still

    sizes = [c.size for c in classes]
    w = primitive_root(q)
    orders = [c.element_order for c in classes]
    # class index of rep^t for t < element order
    powers = []
    for c in classes:
        g = c.representative
        row = []
        x = G.identity
        for _ in range(c.element_order):
            row.append(idx[x])
            x = x * g
        powers.append(row)

    chars = []
    for V in done:
        v = V[:, 0] % q
        omega = [int(x) * pow(int(v[0]), -1, q) % q for x in v]
        s = sum(omega[l] * omega[inverse_class[l]] * pow(sizes[l], -1, q) for l in range(k)) % q
        d2 = G.order * pow(s, -1, q) % q
        d = next((d for d in range(1, math.isqrt(G.order) + 1) if d * d % q == d2), None)
        if d is None:
            raise LiftingFailure("no admissible degree")
        modvals = [d * omega[l] * pow(sizes[l], -1, q) % q for l in range(k)]
        values = []
        for l in range(k):
            o = orders[l]
            z = pow(w, (q - 1) // o, q)
            seq = [modvals[powers[l][t]] for t in range(o)]
            inv_o = pow(o, -1, q)
            mults = []
            for e in range(o):
                zi = pow(z, (-e) % o, q)
                acc = 0
                zt = 1
                for t in range(o):
                    acc += seq[t] * zt
                    zt = zt * zi % q
                m = acc % q * inv_o % q
                if m > d:
                    raise LiftingFailure(f"eigenvalue multiplicity {m} exceeds degree {d}")
                mults.append(m)
            if sum(mults) != d:
                raise LiftingFailure("multiplicities do not add up to the degree")
            values.append(Cyclotomic.from_exponents(o, [(e, m) for e, m in enumerate(mults) if m]))
        chars.append(Character(G, values, is_irreducible=True))

    if sum(chi.degree ** 2 for chi in chars) != G.order:
        raise LiftingFailure("squared degrees do not sum to the group order")

    def key(chi: Character):
        trivial = all(v == ONE for v in chi.values)
        return (chi.degree, not trivial, tuple(v.sort_key(exp) for v in chi.values))

    chars.sort(key=key)
    return CharacterTable(G, chars, q)


# ---------------------------------------------------------------------------
# restriction and induction


def restrict(chi: Character, H: Group) -> Character:
    """chi on the classes of a subgroup H."""
    idx = chi.group.class_index
    return Character(H, [chi.values[idx[c.representative]] for c in H.classes])


def decompose(psi: Character) -> list[int]:
    """Multiplicities of Irr of psi's group in a character psi."""
    mults = character_table(psi.group).decompose(psi)
    if any(m.denominator != 1 or m < 0 for m in mults):
        raise ValueError("not a character: multiplicities are not nonnegative integers")
    return [int(m) for m in mults]


def induce(psi: Character, G: Group) -> Character:
    H = psi.group
    idx = G.class_index
    sums = [ZERO] * len(G.classes)
    for c, v in zip(H.classes, psi.values):
        K = idx[c.representative]
        sums[K] = sums[K] + v * c.size
    return Character(
        G,
        [s * Fraction(c.centralizer_order, H.order) if not s.is_zero() else ZERO
         for c, s in zip(G.classes, sums)],
    )


# ---------------------------------------------------------------------------
# levels and Galois action


def char_level(chi: Character, p: int) -> int:
    return level(chi.values, p)


def classes_meeting(G: Group, H: Group) -> list[int]:
    idx = G.class_index
    return sorted({idx[h] for h in H.elements})


def restricted_level(chi: Character, H: Group, p: int) -> int:
    """Level of {chi(h) : h in H}; needs no character table of H."""
    return level([chi.values[i] for i in classes_meeting(chi.group, H)], p)


def restricted_values(chi: Character, H: Group) -> list[Cyclotomic]:
    return [chi.values[i] for i in classes_meeting(chi.group, H)]


def level_witness(chi: Character, p: int) -> int:
    """A class index where a single value attains the level of chi."""
    target = char_level(chi, p)
    for i, v in enumerate(chi.values):
        if level([v], p) == target:
            return i
    raise AssertionError("level not attained by a single value")


def delta_degrees(psi: Character, p: int) -> dict[int, int]:
    """Level -> degree of the level-i part of psi (only nonzero parts)."""
    table = character_table(psi.group)
    out: dict[int, int] = {}
    for m, chi in zip(decompose(psi), table):
        if m:
            i = char_level(chi, p)
            out[i] = out.get(i, 0) + m * chi.degree
    return out


def delta_i(psi: Character, i: int, p: int) -> Character:
    table = character_table(psi.group)
    out = zero_function(psi.group)
    for m, chi in zip(decompose(psi), table):
        if m and char_level(chi, p) == i:
            out = out + chi * m
    return out


def ell(psi: Character, p: int) -> int | None:
    """Largest level whose part has degree prime to p, or None if there is
    no such level."""
    good = [i for i, d in delta_degrees(psi, p).items() if d % p]
    return max(good) if good else None


def galois_on_character(chi: Character, k: int) -> Character:
    G = chi.group
    if math.gcd(k, G.exponent) != 1:
        raise BadExponent(f"{k} is not prime to exp(G) = {G.exponent}")
    pm = character_table(G).power_map(k)
    return Character(G, [chi.values[j] for j in pm], chi.is_irreducible)


def galois_on_values(chi: Character, k: int) -> Character:
    """Same action computed on the values themselves, as a cross-check."""
    return Character(chi.group, [galois_apply(v, k) for v in chi.values], chi.is_irreducible)


def field_contains_Q4(values: Iterable) -> bool:
    vals = list(values)
    c = conductor(vals)
    if c % 4:
        return False
    return all(k % 4 == 1 for k in galois_stabilizer(vals, c))
