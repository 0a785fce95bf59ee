"""Permutation groups small enough to enumerate.

Points are 0..n-1.  A permutation is its image tuple, and products are
composed left to right: ``(a * b)[i] == b[a[i]]``, so ``x ** g`` style
conjugation is ``g^-1 x g``.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_MAX_ORDER = 20_000


class MalformedPermutation(ValueError):
    pass


class EnumerationBoundExceeded(RuntimeError):
    pass


def max_order() -> int:
    env = os.environ.get("BLOCKSCOPE_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


class Permutation(tuple):
    """Image tuple of a bijection of {0, ..., n-1}."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()):
        return tuple.__new__(cls, images)

    @classmethod
    def checked(cls, images: Sequence[int], degree: int | None = None) -> Permutation:
        images = list(images)
        n = len(images) if degree is None else degree
        if len(images) != n or sorted(images) != list(range(n)):
            raise MalformedPermutation(f"not a permutation of {n} points: {images}")
        return cls(images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls.checked(img, n)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: Permutation) -> Permutation:
        return tuple.__new__(Permutation, map(other.__getitem__, self))

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return tuple.__new__(Permutation, inv)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(len(self))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: Permutation) -> Permutation:
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def order(self) -> int:
        seen = [False] * len(self)
        result = 1
        for start in range(len(self)):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self[i]
                length += 1
            result = result * length // math.gcd(result, length)
        return result

    def __repr__(self):
        cycles = []
        seen = set()
        for s in range(len(self)):
            if s in seen or self[s] == s:
                continue
            cyc = [s]
            seen.add(s)
            j = self[s]
            while j != s:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) or "()"


@dataclass(frozen=True)
class ConjClass:
    representative: Permutation
    size: int
    centralizer_order: int
    element_order: int
    elements: tuple[Permutation, ...]


class Group:
    """A permutation group with all of its elements enumerated.

    Subgroups built through :meth:`subgroup` keep a reference to their
    parent and hold a subset of the parent's element objects.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        elements: Iterable[Permutation] | None = None,
        parent: Group | None = None,
        bound: int | None = None,
    ):
        self.degree = degree
        self.generators = tuple(Permutation(g) for g in generators)
        self.parent = parent
        self.identity = Permutation.identity(degree)
        if elements is None:
            elements = _closure(self.identity, self.generators, bound or max_order())
        self.elements: tuple[Permutation, ...] = tuple(sorted(elements))
        self.element_set = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"<Group degree={self.degree} order={self.order}>"

    # derived data, computed on first use --------------------------------

    @cached_property
    def classes(self) -> tuple[ConjClass, ...]:
        return tuple(conjugacy_classes(self))

    @cached_property
    def class_index(self) -> dict[Permutation, int]:
        """Element -> index of its conjugacy class in :attr:`classes`."""
        out = {}
        for i, c in enumerate(self.classes):
            for x in c.elements:
                out[x] = i
        return out

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(c.element_order for c in self.classes))

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def subgroup(self, elements: Iterable[Permutation] | None = None,
                 generators: Sequence[Permutation] | None = None) -> Group:
        """Subgroup view given by an element set or by generators."""
        if elements is None:
            elements = _closure(self.identity, list(generators or ()), self.order)
        elements = frozenset(elements)
        if generators is None:
            generators = _small_generating_set(self.identity, elements)
        return Group(self.degree, generators, elements, parent=self)

    def conjugate_subgroup(self, H: Group, g: Permutation) -> Group:
        ginv = g.inverse()
        return self.subgroup(
            elements=(ginv * h * g for h in H.elements),
            generators=[ginv * h * g for h in H.generators],
        )


def _closure(identity: Permutation, gens: Sequence[Permutation], bound: int) -> set[Permutation]:
    elements = {identity}
    frontier = [identity]
    gens = [g for g in gens if not g.is_identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
        if len(elements) > bound:
            raise EnumerationBoundExceeded(
                f"group has more than {bound} elements (raise BLOCKSCOPE_MAX_ORDER)"
            )
        frontier = nxt
    return elements


def _small_generating_set(identity: Permutation, elements: frozenset[Permutation]):
    gens: list[Permutation] = []
    span = {identity}
    # high-order elements first keeps the list short
    for x in sorted(elements, key=lambda g: (-g.order(), g)):
        if x in span:
            continue
        gens.append(x)
        span = _closure(identity, gens, len(elements))
        if len(span) == len(elements):
            break
    return gens


def group_from_generators(degree: int, gens: Sequence[Sequence[int]],
                          bound: int | None = None) -> Group:
    perms = [Permutation.checked(g, degree) for g in gens]
    return Group(degree, perms, bound=bound)


def conjugacy_classes(G: Group) -> list[ConjClass]:
    """Classes ordered by element order, class size, then least element."""
    seen: set[Permutation] = set()
    gens = [g for g in G.generators if not g.is_identity()]
    inv = [g.inverse() for g in gens]
    found = []
    for x in G.elements:
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g, gi in zip(gens, inv):
                    z = gi * y * g
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        seen |= orbit
        members = tuple(sorted(orbit))
        found.append(
            ConjClass(
                representative=members[0],
                size=len(members),
                centralizer_order=G.order // len(members),
                element_order=members[0].order(),
                elements=members,
            )
        )
    found.sort(key=lambda c: (c.element_order, c.size, c.representative))
    return found


def centralizer(G: Group, S: Iterable[Permutation]) -> Group:
    S = [s for s in S if not s.is_identity()]
    return G.subgroup(elements=(g for g in G.elements if all(s * g == g * s for s in S)))


def normalizer(G: Group, H: Group) -> Group:
    hs = H.element_set
    gens = [h for h in H.generators if not h.is_identity()]
    return G.subgroup(
        elements=(g for g in G.elements
                  if all(g.inverse() * h * g in hs for h in gens))
    )


def p_decomposition(g: Permutation, p: int) -> tuple[Permutation, Permutation]:
    """(g_p, g_p') as powers of g via CRT on the exponents."""
    n = g.order()
    npart = 1
    while n % (npart * p) == 0:
        npart *= p
    rest = n // npart
    if rest == 1:
        return g, Permutation.identity(len(g))
    if npart == 1:
        return Permutation.identity(len(g)), g
    u = rest * pow(rest, -1, npart)   # 1 mod npart, 0 mod rest
    v = npart * pow(npart, -1, rest)  # 0 mod npart, 1 mod rest
    return g ** (u % n), g ** (v % n)


def sylow_subgroup(G: Group, p: int, seed: int = 0) -> Group:
    """Grow a p-subgroup inside successive normalizers until its index in
    the normalizer is prime to p."""
    rng = random.Random(seed)
    target = 1
    while G.order % (target * p) == 0:
        target *= p
    P = G.subgroup(elements=[G.identity], generators=[])
    while P.order < target:
        N = normalizer(G, P)
        pool = list(N.elements)
        rng.shuffle(pool)
        for y in pool:
            yp, _ = p_decomposition(y, p)
            if yp not in P:
                P = G.subgroup(generators=list(P.generators) + [yp])
                break
        else:  # pragma: no cover - excluded by Cauchy's theorem
            raise AssertionError("normalizer ascent stalled")
    return P


def power_class_map(G: Group, k: int, classes: Sequence[ConjClass] | None = None) -> tuple[int, ...]:
    classes = G.classes if classes is None else classes
    index = G.class_index
    return tuple(index[c.representative ** (k % c.element_order)] for c in classes)


def subgroup_profile(H: Group) -> tuple[bool, int, bool]:
    orders = [c.element_order for c in H.classes]
    return (max(orders) == H.order, math.lcm(*orders), H.is_abelian)


def are_conjugate(G: Group, A: Group, B: Group) -> Permutation | None:
    """Some g with A^g = B, or None."""
    if A.order != B.order:
        return None
    if A.element_set == B.element_set:
        return G.identity
    bset = B.element_set
    gens = [a for a in A.generators if not a.is_identity()]
    for g in G.elements:
        gi = g.inverse()
        if all(gi * a * g in bset for a in gens):
            return g
    return None


def element_orbit_meets(G: Group, x: Permutation, H: Group) -> bool:
    """True if some G-conjugate of x lies in H."""
    c = G.class_index[x]
    return any(G.class_index[h] == c for h in H.elements)
