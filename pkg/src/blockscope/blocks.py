"""p-blocks of Irr(G), defect groups, Brauer correspondents and the
exceptional/non-exceptional split of blocks with cyclic defect.

Two characters lie in the same block exactly when their central characters
agree modulo a fixed prime ideal above p, so everything here is driven by
residue vectors of omega_chi(K) = |K| chi(g_K) / chi(1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chartab import Character, CharacterTable, char_level, character_table
from .cyclo import PrimeIdealData, level, nu, p_part, prime_ideal, residue, residue_field
from .perm import (
    Group,
    are_conjugate,
    centralizer,
    element_orbit_meets,
    normalizer,
    p_decomposition,
    subgroup_profile,
    sylow_subgroup,
)


class DefectClassNotFound(RuntimeError):
    pass


class CorrespondentNotFound(RuntimeError):
    pass


class AmbiguousCorrespondent(RuntimeError):
    pass


class NotCyclicDefect(ValueError):
    pass


Residue = tuple[int, ...]


@dataclass(eq=False)
class Block:
    p: int
    char_indices: tuple[int, ...]
    defect: int
    defect_group: Group
    residues: tuple[Residue, ...]
    is_principal: bool
    heights: dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.char_indices)

    def __contains__(self, i: int) -> bool:
        return i in self.char_indices

    @property
    def height_zero(self) -> tuple[int, ...]:
        return tuple(i for i in self.char_indices if self.heights[i] == 0)


@dataclass(frozen=True)
class CyclicDefectData:
    exceptional: frozenset[int]
    nonexceptional: frozenset[int]
    e: int
    lambda_count: int
    status: str  # "classified" or "indeterminate"


def ideal_for(G: Group, p: int, choice: int = 0) -> PrimeIdealData:
    """Prime ideal above p fitting every value of G and of its subgroups."""
    return prime_ideal(p, G.exponent // p_part(G.exponent, p), choice)


def central_character_residues(chi: Character, table: CharacterTable,
                               ideal: PrimeIdealData) -> tuple[Residue, ...]:
    d = chi.degree
    return tuple(
        residue(v * Fraction(c.size, d), ideal) for c, v in zip(table.classes, chi.values)
    )


def p_blocks(G: Group, p: int, ideal: PrimeIdealData | None = None, seed: int = 0) -> list[Block]:
    """Blocks of G, principal first, then by least character index."""
    table = character_table(G)
    ideal = ideal or ideal_for(G, p)
    groups: dict[tuple[Residue, ...], list[int]] = {}
    for i, chi in enumerate(table):
        groups.setdefault(central_character_residues(chi, table, ideal), []).append(i)
    trivial = next(i for i, chi in enumerate(table) if chi.degree == 1 and
                   all(v.is_rational() and v.to_fraction() == 1 for v in chi.values))
    order_p = nu(G.order, p)
    blocks = []
    for res, members in groups.items():
        nus = {i: nu(table[i].degree, p) for i in members}
        low = min(nus.values())
        defect = order_p - low
        block = Block(
            p=p,
            char_indices=tuple(members),
            defect=defect,
            defect_group=None,  # filled below
            residues=res,
            is_principal=trivial in members,
            heights={i: v - low for i, v in nus.items()},
        )
        block.defect_group = defect_group(G, block, seed=seed)
        blocks.append(block)
    blocks.sort(key=lambda b: (not b.is_principal, b.char_indices[0]))
    return blocks


def defect_and_heights(B: Block, table: CharacterTable) -> tuple[int, dict[int, int]]:
    order_p = nu(table.group.order, B.p)
    nus = {i: nu(table[i].degree, B.p) for i in B.char_indices}
    low = min(nus.values())
    return order_p - low, {i: v - low for i, v in nus.items()}


def defect_group(G: Group, B: Block, seed: int = 0) -> Group:
    """Sylow p-subgroup of C_G(x) for a class of x with nonzero residue and
    |C_G(x)|_p = p^d(B); p-regular classes are tried first."""
    p = B.p
    zero = tuple([0] * len(B.residues[0]))
    order = sorted(range(len(G.classes)),
                   key=lambda i: (G.classes[i].element_order % p == 0, i))
    for i in order:
        c = G.classes[i]
        if B.residues[i] != zero and nu(c.centralizer_order, p) == B.defect:
            C = centralizer(G, [c.representative])
            D = sylow_subgroup(C, p, seed=seed)
            D = G.subgroup(elements=D.elements, generators=D.generators)
            if D.order != p ** B.defect:
                raise DefectClassNotFound("Sylow subgroup of the wrong order")
            return D
    raise DefectClassNotFound(f"no defect class for block {B.char_indices}")


# ---------------------------------------------------------------------------
# Brauer's first main theorem


@dataclass(eq=False)
class Correspondence:
    normalizer: Group
    block: Block          # the block b of N_G(D)
    blocks_of_normalizer: list[Block]


def induced_residues(G: Group, N: Group, b: Block, ideal: PrimeIdealData) -> tuple[Residue, ...]:
    """lambda_b^G(K) = lambda_b(K cap N), summed over the N-classes in K."""
    F = residue_field(ideal)
    idx = G.class_index
    out = [F.zero] * len(G.classes)
    for L, r in zip(N.classes, b.residues):
        K = idx[L.representative]
        out[K] = F.add(out[K], r)
    return tuple(out)


def brauer_correspondent(G: Group, B: Block, D: Group | None = None,
                         ideal: PrimeIdealData | None = None,
                         N: Group | None = None,
                         normalizer_blocks: list[Block] | None = None,
                         seed: int = 0) -> Correspondence:
    D = D or B.defect_group
    ideal = ideal or ideal_for(G, B.p)
    N = N or normalizer(G, D)
    nblocks = normalizer_blocks or p_blocks(N, B.p, ideal, seed=seed)
    hits = [b for b in nblocks
            if b.defect == B.defect and induced_residues(G, N, b, ideal) == B.residues]
    if not hits:
        raise CorrespondentNotFound(f"no block of N_G(D) induces to {B.char_indices}")
    if len(hits) > 1:
        raise AmbiguousCorrespondent(f"{len(hits)} blocks of N_G(D) induce to {B.char_indices}")
    return Correspondence(N, hits[0], nblocks)


def defect_group_classes(G: Group, blocks: Sequence[Block]) -> list[list[Block]]:
    """Blocks grouped by the conjugacy class of their defect groups."""
    out: list[list[Block]] = []
    for B in blocks:
        for cls in out:
            if are_conjugate(G, cls[0].defect_group, B.defect_group) is not None:
                cls.append(B)
                break
        else:
            out.append([B])
    return out


@dataclass
class FirstMainCheck:
    defect_order: int
    blocks_of_group: tuple[tuple[int, ...], ...]
    blocks_of_normalizer: tuple[tuple[int, ...], ...]
    bijective: bool


def first_main_check(G: Group, blocks: Sequence[Block], p: int,
                     ideal: PrimeIdealData | None = None, seed: int = 0) -> list[FirstMainCheck]:
    """b -> b^G between blocks of N_G(D) with defect group D and blocks of G
    with defect group conjugate to D, once per class of defect groups."""
    ideal = ideal or ideal_for(G, p)
    results = []
    for cls in defect_group_classes(G, blocks):
        D = cls[0].defect_group
        N = normalizer(G, D)
        nblocks = p_blocks(N, p, ideal, seed=seed)
        # every block of N has a defect group containing D, so order decides
        local = [b for b in nblocks if b.defect == cls[0].defect]
        images = []
        ok = True
        for b in local:
            res = induced_residues(G, N, b, ideal)
            match = [B for B in blocks if B.residues == res]
            if len(match) != 1:
                ok = False
                continue
            B = match[0]
            if B not in cls:
                ok = False
            images.append(B)
        ok = ok and len(images) == len(local) == len(cls) and \
            len({id(B) for B in images}) == len(images)
        results.append(FirstMainCheck(
            defect_order=D.order,
            blocks_of_group=tuple(B.char_indices for B in cls),
            blocks_of_normalizer=tuple(b.char_indices for b in local),
            bijective=ok,
        ))
    return results


# ---------------------------------------------------------------------------
# cyclic defect


def cyclic_defect_classify(G: Group, B: Block, table: CharacterTable | None = None) -> CyclicDefectData:
    p = B.p
    D = B.defect_group
    is_cyclic, _, _ = subgroup_profile(D)
    if D.order == 1 or not is_cyclic:
        raise NotCyclicDefect("defect group is not a nontrivial cyclic group")
    table = table or character_table(G)
    a = B.defect
    q = p ** a
    size = len(B)
    regular = [i for i, c in enumerate(G.classes) if c.element_order % p]
    groups: dict[tuple, list[int]] = {}
    for i in B.char_indices:
        key = (table[i].degree,) + tuple(table[i].values[j] for j in regular)
        groups.setdefault(key, []).append(i)
    families = [g for g in groups.values() if len(g) > 1]
    members = frozenset(B.char_indices)

    def indeterminate(e: int = 0, lam: int = 0) -> CyclicDefectData:
        return CyclicDefectData(frozenset(), frozenset(), e, lam, "indeterminate")

    if not families:
        # a single exceptional character: only the counts can be checked
        return indeterminate(q - 1, 1)
    if len(families) > 1:
        return indeterminate()
    family = frozenset(families[0])
    if len(family) == size:
        # e = 1: the single non-exceptional character shares the p-regular values
        e = 1
        rational = [i for i in family if char_level(table[i], p) == 0]
        if p == 2 or len(rational) != 1 or q - 1 != size - 1:
            return indeterminate(e, q - 1)
        nonexc = frozenset(rational)
    else:
        nonexc = members - family
        e = len(nonexc)
    exc = members - nonexc
    return CyclicDefectData(exc, nonexc, e, len(exc), "classified")


def level_element_check(G: Group, B: Block, chi: Character, p: int) -> bool | None:
    """Every class where chi attains its level has p-part generating a
    conjugate of the cyclic defect group.  None when chi is p-rational."""
    lev = char_level(chi, p)
    if lev < 1:
        return None
    D = B.defect_group
    for c, v in zip(G.classes, chi.values):
        if level([v], p) != lev:
            continue
        gp, _ = p_decomposition(c.representative, p)
        if gp.order() != D.order or not element_orbit_meets(G, gp, D):
            return False
    return True
