"""Statement-level checks over a corpus of groups.

Every check returns a :class:`CheckOutcome` for one (group, prime,
statement).  Proven statements that fail raise
:class:`ProvenStatementViolated`; conjectural statements that fail are
recorded with verdict ``finding``.  Observations that are interesting but
not a verdict (a level dropping on the defect group, say) are collected as
report findings and never change the exit status.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .chartab import (
    char_level,
    character_table,
    classes_meeting,
    delta_degrees,
    field_contains_Q4,
    induce,
    inner_product,
    level_witness,
    restrict,
)
from .cyclo import conductor, field_degree, level, nu
from .perm import Group, normalizer, subgroup_profile, sylow_subgroup

PROVEN = (
    "thm_A", "lem_3_1", "cor_3_2", "lem_3_3", "lem_4_2", "lem_4_3", "lem_6_3",
    "cyclic_structure", "brauer_first_main",
)
CONJECTURAL = ("conj_main", "conj_ntC", "amn_consequence", "cons_7_2", "cons_7_3", "cons_7_4")
STATEMENTS = (
    "conj_main", "conj_ntC", "thm_A", "lem_3_1", "cor_3_2", "lem_3_3", "lem_4_2",
    "lem_4_3", "lem_6_3", "amn_consequence", "cons_7_2", "cons_7_3", "cons_7_4",
    "cyclic_structure", "brauer_first_main",
)
VERDICTS = ("pass", "fail", "not_applicable", "finding")
LEMMA_4_3_CAP = 500
LEMMA_6_3_CAP = 300


class ProvenStatementViolated(AssertionError):
    def __init__(self, outcome: CheckOutcome):
        super().__init__(
            f"{outcome.statement_id} violated on {outcome.group_name} at p={outcome.prime}"
        )
        self.outcome = outcome


@dataclass
class CheckOutcome:
    statement_id: str
    group_name: str
    prime: int
    verdict: str
    scope: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "group": self.group_name,
            "prime": self.prime,
            "verdict": self.verdict,
            "scope": self.scope,
        }


def _outcome(sid: str, ctx: PrimeContext, records: list[dict], ok: bool) -> CheckOutcome:
    if not records:
        verdict = "not_applicable"
    elif ok:
        verdict = "pass"
    else:
        verdict = "fail" if sid in PROVEN else "finding"
    out = CheckOutcome(sid, ctx.name, ctx.p, verdict, records)
    if verdict == "fail":
        raise ProvenStatementViolated(out)
    return out


# ---------------------------------------------------------------------------
# shared data for one (group, prime)


@dataclass(eq=False)
class Local:
    """One class of defect groups with its normalizer and blocks there."""

    D: Group
    N: Group
    blocks_of_group: list   # Block objects of G
    blocks_of_normalizer: list


class PrimeContext:
    def __init__(self, name: str, G: Group, p: int, seed: int = 0):
        from .blocks import ideal_for, p_blocks

        self.name, self.G, self.p, self.seed = name, G, p, seed
        self.table = character_table(G)
        self.ideal = ideal_for(G, p)
        self.blocks = p_blocks(G, p, self.ideal, seed=seed)
        self.findings: list[dict] = []
        self._levels: dict[int, int] = {}
        self._restricted: dict[tuple[int, int], int] = {}

    def level(self, i: int) -> int:
        if i not in self._levels:
            self._levels[i] = char_level(self.table[i], self.p)
        return self._levels[i]

    def restricted_level(self, i: int, H: Group) -> int:
        key = (i, id(H))
        if key not in self._restricted:
            chi = self.table[i]
            self._restricted[key] = level(
                [chi.values[j] for j in self._meeting(H)], self.p)
        return self._restricted[key]

    def _meeting(self, H: Group) -> list[int]:
        cache = self.__dict__.setdefault("_meeting_cache", {})
        if id(H) not in cache:
            cache[id(H)] = (H, classes_meeting(self.G, H))
        return cache[id(H)][1]

    @cached_property
    def sylow(self) -> Group:
        return sylow_subgroup(self.G, self.p, seed=self.seed)

    @cached_property
    def locals(self) -> list[Local]:
        from .blocks import defect_group_classes, p_blocks

        out = []
        for cls in defect_group_classes(self.G, self.blocks):
            D = cls[0].defect_group
            N = normalizer(self.G, D)
            out.append(Local(D, N, cls, p_blocks(N, self.p, self.ideal, seed=self.seed)))
        return out

    def local_of(self, B) -> Local:
        return next(loc for loc in self.locals if any(B is X for X in loc.blocks_of_group))

    @cached_property
    def correspondents(self) -> dict[int, Any]:
        """id(block of G) -> its Brauer correspondent in N_G(D)."""
        from .blocks import brauer_correspondent

        out = {}
        for loc in self.locals:
            for B in loc.blocks_of_group:
                out[id(B)] = brauer_correspondent(
                    self.G, B, D=loc.D, ideal=self.ideal, N=loc.N,
                    normalizer_blocks=loc.blocks_of_normalizer, seed=self.seed).block
        return out

    def block_of(self, i: int):
        return next(B for B in self.blocks if i in B.char_indices)

    def note(self, kind: str, **data) -> None:
        self.findings.append({"kind": kind, "group": self.name, "prime": self.p, **data})


# ---------------------------------------------------------------------------
# conjectures


def check_conjecture_main(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    for B in ctx.blocks:
        loc = ctx.local_of(B)
        for i in B.height_zero:
            lev = ctx.level(i)
            if lev == 1:
                lev_n = ctx.restricted_level(i, loc.N)
                if lev_n == 0:
                    ctx.note("level_one_drops", character=i, degree=ctx.table[i].degree,
                             level=lev, level_N=lev_n, defect_group_order=loc.D.order)
            if lev < 2:
                continue
            lev_n = ctx.restricted_level(i, loc.N)
            lev_d = ctx.restricted_level(i, loc.D)
            records.append({"character": i, "degree": ctx.table[i].degree, "level": lev,
                            "level_N": lev_n, "level_D": lev_d,
                            "defect_group_order": loc.D.order})
            ok &= lev_n == lev
            if lev_d != lev and lev_n == lev:
                ctx.note("level_differs_on_defect_group", character=i,
                         degree=ctx.table[i].degree, level=lev, level_D=lev_d, level_N=lev_n,
                         defect_group_order=loc.D.order)
    return _outcome("conj_main", ctx, records, ok)


def check_conjecture_ntC(ctx: PrimeContext) -> CheckOutcome:
    p, P = ctx.p, ctx.sylow
    records, ok = [], True
    for i, chi in enumerate(ctx.table):
        if chi.degree % p == 0:
            continue
        a = ctx.level(i)
        if a < 1:
            continue
        lev_p = ctx.restricted_level(i, P)
        good = lev_p == a or a == 1
        rec = {"character": i, "degree": chi.degree, "level": a, "level_P": lev_p}
        if p == 2 and a >= 2:
            q4 = field_contains_Q4([chi.values[j] for j in ctx._meeting(P)])
            rec["contains_Q4"] = q4
            good &= q4
        records.append(rec)
        ok &= good
    return _outcome("conj_ntC", ctx, records, ok)


# ---------------------------------------------------------------------------
# theorems and lemmas


def check_theorem_A(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    for B in ctx.blocks:
        loc = ctx.local_of(B)
        if not subgroup_profile(loc.D)[0]:
            _note_capture(ctx, B, loc)
            continue
        for i in B.char_indices:
            lev, lev_n = ctx.level(i), ctx.restricted_level(i, loc.N)
            records.append({"character": i, "level": lev, "level_N": lev_n,
                            "defect_group_order": loc.D.order})
            ok &= lev == lev_n
    return _outcome("thm_A", ctx, records, ok)


def _note_capture(ctx: PrimeContext, B, loc: Local) -> None:
    """Open question for non-cyclic defect: is the level of chi always
    attained on N_G(D)?  Recorded per block, never a verdict."""
    levels = {i: ctx.level(i) for i in B.char_indices if ctx.level(i) >= 1}
    if not levels:
        return
    missed = sorted(i for i, lev in levels.items() if ctx.restricted_level(i, loc.N) < lev)
    ctx.note("level_attained_on_normalizer", block=list(B.char_indices),
             defect_group_order=loc.D.order, captured=not missed, missed=missed)


def check_lemma_3_1(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    for B in ctx.blocks:
        bound = nu(subgroup_profile(B.defect_group)[1], ctx.p)
        for i in B.char_indices:
            records.append({"character": i, "level": ctx.level(i), "bound": bound})
            ok &= ctx.level(i) <= bound
    return _outcome("lem_3_1", ctx, records, ok)


def check_corollary_3_2(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    for B in ctx.blocks:
        if B.defect == 0 or (B.defect == 1 and ctx.p == 2):
            for i in B.char_indices:
                records.append({"character": i, "defect": B.defect, "level": ctx.level(i)})
                ok &= ctx.level(i) == 0
    return _outcome("cor_3_2", ctx, records, ok)


def check_lemma_3_3(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    if ctx.p != 2:
        for B in ctx.blocks:
            if B.defect != 1:
                continue
            loc = ctx.local_of(B)
            for i in B.char_indices:
                lev, lev_n = ctx.level(i), ctx.restricted_level(i, loc.N)
                records.append({"character": i, "level": lev, "level_N": lev_n})
                ok &= lev in (0, 1) and lev == lev_n
    return _outcome("lem_3_3", ctx, records, ok)


def _sylow_deltas(ctx: PrimeContext) -> dict[int, tuple[int, dict[int, int]]]:
    cache = ctx.__dict__.setdefault("_sylow_deltas", {})
    if not cache:
        P = ctx.sylow
        for i, chi in enumerate(ctx.table):
            psi = restrict(chi, P)
            cache[i] = (level(psi.values, ctx.p), delta_degrees(psi, ctx.p))
    return cache


def check_lemma_4_2(ctx: PrimeContext) -> CheckOutcome:
    p = ctx.p
    records, ok = [], True
    for i, (a, deltas) in _sylow_deltas(ctx).items():
        start = max(2, a + 1)
        bad = {lv: d for lv, d in deltas.items() if lv >= start and d % p}
        records.append({"character": i, "level_P": a,
                        "delta_degrees": {str(k): v for k, v in sorted(deltas.items())}})
        ok &= not bad
    return _outcome("lem_4_2", ctx, records, ok)


def _intermediate_subgroups(G: Group, P: Group, cap: int) -> list[Group]:
    """Subgroups <P, x>, one x per double coset PxP, deduplicated."""
    seen_elems: set = set()
    found: dict[frozenset, Group] = {}
    Pel = P.elements
    for x in G.elements:
        if x in seen_elems:
            continue
        for a in Pel:
            ax = a * x
            for b in Pel:
                seen_elems.add(ax * b)
        K = G.subgroup(generators=list(P.generators) + [x])
        if K.element_set not in found:
            found[K.element_set] = K
            if len(found) >= cap:
                break
    return sorted(found.values(), key=lambda K: (K.order, K.elements))


def check_lemma_4_3(ctx: PrimeContext) -> CheckOutcome:
    p, G, P = ctx.p, ctx.G, ctx.sylow
    deltas = _sylow_deltas(ctx)
    records, ok = [], True
    for K in _intermediate_subgroups(G, P, LEMMA_4_3_CAP):
        PK = K.subgroup(elements=P.elements, generators=P.generators)
        for j, psi in enumerate(character_table(K)):
            ind = induce(psi, G)
            # chi = psi^G must be irreducible of p'-degree
            if ind.degree % p == 0 or inner_product(ind, ind) != 1:
                continue
            i = ctx.table.index(ind)
            up = deltas[i][1]
            down = delta_degrees(restrict(psi, PK), p)
            levels = {lv for lv in list(up) + list(down) if lv >= 2}
            agree = all((up.get(lv, 0) % p != 0) == (down.get(lv, 0) % p != 0) for lv in levels)
            records.append({"subgroup_order": K.order, "psi": j, "character": i,
                            "levels_compared": sorted(levels), "agree": agree})
            ok &= agree
    return _outcome("lem_4_3", ctx, records, ok)


def check_lemma_6_3(ctx: PrimeContext) -> CheckOutcome:
    p = ctx.p
    reps = {}
    for i, chi in enumerate(ctx.table):
        key = frozenset(chi.values)
        reps.setdefault(key, i)
    idx = sorted(i for i in reps.values() if conductor(ctx.table[i].values) > 1)
    records, ok = [], True
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if len(records) >= LEMMA_6_3_CAP:
                break
            i, j = idx[a], idx[b]
            union = list(ctx.table[i].values) + list(ctx.table[j].values)
            lev = level(union, p)
            want = max(ctx.level(i), ctx.level(j))
            records.append({"characters": [i, j], "level_union": lev, "max_level": want})
            ok &= lev == want
    return _outcome("lem_6_3", ctx, records, ok)


def check_cyclic_structure(ctx: PrimeContext) -> CheckOutcome:
    from .blocks import cyclic_defect_classify, level_element_check

    p = ctx.p
    records, ok = [], True
    for B in ctx.blocks:
        if B.defect == 0 or not subgroup_profile(B.defect_group)[0]:
            continue
        data = cyclic_defect_classify(ctx.G, B, ctx.table)
        q = p ** B.defect
        rec = {"block": list(B.char_indices), "defect": B.defect, "status": data.status,
               "e": data.e, "exceptional": sorted(data.exceptional),
               "nonexceptional": sorted(data.nonexceptional)}
        if data.status == "classified":
            good = data.e + (q - 1) // data.e == len(B) and (q - 1) % data.e == 0
            good &= p == 2 or (p - 1) % data.e == 0
            good &= all(ctx.level(i) == 0 for i in data.nonexceptional)
            checks = {}
            for i in sorted(data.exceptional):
                if ctx.level(i) >= 1:
                    checks[str(i)] = level_element_check(ctx.G, B, ctx.table[i], p)
            good &= all(checks.values())
            rec["level_element_check"] = checks
        else:
            es = [e for e in range(1, p) if (p - 1) % e == 0 and e + (q - 1) // e == len(B)]
            good = bool(es) if p > 2 else len(B) == q
            rec["count_identity"] = good
        records.append(rec)
        ok &= good
    return _outcome("cyclic_structure", ctx, records, ok)


def check_brauer_first_main(ctx: PrimeContext) -> CheckOutcome:
    from .blocks import induced_residues

    records, ok = [], True
    for loc in ctx.locals:
        d = loc.blocks_of_group[0].defect
        local = [b for b in loc.blocks_of_normalizer if b.defect == d]
        images = []
        for b in local:
            res = induced_residues(ctx.G, loc.N, b, ctx.ideal)
            images.append([k for k, B in enumerate(ctx.blocks) if B.residues == res])
        targets = sorted(ctx.blocks.index(B) for B in loc.blocks_of_group)
        flat = sorted(k for im in images for k in im)
        good = all(len(im) == 1 for im in images) and flat == targets
        records.append({"defect_group_order": loc.D.order, "normalizer_order": loc.N.order,
                        "blocks_of_normalizer": [list(b.char_indices) for b in local],
                        "images": images, "blocks_of_group": targets, "bijective": good})
        ok &= good
    return _outcome("brauer_first_main", ctx, records, ok)


# ---------------------------------------------------------------------------
# consequences of the conjecture


def check_amn_consequence(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    corr = ctx.correspondents
    for B in ctx.blocks:
        loc = ctx.local_of(B)
        b = corr[id(B)]
        ntab = character_table(loc.N)
        up = [ctx.level(i) for i in B.height_zero]
        down = [char_level(ntab[j], ctx.p) for j in b.height_zero]
        up_n = [ctx.restricted_level(i, loc.N) for i in B.height_zero if ctx.level(i) >= 2]
        down_hi = [lv for lv in down if lv >= 2]
        count_ok = len(up) == len(down)
        levels_ok = sorted(up) == sorted(down)
        restricted_ok = sorted(up_n) == sorted(down_hi)
        records.append({
            "block": list(B.char_indices), "correspondent": list(b.char_indices),
            "height_zero_count": [len(up), len(down)],
            "levels": [sorted(up), sorted(down)],
            "restricted_levels": [sorted(up_n), sorted(down_hi)],
            "count_equal": count_ok, "levels_equal": levels_ok,
            "restricted_equal": restricted_ok,
        })
        ok &= count_ok and levels_ok and restricted_ok
    return _outcome("amn_consequence", ctx, records, ok)


def check_consequence_7_2(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    for B in ctx.blocks:
        loc = ctx.local_of(B)
        for i in B.height_zero:
            lev, lev_n = ctx.level(i), ctx.restricted_level(i, loc.N)
            if lev == 0 and lev_n == 0:
                continue
            records.append({"character": i, "level": lev, "level_N": lev_n})
            ok &= (lev <= 1) == (lev_n <= 1)
    return _outcome("cons_7_2", ctx, records, ok)


def check_consequence_7_3(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    if subgroup_profile(ctx.sylow)[2]:
        for B in ctx.blocks:
            loc = ctx.local_of(B)
            for i in B.char_indices:
                lev = ctx.level(i)
                if lev < 2:
                    continue
                lev_n = ctx.restricted_level(i, loc.N)
                records.append({"character": i, "level": lev, "level_N": lev_n,
                                "height": B.heights[i]})
                ok &= lev == lev_n
    return _outcome("cons_7_3", ctx, records, ok)


def check_consequence_7_4(ctx: PrimeContext) -> CheckOutcome:
    records, ok = [], True
    if ctx.p == 2:
        for B in ctx.blocks:
            loc = ctx.local_of(B)
            for i in B.height_zero:
                vals = ctx.table[i].values
                c = conductor(vals)
                if c % 4 or field_degree(vals) != 2:
                    continue
                down = [vals[j] for j in ctx._meeting(loc.N)]
                same = conductor(down) > 1  # a subfield of a quadratic field
                records.append({"character": i, "conductor": c, "field_equal": same})
                ok &= same
    return _outcome("cons_7_4", ctx, records, ok)


CHECKS = {
    "conj_main": check_conjecture_main,
    "conj_ntC": check_conjecture_ntC,
    "thm_A": check_theorem_A,
    "lem_3_1": check_lemma_3_1,
    "cor_3_2": check_corollary_3_2,
    "lem_3_3": check_lemma_3_3,
    "lem_4_2": check_lemma_4_2,
    "lem_4_3": check_lemma_4_3,
    "lem_6_3": check_lemma_6_3,
    "amn_consequence": check_amn_consequence,
    "cons_7_2": check_consequence_7_2,
    "cons_7_3": check_consequence_7_3,
    "cons_7_4": check_consequence_7_4,
    "cyclic_structure": check_cyclic_structure,
    "brauer_first_main": check_brauer_first_main,
}


def check_lemma_suite(ctx: PrimeContext) -> list[CheckOutcome]:
    return [CHECKS[s](ctx) for s in ("lem_3_1", "cor_3_2", "lem_3_3", "lem_4_2", "lem_4_3", "lem_6_3")]


def check_consequences(ctx: PrimeContext) -> list[CheckOutcome]:
    return [CHECKS[s](ctx) for s in ("cons_7_2", "cons_7_3", "cons_7_4")]


# ---------------------------------------------------------------------------
# corpus runs


@dataclass
class VerificationReport:
    outcomes: list[CheckOutcome]
    findings: list[dict]
    groups: dict[str, dict]
    metadata: dict
    timing: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict[str, int]:
        counts = Counter(o.verdict for o in self.outcomes)
        return {v: counts.get(v, 0) for v in VERDICTS}

    @property
    def exit_code(self) -> int:
        if any(o.verdict == "fail" for o in self.outcomes):
            return 1
        return 2 if any(o.verdict == "finding" for o in self.outcomes) else 0

    def to_dict(self) -> dict:
        """JSON form; timing is left out so repeated runs are byte-identical."""
        return {
            "metadata": self.metadata,
            "summary": self.summary,
            "outcomes": [o.to_dict() for o in self.outcomes],
            "findings": self.findings,
            "groups": self.groups,
        }


def group_summary(name: str, G: Group, contexts: Sequence[PrimeContext]) -> dict:
    table = character_table(G)
    out = {
        "order": G.order,
        "classes": len(G.classes),
        "degrees": table.degrees,
        "primes": {},
    }
    for ctx in contexts:
        out["primes"][str(ctx.p)] = {
            "levels": [ctx.level(i) for i in range(len(table))],
            "level_witness_class": [level_witness(chi, ctx.p) for chi in table],
            "blocks": [
                {"characters": list(B.char_indices), "defect": B.defect,
                 "defect_group_order": B.defect_group.order,
                 "principal": B.is_principal,
                 "heights": [B.heights[i] for i in B.char_indices]}
                for B in ctx.blocks
            ],
        }
    return out


def verify_group(name: str, G: Group, primes: Iterable[int] | None = None,
                 statements: Iterable[str] | None = None, seed: int = 0):
    """All requested checks for one group: (outcomes, findings, summary)."""
    from sympy import primefactors

    wanted = list(statements) if statements else list(STATEMENTS)
    ps = primefactors(G.order)
    if primes is not None:
        ps = [p for p in ps if p in set(primes)]
    outcomes, findings, contexts = [], [], []
    for p in ps:
        ctx = PrimeContext(name, G, p, seed=seed)
        contexts.append(ctx)
        for sid in wanted:
            outcomes.append(CHECKS[sid](ctx))
        findings.extend(ctx.findings)
    return outcomes, findings, group_summary(name, G, contexts)


def _verify_entry(args):
    name, degree, generators, primes, statements, seed = args
    from .perm import group_from_generators

    G = group_from_generators(degree, generators)
    return verify_group(name, G, primes, statements, seed)


def run_corpus(entries, primes: Iterable[int] | None = None,
               statements: Iterable[str] | None = None, seed: int = 0,
               jobs: int = 1, metadata: dict | None = None) -> VerificationReport:
    import time

    start = time.perf_counter()
    primes = sorted(set(primes)) if primes is not None else None
    statements = list(statements) if statements else None
    tasks = [(e.name, e.degree, e.generators, primes, statements, seed) for e in entries]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_entry, tasks))
    else:
        results = [_verify_entry(t) for t in tasks]
    outcomes, findings, groups = [], [], {}
    for (name, *_), (outs, finds, summary) in zip(tasks, results):
        outcomes.extend(outs)
        findings.extend(finds)
        groups[name] = summary
    return VerificationReport(outcomes, findings, groups, metadata or {},
                              timing={"seconds": time.perf_counter() - start})
