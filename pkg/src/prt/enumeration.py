"""Diary catalogs: axiom enumeration, brute force, cross-checks, persistence.

Two independent computations produce the catalog of diaries for chains of
length ``p``:

* :func:`enumerate_diaries` builds candidate diaries level by level from the
  axioms, then keeps those similar to ``Δ(C)`` for some chain ``C`` of
  almost-antichain coding nodes (the realizability filter).
* :func:`brute_force_classes` canonicalizes ``Δ(C)`` for every such chain.

:func:`cross_check` compares them.  :func:`witness_persistence` colors the
2-chains of a host by diary and checks that every color shows up inside
generated subtrees isomorphic to their hosts.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .antichain import AlmostAntichain, build, host_for_levels
from .diary import CODING_TYPES, CriticalType, Diary, classify, delta_of, diary_axioms_check, similar
from .errors import DepthWarning

T = CriticalType

# The seven diaries of 2-chains, by case number.
SEVEN_CASES: dict[int, tuple[str, ...]] = {
    1: ("", "1"),
    2: ("", "2", "00"),
    3: ("", "0", "20"),
    4: ("", "0", "01", "200"),
    5: ("", "2", "00", "001"),
    6: ("", "0", "20", "010"),
    7: ("", "0", "20", "010", "0101"),
}
_CASE_OF = {frozenset(ws): k for k, ws in SEVEN_CASES.items()}

AXIOM, BRUTE, BOTH = "axiom-enumerated", "brute-forced", "both"

# Antichain levels used by default, by chain length.  For p = 3 the catalog
# of the seed-0 host is unchanged from 160 to 223 levels.
DEFAULT_DEPTH = {1: 4, 2: 24, 3: 160}


def default_depth(p: int) -> int:
    return DEFAULT_DEPTH.get(p, 24)


def default_max_height(p: int) -> int:
    return 4 * p + 2


def case_id(d: Diary) -> int | None:
    """Case number of a 2-chain diary, None for any other diary."""
    return _CASE_OF.get(d.critical_set) if d.p == 2 else None


# -- catalogs -------------------------------------------------------------------


@dataclass(frozen=True)
class DiaryCatalog:
    """Sorted canonical diaries for chains of length ``p`` with their provenance."""

    p: int
    entries: tuple[Diary, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.provenance) != len(self.entries):
            raise ValueError("one provenance per entry is required")

    @classmethod
    def of(cls, p: int, diaries: Iterable[Diary], source: str) -> DiaryCatalog:
        es = sorted(set(diaries), key=Diary.sort_key)
        return cls(p, tuple(es), tuple(source for _ in es))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, d: Diary) -> bool:
        return d in self.entries

    @property
    def critical_sets(self) -> set[frozenset[str]]:
        return {d.critical_set for d in self.entries}

    def id_of(self, d: Diary) -> int:
        """Case number for 2-chains, else the 1-based catalog position."""
        cid = case_id(d)
        if cid is not None:
            return cid
        return self.entries.index(d) + 1

    @property
    def accepted(self) -> bool:
        """Acceptance grade: both computations produced every entry."""
        return all(pv == BOTH for pv in self.provenance)


def merge(a: DiaryCatalog, b: DiaryCatalog) -> DiaryCatalog:
    """Union of two catalogs; entries found by both get provenance ``both``."""
    if a.p != b.p:
        raise ValueError("catalogs for different chain lengths")
    pa = dict(zip(a.entries, a.provenance))
    pb = dict(zip(b.entries, b.provenance))
    es = sorted(set(pa) | set(pb), key=Diary.sort_key)
    prov = tuple(BOTH if (e in pa and e in pb) else pa.get(e) or pb[e] for e in es)
    return DiaryCatalog(a.p, tuple(es), prov)


# -- chains ---------------------------------------------------------------------


def coding_chains(nodes: Sequence[str], p: int, host) -> Iterator[tuple[str, ...]]:
    """All ``p``-element sets of ``nodes`` coding pairwise comparable points, in index order."""
    g = host.ground_truth
    pts = [len(w) for w in nodes]

    def rec(start: int, chosen: list[int]) -> Iterator[tuple[str, ...]]:
        if len(chosen) == p:
            yield tuple(nodes[i] for i in chosen)
            return
        for k in range(start, len(nodes)):
            if all(g.comparable(pts[i], pts[k]) for i in chosen):
                chosen.append(k)
                yield from rec(k + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


@dataclass(frozen=True)
class Census:
    """Classes of the ``p``-chains among the first coding nodes of an antichain."""

    p: int
    depth: int
    counts: dict[Diary, int]
    first: dict[Diary, int]  # antichain level of the top element of the first witness
    witness: dict[Diary, tuple[str, ...]] = field(default_factory=dict)  # first chain found

    @property
    def diaries(self) -> set[Diary]:
        return set(self.counts)


def census(A: AlmostAntichain, p: int, host, depth: int | None = None) -> Census:
    """Classify every ``p``-chain among ``c^A_0 .. c^A_{depth-1}`` in ``host``."""
    depth = A.size if depth is None else depth
    cod = A.a_coding[:depth]
    level = {w: j for j, w in enumerate(cod)}
    counts: Counter[Diary] = Counter()
    first: dict[Diary, int] = {}
    witness: dict[Diary, tuple[str, ...]] = {}
    for C in coding_chains(cod, p, host):
        d = classify(C, host)
        counts[d] += 1
        witness.setdefault(d, C)
        top = max(level[w] for w in C)
        if first.get(d, depth) > top:
            first[d] = top
    return Census(p, depth, dict(counts), first, witness)


def _antichain(host, depth: int, A: AlmostAntichain | None) -> AlmostAntichain:
    if A is None:
        return build(host, depth)
    if A.size < depth:
        raise ValueError(f"antichain has {A.size} levels, {depth} requested")
    return A


def brute_force_classes(p: int, depth: int, host, A: AlmostAntichain | None = None) -> DiaryCatalog:
    """Catalog of ``classify(C)`` over all ``p``-chains among the first ``depth`` antichain coding nodes."""
    if p < 1:
        raise ValueError("chains have at least one element")
    A = _antichain(host, depth, A)
    return DiaryCatalog.of(p, census(A, p, host, depth).counts, BRUTE)


# -- axiom enumeration ------------------------------------------------------------


@dataclass
class _Search:
    p: int
    max_height: int
    out: list[Diary] = field(default_factory=list)
    truncated: bool = False

    def run(self) -> list[Diary]:
        self.rec([""], [], [], 0)
        return self.out

    def rec(self, level: list[str], crit: list, leaves: list[str], coding: int) -> None:
        j = len(crit)
        prev = crit[-1][1] if crit else None
        for d in level:
            leftmost = d == level[0] and all(d < x for x in leaves)
            for ty in T:
                used = coding + (ty in CODING_TYPES)
                if used > self.p:
                    continue
                if ty in (T.NONTERMINAL, T.RAY_CHANGE) and not leftmost:
                    continue
                # a ray-change node sits strictly between two meet-closure levels
                # and is recorded only when the leftmost branch there is not in C
                if ty is T.RAY_CHANGE and (j == 0 or prev in (T.RAY_CHANGE, T.NONTERMINAL)):
                    continue
                step = crit + [(d, ty)]
                if ty is T.TERMINAL and len(level) == 1:
                    if used == self.p:
                        self.out.append(Diary(tuple(step)))
                    continue
                nxt = [t + x for t in level for x in (ty.successors if t == d else "0")]
                # every branch must end in its own terminal coding node
                if not nxt or len(nxt) > self.p - used:
                    continue
                if j + 1 >= self.max_height:
                    self.truncated = True
                    continue
                self.rec(nxt, step, leaves + [d] if ty is T.TERMINAL else leaves, used)


def axiom_candidates(p: int, max_height: int | None = None) -> tuple[list[Diary], bool]:
    """Diaries with ``p`` coding nodes passing the axioms, and whether the height cap cut the search.

    Beyond the four axioms the search prunes with three necessary conditions
    of diaries of chains: every branch ends in a terminal coding node (so the
    top level is a single node), ray-change nodes are never adjacent, and no
    ray change sits directly above a nonterminal coding node.
    """
    max_height = default_max_height(p) if max_height is None else max_height
    s = _Search(p, max_height)
    found = [d for d in s.run() if diary_axioms_check(d.critical).ok]
    return found, s.truncated


def enumerate_diaries(
    p: int,
    max_height: int | None = None,
    host=None,
    depth: int | None = None,
    A: AlmostAntichain | None = None,
) -> DiaryCatalog:
    """Axiom-enumerated diaries that some ``p``-chain of antichain coding nodes realizes.

    Realization is checked by :func:`similar` against ``Δ(C)`` itself, never
    through the canonical form, so this stays independent of brute force.
    """
    max_height = default_max_height(p) if max_height is None else max_height
    depth = default_depth(p) if depth is None else depth
    if host is None:
        host = host_for_levels(depth)
    A = _antichain(host, depth, A)
    cands, truncated = axiom_candidates(p, max_height)
    by_types: dict[tuple, list] = {}
    for C in coding_chains(A.a_coding[:depth], p, host):
        delta = delta_of(C, host)
        by_types.setdefault(tuple(t for _, t in delta.critical), []).append(delta)
    realized = []
    for d in cands:
        pool = by_types.get(tuple(t for _, t in d.critical), ())
        if any(similar(d, e) for e in pool):
            realized.append(d)
    if truncated or any(d.height >= max_height for d in realized):
        warnings.warn(f"max_height={max_height} may truncate the enumeration for p={p}", DepthWarning, stacklevel=2)
    return DiaryCatalog.of(p, realized, AXIOM)


@dataclass(frozen=True)
class CrossCheck:
    ok: bool
    catalog: DiaryCatalog  # merged, with provenance
    only_enumerated: tuple[Diary, ...]
    only_brute: tuple[Diary, ...]
    census: Census | None = None  # the brute-force census behind the comparison


def cross_check(p: int, host=None, depth: int | None = None, max_height: int | None = None) -> CrossCheck:
    """Run both computations on one antichain and compare the entry sets."""
    depth = default_depth(p) if depth is None else depth
    if host is None:
        host = host_for_levels(depth)
    A = build(host, depth)
    e = enumerate_diaries(p, max_height, host, depth, A)
    c = census(A, p, host, depth)
    b = DiaryCatalog.of(p, c.counts, BRUTE)
    se, sb = set(e.entries), set(b.entries)
    key = Diary.sort_key
    return CrossCheck(
        se == sb,
        merge(e, b),
        tuple(sorted(se - sb, key=key)),
        tuple(sorted(sb - se, key=key)),
        c,
    )


def stable_depth(p: int, start: int, step: int = 4, limit: int = 64, seed: int = 0) -> tuple[int, DiaryCatalog]:
    """Least ``D >= start`` (in steps) with equal brute-force catalogs at ``D`` and ``D + step``."""
    D = start
    while D + step <= limit:
        S = host_for_levels(D + step, seed)
        A = build(S, D + step)
        lo = brute_force_classes(p, D, S, A)
        hi = brute_force_classes(p, D + step, S, A)
        if lo.entries == hi.entries:
            return D, hi
        D += step
    raise RuntimeError(f"no stable depth for p={p} below {limit}")


# -- persistence --------------------------------------------------------------------


@dataclass(frozen=True)
class SubtreeVerdict:
    seed: int
    host_steps: int
    subtree_levels: int
    realized: tuple[int, ...]
    missing: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.missing


@dataclass(frozen=True)
class ColoringReport:
    depth: int
    counts: dict[int, int]  # case id -> realized 2-chains in the host
    first: dict[int, int]  # case id -> first antichain level realizing it
    subtrees: tuple[SubtreeVerdict, ...] = ()
    p: int = 2

    @property
    def host_realized(self) -> tuple[int, ...]:
        return tuple(k for k in SEVEN_CASES if self.counts.get(k, 0) > 0)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.subtrees)


def census_report(catalog: DiaryCatalog, c: Census) -> ColoringReport:
    """Counts per diary id for a census whose classes all lie in ``catalog``."""
    counts = {catalog.id_of(d): n for d, n in c.counts.items()}
    first = {catalog.id_of(d): j for d, j in c.first.items()}
    return ColoringReport(c.depth, counts, first, (), c.p)


def _case_census(A: AlmostAntichain, host, depth: int) -> Census:
    c = census(A, 2, host, depth)
    if any(case_id(d) is None for d in c.counts):
        raise AssertionError("a 2-chain outside the seven cases")
    return c


def witness_persistence(depth: int, subtree_count: int, host=None, seed: int = 0) -> ColoringReport:
    """Color the 2-chains of ``host`` by case and look for every case in generated subtrees.

    ``depth`` counts antichain levels.  Subtree ``i`` is grown online inside
    a host generated with seed ``seed + i``; its own almost antichain is
    built inside it to ``depth`` levels, and its 2-chains are classified in
    that host.
    """
    from .amalgamation import subtree_antichain

    if host is None:
        host = host_for_levels(depth)
    c = _case_census(build(host, depth), host, depth)
    counts = {case_id(d): n for d, n in c.counts.items()}
    first = {case_id(d): j for d, j in c.first.items()}
    verdicts = []
    for i in range(subtree_count):
        S, Tsub, At = subtree_antichain(depth, seed + i)
        ct = _case_census(At, S, depth)
        got = tuple(sorted(case_id(d) for d in ct.counts))
        verdicts.append(
            SubtreeVerdict(seed + i, S.size, Tsub.size, got, tuple(k for k in SEVEN_CASES if k not in got))
        )
    return ColoringReport(depth, counts, first, tuple(verdicts))
