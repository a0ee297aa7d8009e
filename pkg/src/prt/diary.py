"""Diaries: the similarity types of chains coded by almost-antichain nodes.

For a chain ``C`` of coding nodes, :func:`delta_of` collects its meet
closure ``M_C`` and its ray-change nodes ``B_C``, restricted to their common
levels.  :func:`canonicalize` compresses the levels to ``0..n-1`` and keeps
only the digit each node passes at each critical level, which yields the
unique similar diary.  The canonical form is the tuple of typed critical
nodes, and catalog identity is equality of that tuple.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import NotAChain, NotAlmostAntichain, NotCodingNode, NotDiaryShaped
from .words import leaf_key, meet, meet_closure as _closure


class CriticalType(enum.Enum):
    SPLIT = "split"
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"
    RAY_CHANGE = "raychange"

    @property
    def successors(self) -> str:
        """Digits of the immediate successors a critical node of this type has."""
        return {"split": "02", "terminal": "", "nonterminal": "1", "raychange": "1"}[self.value]


CODING_TYPES = (CriticalType.TERMINAL, CriticalType.NONTERMINAL)


@dataclass(frozen=True)
class MeetClosureData:
    chain: tuple[str, ...]  # C by increasing length
    M: tuple[str, ...]  # t_0 .. t_{m-1}
    lengths: tuple[int, ...]  # l_k
    i_star: int  # index into ``chain`` of the lex-leftmost node
    K: tuple[int, ...]
    B: tuple[str, ...]  # b_k for k in K, same order
    L: tuple[int, ...]  # sorted levels of M ∪ B

    @property
    def leftmost(self) -> str:
        return self.chain[self.i_star]


@dataclass(frozen=True)
class Delta:
    """``Δ(C)`` with its distinguished nodes ``e_j`` in order of length."""

    critical: tuple[tuple[str, CriticalType], ...]
    nodes: frozenset[str]
    levels: tuple[int, ...]


def check_chain(C: Sequence[str], host) -> tuple[str, ...]:
    """Validate ``C`` as a chain coded by an almost antichain; return it sorted by length."""
    ws = tuple(sorted(set(C), key=len))
    if not ws:
        raise NotAChain("empty chain")
    for w in ws:
        if not host.is_coding(w):
            raise NotCodingNode(f"{w!r} is not a coding node")
    for a, b in combinations(ws, 2):
        if b.startswith(a) and not b.startswith(a + "1"):
            raise NotAlmostAntichain(f"{a!r} and {b!r} are comparable off digit 1")
    g = host.ground_truth
    for a, b in combinations(ws, 2):
        if not g.comparable(len(a), len(b)):
            raise NotAChain(f"points coded by {a!r} and {b!r} are incomparable")
    return ws


def meet_closure(C: Sequence[str], host) -> MeetClosureData:
    ws = check_chain(C, host)
    M = tuple(sorted(_closure(ws), key=len))
    lengths = tuple(len(t) for t in M)
    if len(set(lengths)) != len(lengths):
        raise NotAlmostAntichain("two nodes of the meet closure share a length")
    i_star = min(range(len(ws)), key=lambda i: leaf_key(ws[i]))
    cs = ws[i_star]
    chain = set(ws)
    K, B = [], []
    for k in range(len(M) - 1):
        lo, hi = lengths[k], lengths[k + 1]
        if hi > len(cs):
            break
        if cs[:lo] in chain or host.same_ray(cs[:lo], cs[:hi]):
            continue
        ell = next((p for p in range(lo + 1, hi) if cs[p] == "1"), None)
        if ell is None:
            raise NotDiaryShaped(f"ray change in ({lo},{hi}] without a digit 1 on {cs!r}")
        K.append(k)
        B.append(cs[:ell])
    L = tuple(sorted({*lengths, *(len(b) for b in B)}))
    return MeetClosureData(ws, M, lengths, i_star, tuple(K), tuple(B), L)


def _type_of(e: str, data: MeetClosureData) -> CriticalType:
    if e in data.B:
        return CriticalType.RAY_CHANGE
    if e in data.chain:
        longer = any(c != e and c.startswith(e) for c in data.chain)
        return CriticalType.NONTERMINAL if longer else CriticalType.TERMINAL
    return CriticalType.SPLIT


def delta_of(C: Sequence[str], host) -> Delta:
    data = meet_closure(C, host)
    E = sorted({*data.M, *data.B}, key=len)
    nodes = frozenset(t[:ell] for t in E for ell in data.L if ell <= len(t))
    return Delta(tuple((e, _type_of(e, data)) for e in E), nodes, data.L)


@dataclass(frozen=True)
class Diary:
    """Typed critical nodes ``d_0 .. d_{n-1}`` with ``|d_j| = j``."""

    critical: tuple[tuple[str, CriticalType], ...]

    @property
    def height(self) -> int:
        return len(self.critical)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.critical)

    @property
    def critical_set(self) -> frozenset[str]:
        return frozenset(self.words)

    @property
    def p(self) -> int:
        return sum(t in CODING_TYPES for _, t in self.critical)

    @cached_property
    def nodes(self) -> frozenset[str]:
        return frozenset(generate_nodes(self.critical))

    def sort_key(self) -> tuple:
        return tuple((w, t.value) for w, t in self.critical)


def generate_nodes(critical: Sequence[tuple[str, CriticalType]]) -> list[str]:
    """Node set forced by the typed critical nodes (``t⌢0`` above non-critical nodes)."""
    n = len(critical)
    level = [""]
    out = list(level)
    for j, (d, ty) in enumerate(critical[: n - 1]):
        nxt = []
        for t in level:
            nxt.extend(t + x for x in (ty.successors if t == d else "0"))
        level = nxt
        out.extend(level)
    return out


def canonicalize(delta: Delta) -> Diary:
    L = delta.levels
    crit = []
    for e, ty in delta.critical:
        word = "".join(e[ell] for ell in L if ell < len(e))
        crit.append((word, ty))
    d = Diary(tuple(crit))
    rep = diary_axioms_check(d.critical)
    if not rep.ok:
        raise NotDiaryShaped(rep.violation)
    return d


def classify(C: Sequence[str], host) -> Diary:
    return canonicalize(delta_of(C, host))


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    typing: tuple[tuple[str, CriticalType], ...] = ()
    violation: str = ""


def _typed(critical) -> list[tuple[str, CriticalType]]:
    items = critical.items() if isinstance(critical, Mapping) else critical
    return sorted(((w, CriticalType(t)) for w, t in items), key=lambda wt: (len(wt[0]), wt[0]))


def diary_axioms_check(critical, nodes: Iterable[str] | None = None) -> AxiomReport:
    """Check the four diary conditions for typed critical nodes.

    ``critical`` maps words to types (or lists pairs).  When ``nodes`` is
    given it must equal the node set the critical nodes generate.
    """
    crit = _typed(critical)

    def bad(msg: str) -> AxiomReport:
        return AxiomReport(False, (), msg)

    if not crit:
        return bad("no critical nodes")
    for j, (w, _) in enumerate(crit):
        if len(w) != j or any(ch not in "012" for ch in w):
            return bad(f"level {j} must hold exactly one critical node of length {j}")
    n = len(crit)
    if crit[-1][1] is not CriticalType.TERMINAL:
        return bad("the top critical node must be a terminal coding node")
    level = [""]
    all_nodes = [""]
    for j, (d, ty) in enumerate(crit):
        if d not in level:
            return bad(f"critical node {d!r} is not in the tree")
        if j == n - 1:
            break
        nxt = []
        for t in level:
            nxt.extend(t + x for x in (ty.successors if t == d else "0"))
        level = nxt
        all_nodes.extend(level)
    leaves = [t for t in all_nodes if not any(u != t and u.startswith(t) for u in all_nodes)]
    left = min(leaves)
    for w, ty in crit:
        if ty in (CriticalType.NONTERMINAL, CriticalType.RAY_CHANGE) and not left.startswith(w):
            return bad(f"{ty.value} node {w!r} off the leftmost branch")
    if nodes is not None and set(nodes) != set(all_nodes):
        return bad("node set differs from the one the critical nodes generate")
    return AxiomReport(True, tuple(crit))


def _critical(x) -> tuple[tuple[str, CriticalType], ...]:
    return x.critical


def similar(a, b) -> bool:
    """Critical-node bijection in level order preserves types, meets, orders and levels."""
    ea, eb = _critical(a), _critical(b)
    if len(ea) != len(eb):
        return False
    if any(ta is not tb for (_, ta), (_, tb) in zip(ea, eb)):
        return False
    wa = [w for w, _ in ea]
    wb = [w for w, _ in eb]
    for xs in (wa, wb):
        if any(len(u) >= len(v) for u, v in zip(xs, xs[1:])):
            return False
    pos_a = {w: i for i, w in enumerate(wa)}
    pos_b = {w: i for i, w in enumerate(wb)}
    for i, j in combinations(range(len(wa)), 2):
        if wa[j].startswith(wa[i]) != wb[j].startswith(wb[i]):
            return False
        if (wa[i] < wa[j]) != (wb[i] < wb[j]):
            return False
        ma, mb = meet(wa[i], wa[j]), meet(wb[i], wb[j])
        if pos_a.get(ma) != pos_b.get(mb):
            return False
    return True
