"""The almost antichain whose coding nodes represent a copy of the pseudotree.

The construction is written once, as a coroutine over a leveled view of a
coding tree.  It yields :class:`Need` requests ("least coding node extending
this node") and :class:`Level` records.  :func:`build` answers the requests
from a finished host.  :class:`AntichainDemand` answers them while the host
is generated, and asks the scheduler to realize the slot of any request that
is still open.  A host generated with that hook holds the antichain's levels
at linearly growing depth.

View protocol (implemented by coding trees, live engines and approximations):
``coding(j)``, ``coding_index(j)``, ``level(j)``, ``successor(w, d)``,
``least_coding_extension(w)``, ``leftmost_extension(w, n)``,
``rightmost_extension(w, n)``, ``same_ray(a, b)``, ``is_coding(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Generator, Iterable

from .coding_tree import CodingTree, decode_structure, generate
from .errors import DepthExhausted, NodeAbsent
from .pseudotree import ExtensionSpec, FinitePseudotree
from .scheduler import GenericScheduler
from .words import comparable


@dataclass(frozen=True)
class Need:
    word: str


@dataclass(frozen=True)
class Level:
    m: int
    u: str
    v: str
    coding: str
    nodes: tuple[str, ...]  # CL_A(m), lex order
    succ: tuple[str, ...] = ()  # IS_A(m) as nodes of the view

    def successors(self) -> tuple[str, ...]:
        """IS_A(m): digit 1 above the coding node, digit 0 above the rest."""
        return self.succ or tuple(w + ("1" if w == self.coding else "0") for w in self.nodes)


def _successors(V, nodes: tuple[str, ...], coding: str) -> tuple[str, ...]:
    return tuple(V.successor(w, "1" if w == coding else "0") for w in nodes)


def construction(V) -> Generator[Need | Level, str, None]:
    """Level-by-level construction of the almost antichain inside ``V``."""
    u = V.coding(0)
    v = yield Need(V.successor(u, "0"))
    c = yield Need(V.successor(v, "2"))
    n = len(c)
    nodes = (
        V.leftmost_extension(V.successor(v, "0"), n),
        c,
        V.rightmost_extension(V.successor(u, "2"), n),
    )
    level = Level(0, u, v, c, nodes, _successors(V, nodes, c))
    yield level
    m = 1
    while True:
        succ = level.successors()
        i = V.coding_index(m)
        u = yield Need(succ[i])
        v = yield Need(V.successor(u, "0"))
        c = yield Need(V.successor(v, "2"))
        n = len(c)
        three = (
            V.leftmost_extension(V.successor(v, "0"), n),
            c,
            V.rightmost_extension(V.successor(u, "2"), n),
        )
        nodes = tuple(V.leftmost_extension(w, n) for w in succ[:i]) + three
        nodes += tuple(V.leftmost_extension(w, n) for w in succ[i + 1 :])
        level = Level(m, u, v, c, nodes, _successors(V, nodes, c))
        yield level
        m += 1


@dataclass(frozen=True, eq=False)
class AlmostAntichain:
    host: object
    levels: tuple[Level, ...]

    @property
    def size(self) -> int:
        return len(self.levels)

    @property
    def coding_levels(self) -> list[tuple[str, ...]]:
        return [lv.nodes for lv in self.levels]

    @property
    def successor_sets(self) -> list[tuple[str, ...]]:
        return [lv.successors() for lv in self.levels]

    @property
    def a_coding(self) -> list[str]:
        return [lv.coding for lv in self.levels]

    def phi(self, m: int) -> dict[str, str]:
        """Level bijection from ``S(m+1)`` onto ``CL_A(m)``."""
        return dict(zip(self.host.level(m + 1), self.levels[m].nodes))


def build(S, levels: int) -> AlmostAntichain:
    """Run the construction in a finished host for ``levels`` levels."""
    out: list[Level] = []
    gen = construction(S)
    msg = next(gen)
    try:
        while len(out) < levels:
            if isinstance(msg, Level):
                out.append(msg)
                if len(out) == levels:
                    break
                msg = next(gen)
            else:
                ans = S.least_coding_extension(msg.word)
                if ans is None:
                    raise DepthExhausted(
                        f"no coding node above {msg.word!r} within depth; reached level {len(out)}",
                        level=len(out),
                    )
                msg = gen.send(ans)
    except (IndexError, NodeAbsent) as exc:  # the view ran out of levels
        raise DepthExhausted(f"host too shallow at level {len(out)}", level=len(out)) from exc
    finally:
        gen.close()
    return AlmostAntichain(S, tuple(out))


class AntichainDemand:
    """Scheduler hook that keeps the construction's pending request served."""

    def __init__(self) -> None:
        self.engine = None
        self.levels: list[Level] = []
        self.pending: Need | None = None
        self._gen = None

    def attach(self, engine) -> None:
        self.engine = engine
        self._gen = construction(engine)
        self._run(next(self._gen))

    def _run(self, msg) -> None:
        while True:
            if isinstance(msg, Level):
                self.levels.append(msg)
                msg = next(self._gen)
                continue
            ans = self.engine.least_coding_extension(msg.word)
            if ans is None:
                self.pending = msg
                return
            msg = self._gen.send(ans)

    def request(self) -> ExtensionSpec | None:
        if self.pending is None:
            return None
        return self.engine.locate(self.pending.word).spec()

    def observe(self, step: int) -> None:
        if self.pending is not None:
            ans = self.engine.least_coding_extension(self.pending.word)
            if ans is not None:
                self.pending = None
                self._run(self._gen.send(ans))


def make_scheduler(seed: int = 0, policy: str = "demand") -> GenericScheduler:
    if policy == "demand":
        return GenericScheduler(seed=seed, priority=AntichainDemand())
    if policy == "round_robin":
        return GenericScheduler(seed=seed)
    raise ValueError(f"unknown scheduling policy {policy!r}")


def host(depth: int, seed: int = 0, policy: str = "demand") -> CodingTree:
    """Generate a coding tree with the named scheduling policy."""
    return generate(depth, make_scheduler(seed, policy), policy=policy)


def host_for_levels(levels: int, seed: int = 0, policy: str = "demand") -> CodingTree:
    """Smallest-step host (doubling search) in which ``levels`` antichain levels fit."""
    depth = 6 * levels + 8
    while True:
        S = host(depth, seed, policy)
        try:
            build(S, levels)
            return S
        except DepthExhausted:
            depth *= 2


# -- audits -------------------------------------------------------------------


@dataclass(frozen=True)
class AuditEntry:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class AuditReport:
    level: int
    entries: tuple[AuditEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def _prev_successors(A: AlmostAntichain, m: int) -> tuple[list[str], list[str]]:
    """Level ``m`` of the host and what the construction extends it from.

    That is ``IS_A(m-1)``, or the root ``u_0`` for ``m = 0``.
    """
    S = A.host
    if m == 0:
        return [S.coding(0)], [A.levels[0].u]
    return list(S.level(m)), list(A.levels[m - 1].successors())


def audit_level(A: AlmostAntichain, m: int) -> AuditReport:
    """Check the four level invariants (a)-(d) of the construction at level ``m``."""
    S = A.host
    lv = A.levels[m]
    cl = list(lv.nodes)
    s_next = list(S.level(m + 1))
    s_prev, is_prev = _prev_successors(A, m)
    entries = []

    # (a) phi(s_{m+1,j}) = a_{m,j}: lex order, and a_{m,j} end-extends the
    # successor-set node standing for the predecessor of s_{m+1,j}
    wit = ""
    n = len(lv.coding)
    if len(cl) != len(s_next):
        wit = f"|CL_A({m})| = {len(cl)} but the level has {len(s_next)} nodes"
    elif any(len(w) != n for w in cl):
        wit = "nodes of unequal length"
    elif any(a >= b for a, b in zip(cl, cl[1:])):
        k = next(k for k, (a, b) in enumerate(zip(cl, cl[1:])) if a >= b)
        wit = f"lex order broken at positions {k},{k + 1}: {cl[k]!r} >= {cl[k + 1]!r}"
    else:
        for s, a in zip(s_next, cl):
            k = next(k for k, p in enumerate(s_prev) if s.startswith(p))
            if not a.startswith(is_prev[k]):
                wit = f"{a!r} does not extend {is_prev[k]!r} (image of {s!r})"
                break
    entries.append(AuditEntry("a", not wit, wit))

    # (b) phi(c_m ⌢ 1) = c^A_m
    c1 = S.successor(S.coding(m), "1")
    j = s_next.index(c1)
    ok = cl[j] == lv.coding and S.is_coding(lv.coding)
    entries.append(AuditEntry("b", ok, "" if ok else f"image of {c1!r} is {cl[j]!r}, coding node {lv.coding!r}"))

    # (c) relative ray equalities: on IS_A(m) for all pairs, and on CL_A(m)
    # itself for pairs avoiding the coding node
    wit = ""
    succ = lv.successors()
    for i, k in combinations(range(len(cl)), 2):
        rel = S.same_ray(s_next[i], s_next[k])
        if S.same_ray(succ[i], succ[k]) != rel:
            wit = f"successors at positions {i},{k}"
            break
        if j not in (i, k) and S.same_ray(cl[i], cl[k]) != rel:
            wit = f"positions {i},{k}"
            break
    entries.append(AuditEntry("c", not wit, wit))

    # (d) non-coding nodes keep their ray into the successor set
    wit = ""
    for a in cl:
        if a != lv.coding and not S.same_ray(a + "0", a):
            wit = f"{a!r}"
            break
    entries.append(AuditEntry("d", not wit, wit))
    return AuditReport(m, tuple(entries))


def is_almost_antichain(nodes: Iterable[str]) -> bool:
    ws = sorted(set(nodes), key=len)
    for i, c in enumerate(ws):
        for d in ws[i + 1 :]:
            if comparable(c, d) and not d.startswith(c + "1"):
                return False
    return True


def antichain_structure(A: AlmostAntichain, n: int) -> FinitePseudotree:
    """The pseudotree on the points coded by ``c^A_0 .. c^A_n``."""
    return decode_structure(A.host, A.a_coding[: n + 1])


def with_levels(A: AlmostAntichain, levels: Iterable[Level]) -> AlmostAntichain:
    return AlmostAntichain(A.host, tuple(levels))
