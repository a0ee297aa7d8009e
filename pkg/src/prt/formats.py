"""Line-oriented text formats and their parsers.

Every format starts with a header line ``<NAME> v1 key=value ...``.  Words
are written with ``-`` for the empty word.  Serialization is deterministic,
so ``dump(parse(text)) == text`` for every well-formed file.

=============  ================================================================
PSEUDOTREE     ``index parent ray kind`` per point; parent is the creation target
CODINGTREE     ``word coding|plain theta=<id|?>`` per node, then a PSEUDOTREE block
ANTICHAIN      one line per level: the lex-sorted nodes, the coding node starred
DIARY          ``word type`` per critical node
CATALOG        DIARY blocks (with provenance) in catalog order
REPORT         per-diary counts and per-subtree persistence verdicts
CHAIN          host parameters, then one coding node per line
=============  ================================================================
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .antichain import AlmostAntichain
from .coding_tree import CodingTree, SlotEngine
from .diary import CriticalType, Diary, diary_axioms_check
from .enumeration import AXIOM, BOTH, BRUTE, ColoringReport, DiaryCatalog, SubtreeVerdict
from .errors import InvalidExtension, ParseError
from .pseudotree import ExtensionSpec, FinitePseudotree, Kind, TreeBuilder
from .words import parse as parse_word
from .words import render

_KINDS = {"left": Kind.GREATER_LEFT, "newray": Kind.NEW_RAY, "between": Kind.BETWEEN}
_PROVENANCE = (AXIOM, BRUTE, BOTH)


class _Lines:
    """Cursor over numbered lines that raises :class:`ParseError` with the line number."""

    def __init__(self, text: str):
        if not text.endswith("\n"):
            raise ParseError("file does not end with a newline (truncated?)", text.count("\n") + 1)
        self.lines = text[:-1].split("\n")
        self.i = 0

    @property
    def lineno(self) -> int:
        return self.i + 1

    def fail(self, msg: str) -> ParseError:
        return ParseError(msg, self.lineno)

    def peek(self) -> str | None:
        return self.lines[self.i] if self.i < len(self.lines) else None

    def next(self, what: str) -> str:
        if self.i >= len(self.lines):
            raise self.fail(f"unexpected end of file, expected {what}")
        line = self.lines[self.i]
        self.i += 1
        return line

    def header(self, name: str, keys: tuple[str, ...]) -> dict[str, str]:
        line = self.next(f"{name} header")
        parts = line.split(" ")
        if parts[:2] != [name, "v1"]:
            self.i -= 1
            raise self.fail(f"expected '{name} v1' header, got {line!r}")
        fields = _fields(parts[2:], keys, self)
        return fields

    def end(self) -> None:
        if self.i != len(self.lines):
            raise self.fail("trailing content")

    def word(self, token: str) -> str:
        try:
            return parse_word(token)
        except ValueError as exc:
            self.i -= 1
            raise self.fail(str(exc)) from None

    def int(self, token: str, what: str) -> int:
        try:
            v = int(token)
        except ValueError:
            self.i -= 1
            raise self.fail(f"{what} is not an integer: {token!r}") from None
        if str(v) != token:
            self.i -= 1
            raise self.fail(f"{what} is not in canonical form: {token!r}")
        return v


def _fields(parts: list[str], keys: tuple[str, ...], cur: _Lines) -> dict[str, str]:
    out = {}
    for p, k in zip(parts, keys):
        name, sep, val = p.partition("=")
        if name != k or not sep:
            cur.i -= 1
            raise cur.fail(f"expected field {k}=..., got {p!r}")
        out[k] = val
    if len(parts) != len(keys):
        cur.i -= 1
        raise cur.fail(f"expected fields {', '.join(keys)}")
    return out


# -- PSEUDOTREE ----------------------------------------------------------------


def dump_pseudotree(t: FinitePseudotree) -> str:
    out = [f"PSEUDOTREE v1 n={t.size}", f"0 -1 {t.ray[0]} root"]
    for k, e in enumerate(t.history, start=1):
        out.append(f"{k} {e.target} {t.ray[k]} {e.kind.value}")
    return "\n".join(out) + "\n"


def _read_pseudotree(cur: _Lines) -> FinitePseudotree:
    n = cur.int(cur.header("PSEUDOTREE", ("n",))["n"], "n")
    if n < 1:
        raise cur.fail("a tree has at least its root")
    history: list[ExtensionSpec] = []
    rays: list[int] = []
    b = TreeBuilder()
    for k in range(n):
        parts = cur.next(f"point {k}").split(" ")
        if len(parts) != 4:
            cur.i -= 1
            raise cur.fail("expected 'index parent ray kind'")
        idx = cur.int(parts[0], "index")
        par = cur.int(parts[1], "parent") if parts[1] != "-1" else -1
        ray = cur.int(parts[2], "ray")
        if idx != k:
            cur.i -= 1
            raise cur.fail(f"expected point {k}, got {idx}")
        if k == 0:
            if par != -1 or parts[3] != "root":
                cur.i -= 1
                raise cur.fail("point 0 must be the root")
        else:
            kind = _KINDS.get(parts[3])
            if kind is None:
                cur.i -= 1
                raise cur.fail(f"unknown kind {parts[3]!r}")
            e = ExtensionSpec(kind, par)
            try:
                b.apply(e, ray=ray)
            except InvalidExtension as exc:
                cur.i -= 1
                raise cur.fail(str(exc)) from None
            history.append(e)
        rays.append(ray)
    return FinitePseudotree(tuple(history), tuple(rays))


def parse_pseudotree(text: str) -> FinitePseudotree:
    cur = _Lines(text)
    t = _read_pseudotree(cur)
    cur.end()
    return t


# -- CODINGTREE ----------------------------------------------------------------


def replay(history, seed: int = 0, policy: str = "replay") -> CodingTree:
    """Rebuild a coding tree from the creation history of its ground truth."""
    engine = SlotEngine()
    tree = TreeBuilder()
    for e in history:
        engine.step(e)
        tree.apply(e)
    return CodingTree(engine.root, engine.coding_words, engine.rays, engine.hit_index, tree.freeze(), seed, policy)


def _theta(S: CodingTree, w: str) -> str:
    th = S.theta(w)
    return "?" if th is None else str(th)


def dump_codingtree(S: CodingTree) -> str:
    out = [f"CODINGTREE v1 depth={S.size}"]
    for k in range(S.size):
        for w in S.level(k):
            out.append(f"{render(w)} {'coding' if S.is_coding(w) else 'plain'} theta={_theta(S, w)}")
    return "\n".join(out) + "\n" + dump_pseudotree(S.ground_truth)


def parse_codingtree(text: str) -> CodingTree:
    cur = _Lines(text)
    depth = cur.int(cur.header("CODINGTREE", ("depth",))["depth"], "depth")
    if depth < 1:
        raise cur.fail("depth must be positive")
    first = cur.lineno
    rows = []
    for k in range(depth):
        for _ in range(2 * k + 1):
            parts = cur.next("a node line").split(" ")
            if len(parts) != 3 or parts[1] not in ("coding", "plain") or not parts[2].startswith("theta="):
                cur.i -= 1
                raise cur.fail("expected '<word> coding|plain theta=<id|?>'")
            rows.append((cur.lineno - 1, cur.word(parts[0]), parts[1], parts[2][6:]))
    t = _read_pseudotree(cur)
    cur.end()
    if t.size != depth:
        raise ParseError(f"ground truth has {t.size} points for depth {depth}", first)
    S = replay(t.history)
    if S.ground_truth.ray != t.ray:
        raise ParseError("ground-truth rays disagree with the replayed tree", first)
    expect = dump_codingtree(S).split("\n")
    for lineno, w, kind, th in rows:
        want = expect[lineno - 1]
        got = f"{render(w)} {kind} theta={th}"
        if want != got:
            raise ParseError(f"node line disagrees with the ground truth: expected {want!r}", lineno)
    return S


# -- ANTICHAIN -------------------------------------------------------------------


@dataclass(frozen=True)
class AntichainRecord:
    """The levels ``CL_A(m)`` of an almost antichain with their coding positions."""

    levels: tuple[tuple[str, ...], ...]
    coding_pos: tuple[int, ...]

    @classmethod
    def of(cls, A: AlmostAntichain) -> AntichainRecord:
        return cls(tuple(lv.nodes for lv in A.levels), tuple(lv.nodes.index(lv.coding) for lv in A.levels))

    @property
    def coding(self) -> tuple[str, ...]:
        return tuple(lv[i] for lv, i in zip(self.levels, self.coding_pos))


def dump_antichain(A) -> str:
    r = A if isinstance(A, AntichainRecord) else AntichainRecord.of(A)
    out = [f"ANTICHAIN v1 levels={len(r.levels)}"]
    for lv, i in zip(r.levels, r.coding_pos):
        out.append(" ".join(render(w) + ("*" if k == i else "") for k, w in enumerate(lv)))
    return "\n".join(out) + "\n"


def parse_antichain(text: str) -> AntichainRecord:
    cur = _Lines(text)
    m = cur.int(cur.header("ANTICHAIN", ("levels",))["levels"], "levels")
    levels, pos = [], []
    for k in range(m):
        toks = cur.next(f"level {k}").split(" ")
        stars = [j for j, t in enumerate(toks) if t.endswith("*")]
        if len(stars) != 1:
            cur.i -= 1
            raise cur.fail("exactly one node per level must be starred")
        ws = [cur.word(t.rstrip("*")) for t in toks]
        if any(a >= b for a, b in zip(ws, ws[1:])) or len({len(w) for w in ws}) != 1:
            cur.i -= 1
            raise cur.fail("level nodes must be lex sorted and of one length")
        levels.append(tuple(ws))
        pos.append(stars[0])
    cur.end()
    return AntichainRecord(tuple(levels), tuple(pos))


# -- DIARY and CATALOG -------------------------------------------------------------


def _diary_lines(d: Diary, provenance: str | None = None) -> list[str]:
    head = f"DIARY v1 height={d.height}" + (f" provenance={provenance}" if provenance else "")
    return [head] + [f"{render(w)} {t.value}" for w, t in d.critical]


def dump_diary(d: Diary) -> str:
    return "\n".join(_diary_lines(d)) + "\n"


def _read_diary(cur: _Lines, with_provenance: bool) -> tuple[Diary, str | None]:
    keys = ("height", "provenance") if with_provenance else ("height",)
    f = cur.header("DIARY", keys)
    n = cur.int(f["height"], "height")
    start = cur.lineno
    crit = []
    for j in range(n):
        parts = cur.next(f"critical node {j}").split(" ")
        if len(parts) != 2:
            cur.i -= 1
            raise cur.fail("expected '<word> <type>'")
        w = cur.word(parts[0])
        try:
            t = CriticalType(parts[1])
        except ValueError:
            cur.i -= 1
            raise cur.fail(f"unknown critical type {parts[1]!r}") from None
        crit.append((w, t))
    rep = diary_axioms_check(crit)
    if not rep.ok:
        raise ParseError(f"not a diary: {rep.violation}", start)
    if rep.typing != tuple(crit):
        raise ParseError("critical nodes must be listed by level", start)
    prov = f.get("provenance")
    if with_provenance and prov not in _PROVENANCE:
        raise ParseError(f"unknown provenance {prov!r}", start - 1)
    return Diary(tuple(crit)), prov


def parse_diary(text: str) -> Diary:
    cur = _Lines(text)
    d, _ = _read_diary(cur, False)
    cur.end()
    return d


def dump_catalog(c: DiaryCatalog) -> str:
    out = [f"CATALOG v1 p={c.p} entries={len(c)}"]
    for d, pv in zip(c.entries, c.provenance):
        out.extend(_diary_lines(d, pv))
    return "\n".join(out) + "\n"


def parse_catalog(text: str) -> DiaryCatalog:
    cur = _Lines(text)
    f = cur.header("CATALOG", ("p", "entries"))
    p, n = cur.int(f["p"], "p"), cur.int(f["entries"], "entries")
    entries, prov = [], []
    for _ in range(n):
        line = cur.lineno
        d, pv = _read_diary(cur, True)
        if d.p != p:
            raise ParseError(f"diary with {d.p} coding nodes in a p={p} catalog", line)
        if entries and Diary.sort_key(entries[-1]) >= d.sort_key():
            raise ParseError("catalog entries out of order or repeated", line)
        entries.append(d)
        prov.append(pv)
    cur.end()
    return DiaryCatalog(p, tuple(entries), tuple(prov))


# -- REPORT --------------------------------------------------------------------------


def _ids(xs) -> str:
    return ",".join(map(str, xs)) if xs else "-"


def dump_report(r: ColoringReport) -> str:
    out = [f"REPORT v1 p={r.p} depth={r.depth} diaries={len(r.counts)} subtrees={len(r.subtrees)}"]
    for k in sorted(r.counts):
        first = r.first.get(k)
        out.append(f"diary id={k} count={r.counts[k]} first={'-' if first is None else first}")
    for v in r.subtrees:
        out.append(
            f"subtree seed={v.seed} steps={v.host_steps} levels={v.subtree_levels} "
            f"realized={_ids(v.realized)} missing={_ids(v.missing)}"
        )
    return "\n".join(out) + "\n"


def parse_report(text: str) -> ColoringReport:
    cur = _Lines(text)
    f = cur.header("REPORT", ("p", "depth", "diaries", "subtrees"))
    p, depth = cur.int(f["p"], "p"), cur.int(f["depth"], "depth")
    nd, ns = cur.int(f["diaries"], "diaries"), cur.int(f["subtrees"], "subtrees")

    def ids(tok: str) -> tuple[int, ...]:
        return () if tok == "-" else tuple(cur.int(x, "diary id") for x in tok.split(","))

    counts, first = {}, {}
    for _ in range(nd):
        parts = cur.next("a diary line").split(" ")
        if parts[0] != "diary":
            cur.i -= 1
            raise cur.fail("expected a diary line")
        g = _fields(parts[1:], ("id", "count", "first"), cur)
        k = cur.int(g["id"], "id")
        if counts and k <= max(counts):
            cur.i -= 1
            raise cur.fail("diary ids out of order")
        counts[k] = cur.int(g["count"], "count")
        if g["first"] != "-":
            first[k] = cur.int(g["first"], "first")
    subs = []
    for _ in range(ns):
        parts = cur.next("a subtree line").split(" ")
        if parts[0] != "subtree":
            cur.i -= 1
            raise cur.fail("expected a subtree line")
        g = _fields(parts[1:], ("seed", "steps", "levels", "realized", "missing"), cur)
        subs.append(
            SubtreeVerdict(
                cur.int(g["seed"], "seed"),
                cur.int(g["steps"], "steps"),
                cur.int(g["levels"], "levels"),
                ids(g["realized"]),
                ids(g["missing"]),
            )
        )
    cur.end()
    return ColoringReport(depth, counts, first, tuple(subs), p)


# -- CHAIN -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainFile:
    """A chain of coding nodes together with the host that generates them."""

    depth: int
    seed: int
    words: tuple[str, ...]


def dump_chain(c: ChainFile) -> str:
    out = [f"CHAIN v1 depth={c.depth} seed={c.seed} size={len(c.words)}"]
    out.extend(render(w) for w in c.words)
    return "\n".join(out) + "\n"


def parse_chain(text: str) -> ChainFile:
    cur = _Lines(text)
    f = cur.header("CHAIN", ("depth", "seed", "size"))
    depth, seed, n = (cur.int(f[k], k) for k in ("depth", "seed", "size"))
    ws = tuple(cur.word(cur.next(f"chain element {k}")) for k in range(n))
    cur.end()
    return ChainFile(depth, seed, ws)


# -- dispatch ----------------------------------------------------------------------------

PARSERS: dict[str, Callable[[str], object]] = {
    "PSEUDOTREE": parse_pseudotree,
    "CODINGTREE": parse_codingtree,
    "ANTICHAIN": parse_antichain,
    "DIARY": parse_diary,
    "CATALOG": parse_catalog,
    "REPORT": parse_report,
    "CHAIN": parse_chain,
}


def dump(obj) -> str:
    if isinstance(obj, FinitePseudotree):
        return dump_pseudotree(obj)
    if isinstance(obj, CodingTree):
        return dump_codingtree(obj)
    if isinstance(obj, (AlmostAntichain, AntichainRecord)):
        return dump_antichain(obj)
    if isinstance(obj, Diary):
        return dump_diary(obj)
    if isinstance(obj, DiaryCatalog):
        return dump_catalog(obj)
    if isinstance(obj, ColoringReport):
        return dump_report(obj)
    if isinstance(obj, ChainFile):
        return dump_chain(obj)
    raise TypeError(f"no file format for {type(obj).__name__}")


def parse(text: str):
    """Parse any supported file, dispatching on its header."""
    name = text.split(" ", 1)[0] if text else ""
    fn = PARSERS.get(name)
    if fn is None:
        raise ParseError(f"unknown format header {name!r}", 1)
    return fn(text)


def roundtrip_text(text: str) -> bool:
    return dump(parse(text)) == text


def roundtrip(path) -> bool:
    """Parse, serialize and compare bytes; raises :class:`ParseError` on malformed input."""
    return roundtrip_text(Path(path).read_text(encoding="utf-8"))
