"""Verification suites: named invariant checks with pass/fail and a witness.

``prt verify`` runs these, and so do the acceptance tests.  Every check is
deterministic given its arguments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .amalgamation import a3_check, amalgamate, audit, random_constraints
from .antichain import antichain_structure, audit_level, build, host, host_for_levels, is_almost_antichain
from .coding_tree import CodingTree, decode_structure
from .enumeration import SEVEN_CASES, cross_check
from .errors import ConstraintUnsatisfiable, PrtError
from .formats import dump, roundtrip_text
from .hl import HLInstance, hl_micro_search


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def shape_defect(S: CodingTree, depth: int) -> str:
    """First violation of the level shape below ``depth``, or ''."""
    for n in range(depth):
        lv = S.level(n)
        if len(lv) != 2 * n + 1:
            return f"level {n} has {len(lv)} nodes"
        if len(S.coding(n)) != n:
            return f"c_{n} has length {len(S.coding(n))}"
        coding = [w for w in lv if S.is_coding(w)]
        if coding != [S.coding(n)]:
            return f"level {n} has coding nodes {coding}"
        if n + 1 < S.size:
            nxt = set(S.level(n + 1))
            for w in lv:
                kids = {v for v in nxt if v.startswith(w)}
                want = {w + d for d in "012"} if w == S.coding(n) else {w + "0"}
                if kids != want:
                    return f"children of {w!r} are {sorted(kids)}"
    return ""


def check_shape(depth: int, seed: int = 0) -> Check:
    S = host(depth + 1, seed)
    bad = shape_defect(S, depth)
    return Check(f"coding-tree shape below level {depth}", not bad, bad)


def check_fidelity(depth: int, seed: int = 0) -> Check:
    S = host(depth + 1, seed)
    gt = S.ground_truth
    for n in range(depth):
        if decode_structure(S, S.coding_words[: n + 1]).tables() != gt.prefix(n).tables():
            return Check(f"decoding matches T_n for n < {depth}", False, f"n = {n}")
    return Check(f"decoding matches T_n for n < {depth}", True)


def check_ground_truth(points: int, seed: int = 0) -> Check:
    bad = host(points, seed).ground_truth.check_invariants()
    return Check(f"pseudotree axioms on {points} points", not bad, "; ".join(bad[:3]))


def check_antichain(levels: int, seed: int = 0) -> list[Check]:
    S = host_for_levels(levels, seed)
    A = build(S, levels)
    out = []
    for name in "abcd":
        bad = [
            f"level {r.level}: {e.witness}"
            for r in (audit_level(A, m) for m in range(levels))
            for e in r.entries
            if e.name == name and not e.passed
        ]
        out.append(Check(f"antichain invariant ({name}) at {levels} levels", not bad, "; ".join(bad[:2])))
    out.append(Check("antichain coding nodes form an almost antichain", is_almost_antichain(A.a_coding)))
    gt = S.ground_truth
    bad = [n for n in range(levels) if antichain_structure(A, n).tables() != gt.prefix(n).tables()]
    out.append(Check(f"antichain structure matches T_n for n < {levels}", not bad, f"n = {bad[:3]}" if bad else ""))
    return out


def check_seven_cases(depth: int = 24, seed: int = 0) -> list[Check]:
    cc = cross_check(2, host_for_levels(depth, seed), depth)
    sets = cc.catalog.critical_sets
    want = {frozenset(v) for v in SEVEN_CASES.values()}
    return [
        Check(f"2-chain catalogs agree at depth {depth}", cc.ok, f"{len(cc.only_enumerated)}/{len(cc.only_brute)} unmatched"),
        Check("2-chain diaries are the seven cases", sets == want, f"{len(sets)} classes"),
    ]


def check_roundtrips(depth: int, seed: int = 0) -> Check:
    S = host_for_levels(min(depth, 30), seed)
    A = build(S, min(depth, 30))
    cc = cross_check(2, host_for_levels(24, seed), 24)
    objs = [S, S.ground_truth, A, cc.catalog, *cc.catalog.entries]
    bad = [type(o).__name__ for o in objs if not roundtrip_text(dump(o))]
    return Check("serialization round trips", not bad, ", ".join(bad))


def check_amalgamation(instances: int = 100, budget: int = 14, seed: int = 0) -> Check:
    hosts: dict[int, CodingTree] = {}
    for i in range(instances):
        rng = random.Random(seed + i)
        if i % 7 not in hosts:
            hosts[i % 7] = host(60, seed + i % 7)
        H = hosts[i % 7]
        d = rng.randint(0, 3)
        b = rng.randint(8, budget)
        cons = random_constraints(H, d, rng, b)
        try:
            res = amalgamate(H, d, cons, b)
        except ConstraintUnsatisfiable as e:
            return Check(f"{instances} amalgamation instances", False, f"instance {i}: {e}")
        bad = audit(H, d, cons, res)
        if bad or not a3_check(H, res, H.size):
            return Check(f"{instances} amalgamation instances", False, f"instance {i}: {(bad or ['A.3'])[0]}")
    return Check(f"{instances} amalgamation instances", True)


def check_hl(instances: int = 10, seed: int = 0) -> Check:
    for i in range(instances):
        inst = HLInstance.random(2, 5, 2, seed + i)
        if hl_micro_search(inst, 1).exhausted:
            return Check(f"{instances} level-product searches", False, f"seed {seed + i} exhausted")
    return Check(f"{instances} level-product searches", True)


SUITES: dict[str, Callable[[int, int, int], list[Check]]] = {}


def _suite(name: str):
    def deco(fn):
        SUITES[name] = fn
        return fn

    return deco


@_suite("core")
def core(depth: int, seed: int = 0, budget: int = 14) -> list[Check]:
    """Coding tree, decoding, antichain and the 2-chain catalog."""
    levels = min(depth, 30)
    return [
        check_shape(depth, seed),
        check_fidelity(min(depth, 50), seed),
        check_ground_truth(min(depth, 24), seed),
        *check_antichain(levels, seed),
        *check_seven_cases(24, seed),
        check_roundtrips(depth, seed),
    ]


@_suite("amalgamation")
def amalgamation(depth: int, seed: int = 0, budget: int = 14) -> list[Check]:
    """Seeded amalgamation instances with their audits."""
    return [check_amalgamation(100, budget, seed)]


@_suite("hl")
def hl(depth: int, seed: int = 0, budget: int = 14) -> list[Check]:
    """Small level-product searches."""
    return [check_hl(10, seed)]


@_suite("all")
def everything(depth: int, seed: int = 0, budget: int = 14) -> list[Check]:
    return [c for name in ("core", "amalgamation", "hl") for c in SUITES[name](depth, seed, budget)]


def run_suite(name: str, depth: int, seed: int = 0, budget: int = 14) -> list[Check]:
    try:
        return SUITES[name](depth, seed, budget)
    except PrtError as e:
        return [Check(f"suite {name}", False, f"{type(e).__name__}: {e}")]
