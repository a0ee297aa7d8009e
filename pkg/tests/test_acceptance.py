"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are written
straight to the terminal, bypassing output capture.  Budgets are wall-clock
limits in seconds.
"""

from __future__ import annotations

import random
import time

import pytest

from prt.amalgamation import subtree_host
from prt.antichain import build, host_for_levels
from prt.approx import isomorphism_check, level_map, r_n
from prt.checks import check_amalgamation, check_antichain, check_fidelity, check_shape
from prt.cli import main
from prt.diary import classify
from prt.enumeration import (
    AXIOM,
    BOTH,
    BRUTE,
    SEVEN_CASES,
    ColoringReport,
    DiaryCatalog,
    SubtreeVerdict,
    axiom_candidates,
    brute_force_classes,
    coding_chains,
    cross_check,
    default_depth,
    enumerate_diaries,
    witness_persistence,
)
from prt.errors import DepthExhausted
from prt.formats import ChainFile, dump, parse, parse_catalog
from prt.hl import HLInstance, hl_micro_search, verify_witness, words
from prt.pseudotree import ExtensionSpec, Kind, TreeBuilder

SEVEN = {frozenset(ws) for ws in SEVEN_CASES.values()}


def _detail(c) -> str:
    return f"{c.name}: {c.detail}" if c.detail else c.name


@pytest.fixture
def verdict(capsys):
    """Record one criterion: print its line and fail on FAIL or overrun."""

    def record(n: int, ok: bool, detail: str, t0: float, budget: float):
        took = time.perf_counter() - t0
        in_time = took <= budget
        status = "PASS" if ok and in_time else "FAIL"
        note = "" if in_time else f", over the {budget:.0f}s budget"
        with capsys.disabled():
            print(f"\n{status} criterion {n}: {detail} ({took:.1f}s{note})")
        assert ok, detail
        assert in_time, f"criterion {n} took {took:.1f}s, budget {budget}s"

    return record


def test_criterion_01_seven_classes(verdict, tmp_path, capsys):
    t0 = time.perf_counter()
    cc = cross_check(2, host_for_levels(24, 0), 24)
    brute = brute_force_classes(2, 24, host_for_levels(24, 0))
    code = main(["enumerate", "--p", "2", "--depth", "24", "--out", str(tmp_path)])
    capsys.readouterr()
    cli_cat = parse_catalog((tmp_path / "catalog_p2.txt").read_text())
    ok = (
        code == 0
        and len(cli_cat) == 7
        and len(brute) == 7
        and cli_cat.critical_sets == SEVEN
        and brute.critical_sets == SEVEN
        and cc.ok
        and all(pv == BOTH for pv in cli_cat.provenance)
    )
    verdict(1, ok, f"enumerate gives {len(cli_cat)} classes, brute force {len(brute)}, sets match the seven cases: {ok}", t0, 120)


def test_criterion_02_unique_p1_diary(verdict):
    t0 = time.perf_counter()
    S = host_for_levels(4, 0)
    brute = brute_force_classes(1, 4, S)
    enum = enumerate_diaries(1, host=S, depth=4)
    ok = len(brute) == 1 and len(enum) == 1 and set(brute.entries) == set(enum.entries)
    verdict(2, ok, f"brute force {len(brute)} class, axiom enumeration {len(enum)} class", t0, 1)


def test_criterion_03_p3_stability(verdict):
    t0 = time.perf_counter()
    D = default_depth(3)
    S = host_for_levels(D + 4, 0)
    A = build(S, D + 4)
    lo = brute_force_classes(3, D, S, A)
    hi = brute_force_classes(3, D + 4, S, A)
    cc = cross_check(3, S, D)
    ok = set(lo.entries) == set(hi.entries) == set(cc.catalog.entries) and cc.ok
    verdict(3, ok, f"N_3 = {len(cc.catalog)} at D = {D}; brute(D) = brute(D+4) = enumerated(D): {ok}", t0, 600)


def test_criterion_04_shape(verdict):
    t0 = time.perf_counter()
    c = check_shape(200)
    verdict(4, c.passed, _detail(c), t0, 10)


def test_criterion_05_fidelity(verdict):
    t0 = time.perf_counter()
    c = check_fidelity(50)
    verdict(5, c.passed, _detail(c), t0, 30)


def test_criterion_06_antichain(verdict):
    t0 = time.perf_counter()
    cs = check_antichain(30)
    bad = [c.line() for c in cs if not c.passed]
    verdict(6, not bad, "; ".join(bad) or f"{len(cs)} checks over 30 levels", t0, 120)


def test_criterion_07_isomorphism_invariance(verdict):
    t0 = time.perf_counter()
    samples = 0
    problems = []
    for seed in range(50):
        S, T = subtree_host(600, seed)
        Tm = T.materialize()
        if not isomorphism_check(r_n(S, T.size), Tm):
            problems.append(f"seed {seed}: subtree not isomorphic")
            continue
        f = level_map(r_n(S, T.size), Tm)
        L = 1
        while True:
            try:
                AS = build(S, L + 1)
                build(T, L + 1)
            except DepthExhausted:
                break
            if len(AS.a_coding[-1]) >= T.size:
                break
            L += 1
        AS, AT = build(S, L), build(T, L)
        if [f[c] for c in AS.a_coding] != list(AT.a_coding):
            problems.append(f"seed {seed}: antichain not carried onto the subtree's antichain")
        for C in coding_chains(AS.a_coding, 2, S):
            samples += 1
            if classify(C, S) != classify(tuple(f[c] for c in C), S):
                problems.append(f"seed {seed}: {C}")
    ok = not problems and samples >= 500
    verdict(7, ok, f"{samples} sampled 2-chains over 50 subtrees, {len(problems)} mismatches", t0, 300)


def test_criterion_08_witness_persistence(verdict):
    t0 = time.perf_counter()
    rep = witness_persistence(50, 20)
    bad = [f"seed {v.seed} misses {list(v.missing)}" for v in rep.subtrees if not v.ok]
    ok = len(rep.subtrees) == 20 and not bad and all(len(v.realized) == 7 for v in rep.subtrees)
    verdict(8, ok, "; ".join(bad) or f"all 7 ids realized in each of {len(rep.subtrees)} subtrees", t0, 300)


def test_criterion_09_amalgamation(verdict):
    t0 = time.perf_counter()
    c = check_amalgamation(100, 14)
    verdict(9, c.passed, _detail(c), t0, 120)


def test_criterion_10_level_products(verdict):
    t0 = time.perf_counter()
    problems = []
    for seed in range(30):
        height = 2 + seed % 6
        inst = HLInstance.random(1, height, 1 + seed % 3, seed)
        res = hl_micro_search(inst, 1)
        if res.witness is None or not verify_witness(inst, res.witness, 1):
            problems.append(f"n=1 seed {seed}")
    for n, height in ((1, 5), (2, 4), (3, 3)):
        inst = HLInstance.constant(n, height, 2, 1)
        w = hl_micro_search(inst, 1).witness
        full = tuple(sorted(x for k in range(height + 1) for x in words(k)))
        if w is None or w.trees != (full,) * n or not verify_witness(inst, w, 1):
            problems.append(f"constant n={n}")
    for seed in range(50):
        inst = HLInstance.random(2, 6, 2, seed)
        res = hl_micro_search(inst, 1)
        if res.witness is None or not verify_witness(inst, res.witness, 1):
            problems.append(f"n=2 seed {seed}")
    ok = not problems
    verdict(10, ok, "; ".join(problems) or "30 n=1, 3 constant and 50 n=2 instances give verified witnesses", t0, 600)


def _fuzzed(rng: random.Random, kind: str):
    if kind == "pseudotree":
        b = TreeBuilder()
        while b.size < rng.randint(1, 25):
            e = ExtensionSpec(rng.choice(list(Kind)), rng.randrange(b.size))
            if b.is_valid(e):
                b.apply(e)
        return b.freeze()
    if kind == "codingtree":
        from prt.antichain import host

        return host(rng.randint(1, 48), rng.randrange(1000))
    if kind == "antichain":
        L = rng.randint(1, 12)
        return build(host_for_levels(L, rng.randrange(50)), L)
    pool = axiom_candidates(rng.randint(1, 3))[0]
    if kind == "diary":
        return rng.choice(pool)
    if kind == "catalog":
        es = sorted(rng.sample(pool, rng.randint(0, min(10, len(pool)))), key=lambda d: d.sort_key())
        return DiaryCatalog(es[0].p if es else 1, tuple(es), tuple(rng.choice([AXIOM, BRUTE, BOTH]) for _ in es))
    if kind == "report":
        ids = rng.sample(range(1, 60), rng.randint(0, 9))
        subs = tuple(
            SubtreeVerdict(rng.randrange(99), rng.randint(1, 999), rng.randint(1, 99), tuple(sorted(ids[:3])), tuple(sorted(ids[3:5])))
            for _ in range(rng.randint(0, 3))
        )
        return ColoringReport(
            rng.randint(1, 200),
            {k: rng.randrange(10**6) for k in ids},
            {k: rng.randrange(200) for k in ids if rng.random() < 0.7},
            subs,
            rng.randint(1, 4),
        )
    ws = tuple("".join(rng.choice("012") for _ in range(rng.randint(0, 20))) for _ in range(rng.randint(0, 4)))
    return ChainFile(rng.randint(1, 500), rng.randrange(100), ws)


KINDS = ("pseudotree", "codingtree", "antichain", "diary", "catalog", "report", "chain")


def test_criterion_11_round_trips(verdict):
    t0 = time.perf_counter()
    rng = random.Random(11)
    bad = []
    for i in range(100):
        kind = KINDS[i % len(KINDS)]
        text = dump(_fuzzed(rng, kind))
        if dump(parse(text)) != text:
            bad.append(f"#{i} {kind}")
    verdict(11, not bad, ", ".join(bad) or f"100 artifacts over {len(KINDS)} formats round-trip byte-exactly", t0, 60)
