"""Property-based checks of the structural invariants."""

from __future__ import annotations

import random
from functools import lru_cache

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from prt.amalgamation import amalgamate, audit, random_constraints
from prt.antichain import audit_level, build, host, host_for_levels, is_almost_antichain
from prt.approx import isomorphism_check, r_n
from prt.coding_tree import decode_structure
from prt.diary import canonicalize, classify, delta_of, diary_axioms_check, similar
from prt.enumeration import (
    AXIOM,
    BOTH,
    BRUTE,
    ColoringReport,
    DiaryCatalog,
    SubtreeVerdict,
    axiom_candidates,
    brute_force_classes,
    case_id,
    coding_chains,
)
from prt.formats import ChainFile, dump, parse, roundtrip_text
from prt.hl import HLInstance, hl_micro_search, verify_witness
from prt.pseudotree import Between, ExtensionSpec, GreaterLeft, Kind, NewRay, TreeBuilder, extend, new_root
from prt.words import meet

SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
words = st.text(alphabet="012", max_size=12)


@lru_cache(maxsize=None)
def cached_host(depth: int, seed: int):
    return host(depth, seed)


@lru_cache(maxsize=None)
def cached_antichain(levels: int, seed: int):
    S = host_for_levels(levels, seed)
    return S, build(S, levels)


@st.composite
def trees(draw, max_points=14):
    b = TreeBuilder()
    for _ in range(draw(st.integers(0, max_points - 1))):
        kind = draw(st.sampled_from(list(Kind)))
        target = draw(st.integers(0, b.size - 1))
        e = ExtensionSpec(kind, target)
        if b.is_valid(e):
            b.apply(e)
    return b.freeze()


# -- words -----------------------------------------------------------------------------


@given(words, words, words)
def test_meet_is_a_semilattice(a, b, c):
    assert meet(a, b) == meet(b, a)
    assert meet(a, a) == a
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert a.startswith(meet(a, b)) and b.startswith(meet(a, b))


# -- pseudotrees ---------------------------------------------------------------------------


@given(trees())
@settings(max_examples=60, deadline=None)
def test_random_trees_satisfy_axioms(t):
    assert t.check_invariants() == []
    assert sorted(set(t.ray)) == list(range(max(t.ray) + 1))


@given(trees(), st.sampled_from([GreaterLeft, NewRay, Between]), st.data())
@settings(max_examples=60, deadline=None)
def test_extend_keeps_input_as_substructure(t, ctor, data):
    i = data.draw(st.integers(0, t.size - 1))
    e = ctor(i)
    assume(t._built.is_valid(e))
    before = t.tables()
    u = extend(t, e)
    assert t.tables() == before
    assert u.size == t.size + 1
    for i in t.points:
        for j in t.points:
            assert u.prec(i, j) == t.prec(i, j) and u.meet(i, j) == t.meet(i, j) and u.lex(i, j) == t.lex(i, j)
    if e.kind is Kind.NEW_RAY:
        assert u.ray[-1] == max(t.ray) + 1
    else:
        assert u.ray[-1] in t.ray


# -- coding trees ------------------------------------------------------------------------------


@given(st.integers(0, 40), st.integers(2, 45))
@settings(max_examples=30, deadline=None)
def test_decoding_equals_stage(seed, n):
    S = cached_host(46, seed)
    assert decode_structure(S, S.coding_words[:n]).tables() == S.ground_truth.prefix(n - 1).tables()


@st.composite
def amalgamations(draw):
    seed = draw(st.integers(0, 10_000))
    H = cached_host(60, seed % 5)
    rng = random.Random(seed)
    d = rng.randint(0, 3)
    budget = rng.randint(8, 14)
    cons = random_constraints(H, d, rng, budget)
    return H, d, cons, amalgamate(H, d, cons, budget)


@given(amalgamations())
@settings(max_examples=40, deadline=None)
def test_amalgamation_audit_property(inst):
    H, d, cons, b = inst
    assert audit(H, d, cons, b) == []


@given(amalgamations(), amalgamations(), amalgamations(), st.integers(1, 8))
@settings(max_examples=30, deadline=None)
def test_isomorphism_is_an_equivalence(x, y, z, k):
    subs = []
    for H, _, _, b in (x, y, z):
        assume(b.size >= k)
        subs.append(b.truncate(k))
    a, b, c = subs
    assert isomorphism_check(a, a)
    assert isomorphism_check(a, b) == isomorphism_check(b, a)
    if isomorphism_check(a, b) and isomorphism_check(b, c):
        assert isomorphism_check(a, c)
    # same host: every truncation is isomorphic to r_k of that host
    assert isomorphism_check(a, r_n(x[0], k))


# -- antichains -------------------------------------------------------------------------------


@given(st.integers(0, 30))
@settings(max_examples=8, deadline=None)
def test_antichain_audits_for_any_seed(seed):
    S, A = cached_antichain(12, seed)
    assert all(audit_level(A, m).passed for m in range(12))
    assert is_almost_antichain(A.a_coding)


# -- diaries ----------------------------------------------------------------------------------


@st.composite
def chains(draw):
    seed = draw(st.integers(0, 3))
    S, A = cached_antichain(20, seed)
    p = draw(st.integers(1, 3))
    pool = list(coding_chains(A.a_coding, p, S))
    return S, draw(st.sampled_from(pool))


@given(chains())
@settings(max_examples=80, deadline=None)
def test_delta_canonicalizes_to_a_similar_valid_diary(x):
    S, C = x
    D = delta_of(C, S)
    d = canonicalize(D)
    assert similar(D, d) and similar(d, D)
    assert diary_axioms_check(d.critical, d.nodes).ok
    assert d.p == len(C)


@given(chains(), chains())
@settings(max_examples=60, deadline=None)
def test_similarity_is_equality_on_canonical_forms(x, y):
    a, b = classify(x[1], x[0]), classify(y[1], y[0])
    assert similar(a, b) == (a == b)


@given(chains())
@settings(max_examples=60, deadline=None)
def test_two_chains_fall_in_seven_cases(x):
    S, C = x
    d = classify(C, S)
    assert d.p != 2 or case_id(d) is not None


# -- catalogs --------------------------------------------------------------------------------


@given(st.integers(1, 3), st.integers(1, 20), st.integers(0, 6))
@settings(max_examples=20, deadline=None)
def test_catalog_monotone_in_depth(p, d, extra):
    S, A = cached_antichain(26, 0)
    lo = set(brute_force_classes(p, d, S, A).entries)
    hi = set(brute_force_classes(p, min(d + extra, 26), S, A).entries)
    assert lo <= hi


# -- serialization fuzz -------------------------------------------------------------------------


@lru_cache(maxsize=None)
def diary_pool():
    return tuple(axiom_candidates(3)[0])


@st.composite
def artifacts(draw):
    kind = draw(st.sampled_from(["tree", "coding", "antichain", "diary", "catalog", "report", "chain"]))
    if kind == "tree":
        return draw(trees(20))
    if kind == "coding":
        return cached_host(draw(st.integers(1, 40)), draw(st.integers(0, 20)))
    if kind == "antichain":
        S, A = cached_antichain(draw(st.integers(1, 10)), draw(st.integers(0, 3)))
        return A
    if kind == "diary":
        return draw(st.sampled_from(diary_pool()))
    if kind == "catalog":
        es = draw(st.lists(st.sampled_from(diary_pool()), unique=True, max_size=12))
        prov = draw(st.lists(st.sampled_from([AXIOM, BRUTE, BOTH]), min_size=len(es), max_size=len(es)))
        es_sorted = sorted(es, key=lambda d: d.sort_key())
        return DiaryCatalog(3, tuple(es_sorted), tuple(prov))
    if kind == "report":
        ids = draw(st.lists(st.integers(1, 40), unique=True, max_size=8))
        counts = {k: draw(st.integers(0, 10**6)) for k in ids}
        first = {k: draw(st.integers(0, 99)) for k in ids if draw(st.booleans())}
        subs = tuple(
            SubtreeVerdict(draw(st.integers(0, 99)), draw(st.integers(1, 9999)), draw(st.integers(1, 999)), r, m)
            for r, m in draw(st.lists(st.tuples(st.just((1, 2, 3)), st.sampled_from([(), (4,), (5, 7)])), max_size=3))
        )
        return ColoringReport(draw(st.integers(1, 200)), counts, first, subs, draw(st.integers(1, 5)))
    return ChainFile(draw(st.integers(1, 500)), draw(st.integers(0, 99)), tuple(draw(st.lists(words, max_size=4))))


@given(artifacts())
@settings(max_examples=100, deadline=None)
def test_every_artifact_round_trips(obj):
    text = dump(obj)
    assert roundtrip_text(text)
    assert dump(parse(text)) == text


# -- level-product search -------------------------------------------------------------------------


@given(st.integers(1, 3), st.integers(2, 5), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_witnesses_always_reverify(n, height, colors, target, seed):
    assume(n < 3 or height <= 4)
    inst = HLInstance.random(n, height, colors, seed)
    res = hl_micro_search(inst, target)
    if res.witness is not None:
        assert verify_witness(inst, res.witness, target)
        assert len(res.witness.levels) >= target
