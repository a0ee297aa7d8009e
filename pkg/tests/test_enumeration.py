"""Diary catalogs: axiom enumeration, brute force, cross-checks and persistence."""

from __future__ import annotations

import warnings

import pytest

from prt.antichain import build, host_for_levels
from prt.diary import CriticalType, classify, diary_axioms_check, similar
from prt.enumeration import (
    AXIOM,
    BOTH,
    BRUTE,
    SEVEN_CASES,
    DiaryCatalog,
    axiom_candidates,
    brute_force_classes,
    case_id,
    census,
    coding_chains,
    cross_check,
    enumerate_diaries,
    merge,
    witness_persistence,
)
from prt.errors import DepthWarning

SEVEN = {frozenset(v) for v in SEVEN_CASES.values()}


@pytest.fixture(scope="module")
def S40():
    S = host_for_levels(40, 0)
    return S, build(S, 40)


def test_two_chains_have_seven_diaries(H24, A24):  # [PAPER]
    cat = enumerate_diaries(2, None, H24, 24, A24)
    assert len(cat) == 7 and cat.critical_sets == SEVEN


def test_one_chains_have_one_diary(H24, A24):  # [PAPER]
    cat = enumerate_diaries(1, None, H24, 4, A24)
    assert len(cat) == 1


def test_three_chain_enumeration_matches_brute_force(S40):  # [DERIVED]
    S, A = S40
    assert set(enumerate_diaries(3, None, S, 36, A).entries) == set(brute_force_classes(3, 36, S, A).entries)


def test_brute_force_two_chains_after_first_depth(H24, A24):  # [PAPER]
    c = census(A24, 2, H24, 24)
    d0 = max(c.first.values()) + 1  # first depth at which all seven appear
    assert d0 <= 24
    for depth in (d0, 24):
        assert brute_force_classes(2, depth, H24, A24).critical_sets == SEVEN
    assert len(brute_force_classes(2, d0 - 1, H24, A24)) < 7


def test_brute_force_one_chains(H24, A24):  # [TRIVIAL]
    cat = brute_force_classes(1, 24, H24, A24)
    assert len(cat) == 1 and cat.entries[0].critical == (("", CriticalType.TERMINAL),)


def test_brute_force_monotone_in_depth(S40):  # [TRIVIAL]
    S, A = S40
    for p in (2, 3):
        prev: set = set()
        for depth in range(1, 41, 3):
            cur = set(brute_force_classes(p, depth, S, A).entries)
            assert prev <= cur
            prev = cur


def test_brute_force_deterministic():  # [TRIVIAL]
    a = brute_force_classes(3, 20, host_for_levels(20, 2))
    b = brute_force_classes(3, 20, host_for_levels(20, 2))
    assert a.entries == b.entries


def test_cross_check_two_chains(cc2):  # [PAPER]
    assert cc2.ok and cc2.only_enumerated == () and cc2.only_brute == ()
    assert cc2.catalog.accepted and len(cc2.catalog) == 7


def test_cross_check_one_chains():  # [TRIVIAL]
    cc = cross_check(1, None, 4)
    assert cc.ok and len(cc.catalog) == 1


def test_three_chain_catalog_stable_between_36_and_40(S40):  # [DERIVED]
    S, A = S40
    assert brute_force_classes(3, 36, S, A).entries == brute_force_classes(3, 40, S, A).entries


def test_axiom_search_for_two_chains_gives_seven_shapes():  # [DERIVED]
    cands, truncated = axiom_candidates(2)
    assert not truncated and {d.critical_set for d in cands} == SEVEN


def test_small_height_cap_warns(H24, A24):  # [TRIVIAL]
    with pytest.warns(DepthWarning):
        enumerate_diaries(2, 3, H24, 24, A24)


def test_default_run_has_no_warning(H24, A24):  # [TRIVIAL]
    with warnings.catch_warnings():
        warnings.simplefilter("error", DepthWarning)
        enumerate_diaries(2, None, H24, 24, A24)


# -- catalog invariants -------------------------------------------------------------------


def test_entries_pairwise_non_similar(S40):  # [TRIVIAL]
    S, A = S40
    es = cross_check(3, S, 36).catalog.entries
    for i, a in enumerate(es):
        assert not any(similar(a, b) for b in es[i + 1 :])


def test_entries_pass_axioms(cc2):  # [TRIVIAL]
    assert all(diary_axioms_check(d.critical, d.nodes).ok for d in cc2.catalog.entries)


def test_no_eighth_class_at_depth_40(S40):  # [PAPER]
    S, A = S40
    for C in coding_chains(A.a_coding, 2, S):
        assert case_id(classify(C, S)) is not None


def test_merge_provenance(cc2):  # [TRIVIAL]
    es = cc2.catalog.entries
    a = DiaryCatalog.of(2, es[:5], AXIOM)
    b = DiaryCatalog.of(2, es[3:], BRUTE)
    m = merge(a, b)
    prov = dict(zip(m.entries, m.provenance))
    assert prov[es[0]] == AXIOM and prov[es[4]] == BOTH and prov[es[6]] == BRUTE
    assert not m.accepted


def test_catalog_rejects_missing_provenance(cc2):  # [TRIVIAL]
    with pytest.raises(ValueError):
        DiaryCatalog(2, cc2.catalog.entries, ())


def test_ids_are_case_numbers_for_two_chains(cc2):  # [PAPER]
    assert sorted(cc2.catalog.id_of(d) for d in cc2.catalog.entries) == list(range(1, 8))


# -- persistence -----------------------------------------------------------------------------


def test_host_realizes_all_seven():  # [PAPER]
    rep = witness_persistence(24, 0)
    assert rep.host_realized == tuple(range(1, 8))


def test_shallow_truncation_misses_cases():  # [TRIVIAL]
    rep = witness_persistence(2, 0)
    assert len(rep.host_realized) < 7


def test_subtree_persistence_small_run():  # [DERIVED]
    rep = witness_persistence(24, 2, seed=3)
    assert len(rep.subtrees) == 2
    for v in rep.subtrees:
        assert set(v.realized) | set(v.missing) == set(SEVEN_CASES)
        assert v.subtree_levels > 0 and v.host_steps > 0
