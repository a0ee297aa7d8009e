"""Level-product homogeneity search on small ray trees."""

from __future__ import annotations

from itertools import combinations, product

import pytest

from prt.errors import InstanceTooLarge
from prt.hl import HLInstance, HLWitness, hl_micro_search, verify_witness, words


def naive_exists(inst: HLInstance, target: int) -> bool:
    """Unpruned enumeration of shared-level strong subtrees (tiny instances only)."""
    top = min(inst.heights)
    levels = [m for m in inst.splitting_levels if m < top]

    def constant(nodes, c):
        return all(inst.color(t) == c for t in product(*nodes))

    def grow(nodes, M, k, c):
        if not constant(nodes, c):
            return False
        if k + 1 == len(M):
            return True
        m = M[k + 1]
        slots = [(i, v + d) for i, lv in enumerate(nodes) for v in lv for d in "02"]
        for tails in product(*(words(m - len(stem)) for _, stem in slots)):
            nxt = [[] for _ in nodes]
            for (i, stem), tail in zip(slots, tails):
                nxt[i].append(stem + tail)
            if grow(nxt, M, k + 1, c):
                return True
        return False

    for M in combinations(levels, target):
        for roots in product(*(words(M[0]) for _ in inst.heights)):
            if grow([[r] for r in roots], M, 0, inst.color(roots)):
                return True
    return False


@pytest.mark.parametrize("height", [3, 4, 5, 6])
def test_single_tree_always_has_a_witness(height):  # [TRIVIAL]
    for seed in range(15):
        inst = HLInstance.random(1, height, 2, seed)
        res = hl_micro_search(inst, 1)
        assert res.witness is not None and verify_witness(inst, res.witness, 1)


@pytest.mark.parametrize("n,height", [(1, 4), (2, 5), (3, 3)])
def test_constant_coloring_gives_full_trees(n, height):  # [TRIVIAL]
    inst = HLInstance.constant(n, height, 2, 1)
    w = hl_micro_search(inst, 1).witness
    full = tuple(sorted(x for k in range(height + 1) for x in words(k)))
    assert w is not None and w.trees == (full,) * n and w.color == 1


def test_two_trees_height_six_small_batch():  # [DERIVED]
    for seed in range(10):
        inst = HLInstance.random(2, 6, 2, seed)
        res = hl_micro_search(inst, 1)
        assert res.witness is not None and verify_witness(inst, res.witness, 1)


@pytest.mark.parametrize("n,height,target", [(1, 4, 2), (1, 4, 3), (2, 3, 2), (2, 4, 2)])
def test_agrees_with_naive_enumeration(n, height, target):  # [DERIVED]
    for seed in range(12):
        inst = HLInstance.random(n, height, 2, seed)
        res = hl_micro_search(inst, target)
        assert res.exhausted != naive_exists(inst, target), seed


def test_limits_raise():  # [TRIVIAL]
    with pytest.raises(InstanceTooLarge):
        HLInstance.random(4, 3, 2, 0)
    with pytest.raises(InstanceTooLarge):
        HLInstance.random(2, 8, 2, 0)
    with pytest.raises(InstanceTooLarge):
        HLInstance.random(2, 3, 4, 0)


def test_target_beyond_levels_is_exhausted():  # [TRIVIAL]
    res = hl_micro_search(HLInstance.random(2, 3, 2, 0), 4)
    assert res.exhausted and res.evaluations >= 0


def test_target_must_be_positive():  # [TRIVIAL]
    with pytest.raises(ValueError):
        hl_micro_search(HLInstance.constant(1, 3), 0)


def test_tampered_witness_fails_verification():  # [TRIVIAL]
    inst = HLInstance.random(2, 5, 2, 4)
    w = hl_micro_search(inst, 2).witness
    assert w is not None
    assert not verify_witness(inst, HLWitness(w.levels, w.trees, 1 - w.color), 2)
    assert not verify_witness(inst, HLWitness(w.levels, w.trees[:1], w.color), 2)


def test_incomplete_coloring_rejected():  # [TRIVIAL]
    inst = HLInstance((2, 2), 0, 2, {})
    with pytest.raises(ValueError):
        hl_micro_search(inst, 1)


def test_distinguished_tree_sets_the_domain():  # [TRIVIAL]
    inst = HLInstance.random(2, 4, 2, 1, i_star=1)
    assert inst.splitting_levels == [0, 1, 2, 3]
    res = hl_micro_search(inst, 1)
    assert res.witness is not None and verify_witness(inst, res.witness, 1)
