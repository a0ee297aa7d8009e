"""The coding tree of 1-types, node rays, decoding and meets."""

from __future__ import annotations

import pytest

from prt.antichain import build, host, host_for_levels
from prt.checks import shape_defect
from prt.coding_tree import decode_structure, frontier_margin, generate, theta_node
from prt.errors import NodeAbsent, NotCodingNode
from prt.pseudotree import is_substructure_embedding
from prt.words import meet


def test_level_sizes_of_depth_four():  # [PAPER]
    S = generate(4)
    assert [len(S.level(k)) for k in range(4)] == [1, 3, 5, 7]


def test_depth_one_is_the_root():  # [TRIVIAL]
    S = generate(1)
    assert S.level(0) == [""] and S.coding(0) == ""


def test_node_count_closed_form():  # [DERIVED]
    assert generate(50).node_count() == sum(2 * n + 1 for n in range(50)) == 2500


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_shape_invariants(seed):  # [PAPER]
    S = host(80, seed)
    assert shape_defect(S, 80) == ""


def test_generate_rejects_zero_depth():  # [TRIVIAL]
    with pytest.raises(ValueError):
        generate(0)


# -- theta -------------------------------------------------------------------------------


def test_theta_of_root_is_zero(S60):  # [PAPER]
    assert theta_node(S60, "") == 0


def test_theta_of_coding_nodes_is_ground_truth_ray():  # [TRIVIAL]
    S = generate(30)
    assert all(theta_node(S, S.coding(n)) == S.ground_truth.ray[n] for n in range(30))


def test_theta_of_plain_node_is_least_coding_extension(S60):  # [PAPER]
    for k in range(40):
        for w in S60.level(k):
            c = next((c for c in S60.coding_words if len(c) >= len(w) and c.startswith(w)), None)
            if c is not None:
                assert theta_node(S60, w) == theta_node(S60, c)


def test_condition_e_digit_zero_or_two_keeps_theta(S60):  # [PAPER]
    seen = 0
    for n, c in enumerate(S60.coding_words):
        for d in "02":
            nxt = S60.least_coding_extension(c + d) if S60.contains(c + d) else None
            if nxt is not None:
                assert theta_node(S60, nxt) == theta_node(S60, c)
                seen += 1
    assert seen > 20


def test_theta_unknown_only_at_frontier():  # [DERIVED]
    depth = 400
    S = host(depth, 0)
    k = frontier_margin(depth)
    assert 0 < k < depth
    for n in range(depth - k):
        for w in S.level(n):
            if w.startswith("2") and set(w[1:]) <= {"0"}:
                continue  # below the root: never realized
            assert theta_node(S, w) is not None, w


def test_theta_of_absent_node_raises(S60):  # [TRIVIAL]
    with pytest.raises(NodeAbsent):
        theta_node(S60, "11111")


# -- meet -----------------------------------------------------------------------------


def test_meet_examples():  # [TRIVIAL]
    assert meet("012", "020") == "0"
    assert meet("0121", "0121") == "0121"
    assert meet("", "2") == ""


# -- decoding -------------------------------------------------------------------------


@pytest.mark.parametrize("seed", [0, 4])
def test_decode_first_coding_nodes_is_stage(seed):  # [PAPER]
    S = host(60, seed)
    for n in range(60):
        assert decode_structure(S, S.coding_words[: n + 1]).tables() == S.ground_truth.prefix(n).tables()


def test_decode_single_node(S60):  # [TRIVIAL]
    assert decode_structure(S60, [S60.coding(0)]).size == 1


def test_decode_rejects_plain_nodes(S60):  # [TRIVIAL]
    plain = next(w for w in S60.level(3) if not S60.is_coding(w))
    with pytest.raises(NotCodingNode):
        decode_structure(S60, [S60.coding(0), plain])


def test_decode_antichain_prefix_embeds_stage():  # [DERIVED]
    S = host_for_levels(20, 0)
    A = build(S, 20)
    for m in range(1, 21):
        dec = decode_structure(S, A.a_coding[:m])
        assert is_substructure_embedding(dec, S.ground_truth.prefix(m - 1), list(range(m)))
