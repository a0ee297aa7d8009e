"""Exhaustive search for level-product homogeneity on small ray trees.

Tree ``i`` is the full binary tree ``{0,2}^{<= h_i}``, so it splits at
every length below its height.  The domain of a coloring is the level
product: all tuples ``(t_0, ..., t_{n-1})`` of nodes of one common length
``ℓ`` drawn from the splitting lengths of the distinguished tree.

A witness is a tuple of strong subtrees ``V_i`` sharing one set ``M`` of
splitting lengths, on whose level product the coloring is constant.  The
answer is about the finite instance only: "exhausted" means no such
witness exists within these heights.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import InstanceTooLarge

MAX_TREES = 3
MAX_HEIGHT = 7
MAX_COLORS = 3


def words(length: int) -> list[str]:
    return ["".join(p) for p in product("02", repeat=length)]


def check_limits(heights: tuple[int, ...], colors: int) -> None:
    if not 1 <= len(heights) <= MAX_TREES:
        raise InstanceTooLarge(f"{len(heights)} trees; the limit is {MAX_TREES}")
    if any(not 1 <= h <= MAX_HEIGHT for h in heights):
        raise InstanceTooLarge(f"heights {heights}; the limit is {MAX_HEIGHT}")
    if not 1 <= colors <= MAX_COLORS:
        raise InstanceTooLarge(f"{colors} colors; the limit is {MAX_COLORS}")


@dataclass(frozen=True)
class HLInstance:
    heights: tuple[int, ...]
    i_star: int
    colors: int
    coloring: Mapping[tuple[str, ...], int] = field(repr=False, hash=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.heights)

    @property
    def splitting_levels(self) -> list[int]:
        """Lengths of splitting nodes of tree ``i_star`` at which every tree has nodes."""
        top = min(self.heights)
        return [ell for ell in range(self.heights[self.i_star]) if ell <= top]

    def domain(self):
        for ell in self.splitting_levels:
            yield from product(*(words(ell) for _ in self.heights))

    def color(self, t: tuple[str, ...]) -> int:
        return self.coloring[t]

    def check(self) -> None:
        """Validate limits, totality and the color range."""
        check_limits(self.heights, self.colors)
        if not 0 <= self.i_star < self.n:
            raise ValueError("i_star out of range")
        for t in self.domain():
            c = self.coloring.get(t)
            if c is None or not 0 <= c < self.colors:
                raise ValueError(f"coloring undefined or out of range at {t}")

    @classmethod
    def random(cls, n: int, height: int, colors: int, seed: int, i_star: int = 0) -> HLInstance:
        rng = random.Random(seed)
        heights = (height,) * n
        check_limits(heights, colors)
        inst = cls(heights, i_star, colors, {})
        col = {t: rng.randrange(colors) for t in inst.domain()}
        return cls(heights, i_star, colors, col)

    @classmethod
    def constant(cls, n: int, height: int, colors: int = 2, value: int = 0, i_star: int = 0) -> HLInstance:
        check_limits((height,) * n, colors)
        inst = cls((height,) * n, i_star, colors, {})
        return cls(inst.heights, i_star, colors, {t: value for t in inst.domain()})


@dataclass(frozen=True)
class HLWitness:
    levels: tuple[int, ...]  # M
    trees: tuple[tuple[str, ...], ...]  # node sets of the V_i, sorted
    color: int


@dataclass(frozen=True)
class HLResult:
    witness: HLWitness | None
    evaluations: int

    @property
    def exhausted(self) -> bool:
        return self.witness is None


def _closure(nodes) -> set[str]:
    return {w[:k] for w in nodes for k in range(len(w) + 1)}


def verify_witness(inst: HLInstance, w: HLWitness, target: int = 1) -> bool:
    """Re-evaluate a witness from its node sets alone."""
    if len(w.trees) != inst.n:
        return False
    for V, h in zip(w.trees, inst.heights):
        if not V or any(len(v) > h or set(v) - set("02") for v in V):
            return False
    V = [set(t) for t in w.trees]
    # splitting nodes of V_{i*}: meets of incomparable pairs, themselves in V
    star = V[inst.i_star]
    splits = {v for v in star if v + "0" in _closure(star) and v + "2" in _closure(star)}
    M = sorted({len(s) for s in splits})
    if tuple(M) != w.levels or len(M) < target:
        return False
    for ell in M:
        if ell not in inst.splitting_levels:
            return False
        rows = [sorted({v[:ell] for v in Vi if len(v) >= ell}) for Vi in V]
        if any(not r for r in rows):
            return False
        for t in product(*rows):
            if inst.color(t) != w.color:
                return False
    return True


class _Search:
    def __init__(self, inst: HLInstance, target: int):
        self.inst = inst
        self.target = target
        self.evals = 0
        self.top = min(inst.heights)  # splitting lengths must lie below every height
        self.allowed = set(inst.splitting_levels)

    def f(self, t: tuple[str, ...]) -> int:
        self.evals += 1
        return self.inst.color(t)

    def full_trees(self) -> HLWitness | None:
        inst = self.inst
        M = inst.splitting_levels
        if len(M) < self.target or len(M) != inst.heights[inst.i_star]:
            return None
        colors = {self.f(t) for t in inst.domain()}
        if len(colors) != 1:
            return None
        trees = tuple(tuple(sorted(w for k in range(h + 1) for w in words(k))) for h in inst.heights)
        return HLWitness(tuple(M), trees, colors.pop())

    def run(self) -> HLWitness | None:
        full = self.full_trees()
        if full is not None:
            return full
        n = self.inst.n
        for m0 in sorted(self.allowed):
            if m0 >= self.top:
                continue
            for roots in product(*(words(m0) for _ in range(n))):
                c = self.f(roots)
                found = self.extend([[r] for r in roots], [m0], c)
                if found is not None:
                    return found
        return None

    def extend(self, levels: list[list[str]], M: list[int], c: int) -> HLWitness | None:
        if len(M) == self.target:
            return self._finish(levels, M, c)
        for m in range(M[-1] + 1, self.top):
            if m not in self.allowed:
                continue
            # round robin over the trees so products close early and prune
            slots = [
                (i, lv[k] + d)
                for k in range(max(map(len, levels)))
                for i, lv in enumerate(levels)
                if k < len(lv)
                for d in "02"
            ]
            for chosen in self._fills(slots, 0, [[] for _ in levels], m, c):
                found = self.extend([list(x) for x in chosen], M + [m], c)
                if found is not None:
                    return found
        return None

    def _fills(self, slots, k: int, chosen: list[list[str]], m: int, c: int):
        """Every choice of one length-``m`` extension per slot with a monochromatic product."""
        if k == len(slots):
            yield chosen
            return
        i, stem = slots[k]
        others = [chosen[j] for j in range(len(chosen)) if j != i]
        for tail in words(m - len(stem)):
            a = stem + tail
            # each tuple is checked once, when its last coordinate arrives
            if all(others) and any(
                self.f(rest[:i] + (a,) + rest[i:]) != c for rest in product(*others)
            ):
                continue
            chosen[i].append(a)
            yield from self._fills(slots, k + 1, chosen, m, c)
            chosen[i].pop()

    def _finish(self, levels: list[list[str]], M: list[int], c: int) -> HLWitness:
        # the top splitting nodes split once more into leaves
        trees = []
        for lv in levels:
            tops = [v + d for v in lv for d in "02"]
            trees.append(tuple(sorted(_closure(tops))))
        return HLWitness(tuple(M), tuple(trees), c)


def hl_micro_search(inst: HLInstance, target_split_levels: int) -> HLResult:
    """Find strong subtrees with ``target_split_levels`` splitting levels and a constant level product."""
    if target_split_levels < 1:
        raise ValueError("the target must be at least one splitting level")
    inst.check()
    s = _Search(inst, target_split_levels)
    w = s.run()
    if w is not None and not verify_witness(inst, w, target_split_levels):
        raise AssertionError("search produced a witness that fails re-evaluation")
    return HLResult(w, s.evals)
