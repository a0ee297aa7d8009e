"""Ternary words: the node currency of coding trees, subtrees and diaries.

A word is a plain ``str`` over the digits ``'0'``, ``'1'``, ``'2'``.  Prefix
order is the tree order and Python's string order is the lexicographic order
with ``0 < 1 < 2``.
"""

from __future__ import annotations

import os
from typing import Iterable

DIGITS = "012"


def is_word(w: object) -> bool:
    return isinstance(w, str) and all(ch in DIGITS for ch in w)


def meet(s: str, t: str) -> str:
    """Longest common prefix."""
    return os.path.commonprefix([s, t])


def is_prefix(s: str, t: str) -> bool:
    """``s ⊆ t`` in the tree order (non-strict)."""
    return t.startswith(s)


def comparable(s: str, t: str) -> bool:
    return s.startswith(t) or t.startswith(s)


def meet_closure(words: Iterable[str]) -> set[str]:
    """Close a set of words under pairwise longest common prefixes."""
    ws = sorted(set(words))
    out = set(ws)
    # Adjacent pairs in lex order generate every pairwise meet.
    for a, b in zip(ws, ws[1:]):
        out.add(meet(a, b))
    return out


def leaf_key(w: str) -> str:
    """Sort key placing a word after all of its proper extensions."""
    return w + "3"


def render(w: str) -> str:
    """Readable form used in files: the empty word is written ``-``."""
    return w if w else "-"


def parse(token: str) -> str:
    if token == "-":
        return ""
    if not token or not is_word(token):
        raise ValueError(f"not a ternary word: {token!r}")
    return token
