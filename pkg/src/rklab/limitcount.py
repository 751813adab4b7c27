"""Bounded congruence closure over words, counting limit-model classes.

The limit-model operators reduce "how many limit models" to factoring
the set of infinite index sequences by a family of word identities.  At
desk scale we factor the nonempty words of length at most L over a
finite alphabet instead: the congruence generated by the ground
instances of the identity schemas, closed under two-sided concatenation
contexts that stay within the length bound.  Equations whose
application would leave the bound are skipped in both directions, so
small-L counts can carry truncation artifacts; the stabilization check
(compare L against L+1) is the supported evidence, and the symbolic
target attached to a system is displayed, never asserted, at finite L.

The empty word is excluded: the sequences being factored are infinite
paths, approximated here by their nonempty prefixes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .cardinal import CONTINUUM, Card, render

Word = tuple[int, ...]

WORD_BUDGET = 200_000


@dataclass(frozen=True)
class Schema:
    """One parameterized identity; ``kind`` selects the instance generator."""

    kind: str
    param: int | None = None


@dataclass(frozen=True)
class IdentitySystem:
    kind: str  # "lmt" | "lms" | "free"
    schemas: tuple[Schema, ...]
    target: Card
    n: int | None = None
    reading: str = "gt"
    seq_len: int | None = None

    def describe(self) -> str:
        tag = self.kind
        if self.n is not None:
            tag += f" n={self.n}"
        elif self.kind != "free":
            tag += " w-case"
        return f"{tag}, target {render(self.target)}"


FREE_SYSTEM = IdentitySystem("free", (), CONTINUUM)


def _words_up_to(alphabet: int, max_len: int) -> list[Word]:
    out: list[Word] = []
    for length in range(1, max_len + 1):
        out.extend(itertools.product(range(alphabet), repeat=length))
    return out


def _run(a: int, b: int) -> Word:
    return tuple(range(a, b + 1))


def schema_instances(schema: Schema, alphabet: int, max_len: int) -> Iterator[tuple[Word, Word]]:
    k = schema.kind
    if k == "single_rename":
        # n-1 ~ m for every m >= n
        n = schema.param
        assert n is not None
        if n - 1 < alphabet:
            for m in range(n, alphabet):
                yield (n - 1,), (m,)
    elif k == "idem_below":
        n = schema.param
        assert n is not None
        if max_len >= 2:
            for m in range(min(n, alphabet)):
                yield (m, m), (m,)
    elif k == "idem_all":
        if max_len >= 2:
            for m in range(alphabet):
                yield (m, m), (m,)
    elif k == "drop_to_min":
        # a strictly higher prefix collapses onto its last letter
        for w in _words_up_to(alphabet, max_len):
            if len(w) >= 2 and min(w[:-1]) > w[-1]:
                yield w, (w[-1],)
    elif k == "pair_to_run":
        # a jump up fills in as the full ascending run
        for a in range(alphabet):
            for b in range(a + 1, alphabet):
                if b - a + 1 <= max_len:
                    yield (a, b), _run(a, b)
    elif k == "ascend_to_power":
        # a word topped by a strict maximum collapses to that letter repeated
        for w in _words_up_to(alphabet, max_len):
            if len(w) >= 2 and max(w[:-1]) < w[-1]:
                yield w, (w[-1],) * len(w)
    elif k == "ascend_to_run":
        for w in _words_up_to(alphabet, max_len):
            s = len(w) - 1
            if s >= 1 and w[0] + s <= w[-1]:
                yield w, _run(w[0], w[0] + s)
    elif k == "ascend_to_capped_run":
        # first side condition is read as first+s > last ("gt") or >= ("geq");
        # combined with last = first + t and s > t both readings coincide
        for w in _words_up_to(alphabet, max_len):
            s = len(w) - 1
            t = w[-1] - w[0]
            if s >= 1 and 0 < t < s:
                yield w, _run(w[0], w[0] + t) + (w[0] + t,) * (s - t)
    else:
        raise ValueError(f"unknown schema kind {k!r}")


def instantiate(sys: IdentitySystem, alphabet: int, max_len: int) -> list[tuple[Word, Word]]:
    """All ground instances with both sides nonempty and within the bound."""
    if alphabet < 1 or max_len < 1:
        raise ValueError("alphabet and length bound must be positive")
    out: list[tuple[Word, Word]] = []
    seen: set[tuple[Word, Word]] = set()
    for schema in sys.schemas:
        for lhs, rhs in schema_instances(schema, alphabet, max_len):
            if not lhs or not rhs or lhs == rhs:
                continue
            if len(lhs) > max_len or len(rhs) > max_len:
                continue
            if (lhs, rhs) not in seen:
                seen.add((lhs, rhs))
                out.append((lhs, rhs))
    return out


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@lru_cache(maxsize=64)
def _class_table(
    sys: IdentitySystem, alphabet: int, max_len: int, budget: int
) -> tuple[tuple[Word, ...], dict[Word, Word]]:
    total = sum(alphabet**l for l in range(1, max_len + 1))
    if total > budget:
        raise ValueError(f"{total} words exceed the budget {budget}")
    words = _words_up_to(alphabet, max_len)
    index = {w: i for i, w in enumerate(words)}
    by_lhs: dict[Word, list[Word]] = {}
    for lhs, rhs in instantiate(sys, alphabet, max_len):
        by_lhs.setdefault(lhs, []).append(rhs)
    uf = _UnionFind(len(words))
    for w in words:
        wl = len(w)
        for i in range(wl):
            for j in range(i + 1, wl + 1):
                factor = w[i:j]
                for rhs in by_lhs.get(factor, ()):
                    if wl - (j - i) + len(rhs) <= max_len:
                        uf.union(index[w], index[w[:i] + rhs + w[j:]])
    groups: dict[int, list[Word]] = {}
    for w in words:
        groups.setdefault(uf.find(index[w]), []).append(w)
    reps: list[Word] = []
    normal: dict[Word, Word] = {}
    for members in groups.values():
        rep = min(members, key=lambda w: (len(w), w))
        reps.append(rep)
        for w in members:
            normal[w] = rep
    reps.sort(key=lambda w: (len(w), w))
    return tuple(reps), normal


def count_classes(
    sys: IdentitySystem, alphabet: int, max_len: int, budget: int = WORD_BUDGET
) -> tuple[int, list[Word]]:
    """Class count plus length-lex minimal representatives."""
    reps, _ = _class_table(sys, alphabet, max_len, budget)
    return len(reps), list(reps)


def normal_form(
    sys: IdentitySystem,
    w: Word,
    max_len: int,
    alphabet: int | None = None,
    budget: int = WORD_BUDGET,
) -> Word:
    """Length-lex minimum of w's class at the given bound; idempotent."""
    if not w:
        raise ValueError("words are nonempty")
    if len(w) > max_len:
        raise ValueError("word exceeds the length bound")
    if alphabet is None:
        alphabet = max(w) + 1
    if any(not (0 <= letter < alphabet) for letter in w):
        raise ValueError("letter outside the alphabet")
    _, normal = _class_table(sys, alphabet, max_len, budget)
    return normal[w]


def render_word(w: Word) -> str:
    return ".".join(str(x) for x in w)


def stabilization(
    sys: IdentitySystem, alphabet: int, max_len: int, budget: int = WORD_BUDGET
) -> dict[str, object]:
    """Counts at L and L+1 with the agreement flag the CLI reports."""
    count_here, reps = count_classes(sys, alphabet, max_len, budget)
    count_next, _ = count_classes(sys, alphabet, max_len + 1, budget)
    return {
        "L": max_len,
        "count": count_here,
        "count_next": count_next,
        "stable": count_here == count_next,
        "representatives": reps,
        "target": sys.target,
    }
