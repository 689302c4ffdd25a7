"""Stallings graphs and coset tables for finitely generated subgroups of F_k.

A subgroup given by generator words is represented by its folded core
graph: a based, edge-labeled graph in which a reduced word lies in the
subgroup exactly when it reads a closed path at the basepoint.  Folding
the graph together with fresh paths spelling a finite "avoid" set and
then completing every partial letter map to a permutation yields a
finite-index overgroup that still excludes every avoid word; this is
the separating-subgroup constructor used throughout the package.

Conventions fixed once and shared by every module:

* ``coset_of`` applies letters left to right starting at coset 0, so
  tables enumerate walks of the K\\G kind and ``coset_of(w) == 0`` iff
  ``w`` lies in the subgroup.
* Left cosets uK (the ones coset actions are built from) are labeled by
  ``left_coset_of(u) = coset_of(u^-1)``; left multiplication by ``g``
  then permutes labels by the walk of ``g^-1``, which is a genuine
  homomorphism into Sym(n).
* Canonical vertex numbering is breadth-first from the basepoint with
  generator edges before inverse edges, labels ascending; Schreier
  representatives are shortlex-minimal in the same letter order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .permutations import compose, identity_perm, inverse
from .words import Word, identity, invert, letter_key

DEFAULT_CORE_CAP = 10**6


class InseparableError(ValueError):
    """An avoid word already lies in the subgroup."""

    def __init__(self, word: Word):
        self.word = word
        super().__init__(f"word {word.text()!r} lies in the subgroup; cannot separate")


class CoreTooLargeError(RuntimeError):
    """The image permutation group exceeded the configured size cap."""


# ---------------------------------------------------------------------------
# folded graphs


@dataclass(frozen=True)
class StallingsGraph:
    """Folded, based (basepoint 0), edge-labeled graph with labels 1..rank."""

    rank: int
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]  # sorted (source, label, target)

    @cached_property
    def _steps(self) -> dict[tuple[int, int], int]:
        table: dict[tuple[int, int], int] = {}
        for u, l, v in self.edges:
            table[(u, l)] = v
            table[(v, -l)] = u
        return table

    def step(self, vertex: int, letter: int) -> int | None:
        return self._steps.get((vertex, letter))

    def trace(self, w: Word, start: int = 0) -> int | None:
        """Endpoint of reading ``w`` from ``start``; None if some edge is missing."""
        state = start
        for l in w.letters:
            nxt = self.step(state, l)
            if nxt is None:
                return None
            state = nxt
        return state

    def degree(self, vertex: int) -> int:
        return sum(1 for (v, _l) in self._steps if v == vertex)

    def dump(self) -> str:
        lines = [f"rank: {self.rank}", f"vertices: {self.vertex_count}", "basepoint: 0"]
        for u, l, v in self.edges:
            lines.append(f"  {u} --{chr(ord('a') + l - 1)}--> {v}")
        return "\n".join(lines)


_SIGNED_LETTERS_CACHE: dict[int, tuple[int, ...]] = {}


def signed_letters(rank: int) -> tuple[int, ...]:
    """All signed letters in canonical order: 1..rank then -1..-rank."""
    if rank not in _SIGNED_LETTERS_CACHE:
        _SIGNED_LETTERS_CACHE[rank] = tuple(range(1, rank + 1)) + tuple(
            -i for i in range(1, rank + 1)
        )
    return _SIGNED_LETTERS_CACHE[rank]


def _fold(edges: set[tuple[int, int, int]], n: int) -> tuple[set[tuple[int, int, int]], dict[int, int]]:
    """Fold: repeatedly merge the smallest clashing vertex pair until deterministic.

    Returns the folded edge set over representative vertices and the map
    vertex -> representative.
    """
    parent = list(range(n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    while True:
        canon = {(find(u), l, find(v)) for u, l, v in edges}
        clash: tuple[int, int] | None = None
        out: dict[tuple[int, int], int] = {}
        inc: dict[tuple[int, int], int] = {}
        for u, l, v in sorted(canon):
            for table, key, other in ((out, (u, l), v), (inc, (v, l), u)):
                seen = table.get(key)
                if seen is None:
                    table[key] = other
                elif seen != other:
                    pair = (min(seen, other), max(seen, other))
                    if clash is None or pair < clash:
                        clash = pair
        if clash is None:
            return canon, {v: find(v) for v in range(n)}
        a, b = clash
        parent[find(b)] = find(a)


def _canonical(rank: int, edges: set[tuple[int, int, int]], base: int) -> StallingsGraph:
    """Renumber vertices by BFS from the basepoint, letters in canonical order."""
    steps: dict[tuple[int, int], int] = {}
    for u, l, v in edges:
        steps[(u, l)] = v
        steps[(v, -l)] = u
    order = {base: 0}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for l in signed_letters(rank):
            w = steps.get((v, l))
            if w is not None and w not in order:
                order[w] = len(order)
                queue.append(w)
    renamed = sorted((order[u], l, order[v]) for u, l, v in edges)
    return StallingsGraph(rank, len(order), tuple(renamed))


def _prune(edges: set[tuple[int, int, int]], base: int) -> set[tuple[int, int, int]]:
    """Drop non-basepoint vertices of degree <= 1 until none remain."""
    while True:
        degree: dict[int, int] = {}
        for u, l, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        dead = {v for v, d in degree.items() if d <= 1 and v != base}
        if not dead:
            return edges
        edges = {(u, l, v) for u, l, v in edges if u not in dead and v not in dead}


def core_graph(generators: Sequence[Word], rank: int) -> StallingsGraph:
    """Folded core graph of the subgroup generated by ``generators``."""
    edges: set[tuple[int, int, int]] = set()
    fresh = 1
    for w in generators:
        if w.rank != rank:
            raise ValueError(f"generator rank {w.rank} != {rank}")
        if w.is_identity:
            continue
        cur = 0
        for i, l in enumerate(w.letters):
            nxt = 0 if i == len(w.letters) - 1 else fresh
            if i < len(w.letters) - 1:
                fresh += 1
            if l > 0:
                edges.add((cur, l, nxt))
            else:
                edges.add((nxt, -l, cur))
            cur = nxt
    folded, _ = _fold(edges, fresh)
    return _canonical(rank, _prune(folded, 0), 0)


def contains(graph: StallingsGraph, w: Word) -> bool:
    """Subgroup membership: does ``w`` read a closed path at the basepoint?"""
    if w.rank != graph.rank:
        raise ValueError(f"word rank {w.rank} != graph rank {graph.rank}")
    return graph.trace(w) == 0


# ---------------------------------------------------------------------------
# coset tables


@dataclass(frozen=True)
class CosetTable:
    """Complete transitive permutation table: one permutation per generator."""

    rank: int
    size: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.rank:
            raise ValueError("need one image array per generator")
        for img in self.images:
            if sorted(img) != list(range(self.size)):
                raise ValueError(f"image array {img} is not a permutation of {self.size} points")

    @cached_property
    def inverses(self) -> tuple[tuple[int, ...], ...]:
        return tuple(inverse(img) for img in self.images)

    def step(self, state: int, letter: int) -> int:
        if letter > 0:
            return self.images[letter - 1][state]
        return self.inverses[-letter - 1][state]

    def walk(self, w: Word, start: int = 0) -> int:
        state = start
        for l in w.letters:
            state = self.step(state, l)
        return state

    def walk_permutation(self, w: Word) -> tuple[int, ...]:
        """The permutation of cosets effected by reading ``w`` (letters left to right)."""
        perm = identity_perm(self.size)
        for l in w.letters:
            step = self.images[l - 1] if l > 0 else self.inverses[-l - 1]
            perm = compose(step, perm)
        return perm


def coset_of(table: CosetTable, w: Word) -> int:
    """Walk ``w`` letter by letter from coset 0.  Zero iff ``w`` is in the subgroup."""
    if w.rank != table.rank:
        raise ValueError(f"word rank {w.rank} != table rank {table.rank}")
    return table.walk(w)


def left_coset_of(table: CosetTable, w: Word) -> int:
    """Label of the left coset wK.  Equal labels exactly when u^-1 v is in K."""
    return table.walk(invert(w))


def action_permutation(table: CosetTable, w: Word) -> tuple[int, ...]:
    """Left multiplication by ``w`` on left-coset labels (a homomorphism in w)."""
    return table.walk_permutation(invert(w))


def hall_completion(graph: StallingsGraph, avoid: Sequence[Word]) -> CosetTable:
    """Finite-index overgroup table excluding every ``avoid`` word.

    Attaches a fresh path spelling each avoid word at the basepoint,
    folds, then completes every partial letter map to a permutation by
    matching unmatched sources to unmatched targets in ascending vertex
    order.  Postconditions: subgroup generators still close at coset 0;
    every avoid word walks to a nonzero coset.
    """
    for w in avoid:
        if w.rank != graph.rank:
            raise ValueError(f"avoid word rank {w.rank} != graph rank {graph.rank}")
        if w.is_identity:
            raise InseparableError(w)
        if contains(graph, w):
            raise InseparableError(w)
    edges = set(graph.edges)
    fresh = graph.vertex_count
    for w in avoid:
        cur = 0
        for l in w.letters:
            if l > 0:
                edges.add((cur, l, fresh))
            else:
                edges.add((fresh, -l, cur))
            cur = fresh
            fresh += 1
    folded, _ = _fold(edges, fresh)
    merged = _canonical(graph.rank, folded, 0)
    for w in avoid:
        if merged.trace(w) == 0:  # cannot happen after the membership precondition
            raise InseparableError(w)
    images = []
    for l in range(1, graph.rank + 1):
        img: dict[int, int] = {}
        covered = set()
        for u, lab, v in merged.edges:
            if lab == l:
                img[u] = v
                covered.add(v)
        sources = [v for v in range(merged.vertex_count) if v not in img]
        targets = [v for v in range(merged.vertex_count) if v not in covered]
        for s, t in zip(sources, targets):
            img[s] = t
        images.append(tuple(img[v] for v in range(merged.vertex_count)))
    return CosetTable(graph.rank, merged.vertex_count, tuple(images))


def schreier_representative(table: CosetTable, coset: int) -> Word:
    """Shortlex-minimal word walking coset 0 to ``coset``."""
    if not 0 <= coset < table.size:
        raise ValueError(f"coset {coset} out of range for table of size {table.size}")
    parent: dict[int, tuple[int, int]] = {0: (-1, 0)}
    queue = [0]
    while queue:
        v = queue.pop(0)
        if v == coset:
            break
        for l in signed_letters(table.rank):
            w = table.step(v, l)
            if w not in parent:
                parent[w] = (v, l)
                queue.append(w)
    letters: list[int] = []
    v = coset
    while v != 0:
        v, l = parent[v]
        letters.append(l)
    letters.reverse()
    return Word(tuple(letters), table.rank)


def image_group(table: CosetTable, cap: int = DEFAULT_CORE_CAP) -> list[tuple[int, ...]]:
    """Elements of the permutation group generated by the table, in the
    order discovered by a breadth-first walk closure from the identity."""
    steps = [table.images[i] for i in range(table.rank)] + [
        table.inverses[i] for i in range(table.rank)
    ]
    first = identity_perm(table.size)
    seen = {first: 0}
    order = [first]
    queue = [first]
    while queue:
        u = queue.pop(0)
        for p in steps:
            v = compose(p, u)
            if v not in seen:
                if len(order) >= cap:
                    raise CoreTooLargeError(
                        f"image group exceeds cap {cap} on {table.size} points"
                    )
                seen[v] = len(order)
                order.append(v)
                queue.append(v)
    return order


def normal_core(table: CosetTable, cap: int = DEFAULT_CORE_CAP) -> CosetTable:
    """Table of the kernel of the walk map F_k -> Sym(size).

    The kernel's cosets are the elements of the image permutation group,
    walked by left composition, so the result has size equal to the
    image group's order.
    """
    elements = image_group(table, cap)
    index = {p: i for i, p in enumerate(elements)}
    images = []
    for i in range(table.rank):
        gen = table.images[i]
        images.append(tuple(index[compose(gen, p)] for p in elements))
    return CosetTable(table.rank, len(elements), tuple(images))
