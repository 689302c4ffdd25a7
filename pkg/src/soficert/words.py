"""Reduced words in a finitely generated free group.

A word is a tuple of nonzero signed integers: ``1..rank`` are the
generators, negative values their inverses.  The text form uses ``a-z``
for generators and ``A-Z`` for inverses, with ``"1"`` (or the empty
string) for the identity.  Every ``Word`` is freely reduced; the
constructors below enforce this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_RANK = 26


def letter_key(letter: int) -> tuple[int, int]:
    """Sort key over signed letters: generators first, then inverses, ascending."""
    return (0, letter) if letter > 0 else (1, -letter)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    rank: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= MAX_RANK:
            raise ValueError(f"rank must be between 1 and {MAX_RANK}, got {self.rank}")
        for l in self.letters:
            if l == 0 or abs(l) > self.rank:
                raise ValueError(f"letter {l} out of range for rank {self.rank}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError(f"word {self.letters} is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __repr__(self) -> str:
        return f"Word({self.text()!r}, rank={self.rank})"

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def text(self) -> str:
        if not self.letters:
            return "1"
        return "".join(
            chr(ord("a") + l - 1) if l > 0 else chr(ord("A") - l - 1)
            for l in self.letters
        )

    def shortlex_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(l) for l in self.letters))


def identity(rank: int) -> Word:
    return Word((), rank)


def free_reduce(letters: Iterable[int], rank: int) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for l in letters:
        if stack and stack[-1] == -l:
            stack.pop()
        else:
            stack.append(l)
    return Word(tuple(stack), rank)


def parse_word(text: str, rank: int) -> Word:
    """Parse ``a-z``/``A-Z`` text; ``"1"`` and ``""`` denote the identity."""
    if text in ("", "1"):
        return identity(rank)
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"invalid letter {ch!r} in word {text!r}")
    return free_reduce(letters, rank)


def multiply(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} vs {v.rank}")
    return free_reduce(u.letters + v.letters, u.rank)


def invert(w: Word) -> Word:
    return Word(tuple(-l for l in reversed(w.letters)), w.rank)


def product(words: Sequence[Word], rank: int) -> Word:
    """Reduced product of a sequence of words (identity when empty)."""
    out = identity(rank)
    for w in words:
        out = multiply(out, w)
    return out
