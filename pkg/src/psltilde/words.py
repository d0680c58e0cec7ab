"""Reduced words in free generators and their cyclic canonical forms."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

Letter = tuple[str, int]  # (generator name, exponent +1 or -1)


def _free_reduce(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, exp in letters:
        if out and out[-1][0] == gen and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class CurveWord:
    """Freely reduced word; letters are (generator, +-1) pairs."""

    letters: tuple[Letter, ...]

    def __init__(self, letters=()):
        expanded: list[Letter] = []
        for gen, exp in letters:
            if exp == 0:
                continue
            sign = 1 if exp > 0 else -1
            expanded.extend((gen, sign) for _ in range(abs(exp)))
        object.__setattr__(self, "letters", _free_reduce(expanded))

    def __mul__(self, other: "CurveWord") -> "CurveWord":
        return CurveWord(self.letters + other.letters)

    def inv(self) -> "CurveWord":
        return CurveWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.letters if g == gen)


EMPTY_WORD = CurveWord(())


def word(*tokens) -> CurveWord:
    """Build a word from tokens like "a1", ("b1", -1), or CurveWords."""
    letters: list[Letter] = []
    for tok in tokens:
        if isinstance(tok, CurveWord):
            letters.extend(tok.letters)
        elif isinstance(tok, str):
            letters.append((tok, 1))
        else:
            letters.append(tok)
    return CurveWord(letters)


def parse_word(text: str) -> CurveWord:
    """Parse "a1 b1^-1 c2" (whitespace-separated, integer exponents)."""
    letters: list[Letter] = []
    for tok in text.split():
        if "^" in tok:
            gen, _, expstr = tok.partition("^")
            letters.append((gen, int(expstr)))
        else:
            letters.append((tok, 1))
    return CurveWord(letters)


def format_word(w: CurveWord) -> str:
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w.letters)


def cyclic_reduce(w: CurveWord) -> CurveWord:
    letters = list(w.letters)
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] \
            and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
    return CurveWord(letters)


def _letter_key(letter: Letter) -> tuple[str, int]:
    gen, exp = letter
    return (gen, 0 if exp == 1 else 1)  # positive exponent sorts first


@lru_cache(maxsize=200_000)
def _canonical_letters(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    w = cyclic_reduce(CurveWord(letters))
    if not w.letters:
        return ()
    best = None
    best_key = None
    for candidate in (w.letters, w.inv().letters):
        n = len(candidate)
        doubled = candidate + candidate
        for i in range(n):
            rot = doubled[i:i + n]
            key = tuple(_letter_key(l) for l in rot)
            if best_key is None or key < best_key:
                best, best_key = rot, key
    return tuple(best)


def canonical_form(w: CurveWord) -> CurveWord:
    """Lexicographically least rotation among the cyclic reduction of w and
    its inverse; idempotent, shared by all conjugates and by w^-1."""
    return CurveWord(_canonical_letters(w.letters))


def substitute(w: CurveWord, images: dict[str, CurveWord]) -> CurveWord:
    """Apply a generator substitution (endomorphism of the free group)."""
    letters: list[Letter] = []
    for gen, exp in w.letters:
        img = images[gen]
        letters.extend(img.letters if exp == 1 else img.inv().letters)
    return CurveWord(letters)
