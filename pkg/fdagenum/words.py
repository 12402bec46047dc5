"""
Decreasing words over the integer alphabet {0, ..., n}.

A word is stored as a plain tuple of vertex indices, multiplicities being
implicit through repetition. Python tuple comparison is exactly the
lexicographical order used for child words: equal prefixes are resolved by
length, and the empty word is smaller than every other word.
"""
from enum import IntEnum
from typing import List, Sequence, Tuple

DecreasingWord = Tuple[int, ...]

EMPTY = ()


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def is_decreasing(w: Sequence[int]) -> bool:
    return all(w[i] >= w[i + 1] for i in range(len(w) - 1))


def lex_compare(w1: Sequence[int], w2: Sequence[int]) -> Ordering:
    w1, w2 = tuple(w1), tuple(w2)
    if w1 < w2:
        return Ordering.LESS
    if w1 > w2:
        return Ordering.GREATER
    return Ordering.EQUAL


def suffix_cut(w: Sequence[int]) -> DecreasingWord:
    return tuple(w[:-1])


def minimal_words(wbar: Sequence[int], n: int) -> List[DecreasingWord]:
    """Minimal words of the decreasing words bounded by `wbar` on {0, ..., n}.

    Words are emitted in a fixed order: the single letters above the first
    letter of `wbar`, then the prefix extensions by position and letter, then
    `wbar` followed by each letter up to its last one.
    """
    wbar = tuple(wbar)
    if not is_decreasing(wbar):
        raise ValueError(f"Word {format_word(wbar)!r} is not decreasing")
    if len(wbar) == 0:
        return [(i,) for i in range(n + 1)]
    if wbar[0] > n:
        return []

    words = [(i,) for i in range(wbar[0] + 1, n + 1)]
    for k in range(1, len(wbar)):
        if wbar[k] < wbar[k - 1]:
            prefix = wbar[:k]
            for i in range(wbar[k] + 1, wbar[k - 1] + 1):
                words.append(prefix + (i,))
    for i in range(wbar[-1] + 1):
        words.append(wbar + (i,))
    return words


def is_minimal(w: Sequence[int], wbar: Sequence[int]) -> bool:
    w, wbar = tuple(w), tuple(wbar)
    return w > wbar and suffix_cut(w) <= wbar


def format_word(w: Sequence[int]) -> str:
    return " ".join(str(a) for a in w)


def parse_word(text: str) -> DecreasingWord:
    try:
        w = tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ValueError(f"Invalid letter in word {text.strip()!r}")
    if any(a < 0 for a in w):
        raise ValueError(f"Negative letter in word {text.strip()!r}")
    if not is_decreasing(w):
        raise ValueError(f"Word {text.strip()!r} is not decreasing")
    return w
