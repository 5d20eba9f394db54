"""Text analysis: tokenization, stopword removal, Porter stemming.

Documents and queries must pass through the same pipeline so that index
statistics and query terms live in the same term space.  The pipeline is a
pure function of (text, config):

    tokenize -> lowercase -> drop stopwords -> stem

The default stopword list is the classic 33-word English set:

    a an and are as at be but by for if in into is it no not of on or
    such that the their then there these they this to was will with
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

DEFAULT_STOPWORDS: frozenset[str] = frozenset(
    """
    a an and are as at be but by for if in into is it no not of on or
    such that the their then there these they this to was will with
    """.split()
)

# Maximal runs of letters/digits (unicode-aware; underscore excluded).
DEFAULT_TOKEN_PATTERN = r"[^\W_]+"

_STEMMERS = ("none", "porter")


@dataclass(frozen=True)
class AnalyzerConfig:
    """Configuration of the analysis pipeline.

    ``stemmer`` is one of ``"none"`` or ``"porter"``.  ``token_pattern`` is a
    regex whose matches are the raw tokens.
    """

    lowercase: bool = True
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    stemmer: str = "porter"
    token_pattern: str = DEFAULT_TOKEN_PATTERN

    def __post_init__(self) -> None:
        if self.stemmer not in _STEMMERS:
            raise ValueError(f"unknown stemmer {self.stemmer!r}; expected one of {_STEMMERS}")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def analyze(text: str, config: AnalyzerConfig | None = None) -> list[str]:
    """Turn raw text into the token sequence used for indexing and querying.

    Total function: empty input (or all-stopword input) yields ``[]``.
    """
    if config is None:
        config = AnalyzerConfig()
    tokens = re.findall(config.token_pattern, text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    tokens = [t for t in tokens if t not in config.stopwords]
    if config.stemmer == "porter":
        tokens = [porter_stem(t) for t in tokens]
    return tokens


# ---------------------------------------------------------------------------
# Porter stemmer (the original 1980 algorithm).
#
# Letters are classified as consonants/vowels with 'y' acting as a vowel when
# preceded by a consonant.  m() counts VC sequences in the [C](VC)^m[V]
# decomposition of a stem; each step applies the longest matching suffix rule
# whose stem condition holds.
# ---------------------------------------------------------------------------

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    c = word[i]
    if c in _VOWELS:
        return False
    if c == "y":
        return True if i == 0 else not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_cons(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_cons(word, len(word) - 1)


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    n = len(word)
    if not (_is_cons(word, n - 3) and not _is_cons(word, n - 2) and _is_cons(word, n - 1)):
        return False
    return word[-1] not in "wxy"


# (suffix, replacement) rule tables; within a step only the longest matching
# suffix is attempted, so each table is ordered by suffix length descending.
_STEP2 = sorted(
    [
        ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
        ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
        ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
        ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
        ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ],
    key=lambda r: -len(r[0]),
)

_STEP3 = sorted(
    [
        ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
        ("ical", "ic"), ("ful", ""), ("ness", ""),
    ],
    key=lambda r: -len(r[0]),
)

_STEP4 = sorted(
    [
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ],
    key=len,
    reverse=True,
)


def porter_stem(word: str) -> str:
    """Stem a single lowercase token.

    Tokens shorter than three letters or containing non-alphabetic characters
    are returned unchanged (the measure-based rules are defined on letters
    only).
    """
    if len(word) < 3 or not word.isalpha():
        return word

    # Step 1a: plurals.
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("ss"):
        pass
    elif word.endswith("s"):
        word = word[:-1]

    # Step 1b: -eed / -ed / -ing.
    cleanup = False
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    elif word.endswith("ed"):
        if _has_vowel(word[:-2]):
            word = word[:-2]
            cleanup = True
    elif word.endswith("ing"):
        if _has_vowel(word[:-3]):
            word = word[:-3]
            cleanup = True
    if cleanup:
        if word.endswith(("at", "bl", "iz")):
            word += "e"
        elif _ends_double_cons(word) and word[-1] not in "lsz":
            word = word[:-1]
        elif _measure(word) == 1 and _ends_cvc(word):
            word += "e"

    # Step 1c: terminal y.
    if word.endswith("y") and _has_vowel(word[:-1]):
        word = word[:-1] + "i"

    # Step 2: double suffixes, m(stem) > 0.
    for suffix, repl in _STEP2:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 0:
                word = stem + repl
            break

    # Step 3: -ic-, -full, -ness etc., m(stem) > 0.
    for suffix, repl in _STEP3:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 0:
                word = stem + repl
            break

    # Step 4: strip residual suffixes, m(stem) > 1.
    for suffix in _STEP4:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 1:
                if suffix == "ion" and stem[-1:] not in ("s", "t"):
                    break
                word = stem
            break

    # Step 5a: terminal e.
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # Step 5b: -ll reduction.
    if _measure(word) > 1 and _ends_double_cons(word) and word.endswith("l"):
        word = word[:-1]

    return word
