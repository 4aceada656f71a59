"""Sentence splitting, token normalization, and surface-shape classes.

Sentences end at ``.``, ``!`` or ``?`` followed by whitespace and a capital
letter (or the end of the text).  Within a sentence, punctuation is peeled
off into its own tokens, elided clitics are split after the apostrophe
(``l'avion`` -> ``l'`` + ``avion``), and listed multiword expressions are
folded into single tokens with underscores.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

SHAPE_LOWERCASE = "lowercase"
SHAPE_CAPITALIZED = "capitalized"
SHAPE_ALLCAPS = "all-caps"
SHAPE_MIXED = "mixed"
SHAPE_NUMERIC = "numeric"
SHAPE_PUNCTUATION = "punctuation"

_TERMINALS = ".!?"
_WORD_INTERNAL = "'’-_"
_NUMERIC_EXTRA = ".,:/-%"


@dataclass(frozen=True)
class Token:
    surface: str
    shape: str
    compound: bool = False


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


def shape_of(surface: str) -> str:
    """Classify a surface form by its letter/digit/case makeup."""
    if not surface:
        raise ValueError("empty surface")
    letters = [c for c in surface if c.isalpha()]
    has_digit = any(c.isdigit() for c in surface)
    if not letters:
        if not has_digit:
            return SHAPE_PUNCTUATION
        if all(c.isdigit() or c in _NUMERIC_EXTRA for c in surface):
            return SHAPE_NUMERIC
        return SHAPE_MIXED
    if has_digit:
        return SHAPE_MIXED
    if all(c.isupper() for c in letters):
        return SHAPE_ALLCAPS if len(letters) >= 2 else SHAPE_CAPITALIZED
    if all(c.islower() for c in letters):
        return SHAPE_LOWERCASE
    if letters[0].isupper():
        return SHAPE_CAPITALIZED
    return SHAPE_MIXED


def tokenize(text: str, compounds: Iterable[str] = (),
             split_clitics: bool = True) -> list[Sentence]:
    """Split ``text`` into sentences of shape-classified tokens.

    ``compounds`` lists multiword expressions (space-separated); the longest
    match at each position is folded into one token whose internal spaces
    become underscores.  Returns ``[]`` for empty or whitespace-only text.
    """
    compound_seqs = sorted({tuple(c.split()) for c in compounds if c.strip()},
                           key=len, reverse=True)
    sentences = []
    for chunk in _split_sentences(text):
        surfaces: list[str] = []
        for word in chunk.split():
            surfaces.extend(_split_word(word, split_clitics))
        tokens = tuple(Token(surface, shape_of(surface), folded)
                       for surface, folded in _fold_compounds(surfaces, compound_seqs))
        if tokens:
            sentences.append(Sentence(tokens))
    return sentences


def load_compounds(path: Union[str, Path]) -> list[str]:
    """One multiword expression per line, UTF-8; blank lines ignored."""
    with open(path, "r", encoding="utf-8") as handle:
        return [line.strip() for line in handle if line.strip()]


def _split_sentences(text: str) -> list[str]:
    chunks = []
    begin = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINALS:
            j = i + 1
            while j < n and text[j] in _TERMINALS:
                j += 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            if k >= n or (k > j and text[k].isupper()):
                chunks.append(text[begin:j])
                begin = k
            i = j
        else:
            i += 1
    chunks.append(text[begin:])
    return [c for c in (chunk.strip() for chunk in chunks) if c]


def _is_word_char(c: str) -> bool:
    return c.isalnum() or c in _WORD_INTERNAL


def _split_word(word: str, split_clitics: bool) -> list[str]:
    out: list[str] = []
    i, j = 0, len(word)
    while i < j and not _is_word_char(word[i]):
        out.append(word[i])
        i += 1
    trailing: list[str] = []
    while j > i and not _is_word_char(word[j - 1]):
        trailing.append(word[j - 1])
        j -= 1
    core = word[i:j]
    if core:
        out.extend(_split_clitics(core) if split_clitics else [core])
    out.extend(reversed(trailing))
    return out


def _split_clitics(core: str) -> list[str]:
    parts = []
    begin = 0
    for idx in range(1, len(core) - 1):
        if core[idx] in "'’" and core[idx - 1].isalpha() and core[idx + 1].isalpha():
            parts.append(core[begin:idx + 1])
            begin = idx + 1
    parts.append(core[begin:])
    return [p for p in parts if p]


def _fold_compounds(surfaces: Sequence[str],
                    compound_seqs: Sequence[tuple[str, ...]]) -> list[tuple[str, bool]]:
    out: list[tuple[str, bool]] = []
    i = 0
    while i < len(surfaces):
        for seq in compound_seqs:
            if tuple(surfaces[i:i + len(seq)]) == seq:
                out.append(("_".join(seq), True))
                i += len(seq)
                break
        else:
            out.append((surfaces[i], False))
            i += 1
    return out
