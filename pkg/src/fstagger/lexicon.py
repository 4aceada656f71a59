"""Full-form lexicon, tag inventories, and the per-sentence tag lattice.

The lexicon maps surface forms to weighted full-tag readings.  Analyses of
a token are the union of its exact lexicon hits, a lowercase fallback plus
a penalized proper-noun reading for capitalized words, a penalized acronym
reading for all-caps words, a zero-cost punctuation reading for
punctuation tokens, and always a high-cost UNKNOWN reading so that every
downstream composition has at least one accepting path.

The tag set carries two inventories: the full morphological tags used by
the lattice and the constraint stage, and the collapsed tags used for
statistics and output.  Generic constraint tags expand by name prefix over
the full inventory (reserved tags match only themselves).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from .config import WeightConfig
from .tokenizer import (SHAPE_ALLCAPS, SHAPE_CAPITALIZED, SHAPE_PUNCTUATION,
                        Sentence, Token)
from .wfst import SymbolTable, Wfst

UNKNOWN_TAG = "UNKNOWN"
PROPER_TAG = "NPR"
ACRONYM_TAG = "ACR"
BOUNDARY_TAG = "SB"
PUNCT_TAG = "PUNCT"
RESERVED_TAGS = (UNKNOWN_TAG, PROPER_TAG, ACRONYM_TAG, BOUNDARY_TAG, PUNCT_TAG)

AMBIGUITY_BUCKETS = ("0", "1", "2", "3", "4-8", ">8")


class TagSet:
    """Full-tag inventory with its collapse onto the short inventory.

    The reserved tags collapse to themselves and are always present.
    """

    def __init__(self, collapsed: Mapping[str, str]):
        mapping = dict(collapsed)
        for tag in RESERVED_TAGS:
            mapping.setdefault(tag, tag)
        self.collapsed: dict[str, str] = mapping
        self.full_tags = frozenset(mapping)
        self.short_tags = frozenset(mapping.values())

    def collapse(self, tag: str) -> str:
        try:
            return self.collapsed[tag]
        except KeyError:
            raise ValueError(f"unknown tag {tag!r}") from None

    def expand(self, generic: str) -> list[str]:
        """Full tags whose name starts with ``generic``, sorted.

        Reserved tags never match by prefix, only exactly, so a short
        generic like ``P`` cannot accidentally cover PUNCT.
        """
        if generic in RESERVED_TAGS:
            return [generic]
        return sorted(t for t in self.full_tags
                      if t not in RESERVED_TAGS and t.startswith(generic))

    def __contains__(self, tag: str) -> bool:
        return tag in self.collapsed

    def __repr__(self):
        return f"TagSet({len(self.full_tags)} full, {len(self.short_tags)} short)"


def load_tagset(path: Union[str, Path]) -> TagSet:
    """Read ``full_tag<TAB>short_tag`` lines."""
    mapping: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise ValueError(f"{path}:{lineno}: expected full_tag<TAB>short_tag")
            full, short = fields
            if full in mapping and mapping[full] != short:
                raise ValueError(f"{path}:{lineno}: conflicting collapse for {full!r}")
            mapping[full] = short
    return TagSet(mapping)


class Lexicon:
    """Surface -> weighted tag readings, with duplicate entries kept at
    their minimum weight."""

    def __init__(self):
        self._entries: dict[str, dict[str, float]] = {}

    def add(self, surface: str, tag: str, weight: float = 0.0) -> None:
        readings = self._entries.setdefault(surface, {})
        if tag not in readings or weight < readings[tag]:
            readings[tag] = float(weight)

    def lookup(self, surface: str) -> Mapping[str, float]:
        return self._entries.get(surface, {})

    def surfaces(self) -> list[str]:
        return sorted(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    def __len__(self) -> int:
        return sum(len(r) for r in self._entries.values())

    def __repr__(self):
        return f"Lexicon({len(self._entries)} surfaces, {len(self)} entries)"


def load_lexicon(path: Union[str, Path], tags: TagSet) -> Lexicon:
    """Read ``surface<TAB>full_tag[<TAB>weight]`` lines; weight defaults to 0."""
    lex = Lexicon()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
                raise ValueError(
                    f"{path}:{lineno}: expected surface<TAB>tag[<TAB>weight]")
            surface, tag = fields[0], fields[1]
            if tag not in tags:
                raise ValueError(f"{path}:{lineno}: unknown tag {tag!r}")
            weight = 0.0
            if len(fields) == 3:
                try:
                    weight = float(fields[2])
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad weight {fields[2]!r}") from None
            lex.add(surface, tag, weight)
    return lex


def analyses(token: Token, lex: Lexicon, cfg: WeightConfig) -> dict[str, float]:
    """All weighted tag readings for one token; never empty.

    Capitalized tokens fall back to their lowercase lexicon entry and gain
    a proper-noun reading at ``w_proper``; all-caps tokens gain an acronym
    reading at ``w_acronym`` whether or not the surface is listed;
    punctuation gets its reserved tag at cost zero.  Every token keeps an
    UNKNOWN reading at ``w_unk``.  Readings produced by several routes keep
    the minimum weight.
    """
    found: dict[str, float] = {}

    def put(tag: str, weight: float) -> None:
        if tag not in found or weight < found[tag]:
            found[tag] = weight

    for tag, weight in lex.lookup(token.surface).items():
        put(tag, weight)
    if token.shape == SHAPE_CAPITALIZED:
        for tag, weight in lex.lookup(token.surface.lower()).items():
            put(tag, weight)
        put(PROPER_TAG, cfg.w_proper)
    elif token.shape == SHAPE_ALLCAPS:
        put(ACRONYM_TAG, cfg.w_acronym)
    elif token.shape == SHAPE_PUNCTUATION:
        put(PUNCT_TAG, 0.0)
    put(UNKNOWN_TAG, cfg.w_unk)
    return found


def tag_symbol_table(tags: TagSet) -> SymbolTable:
    """Shared label alphabet: full tags first, then any extra short tags."""
    table = SymbolTable(sorted(tags.full_tags))
    for short in sorted(tags.short_tags - tags.full_tags):
        table.add(short)
    return table


def build_lattice(sentence: Sentence, lex: Lexicon, cfg: WeightConfig,
                  tag_table: SymbolTable | None = None,
                  token_table: SymbolTable | None = None) -> Wfst:
    """Acyclic token->tag lattice for one sentence.

    Anchor state ``i`` connects to ``i+1`` with one arc per analysis of
    token ``i`` (input label the surface, output label the tag, weight the
    analysis cost).  Composing the sentence's linear acceptor with the
    lattice leaves the weighted relation unchanged.
    """
    if not sentence.tokens:
        raise ValueError("empty sentence")
    m = Wfst(token_table if token_table is not None else SymbolTable(),
             tag_table if tag_table is not None else SymbolTable())
    anchors = [m.add_state() for _ in range(len(sentence.tokens) + 1)]
    m.set_start(anchors[0])
    m.set_final(anchors[-1], 0.0)
    for i, token in enumerate(sentence.tokens):
        for tag, weight in sorted(analyses(token, lex, cfg).items()):
            m.add_arc(anchors[i], token.surface, tag, weight, anchors[i + 1])
    return m


def collapse_transducer(tags: TagSet, tag_table: SymbolTable) -> Wfst:
    """Single-state map from every full tag to its collapsed tag, weight 0."""
    m = Wfst(tag_table, tag_table)
    q = m.add_state()
    m.set_start(q)
    m.set_final(q, 0.0)
    for full in sorted(tags.full_tags):
        m.add_arc(q, full, tags.collapse(full), 0.0, q)
    return m


@dataclass(frozen=True)
class AmbiguityProfile:
    """Tokens bucketed by their number of distinct non-UNKNOWN readings."""

    counts: tuple[tuple[str, int], ...]
    total: int

    def fraction(self, bucket: str) -> float:
        by_bucket = dict(self.counts)
        return by_bucket[bucket] / self.total if self.total else 0.0

    def rows(self) -> list[tuple[str, int, float]]:
        return [(bucket, count, count / self.total if self.total else 0.0)
                for bucket, count in self.counts]


def ambiguity_profile(corpus: Iterable[Sentence], lex: Lexicon,
                      cfg: WeightConfig | None = None) -> AmbiguityProfile:
    """Histogram of analyses-per-token over a corpus."""
    cfg = cfg if cfg is not None else WeightConfig()
    counts = {bucket: 0 for bucket in AMBIGUITY_BUCKETS}
    total = 0
    for sentence in corpus:
        for token in sentence.tokens:
            n = sum(1 for tag in analyses(token, lex, cfg) if tag != UNKNOWN_TAG)
            if n <= 3:
                bucket = str(n)
            elif n <= 8:
                bucket = "4-8"
            else:
                bucket = ">8"
            counts[bucket] += 1
            total += 1
    return AmbiguityProfile(tuple((b, counts[b]) for b in AMBIGUITY_BUCKETS), total)
