"""Ambiguity-class ("genotype") n-gram statistics and the scoring machine.

A genotype is the canonically ordered set of tags a token can bear.  All
statistics are estimated over genotype contexts rather than word forms:
the tables stay small, and a word never seen in training shares its
statistics with every other word of the same ambiguity class.

Counts are stored jointly per context: for a context of genotypes the
table maps each observed tagging (one tag per genotype) to its frequency.
The derived cost of a tagging is the negative log of its relative
frequency.  The per-sentence scoring transducer applies these tables with
strict highest-order backoff and chain-rule conditional costs, so that
over a fully observed window the per-position costs telescope to the
joint cost of the window's tagging.
"""

import math
import re
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

from .config import WeightConfig
from .lexicon import BOUNDARY_TAG, UNKNOWN_TAG, Lexicon, TagSet, analyses
from .tokenizer import Token, shape_of
from .wfst import SymbolTable, Wfst

NGRAM_ORDERS = (1, 2, 3)


@dataclass(frozen=True, order=True)
class Genotype:
    """Canonically ordered tag set, rendered ``[t1 t2 ...]``."""

    tags: tuple[str, ...]

    @staticmethod
    def of(tags: Iterable[str]) -> "Genotype":
        ordered = tuple(sorted(set(tags)))
        if not ordered:
            raise ValueError("empty genotype")
        return Genotype(ordered)

    @staticmethod
    def parse(text: str) -> "Genotype":
        inner = text.strip()
        if not (inner.startswith("[") and inner.endswith("]")):
            raise ValueError(f"bad genotype rendering {text!r}")
        return Genotype.of(inner[1:-1].split())

    def render(self) -> str:
        return "[" + " ".join(self.tags) + "]"

    def __str__(self):
        return self.render()


BOUNDARY_GENOTYPE = Genotype((BOUNDARY_TAG,))

Context = tuple[Genotype, ...]
Tagging = tuple[str, ...]


class NgramTable:
    """Joint tagging counts per genotype context of one fixed order."""

    def __init__(self, order: int):
        self.order = order
        self.counts: dict[Context, Counter] = {}
        self.totals: dict[Context, int] = {}

    def add(self, context: Context, tagging: Tagging, k: int = 1) -> None:
        if len(context) != self.order or len(tagging) != self.order:
            raise ValueError(f"order-{self.order} table got context of length "
                             f"{len(context)} / tagging of length {len(tagging)}")
        self.counts.setdefault(context, Counter())[tagging] += k
        self.totals[context] = self.totals.get(context, 0) + k

    def total(self, context: Context) -> int:
        return self.totals.get(context, 0)

    def count(self, context: Context, tagging: Tagging) -> int:
        counter = self.counts.get(context)
        return counter[tagging] if counter else 0

    def prefix_count(self, context: Context, prefix: Tagging) -> int:
        """Total count of taggings starting with ``prefix`` in ``context``."""
        if not prefix:
            return self.total(context)
        counter = self.counts.get(context)
        if not counter:
            return 0
        k = len(prefix)
        return sum(c for tagging, c in counter.items() if tagging[:k] == prefix)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass
class GenotypeModel:
    """Trained tables plus the tag inventory they are expressed in."""

    tagset: TagSet | None
    collapsed: bool
    tables: dict[int, NgramTable]
    meta: dict[str, int] = field(default_factory=dict)

    @classmethod
    def empty(cls, tagset: TagSet | None, collapsed: bool = True) -> "GenotypeModel":
        return cls(tagset, collapsed, {n: NgramTable(n) for n in NGRAM_ORDERS})

    def map_tag(self, tag: str) -> str:
        if not self.collapsed:
            return tag
        if self.tagset is None:
            raise ValueError("collapsed model needs a tag set")
        return self.tagset.collapse(tag)

    def genotype_key(self, tags: Iterable[str]) -> Genotype:
        return Genotype.of(self.map_tag(t) for t in tags)

    def token_genotype(self, token: Token, lex: Lexicon,
                       cfg: WeightConfig) -> Genotype:
        return self.genotype_key(genotype_of(token, lex, cfg).tags)

    def weight(self, context: Context, tagging: Tagging) -> float | None:
        """Joint cost of ``tagging`` given ``context``: -ln(f_t / f).

        Returns ``None`` when the context was never seen (callers back
        off) and ``inf`` when the context was seen but this tagging never
        was.
        """
        table = self.tables[len(context)]
        f = table.total(context)
        if f == 0:
            return None
        f_t = table.count(context, tagging)
        if f_t == 0:
            return math.inf
        return -math.log(f_t / f)

    def conditional_weight(self, context: Context, tagging: Tagging) -> float:
        """Cost of the last tag of ``tagging`` given the earlier ones.

        ``-ln(f_tagging / f_prefix)`` within the context's table; ``inf``
        when the tagging (or its prefix) was never observed there.  Summing
        these along a window reproduces the window's joint cost.
        """
        table = self.tables[len(context)]
        f_prefix = table.prefix_count(context, tagging[:-1])
        if f_prefix == 0:
            return math.inf
        f_t = table.count(context, tagging)
        if f_t == 0:
            return math.inf
        return -math.log(f_t / f_prefix)


def genotype_of(token: Token, lex: Lexicon, cfg: WeightConfig) -> Genotype:
    """Full-tag genotype of a token: its non-UNKNOWN analyses, or
    ``[UNKNOWN]`` when no other reading exists."""
    tags = [t for t in analyses(token, lex, cfg) if t != UNKNOWN_TAG]
    return Genotype.of(tags) if tags else Genotype((UNKNOWN_TAG,))


TaggedCorpus = list[list[tuple[str, str]]]


def read_tagged_corpus(src: Union[str, Path, TextIO]) -> TaggedCorpus:
    """``token<TAB>gold_tag`` per line, blank line between sentences."""
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as handle:
            return read_tagged_corpus(handle)
    corpus: TaggedCorpus = []
    sentence: list[tuple[str, str]] = []
    for lineno, raw in enumerate(src, 1):
        line = raw.rstrip("\n")
        if not line.strip():
            if sentence:
                corpus.append(sentence)
                sentence = []
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise ValueError(f"line {lineno}: expected token<TAB>tag")
        sentence.append((fields[0], fields[1]))
    if sentence:
        corpus.append(sentence)
    return corpus


def write_tagged_corpus(corpus: TaggedCorpus,
                        out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as handle:
            write_tagged_corpus(corpus, handle)
        return
    for i, sentence in enumerate(corpus):
        if i:
            out.write("\n")
        for surface, tag in sentence:
            out.write(f"{surface}\t{tag}\n")


def _sentence_tokens(sentence: Sequence[tuple[str, str]]) -> list[Token]:
    return [Token(surface, shape_of(surface), "_" in surface)
            for surface, _ in sentence]


def train(corpus: TaggedCorpus, lex: Lexicon, cfg: WeightConfig,
          tagset: TagSet, collapsed: bool = True,
          on_mismatch: str = "warn") -> GenotypeModel:
    """Count genotype n-grams over a gold-tagged corpus.

    Every position contributes its unigram; bigrams and trigrams are
    counted over the sentence padded on the left with the boundary
    genotype ``[SB]``.  A gold tag outside its token's genotype is either
    coerced into it with a warning (default) or rejected, per
    ``on_mismatch`` ("warn" or "error").
    """
    if on_mismatch not in ("warn", "error"):
        raise ValueError(f"on_mismatch must be 'warn' or 'error', got {on_mismatch!r}")
    model = GenotypeModel.empty(tagset, collapsed)
    surfaces: set[str] = set()
    genotypes: set[Genotype] = set()
    tokens = 0
    for sentence in corpus:
        gens: list[Genotype] = []
        golds: list[str] = []
        for token, (surface, gold) in zip(_sentence_tokens(sentence), sentence):
            genotype = model.token_genotype(token, lex, cfg)
            gold_tag = model.map_tag(gold)
            if gold_tag not in genotype.tags:
                if on_mismatch == "error":
                    raise ValueError(f"gold tag {gold_tag!r} not in genotype "
                                     f"{genotype} for token {surface!r}")
                warnings.warn(f"gold tag {gold_tag!r} not in genotype "
                              f"{genotype} for token {surface!r}; coercing")
                genotype = Genotype.of(genotype.tags + (gold_tag,))
            gens.append(genotype)
            golds.append(gold_tag)
        tokens += len(sentence)
        surfaces.update(surface for surface, _ in sentence)
        genotypes.update(gens)
        padded_g = [BOUNDARY_GENOTYPE] + gens
        padded_t = [BOUNDARY_TAG] + golds
        for i in range(len(gens)):
            model.tables[1].add((gens[i],), (golds[i],))
        for i in range(len(padded_g) - 1):
            model.tables[2].add(tuple(padded_g[i:i + 2]), tuple(padded_t[i:i + 2]))
        for i in range(len(padded_g) - 2):
            model.tables[3].add(tuple(padded_g[i:i + 3]), tuple(padded_t[i:i + 3]))
    model.meta = {
        "sentences": len(corpus),
        "tokens": tokens,
        "types": len(surfaces),
        "genotypes": len(genotypes),
    }
    return model


def _backoff_weight(model: GenotypeModel, padded: Sequence[Genotype],
                    position: int, history: tuple[tuple[str, bool], ...],
                    tag: str, max_order: int) -> float:
    """Cost of ``tag`` at ``position`` (index into the padded genotype
    sequence) under strict highest-order backoff.

    The highest order whose genotype context is in the tables wins
    outright; orders needing history through a catch-all reading are
    unusable and skipped.  When no context of any order was seen, the
    cost is uniform over the genotype.
    """
    for order in range(min(3, max_order, position + 1), 0, -1):
        if order > 1:
            recent = history[-(order - 1):]
            if len(recent) < order - 1 or any(not ok for _, ok in recent):
                continue
        context = tuple(padded[position - order + 1:position + 1])
        if model.tables[order].total(context) == 0:
            continue
        if order > 1:
            tagging = tuple(t for t, _ in history[-(order - 1):]) + (tag,)
        else:
            tagging = (tag,)
        return model.conditional_weight(context, tagging)
    return math.log(len(padded[position].tags))


def score_transducer(model: GenotypeModel, genotypes: Sequence[Genotype],
                     cfg: WeightConfig, max_order: int = 3,
                     tag_table: SymbolTable | None = None) -> Wfst:
    """Per-sentence scoring machine over the model's tag space.

    States track the last two chosen tags; each position offers one
    identity arc per genotype member weighted by :func:`_backoff_weight`,
    plus a catch-all UNKNOWN arc at ``w_unk`` where UNKNOWN is not itself a
    member.  Taking the catch-all invalidates the history it appears in,
    so later positions back off below it rather than clamp to infinity.
    """
    if not genotypes:
        raise ValueError("empty genotype sequence")
    if not 1 <= max_order <= 3:
        raise ValueError(f"max_order must be 1, 2, or 3, got {max_order}")
    table = tag_table if tag_table is not None else SymbolTable()
    m = Wfst(table, table)
    padded = [BOUNDARY_GENOTYPE] + list(genotypes)
    start_history = ((BOUNDARY_TAG, True),)

    states: dict[tuple[int, tuple], int] = {}

    def state_of(index: int, history: tuple) -> int:
        key = (index, history)
        sid = states.get(key)
        if sid is None:
            sid = m.add_state()
            states[key] = sid
            pending.append(key)
        return sid

    pending: list[tuple[int, tuple]] = []
    m.set_start(state_of(0, start_history))
    done = set()
    while pending:
        index, history = key = pending.pop()
        if key in done:
            continue
        done.add(key)
        src = states[key]
        if index == len(genotypes):
            m.set_final(src, 0.0)
            continue
        genotype = padded[index + 1]
        for tag in sorted(set(genotype.tags) | {UNKNOWN_TAG}):
            member = tag in genotype.tags
            if member:
                weight = _backoff_weight(model, padded, index + 1, history,
                                         tag, max_order)
            else:
                weight = cfg.w_unk
            new_history = (history + ((tag, member),))[-2:]
            dst = state_of(index + 1, new_history)
            m.add_arc(src, tag, tag, weight, dst)
    return m


@dataclass(frozen=True)
class CoverageRow:
    order: int
    total: int
    seen: int

    @property
    def fraction(self) -> float:
        return self.seen / self.total if self.total else 1.0


def coverage(model: GenotypeModel, corpus: TaggedCorpus, lex: Lexicon,
             cfg: WeightConfig) -> list[CoverageRow]:
    """How many n-gram genotype contexts of ``corpus`` the model has seen.

    Counts context occurrences (positions), taken within sentences without
    boundary padding.
    """
    per_sentence = [[model.token_genotype(tok, lex, cfg)
                     for tok in _sentence_tokens(sentence)]
                    for sentence in corpus]
    rows = []
    for order in NGRAM_ORDERS:
        table = model.tables[order]
        total = seen = 0
        for gens in per_sentence:
            for i in range(len(gens) - order + 1):
                total += 1
                if table.total(tuple(gens[i:i + order])) > 0:
                    seen += 1
        rows.append(CoverageRow(order, total, seen))
    return rows


_POSITION_NAMES = {1: ("-",), 2: ("left", "right"), 3: ("left", "middle", "right")}


@dataclass(frozen=True)
class ContextDecision:
    """Argmax decision for the focus genotype within one observed context."""

    order: int
    position: str
    context: Context
    taggings: tuple[tuple[Tagging, int], ...]
    decision: str
    correct: int
    total: int


@dataclass(frozen=True)
class ContextReport:
    genotype: Genotype
    blocks: tuple[ContextDecision, ...]
    order_totals: tuple[tuple[int, int, int], ...]  # (order, correct, total)


def context_report(model: GenotypeModel, genotype: Genotype) -> ContextReport:
    """Per-context decision table for one genotype across all orders.

    For each context containing the genotype, the decision is the focus
    position's majority tag (marginalizing the joint tagging counts over
    the other positions); ``correct`` is that majority mass and ``total``
    the context total.  Per-order aggregates sum over all contexts and
    focus positions.  A genotype absent from the unigram table yields an
    empty report.
    """
    if model.tables[1].total((genotype,)) == 0:
        return ContextReport(genotype, (), ())
    blocks: list[ContextDecision] = []
    aggregates = {order: [0, 0] for order in NGRAM_ORDERS}
    for order in NGRAM_ORDERS:
        table = model.tables[order]
        for position in range(order):
            for context in sorted(table.counts):
                if context[position] != genotype:
                    continue
                counter = table.counts[context]
                marginal: Counter = Counter()
                for tagging, count in counter.items():
                    marginal[tagging[position]] += count
                decision = min(marginal, key=lambda t: (-marginal[t], t))
                correct = marginal[decision]
                total = table.totals[context]
                blocks.append(ContextDecision(
                    order, _POSITION_NAMES[order][position], context,
                    tuple(sorted(counter.items())), decision, correct, total))
                aggregates[order][0] += correct
                aggregates[order][1] += total
    order_totals = tuple((order, aggregates[order][0], aggregates[order][1])
                         for order in NGRAM_ORDERS)
    return ContextReport(genotype, tuple(blocks), order_totals)


# -- model serialization -----------------------------------------------------
#
# Sectioned text: [meta], [unigram], [bigram], [trigram].  Count lines are
# context<TAB>tagging<TAB>count with genotypes rendered [a b] and taggings
# space-joined.  Counts, not weights, are stored, so the log base cannot
# drift between training and tagging.

_SECTION_BY_ORDER = {1: "unigram", 2: "bigram", 3: "trigram"}
_ORDER_BY_SECTION = {name: order for order, name in _SECTION_BY_ORDER.items()}
_GENOTYPE_RE = re.compile(r"\[[^\]]*\]")


def save_model(model: GenotypeModel, out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as handle:
            save_model(model, handle)
        return
    out.write("[meta]\n")
    out.write(f"collapsed\t{'true' if model.collapsed else 'false'}\n")
    for key in sorted(model.meta):
        out.write(f"{key}\t{model.meta[key]}\n")
    for order in NGRAM_ORDERS:
        out.write(f"[{_SECTION_BY_ORDER[order]}]\n")
        table = model.tables[order]
        for context in sorted(table.counts):
            context_text = " ".join(g.render() for g in context)
            for tagging in sorted(table.counts[context]):
                out.write(f"{context_text}\t{' '.join(tagging)}\t"
                          f"{table.counts[context][tagging]}\n")


def load_model(src: Union[str, Path, TextIO],
               tagset: TagSet | None = None) -> GenotypeModel:
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as handle:
            return load_model(handle, tagset)
    model = GenotypeModel.empty(tagset)
    section = None
    for lineno, raw in enumerate(src, 1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]") and "\t" not in line:
            name = line[1:-1]
            if name != "meta" and name not in _ORDER_BY_SECTION:
                raise ValueError(f"line {lineno}: unknown section {name!r}")
            section = name
            continue
        if section is None:
            raise ValueError(f"line {lineno}: content before any section")
        fields = line.split("\t")
        if section == "meta":
            if len(fields) != 2:
                raise ValueError(f"line {lineno}: expected key<TAB>value")
            key, value = fields
            if key == "collapsed":
                model.collapsed = value == "true"
            else:
                model.meta[key] = int(value)
            continue
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected context<TAB>tagging<TAB>count")
        order = _ORDER_BY_SECTION[section]
        context = tuple(Genotype.parse(g) for g in _GENOTYPE_RE.findall(fields[0]))
        tagging = tuple(fields[1].split())
        if len(context) != order or len(tagging) != order:
            raise ValueError(f"line {lineno}: order mismatch in {section} section")
        model.tables[order].add(context, tagging, int(fields[2]))
    return model
