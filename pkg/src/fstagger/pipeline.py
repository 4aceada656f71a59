"""End-to-end tagging cascade and its evaluation/inspection drivers.

Tagging composes, per sentence: the lexical lattice, the constraint
penalty transducer (full mode only), the full-to-collapsed tag map (for
collapsed models), and the n-gram scoring transducer; the cheapest path of
the result is the tagging.  Modes select how much context the scorer may
use: ``unigram`` (order 1, no constraints), ``bigram`` (orders 1-2, no
constraints), ``full`` (constraints plus orders 1-3).
"""

from collections import Counter
from dataclasses import dataclass
from .config import WeightConfig
from .constraints import CompiledConstraints, apply_constraints
from .genotype import GenotypeModel, NGRAM_ORDERS, TaggedCorpus, score_transducer
from .lexicon import (UNKNOWN_TAG, Lexicon, build_lattice,
                      collapse_transducer, tag_symbol_table)
from .tokenizer import SHAPE_PUNCTUATION, Sentence, Token, shape_of
from .wfst import SymbolTable, Wfst, compose, shortest_path, stats

MODES = ("unigram", "bigram", "full")
MODE_MAX_ORDER = {"unigram": 1, "bigram": 2, "full": 3}
MODE_LABELS = {
    "unigram": "1-grams",
    "bigram": "1,2-grams",
    "full": "neg. cons and 1,2,3-grams",
}


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tag: str
    cost: float


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[TaggedToken, ...]
    total_cost: float


def _shared_tag_table(constraints: CompiledConstraints | None,
                      model: GenotypeModel) -> SymbolTable:
    if constraints is not None:
        return constraints.transducer.isymbols
    if model.tagset is None:
        raise ValueError("model has no tag set attached")
    return tag_symbol_table(model.tagset)


def tag_sentence(sentence: Sentence, lex: Lexicon,
                 constraints: CompiledConstraints | None,
                 model: GenotypeModel, cfg: WeightConfig,
                 mode: str = "full") -> TaggedSentence:
    """Tag one sentence; deterministic for fixed inputs and resources.

    The UNKNOWN readings guarantee an accepting path, so this never fails;
    UNKNOWN appears in the output only when it survives as the cheapest
    (or only) reading.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if model.collapsed and model.tagset is None:
        raise ValueError("collapsed model needs a tag set")
    table = _shared_tag_table(constraints, model)
    machine = build_lattice(sentence, lex, cfg, tag_table=table)
    if mode == "full" and constraints is not None:
        machine = apply_constraints(constraints, machine)
    if model.collapsed:
        machine = compose(machine, collapse_transducer(model.tagset, table))
    genotypes = [model.token_genotype(token, lex, cfg)
                 for token in sentence.tokens]
    scorer = score_transducer(model, genotypes, cfg,
                              max_order=MODE_MAX_ORDER[mode], tag_table=table)
    machine = compose(machine, scorer)
    paths = shortest_path(machine, 1)
    if not paths:
        raise RuntimeError("no accepting path; lattice totality violated")
    best = paths[0]
    tagged = tuple(
        TaggedToken(token.surface, table.symbol(arc.olabel), arc.weight)
        for token, arc in zip(sentence.tokens, best.arcs))
    return TaggedSentence(tagged, best.weight)


def render_tagged(tagged: TaggedSentence, show_cost: bool = False) -> str:
    lines = []
    for token in tagged.tokens:
        if show_cost:
            lines.append(f"{token.surface}\t{token.tag}\t{token.cost:.4f}")
        else:
            lines.append(f"{token.surface}\t{token.tag}")
    return "\n".join(lines) + "\n"


@dataclass
class ModeResult:
    mode: str
    correct: int = 0
    total: int = 0
    correct_with_punct: int = 0
    total_with_punct: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    @property
    def accuracy_with_punct(self) -> float:
        return (self.correct_with_punct / self.total_with_punct
                if self.total_with_punct else 0.0)


@dataclass
class EvalReport:
    results: dict[str, ModeResult]
    confusion: Counter  # (gold, predicted) over full-mode mismatches
    token_count: int
    punct_count: int
    count_punct: bool = False


def evaluate(gold: TaggedCorpus, lex: Lexicon,
             constraints: CompiledConstraints | None, model: GenotypeModel,
             cfg: WeightConfig, count_punct: bool = False) -> EvalReport:
    """Accuracy of all three modes against a gold corpus.

    Punctuation tokens are excluded from the headline accuracy; the
    punctuation-inclusive numbers are carried alongside when
    ``count_punct`` is set.  Gold tags are compared in the model's tag
    space.
    """
    results = {mode: ModeResult(mode) for mode in MODES}
    confusion: Counter = Counter()
    token_count = punct_count = 0
    for sentence_pairs in gold:
        tokens = tuple(Token(surface, shape_of(surface), "_" in surface)
                       for surface, _ in sentence_pairs)
        sentence = Sentence(tokens)
        gold_tags = [model.map_tag(tag) for _, tag in sentence_pairs]
        is_punct = [token.shape == SHAPE_PUNCTUATION for token in tokens]
        token_count += len(tokens)
        punct_count += sum(is_punct)
        for mode in MODES:
            tagged = tag_sentence(sentence, lex, constraints, model, cfg, mode)
            result = results[mode]
            for predicted, gold_tag, punct in zip(tagged.tokens, gold_tags, is_punct):
                hit = predicted.tag == gold_tag
                result.correct_with_punct += hit
                result.total_with_punct += 1
                if punct:
                    continue
                result.correct += hit
                result.total += 1
                if mode == "full" and not hit:
                    confusion[(gold_tag, predicted.tag)] += 1
    return EvalReport(results, confusion, token_count, punct_count, count_punct)


@dataclass(frozen=True)
class SizeRow:
    name: str
    states: int
    arcs: int


def morphology_machine(lex: Lexicon, cfg: WeightConfig,
                       tag_table: SymbolTable | None = None) -> Wfst:
    """Union of the per-surface analysis machines over the whole lexicon:
    two anchor states with one arc per lexicon entry plus one UNKNOWN arc
    per surface."""
    m = Wfst(SymbolTable(), tag_table if tag_table is not None else SymbolTable())
    src = m.add_state()
    dst = m.add_state()
    m.set_start(src)
    m.set_final(dst, 0.0)
    for surface in lex.surfaces():
        for tag, weight in sorted(lex.lookup(surface).items()):
            m.add_arc(src, surface, tag, weight, dst)
        m.add_arc(src, surface, UNKNOWN_TAG, cfg.w_unk, dst)
    return m


def ngram_machine_stats(model: GenotypeModel) -> tuple[int, int]:
    """Size of the model's count tables viewed as machines: one tagging
    trie per context, disjointly unioned."""
    states = arcs = 0
    for order in NGRAM_ORDERS:
        for counter in model.tables[order].counts.values():
            prefixes = {tagging[:k] for tagging in counter for k in range(order + 1)}
            states += len(prefixes)
            arcs += len(prefixes) - 1
    return states, arcs


def inspect_resources(lex: Lexicon, cfg: WeightConfig,
                      constraints: CompiledConstraints | None = None,
                      model: GenotypeModel | None = None) -> list[SizeRow]:
    """State/arc counts of the cascade's machines."""
    rows = [SizeRow("morphology", *stats(morphology_machine(lex, cfg)))]
    if constraints is not None:
        rows.append(SizeRow("constraints", *stats(constraints.transducer)))
    if model is not None:
        rows.append(SizeRow("ngram", *ngram_machine_stats(model)))
    return rows
