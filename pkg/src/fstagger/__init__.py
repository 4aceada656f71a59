"""Weighted finite-state part-of-speech tagging.

A cascade of transducers over the tropical semiring: a per-sentence
lexical lattice, a negative-constraint penalty transducer, and an
ambiguity-class ("genotype") n-gram scorer, decoded by shortest path.
"""

from .config import WeightConfig, load_weight_config
from .constraints import (CompiledConstraints, ConstraintRule,
                          apply_constraints, compile_rules, expand_rule,
                          parse_rules)
from .genotype import (BOUNDARY_GENOTYPE, ContextDecision, ContextReport,
                       CoverageRow, Genotype, GenotypeModel, NgramTable,
                       context_report, coverage, genotype_of, load_model,
                       read_tagged_corpus, save_model, score_transducer,
                       train, write_tagged_corpus)
from .lexicon import (ACRONYM_TAG, AMBIGUITY_BUCKETS, BOUNDARY_TAG,
                      PROPER_TAG, PUNCT_TAG, RESERVED_TAGS, UNKNOWN_TAG,
                      AmbiguityProfile, Lexicon, TagSet, ambiguity_profile,
                      analyses, build_lattice, collapse_transducer,
                      load_lexicon, load_tagset, tag_symbol_table)
from .pipeline import (EvalReport, ModeResult, SizeRow, TaggedSentence,
                       TaggedToken, evaluate, inspect_resources,
                       morphology_machine, render_tagged, tag_sentence)
from .tokenizer import (SHAPE_ALLCAPS, SHAPE_CAPITALIZED, SHAPE_LOWERCASE,
                        SHAPE_MIXED, SHAPE_NUMERIC, SHAPE_PUNCTUATION,
                        Sentence, Token, load_compounds, shape_of, tokenize)
from .wfst import (EPSILON, EPSILON_SYMBOL, ONE, ZERO, Arc, Path, SymbolTable,
                   Wfst, compose, linear_acceptor, plus, read_fst_text,
                   shortest_path, stats, times, trim, write_fst_text)

__version__ = "0.1.0"
