"""Command-line drivers: train, tag, eval, inspect, coverage, ambiguity,
context.

Report commands write tab-separated tables to stdout or ``-o FILE`` and,
with ``--figures DIR``, render the matching chart as a PNG next to them.
Exit status is 0 on success and 2 with a diagnostic on any resource error.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import reports
from .config import WeightConfig, load_weight_config
from .constraints import compile_rules, parse_rules
from .genotype import (Genotype, context_report, coverage, load_model,
                       read_tagged_corpus, save_model, train)
from .lexicon import ambiguity_profile, load_lexicon, load_tagset, tag_symbol_table
from .pipeline import evaluate, inspect_resources, render_tagged, tag_sentence
from .tokenizer import load_compounds, tokenize


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"fstagger: error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fstagger",
        description="Weighted finite-state part-of-speech tagger")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="F",
                        help="key=value file overriding weight defaults")
    common.add_argument("--w-proper", type=float, help="proper-noun reading cost")
    common.add_argument("--w-acronym", type=float, help="acronym reading cost")
    common.add_argument("--w-unk", type=float, help="unknown reading cost")
    common.add_argument("--w-neg", type=float, help="constraint violation penalty")

    p = sub.add_parser("train", parents=[common],
                       help="estimate n-gram genotype statistics")
    p.add_argument("--corpus", required=True, metavar="F",
                   help="gold-tagged training corpus")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--out", required=True, metavar="MODEL")
    p.add_argument("--full-tags", action="store_true",
                   help="estimate over full tags instead of collapsed tags")
    p.add_argument("--on-mismatch", choices=("warn", "error"), default="warn",
                   help="gold tag outside its genotype (default: warn)")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("tag", parents=[common], help="tag raw text")
    p.add_argument("--model", required=True, metavar="F")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--rules", metavar="F", help="negative constraint rules")
    p.add_argument("--mode", choices=("unigram", "bigram", "full"),
                   default="full")
    p.add_argument("--show-cost", action="store_true",
                   help="append the per-token path cost column")
    p.add_argument("--compounds", metavar="F",
                   help="multiword expressions, one per line")
    p.add_argument("--no-clitic-split", action="store_true",
                   help="keep elided forms attached (l'avion stays whole)")
    p.add_argument("-o", "--out", metavar="F", help="output file (default stdout)")
    p.add_argument("input", metavar="TEXT", nargs="?", default="-",
                   help="raw text file, or - for stdin")
    p.set_defaults(func=_cmd_tag)

    p = sub.add_parser("eval", parents=[common],
                       help="accuracy of the three modes against gold tags")
    p.add_argument("--gold", required=True, metavar="F")
    p.add_argument("--model", required=True, metavar="F")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--rules", metavar="F")
    p.add_argument("--count-punct", action="store_true",
                   help="also report punctuation-inclusive accuracy")
    p.add_argument("-o", "--out", metavar="F")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("inspect", parents=[common],
                       help="state/arc counts of the cascade's machines")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--rules", metavar="F")
    p.add_argument("--model", metavar="F")
    p.add_argument("-o", "--out", metavar="F")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("coverage", parents=[common],
                       help="training coverage of a test corpus's contexts")
    p.add_argument("--model", required=True, metavar="F")
    p.add_argument("--test", required=True, metavar="F",
                   help="gold-tagged test corpus")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("-o", "--out", metavar="F")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("ambiguity", parents=[common],
                       help="analyses-per-token histogram over raw text")
    p.add_argument("--lexicon", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--compounds", metavar="F")
    p.add_argument("--no-clitic-split", action="store_true")
    p.add_argument("-o", "--out", metavar="F")
    p.add_argument("--figures", metavar="DIR")
    p.add_argument("input", metavar="TEXT", nargs="?", default="-")
    p.set_defaults(func=_cmd_ambiguity)

    p = sub.add_parser("context", parents=[common],
                       help="per-context decisions for one genotype")
    p.add_argument("--model", required=True, metavar="F")
    p.add_argument("--tagset", required=True, metavar="F")
    p.add_argument("--genotype", required=True, metavar="G",
                   help='rendered genotype, e.g. "[jmp nmp]"')
    p.add_argument("-o", "--out", metavar="F")
    p.set_defaults(func=_cmd_context)

    return parser


def _load_cfg(args) -> WeightConfig:
    cfg = WeightConfig()
    if args.config:
        cfg = load_weight_config(args.config, cfg)
    overrides = {key: getattr(args, key) for key in
                 ("w_proper", "w_acronym", "w_unk", "w_neg")
                 if getattr(args, key) is not None}
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def _load_constraints(args, tags, cfg):
    if not getattr(args, "rules", None):
        return None
    rules = parse_rules(args.rules)
    return compile_rules(rules, tags, cfg.w_neg, tag_symbol_table(tags))


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figure_path(args, name: str) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    directory = Path(args.figures)
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"{name}.png"


def _cmd_train(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    corpus = read_tagged_corpus(args.corpus)
    model = train(corpus, lex, cfg, tags, collapsed=not args.full_tags,
                  on_mismatch=args.on_mismatch)
    save_model(model, args.out)
    meta = model.meta
    print(f"trained on {meta['sentences']} sentences / {meta['tokens']} tokens "
          f"({meta['types']} types, {meta['genotypes']} genotypes) -> {args.out}",
          file=sys.stderr)
    return 0


def _cmd_tag(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    model = load_model(args.model, tags)
    constraints = _load_constraints(args, tags, cfg)
    compounds = load_compounds(args.compounds) if args.compounds else ()
    sentences = tokenize(_read_text(args.input), compounds,
                         split_clitics=not args.no_clitic_split)
    blocks = []
    for sentence in sentences:
        tagged = tag_sentence(sentence, lex, constraints, model, cfg, args.mode)
        blocks.append(render_tagged(tagged, show_cost=args.show_cost))
    _write_output("\n".join(blocks), args.out)
    return 0


def _cmd_eval(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    model = load_model(args.model, tags)
    constraints = _load_constraints(args, tags, cfg)
    gold = read_tagged_corpus(args.gold)
    report = evaluate(gold, lex, constraints, model, cfg,
                      count_punct=args.count_punct)
    _write_output(reports.eval_tsv(report), args.out)
    figure = _figure_path(args, "eval")
    if figure:
        reports.save_eval_figure(report, figure)
    return 0


def _cmd_inspect(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    constraints = _load_constraints(args, tags, cfg)
    model = load_model(args.model, tags) if args.model else None
    rows = inspect_resources(lex, cfg, constraints, model)
    _write_output(reports.sizes_tsv(rows), args.out)
    figure = _figure_path(args, "sizes")
    if figure:
        reports.save_sizes_figure(rows, figure)
    return 0


def _cmd_coverage(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    model = load_model(args.model, tags)
    corpus = read_tagged_corpus(args.test)
    rows = coverage(model, corpus, lex, cfg)
    _write_output(reports.coverage_tsv(rows), args.out)
    figure = _figure_path(args, "coverage")
    if figure:
        reports.save_coverage_figure(rows, figure)
    return 0


def _cmd_ambiguity(args) -> int:
    cfg = _load_cfg(args)
    tags = load_tagset(args.tagset)
    lex = load_lexicon(args.lexicon, tags)
    compounds = load_compounds(args.compounds) if args.compounds else ()
    sentences = tokenize(_read_text(args.input), compounds,
                         split_clitics=not args.no_clitic_split)
    profile = ambiguity_profile(sentences, lex, cfg)
    _write_output(reports.ambiguity_tsv(profile), args.out)
    figure = _figure_path(args, "ambiguity")
    if figure:
        reports.save_ambiguity_figure(profile, figure)
    return 0


def _cmd_context(args) -> int:
    tags = load_tagset(args.tagset)
    model = load_model(args.model, tags)
    report = context_report(model, Genotype.parse(args.genotype))
    _write_output(reports.context_tsv(report), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
