"""Tab-separated report rendering and the matching figure files.

Every report has a TSV renderer (written to stdout or a file by the CLI)
and a ``save_*_figure`` companion that draws the same numbers as a bar
chart.  matplotlib is imported lazily with the Agg backend so the library
stays importable on headless machines and without the plotting dependency
in play.
"""

from typing import Sequence

from .genotype import ContextReport, CoverageRow
from .lexicon import AmbiguityProfile
from .pipeline import EvalReport, MODE_LABELS, MODES, SizeRow


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}%"


def eval_tsv(report: EvalReport) -> str:
    """Accuracy per mode, modes as columns."""
    header = ["metric"] + [MODE_LABELS[mode] for mode in MODES]
    rows = [header,
            ["correct"] + [str(report.results[m].correct) for m in MODES],
            ["total"] + [str(report.results[m].total) for m in MODES],
            ["accuracy"] + [_pct(report.results[m].accuracy) for m in MODES]]
    if report.count_punct:
        rows.append(["accuracy (incl. punctuation)"]
                    + [_pct(report.results[m].accuracy_with_punct) for m in MODES])
    lines = ["\t".join(row) for row in rows]
    if report.confusion:
        lines.append("")
        lines.append("\t".join(["gold", "predicted", "errors"]))
        worst = sorted(report.confusion.items(), key=lambda kv: (-kv[1], kv[0]))
        for (gold, predicted), count in worst[:20]:
            lines.append(f"{gold}\t{predicted}\t{count}")
    return "\n".join(lines) + "\n"


def coverage_tsv(rows: Sequence[CoverageRow]) -> str:
    lines = ["\t".join(["order", "test ngrams", "covered", "coverage"])]
    for row in rows:
        lines.append(f"{row.order}-grams\t{row.total}\t{row.seen}\t"
                     f"{_pct(row.fraction)}")
    return "\n".join(lines) + "\n"


def ambiguity_tsv(profile: AmbiguityProfile) -> str:
    lines = ["\t".join(["tags per token", "tokens", "fraction"])]
    for bucket, count, fraction in profile.rows():
        lines.append(f"{bucket}\t{count}\t{_pct(fraction)}")
    lines.append(f"total\t{profile.total}\t{_pct(1.0 if profile.total else 0.0)}")
    return "\n".join(lines) + "\n"


def sizes_tsv(rows: Sequence[SizeRow]) -> str:
    lines = ["\t".join(["", *(row.name for row in rows)]),
             "\t".join(["states", *(str(row.states) for row in rows)]),
             "\t".join(["arcs", *(str(row.arcs) for row in rows)])]
    return "\n".join(lines) + "\n"


def context_tsv(report: ContextReport) -> str:
    lines = ["\t".join(["order", "position", "context", "taggings",
                        "decision", "correct", "total", "accuracy"])]
    for block in report.blocks:
        context = " ".join(g.render() for g in block.context)
        taggings = "; ".join(f"{','.join(tagging)}={count}"
                             for tagging, count in block.taggings)
        lines.append("\t".join([
            str(block.order), block.position, context, taggings,
            block.decision, str(block.correct), str(block.total),
            _pct(block.correct / block.total if block.total else 0.0)]))
    for order, correct, total in report.order_totals:
        if total:
            lines.append("\t".join([str(order), "all", "-", "-", "-",
                                    str(correct), str(total),
                                    _pct(correct / total)]))
    return "\n".join(lines) + "\n"


# -- figures -----------------------------------------------------------------


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _bar_figure(path, labels, values, ylabel, title, percent=False):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=15, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if percent:
        ax.set_ylim(0, 1.0)
        for x, v in enumerate(values):
            ax.text(x, v, f"{100 * v:.1f}%", ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_eval_figure(report: EvalReport, path) -> None:
    _bar_figure(path, [MODE_LABELS[m] for m in MODES],
                [report.results[m].accuracy for m in MODES],
                "accuracy", "Tagging accuracy by mode", percent=True)


def save_coverage_figure(rows: Sequence[CoverageRow], path) -> None:
    _bar_figure(path, [f"{row.order}-grams" for row in rows],
                [row.fraction for row in rows],
                "coverage", "Training coverage of test contexts", percent=True)


def save_ambiguity_figure(profile: AmbiguityProfile, path) -> None:
    rows = profile.rows()
    _bar_figure(path, [bucket for bucket, _, _ in rows],
                [fraction for _, _, fraction in rows],
                "fraction of tokens", "Analyses per token", percent=True)


def save_sizes_figure(rows: Sequence[SizeRow], path) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    xs = range(len(rows))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], [max(row.states, 1) for row in rows],
           width, label="states", color="#4878a8")
    ax.bar([x + width / 2 for x in xs], [max(row.arcs, 1) for row in rows],
           width, label="arcs", color="#a85448")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([row.name for row in rows])
    ax.set_ylabel("count (log scale)")
    ax.set_title("Machine sizes")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
