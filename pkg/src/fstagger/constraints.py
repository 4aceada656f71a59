"""Negative constraints: forbidden tag adjacencies compiled to a penalty
transducer.

A rule is a sequence of two or three generic tags (optionally starting
with the sentence-beginning marker SB); each generic tag expands by name
prefix over the full inventory, and the Cartesian product of the
expansions gives the forbidden full-tag sequences.  The compiled machine
is an Aho-Corasick matcher realized as a complete identity transducer over
the tag alphabet: it accepts every tag string and adds ``w_neg`` to the
arc that completes a forbidden sequence, once per occurrence.  It never
removes a path, so a clean path (UNKNOWN included) always stays cheaper.
"""

from collections import deque
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Union

from .lexicon import BOUNDARY_TAG, TagSet
from .wfst import SymbolTable, Wfst, compose


@dataclass(frozen=True)
class ConstraintRule:
    """A forbidden adjacency of two or three (generic) tags."""

    pattern: tuple[str, ...]

    def __post_init__(self):
        if len(self.pattern) not in (2, 3):
            raise ValueError(f"rule must have 2 or 3 elements: {self.pattern}")
        if BOUNDARY_TAG in self.pattern[1:]:
            raise ValueError(f"{BOUNDARY_TAG} only allowed in first position: "
                             f"{self.pattern}")


def parse_rules(path: Union[str, Path]) -> list[ConstraintRule]:
    """One rule per nonblank line, whitespace-separated; ``#`` comments."""
    rules = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            elements = tuple(line.split())
            if len(elements) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: rule must have 2 or 3 "
                                 f"elements, got {len(elements)}")
            if BOUNDARY_TAG in elements[1:]:
                raise ValueError(f"{path}:{lineno}: {BOUNDARY_TAG} only "
                                 "allowed in first position")
            rules.append(ConstraintRule(elements))
    return rules


def expand_rule(rule: ConstraintRule, tags: TagSet) -> list[tuple[str, ...]]:
    """Cartesian product of the per-element prefix expansions, sorted."""
    per_element = []
    for generic in rule.pattern:
        expansion = tags.expand(generic)
        if not expansion:
            raise ValueError(f"generic tag {generic!r} matches no tags")
        per_element.append(expansion)
    return sorted(product(*per_element))


@dataclass
class CompiledConstraints:
    expanded: frozenset[tuple[str, ...]]
    transducer: Wfst
    w_neg: float


def compile_rules(rules: Iterable[ConstraintRule], tags: TagSet, w_neg: float,
                  tag_table: SymbolTable | None = None) -> CompiledConstraints:
    """Compile rules into the penalty transducer.

    The machine is the Aho-Corasick automaton of the expanded sequences
    with failure transitions made explicit, so every state has exactly one
    arc per alphabet symbol (no wildcards, no epsilons).  Arcs completing
    ``k`` forbidden sequences carry ``k * w_neg``; all states are final
    with weight 0.  The start state is the one reached from the root on
    the sentence-beginning tag, which activates SB rules without any
    boundary surgery on the lattice.
    """
    sequences: set[tuple[str, ...]] = set()
    for rule in rules:
        sequences.update(expand_rule(rule, tags))
    alphabet = sorted(tags.full_tags)
    table = tag_table if tag_table is not None else SymbolTable(alphabet)

    # goto trie
    children: list[dict[str, int]] = [{}]
    matches: list[int] = [0]
    for seq in sorted(sequences):
        node = 0
        for sym in seq:
            nxt = children[node].get(sym)
            if nxt is None:
                children.append({})
                matches.append(0)
                nxt = len(children) - 1
                children[node][sym] = nxt
            node = nxt
        matches[node] += 1

    # failure links, match propagation, and the complete transition table
    delta: list[dict[str, int]] = [dict() for _ in children]
    fail = [0] * len(children)
    for sym in alphabet:
        delta[0][sym] = children[0].get(sym, 0)
    queue = deque(sorted(children[0].values()))
    visited = set(queue)
    while queue:
        node = queue.popleft()
        parent_fail = fail[node]
        for sym in alphabet:
            child = children[node].get(sym)
            if child is None:
                delta[node][sym] = delta[parent_fail][sym]
            else:
                fail[child] = delta[parent_fail][sym]
                matches[child] += matches[fail[child]]
                delta[node][sym] = child
                if child not in visited:
                    visited.add(child)
                    queue.append(child)

    m = Wfst(table, table)
    for _ in children:
        m.add_state()
    m.set_start(delta[0][BOUNDARY_TAG])
    for node in range(len(children)):
        m.set_final(node, 0.0)
        for sym in alphabet:
            target = delta[node][sym]
            weight = matches[target] * w_neg if matches[target] else 0.0
            m.add_arc(node, sym, sym, weight, target)
    return CompiledConstraints(frozenset(sequences), m, w_neg)


def apply_constraints(constraints: CompiledConstraints, lattice: Wfst) -> Wfst:
    """Add ``w_neg`` per forbidden-sequence occurrence to every lattice path.

    The set of accepted tag strings is unchanged; only weights move.
    """
    return compose(lattice, constraints.transducer)
