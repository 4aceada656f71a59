"""Shared test fixtures: brute-force oracles and random machine builders.

The oracles deliberately avoid the code paths they check: paths are
enumerated by plain DFS over the arc lists, relations by exhaustive
path-pair matching, constraint violations by sliding-window counting.
Weights drawn from DYADIC are exactly representable, so oracle sums and
machine sums agree bitwise.
"""

import math

from fstagger import (BOUNDARY_GENOTYPE, BOUNDARY_TAG, Lexicon, Path,
                      SymbolTable, TagSet, Wfst)

DYADIC = (0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.25)


def enumerate_paths(m: Wfst) -> list[Path]:
    """All accepting finite-weight paths of an acyclic machine, by DFS."""
    results: list[Path] = []
    if m.start is None:
        return results

    def dfs(state, arcs, weight, istr, ostr):
        final = m.finals.get(state)
        if final is not None and not math.isinf(final):
            results.append(Path(tuple(arcs), weight + final,
                                tuple(istr), tuple(ostr)))
        for arc in m.arcs(state):
            if math.isinf(arc.weight):
                continue
            dfs(arc.nextstate, arcs + [arc], weight + arc.weight,
                istr + ([m.isymbols.symbol(arc.ilabel)] if arc.ilabel else []),
                ostr + ([m.osymbols.symbol(arc.olabel)] if arc.olabel else []))

    dfs(m.start, [], 0.0, [], [])
    return results


def relation(m: Wfst) -> dict[tuple[tuple[str, ...], tuple[str, ...]], float]:
    """(istring, ostring) -> min weight over all accepting paths."""
    best: dict = {}
    for path in enumerate_paths(m):
        key = (path.istring, path.ostring)
        if key not in best or path.weight < best[key]:
            best[key] = path.weight
    return best


def composed_relation_oracle(a: Wfst, b: Wfst) -> dict:
    """Relation of a∘b by exhaustive path-pair matching (epsilon-free a, b)."""
    best: dict = {}
    b_paths = enumerate_paths(b)
    for pa in enumerate_paths(a):
        for pb in b_paths:
            if pa.ostring != pb.istring:
                continue
            key = (pa.istring, pb.ostring)
            weight = pa.weight + pb.weight
            if key not in best or weight < best[key]:
                best[key] = weight
    return best


def output_strings(m: Wfst) -> set[tuple[str, ...]]:
    """Output label strings of all structural paths (weights ignored)."""
    found: set[tuple[str, ...]] = set()
    if m.start is None:
        return found

    def dfs(state, ostr):
        if state in m.finals:
            found.add(tuple(ostr))
        for arc in m.arcs(state):
            dfs(arc.nextstate,
                ostr + ([m.osymbols.symbol(arc.olabel)] if arc.olabel else []))

    dfs(m.start, [])
    return found


def count_occurrences(string: tuple[str, ...],
                      patterns: frozenset[tuple[str, ...]]) -> int:
    """Occurrences of any pattern as a contiguous subsequence, overlaps
    counted."""
    hits = 0
    for pattern in patterns:
        k = len(pattern)
        for i in range(len(string) - k + 1):
            if tuple(string[i:i + k]) == pattern:
                hits += 1
    return hits


def random_acyclic_wfst(rng, in_syms, out_syms, max_states=8,
                        itable=None, otable=None) -> Wfst:
    """Random forward-arc machine with dyadic weights; may lack accepting
    paths entirely."""
    n = rng.randint(2, max_states)
    m = Wfst(itable if itable is not None else SymbolTable(in_syms),
             otable if otable is not None else SymbolTable(out_syms))
    for _ in range(n):
        m.add_state()
    m.set_start(0)
    for i in range(n - 1):
        for _ in range(rng.randint(0, 3)):
            j = rng.randint(i + 1, n - 1)
            m.add_arc(i, rng.choice(in_syms), rng.choice(out_syms),
                      rng.choice(DYADIC), j)
    for q in range(1, n):
        if rng.random() < 0.4:
            m.set_final(q, rng.choice(DYADIC))
    return m


def identity_transducer(symbols, table=None) -> Wfst:
    """One-state zero-weight identity over ``symbols``."""
    tbl = table if table is not None else SymbolTable(symbols)
    m = Wfst(tbl, tbl)
    q = m.add_state()
    m.set_start(q)
    m.set_final(q, 0.0)
    for sym in symbols:
        m.add_arc(q, sym, sym, 0.0, q)
    return m


def identity_tagset(tags) -> TagSet:
    return TagSet({t: t for t in tags})


def toy_lexicon(entries) -> Lexicon:
    """entries: mapping surface -> iterable of tags (weight 0) or
    (tag, weight) pairs."""
    lex = Lexicon()
    for surface, readings in entries.items():
        for reading in readings:
            if isinstance(reading, tuple):
                lex.add(surface, reading[0], reading[1])
            else:
                lex.add(surface, reading)
    return lex


def oracle_backoff_position_costs(model, genotypes, assignment, cfg,
                                  max_order):
    """Per-position scoring costs recomputed straight from the count
    tables: strict highest-order backoff with chain-rule conditionals,
    catch-all readings at w_unk breaking the history they enter."""
    padded = [BOUNDARY_GENOTYPE] + list(genotypes)
    history = [(BOUNDARY_TAG, True)]
    costs = []
    for i, tag in enumerate(assignment):
        pos = i + 1
        genotype = padded[pos]
        if tag not in genotype.tags:
            costs.append(cfg.w_unk)
            history.append((tag, False))
            continue
        cost = None
        for order in range(min(3, max_order, pos + 1), 0, -1):
            recent = history[-(order - 1):] if order > 1 else []
            if order > 1 and (len(recent) < order - 1
                              or any(not ok for _, ok in recent)):
                continue
            context = tuple(padded[pos - order + 1:pos + 1])
            counter = model.tables[order].counts.get(context)
            if not counter:
                continue
            tagging = tuple(t for t, _ in recent) + (tag,)
            prefix = tagging[:-1]
            if prefix:
                f_prefix = sum(c for t, c in counter.items()
                               if t[:len(prefix)] == prefix)
            else:
                f_prefix = sum(counter.values())
            f_t = counter.get(tagging, 0)
            cost = (math.inf if f_prefix == 0 or f_t == 0
                    else -math.log(f_t / f_prefix))
            break
        if cost is None:
            cost = math.log(len(genotype.tags))
        costs.append(cost)
        history.append((tag, True))
    return costs


def oracle_backoff_cost(model, genotypes, assignment, cfg, max_order):
    """Total scoring cost, summed left to right like the machine does."""
    total = 0.0
    for cost in oracle_backoff_position_costs(model, genotypes, assignment,
                                              cfg, max_order):
        total = total + cost
    return total
