"""Weighted finite-state acceptors and transducers over the tropical semiring.

Weights are non-negative costs: alternative paths combine by ``min``,
consecutive arcs by addition.  ``math.inf`` is the absorbing zero weight
("no path"); ``0.0`` is the multiplicative identity.  Machines built by
this package are epsilon-free by construction, but :func:`compose`
coordinates epsilon labels with the standard three-state filter, so
hand-built transducers that do carry epsilons compose without duplicating
logical paths.

Symbol id 0 is reserved for epsilon in every :class:`SymbolTable`.
"""

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path as _FsPath
from typing import Iterable, Iterator, Sequence, TextIO, Union

EPSILON = 0
EPSILON_SYMBOL = "<eps>"

ZERO = math.inf
ONE = 0.0


def plus(a: float, b: float) -> float:
    """Combine alternative costs: min."""
    return a if a <= b else b


def times(a: float, b: float) -> float:
    """Combine consecutive costs: addition (inf absorbs)."""
    return a + b


class SymbolTable:
    """Bidirectional string<->id mapping; id 0 is always ``<eps>``."""

    def __init__(self, symbols: Iterable[str] = ()):
        self._symbols: list[str] = [EPSILON_SYMBOL]
        self._ids: dict[str, int] = {EPSILON_SYMBOL: EPSILON}
        for sym in symbols:
            self.add(sym)

    def add(self, symbol: str) -> int:
        """Return the id of ``symbol``, adding it if new."""
        sid = self._ids.get(symbol)
        if sid is None:
            sid = len(self._symbols)
            self._symbols.append(symbol)
            self._ids[symbol] = sid
        return sid

    def id(self, symbol: str) -> int:
        try:
            return self._ids[symbol]
        except KeyError:
            raise ValueError(f"unknown symbol {symbol!r}") from None

    def symbol(self, sid: int) -> str:
        if 0 <= sid < len(self._symbols):
            return self._symbols[sid]
        raise ValueError(f"unknown symbol id {sid}")

    def copy(self) -> "SymbolTable":
        dup = SymbolTable()
        dup._symbols = list(self._symbols)
        dup._ids = dict(self._ids)
        return dup

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._ids

    def __len__(self) -> int:
        return len(self._symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self._symbols)

    def __eq__(self, other: object):
        if self is other:
            return True
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self._symbols == other._symbols

    def __repr__(self):
        return f"SymbolTable({len(self)} symbols)"


@dataclass(frozen=True)
class Arc:
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


@dataclass(frozen=True)
class Path:
    """A materialized accepting path.

    ``weight`` includes the final weight of the terminal state; ``istring``
    and ``ostring`` are the arc labels as strings with epsilons removed.
    """

    arcs: tuple[Arc, ...]
    weight: float
    istring: tuple[str, ...]
    ostring: tuple[str, ...]


class Wfst:
    """Arc-list transducer.  Mutable while being built, then treated as
    immutable: none of the operations in this module modify their inputs,
    so a finished machine is safe to share across threads."""

    def __init__(self, isymbols: SymbolTable | None = None,
                 osymbols: SymbolTable | None = None):
        self.isymbols = isymbols if isymbols is not None else SymbolTable()
        self.osymbols = osymbols if osymbols is not None else SymbolTable()
        self.start: int | None = None
        self.finals: dict[int, float] = {}
        self._arcs: list[list[Arc]] = []

    # -- construction ------------------------------------------------------

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def set_start(self, state: int) -> None:
        self._check_state(state)
        self.start = state

    def set_final(self, state: int, weight: float = 0.0) -> None:
        self._check_state(state)
        self.finals[state] = float(weight)

    def add_arc(self, src: int, ilabel: Union[str, int],
                olabel: Union[str, int], weight: float, dst: int) -> None:
        """Add an arc; string labels are interned into the symbol tables."""
        self._check_state(src)
        self._check_state(dst)
        il = self.isymbols.add(ilabel) if isinstance(ilabel, str) else int(ilabel)
        ol = self.osymbols.add(olabel) if isinstance(olabel, str) else int(olabel)
        self._arcs[src].append(Arc(il, ol, float(weight), dst))

    def _check_state(self, state: int) -> None:
        if not 0 <= state < len(self._arcs):
            raise ValueError(f"invalid state {state}")

    # -- inspection --------------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(arcs) for arcs in self._arcs)

    def arcs(self, state: int) -> Sequence[Arc]:
        return self._arcs[state]

    def all_arcs(self) -> Iterator[tuple[int, Arc]]:
        for state, arcs in enumerate(self._arcs):
            for arc in arcs:
                yield state, arc

    def is_final(self, state: int) -> bool:
        return state in self.finals

    def final_weight(self, state: int) -> float:
        return self.finals.get(state, ZERO)

    def __eq__(self, other: object):
        if not isinstance(other, Wfst):
            return NotImplemented
        return (self.start == other.start
                and self.finals == other.finals
                and self._arcs == other._arcs
                and self.isymbols == other.isymbols
                and self.osymbols == other.osymbols)

    def __repr__(self):
        return f"Wfst({self.num_states} states, {self.num_arcs} arcs)"


def linear_acceptor(symbols: Sequence[str], symtab: SymbolTable | None = None) -> Wfst:
    """Chain acceptor for a symbol sequence, all weights zero.

    Input and output labels are identical; the single final state carries
    weight zero.  Raises on an empty sequence and on epsilon symbols.
    """
    if not symbols:
        raise ValueError("empty input")
    table = symtab if symtab is not None else SymbolTable()
    m = Wfst(table, table)
    prev = m.add_state()
    m.set_start(prev)
    for sym in symbols:
        sid = table.add(sym)
        if sid == EPSILON:
            raise ValueError("epsilon symbol not allowed in acceptor input")
        nxt = m.add_state()
        m.add_arc(prev, sid, sid, 0.0, nxt)
        prev = nxt
    m.set_final(prev, 0.0)
    return m


def compose(a: Wfst, b: Wfst) -> Wfst:
    """Relational composition of ``a`` and ``b``.

    Matches ``a``'s output tape against ``b``'s input tape, adding weights.
    Requires ``a.osymbols == b.isymbols`` (the shared tape must use one
    alphabet).  Epsilons on the shared tape are coordinated with the
    three-state filter so every logical path appears exactly once.  The
    result is trimmed.
    """
    if a.osymbols != b.isymbols:
        raise ValueError("alphabet mismatch")
    out = Wfst(a.isymbols, b.osymbols)
    if a.start is None or b.start is None:
        return out

    by_ilabel: dict[tuple[int, int], list[Arc]] = {}
    for q in range(b.num_states):
        for arc in b.arcs(q):
            by_ilabel.setdefault((q, arc.ilabel), []).append(arc)

    state_ids: dict[tuple[int, int, int], int] = {}
    queue: deque[tuple[int, int, int]] = deque()

    def state_of(key: tuple[int, int, int]) -> int:
        sid = state_ids.get(key)
        if sid is None:
            sid = out.add_state()
            state_ids[key] = sid
            queue.append(key)
        return sid

    out.set_start(state_of((a.start, b.start, 0)))
    while queue:
        qa, qb, f = key = queue.popleft()
        src = state_ids[key]
        if qa in a.finals and qb in b.finals:
            out.set_final(src, a.finals[qa] + b.finals[qb])
        eps_b = by_ilabel.get((qb, EPSILON), ())
        for arc_a in a.arcs(qa):
            if arc_a.olabel != EPSILON:
                for arc_b in by_ilabel.get((qb, arc_a.olabel), ()):
                    dst = state_of((arc_a.nextstate, arc_b.nextstate, 0))
                    out.add_arc(src, arc_a.ilabel, arc_b.olabel,
                                arc_a.weight + arc_b.weight, dst)
            else:
                if f == 0:
                    # both sides advance on epsilon together
                    for arc_b in eps_b:
                        dst = state_of((arc_a.nextstate, arc_b.nextstate, 0))
                        out.add_arc(src, arc_a.ilabel, arc_b.olabel,
                                    arc_a.weight + arc_b.weight, dst)
                if f in (0, 2):
                    # a advances alone
                    dst = state_of((arc_a.nextstate, qb, 2))
                    out.add_arc(src, arc_a.ilabel, EPSILON, arc_a.weight, dst)
        if f in (0, 1):
            # b advances alone
            for arc_b in eps_b:
                dst = state_of((qa, arc_b.nextstate, 1))
                out.add_arc(src, EPSILON, arc_b.olabel, arc_b.weight, dst)
    return trim(out)


def shortest_path(m: Wfst, nshortest: int = 1) -> list[Path]:
    """Up to ``nshortest`` cheapest accepting paths, cheapest first.

    Equal-weight paths are ordered by their output label-id sequence, so
    results are deterministic.  Arcs and final weights of ``inf`` are
    treated as absent (the tropical zero).  Requires every cycle of ``m``,
    if any, to carry strictly positive weight; returns ``[]`` when there is
    no accepting path.
    """
    if nshortest < 1:
        raise ValueError("nshortest must be >= 1")
    results: list[Path] = []
    if m.start is None:
        return results
    tick = itertools.count()
    # entries: (weight, output ids, tiebreak, completed, state, arcs)
    heap: list[tuple] = [(0.0, (), next(tick), False, m.start, ())]
    while heap and len(results) < nshortest:
        weight, olabels, _, done, state, arcs = heapq.heappop(heap)
        if done:
            results.append(_make_path(m, arcs, weight))
            continue
        final = m.finals.get(state)
        if final is not None and not math.isinf(final):
            heapq.heappush(heap, (weight + final, olabels, next(tick),
                                  True, state, arcs))
        for arc in m.arcs(state):
            if math.isinf(arc.weight):
                continue
            new_olabels = olabels + (arc.olabel,) if arc.olabel != EPSILON else olabels
            heapq.heappush(heap, (weight + arc.weight, new_olabels, next(tick),
                                  False, arc.nextstate, arcs + (arc,)))
    return results


def _make_path(m: Wfst, arcs: tuple[Arc, ...], weight: float) -> Path:
    istring = tuple(m.isymbols.symbol(a.ilabel) for a in arcs if a.ilabel != EPSILON)
    ostring = tuple(m.osymbols.symbol(a.olabel) for a in arcs if a.olabel != EPSILON)
    return Path(arcs, weight, istring, ostring)


def trim(m: Wfst) -> Wfst:
    """Keep only states on some start-to-final path; relation unchanged.

    Surviving states keep their relative order, so trimming is idempotent
    and an already-trim machine comes back structurally identical.
    """
    out = Wfst(m.isymbols, m.osymbols)
    if m.start is None:
        return out

    reachable: set[int] = set()
    stack = [m.start]
    while stack:
        q = stack.pop()
        if q in reachable:
            continue
        reachable.add(q)
        for arc in m.arcs(q):
            if arc.nextstate not in reachable:
                stack.append(arc.nextstate)

    back: dict[int, list[int]] = {}
    for q, arc in m.all_arcs():
        back.setdefault(arc.nextstate, []).append(q)
    coreachable: set[int] = set()
    stack = list(m.finals)
    while stack:
        q = stack.pop()
        if q in coreachable:
            continue
        coreachable.add(q)
        for p in back.get(q, ()):
            if p not in coreachable:
                stack.append(p)

    kept = sorted(reachable & coreachable)
    if m.start not in kept:
        return out
    remap = {old: new for new, old in enumerate(kept)}
    for _ in kept:
        out.add_state()
    out.set_start(remap[m.start])
    for old in kept:
        if old in m.finals:
            out.set_final(remap[old], m.finals[old])
        for arc in m.arcs(old):
            if arc.nextstate in remap:
                out.add_arc(remap[old], arc.ilabel, arc.olabel,
                            arc.weight, remap[arc.nextstate])
    return out


def stats(m: Wfst) -> tuple[int, int]:
    """(state count, arc count)."""
    return m.num_states, m.num_arcs


# -- text serialization ----------------------------------------------------
#
# One record per line:
#   start <id>
#   isym <string> <id>      osym <string> <id>
#   <src> <ilabel> <olabel> <weight> <dst>     (arc)
#   <state> <weight>                           (final)
# Weight "inf" denotes the absorbing infinite cost.


def _fmt_weight(w: float) -> str:
    return "inf" if math.isinf(w) else repr(w)


def write_fst_text(m: Wfst, out: Union[str, _FsPath, TextIO]) -> None:
    if isinstance(out, (str, _FsPath)):
        with open(out, "w", encoding="utf-8") as handle:
            write_fst_text(m, handle)
        return
    if m.start is not None:
        out.write(f"start {m.start}\n")
    for sid, sym in enumerate(m.isymbols):
        out.write(f"isym {sym} {sid}\n")
    for sid, sym in enumerate(m.osymbols):
        out.write(f"osym {sym} {sid}\n")
    for state, arc in m.all_arcs():
        out.write(f"{state} {arc.ilabel} {arc.olabel} "
                  f"{_fmt_weight(arc.weight)} {arc.nextstate}\n")
    for state in sorted(m.finals):
        out.write(f"{state} {_fmt_weight(m.finals[state])}\n")


def read_fst_text(src: Union[str, _FsPath, TextIO]) -> Wfst:
    if isinstance(src, (str, _FsPath)):
        with open(src, "r", encoding="utf-8") as handle:
            return read_fst_text(handle)

    start: int | None = None
    isyms: list[tuple[str, int]] = []
    osyms: list[tuple[str, int]] = []
    arcs: list[tuple[int, int, int, float, int]] = []
    finals: list[tuple[int, float]] = []
    for lineno, raw in enumerate(src, 1):
        fields = raw.split()
        if not fields:
            continue
        kind = fields[0]
        try:
            if kind == "start" and len(fields) == 2:
                start = int(fields[1])
            elif kind in ("isym", "osym") and len(fields) == 3:
                pair = (fields[1], int(fields[2]))
                (isyms if kind == "isym" else osyms).append(pair)
            elif len(fields) == 5:
                arcs.append((int(fields[0]), int(fields[1]), int(fields[2]),
                             float(fields[3]), int(fields[4])))
            elif len(fields) == 2:
                finals.append((int(fields[0]), float(fields[1])))
            else:
                raise ValueError("unrecognized record")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None

    m = Wfst(_table_from_pairs(isyms), _table_from_pairs(osyms))
    top = -1
    if start is not None:
        top = max(top, start)
    for src_state, _, _, _, dst in arcs:
        top = max(top, src_state, dst)
    for state, _ in finals:
        top = max(top, state)
    for _ in range(top + 1):
        m.add_state()
    if start is not None:
        m.set_start(start)
    for src_state, il, ol, w, dst in arcs:
        m.add_arc(src_state, il, ol, w, dst)
    for state, w in finals:
        m.set_final(state, w)
    return m


def _table_from_pairs(pairs: list[tuple[str, int]]) -> SymbolTable:
    if not pairs:
        return SymbolTable()
    by_id = dict((sid, sym) for sym, sid in pairs)
    if sorted(by_id) != list(range(len(by_id))) or by_id.get(0) != EPSILON_SYMBOL:
        raise ValueError("symbol table ids must be dense and reserve 0 for epsilon")
    return SymbolTable(by_id[sid] for sid in range(1, len(by_id)))
