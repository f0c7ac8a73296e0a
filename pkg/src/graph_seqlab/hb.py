"""Hierarchical bracketing codec: graphs to token labels and back.

Each structural arc becomes a balanced superbracket pair; each auxiliary
arc becomes one plain bracket at the endpoint it does not share with its
structural arc, and is resolved when that structural superbracket closes.
Indices on closing symbols skip over unrelated open superbrackets, and
indices on plain closers pick the anchoring superbracket by depth, which
is what lets unboundedly nested structures share one finite label
alphabet.

Decoding replays the labels left to right against a single stack.  The
strict decoder rejects ill-formed sequences with positions; the robust
decoder implements the salvage rules used when labels come from a
tagger: dangling dependent-side closers attach to the virtual root,
dangling head-side closers and unclosed openers are dropped, and the
result is always a valid arc set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

from .graph import Arc, DepGraph, Node
from .labels import BracketSymbol, TokenLabel
from .ropes import RopeCover, proper_rope_cover, span_of


class DecodeError(ValueError):
    """Raised by the strict decoder; carries the token position (1-based)."""

    def __init__(self, message: str, position: int, symbol: Optional[str] = None):
        at = f"token {position}" if symbol is None else f"token {position} symbol {symbol!r}"
        super().__init__(f"{at}: {message}")
        self.position = position
        self.symbol = symbol


# symbol classes in within-token processing order
_CLOSE_SUPER, _CLOSE_PLAIN, _OPEN_SUPER, _OPEN_PLAIN = range(4)


@dataclass
class _PlannedSymbol:
    cls: int
    position: int
    matched: int  # position of the matching event, for tie-breaking
    direction: Literal["left", "right"]
    arc: Arc  # structural arc for super symbols, auxiliary arc for plain
    anchor: Optional[Arc] = None  # structural arc a close-plain counts from
    index: int = 0


@dataclass
class _Entry:
    """One open bracket on the (simulated or real) decoding stack."""

    kind: Literal["super", "plain"]
    position: int
    direction: Literal["left", "right"]
    pending: int = 0  # plain: walks to survive before matching
    arc: Optional[Arc] = None  # encoder bookkeeping only
    symbol: Optional[_PlannedSymbol] = None  # encoder backfill (open-plain)


def _plan_symbols(cover: RopeCover, n: int) -> list[list[_PlannedSymbol]]:
    """Lay out one symbol list per token, in canonical order, indices unset."""
    per_token: list[list[_PlannedSymbol]] = [[] for _ in range(n + 1)]
    for struct_set in cover.sets:
        s = struct_set.structural_arc
        lo, hi = span_of(s)
        direction = "right" if s.head < s.dep else "left"
        per_token[lo].append(_PlannedSymbol(_OPEN_SUPER, lo, hi, direction, s))
        per_token[hi].append(_PlannedSymbol(_CLOSE_SUPER, hi, lo, direction, s))
        for aux in struct_set.auxiliaries:
            a_lo, a_hi = span_of(aux.arc)
            a_dir = "right" if aux.arc.head < aux.arc.dep else "left"
            if aux.leans_at == "lo":
                # shares lo with s: one closing bracket at its hi endpoint,
                # anchored on s's superbracket
                per_token[a_hi].append(
                    _PlannedSymbol(_CLOSE_PLAIN, a_hi, lo, a_dir, aux.arc, anchor=s)
                )
            else:
                # shares hi with s: one opening bracket at its lo endpoint,
                # matched when s's superbracket closes at the shared token
                per_token[a_lo].append(
                    _PlannedSymbol(_OPEN_PLAIN, a_lo, hi, a_dir, aux.arc, anchor=s)
                )
    for symbols in per_token:
        symbols.sort(key=lambda s: (s.cls, -s.matched, s.direction))
    return per_token


def _simulate_indices(per_token: list[list[_PlannedSymbol]]) -> None:
    """Run the decoder over the planned symbols to fix every skip index.

    Closing indices count the open superbrackets sitting above the target
    at decode time; a plain opener's index is the number of superbracket
    closures that walk past it before the one that matches it, assigned
    retroactively when the match happens.
    """
    stack: list[_Entry] = []
    for symbols in per_token:
        for sym in symbols:
            if sym.cls == _OPEN_SUPER:
                stack.append(_Entry("super", sym.position, sym.direction, arc=sym.arc))
            elif sym.cls == _OPEN_PLAIN:
                stack.append(
                    _Entry("plain", sym.position, sym.direction, arc=sym.arc, symbol=sym)
                )
            elif sym.cls == _CLOSE_PLAIN:
                skipped = 0
                for entry in reversed(stack):
                    if entry.kind != "super":
                        continue
                    if entry.arc == sym.anchor:
                        break
                    skipped += 1
                else:
                    raise AssertionError(f"anchor of {sym.arc} not on stack")
                sym.index = skipped
            else:  # _CLOSE_SUPER
                skipped = 0
                kept: list[_Entry] = []
                matched = False
                while stack:
                    entry = stack.pop()
                    if entry.kind == "plain":
                        if entry.symbol is not None and entry.symbol.anchor == sym.arc:
                            entry.symbol.index = entry.pending
                        else:
                            entry.pending += 1
                            kept.append(entry)
                        continue
                    if entry.arc == sym.arc:
                        matched = True
                        break
                    skipped += 1
                    kept.append(entry)
                if not matched:
                    raise AssertionError(f"opener of {sym.arc} not on stack")
                stack.extend(reversed(kept))
                sym.index = skipped
    if stack:
        raise AssertionError(f"unclosed symbols left on stack: {stack!r}")


def hb_encode(g: DepGraph) -> list[TokenLabel]:
    """Encode a graph as one hierarchical-bracketing label per token.

    Root arcs (head 0) surface as the ``^`` marker on the dependent.
    Total on all graphs and lossless: the strict decoder recovers the
    unlabeled arc set exactly.
    """
    cover = proper_rope_cover(g)
    n = len(g.nodes)
    per_token = _plan_symbols(cover, n)
    _simulate_indices(per_token)
    tops = {arc.dep for arc in g.arcs if arc.is_root}
    labels = []
    for pos in range(1, n + 1):
        symbols = tuple(
            BracketSymbol(
                tier="super" if s.cls in (_OPEN_SUPER, _CLOSE_SUPER) else "plain",
                direction=s.direction,
                polarity="open" if s.cls in (_OPEN_SUPER, _OPEN_PLAIN) else "close",
                index=s.index,
            )
            for s in per_token[pos]
        )
        labels.append(TokenLabel(symbols=symbols, top=pos in tops))
    return labels


def _emit(head: int, dep: int, *, strict: bool, position: int, symbol: str) -> Optional[Arc]:
    if head == dep:
        if strict:
            raise DecodeError("bracket pair forms a self-loop", position, symbol)
        return None
    return Arc(head, dep)


def _close_plain(
    stack: list[_Entry],
    sym: BracketSymbol,
    pos: int,
    arcs: set[Arc],
    strict: bool,
) -> None:
    """Resolve a plain closer: its index picks an anchoring superbracket."""
    supers = [e for e in reversed(stack) if e.kind == "super"]
    text = sym.render()
    if sym.index < len(supers):
        anchor = supers[sym.index].position
    elif strict:
        raise DecodeError(
            f"index {sym.index} exceeds {len(supers)} open superbrackets", pos, text
        )
    elif supers:
        anchor = supers[-1].position  # clamp to the deepest superbracket
    elif sym.direction == "right":
        arcs.add(Arc(0, pos))  # dangling dependent attaches to the root
        return
    else:
        return  # dangling head-side closer: no valid arc, drop
    arc = _emit(
        *((anchor, pos) if sym.direction == "right" else (pos, anchor)),
        strict=strict,
        position=pos,
        symbol=text,
    )
    if arc is not None:
        arcs.add(arc)


def _close_super(
    stack: list[_Entry],
    sym: BracketSymbol,
    pos: int,
    arcs: set[Arc],
    strict: bool,
) -> None:
    """Resolve a superbracket closer, releasing matured plain brackets.

    Walking down the stack: plain entries whose pending count reached
    zero pop and attach to this token; other plain entries survive one
    more walk; the index-th open superbracket from the top pops and
    emits the structural arc, everything else stays put.
    """
    text = sym.render()
    n_supers = sum(1 for e in stack if e.kind == "super")
    index = sym.index
    if index >= n_supers:
        if strict:
            raise DecodeError(
                f"index {index} exceeds {n_supers} open superbrackets", pos, text
            )
        if n_supers == 0:
            # walk the whole stack, then attach the closer itself to the root
            for entry in _walk_without_match(stack):
                _attach_plain(entry, pos, arcs, strict, text)
            if sym.direction == "right":
                arcs.add(Arc(0, pos))
            return
        index = n_supers - 1  # clamp to the deepest superbracket
    kept: list[_Entry] = []
    while True:
        entry = stack.pop()
        if entry.kind == "plain":
            if entry.pending == 0:
                _attach_plain(entry, pos, arcs, strict, text)
            else:
                entry.pending -= 1
                kept.append(entry)
        elif index > 0:
            index -= 1
            kept.append(entry)
        else:
            anchor = entry.position
            arc = _emit(
                *((anchor, pos) if sym.direction == "right" else (pos, anchor)),
                strict=strict,
                position=pos,
                symbol=text,
            )
            if arc is not None:
                arcs.add(arc)
            break
    stack.extend(reversed(kept))


def _walk_without_match(stack: list[_Entry]) -> Iterable[_Entry]:
    """Robust walk when no superbracket exists: mature or age every plain."""
    kept: list[_Entry] = []
    released: list[_Entry] = []
    while stack:
        entry = stack.pop()
        if entry.kind == "plain" and entry.pending == 0:
            released.append(entry)
        else:
            if entry.kind == "plain":
                entry.pending -= 1
            kept.append(entry)
    stack.extend(reversed(kept))
    return released


def _attach_plain(
    entry: _Entry, pos: int, arcs: set[Arc], strict: bool, symbol: str
) -> None:
    pair = (entry.position, pos) if entry.direction == "right" else (pos, entry.position)
    arc = _emit(*pair, strict=strict, position=pos, symbol=symbol)
    if arc is not None:
        arcs.add(arc)


def _decode(labels: Sequence[TokenLabel], strict: bool) -> set[Arc]:
    stack: list[_Entry] = []
    arcs: set[Arc] = set()
    for offset, label in enumerate(labels):
        pos = offset + 1
        if label.top:
            arcs.add(Arc(0, pos))
        for sym in label.symbols:
            if sym.is_open:
                kind = "super" if sym.is_super else "plain"
                stack.append(_Entry(kind, pos, sym.direction, pending=sym.index))
            elif sym.is_super:
                _close_super(stack, sym, pos, arcs, strict)
            else:
                _close_plain(stack, sym, pos, arcs, strict)
    if stack and strict:
        entry = stack[0]
        raise DecodeError(
            f"{len(stack)} unmatched opening brackets remain", entry.position
        )
    return arcs


def hb_decode(labels: Sequence[TokenLabel]) -> set[Arc]:
    """Strict decode: labels must form a well-nested bracket sequence."""
    return _decode(labels, strict=True)


def hb_decode_robust(labels: Sequence[TokenLabel]) -> set[Arc]:
    """Salvaging decode: any label sequence yields a valid arc set.

    Dependent-side closers with no matching opener attach to the virtual
    root; head-side ones are dropped, as are unclosed openers, indices
    past the stack (clamped to the deepest superbracket), and self-loops.
    """
    return _decode(labels, strict=False)


def decode_to_graph(
    labels: Sequence[TokenLabel],
    forms: Optional[Sequence[str]] = None,
    strict: bool = False,
    sent_id: Optional[str] = None,
) -> DepGraph:
    """Decode labels into a graph over fresh nodes (relations unset)."""
    arcs = _decode(labels, strict=strict)
    if forms is None:
        forms = ["_"] * len(labels)
    nodes = [Node(i + 1, form=form) for i, form in enumerate(forms)]
    return DepGraph(nodes, sorted(arcs), sent_id=sent_id)
