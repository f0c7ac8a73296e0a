"""Multi-plane bracketing codec with a fixed plane budget.

Arcs that cross in the same direction cannot share a stack, so each arc
is greedily assigned the lowest plane where it crosses no same-direction
arc already placed there.  With k planes the codec is lossy: arcs that
fit no plane are dropped at encode time.  The wire symbols are the four
plain brackets with the plane id as a digit suffix (omitted for plane
0), one opener at the arc's left endpoint and one closer at its right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import Arc, DepGraph, Node
from .hb import DecodeError
from .labels import BracketSymbol, TokenLabel
from .ropes import span_of


def crosses_same_direction(a: Arc, b: Arc) -> bool:
    """True iff the spans strictly interleave and directions agree."""
    if (a.head < a.dep) != (b.head < b.dep):
        return False
    (a_lo, a_hi), (b_lo, b_hi) = span_of(a), span_of(b)
    return a_lo < b_lo < a_hi < b_hi or b_lo < a_lo < b_hi < a_hi


@dataclass(frozen=True)
class PlaneAssignment:
    planes: dict[Arc, int]
    dropped: frozenset[Arc]

    @property
    def n_planes(self) -> int:
        """Planes actually used (0 for an arcless sentence)."""
        return max(self.planes.values()) + 1 if self.planes else 0


def assign_planes(g: DepGraph, k: Optional[int] = None) -> PlaneAssignment:
    """Greedy lowest-free-plane assignment over arcs ordered (lo asc, hi desc).

    With ``k=None`` every arc is placed and ``dropped`` is empty; with a
    budget, arcs conflicting on all k planes are dropped.  Root arcs are
    never planned (they travel as the top marker).
    """
    if k is not None and k < 1:
        raise ValueError(f"plane budget must be >= 1, got {k}")
    order = sorted(
        g.structural_arcs(), key=lambda a: (span_of(a)[0], -span_of(a)[1], a.head)
    )
    by_plane: list[list[Arc]] = []
    planes: dict[Arc, int] = {}
    dropped = []
    for arc in order:
        target = None
        for p, members in enumerate(by_plane):
            if not any(crosses_same_direction(arc, other) for other in members):
                target = p
                break
        if target is None:
            if k is not None and len(by_plane) >= k:
                dropped.append(arc)
                continue
            by_plane.append([])
            target = len(by_plane) - 1
        by_plane[target].append(arc)
        planes[arc] = target
    return PlaneAssignment(planes, frozenset(dropped))


def bk_encode(g: DepGraph, k: int) -> list[TokenLabel]:
    """Encode with a budget of k planes; unplaceable arcs are dropped."""
    assignment = assign_planes(g, k)
    per_token: list[list[tuple[int, int, int, BracketSymbol]]] = [
        [] for _ in range(len(g.nodes) + 1)
    ]
    for arc, plane in assignment.planes.items():
        lo, hi = span_of(arc)
        direction = "right" if arc.head < arc.dep else "left"
        opener = BracketSymbol("plain", direction, "open", plane)
        closer = BracketSymbol("plain", direction, "close", plane)
        # sort keys: closers before openers, then plane, then matched
        # position descending
        per_token[lo].append((1, plane, -hi, opener))
        per_token[hi].append((0, plane, -lo, closer))
    tops = {arc.dep for arc in g.arcs if arc.is_root}
    labels = []
    for pos in range(1, len(g.nodes) + 1):
        symbols = tuple(sym for *_, sym in sorted(per_token[pos], key=lambda t: t[:3]))
        labels.append(TokenLabel(symbols=symbols, top=pos in tops))
    return labels


def bk_decode(
    labels: Sequence[TokenLabel], k: Optional[int] = None, strict: bool = True
) -> set[Arc]:
    """Decode plane-suffixed brackets with one stack per (plane, direction).

    ``>``p pops the (p, right) stack pushed by ``/``p and heads the arc at
    the popped position; ``\\``p pops (p, left) pushed by ``<``p and heads
    it at the current token.  Robust mode attaches dangling dependent-side
    closers to the virtual root, drops dangling head-side closers and
    leftover openers, and never fails.
    """
    stacks: dict[tuple[int, str], list[int]] = {}
    arcs: set[Arc] = set()
    for offset, label in enumerate(labels):
        pos = offset + 1
        if label.top:
            arcs.add(Arc(0, pos))
        for sym in label.symbols:
            text = sym.render()
            if sym.is_super:
                raise DecodeError("superbracket in plane-codec input", pos, text)
            if strict and k is not None and sym.index >= k:
                raise DecodeError(f"plane {sym.index} exceeds budget {k}", pos, text)
            stack = stacks.setdefault((sym.index, sym.direction), [])
            if sym.is_open:
                stack.append(pos)
                continue
            if stack:
                anchor = stack.pop()
            elif strict:
                raise DecodeError("closing bracket with empty stack", pos, text)
            elif sym.direction == "right":
                arcs.add(Arc(0, pos))
                continue
            else:
                continue
            head, dep = (anchor, pos) if sym.direction == "right" else (pos, anchor)
            if head == dep:
                if strict:
                    raise DecodeError("bracket pair forms a self-loop", pos, text)
                continue
            arcs.add(Arc(head, dep))
    leftovers = sum(len(s) for s in stacks.values())
    if leftovers and strict:
        first = min(p for s in stacks.values() for p in s)
        raise DecodeError(f"{leftovers} unmatched opening brackets remain", first)
    return arcs


def bk_decode_robust(labels: Sequence[TokenLabel], k: Optional[int] = None) -> set[Arc]:
    return bk_decode(labels, k, strict=False)


def decode_to_graph_bk(
    labels: Sequence[TokenLabel],
    forms: Optional[Sequence[str]] = None,
    k: Optional[int] = None,
    strict: bool = False,
    sent_id: Optional[str] = None,
) -> DepGraph:
    """Decode plane-codec labels into a graph over fresh nodes."""
    arcs = bk_decode(labels, k, strict=strict)
    if forms is None:
        forms = ["_"] * len(labels)
    nodes = [Node(i + 1, form=form) for i, form in enumerate(forms)]
    return DepGraph(nodes, sorted(arcs), sent_id=sent_id)
