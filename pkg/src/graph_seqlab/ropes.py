"""Leaning relation, proper rope cover, and structural-set partition.

An arc leans on another when the second spans it (non-strictly) and they
share the left or the right endpoint.  The proper rope cover is the arc
subset on which every other arc leans while no member leans on another
member; the remaining arcs are auxiliaries, each attached to the
structural arc it leans on together with the shared endpoint.

Arcs from the virtual root (head 0) never take part: they have no span
on the token sequence and are carried by a separate per-token marker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional

from .graph import Arc, DepGraph

LeanSide = Literal["lo", "hi"]

BRUTE_FORCE_MAX_ARCS = 16


@dataclass(frozen=True)
class Span:
    """Closed position interval of an arc, with its direction."""

    lo: int
    hi: int
    direction: Literal["left", "right"]

    @classmethod
    def of(cls, arc: Arc) -> "Span":
        if arc.is_root:
            raise ValueError(f"root arc {arc.head}->{arc.dep} has no span")
        if arc.head < arc.dep:
            return cls(arc.head, arc.dep, "right")
        return cls(arc.dep, arc.head, "left")


def span_of(arc: Arc) -> tuple[int, int]:
    return (min(arc.head, arc.dep), max(arc.head, arc.dep))


def leans_on(a: Arc, b: Arc) -> bool:
    """True iff ``b`` spans ``a`` and they share an endpoint.

    Arcs with identical spans (a 2-cycle pair) mutually lean; identical
    spans in the same direction would be the same arc and never occur.
    """
    a_lo, a_hi = span_of(a)
    b_lo, b_hi = span_of(b)
    if not (b_lo <= a_lo and a_hi <= b_hi):
        return False
    if (a_lo, a_hi) == (b_lo, b_hi) and (a.head < a.dep) == (b.head < b.dep):
        return False
    return a_lo == b_lo or a_hi == b_hi


@dataclass(frozen=True)
class Auxiliary:
    """An auxiliary arc and the endpoint it shares with its structural arc."""

    arc: Arc
    leans_at: LeanSide


@dataclass(frozen=True)
class StructuralSet:
    structural_arc: Arc
    auxiliaries: tuple[Auxiliary, ...] = ()


@dataclass(frozen=True)
class RopeCover:
    """Partition of the non-root arcs into structural sets."""

    sets: tuple[StructuralSet, ...]

    @property
    def structural(self) -> tuple[Arc, ...]:
        return tuple(s.structural_arc for s in self.sets)

    @property
    def auxiliaries(self) -> tuple[Auxiliary, ...]:
        return tuple(aux for s in self.sets for aux in s.auxiliaries)

    def arcs(self) -> frozenset[Arc]:
        covered = set(self.structural)
        covered.update(aux.arc for aux in self.auxiliaries)
        return frozenset(covered)


def _structural_order_key(arc: Arc) -> tuple[int, int]:
    lo, hi = span_of(arc)
    return (lo, -hi)


def _candidate_order_key(arc: Arc) -> tuple[int, int, int]:
    # widest spans first so every potential lean target is decided before
    # its leaners; for 2-cycle twins the rightward arc goes first and wins
    lo, hi = span_of(arc)
    return (lo - hi, lo, 0 if arc.head < arc.dep else 1)


def _assign_auxiliary(arc: Arc, structural: Iterable[Arc]) -> tuple[Arc, LeanSide]:
    """Pick the structural arc an auxiliary attaches to, and the shared side.

    At most one structural arc shares each endpoint (two sharing one would
    lean on each other), so the preference order is simply: the lo-sharing
    arc, else the hi-sharing one.  A same-span twin shares both endpoints
    and must attach at hi: its single bracket then opens at lo and is
    resolved when the twin's superbracket closes, which is the only
    decodable placement when both arcs end on the same token.
    """
    lo, hi = span_of(arc)
    lo_sharer: Optional[Arc] = None
    hi_sharer: Optional[Arc] = None
    for struct in structural:
        if not leans_on(arc, struct):
            continue
        s_lo, s_hi = span_of(struct)
        if (s_lo, s_hi) == (lo, hi):
            return struct, "hi"
        if s_lo == lo:
            lo_sharer = struct
        elif s_hi == hi:
            hi_sharer = struct
    if lo_sharer is not None:
        return lo_sharer, "lo"
    if hi_sharer is not None:
        return hi_sharer, "hi"
    raise AssertionError(f"auxiliary {arc} leans on no structural arc")


def _build_cover(structural: list[Arc], auxiliaries: Iterable[Arc]) -> RopeCover:
    structural = sorted(structural, key=_structural_order_key)
    members: dict[Arc, list[Auxiliary]] = {arc: [] for arc in structural}
    for aux in sorted(auxiliaries):
        target, side = _assign_auxiliary(aux, structural)
        members[target].append(Auxiliary(aux, side))
    return RopeCover(
        tuple(StructuralSet(arc, tuple(members[arc])) for arc in structural)
    )


def proper_rope_cover(g: DepGraph) -> RopeCover:
    """The unique proper rope cover, with auxiliaries grouped into sets.

    Candidates are scanned from widest span to narrowest; an arc becomes
    structural iff it leans on no structural arc chosen so far.  Every
    excluded arc leans on the structural arc that excluded it, so the
    result is total, and it is proper because a leaned-on arc always has
    a wider span (or is a 2-cycle twin, which is handled by scan order)
    and was therefore decided earlier.
    """
    arcs = sorted(g.structural_arcs(), key=_candidate_order_key)
    structural: list[Arc] = []
    auxiliaries: list[Arc] = []
    for arc in arcs:
        if any(leans_on(arc, r) for r in structural):
            auxiliaries.append(arc)
        else:
            structural.append(arc)
    return _build_cover(structural, auxiliaries)


def structural_arc_count(g: DepGraph) -> int:
    return len(proper_rope_cover(g).sets)


def brute_force_rope_cover(g: DepGraph) -> list[RopeCover]:
    """All proper rope covers, by exhaustive subset enumeration.

    Checks both defining conditions verbatim on every subset of the
    non-root arcs; the unique-cover claim can be audited against the
    result.  Guarded to 2^16 subsets.
    """
    arcs = sorted(g.structural_arcs())
    m = len(arcs)
    if m > BRUTE_FORCE_MAX_ARCS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_ARCS} arcs, got {m}")
    leans_mask = [
        sum(1 << j for j in range(m) if j != i and leans_on(arcs[i], arcs[j]))
        for i in range(m)
    ]
    covers = []
    for mask in range(1 << m):
        ok = True
        for i in range(m):
            if (mask >> i) & 1:
                if leans_mask[i] & mask:  # a member leans on a member
                    ok = False
                    break
            elif not leans_mask[i] & mask:  # an outsider leans on no member
                ok = False
                break
        if ok:
            structural = [arcs[i] for i in range(m) if (mask >> i) & 1]
            auxiliaries = [arcs[i] for i in range(m) if not (mask >> i) & 1]
            covers.append(_build_cover(structural, auxiliaries))
    return covers


def verify_cover(g: DepGraph, cover: RopeCover) -> bool:
    """Re-check both rope-cover conditions directly from the definitions."""
    arcs = set(g.structural_arcs())
    structural = set(cover.structural)
    if not structural <= arcs or cover.arcs() != frozenset(arcs):
        return False
    for r in structural:
        if any(leans_on(r, other) for other in structural if other != r):
            return False
    for arc in arcs - structural:
        if not any(leans_on(arc, r) for r in structural):
            return False
    for struct_set in cover.sets:
        s_lo, s_hi = span_of(struct_set.structural_arc)
        for aux in struct_set.auxiliaries:
            if not leans_on(aux.arc, struct_set.structural_arc):
                return False
            lo, hi = span_of(aux.arc)
            shared = lo == s_lo if aux.leans_at == "lo" else hi == s_hi
            if not shared:
                return False
    return True
