"""Dependency-graph data model and a seeded random-graph generator.

Graphs are sequences of nodes (1..n after linearization; empty nodes are
materialized as ordinary positions) plus a set of directed arcs.  Arcs may
form cycles, share dependents, or leave nodes unattached; the only hard
invariants are no self-loops and no duplicate (head, dep) pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

VIRTUAL_ROOT = 0


@dataclass(frozen=True)
class Node:
    """One sequence position; ``sub_id > 0`` marks an empty node ``id.sub_id``."""

    id: int
    sub_id: int = 0
    form: str = "_"
    is_top: bool = False

    def __post_init__(self):
        if self.sub_id < 0 or self.id < 0 or (self.id == 0 and self.sub_id == 0):
            raise ValueError(f"bad node id {self.id}.{self.sub_id}")

    @property
    def is_empty(self) -> bool:
        return self.sub_id > 0

    @property
    def conllu_id(self) -> str:
        return f"{self.id}.{self.sub_id}" if self.sub_id else str(self.id)


@dataclass(frozen=True, order=True)
class Arc:
    """Directed arc head -> dep; head 0 is the virtual root."""

    head: int
    dep: int
    relation: Optional[str] = None

    def __post_init__(self):
        if self.head == self.dep:
            raise ValueError(f"self-loop arc {self.head}->{self.dep}")
        if self.head < 0 or self.dep < 1:
            raise ValueError(f"bad arc endpoints {self.head}->{self.dep}")

    @property
    def is_root(self) -> bool:
        return self.head == VIRTUAL_ROOT

    @property
    def key(self) -> tuple[int, int]:
        return (self.head, self.dep)

    def unlabeled(self) -> "Arc":
        return Arc(self.head, self.dep) if self.relation is not None else self


class DepGraph:
    """A sentence's nodes and arcs.  Immutable after construction."""

    __slots__ = ("nodes", "arcs", "sent_id", "_extras")

    def __init__(
        self,
        nodes: Sequence[Node],
        arcs: Iterable[Arc] = (),
        sent_id: Optional[str] = None,
        extras: Sequence[tuple[int, str]] = (),
    ):
        nodes = tuple(nodes)
        arcs = tuple(sorted(set(arcs)))
        n = len(nodes)
        seen: set[tuple[int, int]] = set()
        for arc in arcs:
            if arc.head > n or arc.dep > n:
                raise ValueError(f"arc {arc.head}->{arc.dep} exceeds {n} nodes")
            if arc.key in seen:
                raise ValueError(f"duplicate arc {arc.head}->{arc.dep}")
            seen.add(arc.key)
        # arcs are the single source of truth for the top flags
        top_positions = {arc.dep for arc in arcs if arc.is_root}
        nodes = tuple(
            node if ((i + 1 in top_positions) == node.is_top)
            else Node(node.id, node.sub_id, node.form, i + 1 in top_positions)
            for i, node in enumerate(nodes)
        )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "sent_id", sent_id)
        # opaque payload lines (multiword-token ranges), keyed by the
        # position they precede; round-tripped on write, invisible here
        object.__setattr__(self, "_extras", tuple(extras))

    def __setattr__(self, name, value):
        raise AttributeError("DepGraph is immutable")

    def __getstate__(self):
        return (self.nodes, self.arcs, self.sent_id, self._extras)

    def __setstate__(self, state):
        for slot, value in zip(self.__slots__, state):
            object.__setattr__(self, slot, value)

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DepGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.nodes, self.arcs))

    def __repr__(self) -> str:
        return f"DepGraph(n={len(self.nodes)}, arcs={[(a.head, a.dep) for a in self.arcs]})"

    @property
    def extras(self) -> tuple[tuple[int, str], ...]:
        return self._extras

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(node.form for node in self.nodes)

    def arc_set(self, labeled: bool = False) -> frozenset:
        if labeled:
            return frozenset((a.head, a.dep, a.relation) for a in self.arcs)
        return frozenset(a.key for a in self.arcs)

    def structural_arcs(self) -> tuple[Arc, ...]:
        """Arcs between real positions, i.e. excluding the virtual root."""
        return tuple(a for a in self.arcs if not a.is_root)

    def relation_of(self, head: int, dep: int) -> Optional[str]:
        for arc in self.arcs:
            if arc.head == head and arc.dep == dep:
                return arc.relation
        return None

    def with_arcs(self, arcs: Iterable[Arc]) -> "DepGraph":
        return DepGraph(self.nodes, arcs, self.sent_id, self._extras)


def simple_graph(n: int, arcs: Iterable[tuple], sent_id: Optional[str] = None) -> DepGraph:
    """Build a graph from bare (head, dep[, relation]) tuples, for tests."""
    nodes = [Node(i, form=f"w{i}") for i in range(1, n + 1)]
    return DepGraph(nodes, [Arc(*triple) for triple in arcs], sent_id)


def random_graph(
    n: int,
    density: float = 1.0,
    p_cycle: float = 0.0,
    p_reentrancy: float = 0.0,
    seed: int = 0,
) -> DepGraph:
    """Seeded random graph with roughly ``density`` arcs per node.

    Degenerate parameters clamp instead of raising.  With probability
    ``p_cycle`` a short directed cycle is planted, and with probability
    ``p_reentrancy`` an extra head is attached to an already-headed node;
    planted arcs count toward the arc budget so the realized density stays
    within the generator's tolerance.
    """
    n = max(1, int(n))
    density = max(0.0, float(density))
    rng = random.Random(seed)
    max_arcs = n * (n - 1)
    target = min(max_arcs, round(n * density))
    chosen: set[tuple[int, int]] = set()

    if n >= 2 and rng.random() < min(max(p_cycle, 0.0), 1.0):
        length = rng.choice((2, 3)) if n >= 3 else 2
        members = rng.sample(range(1, n + 1), length)
        for i, head in enumerate(members):
            chosen.add((head, members[(i + 1) % length]))

    if n >= 3 and rng.random() < min(max(p_reentrancy, 0.0), 1.0):
        dep = rng.randint(1, n)
        heads = rng.sample([h for h in range(1, n + 1) if h != dep], 2)
        chosen.update((head, dep) for head in heads)

    if len(chosen) < target:
        pool = [
            (h, d)
            for h in range(1, n + 1)
            for d in range(1, n + 1)
            if h != d and (h, d) not in chosen
        ]
        chosen.update(rng.sample(pool, target - len(chosen)))

    nodes = [Node(i, form=f"w{i}") for i in range(1, n + 1)]
    return DepGraph(nodes, [Arc(h, d) for h, d in sorted(chosen)])
