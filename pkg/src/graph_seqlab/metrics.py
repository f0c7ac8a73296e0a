"""Scoring, round-trip coverage, treebank statistics, label statistics.

Scores are micro-averaged F1 over arc sets, labeled and unlabeled, with
exact-match rates alongside; arcs from the virtual root count like any
other arc.  Treebank statistics summarize what a corpus demands of the
codecs: sentence length, plane demand, arc density, structural-arc
counts, and cycle counts.  Label statistics describe the
inventory a tagger would have to learn, including how concentrated its
frequency mass is.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import DepGraph
from .hb import hb_decode, hb_encode
from .planes import assign_planes, bk_decode, bk_encode
from .ropes import proper_rope_cover


# --- scoring ------------------------------------------------------------------


@dataclass(frozen=True)
class ScoreReport:
    """Micro-F1 percentages and the counts behind them."""

    uf: float
    lf: float
    um: float
    lm: float
    gold_arcs: int
    pred_arcs: int
    correct_unlabeled: int
    correct_labeled: int
    sentences: int
    exact_unlabeled: int
    exact_labeled: int

    def as_dict(self) -> dict:
        return {
            "UF": round(self.uf, 2),
            "LF": round(self.lf, 2),
            "UM": round(self.um, 2),
            "LM": round(self.lm, 2),
            "gold_arcs": self.gold_arcs,
            "pred_arcs": self.pred_arcs,
            "correct_unlabeled": self.correct_unlabeled,
            "correct_labeled": self.correct_labeled,
            "sentences": self.sentences,
            "exact_unlabeled": self.exact_unlabeled,
            "exact_labeled": self.exact_labeled,
        }


def _f1(correct: int, gold: int, pred: int) -> float:
    if gold == 0 and pred == 0:
        return 100.0
    if correct == 0:
        return 0.0
    precision = correct / pred
    recall = correct / gold
    return 200.0 * precision * recall / (precision + recall)


def score(gold: Sequence[DepGraph], pred: Sequence[DepGraph]) -> ScoreReport:
    """Compare corpora sentence by sentence; root arcs count like any other."""
    if len(gold) != len(pred):
        raise ValueError(f"corpus sizes differ: {len(gold)} gold vs {len(pred)} predicted")
    n_gold = n_pred = cu = cl = eu = el = 0
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g.nodes) != len(p.nodes):
            raise ValueError(
                f"sentence {i + 1}: length differs ({len(g.nodes)} vs {len(p.nodes)})"
            )
        gu, pu = g.arc_set(), p.arc_set()
        gl, pl = g.arc_set(labeled=True), p.arc_set(labeled=True)
        n_gold += len(gu)
        n_pred += len(pu)
        cu += len(gu & pu)
        cl += len(gl & pl)
        eu += gu == pu
        el += gl == pl
    n = len(gold)
    return ScoreReport(
        uf=_f1(cu, n_gold, n_pred),
        lf=_f1(cl, n_gold, n_pred),
        um=100.0 * eu / n if n else 100.0,
        lm=100.0 * el / n if n else 100.0,
        gold_arcs=n_gold,
        pred_arcs=n_pred,
        correct_unlabeled=cu,
        correct_labeled=cl,
        sentences=n,
        exact_unlabeled=eu,
        exact_labeled=el,
    )


# --- round-trip coverage ------------------------------------------------------


def roundtrip_failures(
    corpus: Sequence[DepGraph], codec: str, k: Optional[int] = None
) -> list[tuple[int, frozenset, frozenset]]:
    """Per-sentence encode/decode mismatches: (index, missing, spurious)."""
    failures = []
    for i, g in enumerate(corpus):
        want = g.arc_set()
        if codec == "hb":
            got = {a.key for a in hb_decode(hb_encode(g))}
        elif codec == "bk":
            if k is None:
                raise ValueError("plane codec needs a plane budget k")
            got = {a.key for a in bk_decode(bk_encode(g, k), k)}
        else:
            raise ValueError(f"unknown codec {codec!r}")
        if got != want:
            failures.append((i, frozenset(want - got), frozenset(got - want)))
    return failures


def coverage(corpus: Sequence[DepGraph], codec: str, k: Optional[int] = None) -> float:
    """Percentage of sentences whose arcs survive encode/decode exactly."""
    if not corpus:
        return 100.0
    failed = len(roundtrip_failures(corpus, codec, k))
    return 100.0 * (len(corpus) - failed) / len(corpus)


# --- treebank statistics ------------------------------------------------------


def _count_cycles(g: DepGraph) -> int:
    """Strongly connected components with at least two nodes (iterative)."""
    succ: dict[int, list[int]] = {}
    for arc in g.structural_arcs():
        succ.setdefault(arc.head, []).append(arc.dep)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    cycles = 0
    for root in range(1, len(g.nodes) + 1):
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                size = 0
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    size += 1
                    if member == node:
                        break
                if size >= 2:
                    cycles += 1
    return cycles


@dataclass(frozen=True)
class CorpusStats:
    n_sents: int
    mean_len: float
    density: float
    mean_structural: float
    plane_histogram: dict[int, float] = field(default_factory=dict)
    n_cycles: int = 0

    @property
    def max_planes(self) -> int:
        return max(self.plane_histogram) if self.plane_histogram else 0

    def as_dict(self) -> dict:
        return {
            "n_sents": self.n_sents,
            "mean_len": round(self.mean_len, 2),
            "density": round(self.density, 4),
            "mean_structural": round(self.mean_structural, 2),
            "plane_histogram": {
                str(p): round(frac, 4) for p, frac in sorted(self.plane_histogram.items())
            },
            "n_cycles": self.n_cycles,
        }


def treebank_stats(corpus: Sequence[DepGraph]) -> CorpusStats:
    """Corpus summary; the plane histogram buckets sentences by the number
    of planes an unbounded greedy assignment uses (at least 1)."""
    if not corpus:
        return CorpusStats(0, 0.0, 0.0, 0.0, {}, 0)
    lengths = []
    densities = []
    structurals = []
    plane_counts: Counter[int] = Counter()
    cycles = 0
    for g in corpus:
        n = len(g.nodes)
        lengths.append(n)
        densities.append(len(g.structural_arcs()) / n if n else 0.0)
        structurals.append(len(proper_rope_cover(g).sets))
        plane_counts[max(1, assign_planes(g).n_planes)] += 1
        cycles += _count_cycles(g)
    total = len(corpus)
    return CorpusStats(
        n_sents=total,
        mean_len=sum(lengths) / total,
        density=sum(densities) / total,
        mean_structural=sum(structurals) / total,
        plane_histogram={p: c / total for p, c in sorted(plane_counts.items())},
        n_cycles=cycles,
    )


# --- label statistics ---------------------------------------------------------


@dataclass(frozen=True)
class LabelStats:
    inventory_size: int
    total: int
    unseen: int
    rank_frequency: tuple[int, ...]
    p50: float

    def as_dict(self) -> dict:
        return {
            "inventory_size": self.inventory_size,
            "total": self.total,
            "unseen": self.unseen,
            "p50": round(self.p50, 6),
            "rank_frequency": list(self.rank_frequency),
        }


def label_stats(
    train: Iterable[str], eval_labels: Optional[Iterable[str]] = None
) -> LabelStats:
    """Inventory statistics over rendered label strings.

    ``p50`` is the fraction of distinct labels (most frequent first) whose
    cumulative count first reaches half of all occurrences; small values
    mean a few labels carry most of the mass.
    """
    counts = Counter(train)
    ranked = sorted(counts.values(), reverse=True)
    total = sum(ranked)
    p50 = 0.0
    if ranked:
        cumulative = 0
        for rank, count in enumerate(ranked, 1):
            cumulative += count
            if 2 * cumulative >= total:
                p50 = rank / len(ranked)
                break
    unseen = 0
    if eval_labels is not None:
        unseen = len(set(eval_labels) - counts.keys())
    return LabelStats(
        inventory_size=len(ranked),
        total=total,
        unseen=unseen,
        rank_frequency=tuple(ranked),
        p50=p50,
    )


# --- correlation ----------------------------------------------------------------


def pearson(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Product-moment correlation with a two-sided t-test p-value.

    The coefficient is computed here (mean-centered, compensated sums);
    only the p-value defers to the t distribution's survival function.
    """
    if len(xs) != len(ys):
        raise ValueError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    sxx = math.fsum((x - mean_x) ** 2 for x in xs)
    syy = math.fsum((y - mean_y) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("a series is constant; correlation undefined")
    sxy = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if 1.0 - r * r < 1e-15:
        return r, 0.0
    from scipy.stats import t as t_dist

    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(t_dist.sf(abs(t), n - 2))
    return r, p
