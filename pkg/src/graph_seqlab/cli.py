"""Command-line interface.

Subcommands: encode, decode, roundtrip, stats, labelstats, score, gen.
Exit codes: 0 on success, 1 on usage errors, 2 on malformed data (with
file and line context on stderr).  ``--jobs`` parallelizes per-sentence
work; its default comes from the GRAPH_SEQLAB_JOBS environment variable.
"""

from __future__ import annotations

import argparse
import contextlib
import functools
import json
import multiprocessing
import os
import sys
from typing import Iterator, Optional, Sequence, TextIO

from .formats import (
    ParseError,
    read_graphs,
    read_labels,
    write_graphs,
    write_labels,
)
from .graph import Arc, DepGraph, random_graph
from .hb import DecodeError, decode_to_graph, hb_decode, hb_encode
from .labels import TokenLabel, render_label
from .metrics import label_stats, score, treebank_stats
from .planes import bk_decode, bk_encode, decode_to_graph_bk

JOBS_ENV = "GRAPH_SEQLAB_JOBS"
PLACEHOLDER_RELATION = "dep"
_GEN_RELATIONS = ("arg0", "arg1", "arg2", "mod", "coord")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this toolkit reserves 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="graph-seqlab",
        description="Encode dependency graphs as token labels and back.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format",
            choices=("sdp", "conllu"),
            default="sdp",
            help="graph file format (default: sdp)",
        )

    def add_jobs(p):
        p.add_argument(
            "--jobs",
            type=int,
            default=None,
            help=f"worker processes (default: ${JOBS_ENV} or 1)",
        )

    p = sub.add_parser("encode", help="graphs in, label TSV out")
    p.add_argument("--codec", choices=("hb", "bk"), required=True)
    p.add_argument("--k", type=int, help="plane budget (bk only)")
    add_format(p)
    add_jobs(p)
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("decode", help="label TSV in, graphs out")
    p.add_argument(
        "--strict",
        action="store_true",
        help="reject ill-formed label sequences instead of salvaging",
    )
    add_format(p)
    add_jobs(p)
    p.add_argument(
        "--relation",
        default=PLACEHOLDER_RELATION,
        help=f"relation written for decoded arcs (default: {PLACEHOLDER_RELATION})",
    )
    p.add_argument("labels")
    p.add_argument("output")

    p = sub.add_parser("roundtrip", help="encode+decode a corpus, report coverage")
    p.add_argument("--codec", choices=("hb", "bk"), required=True)
    p.add_argument("--k", type=int, help="plane budget (bk only)")
    add_format(p)
    add_jobs(p)
    p.add_argument("input")

    p = sub.add_parser("stats", help="treebank statistics")
    add_format(p)
    p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
    p.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p.add_argument("input")

    p = sub.add_parser("labelstats", help="label inventory statistics")
    p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
    p.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p.add_argument(
        "--ranks", metavar="FILE", help="write rank/count/cumulative TSV to FILE"
    )
    p.add_argument("train")
    p.add_argument("eval", nargs="?")

    p = sub.add_parser("score", help="micro-F1 of predicted graphs against gold")
    add_format(p)
    p.add_argument("--json", action="store_true", help="emit JSON instead of key=value")
    p.add_argument("gold")
    p.add_argument("pred")

    p = sub.add_parser("gen", help="seeded random corpus (SDP by default)")
    add_format(p)
    p.add_argument("--n-sents", type=int, default=100)
    p.add_argument("--len", type=int, default=10, dest="length")
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--p-cycle", type=float, default=0.0)
    p.add_argument("--p-reentrancy", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("output")
    return parser


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def _resolve_jobs(requested: Optional[int]) -> int:
    if requested is None:
        raw = os.environ.get(JOBS_ENV, "1")
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None
    return max(1, requested)


def _jobs_or_usage_error(parser: argparse.ArgumentParser, requested: Optional[int]) -> int:
    try:
        return _resolve_jobs(requested)
    except ValueError as exc:
        parser.error(str(exc))


def _map_jobs(func, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with multiprocessing.Pool(jobs) as pool:
        return pool.map(func, items, chunksize=max(1, len(items) // (jobs * 4)))


def _require_budget(parser: argparse.ArgumentParser, args) -> Optional[int]:
    if args.codec == "bk":
        if args.k is None or args.k < 1:
            parser.error("--codec bk requires --k >= 1")
        return args.k
    if args.k is not None:
        parser.error("--k is only meaningful with --codec bk")
    return None


def _encode_one(g: DepGraph, codec: str, k: Optional[int]):
    labels = hb_encode(g) if codec == "hb" else bk_encode(g, k)
    return g.forms, labels


def _decode_one(
    item: tuple[Sequence[str], Sequence[TokenLabel]],
    codec: str,
    k: Optional[int],
    strict: bool,
    relation: Optional[str],
) -> DepGraph:
    forms, labels = item
    if codec == "hb":
        g = decode_to_graph(labels, forms, strict=strict)
    else:
        g = decode_to_graph_bk(labels, forms, k, strict=strict)
    if relation:
        g = g.with_arcs(Arc(a.head, a.dep, relation) for a in g.arcs)
    return g


def _cmd_encode(parser, args) -> int:
    k = _require_budget(parser, args)
    jobs = _jobs_or_usage_error(parser, args.jobs)
    graphs = read_graphs(args.input, args.format)
    worker = functools.partial(_encode_one, codec=args.codec, k=k)
    sentences = _map_jobs(worker, graphs, jobs)
    with _open_out(args.output) as out:
        write_labels(sentences, out, args.codec, k)
    return 0


def _cmd_decode(parser, args) -> int:
    jobs = _jobs_or_usage_error(parser, args.jobs)
    with open(args.labels, encoding="utf-8") as handle:
        codec, k, sentences = read_labels(handle, args.labels)
    worker = functools.partial(
        _decode_one, codec=codec, k=k, strict=args.strict, relation=args.relation
    )
    if args.strict:
        # sequential so errors carry the sentence index; the robust path
        # never raises and is safe to farm out
        graphs = []
        for i, item in enumerate(sentences, 1):
            try:
                graphs.append(worker(item))
            except DecodeError as exc:
                raise ValueError(f"{args.labels}: sentence {i}: {exc}") from None
    else:
        graphs = _map_jobs(worker, sentences, jobs)
    with _open_out(args.output) as out:
        write_graphs(graphs, out, args.format, missing_relation=args.relation)
    return 0


def _roundtrip_one(g: DepGraph, codec: str, k: Optional[int]):
    want = g.arc_set()
    if codec == "hb":
        got = {a.key for a in hb_decode(hb_encode(g))}
    else:
        got = {a.key for a in bk_decode(bk_encode(g, k), k)}
    return frozenset(want - got), frozenset(got - want)


def _cmd_roundtrip(parser, args) -> int:
    k = _require_budget(parser, args)
    jobs = _jobs_or_usage_error(parser, args.jobs)
    graphs = read_graphs(args.input, args.format)
    worker = functools.partial(_roundtrip_one, codec=args.codec, k=k)
    results = _map_jobs(worker, graphs, jobs)
    failures = [
        (i, missing, spurious)
        for i, (missing, spurious) in enumerate(results)
        if missing or spurious
    ]
    for index, missing, spurious in failures:
        parts = [f"sentence {index + 1}:"]
        if missing:
            parts.append("missing " + ",".join(f"{h}->{d}" for h, d in sorted(missing)))
        if spurious:
            parts.append("spurious " + ",".join(f"{h}->{d}" for h, d in sorted(spurious)))
        print(" ".join(parts))
    pct = 100.0 * (len(graphs) - len(failures)) / len(graphs) if graphs else 100.0
    print(f"coverage: {pct:.2f}")
    return 0


def _cmd_stats(parser, args) -> int:
    graphs = read_graphs(args.input, args.format)
    stats = treebank_stats(graphs)
    if args.json:
        print(json.dumps(stats.as_dict(), indent=2, sort_keys=True))
    else:
        planes = ";".join(
            f"{p}:{frac:.4f}" for p, frac in sorted(stats.plane_histogram.items())
        )
        print("n_sents\tmean_len\tdensity\tmean_structural\tplanes\tn_cycles")
        print(
            f"{stats.n_sents}\t{stats.mean_len:.2f}\t{stats.density:.4f}"
            f"\t{stats.mean_structural:.2f}\t{planes or '-'}\t{stats.n_cycles}"
        )
    if args.figures:
        from .figures import save_plane_histogram

        os.makedirs(args.figures, exist_ok=True)
        path = save_plane_histogram(stats, os.path.join(args.figures, "planes.png"))
        print(f"figure: {path}", file=sys.stderr)
    return 0


def _labels_of(path: str) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        _, _, sentences = read_labels(handle, path)
    return [render_label(label) for _, labels in sentences for label in labels]


def _cmd_labelstats(parser, args) -> int:
    train = _labels_of(args.train)
    eval_labels = _labels_of(args.eval) if args.eval else None
    stats = label_stats(train, eval_labels)
    if args.json:
        print(json.dumps(stats.as_dict(), indent=2, sort_keys=True))
    else:
        print("inventory_size\ttotal\tunseen\tp50")
        print(f"{stats.inventory_size}\t{stats.total}\t{stats.unseen}\t{stats.p50:.6f}")
    if args.ranks:
        with _open_out(args.ranks) as out:
            out.write("rank\tcount\tcumulative_fraction\n")
            cumulative = 0
            for rank, count in enumerate(stats.rank_frequency, 1):
                cumulative += count
                out.write(f"{rank}\t{count}\t{cumulative / stats.total:.6f}\n")
    if args.figures:
        from .figures import save_rank_frequency

        os.makedirs(args.figures, exist_ok=True)
        path = save_rank_frequency(
            stats, os.path.join(args.figures, "rank_frequency.png")
        )
        print(f"figure: {path}", file=sys.stderr)
    return 0


def _cmd_score(parser, args) -> int:
    gold = read_graphs(args.gold, args.format)
    pred = read_graphs(args.pred, args.format)
    report = score(gold, pred)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        for name, value in (
            ("UF", report.uf),
            ("LF", report.lf),
            ("UM", report.um),
            ("LM", report.lm),
        ):
            print(f"{name}={value:.2f}")
    return 0


def _cmd_gen(parser, args) -> int:
    if args.n_sents < 1:
        parser.error("--n-sents must be >= 1")
    graphs = []
    for i in range(args.n_sents):
        g = random_graph(
            args.length,
            density=args.density,
            p_cycle=args.p_cycle,
            p_reentrancy=args.p_reentrancy,
            seed=args.seed + i,
        )
        arcs = [
            Arc(a.head, a.dep, _GEN_RELATIONS[(3 * a.head + a.dep) % len(_GEN_RELATIONS)])
            for a in g.arcs
        ]
        graphs.append(DepGraph(g.nodes, arcs, sent_id=f"gen{i + 1}"))
    with _open_out(args.output) as out:
        write_graphs(graphs, out, args.format)
    return 0


_COMMANDS = {
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "roundtrip": _cmd_roundtrip,
    "stats": _cmd_stats,
    "labelstats": _cmd_labelstats,
    "score": _cmd_score,
    "gen": _cmd_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except (ParseError, DecodeError) as exc:
        print(f"graph-seqlab: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"graph-seqlab: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"graph-seqlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
