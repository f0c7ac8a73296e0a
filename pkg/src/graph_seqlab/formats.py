"""Readers and writers: SDP 2015, enhanced CoNLL-U, and label TSV.

SDP blocks carry bilexical graphs in columns (id, form, lemma, pos, top,
pred, frame, one argument column per predicate in textual order).  The
enhanced-CoNLL-U reader takes the full graph from the DEPS column,
materializes empty nodes (``n.m`` ids) as ordinary positions, and keeps
multiword-token ranges as opaque pass-through lines.  Label files are
token<TAB>label lines with a ``#codec=`` header and blank lines between
sentences.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence, TextIO

from .graph import Arc, DepGraph, Node
from .labels import LabelParseError, TokenLabel, parse_label, render_label

TOP_RELATION = "top"


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message: str, line: int, path: Optional[str] = None):
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.path = path


def _blocks(lines: Iterable[str]) -> Iterator[list[tuple[int, str]]]:
    """Yield runs of non-blank lines with their 1-based line numbers."""
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if line.strip():
            block.append((lineno, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


# --- SDP 2015 ---------------------------------------------------------------


def parse_sdp(lines: Iterable[str], path: Optional[str] = None) -> list[DepGraph]:
    graphs = []
    for block in _blocks(lines):
        sent_id = None
        rows = []
        for lineno, line in block:
            if line.startswith("#"):
                text = line[1:].strip()
                if text and not text.upper().startswith("SDP"):
                    sent_id = text
                continue
            rows.append((lineno, line.split("\t")))
        if not rows:
            continue
        n_preds = sum(1 for _, cols in rows if len(cols) > 5 and cols[5] == "+")
        width = 7 + n_preds
        nodes = []
        tops = []
        pred_positions = []
        for pos, (lineno, cols) in enumerate(rows, 1):
            if len(cols) != width:
                raise ParseError(
                    f"expected {width} columns ({n_preds} predicates), got {len(cols)}",
                    lineno,
                    path,
                )
            if cols[0] != str(pos):
                raise ParseError(f"expected id {pos}, got {cols[0]!r}", lineno, path)
            nodes.append(Node(pos, form=cols[1], is_top=cols[4] == "+"))
            if cols[4] == "+":
                tops.append(pos)
            if cols[5] == "+":
                pred_positions.append(pos)
        arcs = [Arc(0, pos, TOP_RELATION) for pos in tops]
        for pos, (lineno, cols) in enumerate(rows, 1):
            for j, rel in enumerate(cols[7:]):
                if rel == "_":
                    continue
                head = pred_positions[j]
                if head == pos:
                    raise ParseError(f"self-loop on predicate {head}", lineno, path)
                arcs.append(Arc(head, pos, rel))
        try:
            graphs.append(DepGraph(nodes, arcs, sent_id=sent_id))
        except ValueError as exc:
            raise ParseError(str(exc), rows[0][0], path) from exc
    return graphs


def write_sdp(
    graphs: Iterable[DepGraph],
    out: TextIO,
    missing_relation: Optional[str] = None,
) -> None:
    """Write SDP blocks; ``missing_relation`` fills unlabeled arcs, else error."""
    out.write("#SDP 2015\n")
    for i, g in enumerate(graphs, 1):
        if any(node.is_empty for node in g.nodes):
            raise ValueError(
                f"sentence {g.sent_id or i}: SDP cannot represent empty nodes"
            )
        tops = set()
        incoming: dict[int, list[Arc]] = {}
        pred_set = set()
        for arc in g.arcs:
            if arc.is_root:
                tops.add(arc.dep)
            else:
                incoming.setdefault(arc.dep, []).append(arc)
                pred_set.add(arc.head)
        preds = sorted(pred_set)
        pred_index = {p: j for j, p in enumerate(preds)}
        out.write(f"#{g.sent_id or i}\n")
        for pos, node in enumerate(g.nodes, 1):
            args = ["_"] * len(preds)
            for arc in incoming.get(pos, ()):
                rel = arc.relation or missing_relation
                if rel is None:
                    raise ValueError(
                        f"arc {arc.head}->{arc.dep} has no relation; "
                        "set one or pass missing_relation"
                    )
                args[pred_index[arc.head]] = rel
            cols = [
                str(pos),
                node.form,
                "_",
                "_",
                "+" if pos in tops else "-",
                "+" if pos in pred_set else "-",
                "_",
                *args,
            ]
            out.write("\t".join(cols) + "\n")
        out.write("\n")


# --- enhanced CoNLL-U -------------------------------------------------------


def _parse_conllu_id(text: str, lineno: int, path: Optional[str]) -> tuple[int, int]:
    try:
        if "." in text:
            major, minor = text.split(".", 1)
            return int(major), int(minor)
        return int(text), 0
    except ValueError:
        raise ParseError(f"malformed node id {text!r}", lineno, path) from None


def parse_conllu(lines: Iterable[str], path: Optional[str] = None) -> list[DepGraph]:
    """Read enhanced graphs from DEPS; empty nodes become real positions."""
    graphs = []
    for block in _blocks(lines):
        sent_id = None
        rows = []
        extras = []
        for lineno, line in block:
            if line.startswith("#"):
                text = line[1:].strip()
                if text.startswith("sent_id"):
                    _, _, value = text.partition("=")
                    sent_id = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ParseError(f"expected 10 columns, got {len(cols)}", lineno, path)
            if "-" in cols[0]:
                anchor = cols[0].split("-", 1)[0]
                try:
                    extras.append((int(anchor), line))
                except ValueError:
                    raise ParseError(f"malformed token range {cols[0]!r}", lineno, path)
                continue
            rows.append((lineno, cols))
        if not rows:
            continue
        ids = [_parse_conllu_id(cols[0], lineno, path) for lineno, cols in rows]
        if sorted(ids) != ids or len(set(ids)) != len(ids):
            bad = next(
                lineno
                for (lineno, _), (prev, cur) in zip(rows[1:], zip(ids, ids[1:]))
                if cur <= prev
            )
            raise ParseError("node ids out of order or duplicated", bad, path)
        expected = 1
        for (lineno, _), (major, minor) in zip(rows, ids):
            if minor == 0:
                if major != expected:
                    raise ParseError(f"expected token id {expected}, got {major}", lineno, path)
                expected += 1
        position = {node_id: pos for pos, node_id in enumerate(ids, 1)}
        nodes = [
            Node(major, minor, form=cols[1])
            for (_, cols), (major, minor) in zip(rows, ids)
        ]
        arcs = []
        for pos, (lineno, cols) in enumerate(rows, 1):
            deps = cols[8]
            if deps == "_":
                continue
            for item in deps.split("|"):
                head_text, sep, rel = item.partition(":")
                if not sep:
                    raise ParseError(f"malformed DEPS item {item!r}", lineno, path)
                head_id = _parse_conllu_id(head_text, lineno, path)
                if head_id == (0, 0):
                    arcs.append(Arc(0, pos, rel))
                    continue
                if head_id not in position:
                    raise ParseError(
                        f"DEPS head {head_text!r} does not exist", lineno, path
                    )
                arcs.append(Arc(position[head_id], pos, rel))
        try:
            graphs.append(DepGraph(nodes, arcs, sent_id=sent_id, extras=tuple(extras)))
        except ValueError as exc:
            raise ParseError(str(exc), rows[0][0], path) from exc
    return graphs


def write_conllu(
    graphs: Iterable[DepGraph],
    out: TextIO,
    missing_relation: Optional[str] = None,
) -> None:
    for i, g in enumerate(graphs, 1):
        out.write(f"# sent_id = {g.sent_id or i}\n")
        deps_by_dep: dict[int, list[tuple[tuple[int, int], str]]] = {}
        for arc in g.arcs:
            rel = arc.relation or missing_relation
            if rel is None:
                raise ValueError(
                    f"arc {arc.head}->{arc.dep} has no relation; "
                    "set one or pass missing_relation"
                )
            head_id = (0, 0) if arc.is_root else (
                g.nodes[arc.head - 1].id,
                g.nodes[arc.head - 1].sub_id,
            )
            deps_by_dep.setdefault(arc.dep, []).append((head_id, rel))
        extras_by_anchor: dict[int, list[str]] = {}
        for anchor, raw in g.extras:
            extras_by_anchor.setdefault(anchor, []).append(raw)
        for pos, node in enumerate(g.nodes, 1):
            if not node.is_empty:
                for raw in extras_by_anchor.get(node.id, ()):
                    out.write(raw + "\n")
            items = sorted(deps_by_dep.get(pos, ()))
            deps = "|".join(
                f"{major}.{minor}:{rel}" if minor else f"{major}:{rel}"
                for (major, minor), rel in items
            )
            cols = [
                node.conllu_id,
                node.form,
                "_",
                "_",
                "_",
                "_",
                "_",
                "_",
                deps or "_",
                "_",
            ]
            out.write("\t".join(cols) + "\n")
        out.write("\n")


# --- label TSV ---------------------------------------------------------------


def parse_codec_header(line: str) -> tuple[str, Optional[int]]:
    """Split ``#codec=hb`` / ``#codec=bk:2`` into (name, plane budget)."""
    body = line[1:].strip()
    _, _, value = body.partition("=")
    name, _, suffix = value.strip().partition(":")
    if name == "hb" and not suffix:
        return "hb", None
    if name == "bk" and suffix.isdigit() and int(suffix) >= 1:
        return "bk", int(suffix)
    raise ValueError(f"unrecognized codec header {line.strip()!r}")


def read_labels(
    lines: Iterable[str], path: Optional[str] = None
) -> tuple[str, Optional[int], list[tuple[list[str], list[TokenLabel]]]]:
    """Read a label file: (codec, plane budget, [(forms, labels) per sentence])."""
    codec: Optional[str] = None
    k: Optional[int] = None
    sentences = []
    for block in _blocks(lines):
        forms: list[str] = []
        labels: list[TokenLabel] = []
        for lineno, line in block:
            if line.startswith("#"):
                if line[1:].strip().startswith("codec"):
                    if codec is not None:
                        raise ParseError("duplicate codec header", lineno, path)
                    try:
                        codec, k = parse_codec_header(line)
                    except ValueError as exc:
                        raise ParseError(str(exc), lineno, path) from exc
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ParseError(f"expected form<TAB>label, got {len(cols)} columns", lineno, path)
            if codec is None:
                raise ParseError("token line before #codec= header", lineno, path)
            forms.append(cols[0])
            try:
                labels.append(parse_label(cols[1]))
            except LabelParseError as exc:
                raise ParseError(str(exc), lineno, path) from exc
        if forms:
            sentences.append((forms, labels))
    if codec is None:
        raise ParseError("missing #codec= header", 1, path)
    return codec, k, sentences


def write_labels(
    sentences: Iterable[tuple[Sequence[str], Sequence[TokenLabel]]],
    out: TextIO,
    codec: str,
    k: Optional[int] = None,
) -> None:
    out.write(f"#codec={codec}:{k}\n" if codec == "bk" else f"#codec={codec}\n")
    for forms, labels in sentences:
        for form, label in zip(forms, labels):
            out.write(f"{form}\t{render_label(label)}\n")
        out.write("\n")


# --- convenience -------------------------------------------------------------


def read_graphs(path: str, fmt: str) -> list[DepGraph]:
    with open(path, encoding="utf-8") as handle:
        if fmt == "sdp":
            return parse_sdp(handle, path)
        if fmt == "conllu":
            return parse_conllu(handle, path)
    raise ValueError(f"unknown format {fmt!r}")


def write_graphs(
    graphs: Iterable[DepGraph],
    out: TextIO,
    fmt: str,
    missing_relation: Optional[str] = None,
) -> None:
    if fmt == "sdp":
        write_sdp(graphs, out, missing_relation)
    elif fmt == "conllu":
        write_conllu(graphs, out, missing_relation)
    else:
        raise ValueError(f"unknown format {fmt!r}")
