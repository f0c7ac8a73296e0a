"""Graph linearization toolkit: encode dependency graphs as token labels.

Two codecs turn arbitrary directed graphs over a sentence into one label
per token and back: a hierarchical bracketing scheme (lossless on every
graph) and a family of multi-plane bracketing schemes (lossless up to a
plane budget).  Around them: SDP and enhanced-CoNLL-U readers/writers,
scoring, treebank statistics, label-inventory statistics, and a seeded
random-graph generator.
"""

from .graph import VIRTUAL_ROOT, Arc, DepGraph, Node, random_graph, simple_graph
from .hb import DecodeError, decode_to_graph, hb_decode, hb_decode_robust, hb_encode
from .labels import (
    BracketSymbol,
    LabelParseError,
    TokenLabel,
    parse_label,
    render_label,
)
from .ropes import (
    Auxiliary,
    RopeCover,
    StructuralSet,
    brute_force_rope_cover,
    leans_on,
    proper_rope_cover,
    structural_arc_count,
)

__all__ = [
    "VIRTUAL_ROOT",
    "Arc",
    "Auxiliary",
    "BracketSymbol",
    "DecodeError",
    "DepGraph",
    "LabelParseError",
    "Node",
    "RopeCover",
    "StructuralSet",
    "TokenLabel",
    "brute_force_rope_cover",
    "decode_to_graph",
    "hb_decode",
    "hb_decode_robust",
    "hb_encode",
    "leans_on",
    "parse_label",
    "proper_rope_cover",
    "random_graph",
    "render_label",
    "simple_graph",
    "structural_arc_count",
]

__version__ = "0.1.0"
