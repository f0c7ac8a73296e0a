import pytest

from graph_seqlab import simple_graph

# running example: ten tokens, two crossing subgraphs, one reentrancy (10)
GOLDEN_ARCS = [(1, 5), (1, 8), (5, 3), (8, 10), (2, 6), (6, 4), (6, 10), (6, 9)]
GOLDEN_HB = ["!/", "!/", "!<", "<1", "!\\>1", "!>!/", "_", "!>1/", ">", "!>"]
GOLDEN_BK2 = ["//", "/1", "<", "<1", "\\>", "\\1>1/1/1", "_", ">/", ">1", ">>1"]


@pytest.fixture
def golden():
    return simple_graph(10, GOLDEN_ARCS)
