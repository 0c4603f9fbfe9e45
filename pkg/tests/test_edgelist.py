import pytest

from tfreg.alon import build_alon
from tfreg.edgelist import EdgeListError, format_graph, parse_edgelist, read_edgelist, write_edgelist
from tfreg.graph import build_graph

from oracles import cycle, petersen


def test_empty_graph_format():
    assert format_graph(build_graph(5, [])) == "5 0\n"


def test_c5_format():
    assert format_graph(build_graph(5, cycle(5))) == "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n"


def test_roundtrip(tmp_path):
    G = build_graph(10, petersen())
    path = tmp_path / "g.el"
    write_edgelist(G, path)
    assert read_edgelist(path) == G
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


def test_alon_rewrite_is_bit_identical(tmp_path):
    G, _ = build_alon(4)
    a, b = tmp_path / "a.el", tmp_path / "b.el"
    write_edgelist(G, a)
    write_edgelist(read_edgelist(a), b)
    assert a.read_bytes() == b.read_bytes()


def test_comments_ignored():
    G = parse_edgelist("# header comment\n3 2\n0 1\n# mid\n1 2\n")
    assert G.edges.tolist() == [[0, 1], [1, 2]]


@pytest.mark.parametrize("text, line", [
    ("3 2\n0 1\n", 1),           # count mismatch
    ("3 1\n1 0\n", 2),           # u > v
    ("3 2\n1 2\n0 1\n", 3),      # order
    ("3 2\n0 1\n0 1\n", 3),      # duplicate
    ("3 1\n0 3\n", 2),           # out of range
    ("3 1\n0 x\n", 2),           # junk
    ("", 1),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(EdgeListError, match=f"line {line}:"):
        parse_edgelist(text)
