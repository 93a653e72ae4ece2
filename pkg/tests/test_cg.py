"""Commuting graph construction, twin collapse, and DIMACS round-trips."""

import random

import pytest

from pcg.cg import (
    CommGraph,
    build_graph,
    build_reduced,
    collapse_twins,
    complement,
    induced,
    read_dimacs,
    read_dimacs_file,
    to_dimacs,
    write_dimacs,
)
from pcg.errors import PcgError
from pcg.named import build
from pcg.perf import is_perfect_bruteforce


def _graph(n, edges):
    rows = [0] * n
    for u, v in edges:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return CommGraph(n, rows)


def _random_graph(rng, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return _graph(n, edges)


def test_build_graph_sym3():
    G = build("sym:3")
    g = build_graph(G)
    # five non-central elements; only the two 3-cycles commute
    assert g.n == 5
    assert g.edge_count() == 1
    assert not g.includes_center
    full = build_graph(G, include_center=True)
    assert full.n == 6
    assert full.includes_center
    # the identity is adjacent to everything else
    assert sorted(full.degree(u) for u in range(6)) == [1, 1, 1, 2, 2, 5]


def test_graph_accessors():
    g = _graph(4, [(0, 1), (1, 2)])
    assert g.adjacent(0, 1)
    assert not g.adjacent(0, 2)
    assert g.neighbors(1) == [0, 2]
    assert g.degree(1) == 2
    assert g.degree(3) == 0
    assert g.edge_count() == 2
    assert sorted(g.edges()) == [(0, 1), (1, 2)]


def test_row_count_validated():
    with pytest.raises(PcgError):
        CommGraph(3, [0, 0])


def test_build_graph_is_deterministic():
    G = build("sl:3:2")
    g1 = build_graph(G)
    g2 = build_graph(G)
    assert g1.rows == g2.rows
    assert g1.vids == g2.vids
    assert to_dimacs(g1) == to_dimacs(g2)


def test_build_reduced():
    # sym:3 is an AC-group: nothing survives the reduction
    assert build_reduced(build("sym:3")).n == 0
    # in sym:4 only the three double transpositions have non-abelian
    # centralizers, and they pairwise commute
    r = build_reduced(build("sym:4"))
    assert r.n == 3
    assert r.edge_count() == 3
    assert r.reduced
    G = build("sym:4")
    for u in range(r.n):
        i = r.vids[u]
        assert not G.is_abelian_subset(G.centralizer(i))


def test_reduced_vertex_encodings():
    r = build_reduced(build("sym:4"))
    encs = {r.render_vertex(u) for u in range(r.n)}
    assert encs == {"perm:2,1,4,3", "perm:3,4,1,2", "perm:4,3,2,1"}


def test_collapse_twins_triangle():
    # a triangle of mutual twins collapses to a point
    g = _graph(3, [(0, 1), (1, 2), (0, 2)])
    c = collapse_twins(g)
    assert c.n == 1
    assert c.collapsed
    assert c.report["twin_classes"] == [3]


def test_collapse_twins_mixed_passes():
    # 0-1 and 2-3 are open twins (same neighbors, non-adjacent);
    # the collapse then leaves a path
    g = _graph(5, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)])
    c = collapse_twins(g)
    assert c.n < g.n
    assert sum(c.report["twin_classes"]) == g.n
    assert c.report["open_merges"] + c.report["closed_merges"] == g.n - c.n


def test_collapse_preserves_perfection_verdict():
    rng = random.Random(331)
    for _ in range(120):
        n = rng.randrange(4, 11)
        g = _random_graph(rng, n)
        c = collapse_twins(g)
        assert c.n <= g.n
        assert is_perfect_bruteforce(g) == is_perfect_bruteforce(c)


def test_collapse_preserves_hole():
    g = _graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    c = collapse_twins(g)
    assert c.n == 5  # a 5-cycle has no twins
    assert c.rows == g.rows


def test_complement_involution():
    rng = random.Random(77)
    g = _random_graph(rng, 8)
    cc = complement(complement(g))
    assert cc.rows == g.rows
    h = complement(g)
    for u in range(8):
        for v in range(8):
            if u != v:
                assert h.adjacent(u, v) == (not g.adjacent(u, v))


def test_induced_subgraph():
    g = _graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    h = induced(g, [0, 1, 2])
    assert h.n == 3
    assert h.edge_count() == 2
    assert h.adjacent(0, 1) and h.adjacent(1, 2) and not h.adjacent(0, 2)


def test_dimacs_roundtrip():
    rng = random.Random(5150)
    g = _random_graph(rng, 9)
    text = to_dimacs(g)
    back = read_dimacs(text)
    assert back.n == g.n
    assert back.rows == g.rows
    assert to_dimacs(back) == text


def test_dimacs_file_roundtrip(tmp_path):
    g = _graph(4, [(0, 1), (2, 3)])
    path = tmp_path / "g.dimacs"
    write_dimacs(g, path)
    back = read_dimacs_file(path)
    assert back.rows == g.rows
    # repeated writes are byte-identical
    text1 = path.read_bytes()
    write_dimacs(g, path)
    assert path.read_bytes() == text1


def test_dimacs_rejects_malformed():
    with pytest.raises(PcgError):
        read_dimacs("p clique 3 0\n")
    with pytest.raises(PcgError):
        read_dimacs("e 1 2\n")  # edge before header
    with pytest.raises(PcgError):
        read_dimacs("p edge 3 1\ne 1 9\n")  # vertex out of range
    with pytest.raises(PcgError):
        read_dimacs("p edge 3\n")


def test_dimacs_counts_header():
    g = _graph(3, [(0, 1)])
    text = to_dimacs(g)
    assert "p edge 3 1" in text
    assert "e 1 2" in text


def test_reduced_graph_known_sizes():
    # vertex counts survive both reduction stages
    r = build_reduced(build("alt:6"))
    assert r.n == 45
    c = collapse_twins(r)
    assert c.n == 45  # no twins in the alt:6 reduced graph
    r2 = build_reduced(build("sl:3:2"))
    assert r2.n == 21
    assert collapse_twins(r2).n == 21
