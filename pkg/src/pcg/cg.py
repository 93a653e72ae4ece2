"""Commuting graphs and the two sound reductions.

A commuting graph has one vertex per chosen group element and an edge between
two vertices whose elements commute.  The two reductions implemented here
keep the Berge verdict unchanged:

* dropping vertices with abelian centralizer (they lie on no hole or
  antihole of length >= 5), and
* collapsing twin vertices (no such hole or antihole contains two vertices
  with identical open neighborhoods, or two with identical closed
  neighborhoods).

Adjacency rows are arbitrary-width python-int bitsets; vertex order follows
group element order, so rebuilding a graph from the same spec reproduces it
bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import GuardError, PcgError
from .grp import Group

FULL_VERTEX_GUARD = 30_000
REDUCED_VERTEX_GUARD = 100_000

TWIN_NOTE = (
    "collapse soundness: a hole or antihole of length >= 5 never contains "
    "two vertices with equal open neighborhoods nor two with equal closed "
    "neighborhoods, so keeping one representative per class preserves the "
    "Berge verdict"
)


class CommGraph:
    """Immutable undirected graph with optional group provenance.

    rows[u] is a bitset of the neighbors of u (bit u itself always clear).
    vids maps vertex id to an element index in the source group; group is the
    Group itself when available (dropped by complement and DIMACS reads).
    """

    __slots__ = (
        "n", "rows", "spec", "vids", "group",
        "includes_center", "reduced", "collapsed", "report",
    )

    def __init__(self, n, rows, spec="", vids=None, group=None,
                 includes_center=False, reduced=False, collapsed=False,
                 report=None):
        self.n = n
        self.rows = list(rows)
        self.spec = spec
        self.vids = list(vids) if vids is not None else None
        self.group = group
        self.includes_center = includes_center
        self.reduced = reduced
        self.collapsed = collapsed
        self.report = dict(report) if report else {}
        if len(self.rows) != n:
            raise PcgError("row count does not match vertex count")

    # -- structure ---------------------------------------------------------

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def neighbors(self, u: int) -> list[int]:
        return _bits(self.rows[u])

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self):
        for u in range(self.n):
            high = self.rows[u] >> (u + 1)
            for off in _bits(high):
                yield u, u + 1 + off

    def render_vertex(self, u: int) -> str:
        if self.group is None or self.vids is None:
            raise PcgError("graph has no group provenance to render from")
        return self.group.kind.render(self.group.elems[self.vids[u]])

    def __eq__(self, other):
        return (
            isinstance(other, CommGraph)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n, tuple(self.rows)))

    def __repr__(self):
        tags = [t for t, on in (
            ("center", self.includes_center),
            ("reduced", self.reduced),
            ("collapsed", self.collapsed),
        ) if on]
        tag = "," + "+".join(tags) if tags else ""
        return f"CommGraph({self.spec or '?'}{tag}, n={self.n}, m={self.edge_count()})"


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _mask_to_bitset(mask) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _subrows(rows, n, keep):
    """Rows of the induced subgraph on the sorted vertex list keep."""
    nbytes = (n + 7) // 8
    sel = np.asarray(keep, dtype=np.int64)
    out = []
    for u in keep:
        raw = np.frombuffer(rows[u].to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:n]
        out.append(_mask_to_bitset(bits[sel]))
    return out


def _adjacency(G: Group, vids) -> list[int]:
    kind = G.kind
    payloads = [G.elems[i] for i in vids]
    arr = None
    if kind.bulk:
        arr = G.arr()[np.asarray(vids, dtype=np.int64)]
    rows = []
    for pos, i in enumerate(vids):
        mask = np.asarray(kind.commute_mask(payloads, G.elems[i], arr=arr), dtype=bool)
        mask[pos] = False
        rows.append(_mask_to_bitset(mask))
    return rows


def build_graph(G: Group, include_center: bool = False) -> CommGraph:
    """Commuting graph on G minus its center (or on all of G)."""
    center = set(G.center())
    if include_center:
        vids = list(range(len(G)))
    else:
        vids = [i for i in range(len(G)) if i not in center]
    if len(vids) > FULL_VERTEX_GUARD:
        raise GuardError(
            f"{len(vids)} vertices exceeds the {FULL_VERTEX_GUARD} guard for "
            "full graphs; use build_reduced"
        )
    return CommGraph(
        len(vids), _adjacency(G, vids), spec=G.name, vids=vids, group=G,
        includes_center=include_center,
        report={"central_excluded": 0 if include_center else len(center)},
    )


def build_reduced(G: Group) -> CommGraph:
    """Commuting graph on the non-central elements with non-abelian
    centralizer; dropping the rest preserves the Berge verdict."""
    vids = G.reduced_vertices()
    if len(vids) > REDUCED_VERTEX_GUARD:
        raise GuardError(
            f"{len(vids)} reduced vertices exceeds the {REDUCED_VERTEX_GUARD} guard"
        )
    ncentral = len(G.center())
    return CommGraph(
        len(vids), _adjacency(G, vids), spec=G.name, vids=vids, group=G,
        reduced=True,
        report={
            "central_excluded": ncentral,
            "abelian_centralizer_excluded": len(G) - ncentral - len(vids),
        },
    )


def _twin_pass(n, rows, closed: bool):
    groups: dict[int, list[int]] = {}
    for u in range(n):
        key = rows[u] | (1 << u) if closed else rows[u]
        groups.setdefault(key, []).append(u)
    classes = sorted(groups.values())  # ascending by smallest member
    reps = [c[0] for c in classes]
    return reps, classes


def collapse_twins(g: CommGraph) -> CommGraph:
    """One representative per twin class: open-neighborhood classes first,
    then closed-neighborhood classes; representative = smallest vertex id."""
    reps1, classes1 = _twin_pass(g.n, g.rows, closed=False)
    rows1 = _subrows(g.rows, g.n, reps1)
    n1 = len(reps1)
    reps2, classes2 = _twin_pass(n1, rows1, closed=True)
    rows2 = _subrows(rows1, n1, reps2)
    classes = [
        sorted(v for c1 in cls2 for v in classes1[c1])
        for cls2 in classes2
    ]
    reps = [c[0] for c in classes]
    report = dict(g.report)
    report.update({
        "twin_classes": [len(c) for c in classes],
        "open_merges": g.n - n1,
        "closed_merges": n1 - len(reps2),
        "twin_note": TWIN_NOTE,
    })
    return CommGraph(
        len(reps), rows2, spec=g.spec,
        vids=[g.vids[r] for r in reps] if g.vids is not None else None,
        group=g.group, includes_center=g.includes_center,
        reduced=g.reduced, collapsed=True, report=report,
    )


def complement(g: CommGraph) -> CommGraph:
    """Structural complement; group provenance does not carry over."""
    full = (1 << g.n) - 1
    rows = [full ^ g.rows[u] ^ (1 << u) for u in range(g.n)]
    return CommGraph(g.n, rows)


def induced(g: CommGraph, vertices) -> CommGraph:
    """Induced subgraph on the given vertices (kept in sorted order)."""
    keep = sorted(set(int(v) for v in vertices))
    if keep and not (0 <= keep[0] and keep[-1] < g.n):
        raise PcgError("induced: vertex set is not a subset of the graph")
    return CommGraph(
        len(keep), _subrows(g.rows, g.n, keep), spec=g.spec,
        vids=[g.vids[u] for u in keep] if g.vids is not None else None,
        group=g.group, includes_center=g.includes_center,
        reduced=g.reduced, collapsed=g.collapsed, report=g.report,
    )


# ---------------------------------------------------------------------------
# DIMACS


def to_dimacs(g: CommGraph) -> str:
    lines = [f"p edge {g.n} {g.edge_count()}"]
    for u, v in g.edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def write_dimacs(g: CommGraph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_dimacs(g))


def read_dimacs(text: str) -> CommGraph:
    n = m = None
    rows = None
    seen = 0
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "edge":
                raise PcgError(f"bad DIMACS header on line {ln}: {line!r}")
            n, m = int(parts[2]), int(parts[3])
            rows = [0] * n
        elif line.startswith("e"):
            if rows is None:
                raise PcgError("DIMACS edge before header")
            _, us, vs = line.split()
            u, v = int(us) - 1, int(vs) - 1
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise PcgError(f"bad DIMACS edge on line {ln}: {line!r}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            seen += 1
        else:
            raise PcgError(f"bad DIMACS line {ln}: {line!r}")
    if rows is None:
        raise PcgError("no DIMACS header found")
    if seen != m:
        raise PcgError(f"DIMACS header promised {m} edges, found {seen}")
    return CommGraph(n, rows)


def read_dimacs_file(path) -> CommGraph:
    with open(path, "r", encoding="ascii") as fh:
        return read_dimacs(fh.read())
