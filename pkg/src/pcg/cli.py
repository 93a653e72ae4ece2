"""Command-line front end: analyze, witness, export, suite, bruteforce.

Certificates are five-line UTF-8 files that name a group, a pattern kind,
and the ordered element encodings of the pattern's vertices; they parse
back and re-verify against a freshly built graph.  Graph caching stores
DIMACS plus a vertex encoding table, one file per (spec, include-center,
reduced, collapsed) combination, written atomically; the PCG_CACHE_DIR
environment variable supplies a default cache directory.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import re
import sys
import tempfile
from dataclasses import dataclass

from . import cg, classify, perf, wit
from .errors import CertificateError, PcgError
from .named import build, parse_spec, render_spec

CERT_VERSION = 1
CACHE_VERSION = 1
CERT_KINDS = ("odd-hole", "odd-antihole", "four-chain")


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """A named pattern with its element encodings, ready for a file."""

    spec: str
    kind: str
    length: int
    encodings: tuple[str, ...]
    version: int = CERT_VERSION

    def __post_init__(self):
        if self.kind not in CERT_KINDS:
            raise CertificateError(f"bad certificate kind {self.kind!r}")
        if self.length != len(self.encodings):
            raise CertificateError("certificate length disagrees with vertex count")
        if self.kind == "four-chain":
            if self.length != 4:
                raise CertificateError("four-chain certificates have four vertices")
        elif self.length % 2 == 0 or self.length < (5 if self.kind == "odd-hole" else 7):
            raise CertificateError(f"bad {self.kind} length {self.length}")


def render_certificate(c: Certificate) -> str:
    return (
        f"pcg-certificate {c.version}\n"
        f"group {c.spec}\n"
        f"kind {c.kind}\n"
        f"length {c.length}\n"
        f"vertices {';'.join(c.encodings)}\n"
    )


def parse_certificate(text: str) -> Certificate:
    lines = text.splitlines()
    if len(lines) < 5:
        raise CertificateError("certificate too short")
    m = re.fullmatch(r"pcg-certificate (\d+)", lines[0])
    if not m:
        raise CertificateError("missing pcg-certificate header")
    version = int(m.group(1))
    if version != CERT_VERSION:
        raise CertificateError(f"unsupported certificate version {version}")
    fields = {}
    for name, line in zip(("group", "kind", "length", "vertices"), lines[1:5]):
        key, sep, val = line.partition(" ")
        if key != name or not sep:
            raise CertificateError(f"bad certificate line {line!r}, wanted {name}")
        fields[name] = val
    try:
        length = int(fields["length"])
    except ValueError:
        raise CertificateError(f"bad certificate length {fields['length']!r}") from None
    return Certificate(
        spec=fields["group"],
        kind=fields["kind"],
        length=length,
        encodings=tuple(fields["vertices"].split(";")) if fields["vertices"] else (),
        version=version,
    )


def certificate_tuple(c: Certificate) -> wit.ElementTuple:
    """Decode the certificate's elements against its freshly built group."""
    G = build(c.spec)
    pattern = {
        "odd-hole": f"hole-{c.length}",
        "odd-antihole": f"antihole-{c.length}",
        "four-chain": "chain-4",
    }[c.kind]
    elems = tuple(
        wit.Element(G.kind, G.kind.parse_render(enc)) for enc in c.encodings
    )
    return wit.ElementTuple(c.spec, pattern, elems)


def verify_certificate(c: Certificate) -> bool:
    """Re-verify against a freshly built reduced graph of the owning group.

    Pattern vertices always have non-abelian centralizers, so the reduced
    graph contains them all.
    """
    et = certificate_tuple(c)
    graph = cg.build_reduced(build(c.spec))
    return wit.verify_in_graph(et, graph)


def _witness_certificate(report: classify.Report) -> Certificate:
    w = report.witness
    return Certificate(
        spec=report.spec,
        kind=w.kind,
        length=w.length,
        encodings=report.witness_encodings,
    )


def tuple_certificate(et: wit.ElementTuple) -> Certificate:
    head = et.pattern.split("-")[0]
    kind = {"hole": "odd-hole", "antihole": "odd-antihole", "chain": "four-chain"}[head]
    return Certificate(
        spec=et.spec,
        kind=kind,
        length=len(et),
        encodings=tuple(et.renders()),
    )


# ---------------------------------------------------------------------------
# graph cache


def _cache_path(cache_dir: str, spec: str, include_center: bool,
                reduced: bool, collapsed: bool) -> str:
    key = (
        f"{spec}|ic={int(include_center)}|red={int(reduced)}"
        f"|col={int(collapsed)}|v{CACHE_VERSION}"
    )
    digest = hashlib.sha256(key.encode()).hexdigest()[:12]
    safe = re.sub(r"[^A-Za-z0-9.-]+", "_", spec).strip("_") or "graph"
    return os.path.join(cache_dir, f"{safe}.{digest}.dimacs")


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".pcg-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_cache(path: str, graph: cg.CommGraph, spec: str) -> tuple[str, ...]:
    """DIMACS body prefixed with a vertex encoding table; returns the table."""
    encodings = tuple(graph.render_vertex(u) for u in range(graph.n))
    head = [f"c pcg-cache {CACHE_VERSION}", f"c spec {spec}"]
    head.extend(f"c v {u} {enc}" for u, enc in enumerate(encodings))
    _atomic_write(path, "\n".join(head) + "\n" + cg.to_dimacs(graph))
    return encodings


def read_cache(path: str):
    """(graph, encodings) from a cache file, or None when absent/corrupt."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        return None
    try:
        graph = cg.read_dimacs(text)
        encs: dict[int, str] = {}
        for line in text.splitlines():
            m = re.fullmatch(r"c v (\d+) (\S+)", line)
            if m:
                encs[int(m.group(1))] = m.group(2)
        if sorted(encs) != list(range(graph.n)):
            return None
        return graph, tuple(encs[u] for u in range(graph.n))
    except PcgError:
        return None


def _load_or_build_cached(cache_dir: str, spec: str):
    """The analyze pipeline's graphs, through the cache when possible."""
    red_path = _cache_path(cache_dir, spec, False, True, False)
    col_path = _cache_path(cache_dir, spec, False, True, True)
    got_red = read_cache(red_path)
    got_col = read_cache(col_path)
    if got_red is not None and got_col is not None:
        return classify.CachedGraph(
            graph=got_col[0], reduced_n=got_red[0].n, encodings=got_col[1]
        )
    G = build(spec)
    g1 = cg.build_reduced(G)
    g2 = cg.collapse_twins(g1)
    write_cache(red_path, g1, spec)
    encodings = write_cache(col_path, g2, spec)
    return classify.CachedGraph(graph=g2, reduced_n=g1.n, encodings=encodings)


# ---------------------------------------------------------------------------
# subcommands


def _yesno(b: bool) -> str:
    return "yes" if b else "no"


def cmd_analyze(args) -> int:
    spec = render_spec(parse_spec(args.spec))
    cache_dir = args.cache_dir or os.environ.get("PCG_CACHE_DIR")
    cached = None
    if cache_dir and not args.include_center:
        cached = _load_or_build_cached(cache_dir, spec)
    report = classify.analyze(
        spec,
        include_center=args.include_center,
        budget=args.budget,
        max_len=args.max_len,
        cached=cached,
    )
    print(f"spec {report.spec}")
    print(f"order {report.order}")
    print(f"center {report.center}")
    print(f"quasisimple {_yesno(report.quasisimple)}")
    print(f"ac-group {_yesno(report.ac_group)}")
    print(f"reduced {report.reduced_n}")
    print(f"collapsed {report.collapsed_n}")
    print(f"verdict {report.verdict}")
    if report.witness is not None:
        print(f"witness {report.witness.kind} {report.witness.length}")
    if report.certificate is not None:
        print(f"certificate {report.certificate}")
    if report.expected != classify.UNTABLED:
        print(f"expected {report.expected}")
        print(f"match {_yesno(bool(report.match))}")
    print(f"seconds {report.seconds:.1f}")
    if report.witness is not None and args.certificate:
        cert = _witness_certificate(report)
        _atomic_write(args.certificate, render_certificate(cert))
        print(f"certificate-file {args.certificate}")
    return 2 if report.outcome == "Unknown" else 0


_WITNESS_USAGE = (
    "witness names: sym5 | alt N | sl3 Q A B | su3 Q | sp4 Q | psl2 Q | "
    "ree3 | product [K L M] | chain-product [K L] | l34"
)


def _make_witness(name: str, params: list[str]) -> wit.ElementTuple | None:
    if name == "sym5":
        return wit.witness_sym5()
    if name == "alt":
        return wit.witness_alt_3cycles(int(params[0]))
    if name == "sl3":
        q, a, b = (int(p) for p in params[:3])
        return wit.witness_sl3(q, a, b)
    if name == "su3":
        return wit.witness_su3(int(params[0]))
    if name == "sp4":
        return wit.witness_sp4(int(params[0]))
    if name == "psl2":
        return wit.witness_psl2(int(params[0]))
    if name == "ree3":
        return wit.witness_ree3()
    if name == "product":
        specs = params or ["sym:3", "sym:3", "sym:3"]
        K, L, M = (build(s) for s in specs[:3])
        return wit.witness_product(K, L, M)
    if name == "chain-product":
        kspec = params[0] if len(params) > 0 else "alt:6"
        lspec = params[1] if len(params) > 1 else "sym:3"
        K = build(kspec)
        if K.name == "alt:6":
            chain = wit.chain_alt6()
        elif K.name == "sl:3:2":
            chain = wit.chain_sl32()
        else:
            graph = cg.build_reduced(K)
            quad = wit.find_4chain(graph)
            if quad is None:
                raise PcgError(f"{K.name}: no four-chain to build on")
            chain = wit.tuple_from_vertices(graph, quad, "chain-4")
        return wit.witness_chain_product(K, chain, build(lspec))
    return None


def cmd_witness(args) -> int:
    name = args.name
    if name == "l34":
        ok = wit.check_l34_label_model()
        print(f"l34 label model {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    et = _make_witness(name, args.params)
    if et is None:
        print(f"error: unknown witness {name!r}; {_WITNESS_USAGE}", file=sys.stderr)
        return 1
    cert = tuple_certificate(et)
    sys.stdout.write(render_certificate(cert))
    if args.verify:
        try:
            graph = cg.build_reduced(build(et.spec))
        except PcgError:
            ok = et.verify()
            print(f"verified element-level {'PASS' if ok else 'FAIL'}")
        else:
            ok = wit.verify_in_graph(et, graph)
            print(f"verified in-graph {'PASS' if ok else 'FAIL'}")
        if not ok:
            return 1
    return 0


def cmd_export(args) -> int:
    spec = render_spec(parse_spec(args.spec))
    G = build(spec)
    if args.reduced:
        graph = cg.build_reduced(G)
    else:
        graph = cg.build_graph(G, include_center=args.include_center)
    if args.collapsed:
        graph = cg.collapse_twins(graph)
    text = cg.to_dimacs(graph)
    if args.output:
        _atomic_write(args.output, text)
        print(f"wrote {args.output} ({graph.n} vertices, {graph.edge_count()} edges)")
    else:
        sys.stdout.write(text)
    return 0


def cmd_suite(args) -> int:
    summary = classify.run_suite(
        filter=args.filter, budget=args.budget, jobs=args.jobs, echo=print
    )
    print(f"passed {summary.passed} failed {summary.failed}")
    return 0 if summary.ok else 1


def cmd_bruteforce(args) -> int:
    graph = cg.read_dimacs_file(args.graph)
    verdict = perf.is_perfect_bruteforce(graph)
    print("perfect" if verdict else "not perfect")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pcg",
        description="Decide perfection of commuting graphs of finite groups.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="build, reduce, and decide one group spec")
    a.add_argument("spec")
    a.add_argument("--include-center", action="store_true",
                   help="analyze the graph on all of G, not just reduced vertices")
    a.add_argument("--max-len", type=int, default=None,
                   help="cap the hole search length (capped runs may end Unknown)")
    a.add_argument("--budget", type=int, default=perf.DEFAULT_BUDGET)
    a.add_argument("--certificate", metavar="PATH",
                   help="write the witness certificate here on NotBerge")
    a.add_argument("--cache-dir", metavar="DIR",
                   help="graph cache directory (default: $PCG_CACHE_DIR)")
    a.set_defaults(func=cmd_analyze)

    w = sub.add_parser("witness", help="construct and print a named witness tuple")
    w.add_argument("name", help=_WITNESS_USAGE)
    w.add_argument("params", nargs="*")
    w.add_argument("--verify", action="store_true",
                   help="also re-verify against a freshly built graph")
    w.set_defaults(func=cmd_witness)

    e = sub.add_parser("export", help="write a graph in DIMACS form")
    e.add_argument("spec")
    e.add_argument("--format", choices=("dimacs",), default="dimacs")
    e.add_argument("-o", "--output", metavar="FILE")
    e.add_argument("--reduced", action="store_true")
    e.add_argument("--collapsed", action="store_true")
    e.add_argument("--include-center", action="store_true")
    e.set_defaults(func=cmd_export)

    s = sub.add_parser("suite", help="run the expected-results table")
    s.add_argument("--filter", default="")
    s.add_argument("--budget", type=int, default=perf.DEFAULT_BUDGET)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_suite)

    b = sub.add_parser("bruteforce",
                       help="exact perfection of a small external DIMACS graph")
    b.add_argument("graph", help="DIMACS file, at most 14 vertices")
    b.set_defaults(func=cmd_bruteforce)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PcgError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, IndexError) as e:
        print(f"error: bad arguments: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
