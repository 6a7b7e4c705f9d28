"""Command-line front end.

    selfsim build    --base kn:2 --bundle matching -k 3 --format graph6
    selfsim color    --base kn:3 --bundle matching -k 2 --method modular --out cert.txt
    selfsim color    --base kn:3 --bundle matching -k 2 --verify cert.txt
    selfsim classify --n 2 --bundle preset:j6
    selfsim spectrum --base kn:3 --bundle matching -k 3
    selfsim cut      --base kn:3 --bundle matching -k 2 --vertex-expansion
    selfsim clique   --base kn:2 --bundle j6 -k 5
    selfsim catalog
    selfsim report   --base kn:3 --bundle matching -k 2 --out report.json

Exit status: 0 success, 2 usage error, 3 input parse failure, 4 size-limit
refusal, 5 a certificate failed re-verification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .coloring import (
    DEFAULT_MAX_EXACT,
    K3_SPECIAL_PAIRS,
    chromatic_number_exact,
    classify_bundle,
    clique_hypothesis_holds,
    clique_witness,
    coloring_jr_scheme,
    coloring_k3_special,
    coloring_matching_mod,
    coloring_mirror_classes,
    greedy_coloring,
    k2_catalog,
    verify_clique,
    verify_coloring,
)
from .core import (
    SelfSimilarSystem,
    SizeLimitError,
    bundle_view,
    complete_graph,
    default_max_vertices,
    degree,
    edge_count,
    jr_bundle,
    jstar_bundle,
    make_bundle,
    materialize,
)
from .formats import (
    EXPORT_FORMATS,
    ParseError,
    export_graph,
    format_certificate,
    load_base,
    load_bundle,
    parse_certificate,
)
from .spectral import (
    DEFAULT_MAX_ENUM,
    adjacency_matrix,
    cheeger_bounds,
    complete_spectrum,
    conductance_exact,
    cut_size,
    eigenvalues_numeric,
    jstar_alternating_sequence,
    spectrum_block_recursion,
    spectrum_matching_closed,
    vertex_expansion_exact,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_LIMIT = 4
EXIT_INVARIANT = 5

COLOR_METHODS = ("exact", "greedy", "modular", "mirror", "jr-table", "k3-four")
# Short names accepted for compatibility with existing scripts.
METHOD_ALIASES = {"t31": "modular", "t32": "mirror", "t35": "jr-table", "t41": "k3-four"}
REPORT_SPECTRUM_LIMIT = 128


class InvariantError(RuntimeError):
    """A produced certificate did not survive re-verification."""


class UsageError(ValueError):
    pass


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"selfsim {__version__}")

    system = argparse.ArgumentParser(add_help=False)
    system.add_argument("--base", default=None, help="preset (kn:N, cn:N, pn:N, en:N) or file")
    system.add_argument("--bundle", default="matching", help="preset or file (default: matching)")
    system.add_argument("-k", type=_positive, default=1, help="depth of the sequence")
    system.add_argument("--max-vertices", type=_positive, default=None)
    system.add_argument("--out", default=None, help="write output to this file")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[system], help="materialize G^k and export it")
    p.add_argument("--format", choices=EXPORT_FORMATS, default="edgelist")

    p = sub.add_parser("color", parents=[system], help="color G^k and write a certificate")
    p.add_argument("--method", type=lambda m: METHOD_ALIASES.get(m, m), choices=COLOR_METHODS, default="exact")
    p.add_argument("--max-exact", type=_positive, default=DEFAULT_MAX_EXACT)
    p.add_argument("--verify", metavar="CERT", default=None, help="re-verify a certificate file")

    p = sub.add_parser("classify", parents=[system], help="bounded chromatic number test for K_n")
    p.add_argument("--n", type=_positive, default=None, help="use K_n as the base graph")

    p = sub.add_parser("spectrum", parents=[system], help="closed-form and numeric spectra")
    p.add_argument("--method", choices=("closed", "numeric", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-8, help="eigenvalue match tolerance")

    p = sub.add_parser("cut", parents=[system], help="exact conductance and Cheeger bounds")
    p.add_argument("--max-enum", type=_positive, default=DEFAULT_MAX_ENUM)
    p.add_argument("--vertex-expansion", action="store_true")

    p = sub.add_parser("clique", parents=[system], help="clique witness of size k+1")
    p.add_argument("--i", type=_positive, default=None)
    p.add_argument("--j", type=_positive, default=None)

    p = sub.add_parser("catalog", parents=[system], help="the eight bundles on K_2")
    p.add_argument("--max-exact", type=_positive, default=DEFAULT_MAX_EXACT)
    p.set_defaults(k=4)

    p = sub.add_parser("report", parents=[system], help="JSON report of every analysis")
    p.add_argument("--max-exact", type=_positive, default=DEFAULT_MAX_EXACT)
    p.add_argument("--max-enum", type=_positive, default=DEFAULT_MAX_ENUM)
    p.add_argument("--tol", type=float, default=1e-8)
    return parser


def _system(args) -> SelfSimilarSystem:
    n_flag = getattr(args, "n", None)
    if args.base is None:
        if n_flag is None:
            raise UsageError("--base is required")
        args.base = f"kn:{n_flag}"
    base = load_base(args.base)
    if n_flag is not None and n_flag != base.n:
        raise UsageError(f"--n {n_flag} disagrees with base graph on {base.n} vertices")
    return SelfSimilarSystem(base, load_bundle(args.bundle, base.n, base))


def _limit(args) -> int:
    return args.max_vertices if args.max_vertices is not None else default_max_vertices()


def _emit(args, data: bytes | str, out) -> None:
    if isinstance(data, str):
        data = data.encode()
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        out.write(data.decode())


def _jr_index(system: SelfSimilarSystem) -> int | None:
    if not system.base.is_complete():
        return None
    for r in range(system.n + 1):
        if system.bundle.rows == jr_bundle(system.n, r).rows:
            return r
    return None


def structured_coloring(system: SelfSimilarSystem, k: int, method: str, limit: int, max_exact: int):
    """Run one of the coloring methods on G^k."""
    if method == "modular":
        return coloring_matching_mod(system, k)
    if method == "mirror":
        return coloring_mirror_classes(system, k)
    if method == "jr-table":
        r = _jr_index(system)
        if r is None:
            raise UsageError("jr-table needs a complete base graph with a jr:<r> bundle")
        return coloring_jr_scheme(system.n, r, k)
    if method == "k3-four":
        if system.n != 3 or not system.base.is_complete() or (
            system.bundle.rows != make_bundle(3, K3_SPECIAL_PAIRS).rows
        ):
            raise UsageError("k3-four needs K_3 with the bundle {(1,1'),(2,3'),(3,2')}")
        if k < 2:
            raise UsageError("k3-four needs k >= 2")
        return coloring_k3_special(k, max_vertices=limit)
    graph = materialize(system, k, limit)
    if method == "greedy":
        return greedy_coloring(graph)
    return chromatic_number_exact(graph, max_exact)[1]


def cmd_build(args, out) -> int:
    graph = materialize(_system(args), args.k, _limit(args))
    _emit(args, export_graph(graph, args.format), out)
    return EXIT_OK


def cmd_color(args, out) -> int:
    system = _system(args)
    limit = _limit(args)
    graph = materialize(system, args.k, limit)
    if args.verify:
        try:
            cert = parse_certificate(Path(args.verify).read_text(encoding="utf-8"))
            ok = verify_coloring(graph, cert)
        except OSError as exc:
            raise ParseError(str(exc)) from exc
        except ValueError as exc:
            raise ParseError(f"certificate {args.verify}: {exc}") from exc
        out.write(f"certificate {args.verify}: {'proper' if ok else 'NOT proper'}, palette {cert.palette}\n")
        return EXIT_OK if ok else EXIT_INVARIANT
    coloring = structured_coloring(system, args.k, args.method, limit, args.max_exact)
    text = format_certificate(coloring)
    if not verify_coloring(graph, parse_certificate(text)):
        raise InvariantError(f"method {args.method} produced an improper coloring")
    summary = f"# method {args.method}: {coloring.used} colors (palette {coloring.palette}), proper\n"
    if args.out:
        Path(args.out).write_text(summary + text, encoding="utf-8")
        out.write(summary)
    else:
        out.write(summary + text)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    system = _system(args)
    if not system.base.is_complete():
        raise UsageError("classification applies to complete base graphs only")
    result = classify_bundle(system.n, system.bundle)
    out.write(result.describe() + "\n")
    for note in result.notes:
        out.write(f"note: {note}\n")
    return EXIT_OK


def closed_spectrum(system: SelfSimilarSystem, k: int):
    """Closed-form spectrum where one is known, with a label; else (None, None)."""
    if not system.base.is_complete() or system.n < 2:
        return None, None
    if system.bundle.is_matching():
        return spectrum_matching_closed(system.n, k), "matching"
    if system.bundle.rows == jstar_bundle(system.n).rows:
        return spectrum_block_recursion(complete_spectrum(system.n), system.n, k, "jstar-corrected"), "jstar-corrected"
    return None, None


def cmd_spectrum(args, out) -> int:
    system = _system(args)
    closed = numeric = None
    if args.method in ("closed", "both"):
        closed, label = closed_spectrum(system, args.k)
        if closed is None:
            out.write("closed: no closed form for this system\n")
        else:
            out.write(f"closed ({label}):\n" + "".join(f"{line}\n" for line in closed.lines()))
            if label == "jstar-corrected":
                seq = jstar_alternating_sequence(system.n, args.k)
                out.write(f"alternating J* sequence (comparison only): {seq}\n")
    if args.method in ("numeric", "both"):
        graph = materialize(system, args.k, _limit(args))
        numeric = eigenvalues_numeric(adjacency_matrix(graph))
        out.write("numeric:\n" + "".join(f"{line}\n" for line in numeric.lines()))
    if closed is not None and numeric is not None:
        out.write(f"match: {'yes' if closed.matches(numeric, args.tol) else 'no'}\n")
    return EXIT_OK


def cmd_cut(args, out) -> int:
    system = _system(args)
    graph = materialize(system, args.k, _limit(args))
    report = conductance_exact(graph, args.max_enum)
    if cut_size(graph, report.witness) != report.conductance * len(report.witness):
        raise InvariantError("cut witness does not reproduce the conductance")
    labels = [".".join(map(str, graph.decode(v))) for v in report.witness]
    out.write(f"conductance: {report.conductance} (= {float(report.conductance):.6g})\n")
    out.write(f"witness: {{{', '.join(labels)}}}\n")
    if report.cheeger_lower is not None:
        out.write(f"cheeger: {float(report.cheeger_lower):.6g} <= phi <= {report.cheeger_upper:.6g}\n")
    else:
        out.write("cheeger: graph is not regular, bounds not applicable\n")
    if args.vertex_expansion:
        value, witness = vertex_expansion_exact(graph, args.max_enum)
        out.write(f"vertex expansion: {value} (= {float(value):.6g})\n")
    return EXIT_OK


def cmd_clique(args, out) -> int:
    system = _system(args)
    i, j = args.i, args.j
    if i is None or j is None:
        hit = next(
            ((a, b) for a in range(1, system.n + 1) for b in range(1, system.n + 1)
             if clique_hypothesis_holds(system, a, b)),
            None,
        )
        if hit is None:
            raise UsageError("no pair (i, j) satisfies the clique hypothesis for this system")
        i, j = hit
    witness = clique_witness(system, args.k, i, j)
    if not verify_clique(system, witness):
        raise InvariantError("clique witness failed pairwise adjacency")
    out.write(f"clique of size {len(witness.vertices)} in G^{args.k} (i={i}, j={j}), verified\n")
    for v in witness.vertices:
        out.write(".".join(map(str, v)) + "\n")
    return EXIT_OK


def catalog_rows(max_k: int, max_exact: int) -> list[dict]:
    rows = []
    for entry in k2_catalog():
        system = SelfSimilarSystem(complete_graph(2), entry.bundle)
        cls = classify_bundle(2, entry.bundle)
        chis = [chromatic_number_exact(materialize(system, k), max_exact)[0] for k in range(1, max_k + 1)]
        ok = all(
            chi == entry.expected_chi(k) if entry.expected_chi(k) is not None else chi >= entry.lower_bound(k)
            for k, chi in zip(range(1, max_k + 1), chis)
        )
        rows.append({
            "name": entry.name,
            "pairs": entry.bundle.pairs,
            "outcome": entry.outcome,
            "classification": cls.verdict,
            "chi": chis,
            "agrees": ok,
        })
    return rows


def cmd_catalog(args, out) -> int:
    rows = catalog_rows(args.k, args.max_exact)
    out.write(f"{'bundle':<6} {'edges':<34} {'outcome':<9} {'class':<9} chi(G^1..G^{args.k})\n")
    for row in rows:
        pairs = ",".join(f"({i},{j}')" for i, j in row["pairs"]) or "-"
        mark = "" if row["agrees"] else "  MISMATCH"
        out.write(
            f"{row['name']:<6} {pairs:<34} {row['outcome']:<9} {row['classification']:<9} "
            f"{row['chi']}{mark}\n"
        )
    if not all(row["agrees"] for row in rows):
        raise InvariantError("catalog outcome mismatch")
    return EXIT_OK


def build_report(args) -> dict:
    system = _system(args)
    k = args.k
    timings: dict[str, float] = {}
    view = bundle_view(system.bundle)
    report: dict = {
        "tool": f"selfsim {__version__}",
        "config": {
            "base": args.base,
            "bundle": args.bundle,
            "k": k,
            "max_vertices": _limit(args),
            "max_exact": args.max_exact,
            "max_enum": args.max_enum,
        },
        "system": {
            "n": system.n,
            "base_edges": system.base.edges,
            "bundle_edges": system.bundle.pairs,
            "bundle_view": {"loops": sorted(view.loops), "edges": sorted(view.simple_edges)},
            "e_J": system.bundle.edge_count,
        },
    }

    t0 = time.perf_counter()
    graph = materialize(system, k, _limit(args))
    timings["materialize"] = time.perf_counter() - t0
    formula_degrees = [degree(system, graph.decode(v)) for v in range(graph.vertex_count)]
    report["counts"] = {
        "vertices": graph.vertex_count,
        "edges": graph.edge_count,
        "edges_formula": edge_count(system, k),
        "degrees_match_formula": formula_degrees == graph.degrees(),
        "regular_degree": graph.regular_degree(),
    }

    if system.base.is_complete():
        cls = classify_bundle(system.n, system.bundle)
        report["classification"] = {
            "verdict": cls.verdict,
            "bound": cls.bound,
            "witness": cls.witness,
            "reason": cls.reason,
            "notes": list(cls.notes),
        }

    t0 = time.perf_counter()
    if graph.vertex_count <= args.max_exact:
        chi, coloring = chromatic_number_exact(graph, args.max_exact)
        report["coloring"] = {"method": "exact", "chi": chi, "palette": coloring.palette,
                              "proper": verify_coloring(graph, coloring)}
    else:
        coloring = greedy_coloring(graph)
        report["coloring"] = {"method": "greedy", "chi_upper": coloring.palette,
                              "proper": verify_coloring(graph, coloring)}
    timings["coloring"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    closed, label = closed_spectrum(system, k)
    spec: dict = {}
    if closed is not None:
        spec["closed"] = {"rule": label, "pairs": closed.as_json()}
        l1, l2 = closed.top_two()
        spec["closed"]["gap"] = float(l1 - l2)
        if label == "jstar-corrected":
            spec["alternating_jstar_sequence"] = jstar_alternating_sequence(system.n, k)
            spec["corrected_conductance_lower_bound"] = float(l1 - l2) / 2
    if graph.vertex_count <= REPORT_SPECTRUM_LIMIT:
        numeric = eigenvalues_numeric(adjacency_matrix(graph))
        spec["numeric"] = {"pairs": numeric.as_json()}
        if closed is not None:
            spec["match"] = closed.matches(numeric, args.tol)
        d = graph.regular_degree()
        if d is not None:
            lo, hi = cheeger_bounds(numeric, d)
            spec["cheeger"] = [float(lo), hi]
    report["spectrum"] = spec
    timings["spectrum"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if graph.vertex_count <= args.max_enum and graph.vertex_count >= 2:
        cut = conductance_exact(graph, args.max_enum)
        if graph.regular_degree() is not None:
            value, witness = vertex_expansion_exact(graph, args.max_enum)
            cut = type(cut)(cut.conductance, cut.witness, cut.cut_edges, cut.cheeger_lower,
                            cut.cheeger_upper, value, witness)
        report["cut"] = cut.as_json()
        if system.bundle.is_matching():
            report["conductance_by_level"] = _conductance_levels(system, args.max_enum)
    timings["cut"] = time.perf_counter() - t0

    report["timings"] = timings
    return report


def _conductance_levels(system: SelfSimilarSystem, max_enum: int) -> dict:
    """Exploratory only: compare conductance of each enumerable level with the base graph."""
    phis = []
    k = 1
    while system.n >= 2 and system.n**k <= max_enum:
        phis.append(conductance_exact(materialize(system, k), max_enum, with_cheeger=False).conductance)
        k += 1
    return {
        "levels": [{"k": i + 1, "conductance": str(phi)} for i, phi in enumerate(phis)],
        "never_below_base": all(phi >= phis[0] for phi in phis) if phis else None,
    }


def cmd_report(args, out) -> int:
    report = build_report(args)
    _emit(args, json.dumps(report, indent=2) + "\n", out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "color": cmd_color,
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "cut": cmd_cut,
    "clique": cmd_clique,
    "catalog": cmd_catalog,
    "report": cmd_report,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"selfsim: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"selfsim: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeLimitError as exc:
        print(f"selfsim: refused: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantError as exc:
        print(f"selfsim: verification failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"selfsim: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
