"""Command-line interface.

Verbs
-----
construct        build a graph from an identifier and print it
hom              enumerate Hom(source, target) and print a summary
homology         reduced homology of the Hom poset of two graphs
chromatic        exact chromatic number of a graph
verify           run registered experiments and persist their reports
report           render persisted reports as text, JSON, or CSV
list-experiments show the experiment registry

Graph identifiers
-----------------
``K5`` complete, ``C6`` cycle, ``R8`` reflexive cycle, ``L3`` looped path,
``one`` single looped vertex, ``S(k,m)`` spherical, ``T(k,m)`` twisted
toroidal, ``M^k_m(<id>)`` iterated generalized Mycielski over any inner
identifier, ``csorba(FILE)`` and ``univ(FILE,n)`` for the universality
constructions (FILE is JSON), and ``@FILE`` for a plain graph JSON file.

All algorithms are deterministic; ``--seedless`` is accepted for interface
compatibility and changes nothing because no randomness exists to seed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .families import (csorba_graph, iterated_mycielski, spherical_graph,
                       twisted_toroidal, universality_graph)
from .graphs import (Graph, bits, chromatic_number, complete_graph,
                     cycle_graph, graph_from_json, graph_to_json,
                     graph_stats, looped_path, one_graph, reflexive_cycle)
from .harness import (Cache, CacheCorrupt, cached_hom_poset,
                      cached_poset_homology, guards_from_dict,
                      list_experiments, load_reports, render_report,
                      run_experiments)
from .limits import DEFAULT_GUARDS, GuardExceeded, Guards
from .posets import SimplicialComplex, make_complex

__all__ = ["main", "parse_graph_id"]

_FIELD_NAMES = {"z": "Z", "gf2": "GF2"}

_SIMPLE = re.compile(r"^([KCRL])(\d+)$")
_SPHERICAL = re.compile(r"^S\((\d+),(\d+)\)$")
_TOROIDAL = re.compile(r"^T\((\d+),(\d+)\)$")
_MYCIELSKI = re.compile(r"^M\^(\d+)_(\d+)\((.+)\)$")
_CSORBA = re.compile(r"^csorba\((.+)\)$")
_UNIV = re.compile(r"^univ\((.+),(\d+)\)$")


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return data


def _complex_from_data(data: dict) -> SimplicialComplex:
    """Complex from {"n", "facets"}, normalizing face order and closure."""
    return make_complex(int(data["n"]), [list(f) for f in data["facets"]])


def parse_graph_id(ident: str, guards: Guards = DEFAULT_GUARDS) -> Graph:
    """Build the graph a command-line identifier names."""
    ident = ident.strip()
    if ident == "one":
        return one_graph()
    if ident.startswith("@"):
        return graph_from_json(_load_json(ident[1:]))
    m = _SIMPLE.match(ident)
    if m:
        kind = {"K": complete_graph, "C": cycle_graph,
                "R": reflexive_cycle, "L": looped_path}[m.group(1)]
        return kind(int(m.group(2)))
    m = _SPHERICAL.match(ident)
    if m:
        return spherical_graph(int(m.group(1)), int(m.group(2)),
                               guards).graph
    m = _TOROIDAL.match(ident)
    if m:
        return twisted_toroidal(int(m.group(1)), int(m.group(2)),
                                guards).graph
    m = _MYCIELSKI.match(ident)
    if m:
        inner = parse_graph_id(m.group(3), guards)
        return iterated_mycielski(inner, int(m.group(2)), int(m.group(1)))
    m = _CSORBA.match(ident)
    if m:
        data = _load_json(m.group(1))
        if "complex" not in data or "involution" not in data:
            raise ValueError(
                f"{m.group(1)}: need keys 'complex' and 'involution'")
        return csorba_graph(_complex_from_data(data["complex"]),
                            tuple(int(v) for v in data["involution"]),
                            guards)
    m = _UNIV.match(ident)
    if m:
        data = _load_json(m.group(1))
        if "complex" not in data:
            raise ValueError(f"{m.group(1)}: need key 'complex'")
        maps = data.get("maps", "regular")
        if maps != "regular":
            maps = tuple(tuple(int(v) for v in perm) for perm in maps)
        return universality_graph(_complex_from_data(data["complex"]),
                                  int(m.group(2)), maps, guards)
    raise ValueError(
        f"cannot parse graph identifier '{ident}'; see 'homlab --help'")


# ---------------------------------------------------------------------------
# argument plumbing

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--guard-elements", type=int, metavar="N",
                        help="cap on Hom poset elements per enumeration")
    parser.add_argument("--config", metavar="PATH",
                        help="JSON file of guard settings")
    parser.add_argument("--field", choices=("gf2", "z"), default="z",
                        help="homology coefficients (default: z)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable JSON output")
    parser.add_argument("--cache-dir", metavar="PATH",
                        help="cache directory (overrides HOMLAB_CACHE_DIR)")
    parser.add_argument("--seedless", action="store_true",
                        help="no-op: everything is deterministic already")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homlab",
        description="Exact Hom-poset constructions, homology, and "
                    "experiment verification for small graphs.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("construct", help="build a graph and print it")
    p.add_argument("graph", help="graph identifier")
    _add_common(p)

    p = sub.add_parser("hom", help="enumerate Hom(source, target)")
    p.add_argument("source")
    p.add_argument("target")
    _add_common(p)

    p = sub.add_parser("homology",
                       help="reduced homology of Hom(source, target)")
    p.add_argument("source")
    p.add_argument("target")
    _add_common(p)

    p = sub.add_parser("chromatic", help="exact chromatic number")
    p.add_argument("graph")
    _add_common(p)

    p = sub.add_parser("verify", help="run registered experiments")
    p.add_argument("ids", nargs="*", metavar="ID",
                   help="experiment ids (default: all)")
    p.add_argument("--jobs", type=int, help="parallel worker count")
    p.add_argument("--report-dir", metavar="PATH",
                   help="where to persist reports")
    _add_common(p)

    p = sub.add_parser("report", help="render persisted reports")
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default="text")
    p.add_argument("--report-dir", metavar="PATH",
                   help="where reports were persisted")
    _add_common(p)

    p = sub.add_parser("list-experiments", help="show the registry")
    _add_common(p)

    return parser


def _override_dict(args: argparse.Namespace) -> Optional[dict]:
    """Only the guard fields the user explicitly set, or None.

    Passing a sparse dict (rather than a full Guards value) keeps each
    experiment's own elevated defaults for the fields left untouched.
    """
    overrides: dict = {}
    if args.config:
        data = _load_json(args.config)
        if "guards" in data and isinstance(data["guards"], dict):
            data = data["guards"]
        guards_from_dict(data)  # validates field names and values
        overrides.update(data)
    if args.guard_elements is not None:
        overrides["hom_elements"] = args.guard_elements
    return overrides or None


def _guards_from_args(args: argparse.Namespace,
                      base: Guards = DEFAULT_GUARDS) -> Guards:
    overrides = _override_dict(args)
    return guards_from_dict(overrides, base) if overrides else base


def _report_dir(args: argparse.Namespace, cache: Cache) -> Path:
    if getattr(args, "report_dir", None):
        return Path(args.report_dir)
    if cache.enabled:
        return cache.directory / "reports"
    return Path("homlab-reports")


def _emit(args: argparse.Namespace, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# verbs

def _cmd_construct(args) -> int:
    guards = _guards_from_args(args)
    g = parse_graph_id(args.graph, guards)
    stats = graph_stats(g)
    edges = len(graph_to_json(g)["edges"])
    loops = sum(g.adj[v] >> v & 1 for v in range(g.n))
    _emit(args, graph_to_json(g),
          f"{args.graph}: vertices={g.n} edges={edges} loops={loops} "
          f"max_degree={stats.max_degree} connected={stats.connected}")
    return 0


def _cmd_hom(args) -> int:
    guards = _guards_from_args(args)
    cache = Cache(args.cache_dir)
    src = parse_graph_id(args.source, guards)
    dst = parse_graph_id(args.target, guards)
    hp = cached_hom_poset(src, dst, guards, cache)
    elements = [[sorted(bits(mask)) for mask in e] for e in hp.elements]
    data = {"source": graph_to_json(src), "target": graph_to_json(dst),
            "count": hp.m, "atoms": len(hp.atoms), "elements": elements}
    _emit(args, data,
          f"Hom({args.source},{args.target}): {hp.m} elements, "
          f"{len(hp.atoms)} atoms")
    return 0


def _cmd_homology(args) -> int:
    guards = _guards_from_args(args)
    cache = Cache(args.cache_dir)
    src = parse_graph_id(args.source, guards)
    dst = parse_graph_id(args.target, guards)
    hp = cached_hom_poset(src, dst, guards, cache)
    res = cached_poset_homology(hp.poset, _FIELD_NAMES[args.field], guards,
                                cache)
    _emit(args, res.to_json(),
          f"Hom({args.source},{args.target}) over "
          f"{_FIELD_NAMES[args.field]}: {res}")
    return 0


def _cmd_chromatic(args) -> int:
    guards = _guards_from_args(args)
    g = parse_graph_id(args.graph, guards)
    chi = chromatic_number(g)
    finite = chi != float("inf")
    data = {"id": args.graph, "chromatic": int(chi) if finite else None}
    _emit(args, data,
          f"chi({args.graph}) = {int(chi) if finite else 'unbounded'}")
    return 0


def _cmd_verify(args) -> int:
    overrides = _override_dict(args)
    cache = Cache(args.cache_dir)
    report_dir = _report_dir(args, cache)
    ids = args.ids or None
    reports = run_experiments(ids, overrides, cache=cache,
                              report_dir=report_dir, jobs=args.jobs)
    if args.json:
        print(render_report(reports, "json"), end="")
    else:
        print(render_report(reports, "text"), end="")
        failed = sum(r.outcome == "fail" for r in reports)
        skipped = sum(r.outcome == "skipped (guard)" for r in reports)
        print(f"\n{len(reports)} experiments: "
              f"{sum(r.passed for r in reports)} passed, {failed} failed, "
              f"{skipped} skipped; reports in {report_dir}")
    return 1 if any(r.outcome == "fail" for r in reports) else 0


def _cmd_report(args) -> int:
    cache = Cache(args.cache_dir)
    reports = load_reports(_report_dir(args, cache))
    if not reports:
        print("no persisted reports found", file=sys.stderr)
        return 1
    fmt = "json" if args.json and args.format == "text" else args.format
    print(render_report(reports, fmt), end="")
    return 0


def _cmd_list_experiments(args) -> int:
    exps = list_experiments()
    if args.json:
        print(json.dumps([{"id": e.id, "criterion": e.criterion,
                           "description": e.description,
                           "expected": e.expected,
                           "provenance": e.provenance} for e in exps],
                         indent=2))
        return 0
    width = max(len(e.id) for e in exps)
    for e in exps:
        tag = f"#{e.criterion}" if e.criterion else "extra"
        print(f"{e.id.ljust(width)}  {tag:>5}  {e.description}")
    return 0


_VERBS = {
    "construct": _cmd_construct,
    "hom": _cmd_hom,
    "homology": _cmd_homology,
    "chromatic": _cmd_chromatic,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "list-experiments": _cmd_list_experiments,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _VERBS[args.verb](args)
    except (GuardExceeded, CacheCorrupt) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
