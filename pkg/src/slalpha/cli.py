"""Command-line front end.

    slalpha cluster  --fixture two-nuclei --method sl-alpha --alpha 1
    slalpha dbscan   --fixture two-nuclei --eps 3 --min-pts 4
    slalpha analyze  --fixture two-nuclei --check weakly --method sl-alpha --alpha 1 \\
                     --b1 @B1 --b2 @B2 --n1 @N1 --n2 @N2
    slalpha fixture  two-nuclei

Subsets are comma-separated labels; ``@NAME`` expands a group of the chosen
fixture.  Block lists (``--blocks``, ``--left``, ``--right``) separate blocks
with ``;``.  Exit codes: 0 success, 2 bad input, 3 internal assertion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import chains, fixtures
from .alpha import InternalError, sl_alpha, sl_star_alpha
from .dbscan import DbscanParams, dbscan
from .dendrogram import Dendrogram, DendrogramError, render_text, serialize, to_newick
from .linkage import agglomerate
from .metric import FiniteMetricSpace, MetricError, from_distance_matrix, from_weighted_graph

METHODS = ("sl", "cl", "al", "sl-alpha", "sl-star")
CHECKS = ("chained", "single-edge", "smaller-blocks", "strongly", "completely", "weakly", "bridge", "moderate")


class InputError(Exception):
    pass


def build_dendrogram(space: FiniteMetricSpace, method: str, alpha: int | None = None) -> Dendrogram:
    if method in ("sl-alpha", "sl-star") and alpha is None:
        raise InputError(f"--alpha is required for method {method}")
    if method == "sl":
        return agglomerate(space, "single")
    if method == "cl":
        return agglomerate(space, "complete")
    if method == "al":
        return agglomerate(space, "average")
    if method == "sl-alpha":
        return sl_alpha(space, alpha)
    if method == "sl-star":
        return sl_star_alpha(space, alpha)
    raise InputError(f"unknown method {method!r}")


def read_space(path: str, fmt: str) -> FiniteMetricSpace:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "graph":
        doc = json.loads(text)
        return from_weighted_graph(doc["points"], [tuple(e) for e in doc["edges"]])
    if path.endswith(".csv"):
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        labels = [c.strip() for c in rows[0][1:]]
        return from_distance_matrix(labels, [[float(v) for v in r[1:]] for r in rows[1:]])
    doc = json.loads(text)
    return from_distance_matrix(doc["labels"], doc["matrix"])


def _space(args) -> tuple[FiniteMetricSpace, dict]:
    if args.fixture:
        fx = fixtures.get(args.fixture)
        return fx.space(), fx.groups
    return read_space(args.input, args.format), {}


def parse_subset(text: str | None, groups: dict, what: str) -> list[str]:
    if not text:
        raise InputError(f"missing subset {what}")
    out: list[str] = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok.startswith("@"):
            if tok[1:] not in groups:
                raise InputError(f"unknown group {tok} (known: {', '.join(sorted(groups)) or 'none'})")
            out.extend(groups[tok[1:]])
        else:
            out.append(tok)
    if not out:
        raise InputError(f"empty subset {what}")
    return out


def parse_blocks(text: str | None, groups: dict, what: str, allow_empty: bool = False) -> list[list[str]]:
    if not text:
        if allow_empty:
            return []
        raise InputError(f"missing block list {what}")
    return [parse_subset(part, groups, what) for part in text.split(";") if part.strip()]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_cluster(args) -> int:
    space, _ = _space(args)
    d = build_dendrogram(space, args.method, args.alpha)
    if args.emit == "newick":
        text = to_newick(d) + "\n"
    elif args.emit == "text":
        text = render_text(d)
    else:
        text = _json(serialize(d))
    _emit(text, args.output)
    return 0


def cmd_dbscan(args) -> int:
    space, _ = _space(args)
    labeling = dbscan(space, DbscanParams(args.eps, args.min_pts))
    _emit(_json(labeling.to_json()), args.output)
    return 0


def cmd_analyze(args) -> int:
    space, groups = _space(args)
    check = args.check
    sub = lambda name: parse_subset(getattr(args, name), groups, "--" + name.replace("_", "-"))  # noqa: E731

    def dendrogram():
        if not args.method:
            raise InputError(f"--method is required for check {check}")
        return build_dendrogram(space, args.method, args.alpha)

    def need_alpha():
        if args.alpha is None:
            raise InputError(f"--alpha is required for check {check}")
        return args.alpha

    if check == "chained":
        rep = chains.detect_chained(space, sub("b1"), sub("b2"), symmetric=args.symmetric)
        doc = {"check": check, "present": rep is not None, "report": rep and rep.to_json()}
    elif check == "single-edge":
        rep = chains.detect_single_edge_chained(space, sub("b1"), sub("b2"), b=args.t_high)
        doc = {"check": check, "present": rep is not None, "report": rep and rep.to_json()}
    elif check == "smaller-blocks":
        rep = chains.detect_smaller_block_chained(space, parse_blocks(args.blocks, groups, "--blocks"), need_alpha())
        doc = {"check": check, "present": rep is not None, "report": rep and rep.to_json()}
    elif check == "strongly":
        doc = chains.verify_strongly_chaining(dendrogram(), space, sub("b1"), sub("b2"), symmetric=args.symmetric).to_json()
    elif check == "completely":
        blocks = parse_blocks(args.blocks, groups, "--blocks")
        doc = chains.verify_completely_chaining(dendrogram(), space, blocks, need_alpha()).to_json()
    elif check == "weakly":
        doc = chains.verify_weakly_unchaining(
            dendrogram(), space, sub("b1"), sub("b2"), sub("n1"), sub("n2"), need_alpha(), t_high=args.t_high
        ).to_json()
    elif check == "bridge":
        scenario = chains.BridgeScenario.of(
            sub("b1"), sub("b2"), sub("z"),
            parse_subset(args.xs, groups, "--xs") if args.xs else (),
            parse_subset(args.ys, groups, "--ys") if args.ys else (),
        )
        doc = chains.verify_bridge_unchaining(dendrogram(), space, scenario, need_alpha(), t_i=args.t_i).to_json()
    else:
        if args.t_j is None or args.t_i is None:
            raise InputError("--t-j and --t-i are required for check moderate")
        scenario = chains.ModerateScenario.of(
            parse_blocks(args.blocks, groups, "--blocks"),
            parse_blocks(args.left, groups, "--left", allow_empty=True),
            parse_blocks(args.right, groups, "--right", allow_empty=True),
            args.t_j, args.t_i,
        )
        doc = chains.verify_moderate_bridge_theorem(space, need_alpha(), scenario).to_json()
    _emit(_json(doc), args.output)
    return 0


def cmd_fixture(args) -> int:
    fx = fixtures.get(args.name)
    _emit(_json(fx.to_json()), args.output)
    return 0


def _input_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="distance matrix (JSON or CSV) or weighted graph (JSON)")
    src.add_argument("--fixture", help="name of a built-in fixture")
    p.add_argument("--format", choices=("matrix", "graph"), default="graph",
                   help="how to read --input (default: graph)")
    p.add_argument("--output", help="write to this file instead of stdout")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slalpha", description=__doc__.split("\n")[0])
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("cluster", help="build a dendrogram")
    _input_args(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--alpha", type=int)
    p.add_argument("--emit", choices=("json", "newick", "text"), default="json")
    p.set_defaults(func=cmd_cluster)

    p = sp.add_parser("dbscan", help="flat DBSCAN labeling")
    _input_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--min-pts", type=int, required=True)
    p.set_defaults(func=cmd_dbscan)

    p = sp.add_parser("analyze", help="detect chained subsets or check a scenario")
    _input_args(p)
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--alpha", type=int)
    for name in ("b1", "b2", "n1", "n2", "z", "xs", "ys"):
        p.add_argument(f"--{name}", help="comma-separated labels or @GROUP")
    p.add_argument("--blocks", help="';'-separated blocks B_0..B_k")
    p.add_argument("--left", help="';'-separated blocks hanging off B_0 (moderate)")
    p.add_argument("--right", help="';'-separated blocks hanging off B_k (moderate)")
    p.add_argument("--symmetric", action="store_true", help="use both connectivity thresholds for 'chained'")
    p.add_argument("--t-high", type=float, help="upper threshold b for single-edge chaining")
    p.add_argument("--t-j", type=float)
    p.add_argument("--t-i", type=float)
    p.set_defaults(func=cmd_analyze)

    p = sp.add_parser("fixture", help="print a built-in fixture as an edge list")
    p.add_argument("name")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fixture)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (InputError, MetricError, DendrogramError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
