"""Command-line interface.

Usage:
    transversal generate N [--seed S]
    transversal close TREEFILE
    transversal open MAPFILE
    transversal draw MAPFILE [--compact] [--svg PATH] [--unit PX]
    transversal count N [--rooted | --unrooted | --4connected]
    transversal series [--order N] [--which A|T|C|U|RB|FG]
    transversal stats --sizes N [N ...] [--samples K] [--workers W]
    transversal verify MAPFILE [--coords FILE]

Exit codes: 0 on success, 1 on invalid input or a failed check, 2 on usage errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from . import counting
from .bijection import closure, generate, minimal_partition, opening
from .drawing import (
    SvgStyle,
    compact,
    emit_svg,
    fast_coordinates,
    transversal_draw,
    verify_drawing,
)
from .errors import MapError, Report, TransversalError
from .experiments import ExperimentConfig, run_stats
from .formats import (
    MapFile,
    read_coordinates,
    read_map,
    read_tree,
    write_coordinates,
    write_map,
    write_tree,
)
from .ternary_tree import count_ternary
from .transversal import (
    TransversalStructure,
    find_alpha0,
    minimalize,
    propagate_directions,
    require_partition,
    sweep_preimage,
    verify_partition,
    verify_structure,
)

logger = logging.getLogger(__name__)

SERIES = {
    "A": counting.series_A,
    "T": counting.series_T,
    "C": counting.series_C,
    "U": counting.series_U,
}

# Bivariate series, printed as (n, k, coefficient) rows
BIVARIATE = {
    "RB": counting.bivariate_red_edges,
    "FG": counting.bivariate_internal_red,
}


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)
        logger.info("wrote %s", output)


def _load_map(path: Path) -> MapFile:
    parsed = read_map(path.read_text())
    if parsed.triangulation is None:
        raise MapError("BAD_LABEL_ORDER", f"{path} has no outer line")
    return parsed


def _structure_for(parsed: MapFile, minimal: bool = True) -> TransversalStructure:
    """The structure to draw: from the file when present, minimalized unless told otherwise."""
    tri = parsed.triangulation
    assert tri is not None
    if parsed.partition is None:
        if minimal:
            return propagate_directions(tri, minimal_partition(tri))
        return sweep_preimage(tri, find_alpha0(tri))
    require_partition(tri, parsed.partition)
    if minimal:
        return propagate_directions(tri, minimalize(tri, parsed.partition))
    if parsed.structure is not None:
        return parsed.structure
    return propagate_directions(tri, parsed.partition)


def cmd_generate(args: argparse.Namespace) -> int:
    tri, ep = generate(args.n, args.seed)
    logger.info("generated triangulation with %d inner vertices", tri.n)
    _emit(write_map(tri, propagate_directions(tri, ep)), args.output)
    return 0


def cmd_close(args: argparse.Namespace) -> int:
    tree = read_tree(args.treefile.read_text())
    tri, ep = closure(tree)
    logger.info("closed tree %s", tree)
    _emit(write_map(tri, propagate_directions(tri, ep)), args.output)
    return 0


def cmd_open(args: argparse.Namespace) -> int:
    parsed = _load_map(args.mapfile)
    tri = parsed.triangulation
    assert tri is not None
    ep = None
    if parsed.partition is not None:
        require_partition(tri, parsed.partition)
        ep = minimalize(tri, parsed.partition)
    _emit(write_tree(opening(tri, ep)), args.output)
    return 0


def cmd_draw(args: argparse.Namespace) -> int:
    parsed = _load_map(args.mapfile)
    tri = parsed.triangulation
    assert tri is not None
    ts = _structure_for(parsed, minimal=not args.no_minimalize)
    if args.naive:
        drawing = transversal_draw(tri, ts)
    else:
        drawing, _, _ = fast_coordinates(tri, ts)
    if args.compact:
        drawing = compact(drawing)
    logger.info("grid %d x %d", drawing.width, drawing.height)
    _emit(write_coordinates(drawing), args.output)
    if args.svg is not None:
        style = SvgStyle(unit=args.unit, grid=args.grid, labels=args.labels)
        args.svg.write_text(emit_svg(tri, drawing, style, ts))
        logger.info("wrote %s", args.svg)
    return 0


COUNTS = {
    "ternary": ("ternary_trees", count_ternary),
    "rooted": ("rooted_irreducible", counting.rooted_irreducible_count),
    "unrooted": ("unrooted_irreducible", counting.unrooted_irreducible_count),
    "4connected": ("four_connected", counting.four_connected_count),
}


def cmd_count(args: argparse.Namespace) -> int:
    n = args.n
    if n < 1:
        raise TransversalError("BAD_SIZE", f"n must be at least 1, got {n}")
    keys = [args.which] if args.which is not None else list(COUNTS)
    rows = [COUNTS[key] for key in keys]
    _emit("".join(f"{name}\t{func(n)}\n" for name, func in rows), args.output)
    return 0


def cmd_series(args: argparse.Namespace) -> int:
    if args.which in BIVARIATE:
        series = BIVARIATE[args.which](args.order)
        lines = ["#n\tk\tcoefficient"]
        for n in range(series.order + 1):
            lines.extend(f"{n}\t{k}\t{c}" for k, c in sorted(series.distribution(n).items()))
    else:
        coefficients = SERIES[args.which](args.order)
        lines = ["#k\tcoefficient"] + [f"{k}\t{c}" for k, c in enumerate(coefficients)]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        sizes=args.sizes,
        samples_per_size=args.samples,
        seed=args.seed,
        compact=not args.no_compact,
        workers=args.workers,
    )
    report = run_stats(config)
    _emit(report.to_tsv(), args.output)
    if args.samples_output is not None:
        args.samples_output.write_text(report.samples_tsv())
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    parsed = _load_map(args.mapfile)
    tri = parsed.triangulation
    assert tri is not None
    reports = [Report("map")]
    if parsed.partition is not None:
        reports.append(verify_partition(tri, parsed.partition))
    if parsed.structure is not None:
        reports.append(verify_structure(tri, parsed.structure))
    if args.coords is not None:
        drawing = read_coordinates(args.coords.read_text())
        reports.append(verify_drawing(tri, drawing, parsed.structure))
    sys.stdout.write("".join(f"{r}\n" for r in reports))
    return 0 if all(r.ok for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transversal", description="Transversal structures on irreducible triangulations"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("-o", "--output", type=Path, default=None, help="write here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = command("generate", cmd_generate, "uniform random triangulation with its minimal structure")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)

    p = command("close", cmd_close, "close a bicolored ternary tree")
    p.add_argument("treefile", type=Path)

    p = command("open", cmd_open, "open a triangulation into its tree")
    p.add_argument("mapfile", type=Path)

    p = command("draw", cmd_draw, "grid drawing of a triangulation")
    p.add_argument("mapfile", type=Path)
    p.add_argument("--compact", action="store_true", help="remove unused grid lines")
    p.add_argument("--no-minimalize", action="store_true", help="draw the given structure as is")
    p.add_argument("--naive", action="store_true", help="use the per-vertex path walk")
    p.add_argument("--svg", type=Path, default=None, help="also write an SVG picture")
    p.add_argument("--unit", type=int, default=SvgStyle().unit, help="pixels per grid step")
    p.add_argument("--grid", action="store_true", help="draw grid lines in the SVG")
    p.add_argument("--labels", action="store_true", help="label vertices in the SVG")

    p = command("count", cmd_count, "exact counts for n inner vertices")
    p.add_argument("n", type=int)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--rooted", dest="which", action="store_const", const="rooted")
    which.add_argument("--unrooted", dest="which", action="store_const", const="unrooted")
    which.add_argument("--4connected", dest="which", action="store_const", const="4connected")

    p = command("series", cmd_series, "generating-function coefficients")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--which", choices=sorted(SERIES) + sorted(BIVARIATE), default="C")

    p = command("stats", cmd_stats, "grid-size statistics over random triangulations")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-compact", action="store_true")
    p.add_argument("--samples-output", type=Path, default=None, help="per-sample rows")

    p = command("verify", cmd_verify, "check a map, its structure and a drawing")
    p.add_argument("mapfile", type=Path)
    p.add_argument("--coords", type=Path, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (TransversalError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
