"""Command-line interface: ``essurf <subcommand> ...``.

Exit codes: 0 on success or a definitive verdict, 2 when the verdict is
inconclusive (or timed out), 1 on input and usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import fixtures
from .crush import CrushError, crush
from .cutter import COPY_OF_S, cut_along
from .enumeration import enumerate_admissible_rays
from .homology import homology_certificate, homology_profile
from .isosig import decode_iso_sig
from .pipeline import Verdict, decide_closed, decide_ideal
from .qtheory import Mode, assemble, build_boundary_functionals, evaluate_nu
from .surface import NotClosed, canonical_surface, properties
from .triangulation import TriangulationError, read_gluings

log = logging.getLogger("essurf")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    jobs: int = 1
    seed: int = 0
    timeout: float = None
    output: Path = None

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _add_input(p):
    p.add_argument("file", nargs="?", help="gluing table file")
    p.add_argument("--isosig", help="isomorphism signature instead of a file")


def _add_mode(p, default="q0"):
    p.add_argument("--mode", choices=[m.value for m in Mode], default=default)


def _add_surface(p):
    p.add_argument("--surface", type=int, required=True, help="index of the admissible ray")
    _add_mode(p)


def build_parser():
    parser = _Parser(prog="essurf", description="Normal surfaces and closed essential surfaces.")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--timeout-secs", type=float, default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("homology", help="first homology and certificates")
    _add_input(p)

    p = sub.add_parser("constraints", help="matching equations and boundary functionals")
    _add_input(p)
    _add_mode(p)

    p = sub.add_parser("enumerate", help="admissible extremal rays")
    _add_input(p)
    _add_mode(p)

    p = sub.add_parser("surfaces", help="properties of the vertex surfaces")
    _add_input(p)
    _add_mode(p)

    p = sub.add_parser("crush", help="crush along a vertex surface")
    _add_input(p)
    _add_surface(p)
    p.add_argument("--out", help="write the resulting gluing table here")

    p = sub.add_parser("cut", help="cut open along a vertex surface")
    _add_input(p)
    _add_surface(p)
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("haken", help="search for a closed essential surface")
    _add_input(p)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--ideal", action="store_true")
    kind.add_argument("--closed", action="store_true")
    p.add_argument("--json", help="write the full report here")
    p.add_argument("--no-homology", action="store_true", help="skip the homology shortcut")
    p.add_argument("--variants", type=int, default=1, help="retriangulations per side")

    p = sub.add_parser("haken-batch", help="run haken over a directory of gluing tables")
    p.add_argument("dir")
    p.add_argument("--csv", required=True)
    p.add_argument("--variants", type=int, default=1)

    p = sub.add_parser("fixtures", help="bundled example triangulations")
    fsub = p.add_subparsers(dest="action", parser_class=_Parser)
    fsub.add_parser("list")
    inst = fsub.add_parser("install")
    inst.add_argument("dest", nargs="?", default="fixtures")
    return parser


def load_input(args):
    if args.file and args.isosig:
        raise UsageError("give either a file or --isosig, not both")
    if args.isosig:
        return decode_iso_sig(args.isosig)
    if not args.file:
        raise UsageError("no input triangulation given")
    return read_gluings(args.file)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _oriented(tri):
    return tri if tri.is_oriented else tri.oriented()


def _ray_surface(tri, mode, index):
    rays = enumerate_admissible_rays(assemble(tri, mode))
    if not 0 <= index < len(rays):
        raise UsageError(f"surface index {index} out of range (0..{len(rays) - 1})")
    S, _ = canonical_surface(tri, rays[index].vector)
    return S


def cmd_homology(args, cfg):
    tri = load_input(args)
    prof = homology_profile(tri)
    out = prof.to_dict()
    out["certificate"] = homology_certificate(tri, prof).value
    _emit(out)
    return EXIT_OK


def cmd_constraints(args, cfg):
    tri = _oriented(load_input(args))
    _emit(assemble(tri, args.mode).to_dict())
    return EXIT_OK


def cmd_enumerate(args, cfg):
    tri = _oriented(load_input(args))
    t0 = time.perf_counter()
    rays = enumerate_admissible_rays(assemble(tri, args.mode))
    log.info("enumerated %d rays in %.3fs", len(rays), time.perf_counter() - t0)
    _emit({"mode": args.mode, "count": len(rays), "rays": [list(r.vector) for r in rays]})
    return EXIT_OK


def cmd_surfaces(args, cfg):
    tri = _oriented(load_input(args))
    rays = enumerate_admissible_rays(assemble(tri, args.mode))
    funcs = build_boundary_functionals(tri) if tri.is_ideal else None
    rows = []
    for i, ray in enumerate(rays):
        row = {"index": i, "ray": list(ray.vector)}
        if funcs is not None and any(evaluate_nu(funcs, ray.vector)):
            row["spun"] = True
            rows.append(row)
            continue
        try:
            S, doubled = canonical_surface(tri, ray.vector)
        except NotClosed:
            row["spun"] = True
            rows.append(row)
            continue
        row["spun"] = False
        row["doubled"] = doubled
        row.update(properties(S).to_dict())
        rows.append(row)
    _emit({"mode": args.mode, "surfaces": rows})
    return EXIT_OK


def cmd_crush(args, cfg):
    tri = _oriented(load_input(args))
    S = _ray_surface(tri, args.mode, args.surface)
    out = crush(tri, S)
    text = out.result.to_text()
    if args.out:
        Path(args.out).write_text(text)
    _emit(
        {
            "removed_tets": out.removed_tets,
            "tets": out.result.size,
            "component_boundary_profiles": [list(p) for p in out.component_boundary_profiles],
            "output": args.out,
        }
    )
    return EXIT_OK


def cmd_cut(args, cfg):
    tri = _oriented(load_input(args))
    S = _ray_surface(tri, args.mode, args.surface)
    pieces = cut_along(tri, S)
    dest = Path(args.out_dir)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    for i, piece in enumerate(pieces):
        path = dest / f"piece{i}.tri"
        path.write_text(piece.triangulation.to_text())
        tags = [
            {"tag": "CopyOfS" if tag == COPY_OF_S else f"OriginalBoundary({tag - 1})", "genus": g}
            for tag, g in piece.boundary_tags
        ]
        side = dest / f"piece{i}.json"
        side.write_text(json.dumps({"tets": piece.triangulation.size, "boundary": tags}, indent=2))
        written.append(str(path))
    _emit({"pieces": written})
    return EXIT_OK


def _run_haken(tri, ideal, cfg, use_homology=True, variants=1):
    tri = _oriented(tri)
    if ideal is None:
        ideal = tri.is_ideal
    fn = decide_ideal if ideal else decide_closed
    return fn(tri, jobs=cfg.jobs, seed=cfg.seed, timeout=cfg.timeout, use_homology=use_homology, variants=variants)


def _exit_for(verdict):
    if verdict in (Verdict.INCONCLUSIVE_BOUNDARY_PARALLEL, Verdict.TIMEOUT):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_haken(args, cfg):
    tri = load_input(args)
    ideal = True if args.ideal else False if args.closed else None
    report = _run_haken(tri, ideal, cfg, not args.no_homology, args.variants)
    data = report.to_dict()
    if args.json:
        Path(args.json).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    _emit({"verdict": data["verdict"], "witness_ray": data["witness_ray"], "candidates": data["candidates_total"]})
    return _exit_for(report.verdict)


def cmd_haken_batch(args, cfg):
    files = sorted(Path(args.dir).glob("*.tri"))
    if not files:
        raise UsageError(f"no .tri files in {args.dir}")
    worst = EXIT_OK
    with open(args.csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "tets", "verdict", "candidates", "seconds"])
        for path in files:
            tri = read_gluings(path)
            t0 = time.perf_counter()
            report = _run_haken(tri, None, cfg, variants=args.variants)
            secs = time.perf_counter() - t0
            writer.writerow([path.stem, tri.size, report.verdict.value, report.candidates_total, f"{secs:.3f}"])
            fh.flush()
            log.info("%s: %s", path.stem, report.verdict.value)
            worst = max(worst, _exit_for(report.verdict))
    return worst


def cmd_fixtures(args, cfg):
    if args.action == "install":
        paths = fixtures.install(args.dest)
        _emit({"installed": [str(p) for p in paths]})
    elif args.action == "list":
        _emit({name: fixtures.DESCRIPTIONS.get(name, "") for name in fixtures.names()})
    else:
        raise UsageError("fixtures needs an action: list or install")
    return EXIT_OK


COMMANDS = {
    "homology": cmd_homology,
    "constraints": cmd_constraints,
    "enumerate": cmd_enumerate,
    "surfaces": cmd_surfaces,
    "crush": cmd_crush,
    "cut": cmd_cut,
    "haken": cmd_haken,
    "haken-batch": cmd_haken_batch,
    "fixtures": cmd_fixtures,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        cfg = RunConfig(args.jobs, args.seed, args.timeout_secs)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"essurf: usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (TriangulationError, CrushError, OSError, ValueError) as exc:
        print(f"essurf: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
