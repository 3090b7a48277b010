"""Command-line entry point: ``tgp <command> ...``.

Exit codes: 0 success, 1 usage error, 2 infeasible or invalid input,
3 time limit hit before optimality was proven.  Every failure prints one
line ``E_<KIND>: message`` on standard error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from .discretization import CoverageError, build_candidates, build_witnesses
from .geometry import Terrain, TerrainError, as_terrain_point
from .io import (
    PROFILES,
    ParseError,
    dumps_solution,
    dumps_terrain,
    export_ip,
    generate_terrain,
    dumps_points,
    read_solution,
    read_terrain,
    write_text,
)
from .oracles import lemma_checks
from .setcover import (
    EXACT,
    GREEDY,
    LOCAL_SEARCH,
    CoverSolution,
    InfeasibleError,
    SetCoverInstance,
    build_instance,
    solve_exact,
    solve_greedy,
    solve_local_search,
    verify_coverage,
)
from .svg import plot_svg

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_TIMEOUT = 0, 1, 2, 3
DEFAULT_SWAP_SIZE = 2


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int):
        super().__init__(message)
        self.kind = kind
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("E_USAGE", message, EXIT_USAGE)


def discretize(t: Terrain, min_filter: bool = True):
    U = build_candidates(t)
    W = build_witnesses(t, U, minimal_filter=min_filter)
    return U, W, build_instance(t, U, W)


def solve_terrain(
    t: Terrain,
    method: str = EXACT,
    swap_size: int = DEFAULT_SWAP_SIZE,
    time_limit: float | None = None,
    min_filter: bool = True,
    threads: int = 1,
) -> tuple[CoverSolution, SetCoverInstance, dict]:
    """Discretize ``t`` and solve the covering instance over (U, W(U)).

    Returns the solution, the instance, and the metadata written to
    solution files.
    """
    U, W, inst = discretize(t, min_filter)
    if method == GREEDY:
        sol = solve_greedy(inst)
    elif method == LOCAL_SEARCH:
        sol = solve_local_search(inst, b=swap_size)
    else:
        sol = solve_exact(inst, time_limit=time_limit, threads=threads)
    meta = {
        "candidates": len(U),
        "min_filter": min_filter,
        "vertices": t.n,
        "witnesses": len(W),
    }
    if method == LOCAL_SEARCH:
        meta["swap_size"] = swap_size
    return sol, inst, meta


def _read_terrain(path: str) -> Terrain:
    try:
        return read_terrain(path)
    except OSError as exc:
        raise CliError("E_PARSE", f"{path}: {exc.strerror}", EXIT_INVALID)
    except (ParseError, TerrainError) as exc:
        raise CliError("E_PARSE", f"{path}: {exc}", EXIT_INVALID)


def cmd_generate(args) -> int:
    try:
        t = generate_terrain(args.n, args.seed, args.profile)
    except TerrainError as exc:
        raise CliError("E_USAGE", str(exc), EXIT_USAGE)
    write_text(args.output, dumps_terrain(t))
    return EXIT_OK


def cmd_discretize(args) -> int:
    t = _read_terrain(args.terrain)
    U = build_candidates(t)
    W = build_witnesses(t, U, minimal_filter=not args.no_min_filter)
    prov = [{"source": kind, "vertex": i} for kind, i in U.provenance]
    write_text(args.guards_out, dumps_points("candidates", U.guards, prov))
    seen = [{"seen_by": [g for g in range(len(U)) if m >> g & 1]} for m in W.seen_by]
    write_text(args.witnesses_out, dumps_points("witnesses", W.witnesses, seen))
    return EXIT_OK


def cmd_solve(args) -> int:
    t = _read_terrain(args.terrain)
    if args.swap_size < 1:
        raise CliError("E_USAGE", "--swap-size must be >= 1", EXIT_USAGE)
    if args.threads < 1:
        raise CliError("E_USAGE", "--threads must be >= 1", EXIT_USAGE)
    start = time.monotonic()
    try:
        sol, inst, meta = solve_terrain(
            t, args.method, args.swap_size, args.time_limit, not args.no_min_filter, args.threads
        )
    except (CoverageError, InfeasibleError) as exc:
        raise CliError("E_INFEASIBLE", str(exc), EXIT_INVALID)
    timing = {"seconds": round(time.monotonic() - start, 6)} if args.timing else None
    write_text(args.output, dumps_solution(sol, inst.guards, meta, timing))
    if args.method == EXACT and not sol.optimal:
        raise CliError(
            "E_TIMEOUT",
            f"time limit reached: cardinality {sol.cardinality}, lower bound {sol.lower_bound}",
            EXIT_TIMEOUT,
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    t = _read_terrain(args.terrain)
    try:
        doc = read_solution(args.solution)
    except OSError as exc:
        raise CliError("E_PARSE", f"{args.solution}: {exc.strerror}", EXIT_INVALID)
    except ParseError as exc:
        raise CliError("E_PARSE", f"{args.solution}: {exc}", EXIT_INVALID)
    try:
        guards = [as_terrain_point(t, g) for g in doc["guards"]]
    except TerrainError as exc:
        raise CliError("E_INFEASIBLE", str(exc), EXIT_INVALID)
    ok, p = verify_coverage(t, guards)
    if not ok:
        raise CliError("E_INFEASIBLE", f"point ({p.x}, {p.y}) is not seen by any guard", EXIT_INVALID)
    print(f"ok: {len(guards)} guards cover the terrain")
    return EXIT_OK


def cmd_export_ip(args) -> int:
    t = _read_terrain(args.terrain)
    _, _, inst = discretize(t, not args.no_min_filter)
    write_text(args.output, export_ip(inst))
    return EXIT_OK


def cmd_plot(args) -> int:
    t = _read_terrain(args.terrain)
    guards = None
    if args.solution:
        try:
            guards = [as_terrain_point(t, g) for g in read_solution(args.solution)["guards"]]
        except (OSError, ParseError, TerrainError) as exc:
            raise CliError("E_PARSE", f"{args.solution}: {exc}", EXIT_INVALID)
    disc = None
    if args.show == "candidates":
        disc = build_candidates(t)
    elif args.show == "witnesses":
        disc = build_witnesses(t, build_candidates(t))
    write_text(args.output, plot_svg(t, guards, disc))
    return EXIT_OK


def cmd_check_lemmas(args) -> int:
    t = _read_terrain(args.terrain) if args.terrain else None
    report = lemma_checks(t, args.trials, args.seed)
    for line in report.lines():
        print(line)
    if not report.ok:
        raise CliError("E_INFEASIBLE", "lemma checks reported failures", EXIT_INVALID)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tgp", description="Exact continuous 1.5D terrain guarding.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a random terrain")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=PROFILES, default="random-walk")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("discretize", help="write the candidates U and witnesses W(U)")
    d.add_argument("terrain")
    d.add_argument("--no-min-filter", action="store_true")
    d.add_argument("--guards-out", required=True)
    d.add_argument("--witnesses-out", required=True)
    d.set_defaults(func=cmd_discretize)

    s = sub.add_parser("solve", help="compute a guard cover")
    s.add_argument("terrain")
    s.add_argument("--method", choices=(EXACT, GREEDY, LOCAL_SEARCH), default=EXACT)
    s.add_argument("--swap-size", type=int, default=DEFAULT_SWAP_SIZE)
    s.add_argument("--time-limit", type=float, default=None, metavar="SECS")
    s.add_argument("--no-min-filter", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="record wall time (breaks byte-determinism)")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check that a solution covers the terrain")
    v.add_argument("terrain")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export-ip", help="write the covering IP in LP format")
    e.add_argument("terrain")
    e.add_argument("--no-min-filter", action="store_true")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_export_ip)

    pl = sub.add_parser("plot", help="draw the terrain as SVG")
    pl.add_argument("terrain")
    pl.add_argument("solution", nargs="?")
    pl.add_argument("--show", choices=("none", "candidates", "witnesses"), default="none")
    pl.add_argument("-o", "--output", required=True)
    pl.set_defaults(func=cmd_plot)

    c = sub.add_parser("check-lemmas", help="randomized checks of the repositioning lemmas")
    c.add_argument("terrain", nargs="?")
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check_lemmas)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        msg = " ".join(str(exc).split())
        print(f"{exc.kind}: {msg}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"E_PARSE: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
