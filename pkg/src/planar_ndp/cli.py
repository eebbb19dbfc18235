"""Command line entry point ``ndp``.

Exit codes: 0 success, 2 invalid input (including a routing that fails
validation), 3 an exhaustive oracle's size guard was exceeded, 4 an
internal guarantee failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from pathlib import Path

from .dpsp import is_non_crossing, random_instance, satisfies_all, solve_dpsp
from .errors import GuardExceeded, InputError, NdpError
from .harness.exact import exact_ndp
from .harness.generators import cylinder_grid_instance, grid_disc_instance, random_planar_disc_instance
from .harness.greedy import greedy_ndp
from .harness.io import (
    dump_routing,
    format_demands,
    format_dpsp,
    format_graph,
    read_demands,
    read_dpsp,
    read_graph,
    read_routing,
)
from .harness.routing import validate_routing
from .instances import CylinderInstance, DiscInstance
from .ndp_cylinder import solve_cylinder
from .ndp_disc import solve_disc

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_INTERNAL = 4

LOG_LEVELS = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
FAMILIES = ("grid-disc", "cylinder-grid", "random-planar-disc", "dpsp-random")

log = logging.getLogger("planar_ndp")


def _setup_logging() -> None:
    name = os.environ.get("NDP_LOG", "off").strip().lower() or "off"
    if name not in LOG_LEVELS:
        raise InputError(f"NDP_LOG must be one of {', '.join(LOG_LEVELS)}, got {name!r}")
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(LOG_LEVELS[name])


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required for mode {args.mode}")
    return value


def _dart(gf, name: str):
    if name not in gf.darts:
        raise InputError(f"graph file has no '{name} u v' line")
    return gf.darts[name]


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    start = time.perf_counter()
    if args.mode == "dpsp":
        inst = read_dpsp(_need(args, "dpsp"))
        chosen = solve_dpsp(inst)
        assert is_non_crossing(chosen) and satisfies_all(chosen, inst.constraints)
        stats = {"algorithm": "dpsp", "routed_count": len(chosen), "opt_hint": None}
        stats["elapsed_ms"] = round(1000 * (time.perf_counter() - start), 3)
        _emit({"selected": [{"s": s, "t": t} for s, t in chosen], "stats": stats}, args.json)
        return EXIT_OK
    gf = read_graph(_need(args, "graph"))
    demands = read_demands(_need(args, "demands"))
    G = gf.graph
    for p in demands:
        for x in p:
            if not 0 <= x < G.vertex_count:
                raise InputError(f"demand vertex {x} is not in the graph")
    if args.mode == "disc":
        R = solve_disc(DiscInstance(G, _dart(gf, "outer"), demands))
    elif args.mode == "cylinder":
        R = solve_cylinder(CylinderInstance(G, _dart(gf, "cuff1"), _dart(gf, "cuff2"), demands))
    elif args.mode == "greedy":
        R = greedy_ndp(G, demands)
    else:
        _, R = exact_ndp(G, demands)
    bad = validate_routing(G, demands, R)
    if bad is not None:
        raise AssertionError(f"solver produced an invalid routing: {bad}")
    R.stats["elapsed_ms"] = round(1000 * (time.perf_counter() - start), 3)
    log.info("%s routed %d of %d pairs", args.mode, len(R), len(demands))
    if args.json:
        Path(args.json).write_text(dump_routing(R), encoding="utf-8")
    else:
        sys.stdout.write(dump_routing(R))
    return EXIT_OK


def cmd_validate(args) -> int:
    G = read_graph(args.graph).graph
    demands = read_demands(args.demands)
    R = read_routing(args.routing)
    bad = validate_routing(G, demands, R)
    if bad is None:
        print(f"ok: {len(R)} paths")
        return EXIT_OK
    print(f"violation: {bad}")
    return EXIT_INPUT


def _write(out: Path, name: str, text: str) -> Path:
    path = out / name
    path.write_text(text, encoding="utf-8")
    return path


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{args.family}-{args.seed}"
    if args.family == "dpsp-random":
        inst = random_instance(random.Random(args.seed), k=args.k, n_constraints=args.constraints)
        written = [_write(out, stem + ".dpsp", format_dpsp(inst))]
    else:
        if args.family == "grid-disc":
            inst = grid_disc_instance(args.rows, args.cols, args.k, args.seed, one_split=args.one_split)
            darts = {"outer": inst.outer_dart}
        elif args.family == "random-planar-disc":
            inst = random_planar_disc_instance(args.n, args.k, args.seed, one_split=args.one_split)
            darts = {"outer": inst.outer_dart}
        else:
            inst = cylinder_grid_instance(args.rings, args.cols, args.k, args.seed)
            darts = {"cuff1": inst.cuff1_dart, "cuff2": inst.cuff2_dart}
        written = [
            _write(out, stem + ".pg", format_graph(inst.graph, **darts)),
            _write(out, stem + ".dem", format_demands(inst.demands)),
        ]
    for path in written:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ndp", description="Node-disjoint paths in planar graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="route demand pairs")
    solve.add_argument("--mode", required=True, choices=["disc", "cylinder", "dpsp", "greedy", "exact"])
    solve.add_argument("--graph")
    solve.add_argument("--demands")
    solve.add_argument("--dpsp")
    solve.add_argument("--json", help="write the result here instead of stdout")
    solve.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripts; solvers are deterministic")
    solve.set_defaults(func=cmd_solve)

    val = sub.add_parser("validate", help="check a routing file")
    val.add_argument("--graph", required=True)
    val.add_argument("--demands", required=True)
    val.add_argument("--routing", required=True)
    val.set_defaults(func=cmd_validate)

    gen = sub.add_parser("gen", help="write a generated instance")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--rows", type=int, default=4)
    gen.add_argument("--cols", type=int, default=4)
    gen.add_argument("--rings", type=int, default=4)
    gen.add_argument("--n", type=int, default=12)
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--constraints", type=int, default=6)
    gen.add_argument("--one-split", action="store_true")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        _setup_logging()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (NdpError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
