"""Command-line interface: generate, bench, serve.

Exit codes: 0 success, 1 sketch validation failure (diagnostics printed),
2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .baselines import (
    BENCH_MAX_BEAM,
    METHODS,
    build_bench_index,
    report_csv,
    run_ant_colony,
    run_beam_search,
    run_greedy,
    run_ours,
    run_random,
)
from .catalog import default_catalog, load_catalog
from .ldraw import export_ldr
from .pipeline import (
    dumps_document,
    generate,
    model_document,
    report_document,
    validation_diagnostics,
)
from .sketch import SketchError


def _cmd_generate(args) -> int:
    sketch_path = Path(args.sketch)
    if not sketch_path.exists():
        print(f"sketch file not found: {sketch_path}", file=sys.stderr)
        return 1
    catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
    try:
        diags = validation_diagnostics(sketch_path)
    except SketchError as e:
        print(f"invalid sketch: {e}", file=sys.stderr)
        return 1
    if diags:
        for d in diags:
            print(f"[{d['rule']}] {d['subject']}: {d['message']}", file=sys.stderr)
        return 1

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "run.log"
    log_file = log_path.open("w")

    def progress(stage, t, best, iteration):
        log_file.write(
            json.dumps(
                {"iteration": iteration, "stage": stage, "t": t, "bestF": best}
            )
            + "\n"
        )

    try:
        res = generate(
            sketch_path,
            preset=args.preset,
            seed=args.seed,
            cooling_rate=args.cooling_rate,
            catalog=catalog,
            progress=progress,
        )
    except Exception as e:
        log_file.close()
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    log_file.close()

    (out_dir / "model.json").write_text(dumps_document(model_document(res, catalog)))
    (out_dir / "report.json").write_text(dumps_document(report_document(res)))
    if args.ldraw:
        steps = res.report.assembly_steps if res.report.assemblable else None
        (out_dir / "model.ldr").write_text(export_ldr(res.model, steps))
    bd = res.refine_result.breakdown
    print(
        f"generated {len(res.layout.beams)} beams, {len(res.plan.uses)} connections; "
        f"gaps={bd.n_gap} collisions={bd.n_col} failures={bd.n_cfail} "
        f"F={bd.total:.4f}"
    )
    print(f"outputs in {out_dir}")
    return 0


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        print(f"unknown methods: {unknown}; choose from {sorted(METHODS)}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    try:
        for n in range(1, args.n_max + 1):
            graph, index, catalog = build_bench_index(n, max_beam_length=args.max_beam)
            for method in methods:
                seeds = range(args.seeds) if method in ("ours", "random", "ant-colony") else [0]
                for seed in seeds:
                    if method == "ours":
                        r = run_ours(graph, index, catalog, seed=seed, n=n,
                                     cooling_rate=args.cooling_rate)
                    elif method == "greedy":
                        r = run_greedy(graph, index, n=n)
                    elif method == "random":
                        r = run_random(graph, index, seed=seed, n=n)
                    elif method == "beam-search":
                        r = run_beam_search(graph, index, width=args.beam_width, n=n)
                    else:
                        r = run_ant_colony(graph, index, seed=seed, n=n)
                    results.append(r)
                    row = r.row()
                    print(
                        f"{row['method']:>11} n={n} seed={row['seed']} "
                        f"gaps={row['gaps']} beams={row['beams']} "
                        f"uncovered={row['uncovered']} {row['seconds']}s"
                    )
                    single = out_dir / f"{method}_{n}_{r.seed}.json"
                    single.write_text(json.dumps(row, sort_keys=True) + "\n")
    except KeyboardInterrupt:
        print("interrupted; writing partial results", file=sys.stderr)
    csv_path = out_dir / "bench.csv"
    csv_path.write_text(report_csv(results))
    print(f"wrote {csv_path}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    port = args.port
    env = os.environ.get("TECHNIC_PORT")
    if env and args.port == 7777:
        port = int(env)
    serve(port=port, parallel=args.parallel)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="technicgen",
        description="Sketch-to-Technic-layout engine: generate models, run the "
        "grid benchmark, or serve the HTTP API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a model from a sketch file")
    gen.add_argument("--sketch", required=True, help="path to a sketch JSON file")
    gen.add_argument(
        "--preset",
        default="faithful",
        choices=["faithful", "simple", "rigid-faithful", "rigid-simple"],
    )
    gen.add_argument("--cooling-rate", type=float, default=0.999)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--catalog", default=None, help="alternative catalog JSON")
    gen.add_argument("--out", default="out", help="output directory")
    gen.add_argument("--ldraw", action="store_true", help="also write model.ldr")
    gen.set_defaults(func=_cmd_generate)

    bench = sub.add_parser("bench", help="run the n-by-n grid benchmark")
    bench.add_argument(
        "--methods", default="ours,greedy,random,beam-search,ant-colony"
    )
    bench.add_argument("--n-max", type=int, default=8)
    bench.add_argument("--seeds", type=int, default=1)
    bench.add_argument("--cooling-rate", type=float, default=0.99997)
    bench.add_argument("--beam-width", type=int, default=75)
    bench.add_argument("--max-beam", type=int, default=BENCH_MAX_BEAM)
    bench.add_argument("--out", default="bench-out")
    bench.set_defaults(func=_cmd_bench)

    srv = sub.add_parser("serve", help="run the local HTTP service")
    srv.add_argument("--port", type=int, default=7777)
    srv.add_argument("--parallel", action="store_true",
                     help="run jobs concurrently instead of one at a time")
    srv.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
