"""Command-line front end.

Example::

    imcompress --input soc-graph.txt --k 10 --epsilon 0.5 --seed 42 \\
        --seeds-out seeds.txt --stats-json stats.json
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .graph import assign_weights, load_edge_list, read_binary, write_binary
from .pipeline import MODES, RunConfig, run

log = logging.getLogger("imcompress")

WORKERS_ENV = "IMCOMPRESS_WORKERS"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="imcompress", description="Influence maximization on compressed RRR sets.")
    p.add_argument("--input", required=True, help="edge list or IMMXG1 binary graph")
    p.add_argument("--format", choices=("edgelist", "binary"), default="edgelist")
    p.add_argument("--undirected", dest="directed", action="store_false",
                   help="treat each line as an undirected edge")
    p.add_argument("--weight-model", choices=("wc", "uniform"), default="wc",
                   help="IC probabilities: weighted cascade (1/indegree) or uniform p")
    p.add_argument("--p", type=float, help="edge probability for --weight-model uniform")
    p.add_argument("--k", type=int, required=True, help="number of seeds")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--blocks", type=int, default=8, help="sampling blocks, first one is the warm-up")
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--workers", type=int, default=int(os.environ.get(WORKERS_ENV, "1")))
    p.add_argument("--parallel-merge", action="store_true",
                   help="argmax over per-worker winners instead of a full reduction")
    p.add_argument("--seed", type=int, default=0, help="RNG seed; the only source of randomness")
    p.add_argument("--theta", type=int, help="fixed sample count (skips estimation)")
    p.add_argument("--stats-json", help="write run statistics here")
    p.add_argument("--seeds-out", help="write seeds here, one original vertex id per line")
    p.add_argument("--cache-out", help="also write the loaded graph as an IMMXG1 binary")
    p.add_argument("--dump-codebook", help="write the Huffman codebook as text (huffman mode)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _check(args, parser):
    if args.weight_model == "uniform" and args.p is None:
        parser.error("--weight-model uniform requires --p")
    if args.weight_model != "uniform" and args.p is not None:
        parser.error("--p is only meaningful with --weight-model uniform")
    if args.p is not None and not 0.0 <= args.p <= 1.0:
        parser.error("--p must lie in [0, 1]")
    if args.k < 1:
        parser.error("--k must be >= 1")
    if args.epsilon <= 0:
        parser.error("--epsilon must be positive")
    if args.blocks < 2:
        parser.error("--blocks must be >= 2")
    if args.workers < 1:
        parser.error("--workers must be >= 1")


def write_seeds(path, seeds, labels=None) -> None:
    with open(path, "w") as fh:
        for s in seeds.seeds:
            fh.write(f"{s if labels is None else labels[s]}\n")


def write_stats(stats, path, labels=None) -> None:
    with open(path, "w") as fh:
        json.dump(stats.to_dict(labels), fh, indent=2)
        fh.write("\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        if args.format == "binary":
            g = read_binary(args.input)
            g = assign_weights(g, args.weight_model, args.p)
        else:
            g = load_edge_list(args.input, directed=args.directed, weight_model=args.weight_model, p=args.p)
        log.info("loaded graph: n=%d m=%d", g.num_vertices, g.num_edges)
        if args.cache_out:
            write_binary(g, args.cache_out)

        cfg = RunConfig(
            k=args.k, epsilon=args.epsilon, blocks=args.blocks, mode=args.mode,
            rng_seed=args.seed, workers=args.workers, parallel_merge=args.parallel_merge,
            theta=args.theta,
        )
        seeds, stats = run(g, cfg)
        log.info("theta=%d mode=%s (%s) seeds=%s", stats.theta, stats.mode.value, stats.mode_source, seeds.seeds)

        if args.seeds_out:
            write_seeds(args.seeds_out, seeds, g.labels)
        else:
            for s in seeds.seeds:
                print(g.label(s))
        if args.stats_json:
            write_stats(stats, args.stats_json, g.labels)
        if args.dump_codebook and stats.mode.value == "huffman":
            with open(args.dump_codebook, "w") as fh:
                stats.codebook.dump(fh)
    except (OSError, ValueError, MemoryError) as exc:
        print(f"imcompress: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
