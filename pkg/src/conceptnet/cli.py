"""Command line entry point: ``conceptnet {ingest,generate,sweep,compare,report}``.

Failures exit nonzero with one JSON object on stderr, e.g.
``{"error": "ParseError", "message": "...", "line": 3, "path": "corpus.jsonl"}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .baselines import BaConfig, ErConfig
from .blocks import BlockSizeDistribution
from .errors import ConfigError, ParseError
from .graph import read_edgelist
from .growth import ModelConfig, generate_corpus
from .harness import (
    AggregateReport,
    RealizationError,
    RunSpec,
    SweepSpec,
    compare,
    ingest_and_report,
    read_run_file,
    run,
    sweep_nu,
)
from .metrics import degree_distribution, full_report

# run-file keys and their built-in defaults
DEFAULTS = {
    "model": "blocks",
    "selection": "psp",
    "nu": 8.8e-3,
    "blocks": "fixed:37",
    "articles": 36386,
    "realizations": 1,
    "seed": 0,
    "jobs": 1,
    "nodes": 11853,
    "links": 5382448,
    "m0": 473,
    "m": 473,
    "steps": 11380,
    "first_slot_existing": False,
}


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat TOML run file (key = value); flags override it")
    p.add_argument("--selection", choices=["usp", "psp"])
    p.add_argument("--nu", type=float, help="probability that a slot holds a novel concept")
    p.add_argument("--blocks", help="fixed:37 | empirical:<csv> | lognormal:<mean>,<sigma>")
    p.add_argument("--articles", type=int, help="number of generated articles")
    p.add_argument(
        "--first-slot-existing",
        action="store_true",
        default=None,
        help="exempt the first slot of each article from the novelty draw",
    )
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--jobs", type=int, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conceptnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="corpus file -> concept network statistics")
    p.add_argument("corpus", type=Path)
    p.add_argument("--exclude-generic", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("--save-graph", action="store_true", help="also write concepts.edges")

    p = sub.add_parser("generate", help="generate and measure model networks")
    p.add_argument("--model", choices=["er", "ba", "blocks"])
    _model_flags(p)
    p.add_argument("--nodes", type=int, help="ER node count")
    p.add_argument("--links", type=int, help="ER link count")
    p.add_argument("--m0", type=int, help="BA initial isolated nodes")
    p.add_argument("--m", type=int, help="BA links per arriving node")
    p.add_argument("--steps", type=int, help="BA arrivals")
    p.add_argument("--realizations", type=int)
    p.add_argument(
        "--replay",
        type=_int_list,
        metavar="SEED[,SEED...]",
        help="run exactly these logged realization seeds",
    )
    p.add_argument("--out", type=Path)
    p.add_argument("--save-graphs", action="store_true", help="write graph_{i}.edges per realization")
    p.add_argument("--save-corpus", action="store_true", help="write corpus_{i}.jsonl (block model only)")

    p = sub.add_parser("sweep", help="number of concepts N as a function of nu")
    p.add_argument("--nus", type=_float_list, required=True, help="comma-separated grid")
    _model_flags(p)
    p.add_argument("--realizations", type=_int_list, help="one count, or one per grid point")
    p.add_argument("--out", type=Path, help="TSV output file")

    p = sub.add_parser("compare", help="render aggregate or report JSON files as one table")
    p.add_argument("reports", type=Path, nargs="+")
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    p.add_argument("--labels", help="comma-separated row labels")

    p = sub.add_parser("report", help="statistics of a cached edge-list graph")
    p.add_argument("graph", type=Path)
    p.add_argument("--out", type=Path)
    return parser


def _settings(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None) is not None:
        loaded = read_run_file(args.config)
        unknown = set(loaded) - set(DEFAULTS) - {"replay_seeds", "corpus", "exclude_generic"}
        if unknown:
            raise ConfigError(f"{args.config}: unknown keys {sorted(unknown)}")
        cfg.update(loaded)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _block_config(cfg: dict) -> ModelConfig:
    return ModelConfig(
        article_count=int(cfg["articles"]),
        nu=float(cfg["nu"]),
        block_sizes=BlockSizeDistribution.parse(str(cfg["blocks"])),
        selection=cfg["selection"],
        first_slot_existing=bool(cfg["first_slot_existing"]),
    )


def _run_spec(cfg: dict, args: argparse.Namespace) -> RunSpec:
    model = cfg["model"]
    if model == "er":
        config = ErConfig(int(cfg["nodes"]), int(cfg["links"]))
    elif model == "ba":
        config = BaConfig(int(cfg["m0"]), int(cfg["m"]), int(cfg["steps"]))
    elif model == "blocks":
        config = _block_config(cfg)
    else:
        raise ConfigError(f"unknown model {model!r}")
    seeds = args.replay or cfg.get("replay_seeds")
    reps = len(seeds) if seeds else int(cfg["realizations"])
    return RunSpec(
        model=model,
        config=config,
        realizations=reps,
        output=args.out,
        master_seed=int(cfg["seed"]),
        jobs=int(cfg["jobs"]),
        seeds=list(seeds) if seeds else None,
        save_graphs=args.save_graphs,
    )


def cmd_ingest(args) -> dict:
    rep, dd, blocks = ingest_and_report(args.corpus, args.exclude_generic, args.out, args.save_graph)
    return {"report": rep.to_dict(), "mean_block_size": blocks.mean}


def cmd_generate(args) -> dict:
    spec = _run_spec(_settings(args), args)
    agg = run(spec)
    if args.save_corpus and spec.model == "blocks" and spec.output is not None:
        for i, seed in enumerate(agg.seeds):
            generate_corpus(replace(spec.config, seed=seed)).save(spec.output / f"corpus_{i}.jsonl")
    return {
        "label": agg.label,
        "seeds": agg.seeds,
        "mean": agg.mean,
        "std": agg.std,
        "undefined": agg.undefined,
    }


def cmd_sweep(args) -> dict:
    cfg = _settings(args)
    reps = args.realizations or [int(cfg["realizations"])]
    spec = SweepSpec(
        nus=args.nus,
        base=RunSpec("blocks", _block_config(cfg), master_seed=int(cfg["seed"]), jobs=int(cfg["jobs"])),
        realizations=reps[0] if len(reps) == 1 else reps,
    )
    res = sweep_nu(spec)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(res.to_tsv(), encoding="utf-8")
    return {
        "rows": [dict(zip(("nu", "realizations", "mean_N", "std_N"), r)) for r in res.rows],
        "non_decreasing": res.non_decreasing,
        "seeds": res.seeds,
    }


def cmd_compare(args) -> str:
    reports = [AggregateReport.load(p) for p in args.reports]
    labels = args.labels.split(",") if args.labels else None
    if labels is not None and len(labels) != len(reports):
        raise ConfigError("one label per report required")
    return compare(reports, args.format, labels)


def cmd_report(args) -> dict:
    g = read_edgelist(args.graph)
    rep = full_report(g)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "report.json").write_text(rep.to_json(), encoding="utf-8")
        (args.out / "report.csv").write_text(rep.to_csv(), encoding="utf-8")
        degree_distribution(g).write_tsv(args.out / "degdist.tsv")
    return rep.to_dict()


COMMANDS = {
    "ingest": cmd_ingest,
    "generate": cmd_generate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "report": cmd_report,
}


def _error_payload(exc: BaseException) -> dict:
    d = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        d.update(line=exc.line, path=exc.path)
    if isinstance(exc, OSError) and exc.filename is not None:
        d["path"] = str(exc.filename)
    if isinstance(exc, RealizationError):
        d.update(realization=exc.index, seed=exc.seed)
    return d


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        result = COMMANDS[args.command](args)
    except (Exception, KeyboardInterrupt) as exc:  # noqa: BLE001 - report everything as JSON
        print(json.dumps(_error_payload(exc)), file=sys.stderr)
        return 1
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        print(json.dumps(result, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
