"""Experiment runner: realizations, aggregation, ν sweeps and table rendering.

Seeds: realization ``i`` of a run with master seed ``S`` uses
:func:`realization_seed` ``(S, i)``, the first 64-bit word of
``numpy.random.SeedSequence([S, i])``; realization ``i`` of sweep point ``p``
uses ``(S, p, i)``. That integer is logged per realization, and passing it back
as an explicit seed replays the realization exactly.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Union

import numpy as np

from .baselines import BaConfig, ErConfig, barabasi_albert, erdos_renyi
from .blocks import BlockSizeDistribution
from .corpus import block_size_histogram, build_bipartite, filter_generic, project_concepts, read_corpus
from .errors import ConceptNetError, ConfigError, InputError
from .graph import Graph, write_edgelist
from .growth import ModelConfig, generate_corpus, generate_network
from .metrics import TABLE_COLUMNS, UNDEF, DegreeDistribution, MetricsReport, degree_distribution, full_report

log = logging.getLogger(__name__)

__all__ = [
    "AggregateReport",
    "RealizationError",
    "RunSpec",
    "SweepResult",
    "SweepSpec",
    "compare",
    "ingest_and_report",
    "realization_seed",
    "run",
    "sweep_nu",
]

MODELS = ("empirical-ingest", "er", "ba", "blocks")
# metrics averaged across realizations, in table order
AGG_FIELDS = ("N", "L", "rho", "mean_k", "sigma", "k_max", "r", "avg_c", "T")

AnyConfig = Union[ErConfig, BaConfig, ModelConfig, None]


def realization_seed(master_seed: int, index: int, *more: int) -> int:
    """First 64-bit word of ``SeedSequence([master_seed, index, *more])``."""
    key = [master_seed, index, *more]
    if min(key) < 0:
        raise ConfigError("seeds and realization indices must be non-negative")
    ss = np.random.SeedSequence(key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class RealizationError(ConceptNetError):
    def __init__(self, index: int, seed: int, cause: BaseException):
        self.index, self.seed, self.cause = index, seed, cause
        super().__init__(f"realization {index} (seed {seed}) failed: {cause!r}")

    def __reduce__(self):
        return type(self), (self.index, self.seed, self.cause)


@dataclass
class RunSpec:
    """One experiment: a model, its configuration and how many realizations.

    ``seeds`` overrides the master-seed derivation (used for replay).
    """

    model: str
    config: AnyConfig = None
    realizations: int = 1
    output: Path | None = None
    master_seed: int = 0
    jobs: int = 1
    seeds: list[int] | None = None
    corpus_path: Path | None = None
    exclude_generic: bool = False
    save_graphs: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.realizations < 1:
            raise ConfigError("realizations must be at least 1")
        if self.seeds is not None and len(self.seeds) != self.realizations:
            raise ConfigError("need exactly one explicit seed per realization")
        if self.model == "empirical-ingest" and self.corpus_path is None:
            raise ConfigError("empirical-ingest needs a corpus path")
        if self.model != "empirical-ingest" and self.config is None:
            raise ConfigError(f"model {self.model!r} needs a configuration")
        if self.output is not None:
            self.output = Path(self.output)

    def seed_for(self, index: int) -> int:
        if self.seeds is not None:
            return int(self.seeds[index])
        return realization_seed(self.master_seed, index)

    def settings(self) -> dict:
        """Flat key/value view, the same keys the run file accepts."""
        d: dict = {
            "model": self.model,
            "realizations": self.realizations,
            "seed": self.master_seed,
            "jobs": self.jobs,
        }
        c = self.config
        if isinstance(c, ErConfig):
            d.update(nodes=c.N, links=c.L)
        elif isinstance(c, BaConfig):
            d.update(m0=c.m0, m=c.m, steps=c.steps)
        elif isinstance(c, ModelConfig):
            d.update(
                selection=c.selection.value,
                nu=c.nu,
                blocks=c.block_sizes.spec(),
                articles=c.article_count,
                first_slot_existing=c.first_slot_existing,
            )
        if self.corpus_path is not None:
            d.update(corpus=str(self.corpus_path), exclude_generic=self.exclude_generic)
        if self.seeds is not None:
            d["replay_seeds"] = list(self.seeds)
        return d


def build_graph(spec: RunSpec, seed: int) -> Graph:
    c = spec.config
    if spec.model == "er":
        return erdos_renyi(replace(c, seed=seed))
    if spec.model == "ba":
        return barabasi_albert(replace(c, seed=seed))
    if spec.model == "blocks":
        return generate_network(replace(c, seed=seed))[0]
    corpus = filter_generic(read_corpus(spec.corpus_path), spec.exclude_generic)
    return project_concepts(build_bipartite(corpus))


@dataclass
class Realization:
    index: int
    seed: int
    report: MetricsReport
    degrees: DegreeDistribution


def _realize(spec: RunSpec, index: int) -> Realization:
    seed = spec.seed_for(index)
    try:
        g = build_graph(spec, seed)
        rep = full_report(g)
        dd = degree_distribution(g)
        if spec.output is not None:
            (spec.output / f"report_{index}.csv").write_text(rep.to_csv(), encoding="utf-8")
            dd.write_tsv(spec.output / f"degdist_{index}.tsv")
            if spec.save_graphs:
                write_edgelist(g, spec.output / f"graph_{index}.edges")
    except OSError:
        raise
    except Exception as exc:
        raise RealizationError(index, seed, exc) from exc
    log.info("realization %d (seed %d): N=%d L=%d", index, seed, rep.N, rep.L)
    return Realization(index, seed, rep, dd)


def _mean_std(values: list[float | None]) -> tuple[float | None, float | None, int]:
    undefined = sum(v is None for v in values)
    if undefined:
        return None, None, undefined
    r = len(values)
    mean = math.fsum(values) / r
    if r < 2:
        return mean, None, 0
    var = math.fsum((v - mean) ** 2 for v in values) / (r - 1)
    return mean, math.sqrt(var), 0


@dataclass
class AggregateReport:
    """Per-metric mean and sample standard deviation over R realizations.

    A metric undefined in any realization has undefined mean and std, and
    ``undefined[metric]`` counts the realizations where it was undefined.
    With R = 1 every std is undefined and ``single_realization`` is set.
    """

    label: str
    seeds: list[int]
    reports: list[MetricsReport]
    mean: dict[str, float | None] = field(default_factory=dict)
    std: dict[str, float | None] = field(default_factory=dict)
    undefined: dict[str, int] = field(default_factory=dict)
    settings: dict = field(default_factory=dict)

    @classmethod
    def from_reports(
        cls, label: str, seeds: list[int], reports: list[MetricsReport], settings: dict | None = None
    ):
        if not reports:
            raise InputError("cannot aggregate zero realizations")
        agg = cls(label, list(seeds), list(reports), settings=dict(settings or {}))
        for f in AGG_FIELDS:
            m, s, u = _mean_std([getattr(r, f) for r in reports])
            agg.mean[f], agg.std[f] = m, s
            if u:
                agg.undefined[f] = u
        return agg

    @property
    def realizations(self) -> int:
        return len(self.reports)

    @property
    def single_realization(self) -> bool:
        return self.realizations == 1

    def row(self) -> dict:
        out = {}
        for c in TABLE_COLUMNS:
            if c == "rho_percent":
                out[c] = None if self.mean["rho"] is None else 100 * self.mean["rho"]
            else:
                out[c] = self.mean[c]
        return out

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "realizations": self.realizations,
            "single_realization": self.single_realization,
            "seeds": self.seeds,
            "mean": self.mean,
            "std": self.std,
            "undefined": self.undefined,
            "settings": self.settings,
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> AggregateReport:
        reports = [MetricsReport.from_dict(r) for r in d.get("reports", [])]
        if reports:
            agg = cls.from_reports(d.get("label", ""), d.get("seeds", []), reports, d.get("settings"))
        else:
            agg = cls(
                d.get("label", ""),
                d.get("seeds", []),
                [],
                d["mean"],
                d.get("std", {}),
                d.get("undefined", {}),
                d.get("settings", {}),
            )
        return agg

    @classmethod
    def load(cls, path: str | os.PathLike) -> AggregateReport:
        """Read an ``aggregate.json`` or a single-report JSON file."""
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        if "mean" not in d and "N" in d:
            rep = MetricsReport.from_dict(d)
            return cls.from_reports(Path(path).stem, [], [rep])
        agg = cls.from_dict(d)
        if not agg.label:
            agg.label = Path(path).parent.name or Path(path).stem
        return agg


def write_run_file(settings: dict, path: str | os.PathLike) -> None:
    """Flat TOML: one ``key = value`` per line."""
    lines = []
    for k, v in settings.items():
        if isinstance(v, bool):
            lines.append(f"{k} = {'true' if v else 'false'}")
        elif isinstance(v, (int, float)):
            lines.append(f"{k} = {v!r}")
        elif isinstance(v, list):
            lines.append(f"{k} = [{', '.join(repr(int(x)) for x in v)}]")
        else:
            lines.append(f"{k} = {json.dumps(str(v))}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_run_file(path: str | os.PathLike) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None


def _label(spec: RunSpec) -> str:
    if spec.model == "blocks":
        c = spec.config
        return f"{c.selection.value.upper()}, {c.block_sizes.spec()}"
    return {"er": "Erdos-Renyi", "ba": "Barabasi-Albert", "empirical-ingest": "empirical"}[spec.model]


def run(spec: RunSpec) -> AggregateReport:
    """Generate and measure ``spec.realizations`` graphs; aggregate in index order."""
    if spec.output is not None:
        spec.output.mkdir(parents=True, exist_ok=True)
        write_run_file(spec.settings(), spec.output / "config.toml")
    indices = range(spec.realizations)
    if spec.jobs > 1 and spec.realizations > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_realize, [spec] * spec.realizations, indices))
    else:
        results = [_realize(spec, i) for i in indices]
    agg = AggregateReport.from_reports(
        _label(spec), [r.seed for r in results], [r.report for r in results], spec.settings()
    )
    if spec.output is not None:
        (spec.output / "aggregate.json").write_text(agg.to_json(), encoding="utf-8")
    return agg


@dataclass
class SweepSpec:
    """ν grid for the block-growth model; ``realizations`` is one count for
    every point or one count per grid point."""

    nus: list[float]
    base: RunSpec
    realizations: int | list[int] = 1

    def __post_init__(self):
        if not self.nus:
            raise ConfigError("the nu grid is empty")
        if any(not 0.0 < nu <= 1.0 for nu in self.nus):
            raise ConfigError("grid values must lie in (0, 1]")
        if self.base.model != "blocks":
            raise ConfigError("a nu sweep needs the block-growth model")
        if isinstance(self.realizations, int):
            self.realizations = [self.realizations] * len(self.nus)
        if len(self.realizations) != len(self.nus) or min(self.realizations) < 1:
            raise ConfigError("need one positive realization count per grid point")


@dataclass
class SweepResult:
    rows: list[tuple[float, int, float, float | None]]
    seeds: list[list[int]]
    counts: list[list[int]]

    @property
    def non_decreasing(self) -> bool:
        means = [r[2] for r in sorted(self.rows)]
        return all(a <= b for a, b in zip(means, means[1:]))

    def to_tsv(self) -> str:
        lines = ["nu\trealizations\tmean_N\tstd_N"]
        for nu, r, m, s in self.rows:
            lines.append(f"{nu!r}\t{r}\t{m!r}\t{UNDEF if s is None else repr(s)}")
        lines.append(f"# trend: {'non-decreasing' if self.non_decreasing else 'NOT monotone'}")
        return "\n".join(lines) + "\n"


def _concept_count(config: ModelConfig) -> int:
    return generate_corpus(config).concept_count


def sweep_nu(spec: SweepSpec) -> SweepResult:
    """Mean and sample std of N at each ν. Only the corpus is generated, since
    N does not depend on the clique insertion."""
    rows, seeds, counts = [], [], []
    base = spec.base
    for p, (nu, reps) in enumerate(zip(spec.nus, spec.realizations)):
        ss = [realization_seed(base.master_seed, p, i) for i in range(reps)]
        cfgs = [replace(base.config, nu=nu, seed=s) for s in ss]
        if base.jobs > 1 and reps > 1:
            with ProcessPoolExecutor(max_workers=base.jobs) as pool:
                ns = list(pool.map(_concept_count, cfgs))
        else:
            ns = [_concept_count(c) for c in cfgs]
        mean, std, _ = _mean_std([float(n) for n in ns])
        rows.append((nu, reps, mean, std))
        seeds.append(ss)
        counts.append(ns)
    return SweepResult(rows, seeds, counts)


def _fmt(col: str, v) -> str:
    if v is None:
        return UNDEF
    if col in ("N", "k_max"):
        return str(int(round(v)))
    if col == "L":
        return f"{v / 1e6:.2f}"
    if col in ("rho_percent", "r", "avg_c", "T"):
        return f"{v:.2f}"
    return f"{v:.0f}"


def compare(
    reports: list[AggregateReport | MetricsReport], fmt: str = "markdown", labels: list[str] | None = None
) -> str:
    """Side-by-side table, one row per report, in table column order.

    L is shown in millions; undefined cells read ``undef``.
    """
    if len(reports) < 2:
        raise InputError("compare needs at least two reports")
    rows = []
    for i, rep in enumerate(reports):
        name = labels[i] if labels else getattr(rep, "label", f"report {i + 1}")
        vals = rep.row()
        rows.append([name] + [_fmt(c, vals[c]) for c in TABLE_COLUMNS])
    header = ["model", "N", "L (1e6)", "rho %", "<k>", "sigma", "k_max", "r", "<c>", "T"]
    if fmt == "csv":
        return "\n".join(",".join(r) for r in [header] + rows) + "\n"
    if fmt != "markdown":
        raise ConfigError(f"unknown table format {fmt!r}")
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def ingest_and_report(
    corpus_path: str | os.PathLike,
    exclude_generic: bool = False,
    output: str | os.PathLike | None = None,
    save_graph: bool = False,
) -> tuple[MetricsReport, DegreeDistribution, BlockSizeDistribution]:
    """Corpus file to concept network to statistics; writes ``report.json``,
    ``report.csv``, ``degdist.tsv`` and ``blocksizes.csv`` when ``output`` is set."""
    corpus = filter_generic(read_corpus(corpus_path), exclude_generic)
    if corpus.article_count == 0:
        raise InputError(f"{corpus_path}: corpus is empty")
    g = project_concepts(build_bipartite(corpus))
    rep = full_report(g)
    dd = degree_distribution(g)
    blocks = block_size_histogram(corpus)
    if output is not None:
        out = Path(output)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(rep.to_json(), encoding="utf-8")
        (out / "report.csv").write_text(rep.to_csv(), encoding="utf-8")
        dd.write_tsv(out / "degdist.tsv")
        blocks.write_csv(out / "blocksizes.csv")
        if save_graph:
            write_edgelist(g, out / "concepts.edges")
    return rep, dd, blocks
