"""Concept co-occurrence networks: construction, statistics and generative models."""

from .baselines import BaConfig, ErConfig, barabasi_albert, erdos_renyi
from .blocks import BlockSizeDistribution, draw_block_size
from .corpus import (
    ArticleRecord,
    BipartiteNetwork,
    Corpus,
    block_size_histogram,
    build_bipartite,
    filter_generic,
    parse_corpus,
    project_articles,
    project_concepts,
    read_corpus,
)
from .errors import ConceptNetError, ConfigError, InputError, ParseError, UndefinedMetricError
from .graph import Graph, read_edgelist, write_edgelist
from .growth import (
    GeneratedCorpus,
    GrowthState,
    ModelConfig,
    Selection,
    generate_corpus,
    generate_network,
    select_concepts,
)
from .harness import (
    AggregateReport,
    RunSpec,
    SweepSpec,
    compare,
    ingest_and_report,
    realization_seed,
    run,
    sweep_nu,
)
from .metrics import (
    DegreeDistribution,
    MetricsReport,
    assortativity,
    average_clustering,
    degree_distribution,
    degree_stats,
    density,
    full_report,
    local_clustering,
    transitivity,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "ArticleRecord",
    "BaConfig",
    "BipartiteNetwork",
    "BlockSizeDistribution",
    "ConceptNetError",
    "ConfigError",
    "Corpus",
    "DegreeDistribution",
    "ErConfig",
    "GeneratedCorpus",
    "Graph",
    "GrowthState",
    "InputError",
    "MetricsReport",
    "ModelConfig",
    "ParseError",
    "RunSpec",
    "Selection",
    "SweepSpec",
    "UndefinedMetricError",
    "assortativity",
    "average_clustering",
    "barabasi_albert",
    "block_size_histogram",
    "build_bipartite",
    "compare",
    "degree_distribution",
    "degree_stats",
    "density",
    "draw_block_size",
    "erdos_renyi",
    "filter_generic",
    "full_report",
    "generate_corpus",
    "generate_network",
    "ingest_and_report",
    "local_clustering",
    "parse_corpus",
    "project_articles",
    "project_concepts",
    "read_corpus",
    "read_edgelist",
    "realization_seed",
    "run",
    "select_concepts",
    "sweep_nu",
    "transitivity",
    "write_edgelist",
]
