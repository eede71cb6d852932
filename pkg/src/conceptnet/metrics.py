"""Structural statistics of a concept network.

Reductions are exact where possible: degree moments, assortativity and
transitivity are accumulated as integers and divided once at the end, and the
mean clustering coefficient uses ``math.fsum`` in node order. Results therefore
do not depend on evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import operator
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import UndefinedMetricError
from .graph import Graph

__all__ = [
    "DegreeDistribution",
    "MetricsReport",
    "TABLE_COLUMNS",
    "assortativity",
    "average_clustering",
    "degree_distribution",
    "degree_stats",
    "density",
    "full_report",
    "local_clustering",
    "transitivity",
]

# Table column order used by every CSV/markdown rendering.
TABLE_COLUMNS = ("N", "L", "rho_percent", "mean_k", "sigma", "k_max", "r", "avg_c", "T")
UNDEF = "undef"


def density(graph: Graph) -> float:
    n = graph.node_count
    if n < 2:
        raise UndefinedMetricError("link density needs at least two nodes")
    return 2 * graph.link_count / (n * (n - 1))


def degree_stats(graph: Graph) -> tuple[float, float, int]:
    """Mean, population standard deviation and maximum of the node degrees."""
    n = graph.node_count
    if n < 1:
        raise UndefinedMetricError("degree statistics need at least one node")
    k = graph.degrees
    s1 = int(k.sum())
    s2 = int(np.dot(k, k))
    var_num = n * s2 - s1 * s1  # n^2 * population variance, exact
    return s1 / n, math.sqrt(var_num) / n, int(k.max())


def local_clustering(graph: Graph, node: int) -> float:
    """c_i = 2 m_i / (k_i (k_i - 1)); zero when k_i <= 1."""
    k = graph.degree(node)
    if k <= 1:
        return 0.0
    return 2 * graph.links_among_neighbors(node) / (k * (k - 1))


def _clustering_parts(graph: Graph, triangles: np.ndarray | None = None):
    k = graph.degrees.astype(np.int64)
    m = graph.triangles_per_node() if triangles is None else triangles
    return k, m


def average_clustering(graph: Graph, triangles: np.ndarray | None = None) -> float:
    """Mean of c_i over all N nodes, nodes with k_i <= 1 contributing 0."""
    n = graph.node_count
    if n < 1:
        raise UndefinedMetricError("average clustering needs at least one node")
    k, m = _clustering_parts(graph, triangles)
    pairs = k * (k - 1)
    c = np.zeros(n, dtype=np.float64)
    ok = pairs > 0
    c[ok] = 2 * m[ok] / pairs[ok]
    return math.fsum(c.tolist()) / n


def transitivity(graph: Graph, triangles: np.ndarray | None = None) -> float:
    """Closed triplets over all triplets: 3 * triangles / sum_i C(k_i, 2)."""
    k, m = _clustering_parts(graph, triangles)
    triplets = int((k * (k - 1) // 2).sum())
    if triplets == 0:
        raise UndefinedMetricError("transitivity is undefined without connected triplets")
    return int(m.sum()) / triplets


def assortativity(graph: Graph) -> float:
    """Pearson correlation of the degrees at the two ends of each link.

    Each link enters in both orientations, so both marginals coincide. With
    M = 2L, A = sum over ordered pairs of k_u k_v, B = sum_i k_i^2 and
    C = sum_i k_i^3:  r = (M A - B^2) / (M C - B^2).
    """
    if graph.link_count == 0:
        raise UndefinedMetricError("assortativity needs at least one link")
    k = graph.degrees.astype(np.int64)
    nbr = graph.neighbor_degree_sums()
    M = 2 * graph.link_count
    # python ints: these sums overflow int64 beyond ~5e4 nodes
    ks = k.tolist()
    A = sum(map(operator.mul, ks, nbr.tolist()))
    B = sum(x * x for x in ks)
    C = sum(x * x * x for x in ks)
    den = M * C - B * B
    if den == 0:
        raise UndefinedMetricError("endpoint degrees have zero variance")
    return (M * A - B * B) / den


@dataclass
class DegreeDistribution:
    """Unbinned P(k) and P_cum(k) = sum_{k' >= k} P(k') over observed degrees."""

    degrees: np.ndarray
    pk: np.ndarray
    cumulative: np.ndarray

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.degrees.tolist(), self.pk.tolist()))

    def to_tsv(self) -> str:
        lines = [
            f"{k}\t{p!r}\t{c!r}"
            for k, p, c in zip(self.degrees.tolist(), self.pk.tolist(), self.cumulative.tolist())
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def write_tsv(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_tsv())


def degree_distribution(graph: Graph) -> DegreeDistribution:
    n = graph.node_count
    if n < 1:
        raise UndefinedMetricError("degree distribution needs at least one node")
    counts = np.bincount(graph.degrees)
    ks = np.flatnonzero(counts)
    c = counts[ks]
    # tail sums in integers, then one division each
    tail = np.cumsum(c[::-1])[::-1]
    return DegreeDistribution(ks, c / n, tail / n)


@dataclass
class MetricsReport:
    """One row of structural statistics. ``None`` marks an undefined metric."""

    N: int
    L: int
    rho: float | None
    mean_k: float
    sigma: float
    k_max: int
    r: float | None
    avg_c: float
    T: float | None
    component_sizes: list[int] = field(default_factory=list)

    @property
    def rho_percent(self) -> float | None:
        return None if self.rho is None else 100 * self.rho

    def row(self) -> dict:
        """Values keyed by :data:`TABLE_COLUMNS`."""
        return {c: (self.rho_percent if c == "rho_percent" else getattr(self, c)) for c in TABLE_COLUMNS}

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> MetricsReport:
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        w.writerow(
            [UNDEF if v is None else repr(v) if isinstance(v, float) else v for v in self.row().values()]
        )
        return buf.getvalue()


def full_report(graph: Graph) -> MetricsReport:
    """Every statistic at once, sharing the triangle count between ⟨c⟩ and T."""
    if graph.node_count < 2:
        raise UndefinedMetricError("a report needs at least two nodes")
    mean_k, sigma, k_max = degree_stats(graph)
    tri = graph.triangles_per_node()

    def maybe(fn, *args):
        try:
            return fn(*args)
        except UndefinedMetricError:
            return None

    sizes = sorted((c.size for c in graph.connected_components()), reverse=True)
    return MetricsReport(
        N=graph.node_count,
        L=graph.link_count,
        rho=density(graph),
        mean_k=mean_k,
        sigma=sigma,
        k_max=k_max,
        r=maybe(assortativity, graph),
        avg_c=average_clustering(graph, tri),
        T=maybe(transitivity, graph, tri),
        component_sizes=[int(s) for s in sizes],
    )
