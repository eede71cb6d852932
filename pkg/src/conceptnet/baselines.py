"""Reference random-graph generators: fixed-size Erdős–Rényi and linear
preferential attachment (Barabási–Albert)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ConfigError
from .graph import Graph

__all__ = ["BaConfig", "ErConfig", "barabasi_albert", "erdos_renyi"]


@dataclass(frozen=True)
class ErConfig:
    N: int
    L: int
    seed: int = 0

    def __post_init__(self):
        if self.N < 0 or self.L < 0:
            raise ConfigError("N and L must be non-negative")
        if self.L > self.N * (self.N - 1) // 2:
            raise ConfigError(
                f"L={self.L} exceeds the {self.N * (self.N - 1) // 2} possible links on N={self.N} nodes"
            )


@dataclass(frozen=True)
class BaConfig:
    m0: int
    m: int
    steps: int
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.m0 < 1:
            raise ConfigError("m and m0 must be positive")
        if self.m > self.m0:
            raise ConfigError(f"m={self.m} must not exceed m0={self.m0}")
        if self.steps < 1:
            raise ConfigError("steps must be at least 1")


def _random_links(n: int, links: int, rng: np.random.Generator) -> Graph:
    g = Graph(n)
    need = links
    while need > 0:
        batch = int(need * 1.1) + 64
        pairs = rng.integers(0, n, size=(2, batch))
        added = K.insert_until(g._bits, g._deg, pairs[0], pairs[1], need)
        g._links += added
        need -= added
    return g


def erdos_renyi(config: ErConfig) -> Graph:
    """Uniform random graph with exactly ``L`` links on ``N`` nodes.

    Ordered pairs are drawn i.i.d. and kept on first sight (loops and repeats
    rejected) until ``L`` distinct links exist, which makes every L-subset of
    pairs equally likely. Above half saturation the complement is drawn
    instead, to keep rejection cheap.
    """
    rng = np.random.default_rng(config.seed)
    n, links = config.N, config.L
    possible = n * (n - 1) // 2
    if links > possible // 2:
        return _random_links(n, possible - links, rng).complement()
    return _random_links(n, links, rng)


def barabasi_albert(config: BaConfig) -> Graph:
    """Grow from ``m0`` isolated nodes; each arrival links to ``m`` distinct
    existing nodes drawn with probability proportional to degree.

    Distinct targets come from repeated degree-proportional draws with
    duplicates rejected. While every existing node has degree zero the draws
    are uniform instead.
    """
    rng = np.random.default_rng(config.seed)
    m0, m, steps = config.m0, config.m, config.steps
    n = m0 + steps
    # every link endpoint, once per link: sampling an entry is sampling ∝ degree
    ends = np.empty(2 * m * steps, dtype=np.int64)
    n_ends = 0
    src = np.repeat(np.arange(m0, n, dtype=np.int64), m)
    dst = np.empty(m * steps, dtype=np.int64)
    mark = np.zeros(n, dtype=np.bool_)
    out = np.empty(m, dtype=np.int64)
    for step in range(steps):
        new = m0 + step
        filled = 0
        while filled < m:
            batch = 2 * (m - filled) + 16
            if n_ends == 0:
                cand = rng.integers(0, new, size=batch)
            else:
                cand = ends[rng.integers(0, n_ends, size=batch)]
            filled = K.first_distinct(cand, mark, out, filled, m)
        mark[out] = False
        dst[step * m : (step + 1) * m] = out
        ends[n_ends : n_ends + m] = out
        ends[n_ends + m : n_ends + 2 * m] = new
        n_ends += 2 * m
    g = Graph(n)
    g.add_edges(src, dst)
    return g
