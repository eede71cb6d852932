"""Growth by blocks: each time step writes one article of n_t concepts, each
slot novel with probability ν or reused from earlier articles, and the article
joins the concept network as a clique.

Reused concepts are chosen without replacement from the concepts of earlier
articles, either uniformly (USP) or with probability proportional to the
number of earlier articles containing them (PSP). Both cases sample from a
Fenwick tree of integer weights (all ones for USP, occurrence counts for PSP),
so every slot costs O(log N) whatever the shape of the weights.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .blocks import BlockSizeDistribution
from .corpus import ArticleRecord, Corpus
from .errors import ConfigError
from .graph import Graph

__all__ = [
    "GeneratedCorpus",
    "GrowthState",
    "ModelConfig",
    "Selection",
    "generate_corpus",
    "generate_network",
    "select_concepts",
]


class Selection(str, enum.Enum):
    USP = "usp"
    PSP = "psp"


@dataclass(frozen=True)
class ModelConfig:
    article_count: int
    nu: float
    block_sizes: BlockSizeDistribution
    selection: Selection = Selection.PSP
    seed: int = 0
    realizations: int = 1
    first_slot_existing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "selection", Selection(self.selection))
        if self.article_count < 1:
            raise ConfigError("article_count must be at least 1")
        if not 0.0 <= self.nu <= 1.0:
            raise ConfigError(f"nu must lie in [0, 1], got {self.nu}")
        if self.realizations < 1:
            raise ConfigError("realizations must be at least 1")


class GrowthState:
    """Concepts seen so far and how many finished articles used each one."""

    def __init__(self, selection: Selection | str = Selection.PSP, capacity: int = 1024):
        self.selection = Selection(selection)
        self.t = 0
        self.concept_count = 0
        self.total_occurrences = 0
        self._alloc(max(1, capacity))

    def _alloc(self, cap: int) -> None:
        counts = np.zeros(cap, dtype=np.int64)
        weights = np.zeros(cap, dtype=np.int64)
        if hasattr(self, "_counts"):
            counts[: self.concept_count] = self._counts[: self.concept_count]
            weights[: self.concept_count] = self._weights[: self.concept_count]
        self._counts, self._weights = counts, weights
        self._tree = np.zeros(cap + 1, dtype=np.int64)
        K.fenwick_build(self._weights, self._tree)

    @classmethod
    def from_counts(cls, counts, selection: Selection | str = Selection.PSP) -> GrowthState:
        """A state holding concepts ``0..len(counts)-1`` with the given occurrence counts."""
        counts = np.asarray(counts, dtype=np.int64)
        if np.any(counts < 1):
            raise ConfigError("occurrence counts must be at least 1")
        st = cls(selection, capacity=max(1, counts.size))
        st.concept_count = int(counts.size)
        st.total_occurrences = int(counts.sum())
        st._counts[: counts.size] = counts
        st._weights[: counts.size] = counts if st.selection is Selection.PSP else 1
        K.fenwick_build(st._weights, st._tree)
        return st

    @property
    def occurrence_counts(self) -> np.ndarray:
        return self._counts[: self.concept_count].copy()

    @property
    def preferential(self) -> bool:
        return self.selection is Selection.PSP

    def _pool_weight(self) -> int:
        return self.total_occurrences if self.preferential else self.concept_count

    def reserve(self, extra: int) -> None:
        need = self.concept_count + extra
        if need > self._counts.size:
            self._alloc(max(need, 2 * self._counts.size))

    def commit(self, ids: np.ndarray) -> None:
        """Close the current article: count its concepts and register novel ones."""
        ids = np.asarray(ids, dtype=np.int64)
        self.reserve(ids.size)
        novel = K.commit_block(
            self._tree, self._weights, self._counts, ids, self.concept_count, self.preferential
        )
        self.concept_count += int(novel)
        self.total_occurrences += int(ids.size)
        self.t += 1


def select_concepts(
    state: GrowthState,
    n_t: int,
    nu: float,
    rng: np.random.Generator,
    first_slot_existing: bool = False,
) -> np.ndarray:
    """Fill the ``n_t`` concept slots of the next article.

    Slot i is novel with probability ``nu``; otherwise it takes a concept from
    earlier articles that this article has not used yet, uniformly or in
    proportion to occurrence counts depending on ``state.selection``. If that
    pool is empty the slot is novel instead (always the case for the first
    article). Novel slots get fresh ids ``state.concept_count, +1, ...`` in
    slot order. The state is left untouched; call :meth:`GrowthState.commit`
    with the result to advance it.

    ``first_slot_existing`` exempts slot 0 from the novelty coin, so only
    ``n_t - 1`` slots per article can be novel. Off by default.
    """
    if n_t < 1:
        raise ConfigError("block size must be at least 1")
    state.reserve(n_t)
    out = np.empty(n_t, dtype=np.int64)
    uniforms = rng.random(2 * n_t)
    K.select_block(
        state._tree,
        state._weights,
        state._pool_weight(),
        state.concept_count,
        n_t,
        nu,
        uniforms,
        out,
        first_slot_existing,
    )
    return out


@dataclass
class GeneratedCorpus:
    """Concept-id blocks, one per time step; ids are dense in order of first use."""

    articles: list[np.ndarray] = field(default_factory=list)
    concept_count: int = 0

    @property
    def article_count(self) -> int:
        return len(self.articles)

    def to_corpus(self) -> Corpus:
        """Name articles ``A1..`` and concepts ``C1..`` (id j becomes ``C{j+1}``)."""
        recs = [
            ArticleRecord(f"A{t}", tuple(f"C{j + 1}" for j in block.tolist()))
            for t, block in enumerate(self.articles, 1)
        ]
        return Corpus.from_articles(recs)

    def save(self, path: str | os.PathLike) -> None:
        self.to_corpus().save(path)

    def project(self) -> Graph:
        g = Graph(self.concept_count)
        for block in self.articles:
            g.add_clique(block)
        return g


def generate_corpus(config: ModelConfig) -> GeneratedCorpus:
    rng = np.random.default_rng(config.seed)
    state = GrowthState(
        config.selection,
        capacity=int(config.article_count * config.block_sizes.mean * max(config.nu, 0.01)) + 64,
    )
    articles = []
    for _ in range(config.article_count):
        n_t = config.block_sizes.draw(rng)
        block = select_concepts(state, n_t, config.nu, rng, config.first_slot_existing)
        state.commit(block)
        articles.append(block)
    return GeneratedCorpus(articles, state.concept_count)


def generate_network(config: ModelConfig) -> tuple[Graph, GeneratedCorpus]:
    """Generate the corpus, inserting every article into the graph as a clique."""
    gen = generate_corpus(config)
    return gen.project(), gen
