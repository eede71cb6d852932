"""Article/concept corpora, their bipartite form, and the two projections.

Corpus files are JSON lines, one article per line::

    {"id": "A1", "concepts": ["Graph", "Random graph"], "generic": ["Networks"]}

``generic`` is optional. Names listed there are flagged generic and belong to
the article even if they are not repeated under ``concepts``.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .blocks import BlockSizeDistribution
from .errors import ConfigError, InputError, ParseError
from .graph import Graph

log = logging.getLogger(__name__)

__all__ = [
    "ArticleRecord",
    "BipartiteNetwork",
    "Corpus",
    "block_size_histogram",
    "build_bipartite",
    "filter_generic",
    "parse_corpus",
    "project_articles",
    "project_concepts",
    "read_corpus",
]


@dataclass(frozen=True)
class ArticleRecord:
    article_id: str
    concepts: tuple[str, ...]
    generic_flags: tuple[bool, ...] | None = None

    def __post_init__(self):
        if not self.article_id:
            raise InputError("article id must be non-empty")
        if len(set(self.concepts)) != len(self.concepts):
            raise InputError(f"article {self.article_id!r} lists a concept twice")
        if self.generic_flags is not None and len(self.generic_flags) != len(self.concepts):
            raise InputError(f"article {self.article_id!r}: one generic flag per concept required")

    def to_json(self) -> str:
        obj: dict = {"id": self.article_id, "concepts": list(self.concepts)}
        if self.generic_flags is not None:
            obj["generic"] = [c for c, g in zip(self.concepts, self.generic_flags) if g]
        return json.dumps(obj, ensure_ascii=False)


@dataclass
class Corpus:
    """Ordered articles plus a dense concept index (first-appearance order)."""

    articles: list[ArticleRecord] = field(default_factory=list)
    concept_index: dict[str, int] = field(default_factory=dict)
    duplicate_count: int = 0

    @classmethod
    def from_articles(cls, articles: Iterable[ArticleRecord], duplicate_count: int = 0) -> Corpus:
        articles = list(articles)
        seen: set[str] = set()
        index: dict[str, int] = {}
        for a in articles:
            if a.article_id in seen:
                raise InputError(f"duplicate article id {a.article_id!r}")
            seen.add(a.article_id)
            for c in a.concepts:
                index.setdefault(c, len(index))
        return cls(articles, index, duplicate_count)

    @property
    def article_count(self) -> int:
        return len(self.articles)

    @property
    def concept_count(self) -> int:
        return len(self.concept_index)

    @property
    def concept_names(self) -> list[str]:
        return list(self.concept_index)

    def concept_ids(self, article: ArticleRecord) -> np.ndarray:
        return np.fromiter(
            (self.concept_index[c] for c in article.concepts), dtype=np.int64, count=len(article.concepts)
        )

    def block_sizes(self) -> np.ndarray:
        return np.array([len(a.concepts) for a in self.articles], dtype=np.int64)

    def write(self, fh: IO[str]) -> None:
        for a in self.articles:
            fh.write(a.to_json())
            fh.write("\n")

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            self.write(fh)


def _parse_line(text: str, lineno: int) -> tuple[ArticleRecord, int]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", line=lineno)
    aid = obj.get("id")
    if not isinstance(aid, str) or not aid.strip():
        raise ParseError("missing or empty 'id'", line=lineno)
    raw = obj.get("concepts")
    generic = obj.get("generic")
    if not isinstance(raw, list) or not all(isinstance(c, str) for c in raw):
        raise ParseError("'concepts' must be a list of strings", line=lineno)
    if generic is not None and (
        not isinstance(generic, list) or not all(isinstance(c, str) for c in generic)
    ):
        raise ParseError("'generic' must be a list of strings", line=lineno)

    names: list[str] = []
    seen: set[str] = set()
    dups = 0
    for c in raw + (generic or []):
        c = c.strip()
        if not c:
            raise ParseError("empty concept name", line=lineno)
        if c in seen:
            dups += 1
            continue
        seen.add(c)
        names.append(c)
    # a name repeated across 'concepts' and 'generic' is a flag, not a duplicate
    if generic is not None:
        gset = {g.strip() for g in generic}
        dups -= len(gset & {c.strip() for c in raw})
        flags = tuple(c in gset for c in names)
    else:
        flags = None
    return ArticleRecord(aid.strip(), tuple(names), flags), dups


def parse_corpus(lines: Iterable[str], source: str | None = None) -> Corpus:
    """Parse JSON-lines text into a :class:`Corpus`.

    Blank lines are skipped. Concepts repeated inside one article are kept
    once and counted in ``Corpus.duplicate_count``.

    Raises:
        ParseError: malformed line (carries the 1-based line number).
        InputError: repeated article id.
    """
    articles: list[ArticleRecord] = []
    ids: set[str] = set()
    dups = 0
    for lineno, text in enumerate(lines, 1):
        if not text.strip():
            continue
        try:
            rec, d = _parse_line(text, lineno)
        except ParseError as exc:
            exc.path = source
            raise
        if rec.article_id in ids:
            raise InputError(
                f"{source + ': ' if source else ''}line {lineno}: duplicate article id {rec.article_id!r}"
            )
        ids.add(rec.article_id)
        articles.append(rec)
        dups += d
    if dups:
        log.warning("collapsed %d repeated in-article concept(s)", dups)
    return Corpus.from_articles(articles, duplicate_count=dups)


def read_corpus(path: str | os.PathLike) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, source=str(path))


def filter_generic(corpus: Corpus, exclude: bool = True) -> Corpus:
    """Drop every concept flagged generic in any article.

    Articles left without concepts are kept, so the article count is unchanged.
    """
    if not exclude:
        return corpus
    missing = [a.article_id for a in corpus.articles if a.generic_flags is None]
    if missing:
        raise ConfigError(f"generic flags missing for {len(missing)} article(s), e.g. {missing[0]!r}")
    generic = {c for a in corpus.articles for c, g in zip(a.concepts, a.generic_flags) if g}
    kept = [
        ArticleRecord(a.article_id, tuple(c for c in a.concepts if c not in generic), None)
        for a in corpus.articles
    ]
    return Corpus.from_articles(kept)


@dataclass
class BipartiteNetwork:
    """Two-mode network; links only run between an article and a concept."""

    article_nodes: list[str]
    concept_nodes: list[str]
    article_of_link: np.ndarray
    concept_of_link: np.ndarray

    @property
    def link_count(self) -> int:
        return int(self.article_of_link.size)

    def cross_links(self) -> Iterator[tuple[str, str]]:
        for a, c in zip(self.article_of_link.tolist(), self.concept_of_link.tolist()):
            yield self.article_nodes[a], self.concept_nodes[c]

    def _groups(self, by: np.ndarray, other: np.ndarray, count: int) -> list[np.ndarray]:
        order = np.lexsort((other, by))
        bounds = np.searchsorted(by[order], np.arange(count + 1))
        members = other[order]
        return [members[bounds[i] : bounds[i + 1]] for i in range(count)]

    def concepts_by_article(self) -> list[np.ndarray]:
        return self._groups(self.article_of_link, self.concept_of_link, len(self.article_nodes))

    def articles_by_concept(self) -> list[np.ndarray]:
        return self._groups(self.concept_of_link, self.article_of_link, len(self.concept_nodes))


def build_bipartite(corpus: Corpus) -> BipartiteNetwork:
    sizes = corpus.block_sizes()
    art = np.repeat(np.arange(corpus.article_count, dtype=np.int64), sizes)
    if corpus.articles:
        con = np.concatenate([corpus.concept_ids(a) for a in corpus.articles])
    else:
        con = np.empty(0, dtype=np.int64)
    return BipartiteNetwork([a.article_id for a in corpus.articles], corpus.concept_names, art, con)


def _project(groups: list[np.ndarray], n: int) -> Graph:
    g = Graph(n)
    for members in groups:
        if members.size > 1:
            g.add_clique(members)
    return g


def project_concepts(bipartite: BipartiteNetwork) -> Graph:
    """Concept network: one node per concept, a link per co-occurring pair."""
    return _project(bipartite.concepts_by_article(), len(bipartite.concept_nodes))


def project_articles(bipartite: BipartiteNetwork) -> Graph:
    """Article network: articles linked when they share at least one concept."""
    return _project(bipartite.articles_by_concept(), len(bipartite.article_nodes))


def block_size_histogram(corpus: Corpus) -> BlockSizeDistribution:
    """Empirical distribution of concepts per article.

    Articles with no concepts are left out since block sizes are positive.
    """
    if not corpus.articles:
        raise InputError("cannot build a block-size histogram from an empty corpus")
    counts = Counter(n for n in corpus.block_sizes().tolist() if n > 0)
    if not counts:
        raise InputError("every article in the corpus is empty")
    return BlockSizeDistribution.empirical(counts)
