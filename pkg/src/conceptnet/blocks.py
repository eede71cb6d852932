"""Distributions of block sizes n_t (concepts per article)."""

from __future__ import annotations

import csv
import io
import math
import os
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats

from .errors import ConfigError, InputError, ParseError

__all__ = ["BlockSizeDistribution", "draw_block_size"]


@dataclass(frozen=True, eq=False)
class BlockSizeDistribution:
    """A discrete law over positive block sizes.

    ``kind`` is ``"fixed"``, ``"empirical"`` or ``"lognormal"``; ``params``
    records how it was built (used for config round-trips). Construct through
    the classmethods rather than directly.
    """

    kind: str
    support: np.ndarray
    probabilities: np.ndarray
    params: dict = field(default_factory=dict)
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probabilities, dtype=np.float64)
        if support.ndim != 1 or support.size == 0 or support.shape != probs.shape:
            raise ConfigError("block-size support and probabilities must be equal-length 1-d arrays")
        if np.any(support < 1):
            raise ConfigError("block sizes must be positive integers")
        if np.unique(support).size != support.size:
            raise ConfigError("block-size support has repeated values")
        if np.any(probs < 0) or abs(math.fsum(probs) - 1.0) > 1e-9:
            raise ConfigError("block-size probabilities must be non-negative and sum to 1")
        order = np.argsort(support)
        support, probs = support[order], probs[order]
        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "_cdf", cdf)

    # -- constructors -----------------------------------------------------

    @classmethod
    def fixed(cls, n: int) -> BlockSizeDistribution:
        if int(n) != n or n < 1:
            raise ConfigError(f"fixed block size must be a positive integer, got {n}")
        return cls("fixed", np.array([int(n)]), np.array([1.0]), {"n": int(n)})

    @classmethod
    def empirical(cls, weights: Mapping[int, float], source: str | None = None) -> BlockSizeDistribution:
        """Normalise a histogram ``{n: count or weight}``; zero-weight sizes are dropped."""
        items = sorted((int(k), float(v)) for k, v in weights.items() if v > 0)
        if not items:
            raise InputError("empty block-size histogram")
        support = np.array([k for k, _ in items])
        w = np.array([v for _, v in items])
        params = {"source": source} if source else {}
        return cls("empirical", support, w / math.fsum(w), params)

    @classmethod
    def lognormal(cls, mean: float = 37.0, sigma: float = 0.8, tail: float = 1e-12) -> BlockSizeDistribution:
        """Discretised log-normal with an exact target mean.

        Block size ``n`` gets the continuous mass of ``[n - 0.5, n + 0.5)``,
        except that size 1 takes everything below 1.5. The support is cut where the upper
        tail drops below ``tail``. The log-location is solved numerically so
        the discrete mean equals ``mean``. This is a stand-in for a measured
        histogram, not a fitted one.
        """
        if mean <= 1 or sigma <= 0:
            raise ConfigError("lognormal block sizes need mean > 1 and sigma > 0")

        def pmf(mu):
            dist = stats.lognorm(s=sigma, scale=math.exp(mu))
            top = max(2, int(math.ceil(dist.isf(tail))))
            edges = np.arange(1, top + 1) + 0.5
            cdf = dist.cdf(edges)
            p = np.diff(np.concatenate([[0.0], cdf]))
            return np.arange(1, top + 1), p / p.sum()

        def gap(mu):
            n, p = pmf(mu)
            return float(np.dot(n, p)) - mean

        mu0 = math.log(mean) - sigma**2 / 2
        mu = optimize.brentq(gap, mu0 - 2.0, mu0 + 2.0, xtol=1e-13)
        n, p = pmf(mu)
        keep = p > 0
        return cls("lognormal", n[keep], p[keep] / p[keep].sum(), {"mean": mean, "sigma": sigma})

    @classmethod
    def parse(cls, text: str) -> BlockSizeDistribution:
        """Build from ``fixed:37``, ``empirical:<csv path>`` or ``lognormal:<mean>,<sigma>``."""
        kind, _, arg = text.partition(":")
        try:
            if kind == "fixed":
                return cls.fixed(int(arg))
            if kind == "empirical":
                return cls.read_csv(arg)
            if kind == "lognormal":
                parts = [float(x) for x in arg.split(",")] if arg else []
                return cls.lognormal(*parts)
        except ValueError as exc:
            if isinstance(exc, (ConfigError, InputError)):
                raise
            raise ConfigError(f"bad block-size spec {text!r}: {exc}") from None
        raise ConfigError(f"unknown block-size spec {text!r}; expected fixed:, empirical: or lognormal:")

    def spec(self) -> str:
        """Inverse of :meth:`parse` where possible."""
        if self.kind == "fixed":
            return f"fixed:{self.params['n']}"
        if self.kind == "lognormal":
            return f"lognormal:{self.params['mean']},{self.params['sigma']}"
        if "source" in self.params:
            return f"empirical:{self.params['source']}"
        return "empirical"

    # -- io ---------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "probability"])
        for n, p in zip(self.support.tolist(), self.probabilities.tolist()):
            w.writerow([n, repr(p)])
        return buf.getvalue()

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())

    @classmethod
    def read_csv(cls, path: str | os.PathLike) -> BlockSizeDistribution:
        weights: dict[int, float] = {}
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, 1):
                if not row or (lineno == 1 and row[0].strip() == "n"):
                    continue
                try:
                    n, p = int(row[0]), float(row[1])
                except (ValueError, IndexError):
                    raise ParseError(
                        f"expected 'n,probability', got {row!r}", line=lineno, path=str(path)
                    ) from None
                if n < 1 or p < 0:
                    raise ParseError(
                        "sizes must be positive and weights non-negative", line=lineno, path=str(path)
                    )
                weights[n] = weights.get(n, 0.0) + p
        return cls.empirical(weights, source=str(path))

    # -- stats ------------------------------------------------------------

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probabilities))

    @property
    def max_size(self) -> int:
        return int(self.support[-1])

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.support.tolist(), self.probabilities.tolist()))

    def draw(self, rng: np.random.Generator, size: int | None = None):
        """Sample i.i.d. block sizes; the fixed kind consumes no randomness."""
        if self.support.size == 1:
            n = int(self.support[0])
            return n if size is None else np.full(size, n, dtype=np.int64)
        idx = np.searchsorted(self._cdf, rng.random(size), side="right")
        if size is None:
            return int(self.support[min(int(idx), self.support.size - 1)])
        return self.support[np.minimum(idx, self.support.size - 1)]


def draw_block_size(block_sizes: BlockSizeDistribution, rng: np.random.Generator) -> int:
    return block_sizes.draw(rng)
