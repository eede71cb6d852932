"""Simple undirected graph stored as a packed adjacency bit matrix.

Dense graphs are the target here: a concept network with ~10^4 nodes and up to
~30% link density. One bit per node pair costs N^2/8 bytes (about 18 MB at
N = 12,000), gives O(1) link tests, and lets the clustering kernels intersect
neighbor sets a machine word at a time.
"""

from __future__ import annotations

import os
from collections.abc import Iterable

import numpy as np

from . import _kernels as K
from .errors import InputError, ParseError

__all__ = ["Graph", "read_edgelist", "write_edgelist"]


def _words(capacity: int) -> int:
    return max(1, (capacity + 63) // 64)


class Graph:
    """Loop-free, unweighted, undirected graph on nodes ``0..N-1``.

    Nodes must be registered (``Graph(n)`` or :meth:`add_nodes`) before links
    touch them. Links are only ever added.

    Example:
        >>> g = Graph(4)
        >>> g.add_clique([0, 1, 2])
        3
        >>> g.degree(1), g.link_count
        (2, 3)
    """

    def __init__(self, n: int = 0):
        if n < 0:
            raise InputError(f"node count must be non-negative, got {n}")
        self._n = int(n)
        self._links = 0
        cap = max(64, self._n)
        self._bits = np.zeros((cap, _words(cap)), dtype=np.uint64)
        self._deg = np.zeros(cap, dtype=np.int64)

    # -- size -------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def link_count(self) -> int:
        return self._links

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"Graph(nodes={self._n}, links={self._links})"

    def add_nodes(self, count: int) -> range:
        """Register ``count`` new isolated nodes and return their ids."""
        if count < 0:
            raise InputError(f"cannot add {count} nodes")
        start = self._n
        need = start + count
        if need > self._bits.shape[0]:
            self._grow(max(need, 2 * self._bits.shape[0]))
        self._n = need
        return range(start, need)

    def _grow(self, cap: int) -> None:
        bits = np.zeros((cap, _words(cap)), dtype=np.uint64)
        old = self._bits
        bits[: old.shape[0], : old.shape[1]] = old
        deg = np.zeros(cap, dtype=np.int64)
        deg[: self._deg.shape[0]] = self._deg
        self._bits, self._deg = bits, deg

    # -- mutation ---------------------------------------------------------

    def _check_ids(self, ids: np.ndarray) -> None:
        if ids.size and (ids.min() < 0 or ids.max() >= self._n):
            bad = ids[(ids < 0) | (ids >= self._n)][0]
            raise InputError(f"unknown node {int(bad)} (graph has {self._n} nodes)")

    def add_clique(self, nodes: Iterable[int]) -> int:
        """Link every unordered pair of ``nodes``; return how many links are new."""
        ids = np.unique(np.fromiter(nodes, dtype=np.int64))
        self._check_ids(ids)
        if ids.size < 2:
            return 0
        added = K.add_clique(self._bits, self._deg, ids)
        self._links += added
        return added

    def add_edges(self, us: np.ndarray, vs: np.ndarray) -> int:
        """Bulk-insert links (us[i], vs[i]); duplicates are ignored, loops rejected."""
        us = np.ascontiguousarray(us, dtype=np.int64)
        vs = np.ascontiguousarray(vs, dtype=np.int64)
        if us.shape != vs.shape:
            raise InputError("endpoint arrays differ in length")
        self._check_ids(us)
        self._check_ids(vs)
        if np.any(us == vs):
            raise InputError("self-loops are not allowed")
        added = K.add_edges(self._bits, self._deg, us, vs)
        self._links += added
        return added

    def add_edge(self, u: int, v: int) -> bool:
        return bool(self.add_edges(np.array([u]), np.array([v])))

    # -- queries ----------------------------------------------------------

    def _node(self, u: int) -> int:
        u = int(u)
        if not 0 <= u < self._n:
            raise InputError(f"unknown node {u} (graph has {self._n} nodes)")
        return u

    def has_link(self, u: int, v: int) -> bool:
        return bool(K.has_link(self._bits, self._node(u), self._node(v)))

    def degree(self, u: int) -> int:
        return int(self._deg[self._node(u)])

    @property
    def degrees(self) -> np.ndarray:
        """Degree of every node (read-only view)."""
        view = self._deg[: self._n]
        view.flags.writeable = False
        return view

    def neighbors(self, u: int) -> np.ndarray:
        u = self._node(u)
        out = np.empty(self._deg[u], dtype=np.int64)
        K.neighbor_array(self._bits, u, out)
        return out

    def links_among_neighbors(self, u: int) -> int:
        """Number of links joining two neighbors of ``u`` (m_i)."""
        nbrs = self.neighbors(u)
        return int(K.links_among(self._bits, u, nbrs))

    def triangles_per_node(self) -> np.ndarray:
        """m_i for every node at once."""
        return K.triangles_per_node(self._bits, self._n)

    def neighbor_degree_sums(self) -> np.ndarray:
        return K.neighbor_degree_sums(self._bits, self._deg, self._n)

    def component_labels(self) -> np.ndarray:
        return K.component_labels(self._bits, self._n)

    def connected_components(self) -> list[np.ndarray]:
        """Partition of the nodes, largest component first (ties by smallest id)."""
        labels = self.component_labels()
        if labels.size == 0:
            return []
        order = np.argsort(labels, kind="stable")
        cuts = np.flatnonzero(np.diff(labels[order])) + 1
        comps = np.split(order, cuts)
        comps.sort(key=lambda c: -c.size)
        return comps

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """All links as arrays (us, vs) with us < vs, sorted lexicographically."""
        return K.edge_arrays(self._bits, self._n, self._links)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix. Only sensible for small graphs."""
        raw = self._bits[: self._n].view(np.uint8)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self._n].astype(bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if (self._n, self._links) != (other._n, other._links):
            return False
        w = _words(self._n)
        return bool(np.array_equal(self._bits[: self._n, :w], other._bits[: other._n, :w]))

    __hash__ = None  # type: ignore[assignment]

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g._n, g._links = self._n, self._links
        g._bits, g._deg = self._bits.copy(), self._deg.copy()
        return g

    def complement(self) -> Graph:
        """Graph on the same nodes linking exactly the pairs not linked here."""
        g = Graph(self._n)
        w = g._bits.shape[1]
        full = np.zeros(w, dtype=np.uint64)
        full_bytes = full.view(np.uint8)
        full_bytes[:] = np.packbits(np.arange(w * 64) < self._n, bitorder="little")
        g._bits[: self._n] = ~self._bits[: self._n, :w] & full
        idx = np.arange(self._n)
        g._bits[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
        g._deg[: self._n] = (self._n - 1) - self._deg[: self._n]
        g._links = self._n * (self._n - 1) // 2 - self._links
        return g


def write_edgelist(graph: Graph, path: str | os.PathLike) -> None:
    """Write ``#nodes=N links=L`` then one ``u<TAB>v`` line per link, u < v."""
    us, vs = graph.edges()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#nodes={graph.node_count} links={graph.link_count}\n")
        if us.size:
            np.savetxt(fh, np.column_stack([us, vs]), fmt="%d", delimiter="\t")


def read_edgelist(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            fields = dict(part.split("=", 1) for part in header.lstrip("#").split())
            n, links = int(fields["nodes"]), int(fields["links"])
        except (ValueError, KeyError):
            raise ParseError(f"bad header {header!r}", line=1, path=str(path)) from None
        try:
            data = np.loadtxt(fh, dtype=np.int64, delimiter="\t", ndmin=2)
        except ValueError as exc:
            raise ParseError(str(exc), path=str(path)) from None
    g = Graph(n)
    if data.size:
        if data.shape[1] != 2:
            raise ParseError("expected two columns", path=str(path))
        g.add_edges(data[:, 0], data[:, 1])
    if g.link_count != links:
        raise ParseError(f"header declares {links} links, found {g.link_count}", path=str(path))
    return g
