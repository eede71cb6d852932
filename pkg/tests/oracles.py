"""Brute-force reference implementations, deliberately naive.

Everything here works from a plain ``set`` of frozenset links and never calls
into the package's kernels.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def adjacency(n, links):
    adj = {i: set() for i in range(n)}
    for link in links:
        u, v = tuple(link)
        adj[u].add(v)
        adj[v].add(u)
    return adj


def triangle_count(n, links):
    """O(N^3) enumeration of node triples."""
    links = {frozenset(e) for e in links}
    return sum(
        1
        for a, b, c in itertools.combinations(range(n), 3)
        if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= links
    )


def local_clustering(n, links, i):
    adj = adjacency(n, links)
    k = len(adj[i])
    if k <= 1:
        return Fraction(0)
    m = sum(1 for a, b in itertools.combinations(sorted(adj[i]), 2) if b in adj[a])
    return Fraction(2 * m, k * (k - 1))


def average_clustering(n, links):
    return sum(local_clustering(n, links, i) for i in range(n)) / n


def transitivity(n, links):
    """Closed ordered-center triplets over all triplets, by enumeration."""
    adj = adjacency(n, links)
    closed = total = 0
    for center in range(n):
        for a, b in itertools.combinations(sorted(adj[center]), 2):
            total += 1
            closed += b in adj[a]
    return None if total == 0 else Fraction(closed, total)


def assortativity(n, links):
    """Textbook Pearson correlation over both orientations of every link."""
    adj = adjacency(n, links)
    xs, ys = [], []
    for link in links:
        u, v = tuple(link)
        xs += [len(adj[u]), len(adj[v])]
        ys += [len(adj[v]), len(adj[u])]
    if not xs:
        return None
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0 or vy == 0:
        return None
    return cov / math.sqrt(vx * vy)


def degree_stats(n, links):
    adj = adjacency(n, links)
    ks = [len(adj[i]) for i in range(n)]
    mean = Fraction(sum(ks), n)
    var = sum((Fraction(k) - mean) ** 2 for k in ks) / n
    return mean, var, max(ks)


def density(n, links):
    return Fraction(2 * len(links), n * (n - 1))


def components(n, links):
    adj = adjacency(n, links)
    seen, out = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        out.append(comp)
    return out


def clique_union(blocks):
    """Link set of the union of complete graphs on each block."""
    return {frozenset(p) for b in blocks for p in itertools.combinations(sorted(set(b)), 2)}


def all_graphs(n):
    """Every labelled simple graph on n nodes."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [frozenset(p) for j, p in enumerate(pairs) if mask >> j & 1]


def sequential_without_replacement(weights, draws):
    """Exact law of the unordered set picked by ``draws`` sequential
    weight-proportional draws without replacement, by enumerating orders."""
    law = {}
    items = list(weights)
    for order in itertools.permutations(items, draws):
        p = Fraction(1)
        left = dict(weights)
        for it in order:
            p *= Fraction(left[it], sum(left.values()))
            del left[it]
        key = frozenset(order)
        law[key] = law.get(key, 0) + p
    return law
