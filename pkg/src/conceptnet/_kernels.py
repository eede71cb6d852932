"""Numba kernels over the packed adjacency bit matrix.

Row ``u`` of ``bits`` is a little-endian bitset over node ids: bit ``v & 63`` of
word ``v >> 6`` is set iff link (u, v) exists. Padding bits are always zero.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(inline="always")
def _lowbit_index(x):
    low = x & (~x + _ONE)
    return _popcount(low - _ONE), low


@njit(inline="always")
def _bit(v):
    return _ONE << np.uint64(v & 63)


@njit(cache=True)
def has_link(bits, u, v):
    return (bits[u, v >> 6] & _bit(v)) != 0


@njit(cache=True)
def add_clique(bits, degrees, nodes):
    """Link every pair in ``nodes`` (distinct ids); return the number of new links."""
    added = 0
    n = nodes.shape[0]
    for a in range(n):
        u = nodes[a]
        for b in range(a + 1, n):
            v = nodes[b]
            m = _bit(v)
            if bits[u, v >> 6] & m == 0:
                bits[u, v >> 6] |= m
                bits[v, u >> 6] |= _bit(u)
                degrees[u] += 1
                degrees[v] += 1
                added += 1
    return added


@njit(cache=True)
def add_edges(bits, degrees, us, vs):
    added = 0
    for e in range(us.shape[0]):
        u = us[e]
        v = vs[e]
        m = _bit(v)
        if bits[u, v >> 6] & m == 0:
            bits[u, v >> 6] |= m
            bits[v, u >> 6] |= _bit(u)
            degrees[u] += 1
            degrees[v] += 1
            added += 1
    return added


@njit(cache=True)
def insert_until(bits, degrees, us, vs, need):
    """Insert candidate pairs in order, skipping loops and duplicates, until ``need``
    new links exist. Returns the number of new links inserted."""
    added = 0
    for e in range(us.shape[0]):
        if added == need:
            break
        u = us[e]
        v = vs[e]
        if u == v:
            continue
        m = _bit(v)
        if bits[u, v >> 6] & m == 0:
            bits[u, v >> 6] |= m
            bits[v, u >> 6] |= _bit(u)
            degrees[u] += 1
            degrees[v] += 1
            added += 1
    return added


@njit(cache=True)
def links_among(bits, node, neighbors):
    total = 0
    W = bits.shape[1]
    for j in range(neighbors.shape[0]):
        v = neighbors[j]
        for w in range(W):
            total += _popcount(bits[node, w] & bits[v, w])
    return total // 2


@njit(cache=True)
def neighbor_array(bits, u, out):
    k = 0
    for w in range(bits.shape[1]):
        x = bits[u, w]
        while x:
            i, low = _lowbit_index(x)
            out[k] = w * 64 + i
            k += 1
            x ^= low
    return k


@njit(cache=True)
def triangles_per_node(bits, n):
    """Return m_i, the number of links among the neighbors of each node.

    Each link (u, v) with u < v is visited once; the common-neighbor count is
    credited to both endpoints, so every triangle at i is counted twice.
    """
    W = bits.shape[1]
    t = np.zeros(n, np.int64)
    for u in range(n):
        w0 = u >> 6
        for w in range(w0, W):
            x = bits[u, w]
            if w == w0:
                # keep bits strictly above u
                x &= (~np.uint64(0) << np.uint64(u & 63)) << _ONE
            while x:
                i, low = _lowbit_index(x)
                v = w * 64 + i
                x ^= low
                c = 0
                for q in range(W):
                    c += _popcount(bits[u, q] & bits[v, q])
                t[u] += c
                t[v] += c
    return t // 2


@njit(cache=True)
def neighbor_degree_sums(bits, degrees, n):
    W = bits.shape[1]
    s = np.zeros(n, np.int64)
    for u in range(n):
        acc = 0
        for w in range(W):
            x = bits[u, w]
            while x:
                i, low = _lowbit_index(x)
                acc += degrees[w * 64 + i]
                x ^= low
        s[u] = acc
    return s


@njit(cache=True)
def component_labels(bits, n):
    """Breadth-first labelling; labels are assigned in order of smallest member."""
    W = bits.shape[1]
    labels = np.full(n, -1, np.int64)
    unseen = np.zeros(W, np.uint64)
    for v in range(n):
        unseen[v >> 6] |= _bit(v)
    queue = np.empty(n, np.int64)
    label = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = label
        unseen[s >> 6] &= ~_bit(s)
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for w in range(W):
                x = bits[u, w] & unseen[w]
                if x == 0:
                    continue
                unseen[w] &= ~x
                while x:
                    i, low = _lowbit_index(x)
                    v = w * 64 + i
                    labels[v] = label
                    queue[tail] = v
                    tail += 1
                    x ^= low
        label += 1
    return labels


@njit(cache=True)
def edge_arrays(bits, n, links):
    us = np.empty(links, np.int64)
    vs = np.empty(links, np.int64)
    k = 0
    W = bits.shape[1]
    for u in range(n):
        w0 = u >> 6
        for w in range(w0, W):
            x = bits[u, w]
            if w == w0:
                x &= (~np.uint64(0) << np.uint64(u & 63)) << _ONE
            while x:
                i, low = _lowbit_index(x)
                us[k] = u
                vs[k] = w * 64 + i
                k += 1
                x ^= low
    return us, vs


@njit(cache=True)
def first_distinct(values, mark, out, filled, m):
    """Append values not yet marked to ``out`` until it holds ``m`` entries.

    Returns the new fill level. ``mark`` must be cleared by the caller afterwards.
    """
    for j in range(values.shape[0]):
        if filled == m:
            break
        x = values[j]
        if not mark[x]:
            mark[x] = True
            out[filled] = x
            filled += 1
    return filled


# Fenwick tree over non-negative integer weights, 1-based internally.


@njit(cache=True)
def fenwick_build(weights, tree):
    n = tree.shape[0] - 1
    tree[:] = 0
    for i in range(weights.shape[0]):
        tree[i + 1] = weights[i]
    for i in range(1, n + 1):
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]


@njit(cache=True)
def fenwick_add(tree, index, delta):
    n = tree.shape[0] - 1
    i = index + 1
    while i <= n:
        tree[i] += delta
        i += i & -i


@njit(cache=True)
def fenwick_find(tree, target):
    """Smallest index whose inclusive prefix sum exceeds ``target``."""
    n = tree.shape[0] - 1
    pos = 0
    step = 1
    while step * 2 <= n:
        step *= 2
    while step > 0:
        nxt = pos + step
        if nxt <= n and tree[nxt] <= target:
            pos = nxt
            target -= tree[nxt]
        step //= 2
    return pos


@njit(cache=True)
def select_block(tree, weights, total, n_existing, n_t, nu, uniforms, out, first_existing):
    """Fill ``n_t`` slots, each novel with probability ``nu`` or drawn from the
    remaining existing pool proportionally to ``weights``. With
    ``first_existing`` slot 0 skips the novelty coin.

    Selected existing concepts are removed from the tree for the rest of the
    block and restored before returning, so the tree is unchanged on exit.
    Novel slots get ids ``n_existing, n_existing + 1, ...`` in slot order.
    ``uniforms`` holds two draws per slot. Returns the number of novel slots.
    """
    remaining = total
    novel = 0
    for i in range(n_t):
        coin = uniforms[2 * i] < nu and not (first_existing and i == 0)
        if coin or remaining == 0:
            out[i] = n_existing + novel
            novel += 1
            continue
        target = np.int64(uniforms[2 * i + 1] * remaining)
        if target >= remaining:
            target = remaining - 1
        c = fenwick_find(tree, target)
        out[i] = c
        fenwick_add(tree, c, -weights[c])
        remaining -= weights[c]
    for i in range(n_t):
        c = out[i]
        if c < n_existing:
            fenwick_add(tree, c, weights[c])
    return novel


@njit(cache=True)
def commit_block(tree, weights, counts, ids, n_existing, preferential):
    """Record one finished block: bump occurrence counts and register novel ids."""
    added = 0
    for j in range(ids.shape[0]):
        c = ids[j]
        counts[c] += 1
        if c >= n_existing:
            weights[c] = 1
            fenwick_add(tree, c, 1)
            added += 1
        elif preferential:
            weights[c] += 1
            fenwick_add(tree, c, 1)
    return added
