"""Immutable simple undirected graphs on vertices ``0..n-1``.

Adjacency is stored in CSR form (``indptr``, ``indices``) with each row
sorted, alongside the canonical edge array: one row ``(u, v)`` per edge with
``u < v``, rows in lexicographic order.  All arrays are read-only.
"""

from collections import namedtuple

import numba
import numpy as np
import scipy.sparse as sp

DegreeStats = namedtuple("DegreeStats", ["min", "max", "histogram"])


class GraphError(ValueError):
    pass


def _freeze(a):
    a.setflags(write=False)
    return a


class Graph:
    __slots__ = ("n", "edges", "indptr", "indices", "_degrees", "_key")

    def __init__(self, n, edges):
        """Wrap an already canonical ``(m, 2)`` edge array.  Use
        :func:`build_graph` for untrusted input."""
        self.n = int(n)
        self.edges = _freeze(np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2))
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        order = np.lexsort((cols, rows))
        self.indices = _freeze(cols[order].astype(np.int32))
        counts = np.bincount(rows, minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self.indptr = _freeze(indptr)
        self._degrees = _freeze(counts.astype(np.int64))
        self._key = None

    @property
    def m(self):
        return len(self.edges)

    @property
    def degrees(self):
        return self._degrees

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_keys(self):
        """Edges encoded as ``u * n + v``; sorted because edges are canonical."""
        if self._key is None:
            self._key = _freeze(self.edges[:, 0] * self.n + self.edges[:, 1])
        return self._key

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def adjacency(self, dtype=np.float64):
        """Symmetric scipy CSR adjacency matrix."""
        data = np.ones(len(self.indices), dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def adjacency_sets(self):
        return [set(self.neighbors(v).tolist()) for v in range(self.n)]

    def is_regular(self, d=None):
        if self.n == 0:
            return True
        deg = self.degrees
        target = deg[0] if d is None else d
        return bool(np.all(deg == target))

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.edges, other.edges))

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _canonical_edges(n, edges):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) == 0:
        return e
    bad = (e < 0) | (e >= n)
    if bad.any():
        i = int(np.argmax(bad.any(axis=1)))
        raise GraphError(f"edge {tuple(e[i].tolist())} has an endpoint outside 0..{n - 1}")
    loops = e[:, 0] == e[:, 1]
    if loops.any():
        i = int(np.argmax(loops))
        raise GraphError(f"self-loop at vertex {int(e[i, 0])}")
    e = np.sort(e, axis=1)
    keys = np.unique(e[:, 0] * n + e[:, 1])
    return np.stack([keys // n, keys % n], axis=1)


def build_graph(n, edges):
    """Build a graph, deduplicating edges and orienting each as ``u < v``."""
    if n < 0:
        raise GraphError("n must be nonnegative")
    return Graph(n, _canonical_edges(n, edges))


def from_keys(n, keys):
    keys = np.asarray(keys, dtype=np.int64)
    return Graph(n, np.stack([keys // n, keys % n], axis=1))


def _as_vertex_set(G, X):
    X = np.unique(np.asarray(X, dtype=np.int64))
    if len(X) and (X[0] < 0 or X[-1] >= G.n):
        raise GraphError(f"vertex set contains ids outside 0..{G.n - 1}")
    return X


def induced(G, X):
    """Induced subgraph ``G[X]`` relabelled ``0..|X|-1`` in sorted order of
    ``X``.  Returns ``(subgraph, X)``; ``X[i]`` is the original id of new
    vertex ``i``."""
    X = _as_vertex_set(G, X)
    relabel = np.full(G.n, -1, dtype=np.int64)
    relabel[X] = np.arange(len(X))
    e = relabel[G.edges]
    keep = (e >= 0).all(axis=1)
    # relabelling is monotone so canonical order survives
    return Graph(len(X), e[keep]), X


def overlay(G, H, mode):
    """Edge-set union (``mode="add"``) or difference (``mode="remove"``).

    ``add`` requires disjoint edge sets and ``remove`` requires
    ``E(H) ⊆ E(G)``; violations raise :class:`GraphError` naming an edge.
    """
    if G.n != H.n:
        raise GraphError(f"vertex counts differ: {G.n} vs {H.n}")
    gk, hk = G.edge_keys(), H.edge_keys()
    present = np.isin(hk, gk, assume_unique=True)
    if mode == "add":
        if present.any():
            u, v = divmod(int(hk[np.argmax(present)]), G.n)
            raise GraphError(f"edge ({u}, {v}) already present")
        keys = np.union1d(gk, hk)
    elif mode == "remove":
        if not present.all():
            u, v = divmod(int(hk[np.argmin(present)]), G.n)
            raise GraphError(f"edge ({u}, {v}) is not in the graph")
        keys = np.setdiff1d(gk, hk, assume_unique=True)
    else:
        raise ValueError(f"mode must be 'add' or 'remove', got {mode!r}")
    return from_keys(G.n, keys)


def union(n, graphs):
    """Union of pairwise edge-disjoint graphs on ``n`` vertices."""
    keys = np.concatenate([g.edge_keys() for g in graphs]) if graphs else np.empty(0, np.int64)
    keys.sort()
    if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
        raise GraphError("graphs are not edge-disjoint")
    return from_keys(n, keys)


@numba.njit(cache=True)
def _forward_triangles(indptr, indices, first):
    # for each edge u<v count common neighbours w > v: every triangle once
    n = len(indptr) - 1
    total = 0
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v <= u:
                continue
            i = indptr[u]
            j = indptr[v]
            iend = indptr[u + 1]
            jend = indptr[v + 1]
            while i < iend and j < jend:
                a = indices[i]
                b = indices[j]
                if a < b:
                    i += 1
                elif b < a:
                    j += 1
                else:
                    if a > v:
                        if total == 0:
                            first[0] = u
                            first[1] = v
                            first[2] = a
                        total += 1
                    i += 1
                    j += 1
    return total


def triangle_count(G, witness=False):
    """Exact number of triangles by sorted-adjacency intersection.

    With ``witness=True`` returns ``(count, triangle)`` where ``triangle`` is
    the first triangle found in vertex order, or ``None``.
    """
    first = np.full(3, -1, dtype=np.int64)
    count = int(_forward_triangles(G.indptr, G.indices, first))
    if witness:
        return count, (tuple(int(x) for x in first) if count else None)
    return count


def degree_stats(G):
    deg = G.degrees
    if G.n == 0:
        return DegreeStats(0, 0, {})
    values, counts = np.unique(deg, return_counts=True)
    return DegreeStats(int(deg.min()), int(deg.max()),
                       {int(d): int(c) for d, c in zip(values, counts)})


def is_independent(G, X):
    X = _as_vertex_set(G, X)
    mask = np.zeros(G.n, dtype=bool)
    mask[X] = True
    return not bool((mask[G.edges[:, 0]] & mask[G.edges[:, 1]]).any())


def max_degree(G):
    return int(G.degrees.max()) if G.n else 0


def connected_components(G):
    """Component label per vertex (labels ordered by smallest member)."""
    from scipy.sparse.csgraph import connected_components as cc

    _, labels = cc(G.adjacency(dtype=np.int8), directed=False)
    # relabel so component ids follow first appearance
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    return remap[labels]
