"""Individual stages of the regularisation pipeline."""

from collections import deque

import numpy as np

from ..graph import Graph, _as_vertex_set, build_graph, connected_components, induced, is_independent
from .flow import max_flow


class StageError(RuntimeError):
    """A stage could not meet its postcondition on this input."""

    stage = "unknown"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class SamplingError(StageError):
    stage = "sample"


class TrimError(StageError):
    stage = "trim"


class PrescribedInfeasible(StageError):
    stage = "prescribed"

    @property
    def witness(self):
        return self.details["witness"]


class SpanningTreeError(StageError):
    stage = "tree"


class ParityError(StageError):
    stage = "parity"


def sample_subset(A, n, conc_slack, rng, max_attempts=50):
    """Uniform ``n``-subset of ``V(A)`` whose induced degrees all lie within
    ``conc_slack`` of ``p n``.  Returns ``(X, attempts)``."""
    N = A.n
    if n > N:
        raise ValueError(f"cannot sample {n} of {N} vertices")
    # average degree of A scaled to n vertices; exactly p n when A is regular
    pn = 2 * A.m / N / N * n if N else 0.0
    worst = 0.0
    for attempt in range(1, max_attempts + 1):
        X = np.arange(N) if n == N else np.sort(rng.choice(N, size=n, replace=False))
        G, _ = induced(A, X)
        dev = float(np.max(np.abs(G.degrees - pn))) if n else 0.0
        if dev <= conc_slack:
            return X, attempt
        worst = max(worst, dev)
    raise SamplingError(f"no sample within the degree window after {max_attempts} attempts "
                        f"(worst deviation {worst:.2f} > {conc_slack:.2f})",
                        worst_deviation=worst)


def trim_excess(G0, S, delta):
    """Delete ``G0`` edges whose endpoints both exceed ``delta`` in ``G0 ∪ S``.

    Edges are visited once in lexicographic order.  Degrees only go down, so
    an edge that is ineligible when visited stays ineligible, and one pass is
    the same as repeatedly deleting the smallest eligible edge.  Returns
    ``(G1, W, h)`` with ``W`` the vertices still above ``delta`` and
    ``h[w]`` their excess.
    """
    if G0.n != S.n:
        raise ValueError("G0 and S must share a vertex set")
    if np.isin(S.edge_keys(), G0.edge_keys(), assume_unique=True).any():
        raise ValueError("G0 and S are not edge-disjoint")
    deg = G0.degrees + S.degrees
    if G0.n and deg.min() < delta:
        v = int(np.argmin(deg))
        raise TrimError(f"vertex {v} has degree {int(deg[v])} < delta = {delta}",
                        vertex=v, degree=int(deg[v]))
    deg = deg.tolist()
    keep = np.ones(G0.m, dtype=bool)
    for i, (u, v) in enumerate(G0.edges.tolist()):
        if deg[u] > delta and deg[v] > delta:
            keep[i] = False
            deg[u] -= 1
            deg[v] -= 1
    G1 = Graph(G0.n, G0.edges[keep])
    deg = np.asarray(deg)
    W = np.flatnonzero(deg > delta)
    h = {int(w): int(deg[w] - delta) for w in W}
    return G1, W, h


def prescribed_subgraph(G1, W, h, cap):
    """Subgraph ``F`` of the ``W``–``(V∖W)`` edges of ``G1`` with
    ``d_F(x) = h[x]`` on ``W`` and ``d_F(y) <= cap`` elsewhere.

    Solved as a max-flow: source -> x (capacity ``h[x]``), x -> y (1 per
    edge), y -> sink (``cap``).  If the demand cannot be met,
    :class:`PrescribedInfeasible` carries a Hall witness: the ``W``
    vertices on the source side of a minimum cut, whose demand exceeds what
    their neighbourhood can absorb.
    """
    n = G1.n
    W = _as_vertex_set(G1, W)
    if not is_independent(G1, W):
        raise ValueError("W must be independent in G1")
    in_w = np.zeros(n, dtype=bool)
    in_w[W] = True
    demand = np.zeros(n, dtype=np.int64)
    for x, hx in h.items():
        if not in_w[x]:
            raise ValueError(f"h given for vertex {x} outside W")
        if hx < 0:
            raise ValueError(f"h({x}) is negative")
        demand[x] = hx
    total = int(demand.sum())
    u, v = G1.edges[:, 0], G1.edges[:, 1]
    cross = in_w[u] != in_w[v]
    xs = np.where(in_w[u[cross]], u[cross], v[cross])
    ys = np.where(in_w[u[cross]], v[cross], u[cross])
    order = np.lexsort((ys, xs))
    xs, ys = xs[order], ys[order]
    src, snk = n, n + 1
    wx = W[demand[W] > 0]
    yy = np.flatnonzero(~in_w)
    tails = np.concatenate([np.full(len(wx), src), xs, yy])
    heads = np.concatenate([wx, ys, np.full(len(yy), snk)])
    caps = np.concatenate([demand[wx], np.ones(len(xs), np.int64), np.full(len(yy), cap)])
    value, flows, reach = max_flow(n + 2, tails, heads, caps, src, snk)
    if value < total:
        witness = [int(x) for x in wx if reach[x]]
        raise PrescribedInfeasible(
            f"demand {total} exceeds achievable {value}; deficient set {witness}",
            witness=witness, demand=total, achieved=value)
    used = flows[len(wx):len(wx) + len(xs)] > 0
    return build_graph(n, np.stack([xs[used], ys[used]], axis=1))


def _grow_tree(adj, vertices, root, maxdeg):
    """Bounded-degree spanning tree of the connected vertex set ``vertices``.
    Returns the tree edges; raises if some vertices cannot be attached."""
    attach_cap = max(1, maxdeg - 1)
    deg = {root: 0}
    edges = []
    queue = deque([root])

    def grow():
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if deg[u] >= attach_cap:
                    break
                if w not in deg:
                    deg[w] = 1
                    deg[u] += 1
                    edges.append((u, w))
                    queue.append(w)

    grow()
    while len(deg) < len(vertices):
        rest = [b for b in vertices if b not in deg]
        # match leftovers into tree vertices with spare capacity up to maxdeg
        bi = {b: i for i, b in enumerate(rest)}
        tree_ids = {}
        tails, heads = [], []
        for b in rest:
            for w in adj[b]:
                if w in deg and deg[w] < maxdeg:
                    j = tree_ids.setdefault(w, len(tree_ids))
                    tails.append(bi[b])
                    heads.append(len(rest) + j)
        if not tails:
            raise SpanningTreeError(f"{len(rest)} vertices cannot be attached", uncovered=rest)
        nb, nt = len(rest), len(tree_ids)
        src, snk = nb + nt, nb + nt + 1
        tree_list = sorted(tree_ids, key=tree_ids.get)
        t_all = [src] * nb + tails + [nb + j for j in range(nt)]
        h_all = list(range(nb)) + heads + [snk] * nt
        c_all = [1] * nb + [1] * len(tails) + [maxdeg - deg[w] for w in tree_list]
        _, flows, _ = max_flow(nb + nt + 2, t_all, h_all, c_all, src, snk)
        arc = flows[nb:nb + len(tails)]
        matched = 0
        for f, b_i, t_j in zip(arc, tails, heads):
            if f:
                b, w = rest[b_i], tree_list[t_j - nb]
                deg[b] = 1
                deg[w] += 1
                edges.append((w, b))
                queue.append(b)
                matched += 1
        if not matched:
            raise SpanningTreeError(f"{len(rest)} vertices cannot be attached", uncovered=rest)
        grow()
    return edges


def _sorted_adjacency(G):
    return [G.neighbors(v).tolist() for v in range(G.n)]


def bounded_spanning_tree(G2, maxdeg):
    """Spanning tree of the connected graph ``G2`` with maximum degree at most
    ``maxdeg``: greedy growth from vertex 0 attaching only to tree vertices
    of degree below ``maxdeg - 1``, then a capacitated matching of the
    leftovers into the tree, repeated until every vertex is covered."""
    if maxdeg < 2 and G2.n > 2:
        raise ValueError("maxdeg must be at least 2")
    if G2.n == 0:
        return G2
    labels = connected_components(G2)
    if labels.max() > 0:
        comps = [np.flatnonzero(labels == c).tolist() for c in range(labels.max() + 1)]
        raise SpanningTreeError(f"graph has {len(comps)} components", components=comps)
    edges = _grow_tree(_sorted_adjacency(G2), range(G2.n), 0, maxdeg)
    return build_graph(G2.n, edges)


def bounded_spanning_forest(G, maxdeg):
    """One bounded-degree spanning tree per connected component."""
    if G.n == 0:
        return G
    labels = connected_components(G)
    adj = _sorted_adjacency(G)
    edges = []
    for c in range(labels.max() + 1):
        members = np.flatnonzero(labels == c).tolist()
        edges.extend(_grow_tree(adj, members, members[0], maxdeg))
    return build_graph(G.n, edges)


def parity_subgraph(T, target, allow_forest=False):
    """Subgraph ``T'`` of the tree ``T`` whose degrees have the parities in
    ``target``.  Leaf-to-root pass: a non-root vertex keeps its parent edge
    exactly when its current parity is wrong.  Roots are the smallest
    vertex of each component."""
    n = T.n
    target = np.asarray(target, dtype=np.int64) % 2
    if target.shape != (n,):
        raise ValueError(f"target must have length {n}")
    labels = connected_components(T) if n else np.zeros(0, dtype=np.int64)
    ncomp = int(labels.max()) + 1 if n else 0
    if T.m != n - ncomp:
        raise ParityError("input is not a forest")
    if ncomp > 1 and not allow_forest:
        raise ParityError("input is not a tree (disconnected)")
    sums = np.bincount(labels, weights=target, minlength=ncomp)
    if np.any(sums % 2):
        raise ParityError("target parities have odd sum" +
                          ("" if ncomp == 1 else " on some component"))
    adj = _sorted_adjacency(T)
    parent = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    order = []
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        queue = deque([r])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    queue.append(w)
    cur = np.zeros(n, dtype=np.int64)
    keep = []
    for v in reversed(order):
        if parent[v] >= 0 and cur[v] != target[v]:
            keep.append((int(parent[v]), v))
            cur[v] ^= 1
            cur[parent[v]] ^= 1
    return build_graph(n, keep)
