"""Degree-adjusting graphs built from edge-disjoint pentagons.

A pentagon ``anchor-a-x-y-b-anchor`` splits into

* ``S_C = {anchor a, anchor b, x y}``: a path of length two centred on the
  anchor plus a disjoint edge, and
* ``R_C = {a x, y b}``: a perfect matching of the four other vertices.

Every non-anchor vertex has degree 1 in both parts, the anchor has degree 2
in ``S_C`` and 0 in ``R_C``.  Swapping ``S_C`` for ``R_C`` therefore lowers
the anchor's degree by exactly two and leaves everything else alone.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, from_keys


class SpongeInfeasible(RuntimeError):
    def __init__(self, vertex, achieved, required):
        super().__init__(f"vertex {vertex} reached {achieved} of {required} anchored pentagons")
        self.vertex = vertex
        self.achieved = achieved
        self.required = required


@dataclass(frozen=True)
class Pentagon:
    """Cycle ``vertices[0]-vertices[1]-...-vertices[4]-vertices[0]``;
    ``vertices[0]`` is the anchor."""

    vertices: tuple

    @property
    def anchor(self):
        return self.vertices[0]

    def cycle_edges(self):
        c = self.vertices
        return [_edge(c[i], c[(i + 1) % 5]) for i in range(5)]

    def s_edges(self):
        g, a, x, y, b = self.vertices
        return [_edge(g, a), _edge(g, b), _edge(x, y)]

    def r_edges(self):
        g, a, x, y, b = self.vertices
        return [_edge(a, x), _edge(y, b)]


def _edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SpongeConfig:
    per_vertex_min: int
    rs_maxdeg: int
    phase_edge_factor: int
    phase_maxdeg: int
    bundle_target: int
    max_passes: int = 8
    # a vertex joins as a non-anchor only while deg_G - d_R stays above this
    r_floor: int = 0

    def __post_init__(self):
        for name in ("per_vertex_min", "rs_maxdeg", "phase_edge_factor", "phase_maxdeg",
                     "bundle_target", "max_passes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.r_floor < 0:
            raise ValueError("r_floor must be nonnegative")
        if self.rs_maxdeg < 2 * self.phase_maxdeg:
            raise ValueError("rs_maxdeg must be at least 2 * phase_maxdeg")

    @classmethod
    def desk(cls, pn):
        pvm = 2
        # average pentagon-degree is 10 * pvm, leave headroom above it
        phase = max(math.ceil(pn / 2), 12 * pvm)
        return cls(per_vertex_min=pvm, rs_maxdeg=2 * phase, phase_edge_factor=10 * pvm,
                   phase_maxdeg=phase, bundle_target=max(3, math.ceil(pn / 100)),
                   r_floor=max(0, round(pn) - 4 * pvm - 4))

    @classmethod
    def paper(cls, n, pn):
        s = n ** 0.1
        return cls(per_vertex_min=math.ceil(s), rs_maxdeg=math.floor(600 * s),
                   phase_edge_factor=math.floor(50 * s), phase_maxdeg=math.floor(300 * s),
                   bundle_target=max(1, math.floor(pn / 100)))


@dataclass(frozen=True)
class Sponge:
    R: Graph
    S: Graph
    collections: dict = field(repr=False)
    config: SpongeConfig = None

    @property
    def pentagons(self):
        return [c for v in sorted(self.collections) for c in self.collections[v]]

    def quota(self, v):
        return len(self.collections.get(v, ()))


def _find_bundle(adj, in_x, v, t, forbidden=()):
    """Up to ``t`` pentagons through ``v`` in ``adj`` whose other vertices lie
    in ``in_x`` and which pairwise share only ``v``."""
    used = set(forbidden)
    used.add(v)
    found = []
    nbrs = sorted(u for u in adj[v] if in_x[u])
    for i, a in enumerate(nbrs):
        if len(found) == t:
            break
        if a in used:
            continue
        for b in nbrs[i + 1:]:
            if b in used or a in used:
                continue
            nb_b = adj[b]
            hit = None
            for x in sorted(adj[a]):
                if x in used or not in_x[x] or x == b:
                    continue
                ys = [y for y in adj[x] & nb_b if y not in used and in_x[y] and y != a]
                if ys:
                    hit = (x, min(ys))
                    break
            if hit is None:
                continue
            x, y = hit
            found.append(Pentagon((v, a, x, y, b)))
            used.update((a, b, x, y))
            break
    return found


def c5_bundle(G, X, v, t):
    """Pentagons through ``v`` with their other four vertices in ``X``,
    pairwise sharing only ``v``.  May return fewer than ``t``."""
    in_x = np.zeros(G.n, dtype=bool)
    in_x[np.asarray(list(X), dtype=np.int64)] = True
    return _find_bundle(G.adjacency_sets(), in_x, v, t)


def build_sponge(G, cfg, seed=0):
    """Mine ``cfg.per_vertex_min`` edge-disjoint pentagons anchored at every
    vertex of the triangle-free graph ``G``.

    Vertices are served in increasing degree order (seeded tie-break).  A
    pentagon found for ``v`` is anchored at ``v``; its other vertices must
    have pentagon-degree at most ``cfg.phase_maxdeg - 2``.  Vertices that come
    up short are revisited for up to ``cfg.max_passes`` passes before
    :class:`SpongeInfeasible` is raised.
    """
    n = G.n
    need = cfg.per_vertex_min
    # each anchored pentagon uses two edges at its anchor
    low = np.flatnonzero(G.degrees < 2 * need)
    if len(low):
        v = int(low[np.argmin(G.degrees[low])])
        raise SpongeInfeasible(v, 0, need)
    rng = np.random.default_rng(seed)
    adj = G.adjacency_sets()
    pdeg = np.zeros(n, dtype=np.int64)
    # room[u]: how many more R edges u can take before deg_G - d_R hits the floor
    room = G.degrees - cfg.r_floor
    collections = {v: [] for v in range(n)}
    order = np.lexsort((rng.permutation(n), G.degrees))
    pending = [int(v) for v in order]
    for _ in range(cfg.max_passes):
        short, progress = [], False
        for v in pending:
            missing = need - len(collections[v])
            if pdeg[v] + 2 * missing > cfg.rs_maxdeg:
                short.append(v)
                continue
            in_x = (pdeg <= cfg.phase_maxdeg - 2) & (room > 0)
            got = _find_bundle(adj, in_x, v, min(missing, cfg.bundle_target))
            for c in got:
                for p, q in c.cycle_edges():
                    adj[p].discard(q)
                    adj[q].discard(p)
                pdeg[list(c.vertices)] += 2
                room[list(c.vertices[1:])] -= 1
                collections[v].append(c)
            progress = progress or bool(got)
            if len(collections[v]) < need:
                short.append(v)
        pending = short
        if not pending or not progress:
            break
    if pending:
        worst = min(pending, key=lambda u: (len(collections[u]), G.degrees[u], u))
        raise SpongeInfeasible(worst, len(collections[worst]), need)
    total_edges = 5 * sum(len(c) for c in collections.values())
    if total_edges > cfg.phase_edge_factor * n:
        raise SpongeInfeasible(-1, total_edges, cfg.phase_edge_factor * n)
    return assemble(n, collections, cfg)


def assemble(n, collections, cfg=None):
    """Split every pentagon into its R and S parts."""
    r_keys, s_keys = [], []
    for v in sorted(collections):
        for c in collections[v]:
            r_keys.extend(p * n + q for p, q in c.r_edges())
            s_keys.extend(p * n + q for p, q in c.s_edges())
    r = np.sort(np.array(r_keys, dtype=np.int64))
    s = np.sort(np.array(s_keys, dtype=np.int64))
    allk = np.concatenate([r, s])
    if len(np.unique(allk)) != len(allk):
        raise ValueError("pentagons are not edge-disjoint")
    return Sponge(from_keys(n, r), from_keys(n, s), collections, cfg)


def sponge_reduce(sp, f):
    """Subgraph ``H`` of ``R ∪ S`` with ``d_H(v) = d_S(v) - 2 f(v)``.

    For each ``v`` the first ``f(v)`` pentagons of ``C_v`` contribute their
    ``R`` part instead of their ``S`` part.  ``f`` is a sequence indexed by
    vertex or a mapping (missing vertices mean 0).
    """
    n = sp.S.n
    if isinstance(f, dict):
        fv = np.zeros(n, dtype=np.int64)
        for v, c in f.items():
            fv[v] = c
    else:
        fv = np.asarray(f, dtype=np.int64)
        if fv.shape != (n,):
            raise ValueError(f"f must have length {n}")
    drop, add = [], []
    for v in range(n):
        cv = sp.collections.get(v, [])
        if not 0 <= fv[v] <= len(cv):
            raise ValueError(f"f({v}) = {fv[v]} outside [0, {len(cv)}]")
        for c in cv[:fv[v]]:
            drop.extend(p * n + q for p, q in c.s_edges())
            add.extend(p * n + q for p, q in c.r_edges())
    keys = np.setdiff1d(sp.S.edge_keys(), np.array(drop, dtype=np.int64), assume_unique=True)
    keys = np.union1d(keys, np.array(add, dtype=np.int64))
    return from_keys(n, keys)


def format_sponge(sp):
    """One line per pentagon: ``v1 v2 v3 v4 v5 anchor`` in cycle order."""
    return "".join(" ".join(map(str, c.vertices + (c.anchor,))) + "\n" for c in sp.pentagons)
