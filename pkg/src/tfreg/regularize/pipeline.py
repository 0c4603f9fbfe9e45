"""End-to-end synthesis of a certified triangle-free regular graph."""

import math
import time
from functools import lru_cache

import numpy as np

from .. import spectral
from ..alon import build_alon
from ..graph import connected_components, from_keys, induced, max_degree, overlay, triangle_count
from ..sponge import SpongeInfeasible, build_sponge, sponge_reduce
from .plan import plan as make_plan
from .steps import (ParityError, StageError, bounded_spanning_forest, parity_subgraph,
                    prescribed_subgraph, sample_subset, trim_excess)

CHAIN_TOL = 1e-6


class SynthesisFailed(RuntimeError):
    def __init__(self, stage, reason, attempts):
        super().__init__(f"stage {stage!r} failed after {attempts} attempts: {reason}")
        self.stage = stage
        self.reason = reason
        self.attempts = attempts

    def to_dict(self):
        return {"stage": self.stage, "reason": self.reason, "attempts": self.attempts}


class _Infeasible(Exception):
    def __init__(self, stage, reason):
        super().__init__(reason)
        self.stage = stage
        self.reason = reason


def _method_for(n):
    return "dense" if n <= spectral.DENSE_MAX_N else "lanczos"


@lru_cache(maxsize=4)
def base_lambda(k):
    """Computed lambda of the base graph (cached per ``k``)."""
    A, spec = build_alon(k)
    return spectral.compute_lambda(A, _method_for(A.n), tol=1e-9)


def _stage(log, timing, name, removed=None, added=None, t0=None):
    """Record one stage; ``removed``/``added`` are graphs of edges."""
    entry = {"stage": name,
             "edges_removed": removed.m if removed is not None else 0,
             "edges_added": added.m if added is not None else 0,
             "max_degree_delta": max(max_degree(removed) if removed is not None else 0,
                                     max_degree(added) if added is not None else 0)}
    log.append(entry)
    timing["stage_wall_ms"].append({"stage": name,
                                    "wall_ms": round((time.perf_counter() - t0) * 1000, 3)})


def _choose_target(T, d_g2s, quota, fixed_d_prime=None):
    """Pick the degree parity and ``d'`` of the final graph.

    For each parity whose per-component handshake condition holds, the
    parity subgraph ``T'`` of the spanning forest is removed and ``d'`` is the
    smallest resulting degree in ``G* ∪ S`` (or the planned value, if fixed).
    Returns ``(d', parity, T', f)`` for the largest ``d'`` whose reductions
    ``f`` fit the per-vertex quotas, or ``None``.
    """
    sizes = np.bincount(connected_components(T))
    best = None
    for parity in (0, 1):
        if parity and np.any(sizes % 2):
            continue
        try:
            Tp = parity_subgraph(T, (d_g2s - parity) % 2, allow_forest=True)
        except ParityError:
            continue
        d_star = d_g2s - Tp.degrees
        d_prime = int(d_star.min()) if fixed_d_prime is None else fixed_d_prime
        if d_prime % 2 != parity:
            continue
        f = (d_star - d_prime) // 2
        if d_prime <= 0 or f.min() < 0 or np.any(f > quota):
            continue
        if best is None or d_prime > best[0]:
            best = (d_prime, parity, Tp, f)
    return best


def _attempt(A, plan, rng, seed, attempt, log, timing):
    n = plan.n
    t0 = time.perf_counter()
    X, sample_attempts = sample_subset(A, n, plan.conc_slack, rng, plan.max_attempts)
    G, _ = induced(A, X)
    _stage(log, timing, "sample", added=G, t0=t0)

    t0 = time.perf_counter()
    sponge_seed = int(rng.integers(2 ** 63))
    try:
        sp = build_sponge(G, plan.sponge, seed=sponge_seed)
    except SpongeInfeasible as exc:
        raise _Infeasible("sponge", str(exc)) from None
    R, S = sp.R, sp.S
    G0 = overlay(overlay(G, R, "remove"), S, "remove")
    _stage(log, timing, "sponge", removed=overlay(R, S, "add"), t0=t0)

    t0 = time.perf_counter()
    d_g0s = G0.degrees + S.degrees
    delta = plan.delta if plan.delta is not None else int(d_g0s.min())
    G1, W, h = trim_excess(G0, S, delta)
    trimmed = overlay(G0, G1, "remove")
    _stage(log, timing, "trim", removed=trimmed, t0=t0)

    t0 = time.perf_counter()
    F = prescribed_subgraph(G1, W, h, plan.offw_cap)
    G2 = overlay(G1, F, "remove")
    _stage(log, timing, "prescribed", removed=F, t0=t0)

    t0 = time.perf_counter()
    T = bounded_spanning_forest(G2, plan.tree_maxdeg)
    _stage(log, timing, "tree", t0=t0)

    t0 = time.perf_counter()
    d_g2s = G2.degrees + S.degrees
    quota = np.array([sp.quota(v) for v in range(n)])
    best = _choose_target(T, d_g2s, quota, plan.d_prime)
    if best is None:
        raise _Infeasible("parity", "no parity choice keeps every reduction within its quota")
    d_prime, parity, Tp, f = best
    G_star = overlay(G2, Tp, "remove")
    _stage(log, timing, "parity", removed=Tp, t0=t0)

    t0 = time.perf_counter()
    H = sponge_reduce(sp, f)
    final = overlay(G_star, H, "add")
    _stage(log, timing, "reduce", added=H, t0=t0)

    return {"X": X, "G": G, "sponge": sp, "trimmed": trimmed, "F": F, "T": T, "Tp": Tp,
            "H": H, "final": final, "d_prime": d_prime, "delta": delta,
            "sample_attempts": sample_attempts, "sponge_seed": sponge_seed, "parity": parity,
            "W_size": int(len(W))}


def _verify_ledger(run):
    """Check ``final = (G - (R ∪ S) - trimmed - F - T') ∪ H`` with ``H ⊆ R ∪ S``."""
    G, sp, final = run["G"], run["sponge"], run["final"]
    n = G.n
    rs = np.union1d(sp.R.edge_keys(), sp.S.edge_keys())
    if not np.isin(run["H"].edge_keys(), rs).all():
        raise AssertionError("H is not contained in R ∪ S")
    keys = np.setdiff1d(G.edge_keys(), rs)
    for part in ("trimmed", "F", "Tp"):
        keys = np.setdiff1d(keys, run[part].edge_keys())
    keys = np.union1d(keys, run["H"].edge_keys())
    if not np.array_equal(keys, final.edge_keys()):
        raise AssertionError("edge ledger does not reproduce the final graph")
    if not np.isin(final.edge_keys(), G.edge_keys()).all():
        raise AssertionError("final graph is not a subgraph of A[X]")
    return from_keys(n, np.setdiff1d(G.edge_keys(), final.edge_keys()))


def synthesize(n, seed=0, profile="desk", overrides=None):
    """Build a certified triangle-free ``d'``-regular graph on ``n`` vertices.

    Returns ``(graph, certificate)``.  Stage failures are retried with a
    fresh sample up to ``plan.max_attempts`` times, then
    :class:`SynthesisFailed` names the last failing stage.
    """
    started = time.perf_counter()
    plan = make_plan(n, profile, overrides)
    A, spec = build_alon(plan.k)
    lam_base = base_lambda(plan.k)
    last = None
    for attempt in range(plan.max_attempts):
        rng = np.random.default_rng([seed, attempt])
        log, timing = [], {"stage_wall_ms": []}
        try:
            run = _attempt(A, plan, rng, seed, attempt, log, timing)
            break
        except _Infeasible as exc:
            last = (exc.stage, exc.reason)
        except StageError as exc:
            last = (exc.stage, str(exc))
    else:
        raise SynthesisFailed(last[0], last[1], plan.max_attempts)

    final = run["final"]
    deleted = _verify_ledger(run)
    d_prime = run["d_prime"]
    regular = final.is_regular(d_prime)
    tri = triangle_count(final)
    max_deleted = max_degree(deleted)
    method = _method_for(n)
    if method == "dense":
        ev = spectral.dense_spectrum(final)
        lam_final = spectral._lambda_from_spectrum(ev)
        comps = int(connected_components(final).max()) + 1
        nontrivial = float(np.max(np.abs(ev[comps:]))) if comps < n else 0.0
    else:
        lam_final = spectral.compute_lambda(final, "lanczos", tol=1e-9).lam
        comps, nontrivial = int(connected_components(final).max()) + 1, None
    bound = lam_base.lam + max_deleted
    ln = math.log(n)
    cert = {
        "n": n,
        "d_prime": d_prime,
        "k": plan.k,
        "N": plan.N,
        "D": plan.D,
        "profile": profile,
        "lambda_base": {"computed": lam_base.lam, "bound": spec.lambda_bound,
                        "method": lam_base.method,
                        "smaller": "computed" if lam_base.lam <= spec.lambda_bound else "bound"},
        "max_deleted_degree": max_deleted,
        "lambda_final": {"computed": lam_final, "bound": bound, "method": method,
                         "components": comps, "within_components": nontrivial,
                         "chain_holds": bool(lam_final <= bound + CHAIN_TOL)},
        "triangle_count": tri,
        "regular": bool(regular),
        "seeds": {"seed": seed, "attempt": attempt, "sample_attempts": run["sample_attempts"],
                  "sponge_seed": run["sponge_seed"]},
        "plan": plan.to_dict(),
        "delta": run["delta"],
        "parity": run["parity"],
        "stage_log": log,
        "ratios": {"d_over_n_two_thirds": d_prime / n ** (2 / 3),
                   "lambda_over_sqrt_d_log_n": lam_final / math.sqrt(d_prime * ln)},
        "asymptotic_targets": {"d_min": n ** (2 / 3) / 20,
                               "lambda_max": 200 * math.sqrt(d_prime * ln)},
        "vertex_map": run["X"].tolist(),
        "timing": {**timing, "total_ms": round((time.perf_counter() - started) * 1000, 3)},
    }
    if not regular or tri:
        raise AssertionError(f"final graph failed verification: regular={regular}, triangles={tri}")
    return final, cert
