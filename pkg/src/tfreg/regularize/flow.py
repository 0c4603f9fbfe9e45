"""Thin wrapper around scipy's integer max-flow for small arc lists."""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, maximum_flow


def max_flow(num_nodes, tails, heads, caps, source, sink):
    """Return ``(value, arc_flows, reachable)``.

    ``arc_flows[i]`` is the flow on arc ``tails[i] -> heads[i]`` and
    ``reachable`` is a boolean mask of nodes reachable from ``source`` in the
    residual network (the source side of a minimum cut).  Arcs must be
    unique and no antiparallel pair may be present.
    """
    tails = np.asarray(tails, dtype=np.int32)
    heads = np.asarray(heads, dtype=np.int32)
    caps = np.asarray(caps, dtype=np.int32)
    cap = sp.csr_matrix((caps, (tails, heads)), shape=(num_nodes, num_nodes), dtype=np.int32)
    if len(tails) == 0:
        reachable = np.zeros(num_nodes, dtype=bool)
        reachable[source] = True
        return 0, np.zeros(0, dtype=np.int64), reachable
    res = maximum_flow(cap, source, sink, method="dinic")
    flow = res.flow.tocsr()
    arc_flows = np.asarray(flow[tails, heads]).ravel().astype(np.int64)
    fwd = caps - arc_flows
    r_t = np.concatenate([tails[fwd > 0], heads[arc_flows > 0]])
    r_h = np.concatenate([heads[fwd > 0], tails[arc_flows > 0]])
    residual = sp.csr_matrix((np.ones(len(r_t), dtype=np.int8), (r_t, r_h)),
                             shape=(num_nodes, num_nodes))
    order = breadth_first_order(residual, source, directed=True, return_predecessors=False)
    reachable = np.zeros(num_nodes, dtype=bool)
    reachable[order] = True
    return int(res.flow_value), arc_flows, reachable
