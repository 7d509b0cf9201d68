"""Heuristic feature extraction for TAI inputs.

All selections use exact values with deterministic tie-breaks (lower id wins),
so the exhaustive and KD-tree routing paths agree bit for bit.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..problems.types import (
    GraphInstance,
    Instance,
    ProblemKind,
    RoutingInstance,
    SchedulingInstance,
)
from .types import HeuristicFeatures

# Above this size the KD-tree path replaces the exhaustive scan.
KDTREE_THRESHOLD = 64

DEFAULT_K = 2


def _pair_dists(pts: np.ndarray, i: int, idx: np.ndarray) -> np.ndarray:
    # One shared distance formula for both neighbor paths.
    d = pts[idx] - pts[i]
    return np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1])


def _routing_exhaustive(pts: np.ndarray, k: int):
    n = len(pts)
    out = []
    for i in range(n):
        idx = np.arange(n)
        idx = idx[idx != i]
        d = _pair_dists(pts, i, idx)
        order = np.lexsort((idx, d))  # ascending distance, ties to lower id
        take = order[: min(k, n - 1)]
        out.append(tuple((int(idx[t]), float(d[t])) for t in take))
    return tuple(out)


def _routing_kdtree(pts: np.ndarray, k: int):
    n = len(pts)
    tree = cKDTree(pts)
    kq = min(n, k + 1)  # +1: the query returns the point itself
    dists, _ = tree.query(pts, k=kq)
    out = []
    for i in range(n):
        # Requery by radius so equidistant neighbors beyond the k-th are not
        # dropped by the tree's arbitrary tie order.
        r = float(dists[i][-1]) if kq > 1 else 0.0
        cand = tree.query_ball_point(pts[i], r=np.nextafter(r, np.inf))
        idx = np.array(sorted(j for j in cand if j != i), dtype=int)
        d = _pair_dists(pts, i, idx)
        order = np.lexsort((idx, d))
        take = order[: min(k, n - 1)]
        out.append(tuple((int(idx[t]), float(d[t])) for t in take))
    return tuple(out)


def routing_features(payload: RoutingInstance, k: int = DEFAULT_K) -> HeuristicFeatures:
    """k nearest neighbors per node, ascending distance, ties to lower id."""
    pts = np.asarray(payload.coords, dtype=float)
    if len(pts) > KDTREE_THRESHOLD:
        return HeuristicFeatures(_routing_kdtree(pts, k))
    return HeuristicFeatures(_routing_exhaustive(pts, k))


def graph_features(payload: GraphInstance, k: int = DEFAULT_K) -> HeuristicFeatures:
    """Top-k neighbors per node by largest degree, ties to lower id."""
    adj = payload.adjacency()
    deg = [len(a) for a in adj]
    out = []
    for i in range(payload.num_nodes):
        ranked = sorted(adj[i], key=lambda j: (-deg[j], j))[:k]
        out.append(tuple((j, float(deg[j])) for j in ranked))
    return HeuristicFeatures(tuple(out))


def pfsp_features(payload: SchedulingInstance, k: int = DEFAULT_K) -> HeuristicFeatures:
    """Per machine: the k jobs with the lowest processing time."""
    jobs, machines = payload.num_jobs, payload.num_machines
    out = []
    for m in range(machines):
        ranked = sorted(range(jobs), key=lambda j: (payload.ptimes[j][m], j))[:k]
        out.append(tuple((j, float(payload.ptimes[j][m])) for j in ranked))
    return HeuristicFeatures(tuple(out))


def jssp_features(payload: SchedulingInstance, k: int = DEFAULT_K) -> HeuristicFeatures:
    """Per job: the k operation indices with the lowest duration."""
    out = []
    for j in range(payload.num_jobs):
        row = payload.ptimes[j]
        ranked = sorted(range(len(row)), key=lambda i: (row[i], i))[:k]
        out.append(tuple((i, float(row[i])) for i in ranked))
    return HeuristicFeatures(tuple(out))


def compute_features(inst: Instance, k: int = DEFAULT_K) -> HeuristicFeatures:
    if inst.kind in (ProblemKind.TSP, ProblemKind.OP, ProblemKind.CVRP):
        return routing_features(inst.payload, k)
    if inst.kind in (ProblemKind.MIS, ProblemKind.MVC):
        return graph_features(inst.payload, k)
    if inst.kind is ProblemKind.PFSP:
        return pfsp_features(inst.payload, k)
    return jssp_features(inst.payload, k)
