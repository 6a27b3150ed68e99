"""Partition-function estimation by telescoping conditional marginals.

Z equals the weight of any positive-weight anchor configuration divided by
the product of its sequential conditional marginals, each conditioned on the
previously fixed vertices. Substituting estimated marginals for exact ones
turns the identity into an estimator whose accuracy is controlled entirely
by the recursion depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blocks import first_feasible_tuple, minimal_permissive_block
from .decay import DepthBudget, RecursionLimits, _depth, marg, marg_coloring
from .errors import InfeasibleError, ParseError
from .model import Configuration, Instance, monochromatic_edges


@dataclass
class PartitionEstimate:
    """Result of one telescoped run."""

    log_z: float
    anchor: Configuration
    per_vertex: list = field(default_factory=list)
    depth_used: int = 0
    anchor_log_weight: float = 0.0

    @property
    def z(self):
        return math.exp(self.log_z)


def find_feasible_config(instance, block_budget=64):
    """A positive-weight total configuration extending the pinning.

    beta > 0: color every unpinned vertex 1. beta = 0: repeatedly take the
    lowest-id uncolored vertex, close it into its minimal permissive block
    treating already-colored vertices as pinned, and properly color that
    block by backtracking; low-degree leftovers end up as singleton blocks,
    which is exactly greedy list-coloring.
    """
    params = instance.params
    if params.q < 3:
        raise ParseError("the estimator needs q >= 3")
    if params.beta > 0:
        colors = {v: instance.pinned.get(v, 1) for v in range(instance.graph.n)}
        return Configuration(colors)
    for a, b in instance.graph.edges:
        ca = instance.pinned.get(a)
        if ca is not None and ca == instance.pinned.get(b):
            raise InfeasibleError(
                f"pinned endpoints of edge ({a}, {b}) share color {ca}"
            )
    coloring = dict(instance.pinned)
    remaining = set(instance.unpinned())
    while remaining:
        v = min(remaining)
        current = Instance(instance.graph, params, coloring)
        block = minimal_permissive_block(current, (v,), block_budget)
        tup = first_feasible_tuple(current, block.vertices)
        if tup is None:
            raise InfeasibleError(
                f"no proper coloring of the block around vertex {v} "
                "is consistent with its surroundings"
            )
        coloring.update(zip(block.vertices, tup))
        remaining.difference_update(block.vertices)
    return Configuration(coloring)


def estimate_partition(graph, params, L=None, pinned=None, order_seed=None, limits=None):
    """Estimate Z by telescoping estimated conditional marginals.

    Vertices are processed in ascending id, or in a reproducible random
    order when order_seed is given (useful as a self-consistency check:
    different orders must agree when the depth is generous). L defaults to
    ceil(3 ln n).
    """
    instance = Instance(graph, params, pinned)
    if L is None:
        L = DepthBudget.for_graph(graph.n)
    depth = _depth(L)
    limits = limits or RecursionLimits()
    anchor = find_feasible_config(instance)
    full = {v: anchor[v] for v in range(graph.n)}
    mono = monochromatic_edges(graph, full)
    if params.beta == 0:
        anchor_log = 0.0
        if mono:
            raise InfeasibleError("anchor configuration is not proper")
    else:
        anchor_log = mono * math.log(params.beta_float)
    order = instance.unpinned()
    if order_seed is not None:
        rng = np.random.Generator(np.random.Philox(key=order_seed))
        order = [order[i] for i in rng.permutation(len(order))]
    estimate = marg if params.beta > 0 else marg_coloring
    log_z = anchor_log
    pins = dict(instance.pinned)
    per_vertex = []
    for v in order:
        step = Instance(graph, params, pins)
        x = anchor[v]
        p, _ = estimate(step, v, x, depth, limits=limits)
        if p <= 0.0:
            raise InfeasibleError(
                f"conditional marginal vanished at vertex {v} under truncation"
            )
        log_z -= math.log(p)
        per_vertex.append((v, x, p))
        pins[v] = x
    return PartitionEstimate(
        log_z=log_z,
        anchor=anchor,
        per_vertex=per_vertex,
        depth_used=depth,
        anchor_log_weight=anchor_log,
    )
