"""Self-avoiding walk enumeration and contraction diagnostics.

The central quantity is the delta-weighted walk sum E(v, l): the sum over all
self-avoiding walks of length l starting at v of the product of per-vertex
coefficients delta(deg(u)) over the walk's vertices, excluding the start.
Exponential decay of max_v E(v, l) in l is the contraction property the
estimator's error analysis rests on; with constant delta = 1/D the sums
reduce to SAW counts over D^l, the connective-constant normalization.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .model import PottsParams

log = logging.getLogger(__name__)

DEFAULT_EXTENSION_BUDGET = 10**8


def _delta_by_vertex(graph, delta):
    """Normalize a delta argument (PottsParams, callable on degree, or constant)."""
    if isinstance(delta, PottsParams):
        return [delta.delta(graph.degree(v)) for v in range(graph.n)]
    if callable(delta):
        return [float(delta(graph.degree(v))) for v in range(graph.n)]
    c = float(delta)
    return [c] * graph.n


def _walk_sums(adj, values, v, l_max, budget=None):
    """One DFS pass collecting sum-of-products per walk length 0..l_max.

    Returns (sums, extensions, exhausted). `values[w]` multiplies into the
    product when the walk steps onto w; the start vertex contributes nothing.
    """
    sums = [0.0] * (l_max + 1)
    sums[0] = 1.0
    if l_max == 0:
        return sums, 0, False
    n = len(adj)
    on_path = bytearray(n)
    on_path[v] = 1
    path = [v]
    prods = [1.0]
    iters = [iter(adj[v])]
    extensions = 0
    exhausted = False
    while iters:
        advanced = False
        for w in iters[-1]:
            if on_path[w]:
                continue
            extensions += 1
            if budget is not None and extensions > budget:
                exhausted = True
                break
            p = prods[-1] * values[w]
            depth = len(path)
            sums[depth] += p
            if depth < l_max:
                on_path[w] = 1
                path.append(w)
                prods.append(p)
                iters.append(iter(adj[w]))
                advanced = True
                break
        if exhausted:
            break
        if not advanced:
            on_path[path.pop()] = 0
            prods.pop()
            iters.pop()
    return sums, extensions, exhausted


def enumerate_saws(graph, v, length):
    """Yield every self-avoiding walk of exactly `length` edges from v.

    Walks come out in lexicographic order of their vertex sequences; length 0
    yields the single walk (v,).
    """
    adj = graph.adjacency
    on_path = bytearray(graph.n)
    on_path[v] = 1
    path = [v]

    def rec():
        if len(path) - 1 == length:
            yield tuple(path)
            return
        for w in adj[path[-1]]:
            if on_path[w]:
                continue
            on_path[w] = 1
            path.append(w)
            yield from rec()
            path.pop()
            on_path[w] = 0

    yield from rec()


def saw_count(graph, v, length):
    """Exact number of self-avoiding walks of the given length from v."""
    sums, _, _ = _walk_sums(graph.adjacency, [1.0] * graph.n, v, length)
    return int(sums[length])


def saw_count_profile(graph, v, l_max):
    """SAW counts for every length 0..l_max in one pass."""
    sums, _, _ = _walk_sums(graph.adjacency, [1.0] * graph.n, v, l_max)
    return [int(s) for s in sums]


def e_delta(graph, v, length, delta, extension_budget=None):
    """Delta-weighted SAW sum at one length (start vertex excluded from products)."""
    values = _delta_by_vertex(graph, delta)
    sums, _, exhausted = _walk_sums(graph.adjacency, values, v, length, extension_budget)
    if exhausted:
        raise BudgetError(
            f"SAW extension budget {extension_budget} exceeded at vertex {v}"
        )
    return sums[length]


def e_delta_profile(graph, v, l_max, delta, extension_budget=None):
    """Delta-weighted SAW sums for all lengths 0..l_max in one pass."""
    values = _delta_by_vertex(graph, delta)
    sums, _, exhausted = _walk_sums(graph.adjacency, values, v, l_max, extension_budget)
    if exhausted:
        raise BudgetError(
            f"SAW extension budget {extension_budget} exceeded at vertex {v}"
        )
    return sums


class SawTreeNode:
    """Node of the self-avoiding-walk tree rooted at a vertex."""

    __slots__ = ("vertex", "children")

    def __init__(self, vertex, children=()):
        self.vertex = vertex
        self.children = tuple(children)

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def __repr__(self):
        return f"SawTreeNode(vertex={self.vertex}, children={len(self.children)})"


def build_saw_tree(graph, v, depth, node_budget=10**6):
    """Materialize the SAW tree to the given depth (BudgetError past node_budget)."""
    adj = graph.adjacency
    on_path = bytearray(graph.n)
    count = [0]

    def rec(u, remaining):
        count[0] += 1
        if count[0] > node_budget:
            raise BudgetError(f"SAW tree node budget {node_budget} exceeded")
        children = []
        if remaining > 0:
            on_path[u] = 1
            for w in adj[u]:
                if not on_path[w]:
                    children.append(rec(w, remaining - 1))
            on_path[u] = 0
        return SawTreeNode(u, children)

    return rec(v, depth)


def _fit_decay_rate(lengths, maxima):
    """Geometric decay rate from a log-linear fit over the upper half of lengths."""
    if not lengths:
        return 0.0, 0, 0
    lo = max(1, math.ceil(lengths[-1] / 2))
    hi = lengths[-1]
    pts = [(l, m) for l, m in zip(lengths, maxima) if lo <= l <= hi and m > 0.0]
    if len(pts) < 2:
        # Walk sums died out inside the fit window: trivially contracting.
        return 0.0, lo, hi
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.log(np.array([p[1] for p in pts], dtype=float))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return math.exp(slope), lo, hi


def verify_contraction(graph, delta, l_max, extension_budget=DEFAULT_EXTENSION_BUDGET):
    """Scan all vertices for the worst delta-weighted walk sums per length.

    Returns a report dict with per-length maxima, the fitted geometric rate
    gamma, and a contracting verdict (gamma < 1). A graph whose walk counts
    blow past `extension_budget` gets a truncated scan, a warning, and
    budget_exhausted=true in the report.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    values = _delta_by_vertex(graph, delta)
    maxima = [0.0] * (l_max + 1)
    spent = 0
    exhausted = False
    scanned = 0
    for v in range(graph.n):
        sums, ext, exh = _walk_sums(
            graph.adjacency, values, v, l_max, extension_budget - spent
        )
        spent += ext
        for l in range(l_max + 1):
            if sums[l] > maxima[l]:
                maxima[l] = sums[l]
        if exh:
            exhausted = True
            log.warning(
                "SAW extension budget %d exhausted after vertex %d of %d; "
                "contraction report is partial",
                extension_budget,
                v,
                graph.n,
            )
            break
        scanned += 1
    lengths = list(range(1, l_max + 1))
    gamma, fit_lo, fit_hi = _fit_decay_rate(lengths, maxima[1:])
    return {
        "l": lengths,
        "max_e_delta": maxima[1:],
        "gamma": gamma,
        "contracting": bool(gamma < 1.0 - 1e-9),
        "l_fit_lo": fit_lo,
        "l_fit_hi": fit_hi,
        "vertices_scanned": scanned,
        "extensions": spent,
        "budget_exhausted": exhausted,
    }
