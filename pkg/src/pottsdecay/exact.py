"""Brute-force oracles: exact partition functions, marginals, and Gibbs tables.

Everything here enumerates configurations, so it only runs on small problems;
the point is to be an independent ground truth for the estimator. Enumeration
work is metered against a budget counted in enumeration leaves: completed
assignments plus dead-ended prefixes for the backtracking path, the full q^k
space for the vectorized path. Unpinned isolated vertices are factored out
analytically (each contributes a factor q to every configuration class), so
derived instances whose interiors were edge-stripped cost nothing extra.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import BudgetError, InfeasibleError, ParseError
from .model import Configuration, monochromatic_edges

DEFAULT_BUDGET = 10**7
_VECTOR_CAP = 1 << 22
_CHUNK = 1 << 16


def _base_state(instance):
    """Split vertices and classify edges relative to the pinning.

    Returns (active, iso_count, mono_base) where active are unpinned vertices
    with at least one edge, iso_count the number of unpinned isolated
    vertices, and mono_base the monochromatic count among pinned-pinned edges.
    """
    graph = instance.graph
    pinned = instance.pinned
    active = []
    iso = 0
    for v in range(graph.n):
        if v in pinned:
            continue
        if graph.degree(v) == 0:
            iso += 1
        else:
            active.append(v)
    mono_base = sum(
        1
        for u, v in graph.edges
        if u in pinned and v in pinned and pinned[u] == pinned[v]
    )
    return active, iso, mono_base


def _dfs_enumerate(instance, active, budget, root=None, first_only=False):
    """Backtracking sum over colorings of `active`; prunes hard at beta = 0.

    Returns (z, vec, leaves): z the weight sum (excluding the pinned-pinned
    and isolated factors), vec the per-color mass at `root` or None, leaves
    the budget units consumed.
    """
    graph = instance.graph
    params = instance.params
    q = params.q
    beta = params.beta_float
    proper = params.beta == 0
    pinned = instance.pinned
    k = len(active)
    pos = {v: i for i, v in enumerate(active)}
    earlier = []
    pinc = []
    for i, v in enumerate(active):
        eh = []
        pc = []
        for w in graph.adjacency[v]:
            j = pos.get(w)
            if j is not None and j < i:
                eh.append(j)
            elif w in pinned:
                pc.append(pinned[w])
        earlier.append(eh)
        pinc.append(pc)
    root_pos = pos[root] if root is not None else None
    vec = [0.0] * q if root is not None else None
    vec_c = [0.0] * q if root is not None else None
    z = 0.0
    z_c = 0.0
    leaves = 0
    if k == 0:
        return 1.0, vec, 0
    max_mono = len(graph.edges) + 1
    beta_pow = None
    if not proper:
        beta_pow = [1.0] * max_mono
        for j in range(1, max_mono):
            beta_pow[j] = beta_pow[j - 1] * beta
    colors = [0] * k
    mono = [0] * (k + 1)
    idx = 0
    while idx >= 0:
        c = colors[idx] + 1
        placed = False
        if proper:
            while c <= q:
                if c not in pinc[idx] and all(colors[j] != c for j in earlier[idx]):
                    placed = True
                    break
                c += 1
        elif c <= q:
            placed = True
        if not placed:
            if colors[idx] == 0:
                # Dead-ended prefix: costs one budget unit like a leaf.
                leaves += 1
                if leaves > budget:
                    raise BudgetError(f"enumeration budget {budget} exceeded")
            colors[idx] = 0
            idx -= 1
            continue
        colors[idx] = c
        if not proper:
            inc = sum(1 for j in earlier[idx] if colors[j] == c)
            inc += sum(1 for pc in pinc[idx] if pc == c)
            mono[idx + 1] = mono[idx] + inc
        if idx == k - 1:
            leaves += 1
            if leaves > budget:
                raise BudgetError(f"enumeration budget {budget} exceeded")
            w = 1.0 if proper else beta_pow[mono[k]]
            # Kahan-compensated accumulation keeps the oracle trustworthy
            # at 1e-10 tolerances even over millions of leaves.
            y = w - z_c
            t = z + y
            z_c = (t - z) - y
            z = t
            if vec is not None:
                b = colors[root_pos] - 1
                y = w - vec_c[b]
                t = vec[b] + y
                vec_c[b] = (t - vec[b]) - y
                vec[b] = t
            if first_only:
                return z, vec, leaves
        else:
            idx += 1
    return z, vec, leaves


def _vector_enumerate(instance, active, budget, root=None):
    """Chunked numpy enumeration; requires q^k within budget and memory cap."""
    graph = instance.graph
    params = instance.params
    q = params.q
    beta = params.beta_float
    pinned = instance.pinned
    k = len(active)
    total = q**k
    if total > budget:
        raise BudgetError(f"enumeration budget {budget} exceeded: q^k = {q}^{k}")
    pos = {v: i for i, v in enumerate(active)}
    weights_pow = [q ** (k - 1 - i) for i in range(k)]
    aa_edges = []
    ap_edges = []
    for u, v in graph.edges:
        iu, iv = pos.get(u), pos.get(v)
        if iu is not None and iv is not None:
            aa_edges.append((iu, iv))
        elif iu is not None:
            ap_edges.append((iu, pinned[v]))
        elif iv is not None:
            ap_edges.append((iv, pinned[u]))
    z_parts = []
    vec_parts = []
    root_pos = pos[root] if root is not None else None
    for lo in range(0, total, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        cols = [None] * k
        needed = {i for i, _ in aa_edges} | {j for _, j in aa_edges}
        needed |= {i for i, _ in ap_edges}
        if root_pos is not None:
            needed.add(root_pos)
        for i in needed:
            cols[i] = (codes // weights_pow[i]) % q + 1
        mono = np.zeros(codes.size, dtype=np.int32)
        for i, j in aa_edges:
            mono += cols[i] == cols[j]
        for i, c in ap_edges:
            mono += cols[i] == c
        if params.beta == 0:
            w = (mono == 0).astype(np.float64)
        else:
            w = beta**mono
        z_parts.append(float(w.sum()))
        if root_pos is not None:
            vec_parts.append(np.bincount(cols[root_pos] - 1, weights=w, minlength=q))
    z = math.fsum(z_parts)
    vec = None
    if root_pos is not None:
        vec = [math.fsum(p[c] for p in vec_parts) for c in range(q)]
    return z, vec, total


def _enumerate(instance, budget, root=None, first_only=False):
    """Dispatch between the backtracking and vectorized enumerators."""
    active, iso, mono_base = _base_state(instance)
    params = instance.params
    if params.beta == 0 and mono_base > 0:
        return 0.0, [0.0] * params.q if root is not None else None, active, iso, 0
    if root is not None and root not in set(active):
        raise ValueError("root must be an active vertex here")
    proper = params.beta == 0
    if proper or first_only:
        z, vec, used = _dfs_enumerate(instance, active, budget, root, first_only)
    else:
        total = params.q ** len(active)
        if total <= min(budget, _VECTOR_CAP):
            z, vec, used = _vector_enumerate(instance, active, budget, root)
        else:
            z, vec, used = _dfs_enumerate(instance, active, budget, root)
    if mono_base > 0:
        scale = params.beta_float**mono_base
        z *= scale
        if vec is not None:
            vec = [x * scale for x in vec]
    return z, vec, active, iso, used


def exact_partition(instance, budget=DEFAULT_BUDGET):
    """Exact partition function (0.0 when no positive-weight configuration exists)."""
    z, _, _, iso, _ = _enumerate(instance, budget)
    return z * instance.params.q**iso


def exact_marginal_vector(instance, v, budget=DEFAULT_BUDGET):
    """Exact per-color conditional marginal vector of v given the pinning.

    A pinned v yields its indicator vector. Raises InfeasibleError when the
    instance has no positive-weight configuration at all.
    """
    graph = instance.graph
    params = instance.params
    if not (0 <= v < graph.n):
        raise ParseError(f"vertex {v} out of range")
    pin = instance.pinned.get(v)
    if pin is not None:
        out = [0.0] * params.q
        out[pin - 1] = 1.0
        return out
    if graph.degree(v) == 0:
        if exact_partition(instance, budget) <= 0.0:
            raise InfeasibleError("no positive-weight configuration exists")
        return [1.0 / params.q] * params.q
    z, vec, _, _, _ = _enumerate(instance, budget, root=v)
    if z <= 0.0:
        raise InfeasibleError("no positive-weight configuration exists")
    return [x / z for x in vec]


def exact_marginal(instance, v, x, budget=DEFAULT_BUDGET):
    """Exact conditional probability that v takes color x."""
    if not (1 <= x <= instance.params.q):
        raise ParseError(f"color {x} out of range for q={instance.params.q}")
    return exact_marginal_vector(instance, v, budget)[x - 1]


def exact_block_marginal(instance, block, pi, budget=DEFAULT_BUDGET):
    """Exact probability that a whole vertex set takes the joint coloring pi."""
    verts = tuple(sorted(block.vertices if hasattr(block, "vertices") else block))
    pi = Configuration(pi)
    missing = [v for v in verts if v not in pi]
    if missing:
        raise ParseError(f"pi leaves block vertices {missing} uncolored")
    z_den = exact_partition(instance, budget)
    if z_den <= 0.0:
        raise InfeasibleError("no positive-weight configuration exists")
    pinned = instance.with_pins({v: pi[v] for v in verts})
    z_num = exact_partition(pinned, budget)
    return z_num / z_den


def is_feasible(instance, budget=DEFAULT_BUDGET):
    """Whether any configuration of positive weight extends the pinning."""
    if instance.params.beta > 0:
        return True
    z, _, _, _, _ = _enumerate(instance, budget, first_only=True)
    return z > 0.0


class GibbsTable:
    """Full weight table of an instance: (Configuration, weight) per extension."""

    __slots__ = ("entries", "total", "n")

    def __init__(self, entries, n):
        self.entries = list(entries)
        self.n = n
        self.total = math.fsum(w for _, w in self.entries)

    @property
    def feasible(self):
        return self.total > 0.0

    def as_probability_dict(self):
        """Map canonical color tuples (vertex order 0..n-1) to probabilities.

        Zero-weight configurations are omitted, so the keys are exactly the
        Gibbs support.
        """
        if not self.feasible:
            raise InfeasibleError("Gibbs table has zero total weight")
        out = {}
        for cfg, w in self.entries:
            if w > 0.0:
                key = tuple(cfg[v] for v in range(self.n))
                out[key] = w / self.total
        return out

    def __len__(self):
        return len(self.entries)


def exact_gibbs_table(instance, budget=10**6):
    """Enumerate every total configuration extending the pinning, with weights."""
    graph = instance.graph
    params = instance.params
    unp = instance.unpinned()
    total = params.q ** len(unp)
    if total > budget:
        raise BudgetError(
            f"Gibbs table budget {budget} exceeded: q^unpinned = {params.q}^{len(unp)}"
        )
    beta = params.beta_float
    entries = []
    base = dict(instance.pinned)
    for combo in itertools.product(range(1, params.q + 1), repeat=len(unp)):
        colors = dict(base)
        colors.update(zip(unp, combo))
        mono = monochromatic_edges(graph, colors)
        w = 1.0 if mono == 0 else beta**mono
        entries.append((Configuration(colors), w))
    return GibbsTable(entries, graph.n)
