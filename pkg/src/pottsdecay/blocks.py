"""Permissive blocks: closure computation, feasible configurations, sparsity checks.

A vertex set B (disjoint from the pinned set) is permissive when every
unpinned vertex just outside B is low-degree. The minimal permissive block
B(S) containing a seed set S is obtained by repeatedly absorbing unpinned
high-degree boundary vertices; the result is independent of absorption order,
and we process the lowest-numbered candidate first so intermediate states are
reproducible too.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import BudgetError, ParseError
from .model import Configuration, Instance

DEFAULT_BLOCK_BUDGET = 64
DEFAULT_CONFIG_BUDGET = 10**6


class Block:
    """A permissive vertex set with its ordered boundary edges.

    boundary_edges lists (u, v) pairs with u in the block and v outside,
    sorted lexicographically; this fixed order is what the recursion's
    one-edge-at-a-time telescoping refers to.
    """

    __slots__ = ("vertices", "boundary_edges")

    def __init__(self, vertices, boundary_edges):
        self.vertices = tuple(sorted(vertices))
        self.boundary_edges = tuple(boundary_edges)

    @property
    def m(self):
        return len(self.boundary_edges)

    def boundary_vertices(self):
        """Distinct block-side endpoints of boundary edges, ascending."""
        return tuple(sorted({u for u, _ in self.boundary_edges}))

    def interior(self):
        """Block vertices with no edge leaving the block."""
        owners = {u for u, _ in self.boundary_edges}
        return tuple(v for v in self.vertices if v not in owners)

    def __eq__(self, other):
        return (
            isinstance(other, Block)
            and self.vertices == other.vertices
            and self.boundary_edges == other.boundary_edges
        )

    def __hash__(self):
        return hash((self.vertices, self.boundary_edges))

    def __repr__(self):
        return f"Block(vertices={self.vertices}, m={self.m})"


def _boundary_edges(graph, inside):
    out = []
    for u in sorted(inside):
        for w in graph.adjacency[u]:
            if w not in inside:
                out.append((u, w))
    return out


def minimal_permissive_block(instance, seeds, block_budget=DEFAULT_BLOCK_BUDGET):
    """Close a seed set under absorption of high-degree unpinned boundary vertices.

    Raises BudgetError when the closure grows past block_budget vertices.
    """
    graph = instance.graph
    params = instance.params
    pinned = instance.pinned
    seeds = sorted(set(seeds))
    if not seeds:
        raise ParseError("block seed set must be non-empty")
    for s in seeds:
        if not (0 <= s < graph.n):
            raise ParseError(f"seed vertex {s} out of range")
        if s in pinned:
            raise ParseError(f"seed vertex {s} is pinned")
    inside = set(seeds)
    if len(inside) > block_budget:
        raise BudgetError(f"block budget {block_budget} exceeded by seed set")
    candidates = set()

    def scan(u):
        for w in graph.adjacency[u]:
            if w in inside or w in pinned:
                continue
            if not params.is_low_degree(graph.degree(w)):
                candidates.add(w)

    for s in seeds:
        scan(s)
    while candidates:
        w = min(candidates)
        candidates.discard(w)
        inside.add(w)
        if len(inside) > block_budget:
            raise BudgetError(
                f"block budget {block_budget} exceeded growing from seeds {seeds}"
            )
        scan(w)
    return Block(inside, _boundary_edges(graph, inside))


def _backtrack_proper(instance, verts, config_budget, first_only=False):
    """Proper colorings of the induced subgraph on verts, consistent with pins.

    Colors are constrained away from pinned neighbors (anywhere in the graph)
    and from already-assigned earlier vertices inside verts. Output tuples are
    aligned with `verts` and produced in lexicographic order.
    """
    graph = instance.graph
    q = instance.params.q
    pinned = instance.pinned
    k = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    earlier = []
    banned = []
    for i, v in enumerate(verts):
        eh = []
        bn = set()
        for w in graph.adjacency[v]:
            j = pos.get(w)
            if j is not None and j < i:
                eh.append(j)
            elif w in pinned:
                bn.add(pinned[w])
        earlier.append(eh)
        banned.append(bn)
    out = []
    colors = [0] * k
    idx = 0
    while idx >= 0:
        c = colors[idx] + 1
        placed = False
        while c <= q:
            if c not in banned[idx] and all(colors[j] != c for j in earlier[idx]):
                placed = True
                break
            c += 1
        if not placed:
            colors[idx] = 0
            idx -= 1
            continue
        colors[idx] = c
        if idx == k - 1:
            out.append(tuple(colors))
            if first_only:
                return out
            if len(out) > config_budget:
                raise BudgetError(
                    f"feasible-configuration budget {config_budget} exceeded"
                )
        else:
            idx += 1
    return out


def feasible_tuples(instance, verts, config_budget=DEFAULT_CONFIG_BUDGET):
    """Feasible block configurations as color tuples aligned with sorted verts.

    beta > 0: every configuration in [q]^B, lexicographic. beta = 0: proper
    colorings of the induced subgraph that avoid all pinned neighbor colors.
    """
    verts = tuple(sorted(verts))
    q = instance.params.q
    if instance.params.beta > 0:
        if q ** len(verts) > config_budget:
            raise BudgetError(
                f"feasible-configuration budget {config_budget} exceeded: "
                f"q^|B| = {q}^{len(verts)}"
            )
        return list(itertools.product(range(1, q + 1), repeat=len(verts)))
    return _backtrack_proper(instance, verts, config_budget)


def first_feasible_tuple(instance, verts):
    """First feasible configuration in lexicographic order, or None."""
    verts = tuple(sorted(verts))
    if instance.params.beta > 0:
        return tuple(1 for _ in verts)
    out = _backtrack_proper(instance, verts, config_budget=1, first_only=True)
    return out[0] if out else None


def feasible_block_configs(instance, block, config_budget=DEFAULT_CONFIG_BUDGET):
    """Feasible configurations of a block as Configuration objects."""
    verts = block.vertices if isinstance(block, Block) else tuple(sorted(block))
    tuples = feasible_tuples(instance, verts, config_budget)
    return [Configuration(dict(zip(verts, t))) for t in tuples]


def _closure_ratio(instance, walk, block_budget):
    block = minimal_permissive_block(instance, set(walk), block_budget)
    return len(block.vertices) / len(walk), block


def verify_locally_sparse(
    graph,
    params,
    l_max,
    mode="exhaustive",
    trials=500,
    seed=0,
    walk_budget=10**6,
):
    """Measure how much block closures inflate walks: max |B(P)| / |P|.

    Closures are computed with an empty pinning. Exhaustive mode scans every
    self-avoiding walk of length 0..l_max from every vertex (BudgetError past
    walk_budget walks; switch to sampled mode for large graphs). Sampled mode
    grows `trials` random self-avoiding walks from a Philox stream keyed by
    the seed.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ParseError(f"unknown mode {mode!r}")
    bare = Instance(graph, params, {})
    budget = graph.n  # closures may legitimately swallow the whole graph
    worst_ratio = 0.0
    worst_path = ()
    worst_block = 0
    checked = 0

    def consider(walk):
        nonlocal worst_ratio, worst_path, worst_block, checked
        checked += 1
        ratio, block = _closure_ratio(bare, walk, budget)
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_path = tuple(walk)
            worst_block = len(block.vertices)

    if mode == "exhaustive":
        adj = graph.adjacency
        on_path = bytearray(graph.n)

        def rec(path):
            consider(path)
            if checked > walk_budget:
                raise BudgetError(
                    f"walk budget {walk_budget} exceeded; use sampled mode"
                )
            if len(path) - 1 >= l_max:
                return
            for w in adj[path[-1]]:
                if on_path[w]:
                    continue
                on_path[w] = 1
                path.append(w)
                rec(path)
                path.pop()
                on_path[w] = 0

        for v in range(graph.n):
            on_path[v] = 1
            rec([v])
            on_path[v] = 0
    else:
        rng = np.random.Generator(np.random.Philox(key=seed))
        for _ in range(trials):
            v = int(rng.integers(graph.n))
            walk = [v]
            visited = {v}
            while len(walk) - 1 < l_max:
                options = [w for w in graph.adjacency[walk[-1]] if w not in visited]
                if not options:
                    break
                w = options[int(rng.integers(len(options)))]
                walk.append(w)
                visited.add(w)
            consider(walk)

    return {
        "mode": mode,
        "l_max": l_max,
        "paths_checked": checked,
        "worst_ratio": worst_ratio,
        "worst_path": list(worst_path),
        "worst_block_size": worst_block,
    }
