"""Sparse simple graphs, deterministic generators, and the instance file format.

Vertices are always the dense range 0..n-1. Edges are unordered pairs stored
canonically as (u, v) with u < v, sorted lexicographically, and adjacency
lists are sorted ascending. Graphs are treated as immutable: operations that
change the edge set return new Graph objects, never mutate in place. Every
enumeration order in the package ultimately derives from these orders, which
is what makes results bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParseError


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adjacency", "_hash")

    def __init__(self, n, edges=()):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ParseError(f"vertex count must be a non-negative integer, got {n!r}")
        seen = set()
        canon = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ParseError(f"self-loop ({u}, {v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex id out of range in edge ({u}, {v}) for n={n}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ParseError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v))
        canon.sort()
        adj = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.edges = tuple(canon)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)

    @classmethod
    def _from_parts(cls, n, edges, adjacency):
        # Trusted fast path for derived graphs; inputs must already be canonical.
        g = cls.__new__(cls)
        g.n = n
        g.edges = edges
        g.adjacency = adjacency
        return g

    @property
    def m(self):
        return len(self.edges)

    def degree(self, v):
        return len(self.adjacency[v])

    def neighbors(self, v):
        return self.adjacency[v]

    def has_edge(self, u, v):
        return v in self.adjacency[u]

    def remove_edges(self, drop):
        """Return a copy with the given edges removed; vertex set unchanged.

        Vertices that lose all their edges stay in the graph as isolated
        vertices, so ids remain stable across derived graphs.
        """
        gone = {(u, v) if u < v else (v, u) for u, v in drop}
        edges = tuple(e for e in self.edges if e not in gone)
        adj = [[] for _ in range(self.n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        return Graph._from_parts(self.n, edges, tuple(tuple(a) for a in adj))

    def induced_edges(self, vertices):
        """Edges with both endpoints in the given vertex set, canonical order."""
        inside = set(vertices)
        return [e for e in self.edges if e[0] in inside and e[1] in inside]

    def __eq__(self, other):
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.n, self.edges))
            self._hash = h
            return h

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


def dist(graph, v, targets):
    """BFS distance from v to the nearest vertex of `targets` (inf if none reachable)."""
    targets = set(targets)
    if v in targets:
        return 0
    seen = bytearray(graph.n)
    seen[v] = 1
    frontier = [v]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for w in graph.adjacency[u]:
                if seen[w]:
                    continue
                if w in targets:
                    return d
                seen[w] = 1
                nxt.append(w)
        frontier = nxt
    return math.inf


def generate_path(n):
    """Path on n >= 1 vertices: edges (i, i+1)."""
    if n < 1:
        raise ParseError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def generate_cycle(n):
    """Cycle on n >= 3 vertices."""
    if n < 3:
        raise ParseError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def generate_complete(n):
    """Complete graph on n >= 1 vertices."""
    if n < 1:
        raise ParseError("complete graph needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def generate_star(k):
    """Star with center 0 and k >= 1 leaves 1..k."""
    if k < 1:
        raise ParseError("star needs k >= 1 leaves")
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def generate_caterpillar(n, k):
    """Caterpillar: spine path 0..n-1, each spine vertex gets k leaf bristles.

    Bristles of spine vertex i are the vertices n + i*k .. n + i*k + k - 1, so
    interior spine vertices have degree k+2 and spine endpoints k+1.
    """
    if n < 1 or k < 0:
        raise ParseError("caterpillar needs n >= 1 spine vertices and k >= 0 bristles")
    edges = [(i, i + 1) for i in range(n - 1)]
    for i in range(n):
        for j in range(k):
            edges.append((i, n + i * k + j))
    return Graph(n + n * k, edges)


def generate_gnp(n, d, seed):
    """Erdos-Renyi graph with edge probability d/n, reproducible from the seed.

    Each of the C(n, 2) vertex pairs, in lexicographic order, consumes one
    uniform draw from a Philox counter stream keyed by the seed, so the graph
    depends only on (n, d, seed).
    """
    if n < 1:
        raise ParseError("gnp needs n >= 1")
    if not (0 <= d <= n):
        raise ParseError(f"gnp mean degree must satisfy 0 <= d <= n, got {d}")
    if not isinstance(seed, int) or seed < 0:
        raise ParseError("gnp seed must be a non-negative integer")
    iu, iv = np.triu_indices(n, k=1)
    rng = np.random.Generator(np.random.Philox(key=seed))
    mask = rng.random(iu.size) < (d / n)
    edges = [(int(u), int(v)) for u, v in zip(iu[mask], iv[mask])]
    return Graph(n, edges)


FAMILIES = {
    "path": generate_path,
    "cycle": generate_cycle,
    "complete": generate_complete,
    "star": generate_star,
    "caterpillar": generate_caterpillar,
    "gnp": generate_gnp,
}


def generate(family, **params):
    """Dispatch to a named generator family ("path", "gnp", ...)."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise ParseError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}"
        ) from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise ParseError(f"bad parameters for family {family!r}: {exc}") from None


def serialize_graph(graph, pinned=None):
    """Render graph (and optional pinning) in the instance file format."""
    lines = [f"graph {graph.n}"]
    for u, v in graph.edges:
        lines.append(f"edge {u} {v}")
    for v in sorted(pinned or {}):
        lines.append(f"pin {v} {pinned[v]}")
    return "\n".join(lines) + "\n"


def load_graph(text):
    """Parse instance text into (Graph, pinning dict).

    Format: first non-comment line is "graph <n>", then any number of
    "edge <u> <v>" and "pin <v> <color>" lines. "#" starts a comment, blank
    lines are ignored. Errors report 1-based line numbers.
    """
    n = None
    edges = []
    seen_edges = set()
    pins = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "graph":
                raise ParseError(f"missing graph header (line {lineno} is {parts[0]!r})")
            if len(parts) != 2:
                raise ParseError(f"malformed graph header at line {lineno}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"malformed graph header at line {lineno}") from None
            if n < 0:
                raise ParseError(f"negative vertex count at line {lineno}")
            continue
        kind = parts[0]
        if kind == "graph":
            raise ParseError(f"duplicate graph header at line {lineno}")
        if kind == "edge":
            if len(parts) != 3:
                raise ParseError(f"malformed edge at line {lineno}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge at line {lineno}") from None
            if u == v:
                raise ParseError(f"self-loop at line {lineno}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex id out of range at line {lineno}")
            key = (u, v) if u < v else (v, u)
            if key in seen_edges:
                raise ParseError(f"duplicate edge at line {lineno}")
            seen_edges.add(key)
            edges.append(key)
        elif kind == "pin":
            if len(parts) != 3:
                raise ParseError(f"malformed pin at line {lineno}")
            try:
                v, c = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed pin at line {lineno}") from None
            if not 0 <= v < n:
                raise ParseError(f"vertex id out of range at line {lineno}")
            if c < 1:
                raise ParseError(f"pin color out of range at line {lineno}")
            if v in pins:
                raise ParseError(f"duplicate pin at line {lineno}")
            pins[v] = c
        else:
            raise ParseError(f"unknown directive {kind!r} at line {lineno}")
    if n is None:
        raise ParseError("missing graph header")
    return Graph(n, edges), pins
