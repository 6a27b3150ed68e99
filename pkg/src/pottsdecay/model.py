"""Model parameters, partial color assignments, and pinned instances.

Colors are 1-based in every public mapping; internal vectors are indexed by
color-1. The activity beta lives in [0, 1) and is held as an exact Fraction
so that the low/high degree threshold (q-1)/(1-beta) - 2 is decided by exact
rational arithmetic rather than float rounding. beta = 0 is the proper
q-coloring case.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import ParseError

_DECIMAL = re.compile(r"^\d+(\.\d{1,9})?$")


def parse_activity(text):
    """Parse a plain decimal activity string exactly (<= 9 fractional digits)."""
    text = text.strip()
    if not _DECIMAL.match(text):
        raise ParseError(
            f"activity must be a plain decimal with at most 9 fractional digits, got {text!r}"
        )
    return Fraction(text)


def _as_fraction(beta):
    if isinstance(beta, str):
        return parse_activity(beta)
    if isinstance(beta, Fraction):
        return beta
    if isinstance(beta, bool):
        raise ParseError(f"activity must be numeric, got {beta!r}")
    if isinstance(beta, int):
        return Fraction(beta)
    if isinstance(beta, float):
        # Exact value of the binary float; pass a string or Fraction when the
        # decimal reading matters near a degree threshold.
        return Fraction(beta)
    raise ParseError(f"cannot interpret activity {beta!r}")


class PottsParams:
    """Color count q and activity beta, with exact threshold arithmetic.

    A vertex of degree d is low-degree iff d < (q-1)/(1-beta) - 2 strictly;
    the decay coefficient delta(d) uses the finite branch up to and including
    the threshold (where it equals exactly 1), and saturates at 1 beyond it.
    """

    __slots__ = ("q", "beta", "beta_float", "max_low_degree", "_max_first_branch")

    def __init__(self, q, beta=0):
        if not isinstance(q, int) or isinstance(q, bool) or q < 2:
            raise ParseError(f"q must be an integer >= 2, got {q!r}")
        beta = _as_fraction(beta)
        if not (0 <= beta < 1):
            raise ParseError(f"activity must satisfy 0 <= beta < 1, got {beta}")
        self.q = q
        self.beta = beta
        self.beta_float = float(beta)
        threshold = Fraction(q - 1) / (1 - beta) - 2
        t_floor = math.floor(threshold)
        self.max_low_degree = t_floor - 1 if threshold == t_floor else t_floor
        self._max_first_branch = t_floor

    def is_low_degree(self, d):
        """Strict comparison d < (q-1)/(1-beta) - 2, decided exactly."""
        return d <= self.max_low_degree

    def delta(self, d):
        """Per-degree decay coefficient 2(1-beta)/(q-1-(1-beta)d), capped at 1."""
        if d < 0:
            raise ValueError(f"degree must be non-negative, got {d}")
        if d <= self._max_first_branch:
            return float(2 * (1 - self.beta) / ((self.q - 1) - (1 - self.beta) * d))
        return 1.0

    def marginal_upper_bound(self, d):
        """Upper bound 1/max(1, q - (1-beta) d) on any conditional marginal."""
        return 1.0 / max(1.0, self.q - float(1 - self.beta) * d)

    def marginal_lower_bound(self, d):
        """Lower bound beta^d / q on conditional marginals (0 when beta=0, d>0)."""
        return self.beta_float**d / self.q if d > 0 else 1.0 / self.q

    def __eq__(self, other):
        return (
            isinstance(other, PottsParams)
            and self.q == other.q
            and self.beta == other.beta
        )

    def __hash__(self):
        return hash((self.q, self.beta))

    def __repr__(self):
        return f"PottsParams(q={self.q}, beta={self.beta})"


class Configuration:
    """A partial map from vertices to 1-based colors."""

    __slots__ = ("assignment",)

    def __init__(self, assignment):
        if isinstance(assignment, Configuration):
            assignment = assignment.assignment
        pairs = dict(assignment)
        for v, c in pairs.items():
            if not isinstance(v, int) or v < 0:
                raise ParseError(f"bad vertex {v!r} in configuration")
            if not isinstance(c, int) or c < 1:
                raise ParseError(f"bad color {c!r} for vertex {v}")
        self.assignment = pairs

    def support(self):
        return tuple(sorted(self.assignment))

    def get(self, v, default=None):
        return self.assignment.get(v, default)

    def items(self):
        return sorted(self.assignment.items())

    def __getitem__(self, v):
        return self.assignment[v]

    def __contains__(self, v):
        return v in self.assignment

    def __len__(self):
        return len(self.assignment)

    def __iter__(self):
        return iter(sorted(self.assignment))

    def __eq__(self, other):
        if isinstance(other, Configuration):
            return self.assignment == other.assignment
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items())))

    def __repr__(self):
        inner = ", ".join(f"{v}: {c}" for v, c in self.items())
        return f"Configuration({{{inner}}})"


def _as_pin_dict(pinned):
    if pinned is None:
        return {}
    if isinstance(pinned, Configuration):
        return dict(pinned.assignment)
    return dict(pinned)


class Instance:
    """A graph together with model parameters and a pinning of some vertices."""

    __slots__ = ("graph", "params", "pinned")

    def __init__(self, graph, params, pinned=None):
        pins = _as_pin_dict(pinned)
        for v, c in pins.items():
            if not (0 <= v < graph.n):
                raise ParseError(f"pin vertex {v} out of range for n={graph.n}")
            if not (1 <= c <= params.q):
                raise ParseError(f"pin color {c} out of range for q={params.q}")
        self.graph = graph
        self.params = params
        self.pinned = pins

    def is_pinned(self, v):
        return v in self.pinned

    def unpinned(self):
        return [v for v in range(self.graph.n) if v not in self.pinned]

    def with_pins(self, extra):
        """New instance with additional pins; re-pinning to a new color is an error."""
        extra = _as_pin_dict(extra)
        merged = dict(self.pinned)
        for v, c in extra.items():
            old = merged.get(v)
            if old is not None and old != c:
                raise ParseError(f"conflicting pin for vertex {v}: {old} vs {c}")
            merged[v] = c
        return Instance(self.graph, self.params, merged)

    def with_graph(self, graph):
        return Instance(graph, self.params, self.pinned)

    def __repr__(self):
        return (
            f"Instance({self.graph!r}, {self.params!r}, pins={len(self.pinned)})"
        )


def _total_colors(instance, config):
    colors = _as_pin_dict(config) if not isinstance(config, Configuration) else config.assignment
    n = instance.graph.n
    if len(colors) != n or any(v not in colors for v in range(n)):
        raise ParseError("configuration must color every vertex")
    return colors


def monochromatic_edges(graph, colors):
    """Count edges whose endpoints share a color under a total assignment."""
    return sum(1 for u, v in graph.edges if colors[u] == colors[v])


def weight(instance, config):
    """Weight beta^(#monochromatic edges), or 0.0 if the pinning is violated."""
    colors = _total_colors(instance, config)
    for v, c in instance.pinned.items():
        if colors[v] != c:
            return 0.0
    mono = monochromatic_edges(instance.graph, colors)
    if mono == 0:
        return 1.0
    return instance.params.beta_float**mono


def log_weight(instance, config):
    """Natural log of weight(); -inf for weight zero."""
    w = weight(instance, config)
    return math.log(w) if w > 0 else -math.inf
