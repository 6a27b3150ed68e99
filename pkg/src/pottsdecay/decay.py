"""Truncated block-recursion estimation of Gibbs marginals.

The estimator answers "what is the conditional probability that vertex v has
color x" by closing v into its minimal permissive block B, enumerating the
feasible block configurations, and expressing the block probability of each
configuration through the exact telescoping identity

    Pr[c(B) = pi] = w(pi) * prod_i (1 - (1-beta) p_i(pi))
                    / sum_rho w(rho) * prod_i (1 - (1-beta) p_i(rho))

where p_i(rho) is the conditional probability, in a sub-instance with the
block's edges removed and the first i-1 boundary spins re-pinned, that the
i-th outside neighbor agrees with the boundary spin facing it. Those inner
probabilities are estimated by the same recursion with a depth budget reduced
by the length of an escape path from v to the i-th boundary edge; a negative
budget bottoms out at 1/q (beta > 0) or at a block-local feasibility
indicator (beta = 0). With enough depth no truncation happens anywhere and
the recursion is an identity, so the result is exact.

One deviation from the one-call-per-(i, rho, color) reading: for a fixed
boundary index i, sub-instances coincide whenever two block configurations
agree on the first i-1 boundary spins, so the recursion evaluates each
distinct sub-instance once, obtains the full color vector of the queried
neighbor, and reads off every needed entry. The arithmetic performed per
value is unchanged, and every enumeration order is fixed, so results are
bit-identical to the naive schedule; diagnostics count these distinct
evaluations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .blocks import (
    DEFAULT_BLOCK_BUDGET,
    DEFAULT_CONFIG_BUDGET,
    feasible_tuples,
    minimal_permissive_block,
)
from .errors import BudgetError, InfeasibleError, ParseError
from .model import Configuration, Instance
from .saw import e_delta_profile


@dataclass
class MargDiagnostics:
    """Instrumentation threaded through one root estimate.

    recursive_calls counts distinct sub-instance evaluations (see module
    docstring); termination_events counts depth-exhausted base cases, so
    termination_events == 0 certifies the returned value is exact.
    """

    recursive_calls: int = 0
    termination_events: int = 0
    max_block_size: int = 0
    max_f_size: int = 0
    infeasible_events: int = 0
    raw_sum: float | None = None

    def as_dict(self):
        return {
            "recursive_calls": self.recursive_calls,
            "termination_events": self.termination_events,
            "max_block_size": self.max_block_size,
            "max_f_size": self.max_f_size,
            "infeasible_events": self.infeasible_events,
            "raw_sum": self.raw_sum,
        }


@dataclass(frozen=True)
class DepthBudget:
    """Remaining recursion depth; may go negative, triggering the base case."""

    remaining: int

    @classmethod
    def for_graph(cls, n, coeff=3.0):
        """Default root depth ceil(coeff * ln n), at least 1."""
        return cls(max(1, math.ceil(coeff * math.log(max(n, 2)))))


@dataclass
class RecursionLimits:
    """Work guards for one root estimate.

    block_budget and config_budget bound single-block work; max_calls and
    deadline (a time.monotonic() cutoff) abort runaway recursions with a
    BudgetError. max_calls aborts deterministically, deadline by wall clock.
    """

    block_budget: int = DEFAULT_BLOCK_BUDGET
    config_budget: int = DEFAULT_CONFIG_BUDGET
    max_calls: int | None = None
    deadline: float | None = None


@dataclass(frozen=True)
class SubInstance:
    """Derived instance for one boundary index of a block.

    The instance keeps the parent's vertex ids: the block's internal edges
    are removed (its interior becomes isolated rather than renumbered away),
    boundary edges at positions >= index are removed, and boundary spins at
    positions < index are pinned.
    """

    instance: Instance
    block: object
    index: int


def _depth(ell):
    if isinstance(ell, DepthBudget):
        return ell.remaining
    if isinstance(ell, bool) or not isinstance(ell, int):
        raise ParseError(f"depth must be an integer or DepthBudget, got {ell!r}")
    return ell


def escape_paths(instance_or_graph, block, v):
    """Shortest escape path per boundary edge, anchored at v.

    Each path runs from v through block vertices to the boundary edge's
    inside endpoint and finishes with the hop outside; ties are broken toward
    the lexicographically smallest vertex sequence.
    """
    graph = getattr(instance_or_graph, "graph", instance_or_graph)
    inside = set(block.vertices)
    if v not in inside:
        raise ParseError(f"escape path anchor {v} is not in the block")
    dist_cache = {}
    paths = []
    for u, w in block.boundary_edges:
        d = dist_cache.get(u)
        if d is None:
            d = {u: 0}
            frontier = [u]
            while frontier:
                nxt = []
                for a in frontier:
                    for b in graph.adjacency[a]:
                        if b in inside and b not in d:
                            d[b] = d[a] + 1
                            nxt.append(b)
                frontier = nxt
            dist_cache[u] = d
        if v not in d:
            raise ParseError(
                f"boundary vertex {u} is unreachable from anchor {v} inside the block"
            )
        seq = [v]
        cur = v
        k = d[v]
        while cur != u:
            for b in graph.adjacency[cur]:
                if b in inside and d.get(b, -1) == k - 1:
                    seq.append(b)
                    cur = b
                    k -= 1
                    break
        seq.append(w)
        paths.append(tuple(seq))
    return paths


def build_subinstance(instance, block, i, rho):
    """Materialize the derived instance for boundary index i (1..m+1).

    rho supplies the boundary spins: positions j < i get pinned to rho's
    color of the j-th boundary edge's inside endpoint; boundary edges at
    positions >= i are removed along with all of the block's internal edges.
    """
    m = len(block.boundary_edges)
    if not 1 <= i <= m + 1:
        raise ParseError(f"boundary index {i} out of range 1..{m + 1}")
    rho = Configuration(rho)
    drop = list(instance.graph.induced_edges(block.vertices))
    drop.extend(block.boundary_edges[i - 1 :])
    new_graph = instance.graph.remove_edges(drop)
    pins = dict(instance.pinned)
    for j in range(i - 1):
        u = block.boundary_edges[j][0]
        if u not in rho:
            raise ParseError(f"rho leaves boundary vertex {u} uncolored")
        pins[u] = rho[u]
    return SubInstance(Instance(new_graph, instance.params, pins), block, i)


def _check_limits(diag, limits):
    if limits.max_calls is not None and diag.recursive_calls > limits.max_calls:
        raise BudgetError(
            f"recursion call budget {limits.max_calls} exceeded "
            f"(termination_events={diag.termination_events})"
        )
    if limits.deadline is not None and diag.recursive_calls % 64 == 0:
        if time.monotonic() > limits.deadline:
            raise BudgetError("recursion wall-clock deadline exceeded")


def _logsumexp(values):
    hi = -math.inf
    for x in values:
        if x > hi:
            hi = x
    if hi == -math.inf:
        return -math.inf
    return hi + math.log(math.fsum(math.exp(x - hi) for x in values))


def _block_terms(instance, block, F, anchor, ell, diag, limits):
    """Log-weight of every feasible block configuration, in F's order.

    Each term is log w(rho) plus the log of the product of boundary factors
    1 - (1-beta) p_i(rho); annihilated terms (a factor exactly 0, only
    possible at beta = 0) come back as -inf.
    """
    graph = instance.graph
    params = instance.params
    beta_f = params.beta_float
    one_minus = 1.0 - beta_f
    verts = block.vertices
    pos = {u: i for i, u in enumerate(verts)}
    bedges = block.boundary_edges
    m = len(bedges)
    internal = graph.induced_edges(verts)
    ipos = [(pos[a], pos[b]) for a, b in internal]
    upos = [pos[u] for u, _ in bedges]
    paths = escape_paths(graph, block, anchor)
    ln_beta = math.log(beta_f) if params.beta > 0 else None

    child = []
    for i in range(m):
        _, v_i = bedges[i]
        drop = internal + list(bedges[i:])
        g_i = graph.remove_edges(drop)
        sub_ell = ell - (len(paths[i]) - 1)
        vectors = {}
        prefix_pos = upos[:i]
        for t in F:
            pat = tuple(t[p] for p in prefix_pos)
            if pat in vectors:
                continue
            pins = dict(instance.pinned)
            for j, p in enumerate(prefix_pos):
                pins[verts[p]] = pat[j]
            sub = Instance(g_i, params, pins)
            vectors[pat] = _marg_vector(sub, v_i, sub_ell, diag, limits)
        child.append(vectors)

    terms = []
    for t in F:
        if ln_beta is not None:
            mono = sum(1 for a, b in ipos if t[a] == t[b])
            lw = mono * ln_beta if mono else 0.0
        else:
            lw = 0.0
        alive = True
        prefix = ()
        for i in range(m):
            spin = t[upos[i]]
            phat = child[i][prefix][spin - 1]
            factor = 1.0 - one_minus * phat
            if factor <= 0.0:
                alive = False
                break
            lw += math.log(factor)
            prefix = prefix + (spin,)
        terms.append(lw if alive else -math.inf)
    return terms


def _marg_vector(instance, v, ell, diag, limits):
    """Full per-color estimate vector at v; the scalar API reads one entry."""
    diag.recursive_calls += 1
    _check_limits(diag, limits)
    params = instance.params
    q = params.q
    pin = instance.pinned.get(v)
    if pin is not None:
        out = [0.0] * q
        out[pin - 1] = 1.0
        return out
    beta_positive = params.beta > 0
    if beta_positive and ell < 0:
        diag.termination_events += 1
        return [1.0 / q] * q
    block = minimal_permissive_block(instance, (v,), limits.block_budget)
    if len(block.vertices) > diag.max_block_size:
        diag.max_block_size = len(block.vertices)
    F = feasible_tuples(instance, block.vertices, limits.config_budget)
    if len(F) > diag.max_f_size:
        diag.max_f_size = len(F)
    vpos = block.vertices.index(v)
    if not beta_positive and ell < 0:
        diag.termination_events += 1
        if not F:
            diag.infeasible_events += 1
            return [0.0] * q
        ok = {t[vpos] for t in F}
        return [1.0 / q if x in ok else 0.0 for x in range(1, q + 1)]
    if not F:
        raise InfeasibleError(f"no feasible block configuration around vertex {v}")
    terms = _block_terms(instance, block, F, v, ell, diag, limits)
    den = _logsumexp(terms)
    if den == -math.inf:
        raise InfeasibleError(
            f"block recursion denominator vanished at vertex {v} "
            "(every feasible configuration annihilated)"
        )
    by_color = [[] for _ in range(q)]
    for t, lw in zip(F, terms):
        if lw != -math.inf:
            by_color[t[vpos] - 1].append(lw)
    cap = params.marginal_upper_bound(instance.graph.degree(v))
    out = []
    for lst in by_color:
        num = _logsumexp(lst)
        out.append(0.0 if num == -math.inf else min(math.exp(num - den), cap))
    return out


def _common_checks(instance, v):
    if instance.params.q < 3:
        raise ParseError("the estimator needs q >= 3")
    if not (0 <= v < instance.graph.n):
        raise ParseError(f"vertex {v} out of range")


def marg(instance, v, x, ell, limits=None):
    """Estimate Pr[c(v) = x], beta > 0 variant. Returns (value, diagnostics)."""
    if instance.params.beta == 0:
        raise ParseError("beta = 0: use marg_coloring")
    _common_checks(instance, v)
    if not (1 <= x <= instance.params.q):
        raise ParseError(f"color {x} out of range for q={instance.params.q}")
    diag = MargDiagnostics()
    vec = _marg_vector(instance, v, _depth(ell), diag, limits or RecursionLimits())
    return vec[x - 1], diag


def marg_coloring(instance, v, x, ell, limits=None):
    """Estimate Pr[c(v) = x], beta = 0 (proper coloring) variant."""
    if instance.params.beta != 0:
        raise ParseError("beta > 0: use marg")
    _common_checks(instance, v)
    if not (1 <= x <= instance.params.q):
        raise ParseError(f"color {x} out of range for q={instance.params.q}")
    diag = MargDiagnostics()
    vec = _marg_vector(instance, v, _depth(ell), diag, limits or RecursionLimits())
    return vec[x - 1], diag


def marginal_vector(instance, v, ell, limits=None):
    """Raw clamped per-color estimates at v (no normalization applied)."""
    _common_checks(instance, v)
    diag = MargDiagnostics()
    vec = _marg_vector(instance, v, _depth(ell), diag, limits or RecursionLimits())
    diag.raw_sum = math.fsum(vec)
    return vec, diag


def marginal_distribution(instance, v, ell, limits=None):
    """Normalized per-color estimate vector at v. Returns (vector, diagnostics)."""
    vec, diag = marginal_vector(instance, v, ell, limits)
    s = diag.raw_sum
    if s <= 0.0:
        raise InfeasibleError(f"all colors infeasible at vertex {v}")
    return [x / s for x in vec], diag


def marg_block(instance, block, pi, ell, anchor=None, limits=None):
    """Block-configuration probability estimate for pi among F(block).

    anchor fixes the vertex the escape paths start from; it defaults to the
    lowest block vertex and must match the query vertex when reproducing a
    step of the full recursion.
    """
    limits = limits or RecursionLimits()
    verts = block.vertices
    if anchor is None:
        anchor = verts[0]
    pi = Configuration(pi)
    missing = [u for u in verts if u not in pi]
    if missing:
        raise ParseError(f"pi leaves block vertices {missing} uncolored")
    t_pi = tuple(pi[u] for u in verts)
    F = feasible_tuples(instance, verts, limits.config_budget)
    try:
        idx = F.index(t_pi)
    except ValueError:
        raise ParseError("pi is not a feasible configuration of this block") from None
    diag = MargDiagnostics()
    diag.max_block_size = len(verts)
    diag.max_f_size = len(F)
    terms = _block_terms(instance, block, F, anchor, _depth(ell), diag, limits)
    den = _logsumexp(terms)
    if den == -math.inf:
        raise InfeasibleError(
            "block recursion denominator vanished "
            "(every feasible configuration annihilated)"
        )
    num = terms[idx]
    return 0.0 if num == -math.inf else math.exp(num - den)


def error_bound(graph, v, L, params, alpha, prefactor="conservative"):
    """A-priori truncation error envelope from the walk-sum tail.

    Sums the delta-weighted walk sums over lengths L+1 .. theta*L, where
    theta is derived from the caller-supplied empirical decay rate alpha
    (take it from verify_contraction's gamma), and scales by a feasibility
    prefactor: q + n*ln(1/beta) by default (prefactor="degree" uses the
    vertex degree instead of n), or n*ln(q) when beta = 0.
    """
    if L < 1:
        raise ParseError("depth L must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ParseError(f"alpha must be in (0, 1); got {alpha} (no contraction certified)")
    if prefactor not in ("conservative", "degree"):
        raise ParseError(f"unknown prefactor mode {prefactor!r}")
    q = params.q
    beta_f = params.beta_float
    arg = (q - 1) / (2.0 * (1.0 - beta_f))
    if arg <= 1.0:
        theta = 2
    else:
        theta = max(math.ceil(math.log(arg) / math.log(1.0 / alpha) - 1e-12), 2)
    sums = e_delta_profile(graph, v, theta * L, params)
    tail = math.fsum(sums[L + 1 : theta * L + 1])
    if params.beta == 0:
        pref = graph.n * math.log(q)
    elif prefactor == "conservative":
        pref = q + graph.n * math.log(1.0 / beta_f)
    else:
        pref = q + graph.degree(v) * math.log(1.0 / beta_f)
    return pref * tail
