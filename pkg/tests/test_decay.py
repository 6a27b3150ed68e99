"""Tests for the truncated block recursion and its support machinery."""

import math
import time

import pytest

from pottsdecay import (
    Block,
    BudgetError,
    DepthBudget,
    Graph,
    InfeasibleError,
    Instance,
    ParseError,
    PottsParams,
    RecursionLimits,
    build_subinstance,
    error_bound,
    escape_paths,
    exact_marginal,
    exact_marginal_vector,
    e_delta_profile,
    generate,
    marg,
    marg_block,
    marg_coloring,
    marginal_distribution,
    marginal_vector,
    minimal_permissive_block,
)


def _inst(graph, q, beta="0", pins=None):
    return Instance(graph, PottsParams(q, beta), pins or {})


# ---------------------------------------------------------------- escape paths


def test_escape_paths_star_leaf_block():
    # center absorbed into the leaf's block; every escape runs through it
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    assert block.vertices == (0, 1)
    paths = escape_paths(inst, block, 1)
    assert paths == [(1, 0, 2), (1, 0, 3), (1, 0, 4), (1, 0, 5)]
    # one path per boundary edge, each ending with the outside endpoint
    for p, (u, w) in zip(paths, block.boundary_edges):
        assert p[-2] == u and p[-1] == w and p[0] == 1


def test_escape_paths_singleton_block():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (0,))
    assert block.vertices == (0,)
    paths = escape_paths(g, block, 0)
    assert paths == [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]


def test_escape_paths_lex_tiebreak():
    # diamond 0-1-3, 0-2-3 plus tail 3-4: two shortest routes, lex one wins
    g = Graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    block = Block((0, 1, 2, 3), ((3, 4),))
    paths = escape_paths(g, block, 0)
    assert paths == [(0, 1, 3, 4)]


def test_escape_paths_shortest():
    # ladder rung: direct hop beats the long way around
    g = generate("cycle", n=6)
    block = Block((0, 1, 2, 3), ((0, 5), (3, 4)))
    paths = escape_paths(g, block, 1)
    assert paths[0] == (1, 0, 5)
    assert paths[1] == (1, 2, 3, 4)


def test_escape_paths_anchor_must_be_inside():
    g = generate("star", k=5)
    block = Block((0, 1), ((0, 2), (0, 3)))
    with pytest.raises(ParseError):
        escape_paths(g, block, 4)


def test_escape_paths_unreachable_anchor():
    # block containing two vertices with no internal route between them
    g = Graph(4, [(0, 1), (2, 3)])
    block = Block((0, 2), ((0, 1),))
    with pytest.raises(ParseError):
        escape_paths(g, block, 2)


# ------------------------------------------------------------- sub-instances


def test_build_subinstance_star_leaf():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    # i=3: first two boundary edges kept, center pinned from rho
    sub = build_subinstance(inst, block, 3, {0: 2, 1: 5})
    assert sub.index == 3
    assert sub.instance.graph.n == 6
    assert sub.instance.graph.edges == ((0, 2), (0, 3))
    assert sub.instance.pinned == {0: 2}
    # parent untouched
    assert inst.pinned == {}
    assert g.edges == tuple(sorted((0, k) for k in range(1, 6)))


def test_build_subinstance_extremes():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    lo = build_subinstance(inst, block, 1, {})
    assert lo.instance.graph.edges == ()
    assert lo.instance.pinned == {}
    hi = build_subinstance(inst, block, block.m + 1, {0: 3, 1: 1})
    assert hi.instance.graph.edges == tuple(block.boundary_edges)
    assert hi.instance.pinned == {0: 3}


def test_build_subinstance_index_range():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    for bad in (0, -1, block.m + 2):
        with pytest.raises(ParseError):
            build_subinstance(inst, block, bad, {0: 1})


def test_build_subinstance_missing_boundary_color():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    with pytest.raises(ParseError, match="uncolored"):
        build_subinstance(inst, block, 2, {1: 4})


def test_build_subinstance_keeps_existing_pins():
    g = generate("path", n=4)
    inst = _inst(g, 7, pins={3: 6})
    block = minimal_permissive_block(inst, (1,))
    sub = build_subinstance(inst, block, 2, {1: 2})
    assert sub.instance.pinned[3] == 6
    assert sub.instance.pinned[1] == 2


# ------------------------------------------------------- depth and work guards


def test_depth_budget_for_graph():
    assert DepthBudget.for_graph(2).remaining == math.ceil(3.0 * math.log(2))
    assert DepthBudget.for_graph(100).remaining == math.ceil(3.0 * math.log(100))
    assert DepthBudget.for_graph(1).remaining >= 1
    assert DepthBudget.for_graph(2, coeff=0.01).remaining == 1
    assert DepthBudget.for_graph(50, coeff=5.0).remaining == math.ceil(5 * math.log(50))


def test_depth_argument_forms():
    g = generate("path", n=3)
    inst = _inst(g, 7)
    direct, _ = marg_coloring(inst, 0, 1, 6)
    budgeted, _ = marg_coloring(inst, 0, 1, DepthBudget(6))
    assert direct == budgeted
    for bad in (True, 2.5, "6", None):
        with pytest.raises(ParseError):
            marg_coloring(inst, 0, 1, bad)


def test_max_calls_guard():
    g = generate("cycle", n=12)
    inst = _inst(g, 7)
    with pytest.raises(BudgetError, match="call budget"):
        marginal_vector(inst, 0, 14, RecursionLimits(max_calls=5))
    # generous cap leaves the answer untouched
    vec, diag = marginal_vector(inst, 0, 14, RecursionLimits(max_calls=10**6))
    assert diag.recursive_calls > 64
    assert math.isclose(sum(vec), 1.0, rel_tol=1e-9)


def test_deadline_guard():
    g = generate("cycle", n=12)
    inst = _inst(g, 7)
    limits = RecursionLimits(deadline=time.monotonic() - 1.0)
    with pytest.raises(BudgetError, match="deadline"):
        marginal_vector(inst, 0, 14, limits)
    # a far-future deadline never fires
    relaxed = RecursionLimits(deadline=time.monotonic() + 3600.0)
    vec, _ = marginal_vector(inst, 0, 14, relaxed)
    assert math.isclose(sum(vec), 1.0, rel_tol=1e-9)


# ------------------------------------------------------------ scalar dispatch


def test_marg_requires_positive_beta():
    g = generate("path", n=3)
    with pytest.raises(ParseError, match="marg_coloring"):
        marg(_inst(g, 7, "0"), 0, 1, 4)
    with pytest.raises(ParseError, match="marg"):
        marg_coloring(_inst(g, 7, "0.5"), 0, 1, 4)


def test_scalar_validation():
    g = generate("path", n=3)
    inst = _inst(g, 7)
    with pytest.raises(ParseError, match="q >= 3"):
        marg_coloring(_inst(g, 2, "0"), 0, 1, 4)
    with pytest.raises(ParseError, match="out of range"):
        marg_coloring(inst, 3, 1, 4)
    with pytest.raises(ParseError, match="out of range"):
        marg_coloring(inst, -1, 1, 4)
    for color in (0, 8):
        with pytest.raises(ParseError, match="color"):
            marg_coloring(inst, 0, color, 4)
    with pytest.raises(ParseError, match="color"):
        marg(_inst(g, 7, "0.5"), 0, 9, 4)


# ----------------------------------------------------------- recursion values


def test_pinned_vertex_is_a_point_mass():
    g = generate("path", n=3)
    inst = _inst(g, 7, pins={1: 4})
    vec, diag = marginal_vector(inst, 1, 5)
    assert vec == [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]
    assert diag.recursive_calls == 1


def test_path3_pinned_end_exact():
    # q=3 path 0-1-2 with c(0)=1: far end sees [1/2, 1/4, 1/4]
    g = generate("path", n=3)
    inst = _inst(g, 3, pins={0: 1})
    vec, diag = marginal_vector(inst, 2, 8)
    assert diag.termination_events == 0
    for got, want in zip(vec, (0.5, 0.25, 0.25)):
        assert math.isclose(got, want, abs_tol=1e-12)
    mid, _ = marginal_vector(inst, 1, 8)
    for got, want in zip(mid, (0.0, 0.5, 0.5)):
        assert math.isclose(got, want, abs_tol=1e-12)


def test_forced_color():
    # triangle with two pinned corners leaves one choice
    g = generate("complete", n=3)
    inst = _inst(g, 3, pins={0: 1, 1: 2})
    vec, _ = marginal_vector(inst, 2, 4)
    assert vec == [0.0, 0.0, 1.0]
    p, diag = marg_coloring(inst, 2, 3, 4)
    assert p == 1.0
    assert diag.termination_events == 0


def test_edge_with_pinned_neighbor_beta_half():
    # Pr[match the pin] = beta / (q - 1 + beta) on a single edge
    g = generate("path", n=2)
    inst = _inst(g, 3, "0.5", pins={0: 1})
    vec, _ = marginal_vector(inst, 1, 6)
    assert math.isclose(vec[0], 0.5 / 2.5, rel_tol=1e-12)
    assert math.isclose(vec[1], 1.0 / 2.5, rel_tol=1e-12)
    assert math.isclose(vec[2], 1.0 / 2.5, rel_tol=1e-12)
    p, _ = marg(inst, 1, 1, 6)
    assert math.isclose(p, 0.2, rel_tol=1e-12)


def test_path3_center_beta_half_matches_oracle():
    g = generate("path", n=3)
    inst = _inst(g, 3, "0.5")
    want = exact_marginal_vector(inst, 1)
    got, diag = marginal_vector(inst, 1, 6)
    assert diag.termination_events == 0
    for a, b in zip(got, want):
        assert math.isclose(a, b, abs_tol=1e-12)


def test_full_depth_matches_oracle_random(corpus200):
    # spot check a slice of the shared corpus at depth n (exact regime)
    rng_slice = corpus200[::40]
    assert len(rng_slice) >= 5
    for inst in rng_slice:
        n = inst.graph.n
        unpinned = [v for v in range(n) if v not in inst.pinned]
        v = unpinned[0]
        got, _ = marginal_vector(inst, v, n, RecursionLimits(config_budget=2**22))
        want = exact_marginal_vector(inst, v)
        for a, b in zip(got, want):
            assert math.isclose(a, b, abs_tol=1e-9)


# -------------------------------------------------------------- base cases


def test_beta_positive_base_case_uniform():
    g = generate("complete", n=4)
    inst = _inst(g, 5, "0.5")
    p, diag = marg(inst, 0, 2, -1)
    assert p == 0.2
    assert diag.termination_events == 1
    assert diag.recursive_calls == 1


def test_beta_zero_base_case_feasibility_indicator():
    # pinned neighbors rule out colors 1 and 2 even in the truncated base case
    g = generate("star", k=2)
    inst = _inst(g, 3, pins={1: 1, 2: 2})
    vec, diag = marginal_vector(inst, 0, -1)
    assert diag.termination_events == 1
    assert vec == [0.0, 0.0, 1.0 / 3.0]


def test_beta_zero_base_case_infeasible_block():
    g = generate("complete", n=4)
    inst = _inst(g, 3)
    vec, diag = marginal_vector(inst, 0, -1)
    assert vec == [0.0, 0.0, 0.0]
    assert diag.infeasible_events == 1
    with pytest.raises(InfeasibleError, match="all colors infeasible"):
        marginal_distribution(inst, 0, -1)


def test_infeasible_instance_raises_at_positive_depth():
    g = generate("complete", n=4)
    inst = _inst(g, 3)
    with pytest.raises(InfeasibleError):
        marg_coloring(inst, 0, 1, 3)


# ------------------------------------------------------------- distribution


def test_marginal_distribution_normalizes():
    g = generate("cycle", n=8)
    inst = _inst(g, 7)
    # shallow depth: raw entries are truncation estimates, sum drifts from 1
    vec, diag = marginal_vector(inst, 0, 1)
    dist_vec, ddiag = marginal_distribution(inst, 0, 1)
    assert math.isclose(sum(dist_vec), 1.0, rel_tol=1e-12)
    assert diag.raw_sum is not None
    for raw, normed in zip(vec, dist_vec):
        assert math.isclose(normed, raw / diag.raw_sum, rel_tol=1e-12)
    assert ddiag.raw_sum == diag.raw_sum


def test_scalar_diag_has_no_raw_sum():
    g = generate("path", n=3)
    _, diag = marg_coloring(_inst(g, 7), 0, 1, 4)
    assert diag.raw_sum is None
    assert diag.recursive_calls >= 1
    assert diag.max_block_size >= 1
    assert diag.max_f_size >= 1


def test_diagnostics_dict_round_trip():
    g = generate("path", n=4)
    vec, diag = marginal_vector(_inst(g, 7), 1, 5)
    d = diag.as_dict()
    assert set(d) == {
        "recursive_calls",
        "termination_events",
        "max_block_size",
        "max_f_size",
        "infeasible_events",
        "raw_sum",
    }
    assert d["recursive_calls"] == diag.recursive_calls
    assert d["raw_sum"] == pytest.approx(sum(vec))


# -------------------------------------------------------------- block queries


def test_marg_block_star_pair():
    # 42 symmetric feasible configurations, deep recursion splits them evenly
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    p = marg_block(inst, block, {0: 1, 1: 2}, 12, anchor=1)
    assert math.isclose(p, 1.0 / 42.0, rel_tol=1e-9)


def test_marg_block_no_boundary_is_gibbs_weight():
    # m=0 block: the estimate is exactly w(pi) / sum of w over F
    g = generate("complete", n=3)
    inst = _inst(g, 3)
    block = minimal_permissive_block(inst, (0,))
    assert block.m == 0
    p = marg_block(inst, block, {0: 1, 1: 2, 2: 3}, 5)
    assert math.isclose(p, 1.0 / 6.0, rel_tol=1e-12)


def test_marg_block_rejects_partial_or_infeasible_pi():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    with pytest.raises(ParseError, match="uncolored"):
        marg_block(inst, block, {0: 1}, 6)
    with pytest.raises(ParseError, match="not a feasible"):
        marg_block(inst, block, {0: 1, 1: 1}, 6)


def test_marg_block_default_anchor_is_lowest_vertex():
    g = generate("star", k=5)
    inst = _inst(g, 7)
    block = minimal_permissive_block(inst, (1,))
    assert marg_block(inst, block, {0: 3, 1: 4}, 9) == marg_block(
        inst, block, {0: 3, 1: 4}, 9, anchor=0
    )


def test_marg_block_probabilities_sum_to_one():
    from pottsdecay import feasible_block_configs

    g = generate("star", k=3)
    inst = _inst(g, 5)
    block = minimal_permissive_block(inst, (1,))
    total = 0.0
    for cfg in feasible_block_configs(inst, block):
        total += marg_block(inst, block, cfg, 8, anchor=1)
    assert math.isclose(total, 1.0, rel_tol=1e-9)


# --------------------------------------------------------------- error bound


def test_error_bound_validation():
    g = generate("path", n=5)
    params = PottsParams(7, "0")
    with pytest.raises(ParseError, match="depth"):
        error_bound(g, 0, 0, params, 0.5)
    for alpha in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(ParseError, match="alpha"):
            error_bound(g, 0, 2, params, alpha)
    with pytest.raises(ParseError, match="prefactor"):
        error_bound(g, 0, 2, params, 0.5, prefactor="optimistic")


def test_error_bound_matches_profile_tail():
    # beta=0: bound = n*ln(q) * tail of the contraction-weighted path sums
    g = generate("path", n=3)
    params = PottsParams(7, "0")
    got = error_bound(g, 0, 1, params, 0.5)
    prof = e_delta_profile(g, 0, 2, params)
    assert math.isclose(got, 3 * math.log(7) * prof[2], rel_tol=1e-12)


def test_error_bound_monotone_in_depth():
    g = generate("path", n=30)
    params = PottsParams(7, "0")
    vals = [error_bound(g, 15, L, params, 0.5) for L in (2, 4, 6, 8)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_error_bound_prefactor_modes():
    g = generate("path", n=12)
    params = PottsParams(7, "0.25")
    wide = error_bound(g, 5, 3, params, 0.5)
    tight = error_bound(g, 5, 3, params, 0.5, prefactor="degree")
    assert 0 < tight < wide
    # at beta=0 the mode makes no difference
    p0 = PottsParams(7, "0")
    assert error_bound(g, 5, 3, p0, 0.5) == error_bound(
        g, 5, 3, p0, 0.5, prefactor="degree"
    )
