"""Watch truncated marginals converge to the brute-force answer as depth grows.

For instances small enough to enumerate, the recursion run at depth L should
approach the exact marginal as L grows. The tables print the observed worst
per-color error next to the a-priori envelope derived from the walk-sum tail.
Two shapes show up. With pins at mixed distances every extra level picks up
more of their influence, so the error walks down a staircase. With a single
far pin the error is flat (the pin's entire influence) until the horizon
reaches it, then collapses to machine precision. The envelope decays
geometrically either way and stays above the truth throughout.
"""

from pottsdecay import (
    Instance,
    PottsParams,
    error_bound,
    exact_marginal_vector,
    generate,
    marginal_distribution,
    verify_contraction,
)


def sweep(label, instance, v, depths):
    exact = exact_marginal_vector(instance, v)
    rep = verify_contraction(instance.graph, instance.params, 10)
    print(f"{label}: querying vertex {v}, fitted rate gamma={rep['gamma']:.3f}")
    print(f"  exact vector: {[round(p, 6) for p in exact]}")
    print(f"  {'L':>3}  {'worst |error|':>14}  {'a-priori bound':>14}  calls")
    for L in depths:
        vec, diag = marginal_distribution(instance, v, L)
        err = max(abs(a - b) for a, b in zip(vec, exact))
        bound = error_bound(instance.graph, v, L, instance.params, rep["gamma"])
        print(f"  {L:>3}  {err:>14.3e}  {bound:>14.3e}  {diag.recursive_calls}")
    print()


def main():
    cyc = generate("cycle", n=9)
    near = Instance(cyc, PottsParams(6, 0), pinned={0: 1, 1: 2})
    sweep("cycle(9), q=6, beta=0, pins {0:1, 1:2}", near, v=4,
          depths=(1, 2, 3, 4, 6, 9))

    path = generate("path", n=9)
    far = Instance(path, PottsParams(6, 0), pinned={8: 2})
    sweep("path(9), q=6, beta=0, single far pin {8:2}", far, v=0,
          depths=(1, 2, 3, 4, 5, 6, 7, 8))

    soft = Instance(cyc, PottsParams(5, "0.25"), pinned={0: 3, 1: 1})
    sweep("cycle(9), q=5, beta=1/4, pins {0:3, 1:1}", soft, v=4,
          depths=(1, 2, 3, 4, 6, 9))


if __name__ == "__main__":
    main()
