"""Show how the delta-weighted walk sums decay (or refuse to) per family.

The whole estimator rests on max_v E(v, l) shrinking geometrically in the
walk length l. This script prints the profile for a few graph families and
the fitted per-step rate, including one case (caterpillar at q=5) where the
spine degree saturates delta at 1 and the decay disappears.
"""

from pottsdecay import PottsParams, generate, verify_contraction


def show(label, graph, q, l_max=8):
    params = PottsParams(q, 0)
    rep = verify_contraction(graph, params, l_max)
    verdict = "contracting" if rep["contracting"] else "NOT contracting"
    print(f"{label}  (n={graph.n}, m={graph.m}, q={q}): {verdict}, "
          f"gamma={rep['gamma']:.4f}")
    for l, m in zip(rep["l"], rep["max_e_delta"]):
        bar = "#" * min(60, int(m * 40))
        print(f"  l={l:2d}  max E = {m:10.6f}  {bar}")
    print()


def main():
    show("path(30)", generate("path", n=30), q=7)
    show("cycle(20)", generate("cycle", n=20), q=6)

    # same graph, two q values: bristles push the spine degree to k + 2,
    # and once that degree crosses q - 2 the coefficient caps at 1
    cat = generate("caterpillar", n=30, k=3)
    show("caterpillar(30, 3)", cat, q=9)
    show("caterpillar(30, 3)", cat, q=5)

    show("gnp(60, d=3, seed=1)", generate("gnp", n=60, d=3, seed=1), q=14, l_max=6)


if __name__ == "__main__":
    main()
