"""Independent reference values for the unit tests.

Brute force over edge subsets, host configurations and permutations, with
exact rationals where possible and mpmath quadrature for the normal law.
Run: python3 tests/oracles/compute_oracles.py
"""

from fractions import Fraction as Fr
from itertools import combinations, permutations, product
from math import comb, factorial, log, sqrt

import mpmath as mp
import networkx as nx
from networkx.algorithms import isomorphism

mp.mp.dps = 30


def pattern(name):
    if name == "edge":
        return 2, [(0, 1)]
    if name == "triangle":
        return 3, [(0, 1), (1, 2), (0, 2)]
    if name == "P3":
        return 3, [(0, 1), (1, 2)]
    if name == "C4":
        return 4, [(0, 1), (1, 2), (2, 3), (0, 3)]
    if name == "K4":
        return 4, list(combinations(range(4), 2))
    if name == "tri+pendant":
        return 4, [(0, 1), (1, 2), (0, 2), (2, 3)]
    raise KeyError(name)


def profiles(v, edges):
    out = {}
    for r in range(1, len(edges) + 1):
        for sub in combinations(edges, r):
            vh = len({x for e in sub for x in e})
            out[(vh, r)] = out.get((vh, r), 0) + 1
    return out


def beta(v, edges):
    return max(Fr(e, vh) for (vh, e) in profiles(v, edges))


def balanced(v, edges):
    target = Fr(len(edges) - 1, v - 2)
    return max(Fr(e - 1, vh - 2) for (vh, e) in profiles(v, edges) if vh >= 3) == target


def min_term(v, edges, n, p):
    return min(n**vh * p**e for (vh, e) in profiles(v, edges))


def max_var_term(v, edges, n, p):
    eg = len(edges)
    return max(n ** (2 * v - vh) * p ** (2 * eg - e) for (vh, e) in profiles(v, edges))


def automorphisms(v, edges):
    es = {frozenset(e) for e in edges}
    return sum(1 for s in permutations(range(v)) if {frozenset((s[a], s[b])) for a, b in edges} == es)


def copies(v, edges, host_edges):
    """Edge subsets of the host isomorphic to the pattern (networkx matcher)."""
    G = nx.Graph(edges)
    H = nx.Graph(host_edges)
    found = set()
    gm = isomorphism.GraphMatcher(H, G)
    for m in gm.subgraph_monomorphisms_iter():
        inv = {b: a for a, b in m.items()}
        found.add(frozenset(frozenset((inv[a], inv[b])) for a, b in edges))
    return found


def exact_mean_var(v, edges, n, p, m1, var):
    """Brute force over every presence configuration of K_n."""
    kn = list(combinations(range(n), 2))
    cps = [list(c) for c in copies(v, edges, kn)]
    index = {frozenset(e): i for i, e in enumerate(kn)}
    cps = [[index[e] for e in c] for c in cps]
    ew = ew2 = Fr(0)
    for mask in product((0, 1), repeat=len(kn)):
        prob = Fr(1)
        for bit in mask:
            prob *= p if bit else 1 - p
        c = [0] * len(kn)
        for cp in cps:
            if all(mask[e] for e in cp):
                for e in cp:
                    c[e] += 1
        mean = m1 * sum(c)
        ew += prob * mean
        ew2 += prob * (mean * mean + var * sum(x * x for x in c))
    return ew, ew2 - ew * ew


def w1_normal(samples):
    xs = sorted(samples)
    m = len(xs)
    F = lambda x: sum(1 for s in xs if s <= x) / m
    pts = [-mp.inf] + xs + [mp.inf]
    total = mp.mpf(0)
    for a, b in zip(pts[:-1], pts[1:]):
        level = F(a) if a != -mp.inf else 0
        breaks = [a, b]
        if 0 < level < 1:
            z = mp.sqrt(2) * mp.erfinv(2 * mp.mpf(level) - 1)
            if a < z < b:
                breaks = [a, z, b]
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            total += mp.quad(lambda x: abs(level - mp.ncdf(x)), [lo, hi])
    return total


def main():
    print("== pattern_graphs")
    for name in ("triangle", "P3", "edge", "K4", "tri+pendant"):
        v, e = pattern(name)
        print(name, "profiles", sorted(profiles(v, e).items()), "beta", beta(v, e),
              "aut", automorphisms(v, e), "balanced", balanced(v, e) if v >= 3 else None)
    print("min_term triangle 10 0.1", min_term(3, pattern("triangle")[1], 10, Fr(1, 10)))
    print("min_term P3 10 0.01", min_term(3, pattern("P3")[1], 10, Fr(1, 100)))
    print("max_var triangle 10 0.1", max_var_term(3, pattern("triangle")[1], 10, Fr(1, 10)))
    print("max_var triangle 10 0.9", float(max_var_term(3, pattern("triangle")[1], 10, Fr(9, 10))))
    for n in range(3, 8):
        print("triangle copies in K_%d" % n, len(copies(3, pattern("triangle")[1], list(combinations(range(n), 2)))))
    c4host = [(0, 1), (1, 2), (2, 3), (0, 3)]
    print("triangle in C4", len(copies(3, pattern("triangle")[1], c4host)))
    print("P3 in triangle", len(copies(3, pattern("P3")[1], pattern("triangle")[1])))

    print("== weight_models")
    u = dict(m1=Fr(1, 2), var=Fr(1, 12), c4=Fr(1, 80), m2=Fr(1, 3))
    print("uniform", u, "kurtosis", u["c4"] / u["var"] ** 2, "m4", Fr(1, 5))
    ratio = lambda c4, var, m1, p: (sqrt(c4) + (1 - p) * m1**2) / (var + (1 - p) * m1**2)
    print("moment_ratio unif 0.5", ratio(1 / 80, 1 / 12, 0.5, 0.5))
    print("moment_ratio unif 0.1", ratio(1 / 80, 1 / 12, 0.5, 0.1))
    print("moment_ratio exp1 0.9", ratio(9, 1, 1, 0.9))

    print("== graph_weight_stats")
    print("edge n3 p1/2 const", exact_mean_var(2, [(0, 1)], 3, Fr(1, 2), 1, 0))
    print("triangle n3 p1/2 const", exact_mean_var(3, pattern("triangle")[1], 3, Fr(1, 2), 1, 0))
    print("triangle n4 p1/2 unif", exact_mean_var(3, pattern("triangle")[1], 4, Fr(1, 2), Fr(1, 2), Fr(1, 12)))
    print("triangle n4 p1/2 const", exact_mean_var(3, pattern("triangle")[1], 4, Fr(1, 2), 1, 0))
    print("triangle n4 p1/2 twopoint(1,3,.5)", exact_mean_var(3, pattern("triangle")[1], 4, Fr(1, 2), 2, 1))
    print("P3 n5 p1/5 exp1", [float(x) for x in exact_mean_var(3, pattern("P3")[1], 5, Fr(1, 5), 1, 1)])
    print("C4 n5 p4/5 unif", [float(x) for x in exact_mean_var(4, pattern("C4")[1], 5, Fr(4, 5), Fr(1, 2), Fr(1, 12))])
    print("edge n10 p1/2 const var", 45 * 0.25)

    print("== stein_bounds")
    rate = lambda mt, p: ((1 - p) * mt) ** -0.5
    print("rate triangle 10 0.1", rate(1.0, 0.1))
    print("rate edge 100 0.5", rate(100**2 * 0.5, 0.5))
    print("dense triangle n100 p.9 unif", sqrt(1 / 5) / (100 * sqrt(0.1) * (1 / 12)))
    print("low P3 n10 p.05 unif", sqrt(1 / 5) / (10**1.5 * 0.05 * (1 / 3)))

    print("== empirical_distance")
    print("ncdf(1)", mp.ncdf(1))
    print("w1 {0}", w1_normal([0.0]), "2 phi(0)", 2 * mp.npdf(0))
    print("w1 {-1,1}", w1_normal([-1.0, 1.0]))
    print("w1 {-0.3,0.2,1.5}", w1_normal([-0.3, 0.2, 1.5]))

    print("== chaos")
    # Rademacher I_1(f): f = +-1 split on one block; stein total 2, d_W as above.
    # Contraction bound: E X^2 = 1 and ||f *_1^0 f||^2 over Lebesgue measure = int f^4 = 2.
    print("contraction bound rademacher", sqrt(2))
    print("stein K-block total", [2 / sqrt(K) for K in (1, 4, 8)])


if __name__ == "__main__":
    main()
