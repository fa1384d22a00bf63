"""Independent brute-force oracles for one-step outcome distributions.

Everything here is computed from first principles with exhaustive
enumeration (math.comb, itertools); none of it touches the package under
test. Tests compare Monte Carlo frequencies from the engine against these
values.
"""

import itertools
import math


def binom_pmf(n, p):
    """{k: P(X = k)} for X ~ Binomial(n, p)."""
    return {k: math.comb(n, k) * p**k * (1 - p) ** (n - k)
            for k in range(n + 1)}


def si_star_one_step(beta, leaves=4):
    """Star, center infected: distribution of newly infected leaves."""
    return binom_pmf(leaves, beta)


def sir_two_node_one_step(beta, gamma):
    """Edge u(I)-v(S): joint one-step outcome probabilities.

    Keys are (u_status, v_status) with statuses "I"/"R" for u and
    "S"/"I" for v; the contact and recovery draws are independent.
    """
    out = {}
    for v_inf in (False, True):
        for u_rec in (False, True):
            p = (beta if v_inf else 1 - beta) * \
                (gamma if u_rec else 1 - gamma)
            out[("R" if u_rec else "I", "I" if v_inf else "S")] = p
    return out


def swir_single_contact(kappa, mu):
    """One S node facing one infected neighbor: single-draw partition."""
    return {"Infected": kappa, "Weakened": mu,
            "Susceptible": 1 - kappa - mu}


def ic_star_one_step(p, leaves=3):
    """Star, center newly active: distribution of activated leaves."""
    return binom_pmf(leaves, p)


def majority_expected_gain(n, plus, group_size):
    """Exact expected one-update gain in +1 count on n spins.

    Enumerates every size-r node group; a group with a strict +1 majority
    (ties count as +1) converts wholly to +1, else wholly to -1.
    """
    total = 0.0
    groups = 0
    plus_set = set(range(plus))  # which nodes hold +1 is irrelevant by symmetry
    for group in itertools.combinations(range(n), group_size):
        k = sum(1 for g in group if g in plus_set)
        if 2 * k >= group_size:
            gain = group_size - k
        else:
            gain = -k
        total += gain
        groups += 1
    return total / groups


def majority_gain_variance(n, plus, group_size):
    """Exact variance of the one-update gain (companion to the mean)."""
    mean = majority_expected_gain(n, plus, group_size)
    total = 0.0
    groups = 0
    plus_set = set(range(plus))
    for group in itertools.combinations(range(n), group_size):
        k = sum(1 for g in group if g in plus_set)
        gain = (group_size - k) if 2 * k >= group_size else -k
        total += (gain - mean) ** 2
        groups += 1
    return total / groups


def threshold_cascade(adjacency, thresholds, seeds, steps):
    """Exhaustive simulation of the deterministic strict-threshold rule.

    Args:
        adjacency: {node: iterable of neighbors}.
        thresholds: {node: tau}.
        seeds: initially active nodes.
        steps: number of synchronous updates.

    Returns:
        List of frozensets: active set after each step, seeds first.
    """
    active = set(seeds)
    history = [frozenset(active)]
    for _ in range(steps):
        nxt = set(active)
        for u, nbrs in adjacency.items():
            nbrs = list(nbrs)
            if u in active or not nbrs:
                continue
            frac = sum(1 for v in nbrs if v in active) / len(nbrs)
            if frac > thresholds[u]:
                nxt.add(u)
        active = nxt
        history.append(frozenset(active))
    return history


def seis_two_node_three_steps(beta, epsilon, lam):
    """Exact joint distribution after 3 synchronous steps of an
    exposure-incubation-relapse chain on the edge u-v, u infectious and
    v susceptible at the start.

    Node statuses: "S", "E", "I". Per step, against the frozen pair:
    an I node turns an S neighbor into E with beta; E becomes I with
    epsilon; I relapses to S with lam. Returns {(u, v): probability}.
    """
    dist = {("I", "S"): 1.0}
    for _ in range(3):
        nxt = {}

        def put(state, p):
            if p > 0:
                nxt[state] = nxt.get(state, 0.0) + p

        for (a, b), p in dist.items():
            a_next = []
            b_next = []
            # per-node marginal transitions given the frozen pair
            for me, other, acc in ((a, b, a_next), (b, a, b_next)):
                if me == "S":
                    if other == "I":
                        acc.append(("E", beta))
                        acc.append(("S", 1 - beta))
                    else:
                        acc.append(("S", 1.0))
                elif me == "E":
                    acc.append(("I", epsilon))
                    acc.append(("E", 1 - epsilon))
                else:
                    acc.append(("S", lam))
                    acc.append(("I", 1 - lam))
            for sa, pa in a_next:
                for sb, pb in b_next:
                    put((sa, sb), p * pa * pb)
        dist = nxt
    return dist


def nearest_rank(sorted_values, pct):
    """Nearest-rank percentile: 1-based rank ceil(pct/100 * m)."""
    m = len(sorted_values)
    rank = max(1, math.ceil(pct / 100.0 * m))
    return sorted_values[min(rank, m) - 1]


def average_clustering(adjacency):
    """Mean local clustering coefficient; degree < 2 contributes 0."""
    total = 0.0
    n = 0
    sets = {u: set(vs) for u, vs in adjacency.items()}
    for u, nbrs in sets.items():
        n += 1
        d = len(nbrs)
        if d < 2:
            continue
        links = 0
        for a, b in itertools.combinations(nbrs, 2):
            if b in sets[a]:
                links += 1
        total += 2.0 * links / (d * (d - 1))
    return total / n if n else 0.0
