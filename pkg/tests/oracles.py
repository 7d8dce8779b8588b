"""Independent brute-force oracles.

Everything here is written as plain loops over definitions, sharing no
code with the package, so the two sides of each check stay independent.
"""

from __future__ import annotations

import itertools
import math


def oracle_mi_discrete(zi, zj) -> float:
    """Direct summation over the joint table, times N."""
    n = len(zi)
    joint: dict[tuple, int] = {}
    mi_count: dict = {}
    mj_count: dict = {}
    for a, b in zip(zi, zj):
        joint[(a, b)] = joint.get((a, b), 0) + 1
        mi_count[a] = mi_count.get(a, 0) + 1
        mj_count[b] = mj_count.get(b, 0) + 1
    total = 0.0
    for (a, b), c in joint.items():
        f_uv = c / n
        f_u = mi_count[a] / n
        f_v = mj_count[b] / n
        total += f_uv * math.log(f_uv / (f_u * f_v))
    return total * n


def _biased_var(values) -> float:
    m = sum(values) / len(values)
    return sum((v - m) ** 2 for v in values) / len(values)


def oracle_mi_homogeneous(z, y) -> float:
    n = len(y)
    s0 = _biased_var(list(y))
    groups: dict = {}
    for a, b in zip(z, y):
        groups.setdefault(a, []).append(b)
    s = sum(len(g) * _biased_var(g) for g in groups.values()) / n
    return 0.5 * n * math.log(s0 / s)


def oracle_mi_heterogeneous(z, y) -> float:
    n = len(y)
    s0 = _biased_var(list(y))
    groups: dict = {}
    for a, b in zip(z, y):
        groups.setdefault(a, []).append(b)
    tail = sum(len(g) * math.log(_biased_var(g)) for g in groups.values())
    return 0.5 * n * math.log(s0) - 0.5 * tail


def oracle_mi_continuous(a, b) -> float:
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    r2 = cov * cov / (va * vb)
    return -0.5 * n * math.log(1.0 - r2)


def _is_forest(v: int, edges) -> bool:
    parent = list(range(v))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _forbidden(v: int, edges, kinds) -> bool:
    """Enumerate all simple paths between discrete pairs; look for a
    continuous interior node."""
    adj = {i: set() for i in range(v)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)

    def paths(a, b, seen):
        if a == b:
            yield [b]
            return
        for nxt in adj[a]:
            if nxt not in seen:
                for rest in paths(nxt, b, seen | {nxt}):
                    yield [a] + rest

    discrete = [i for i in range(v) if kinds[i] == "discrete"]
    for a, b in itertools.combinations(discrete, 2):
        for path in paths(a, b, {a}):
            if any(kinds[node] == "continuous" for node in path[1:-1]):
                return True
    return False


def oracle_best_forest_weight(weights, kinds=None) -> float:
    """Max total weight over all forests (optionally constraint-respecting).

    Only positive-weight edges matter: removing a non-positive edge
    from any forest keeps it a forest and cannot lower the total.
    """
    v = len(weights)
    candidates = [(i, j) for i, j in itertools.combinations(range(v), 2)
                  if weights[i][j] > 0]
    best = 0.0
    for r in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, r):
            if not _is_forest(v, subset):
                continue
            if kinds is not None and _forbidden(v, subset, kinds):
                continue
            best = max(best, sum(weights[i][j] for i, j in subset))
    return best


def oracle_has_forbidden_path(bits, kinds) -> bool:
    v = len(bits)
    edges = [(i, j) for i in range(v) for j in range(i + 1, v) if bits[i][j]]
    return _forbidden(v, edges, kinds)


def oracle_log_likelihood_product(beta, x, y) -> float:
    """Literal product-form Bernoulli likelihood, then log."""
    prod = 1.0
    for row, yi in zip(x, y):
        eta = sum(b * v for b, v in zip(beta, row))
        theta = math.exp(eta) / (1.0 + math.exp(eta))
        prod *= theta ** yi * (1.0 - theta) ** (1 - yi)
    return math.log(prod)


def finite_difference_gradient(fn, beta, h: float = 1e-5):
    grad = []
    for k in range(len(beta)):
        up = list(beta)
        dn = list(beta)
        up[k] += h
        dn[k] -= h
        grad.append((fn(up) - fn(dn)) / (2.0 * h))
    return grad
