"""Pure-Python reference implementations used as independent test oracles."""

import cmath
import itertools
import math


def chi(a, q):
    return cmath.exp(2j * math.pi * (a % q) / q)


def eta(a, q):
    a %= q
    if a == 0:
        return 0
    return 1 if any(x * x % q == a for x in range(1, q)) else -1


def brute_dft(values, q, d):
    """values: dict point -> complex.  Returns dict m -> f_hat(m)."""
    pts = list(itertools.product(range(q), repeat=d))
    out = {}
    for m in pts:
        s = 0j
        for x, v in values.items():
            if v:
                s += v * chi(-sum(a * b for a, b in zip(x, m)), q)
        out[m] = s / q**d
    return out


def sphere(q, d, t):
    return [x for x in itertools.product(range(q), repeat=d) if sum(c * c for c in x) % q == t % q]


def nrm(x, q):
    return sum(c * c for c in x) % q


def brute_simplex_count(points, q, spec_flat, k):
    """Ordered (k+1)-tuples of distinct points realizing the labelled distances."""
    pairs = [(i, j) for j in range(1, k + 1) for i in range(j)]
    dist = dict(zip(pairs, spec_flat))
    total = 0
    for tup in itertools.product(points, repeat=k + 1):
        if all(nrm([a - b for a, b in zip(tup[i], tup[j])], q) == dist[(i, j)] % q for i, j in pairs):
            total += 1
    return total
