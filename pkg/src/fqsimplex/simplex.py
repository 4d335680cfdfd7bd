"""Counting ordered point configurations with prescribed pairwise norms.

For a side-length set ``l_k = {t_ij : 0 <= i < j <= k}`` and ``E`` in F_q^d,
``T(l_k)`` is the set of ordered tuples ``(x_0, ..., x_k)`` in ``E^(k+1)``
with ``||x_i - x_j|| = t_ij``.  Three exact counters are provided:

``naive``
    Broadcast filter over all of ``E^(k+1)``.  The oracle; tiny inputs only.
``dfs``
    Depth-first extension over per-point adjacency masks.  The final two
    levels are collapsed into one vectorized mask intersection.
``correlation``
    Enumerate translation shapes ``(0, u_1, ..., u_(k-1))`` of the first k
    vertices in the full space, then count completions for every anchor x at
    once as a cyclic cross-correlation of E with the completion set,
    computed with ``scipy.fft`` and rounded.  Cost depends on q^d rather
    than |E|, which is what makes dense d = 6 instances feasible.

All three agree exactly; the test suite checks this on seeded instances.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.fft

from . import linalg
from .errors import InstanceTooLarge, ResidualTooLarge
from .field import all_points, encode, field_ctx, norm_grid
from .fourier import ROUNDING_TOLERANCE, GridFunction, correlate_count
from .sphere import SphereSpec, sphere_indicator, sphere_points, sphere_size

DEFAULT_BUDGET = 10**8
DEFAULT_C_TEST = 4.0


@dataclass(frozen=True)
class SimplexSpec:
    """Side lengths ``t_ij`` for ``0 <= i < j <= k``.

    The flat order is the recursive one: ``t01, t02, t12, t03, t13, t23, ...``
    (all lengths to vertex j, then vertex j+1).
    """

    k: int
    distances: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        expected = {(i, j) for j in range(1, self.k + 1) for i in range(j)}
        got = set(self.distances)
        if got != expected:
            raise ValueError(f"need exactly the {len(expected)} pairs i<j<={self.k}, got {sorted(got)}")
        object.__setattr__(self, "distances", {p: int(self.distances[p]) for p in sorted(expected)})

    @staticmethod
    def pairs(k: int) -> list[tuple[int, int]]:
        return [(i, j) for j in range(1, k + 1) for i in range(j)]

    @classmethod
    def from_flat(cls, k: int, values: Sequence[int]) -> "SimplexSpec":
        pairs = cls.pairs(k)
        if len(values) != len(pairs):
            raise ValueError(f"k={k} needs {len(pairs)} side lengths, got {len(values)}")
        return cls(k, dict(zip(pairs, values)))

    @classmethod
    def uniform(cls, k: int, t: int) -> "SimplexSpec":
        return cls.from_flat(k, [t] * math.comb(k + 1, 2))

    def flat(self) -> list[int]:
        return [self.distances[p] for p in self.pairs(self.k)]

    @property
    def label(self) -> str:
        return "-".join(str(t) for t in self.flat())

    def t(self, i: int, j: int) -> int:
        return self.distances[(min(i, j), max(i, j))]

    def validate(self, q: int) -> None:
        bad = [p for p, t in self.distances.items() if t % q == 0]
        if bad:
            raise ValueError(f"side lengths must be nonzero mod {q}; zero at {bad}")

    def reduced(self, q: int) -> "SimplexSpec":
        return SimplexSpec(self.k, {p: t % q for p, t in self.distances.items()})

    def prefix(self) -> "SimplexSpec":
        """The side-length set on vertices ``0..k-1``."""
        if self.k < 2:
            raise ValueError("k = 1 has no simplex prefix")
        return SimplexSpec(self.k - 1, {p: t for p, t in self.distances.items() if p[1] < self.k})

    def relabel(self, perm: Sequence[int]) -> "SimplexSpec":
        """Spec seen by tuples ``y`` with ``y[perm[i]] = x[i]``."""
        if sorted(perm) != list(range(self.k + 1)):
            raise ValueError("perm must be a permutation of 0..k")
        out = {}
        for (i, j), t in self.distances.items():
            a, b = perm[i], perm[j]
            out[(min(a, b), max(a, b))] = t
        return SimplexSpec(self.k, out)


class PointSet:
    """A set E of distinct points in F_q^d."""

    def __init__(self, q: int, d: int, points: Iterable[Sequence[int]] = ()):
        field_ctx(q)
        if d < 1:
            raise ValueError("d must be >= 1")
        pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=np.int64)
        pts = pts.reshape(-1, d) % q
        idx = encode(pts, q) if len(pts) else np.zeros(0, dtype=np.int64)
        if len(np.unique(idx)) != len(idx):
            raise ValueError("points must be distinct")
        self.q, self.d = q, d
        self.points = pts
        self.points.setflags(write=False)

    @classmethod
    def full(cls, q: int, d: int) -> "PointSet":
        return cls(q, d, all_points(q, d))

    @classmethod
    def from_mask(cls, mask, q: int, d: int) -> "PointSet":
        mask = np.asarray(mask, dtype=bool).reshape(-1)
        return cls(q, d, all_points(q, d)[mask])

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"PointSet(q={self.q}, d={self.d}, size={len(self)})"

    @cached_property
    def indicator(self) -> GridFunction:
        return GridFunction.indicator(self.points, self.q, self.d)

    def mask_grid(self) -> np.ndarray:
        return (self.indicator.values != 0).reshape((self.q,) * self.d)

    def transformed(self, u) -> "PointSet":
        """Image under an affine map (anything callable on an ``(n, d)`` array)."""
        return PointSet(self.q, self.d, u(self.points) if len(self) else self.points)

    def issubset(self, other: "PointSet") -> bool:
        return bool(np.all(other.indicator.values[encode(self.points, self.q)] != 0)) if len(self) else True


def pairwise_norms(points: np.ndarray, q: int, chunk: int = 512) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    n = pts.shape[0]
    out = np.empty((n, n), dtype=np.int32)
    for lo in range(0, n, chunk):
        diff = pts[lo:lo + chunk, None, :] - pts[None, :, :]
        out[lo:lo + chunk] = (diff * diff).sum(axis=-1) % q
    return out


# pair counting


def count_pairs(e: PointSet, t: int, strategy: str = "direct") -> int:
    """Ordered pairs in E x E at norm distance t (t nonzero)."""
    q = e.q
    t = int(t) % q
    if t == 0:
        raise ValueError("t must be nonzero mod q")
    if strategy == "direct":
        if len(e) == 0:
            return 0
        return int(np.count_nonzero(pairwise_norms(e.points, q) == t))
    if strategy == "spectral":
        return correlate_count(e.indicator, sphere_indicator(SphereSpec(q, e.d, t)))
    raise ValueError(f"unknown strategy {strategy!r}")


# general position


def is_general_position(points: Sequence[Sequence[int]], q: int) -> bool:
    """True iff the k difference vectors ``x_i - x_0`` have rank k over F_q."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64)) % q
    k = pts.shape[0] - 1
    if k == 0:
        return True
    if k > pts.shape[1]:
        return False
    return linalg.rank((pts[1:] - pts[0]) % q, q) == k


# cost model


def dfs_cost(n: int, q: int, k: int, nondegenerate_only: bool = False) -> float:
    """Projected mask-element operations for the DFS counter.

    Each partial tuple of length ``j`` is expected to number
    ``n^j q^-C(j,2)``; every length-``k`` prefix costs one length-n mask
    pass, plus ``n^2`` to build adjacency.
    """
    cost = float(n) * n
    for j in range(1, k + 1):
        cost += n * float(n) ** j * float(q) ** (-math.comb(j, 2))
    if nondegenerate_only:
        cost += float(n) ** (k + 1) * float(q) ** (-math.comb(k + 1, 2)) * (k + 1) ** 3
    return cost


def correlation_cost(q: int, d: int, k: int) -> float:
    """Projected grid-element operations for the correlation counter."""
    shapes = float(q) ** ((k - 1) * d - math.comb(k, 2))
    return max(shapes, 1.0) * q**d


def naive_cost(n: int, k: int) -> float:
    return float(n) ** (k + 1)


# counters


def _check_instance(e: PointSet, spec: SimplexSpec) -> SimplexSpec:
    spec.validate(e.q)
    spec = spec.reduced(e.q)
    if e.d <= math.comb(spec.k + 1, 2):
        warnings.warn(
            f"d={e.d} <= C({spec.k + 1},2)={math.comb(spec.k + 1, 2)}: counts here fall outside the regime where every simplex shape is guaranteed to occur",
            stacklevel=3,
        )
    return spec


def count_simplices_naive(e: PointSet, spec: SimplexSpec, nondegenerate_only: bool = False,
                          budget: float = DEFAULT_BUDGET) -> int:
    """Filter all of ``E^(k+1)`` by broadcasting the pairwise distance tests."""
    spec.validate(e.q)
    spec = spec.reduced(e.q)
    n, k = len(e), spec.k
    if n == 0:
        return 0
    if naive_cost(n, k) > budget:
        raise InstanceTooLarge(f"naive filter needs |E|^{k + 1} = {naive_cost(n, k):.3g} > budget {budget:.3g}")
    dist = pairwise_norms(e.points, e.q)
    ok = np.ones((n,) * (k + 1), dtype=bool)
    for (i, j), t in spec.distances.items():
        shape = [1] * (k + 1)
        shape[i], shape[j] = n, n
        ok &= (dist == t).reshape(shape)
    if not nondegenerate_only:
        return int(np.count_nonzero(ok))
    return sum(1 for tup in np.argwhere(ok) if is_general_position(e.points[tup], e.q))


def _adjacency(e: PointSet, spec: SimplexSpec) -> dict[int, np.ndarray]:
    dist = pairwise_norms(e.points, e.q)
    return {t: dist == t for t in sorted(set(spec.distances.values()))}


def _dfs_from(x0_list, adj, spec: SimplexSpec, n: int, points, q: int, nondegenerate_only: bool) -> int:
    k = spec.k
    total = 0

    def extend(j, chosen, pending):
        nonlocal total
        if not nondegenerate_only and j == k - 1:
            cand = np.flatnonzero(pending[k - 1])
            if cand.size:
                rows = adj[spec.t(k - 1, k)][cand]
                total += int(np.count_nonzero(rows & pending[k]))
            return
        cand = np.flatnonzero(pending[j])
        if j == k:
            for x in cand:
                if is_general_position(points[chosen + [x]], q):
                    total += 1
            return
        for x in cand:
            nxt = {jj: pending[jj] & adj[spec.t(j, jj)][x] for jj in range(j + 1, k + 1)}
            extend(j + 1, chosen + [int(x)], nxt)

    for x0 in x0_list:
        if k == 1 and not nondegenerate_only:
            total += int(np.count_nonzero(adj[spec.t(0, 1)][x0]))
            continue
        pending = {jj: adj[spec.t(0, jj)][x0].copy() for jj in range(1, k + 1)}
        extend(1, [int(x0)], pending)
    return total


def count_simplices_dfs(e: PointSet, spec: SimplexSpec, nondegenerate_only: bool = False,
                        budget: float = DEFAULT_BUDGET, threads: int = 1) -> int:
    """Depth-first extension over adjacency masks ``dist[t][x] = {y : ||x - y|| = t}``."""
    spec.validate(e.q)
    spec = spec.reduced(e.q)
    n = len(e)
    if n == 0:
        return 0
    cost = dfs_cost(n, e.q, spec.k, nondegenerate_only)
    if cost > budget:
        raise InstanceTooLarge(f"DFS projected work {cost:.3g} exceeds budget {budget:.3g}")
    adj = _adjacency(e, spec)
    threads = max(1, int(threads))
    if threads == 1:
        return _dfs_from(range(n), adj, spec, n, e.points, e.q, nondegenerate_only)
    parts = np.array_split(np.arange(n), threads)
    with ThreadPoolExecutor(threads) as pool:
        futures = [pool.submit(_dfs_from, part, adj, spec, n, e.points, e.q, nondegenerate_only) for part in parts]
        return sum(f.result() for f in futures)


def _shapes(spec: SimplexSpec, q: int, d: int) -> np.ndarray:
    """All ``(u_1, ..., u_(k-1))`` in F_q^d with ``u_0 = 0`` realizing the first k vertices.

    Returns an array of shape ``(n_shapes, k-1, d)``.
    """
    k = spec.k
    if k == 1:
        return np.zeros((1, 0, d), dtype=np.int64)
    spheres = {t: sphere_points(SphereSpec(q, d, t)) for t in set(spec.distances.values())}
    partial = spheres[spec.t(0, 1)][:, None, :]
    for j in range(2, k):
        grown = []
        cand = spheres[spec.t(0, j)]
        for row in partial:
            ok = np.ones(len(cand), dtype=bool)
            for i in range(1, j):
                diff = cand - row[i - 1]
                ok &= (diff * diff).sum(axis=1) % q == spec.t(i, j)
            if ok.any():
                sel = cand[ok]
                grown.append(np.concatenate([np.broadcast_to(row, (len(sel),) + row.shape), sel[:, None, :]], axis=1))
        if not grown:
            return np.zeros((0, j, d), dtype=np.int64)
        partial = np.concatenate(grown, axis=0)
    return partial


def _shift_index(shapes_axis: np.ndarray, coords: np.ndarray, q: int, sign: int) -> np.ndarray:
    """Flat indices of ``x + sign * u`` for every x and every u in a batch: shape ``(B, q^d)``."""
    d = coords.shape[1]
    r = np.arange(q, dtype=np.int32)
    idx = np.zeros((shapes_axis.shape[0], coords.shape[0]), dtype=np.int32)
    for i in range(d):
        # table[u, x] = ((x + sign u) mod q) * q^(d-1-i)
        table = ((r[None, :] + sign * r[:, None]) % q) * np.int32(q ** (d - 1 - i))
        idx += table[shapes_axis[:, i, None], coords[None, :, i]]
    return idx


def _correlation_batch(shapes, e_flat, e_hat, norm_flat, coords, spec: SimplexSpec, q: int, d: int) -> int:
    k = spec.k
    axes = tuple(range(1, d + 1))
    g = np.broadcast_to(e_flat, (len(shapes), e_flat.shape[0])).copy()
    # completion set: w with ||w - u_i|| = t_ik for i < k (u_0 = 0)
    m = np.broadcast_to(norm_flat == spec.t(0, k), g.shape).copy()
    for i in range(1, k):
        u = shapes[:, i - 1, :]
        g &= e_flat[_shift_index(u, coords, q, 1)]
        m &= norm_flat[_shift_index(u, coords, q, -1)] == spec.t(i, k)
    keep = g.any(axis=1)
    if not keep.any():
        return 0
    g, m = g[keep], m[keep]
    grid = (g.shape[0],) + (q,) * d
    m_hat = scipy.fft.rfftn(m.reshape(grid).astype(float), axes=axes)
    # h[x] = sum_w m(w) e(x + w)
    h = scipy.fft.irfftn(np.conj(m_hat) * e_hat[None], s=(q,) * d, axes=axes).reshape(g.shape)
    h_int = np.rint(h)
    err = float(np.max(np.abs(h - h_int)))
    if err >= ROUNDING_TOLERANCE:
        raise ResidualTooLarge(f"correlation count drifted {err:.3g} from an integer")
    return int(np.sum(h_int.astype(np.int64), where=g))


def count_simplices_correlation(e: PointSet, spec: SimplexSpec, budget: float = DEFAULT_BUDGET,
                                threads: int = 1, batch: int = 128) -> int:
    """Shape enumeration plus FFT cross-correlation for the last vertex."""
    spec.validate(e.q)
    spec = spec.reduced(e.q)
    q, d = e.q, e.d
    if len(e) == 0:
        return 0
    cost = correlation_cost(q, d, spec.k)
    if cost > budget:
        raise InstanceTooLarge(f"correlation projected work {cost:.3g} exceeds budget {budget:.3g}")
    e_flat = e.mask_grid().reshape(-1)
    e_hat = scipy.fft.rfftn(e.mask_grid().astype(float))
    norm_flat = norm_grid(q, d).reshape(-1)
    coords = all_points(q, d)
    shapes = _shapes(spec, q, d)
    chunks = [shapes[i:i + batch] for i in range(0, len(shapes), batch)]
    threads = max(1, int(threads))
    if threads == 1:
        return sum(_correlation_batch(c, e_flat, e_hat, norm_flat, coords, spec, q, d) for c in chunks)
    with ThreadPoolExecutor(threads) as pool:
        futures = [pool.submit(_correlation_batch, c, e_flat, e_hat, norm_flat, coords, spec, q, d) for c in chunks]
        return sum(f.result() for f in futures)


STRATEGIES = ("auto", "dfs", "correlation", "naive")


def count_simplices(e: PointSet, spec: SimplexSpec, nondegenerate_only: bool = False,
                    strategy: str = "auto", budget: float = DEFAULT_BUDGET, threads: int = 1) -> int:
    """``|T(l_k)|``: ordered (k+1)-tuples of E realizing every prescribed side length.

    ``nondegenerate_only`` drops tuples whose difference vectors are not of
    full rank k.  ``auto`` picks the cheaper of ``dfs`` and ``correlation``
    by projected work, and raises InstanceTooLarge when both exceed
    ``budget``.
    """
    spec = _check_instance(e, spec)
    if strategy == "naive":
        return count_simplices_naive(e, spec, nondegenerate_only, budget)
    if strategy == "dfs":
        return count_simplices_dfs(e, spec, nondegenerate_only, budget, threads)
    if strategy == "correlation":
        if nondegenerate_only:
            raise ValueError("the correlation counter cannot filter degenerate tuples; use dfs")
        return count_simplices_correlation(e, spec, budget, threads)
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")
    n = len(e)
    dfs = dfs_cost(n, e.q, spec.k, nondegenerate_only)
    corr = correlation_cost(e.q, e.d, spec.k)
    if nondegenerate_only or dfs <= corr:
        if dfs > budget:
            raise InstanceTooLarge(f"projected work {dfs:.3g} exceeds budget {budget:.3g}")
        return count_simplices_dfs(e, spec, nondegenerate_only, budget, threads)
    return count_simplices_correlation(e, spec, budget, threads)


# main term, residual, threshold


def main_term(prev_count: int, e_size: int, sphere_sizes: Sequence[int], q: int, d: int) -> Fraction:
    """One induction step: ``|T(l_(k-1))| |E| prod_i |S_(t_ik)| / q^d``."""
    out = Fraction(prev_count) * e_size
    for s in sphere_sizes:
        out *= Fraction(s, q**d)
    return out


def global_main_term(e_size: int, q: int, k: int) -> Fraction:
    """``|E|^(k+1) q^-C(k+1,2)``."""
    return Fraction(e_size ** (k + 1), q ** math.comb(k + 1, 2))


def residual_bound(e_size: int, q: int, d: int, k: int) -> float:
    """``q^(kd/2) q^(-k(k+1)/4) |E|^((k+1)/2)``."""
    return q ** (k * d / 2) * q ** (-k * (k + 1) / 4) * e_size ** ((k + 1) / 2)


def threshold(q: int, d: int, k: int) -> float:
    """Reference size ``q^(k d / (k+1) + k/2)`` (constant 1)."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    return float(q) ** (k / (k + 1) * d + k / 2)


@dataclass
class CountReport:
    q: int
    d: int
    k: int
    lk: str
    e_size: int
    exact_count: int
    main_term: Fraction
    stepwise_main_term: Fraction
    residual: Fraction
    residual_bound: float
    c_test: float
    passed: bool
    realized: bool
    nondegenerate_only: bool = False
    strategy: str = "auto"

    @property
    def relative_deviation(self) -> float | None:
        if self.main_term == 0:
            return None
        return abs(float(Fraction(self.exact_count) / self.main_term) - 1.0)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "k": self.k,
            "lk": self.lk,
            "e_size": self.e_size,
            "threshold": threshold(self.q, self.d, self.k),
            "exact_count": self.exact_count,
            "main_term": float(self.main_term),
            "main_term_exact": str(self.main_term),
            "stepwise_main_term": float(self.stepwise_main_term),
            "residual": float(self.residual),
            "residual_exact": str(self.residual),
            "residual_bound": self.residual_bound,
            "relative_deviation": self.relative_deviation,
            "c_test": self.c_test,
            "pass": self.passed,
            "realized": self.realized,
            "nondegenerate_only": self.nondegenerate_only,
        }


def concentration_report(e: PointSet, spec: SimplexSpec, c_test: float = DEFAULT_C_TEST,
                         nondegenerate_only: bool = False, strategy: str = "auto",
                         budget: float = DEFAULT_BUDGET, threads: int = 1) -> CountReport:
    """Exact count against the expected ``|E|^(k+1) q^-C(k+1,2)`` and the residual bound."""
    q, d, k = e.q, e.d, spec.k
    spec.validate(q)
    spec = spec.reduced(q)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        exact = count_simplices(e, spec, nondegenerate_only, strategy, budget, threads)
        if k == 1:
            prev = len(e)
        else:
            prev = count_simplices(e, spec.prefix(), nondegenerate_only, strategy, budget, threads)
    sizes = [sphere_size(SphereSpec(q, d, spec.t(i, k))) for i in range(k)]
    stepwise = main_term(prev, len(e), sizes, q, d)
    main = global_main_term(len(e), q, k)
    residual = Fraction(exact) - main
    bound = residual_bound(len(e), q, d, k)
    passed = abs(float(residual)) <= c_test * bound
    return CountReport(q, d, k, spec.label, len(e), exact, main, stepwise, residual, bound,
                       c_test, passed, exact > 0, nondegenerate_only, strategy)


def all_side_lengths(q: int, k: int):
    """Every ``l_k`` in ``(F_q*)^C(k+1,2)``, in lexicographic flat order."""
    from itertools import product

    for flat in product(range(1, q), repeat=math.comb(k + 1, 2)):
        yield SimplexSpec.from_flat(k, flat)
