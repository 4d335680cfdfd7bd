"""Dense Gaussian elimination over F_q on int64 arrays.

Entries stay below q^2 between reductions, so q up to ~3e9 is safe; the
library never gets anywhere near that.
"""

from __future__ import annotations

import numpy as np


def _inv(a: int, q: int) -> int:
    return pow(int(a) % q, q - 2, q)


def row_reduce(a, q: int):
    """Reduced row echelon form of ``a`` mod q and the pivot columns."""
    m = np.array(a, dtype=np.int64) % q
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * _inv(m[r, c], q)) % q
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % q
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, q: int) -> int:
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    if a.size == 0:
        return 0
    return len(row_reduce(a, q)[1])


def inverse(a, q: int) -> np.ndarray:
    """Inverse of a square matrix mod q; raises ValueError when singular."""
    a = np.asarray(a, dtype=np.int64) % q
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    red, pivots = row_reduce(np.hstack([a, np.eye(n, dtype=np.int64)]), q)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular mod q")
    return red[:, n:] % q


def det_nonzero(a, q: int) -> bool:
    a = np.asarray(a, dtype=np.int64)
    return a.shape[0] == 0 or rank(a, q) == a.shape[0]


def nullspace(a, q: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a x = 0}`` mod q."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64)) % q
    cols = a.shape[1]
    red, pivots = row_reduce(a, q)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = (-red[i, f]) % q
        basis.append(v)
    if not basis:
        return np.zeros((0, cols), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def matmul(a, b, q: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % q
