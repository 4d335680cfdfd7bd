"""Arithmetic in the prime field F_q (q odd), its characters, and the norm form.

Residues are canonical integers in ``[0, q)``.  The additive character is the
standard one, ``chi(a) = exp(2 pi i a / q)``; every other nontrivial additive
character is a dilate of it, and none of the counts computed downstream
depend on the choice.

Points of F_q^d are plain tuples of residues.  Grids of points use the
mixed-radix order ``index(x) = sum_i x_i q^(d-1-i)`` (first coordinate most
significant), which is numpy's C order on an array of shape ``(q,) * d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, ...]

# Above this modulus the inverse table is not materialized.
INVERSE_TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """A validated odd prime modulus with precomputed character data.

    Immutable after construction; safe to share between threads.
    """

    q: int
    chars: np.ndarray = field(init=False, repr=False)
    inverses: np.ndarray | None = field(init=False, repr=False)

    def __post_init__(self):
        q = self.q
        if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
            raise TypeError(f"modulus must be an integer, got {q!r}")
        q = int(q)
        if q < 3 or not is_prime(q):
            raise ValueError(f"modulus must be an odd prime, got {q}")
        object.__setattr__(self, "q", q)
        chars = np.exp(2j * np.pi * np.arange(q) / q)
        chars.setflags(write=False)
        object.__setattr__(self, "chars", chars)
        if q <= INVERSE_TABLE_LIMIT:
            a = np.arange(q, dtype=np.int64)
            inverses = np.array([0] + [pow(int(x), q - 2, q) for x in a[1:]], dtype=np.int64)
            inverses.setflags(write=False)
        else:
            inverses = None
        object.__setattr__(self, "inverses", inverses)

    def __repr__(self):
        return f"FieldCtx(q={self.q})"

    def reduce(self, a) -> int:
        return int(a) % self.q

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a nonzero residue."""
        a = int(a) % self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        if self.inverses is not None:
            return int(self.inverses[a])
        return pow(a, self.q - 2, self.q)

    def inv_fermat(self, a: int) -> int:
        a = int(a) % self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return pow(a, self.q - 2, self.q)

    def chi(self, a) -> complex:
        return complex(self.chars[int(a) % self.q])

    def eta(self, a) -> int:
        return legendre(self, a)

    def legendre_table(self) -> np.ndarray:
        """eta(a) for every a in [0, q), as an int64 array."""
        return _legendre_table(self.q)

    def sqrt(self, a: int) -> int | None:
        """Some square root of ``a`` mod q, or None if ``a`` is a non-residue."""
        a = int(a) % self.q
        if a == 0:
            return 0
        if legendre(self, a) != 1:
            return None
        q = self.q
        if q % 4 == 3:
            return pow(a, (q + 1) // 4, q)
        # Tonelli-Shanks
        s, m = 0, q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        z = 2
        while legendre(self, z) != -1:
            z += 1
        c, r, t = pow(z, m, q), pow(a, (m + 1) // 2, q), pow(a, m, q)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2, i = t2 * t2 % q, i + 1
            b = pow(c, 1 << (s - i - 1), q)
            s, c = i, b * b % q
            r, t = r * b % q, t * c % q
        return r


@lru_cache(maxsize=None)
def field_ctx(q: int) -> FieldCtx:
    """Cached FieldCtx constructor."""
    return FieldCtx(q)


@lru_cache(maxsize=64)
def _legendre_table(q: int) -> np.ndarray:
    a = np.arange(q, dtype=object)
    e = np.array([pow(int(x), (q - 1) // 2, q) for x in a], dtype=np.int64)
    e[e == q - 1] = -1
    e.setflags(write=False)
    return e


def add_char(ctx: FieldCtx, a: int) -> complex:
    """Return ``exp(2 pi i a / q)``."""
    return ctx.chi(a)


def legendre(ctx: FieldCtx, a: int) -> int:
    """Quadratic character via Euler's criterion; 0 at 0."""
    q = ctx.q
    a = int(a) % q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def make_point(coords: Iterable[int], q: int) -> Point:
    p = tuple(int(c) % q for c in coords)
    if len(p) < 1:
        raise ValueError("points need dimension d >= 1")
    return p


def norm(p: Sequence[int], q: int) -> int:
    """``||x|| = x_1^2 + ... + x_d^2 mod q``."""
    return sum(int(c) * int(c) for c in p) % q


def norms(points: np.ndarray, q: int) -> np.ndarray:
    """Row-wise norm of an ``(n, d)`` integer array."""
    pts = np.asarray(points, dtype=np.int64) % q
    return (pts * pts).sum(axis=-1) % q


def sub(x: Sequence[int], y: Sequence[int], q: int) -> Point:
    return tuple((int(a) - int(b)) % q for a, b in zip(x, y))


def dot(x: Sequence[int], y: Sequence[int], q: int) -> int:
    return sum(int(a) * int(b) for a, b in zip(x, y)) % q


def all_points(q: int, d: int) -> np.ndarray:
    """Every point of F_q^d as a ``(q**d, d)`` array in mixed-radix order."""
    grids = np.indices((q,) * d, dtype=np.int64)
    return grids.reshape(d, -1).T.copy()


def encode(points: np.ndarray, q: int) -> np.ndarray:
    """Mixed-radix index of each row of ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64)) % q
    d = pts.shape[1]
    weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return pts @ weights


def decode(indices, q: int, d: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    return np.stack(np.unravel_index(idx, (q,) * d), axis=-1).astype(np.int64)


def norm_grid(q: int, d: int) -> np.ndarray:
    """``||x||`` for every x, shaped ``(q,) * d``."""
    sq = (np.arange(q, dtype=np.int64) ** 2) % q
    out = np.zeros((q,) * d, dtype=np.int64)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = q
        out = out + sq.reshape(shape)
    return out % q
