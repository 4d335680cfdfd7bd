"""Gauss, Kloosterman and Salie sums by direct summation.

These are correctness oracles, so every sum is evaluated term by term over
F_q; no algebraic shortcut is taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .field import FieldCtx, legendre

_UNITS = (1 + 0j, -1 + 0j, 1j, -1j)


class MultCharacter(str, Enum):
    """The two multiplicative characters needed downstream: 1 and eta."""

    TRIVIAL = "trivial"
    QUADRATIC = "quadratic"

    def __call__(self, ctx: FieldCtx, s: int) -> int:
        s = int(s) % ctx.q
        if s == 0:
            # eta(0) = 0; the trivial character is only ever evaluated on F_q*.
            return 0 if self is MultCharacter.QUADRATIC else 1
        if self is MultCharacter.TRIVIAL:
            return 1
        return legendre(ctx, s)

    def table(self, ctx: FieldCtx) -> np.ndarray:
        if self is MultCharacter.TRIVIAL:
            t = np.ones(ctx.q, dtype=np.int64)
            t[0] = 0
            return t
        return ctx.legendre_table()


@dataclass(frozen=True)
class GaussConstant:
    """The unit Q with ``sum_c eta(c) chi(c) = Q sqrt(q)``."""

    Q: complex
    q: int

    def check(self, tol: float = 1e-6) -> bool:
        expected = (1 + 0j, -1 + 0j) if self.q % 4 == 1 else (1j, -1j)
        return min(abs(self.Q - u) for u in expected) <= tol


def gauss_constant(ctx: FieldCtx) -> GaussConstant:
    """Compute Q from ``sum eta(c) chi(c) / sqrt(q)`` and snap it to the nearest unit.

    Snapping is only accepted within 1e-6; anything further off is a bug.
    """
    raw = complex(np.sum(ctx.legendre_table() * ctx.chars)) / math.sqrt(ctx.q)
    unit = min(_UNITS, key=lambda u: abs(raw - u))
    if abs(raw - unit) > 1e-6:
        raise ArithmeticError(f"Gauss constant {raw} is not a fourth root of unity (q={ctx.q})")
    return GaussConstant(unit, ctx.q)


def gauss_sum(ctx: FieldCtx, j: int) -> complex:
    """``sum_{c in F_q} chi(j c^2)`` for nonzero j."""
    q = ctx.q
    j = int(j) % q
    if j == 0:
        raise ValueError("gauss_sum needs j != 0 (the sum degenerates to q)")
    c = np.arange(q, dtype=np.int64)
    return complex(np.sum(ctx.chars[(j * c * c) % q]))


def kloosterman(ctx: FieldCtx, a: int, psi: MultCharacter = MultCharacter.TRIVIAL) -> complex:
    """``K(a) = sum_{s != 0} chi(a s + s^-1) psi(s)``.

    With ``psi`` quadratic this is the Salie sum.
    """
    q = ctx.q
    a = int(a) % q
    psi = MultCharacter(psi)
    s = np.arange(1, q, dtype=np.int64)
    s_inv = np.array([ctx.inv(int(x)) for x in s], dtype=np.int64)
    weights = psi.table(ctx)[s]
    return complex(np.sum(ctx.chars[(a * s + s_inv) % q] * weights))


def kloosterman_all(ctx: FieldCtx, psi: MultCharacter = MultCharacter.TRIVIAL) -> np.ndarray:
    """K(a) for every a in [0, q), each summed directly over s."""
    q = ctx.q
    psi = MultCharacter(psi)
    s = np.arange(1, q, dtype=np.int64)
    s_inv = np.array([ctx.inv(int(x)) for x in s], dtype=np.int64)
    weights = psi.table(ctx)[s]
    a = np.arange(q, dtype=np.int64)[:, None]
    terms = ctx.chars[(a * s[None, :] + s_inv[None, :]) % q] * weights[None, :]
    return terms.sum(axis=1)


@dataclass(frozen=True)
class WeilReport:
    q: int
    psi: str
    max_abs: float
    bound: float
    n_sums: int
    passed: bool

    def to_dict(self):
        return {
            "q": self.q,
            "psi": self.psi,
            "max_abs": self.max_abs,
            "bound": self.bound,
            "n_sums": self.n_sums,
            "pass": self.passed,
        }


def weil_scan(ctx: FieldCtx, psi: MultCharacter = MultCharacter.TRIVIAL) -> WeilReport:
    """Check ``|K(a)| <= 2 sqrt(q)`` for every a in F_q*."""
    psi = MultCharacter(psi)
    values = kloosterman_all(ctx, psi)[1:]
    max_abs = float(np.max(np.abs(values)))
    bound = 2 * math.sqrt(ctx.q)
    return WeilReport(ctx.q, psi.value, max_abs, bound, len(values), max_abs <= bound + 1e-9)
