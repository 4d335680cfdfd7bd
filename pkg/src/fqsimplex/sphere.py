"""Spheres ``S_t = {x in F_q^d : ||x|| = t}`` and their Fourier transforms.

The closed form used here, for t != 0:

    S_t^(m) = q^-1 delta(m)
              + Q^d q^-(d+2)/2 sum_{j != 0} chi(||m|| (4j)^-1 + j t) eta(-j)^d

where Q is the Gauss constant.  The j-sum is a Kloosterman sum (d even) or a
Salie sum (d odd) when ||m|| != 0, which gives the decay bound
``|S_t^(m)| <= 2 q^-(d+1)/2`` for every m != 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charsums import gauss_constant
from .field import all_points, field_ctx, norm, norm_grid
from .fourier import GridFunction

DECAY_CONSTANT = 2.0


@dataclass(frozen=True)
class SphereSpec:
    q: int
    d: int
    t: int

    def __post_init__(self):
        field_ctx(self.q)  # validates q
        if self.d < 1:
            raise ValueError("d must be >= 1")
        object.__setattr__(self, "t", int(self.t) % self.q)

    def require_nonzero(self):
        if self.t == 0:
            raise ValueError("t = 0 (the isotropic cone) is excluded here")


def sphere_indicator(spec: SphereSpec) -> GridFunction:
    """0/1 indicator of S_t; t = 0 is allowed here."""
    mask = norm_grid(spec.q, spec.d) == spec.t
    return GridFunction(mask.reshape(-1).astype(float), spec.q, spec.d)


def sphere_points(spec: SphereSpec) -> np.ndarray:
    """Points of S_t as an ``(n, d)`` array in mixed-radix order."""
    mask = (norm_grid(spec.q, spec.d) == spec.t).reshape(-1)
    return all_points(spec.q, spec.d)[mask]


def sphere_size(spec: SphereSpec) -> int:
    """``|S_t|`` by enumeration, checked to lie in ``q^(d-1) (1 + eps)``, ``|eps| <= 2 q^-(d-1)/2``."""
    spec.require_nonzero()
    size = int(np.count_nonzero(norm_grid(spec.q, spec.d) == spec.t))
    q, d = spec.q, spec.d
    eps = size / q ** (d - 1) - 1
    if abs(eps) > 2 * q ** (-(d - 1) / 2) + 1e-12:
        raise ArithmeticError(f"|S_t| = {size} outside the consistency window for q={q}, d={d}")
    return size


def _jsum_by_norm(spec: SphereSpec) -> np.ndarray:
    """``sum_{j != 0} chi(n (4j)^-1 + j t) eta(-j)^d`` for every n in F_q."""
    ctx = field_ctx(spec.q)
    q, d, t = spec.q, spec.d, spec.t
    j = np.arange(1, q, dtype=np.int64)
    inv4 = ctx.inv(4 % q)
    inv_4j = np.array([inv4 * ctx.inv(int(x)) % q for x in j], dtype=np.int64)
    eta_d = ctx.legendre_table()[(-j) % q] ** d
    n = np.arange(q, dtype=np.int64)[:, None]
    phase = (n * inv_4j[None, :] + j[None, :] * t) % q
    return (ctx.chars[phase] * eta_d[None, :]).sum(axis=1)


def _prefactor(spec: SphereSpec) -> complex:
    Q = gauss_constant(field_ctx(spec.q)).Q
    return Q**spec.d * float(spec.q) ** (-(spec.d + 2) / 2)


def sphere_ft_closed(spec: SphereSpec, m) -> complex:
    """Closed-form ``S_t^(m)`` by a direct sum over j."""
    spec.require_nonzero()
    ctx = field_ctx(spec.q)
    q, d, t = spec.q, spec.d, spec.t
    m = tuple(int(c) % q for c in m)
    if len(m) != d:
        raise ValueError(f"frequency must have {d} coordinates")
    nm = norm(m, q)
    inv4 = ctx.inv(4 % q)
    total = 0j
    for j in range(1, q):
        eta = ctx.eta(-j) ** d
        total += ctx.chi(nm * inv4 * ctx.inv(j) + j * t) * eta
    delta = 1.0 if not any(m) else 0.0
    return delta / q + _prefactor(spec) * total


def sphere_ft_grid(spec: SphereSpec) -> GridFunction:
    """Closed form at every frequency, grouped by ``||m||``."""
    spec.require_nonzero()
    q, d = spec.q, spec.d
    by_norm = _prefactor(spec) * _jsum_by_norm(spec)
    values = by_norm[norm_grid(q, d).reshape(-1)]
    values[0] += 1.0 / q
    return GridFunction(values, q, d)


@dataclass(frozen=True)
class DecayReport:
    q: int
    d: int
    t: int
    max_normalized: float
    n_scanned: int
    constant: float
    passed: bool

    def to_dict(self):
        return {
            "q": self.q,
            "d": self.d,
            "t": self.t,
            "decay_max_normalized": self.max_normalized,
            "n_scanned": self.n_scanned,
            "constant": self.constant,
            "pass": self.passed,
        }


def sphere_decay_scan(spec: SphereSpec) -> DecayReport:
    """Max over m != 0 of ``|S_t^(m)| q^((d+1)/2)``, passing iff it is at most 2."""
    q, d = spec.q, spec.d
    values = sphere_ft_grid(spec).values[1:]
    normalized = float(np.max(np.abs(values))) * q ** ((d + 1) / 2) if len(values) else 0.0
    passed = normalized <= DECAY_CONSTANT + 1e-6
    return DecayReport(q, d, spec.t, normalized, len(values), DECAY_CONSTANT, passed)


def sphere_summary(spec: SphereSpec, scan: bool = False) -> dict:
    """Payload for the ``sphere`` CLI subcommand."""
    size = sphere_size(spec)
    out = {
        "q": spec.q,
        "d": spec.d,
        "t": spec.t,
        "size": size,
        "ft_at_zero": float(sphere_ft_closed(spec, (0,) * spec.d).real),
        "decay_max_normalized": None,
        "pass": None,
    }
    if scan:
        report = sphere_decay_scan(spec)
        out["decay_max_normalized"] = report.max_normalized
        out["n_scanned"] = report.n_scanned
        out["pass"] = report.passed
    return out


def decay_bound(q: int, d: int) -> float:
    """``2 q^-(d+1)/2``."""
    return DECAY_CONSTANT * math.pow(q, -(d + 1) / 2)
