"""Orthogonal affine maps of F_q^d and their construction from congruent simplices.

Given vertex lists P, P' with matching pairwise norms, the linear part is
fixed on the source span by ``T(V_i - V_0) = V'_i - V'_0`` and extended to
F_q^d by pairing orthogonal complements.  The complement pairing needs the
Gram matrix of the source span to be invertible; the degenerate case raises
:class:`DegenerateSpan` rather than attempting a full Witt extension.

All arithmetic is exact over the integers mod q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DegenerateSpan, NotCongruent, NotGeneralPosition
from .field import field_ctx, norm


@dataclass(frozen=True, eq=False)
class AffineIsometry:
    """``x -> O x + b`` with ``O^t O = I`` mod q."""

    matrix: np.ndarray
    translation: np.ndarray
    q: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.q
        b = np.asarray(self.translation, dtype=np.int64).reshape(-1) % self.q
        if m.shape != (b.shape[0], b.shape[0]):
            raise ValueError("matrix must be d x d with a length-d translation")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", b)

    @property
    def d(self) -> int:
        return self.translation.shape[0]

    def is_orthogonal(self) -> bool:
        gram = linalg.matmul(self.matrix.T, self.matrix, self.q)
        return bool(np.array_equal(gram, np.eye(self.d, dtype=np.int64)))

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        out = (pts @ self.matrix.T + self.translation) % self.q
        return out[0] if single else out

    def compose(self, other: "AffineIsometry") -> "AffineIsometry":
        """``self o other``."""
        m = linalg.matmul(self.matrix, other.matrix, self.q)
        b = (self.matrix @ other.translation + self.translation) % self.q
        return AffineIsometry(m, b, self.q)

    def inverse(self) -> "AffineIsometry":
        mt = self.matrix.T.copy()
        return AffineIsometry(mt, (-(mt @ self.translation)) % self.q, self.q)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "matrix": self.matrix.tolist(),
            "translation": self.translation.tolist(),
            "verified": self.is_orthogonal(),
        }

    @classmethod
    def identity(cls, q: int, d: int) -> "AffineIsometry":
        return cls(np.eye(d, dtype=np.int64), np.zeros(d, dtype=np.int64), q)


def _as_vertices(vertices, q) -> np.ndarray:
    v = np.atleast_2d(np.asarray(vertices, dtype=np.int64)) % q
    if v.ndim != 2 or v.shape[0] < 1:
        raise ValueError("expected a non-empty list of vertices")
    return v


def check_congruent(p: Sequence, p2: Sequence, q: int) -> bool:
    """True iff ``||V_i - V_j|| = ||V'_i - V'_j||`` for all i < j."""
    a, b = _as_vertices(p, q), _as_vertices(p2, q)
    if a.shape != b.shape:
        raise ValueError("vertex lists must have equal length and dimension")
    for i, j in combinations(range(a.shape[0]), 2):
        if norm(a[i] - a[j], q) != norm(b[i] - b[j], q):
            return False
    return True


def _bilinear(u, v, q) -> int:
    return int(np.dot(u, v)) % q


def _orthogonal_basis(vectors: np.ndarray, q: int) -> list[np.ndarray]:
    """Diagonalize the standard form on ``span(vectors)``; the span must be non-degenerate."""
    ctx = field_ctx(q)
    vecs = [np.asarray(v, dtype=np.int64) % q for v in vectors]
    out = []
    while vecs:
        idx = next((i for i, v in enumerate(vecs) if _bilinear(v, v, q)), None)
        if idx is None:
            pair = next(
                ((i, j) for i, j in combinations(range(len(vecs)), 2) if _bilinear(vecs[i], vecs[j], q)),
                None,
            )
            if pair is None:
                raise DegenerateSpan("complement is totally isotropic")
            i, j = pair
            # ||v_i + v_j|| = 2 <v_i, v_j> != 0 since q is odd
            vecs[i] = (vecs[i] + vecs[j]) % q
            idx = i
        v = vecs.pop(idx)
        c_inv = ctx.inv(_bilinear(v, v, q))
        vecs = [(w - (_bilinear(w, v, q) * c_inv) * v) % q for w in vecs]
        out.append(v)
    return out


def _normalize(basis: list[np.ndarray], q: int) -> list[np.ndarray]:
    """Turn an orthogonal basis into one with norms ``(1, ..., 1, prod c_i)``."""
    if len(basis) < 2:
        return list(basis)
    ctx = field_ctx(q)
    out = []
    carry = basis[0]
    for e in basis[1:]:
        a, b = _bilinear(carry, carry, q), _bilinear(e, e, q)
        b_inv = ctx.inv(b)
        for x in range(q):
            y = ctx.sqrt((1 - x * x * a) * b_inv)
            if y is not None:
                break
        else:  # pragma: no cover - x^2 a + y^2 b = 1 is always solvable for a, b != 0
            raise ArithmeticError("no norm-one vector in a non-degenerate plane")
        out.append((x * carry + y * e) % q)
        carry = ((-y * b) * carry + (x * a) * e) % q
    out.append(carry)
    return out


def _complement_basis(span_rows: np.ndarray, q: int, d: int) -> list[np.ndarray]:
    if span_rows.shape[0] == 0:
        comp = np.eye(d, dtype=np.int64)
    else:
        comp = linalg.nullspace(span_rows, q)
    return _normalize(_orthogonal_basis(comp, q), q)


def build_isometry(p: Sequence, p2: Sequence, q: int, d: int | None = None) -> AffineIsometry:
    """Orthogonal affine U with ``U(V_i) = V'_i`` for congruent simplices P, P'.

    Raises NotCongruent, NotGeneralPosition, or DegenerateSpan (Gram matrix
    of ``{V_i - V_0}`` singular mod q).  The result is verified before it is
    returned.
    """
    ctx = field_ctx(q)
    src, tgt = _as_vertices(p, q), _as_vertices(p2, q)
    if src.shape != tgt.shape:
        raise ValueError("vertex lists must have equal length and dimension")
    if d is not None and src.shape[1] != d:
        raise ValueError(f"vertices live in dimension {src.shape[1]}, not {d}")
    d = src.shape[1]
    k = src.shape[0] - 1
    if not check_congruent(src, tgt, q):
        raise NotCongruent("pairwise norms differ")
    a = (src[1:] - src[0]) % q
    b = (tgt[1:] - tgt[0]) % q
    if k > d or linalg.rank(a, q) != k:
        raise NotGeneralPosition(f"difference vectors do not have rank {k}")
    gram = linalg.matmul(a, a.T, q)
    if not linalg.det_nonzero(gram, q):
        raise DegenerateSpan("Gram matrix of the source span is singular mod q")
    # congruence forces equal Gram matrices by polarization
    assert np.array_equal(gram, linalg.matmul(b, b.T, q))

    comp_src = _complement_basis(a, q, d)
    comp_tgt = _complement_basis(b, q, d)
    if comp_src:
        cs = _bilinear(comp_src[-1], comp_src[-1], q)
        ct = _bilinear(comp_tgt[-1], comp_tgt[-1], q)
        lam = ctx.sqrt(cs * ctx.inv(ct))
        if lam is None:  # pragma: no cover - discriminants agree up to squares
            raise ArithmeticError("complement discriminants differ")
        comp_tgt[-1] = (lam * comp_tgt[-1]) % q

    basis_src = np.vstack([a] + [c[None, :] for c in comp_src]).T
    basis_tgt = np.vstack([b] + [c[None, :] for c in comp_tgt]).T
    o = linalg.matmul(basis_tgt, linalg.inverse(basis_src, q), q)
    u = AffineIsometry(o, (tgt[0] - o @ src[0]) % q, q)
    if not u.is_orthogonal() or not np.array_equal(u(src), tgt):
        raise ArithmeticError("constructed map failed verification")  # pragma: no cover
    return u


def reflection(v, q: int) -> np.ndarray:
    """Matrix of ``x -> x - 2 (<x, v> / ||v||) v``; v must be non-isotropic."""
    v = np.asarray(v, dtype=np.int64) % q
    n = norm(v, q)
    if n == 0:
        raise ValueError("reflection vector is isotropic")
    scale = 2 * field_ctx(q).inv(n) % q
    return (np.eye(v.shape[0], dtype=np.int64) - scale * np.outer(v, v)) % q


def random_orthogonal(q: int, d: int, seed=None, n_reflections: int | None = None) -> AffineIsometry:
    """Product of random reflections plus a uniform translation.

    Reflection vectors are drawn uniformly and rejected when isotropic.  This
    is a test-vector generator; no uniformity over O(d, F_q) is claimed.
    """
    field_ctx(q)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = 2 * d if n_reflections is None else n_reflections
    o = np.eye(d, dtype=np.int64)
    for _ in range(n):
        while True:
            v = rng.integers(0, q, size=d)
            if norm(v, q):
                break
        o = linalg.matmul(reflection(v, q), o, q)
    u = AffineIsometry(o, rng.integers(0, q, size=d), q)
    assert u.is_orthogonal()
    return u


def random_simplex(q: int, d: int, k: int, seed=None, max_tries: int = 10_000) -> np.ndarray:
    """Random ``(k+1, d)`` vertex array in general position with invertible Gram matrix."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(max_tries):
        v = rng.integers(0, q, size=(k + 1, d))
        a = (v[1:] - v[0]) % q
        if linalg.rank(a, q) == k and linalg.det_nonzero(linalg.matmul(a, a.T, q), q):
            return v
    raise RuntimeError("could not sample a non-degenerate simplex")
