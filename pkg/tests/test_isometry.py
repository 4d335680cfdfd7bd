import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqsimplex import linalg
from fqsimplex.errors import DegenerateSpan, NotCongruent, NotGeneralPosition
from fqsimplex.field import norm
from fqsimplex.isometry import (
    AffineIsometry, build_isometry, check_congruent, random_orthogonal, random_simplex, reflection,
)


def test_check_congruent_examples():
    p = [(0, 0), (1, 0), (0, 1)]
    assert check_congruent(p, p, 5)
    shifted = [((x + 2) % 5, (y + 3) % 5) for x, y in p]
    assert check_congruent(p, shifted, 5)
    assert not check_congruent([(0, 0), (1, 0)], [(0, 0), (0, 2)], 5)


def test_build_identity_case():
    p = [(0, 0), (1, 0), (0, 1)]
    u = build_isometry(p, p, 5)
    assert u.is_orthogonal()
    assert np.array_equal(u(np.array(p)), np.array(p))


def test_build_swap_example():
    u = build_isometry([(0, 0), (1, 0), (0, 1)], [(0, 0), (0, 1), (1, 0)], 5, 2)
    assert u.matrix.tolist() == [[0, 1], [1, 0]]
    assert u.translation.tolist() == [0, 0]
    assert u.to_dict()["verified"] is True


def test_build_round_trip_example():
    r = np.random.default_rng(7)
    p = random_simplex(7, 3, 3, r)
    u0 = random_orthogonal(7, 3, r)
    u = build_isometry(p, u0(p), 7, 3)
    assert u.is_orthogonal()
    assert np.array_equal(u(p), u0(p))


def test_build_errors():
    with pytest.raises(NotCongruent):
        build_isometry([(0, 0), (1, 0)], [(0, 0), (0, 2)], 5)
    with pytest.raises(NotGeneralPosition):
        build_isometry([(0, 0), (1, 0), (2, 0)], [(0, 0), (1, 0), (2, 0)], 3)
    # (1, 2) is isotropic in F_5^2 (1 + 4 = 0): Gram matrix [[0]] is singular
    with pytest.raises(DegenerateSpan):
        build_isometry([(0, 0), (1, 2)], [(0, 0), (1, 3)], 5)
    with pytest.raises(ValueError):
        build_isometry([(0, 0)], [(0, 0, 0)], 5)


def test_error_payloads():
    e = NotCongruent("pairwise norms differ")
    assert e.to_dict() == {"error": "NotCongruent", "message": "pairwise norms differ"}


def test_random_orthogonal_examples():
    for seed in range(20):
        u = random_orthogonal(3, 1, seed)
        assert u.matrix.tolist() in ([[1]], [[2]])
    u = random_orthogonal(5, 2, 42)
    assert u.is_orthogonal()
    r = np.random.default_rng(0)
    for _ in range(20):
        x, y = r.integers(0, 5, size=(2, 2))
        assert norm(u(x) - u(y), 5) == norm(x - y, 5)
    ident = u.compose(u.inverse())
    assert ident.matrix.tolist() == np.eye(2, dtype=int).tolist()
    assert ident.translation.tolist() == [0, 0]


def test_reflection_properties():
    m = reflection([1, 1, 0], 7)
    assert np.array_equal(linalg.matmul(m, m, 7), np.eye(3, dtype=np.int64))
    assert AffineIsometry(m, [0, 0, 0], 7).is_orthogonal()
    with pytest.raises(ValueError):
        reflection([1, 2], 5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(3, 2), (5, 3), (7, 3), (11, 4), (13, 2), (5, 5)]), st.integers(0, 2**31), st.data())
def test_round_trip_property(grid, seed, data):
    q, d = grid
    k = data.draw(st.integers(1, d))
    r = np.random.default_rng(seed)
    p = random_simplex(q, d, k, r)
    u0 = random_orthogonal(q, d, r)
    p2 = u0(p)
    u = build_isometry(p, p2, q, d)
    assert u.is_orthogonal()
    assert np.array_equal(u(p), p2)
    xs = r.integers(0, q, size=(100, 2, d))
    for x, y in xs:
        assert norm(u(x) - u(y), q) == norm(x - y, q)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5, 3), (7, 3), (11, 2)]), st.integers(0, 2**31))
def test_inner_products_match_after_centering(grid, seed):
    q, d = grid
    r = np.random.default_rng(seed)
    p = random_simplex(q, d, d, r)
    p2 = random_orthogonal(q, d, r)(p)
    a, b = (p[1:] - p[0]) % q, (p2[1:] - p2[0]) % q
    assert np.array_equal(linalg.matmul(a, a.T, q), linalg.matmul(b, b.T, q))


def test_linalg_helpers():
    a = np.array([[1, 2], [2, 4]])
    assert linalg.rank(a, 5) == 1
    assert not linalg.det_nonzero(a, 5)
    ns = linalg.nullspace(a, 5)
    assert ns.shape == (1, 2) and not np.any(linalg.matmul(a, ns.T, 5))
    b = np.array([[2, 1], [1, 1]])
    assert np.array_equal(linalg.matmul(b, linalg.inverse(b, 7), 7), np.eye(2, dtype=np.int64))
    with pytest.raises(ValueError):
        linalg.inverse(a, 5)
