import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fqsimplex.field import (
    FieldCtx, add_char, all_points, decode, encode, field_ctx, is_prime, legendre, norm, norm_grid, sub,
)

PRIMES = [p for p in range(3, 102) if is_prime(p)]


def test_rejects_bad_moduli():
    for bad in (1, 2, 4, 9, 15, 0, -7):
        with pytest.raises(ValueError):
            FieldCtx(bad)
    with pytest.raises(TypeError):
        FieldCtx(3.0)


def test_add_char_examples():
    assert add_char(field_ctx(3), 0) == pytest.approx(1 + 0j, abs=1e-15)
    assert add_char(field_ctx(3), 1) == pytest.approx(complex(-0.5, 0.8660254037844386), abs=1e-12)
    ctx = field_ctx(5)
    assert add_char(ctx, 2) * add_char(ctx, 3) == pytest.approx(1 + 0j, abs=1e-12)


@pytest.mark.parametrize("q", [3, 5, 7, 31, 101])
def test_character_is_a_homomorphism(q):
    ctx = field_ctx(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert abs(ctx.chi(a) * ctx.chi(b) - ctx.chi((a + b) % q)) <= 1e-12
    assert all(abs(abs(ctx.chi(a)) - 1) < 1e-14 for a in range(q))
    assert abs(sum(ctx.chi(a) for a in range(q))) <= 1e-10


def test_legendre_examples():
    assert legendre(field_ctx(7), 0) == 0
    assert legendre(field_ctx(7), 4) == 1
    # squares mod 3 are {0, 1}
    assert {x * x % 3 for x in range(3)} == {0, 1}
    assert legendre(field_ctx(3), 2) == -1


@pytest.mark.parametrize("q", PRIMES)
def test_legendre_multiplicative_and_balanced(q):
    ctx = field_ctx(q)
    eta = [legendre(ctx, a) for a in range(q)]
    squares = {x * x % q for x in range(1, q)}
    assert all((eta[a] == 1) == (a in squares) for a in range(1, q))
    for a in range(1, q):
        for b in range(1, q):
            assert eta[a * b % q] == eta[a] * eta[b]
    assert eta.count(1) == (q - 1) // 2
    assert list(ctx.legendre_table()) == eta


@pytest.mark.parametrize("q", [3, 5, 7, 13, 17, 101, 65537 + 2])
def test_inverse_paths_agree(q):
    if not is_prime(q):
        pytest.skip("not prime")
    ctx = field_ctx(q)
    for a in range(1, min(q, 2000)):
        assert ctx.inv(a) == ctx.inv_fermat(a)
        assert a * ctx.inv(a) % q == 1
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)


def test_large_modulus_uses_fermat():
    ctx = FieldCtx(65537 + 2) if is_prime(65539) else FieldCtx(65537)
    assert ctx.q > 1 << 16 or ctx.inverses is not None
    big = FieldCtx(70001)
    assert big.inverses is None
    assert 12345 * big.inv(12345) % 70001 == 1


@pytest.mark.parametrize("q", [3, 5, 7, 13, 17, 29, 41])
def test_sqrt(q):
    ctx = field_ctx(q)
    for a in range(q):
        r = ctx.sqrt(a)
        if legendre(ctx, a) == -1:
            assert r is None
        else:
            assert r * r % q == a


def test_norm_examples():
    assert norm((0, 0), 3) == 0
    assert norm((1, 2), 3) == 2
    assert norm((1, 2, 2), 5) == 4


def test_norm_symmetric_translation_invariant_exhaustive():
    q = 3
    pts = list(itertools.product(range(q), repeat=2))
    for x, y, z in itertools.product(pts, repeat=3):
        assert norm(sub(x, y, q), q) == norm(sub(y, x, q), q)
        xz = tuple((a + c) % q for a, c in zip(x, z))
        yz = tuple((b + c) % q for b, c in zip(y, z))
        assert norm(sub(xz, yz, q), q) == norm(sub(x, y, q), q)


def test_mixed_radix_order():
    pts = all_points(3, 2)
    assert pts[:4].tolist() == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert encode(np.array([[2, 1]]), 3)[0] == 7
    assert decode([7], 3, 2).tolist() == [[2, 1]]
    grid = norm_grid(3, 2)
    assert grid[2, 1] == norm((2, 1), 3)


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 4), st.data())
def test_encode_decode_roundtrip(q, d, data):
    pt = data.draw(st.tuples(*[st.integers(0, q - 1)] * d))
    idx = encode(np.array([pt]), q)
    assert tuple(decode(idx, q, d)[0]) == pt
    assert norm_grid(q, d).reshape(-1)[idx[0]] == norm(pt, q)


def test_character_matches_cmath():
    for a in range(7):
        assert abs(field_ctx(7).chi(a) - cmath.exp(2j * cmath.pi * a / 7)) < 1e-15
