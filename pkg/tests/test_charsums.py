import math

import numpy as np
import pytest

from fqsimplex.charsums import MultCharacter, gauss_constant, gauss_sum, kloosterman, kloosterman_all, weil_scan
from fqsimplex.field import field_ctx, is_prime

from oracles import chi, eta

SMALL = [p for p in range(3, 102) if is_prime(p)]


def direct_kloosterman(a, q, quadratic):
    total = 0j
    for s in range(1, q):
        w = eta(s, q) if quadratic else 1
        total += chi(a * s + pow(s, q - 2, q), q) * w
    return total


def test_gauss_sum_examples():
    assert abs(gauss_sum(field_ctx(3), 1) - 1j * math.sqrt(3)) < 1e-12
    assert abs(gauss_sum(field_ctx(5), 1) - math.sqrt(5)) < 1e-12
    assert abs(gauss_sum(field_ctx(3), 2) + 1j * math.sqrt(3)) < 1e-12
    # direct summation oracle
    assert abs(gauss_sum(field_ctx(3), 2) - sum(chi(2 * c * c, 3) for c in range(3))) < 1e-12


def test_gauss_sum_rejects_zero():
    with pytest.raises(ValueError):
        gauss_sum(field_ctx(5), 0)


@pytest.mark.parametrize("q", SMALL)
def test_gauss_constant_class_and_modulus(q):
    ctx = field_ctx(q)
    g = gauss_constant(ctx)
    expected = 1 if q % 4 == 1 else 1j
    assert abs(g.Q - expected) < 1e-6
    assert g.check()
    for j in range(1, q):
        s = gauss_sum(ctx, j)
        assert abs(s * s.conjugate() - q) < 1e-8


def test_kloosterman_examples():
    ctx = field_ctx(3)
    assert abs(kloosterman(ctx, 1, MultCharacter.TRIVIAL) + 1) < 1e-12
    assert abs(kloosterman(ctx, 1, MultCharacter.QUADRATIC) + 1j * math.sqrt(3)) < 1e-12
    assert abs(kloosterman(field_ctx(5), 0, MultCharacter.TRIVIAL) + 1) < 1e-12


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 23])
def test_kloosterman_matches_direct_sum(q):
    ctx = field_ctx(q)
    for psi, quad in ((MultCharacter.TRIVIAL, False), (MultCharacter.QUADRATIC, True)):
        vec = kloosterman_all(ctx, psi)
        for a in range(q):
            ref = direct_kloosterman(a, q, quad)
            assert abs(kloosterman(ctx, a, psi) - ref) < 1e-9
            assert abs(vec[a] - ref) < 1e-9


@pytest.mark.parametrize("q", SMALL)
def test_trivial_kloosterman_is_real(q):
    vals = kloosterman_all(field_ctx(q), MultCharacter.TRIVIAL)
    assert np.max(np.abs(vals.imag)) <= 1e-10


def test_weil_scan_examples():
    r = weil_scan(field_ctx(3), MultCharacter.TRIVIAL)
    # K(1) = -1 and K(2) = chi(0) + chi(0) = 2 by direct summation
    assert r.max_abs == pytest.approx(max(abs(direct_kloosterman(a, 3, False)) for a in (1, 2)), abs=1e-12)
    assert r.max_abs == pytest.approx(2.0, abs=1e-12)
    assert r.bound == pytest.approx(2 * math.sqrt(3))
    assert r.passed
    assert weil_scan(field_ctx(7), MultCharacter.QUADRATIC).passed
    big = weil_scan(field_ctx(101), MultCharacter.TRIVIAL)
    assert big.passed and big.n_sums == 100
    d = big.to_dict()
    assert d["pass"] is True and d["n_sums"] == 100


def test_mult_character_values():
    ctx = field_ctx(7)
    assert MultCharacter.TRIVIAL(ctx, 3) == 1
    assert [MultCharacter.QUADRATIC(ctx, s) for s in range(1, 7)] == [eta(s, 7) for s in range(1, 7)]
    assert MultCharacter("quadratic") is MultCharacter.QUADRATIC
