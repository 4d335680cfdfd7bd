import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqsimplex.errors import ResidualTooLarge
from fqsimplex.fourier import GridFunction, correlate_count, dft, inverse_dft, plancherel_gap
from fqsimplex.sphere import SphereSpec, sphere_indicator

from oracles import brute_dft, chi


def test_grid_function_validates_length():
    with pytest.raises(ValueError):
        GridFunction(np.zeros(8), 3, 2)
    g = GridFunction.indicator([(1, 2)], 3, 2)
    assert g[(1, 2)] == 1 and g.values.sum() == 1
    assert g.grid().shape == (3, 3)


@pytest.mark.parametrize("strategy", ["naive", "factorized"])
def test_dft_examples(strategy):
    d_hat = dft(GridFunction.delta(3, 2), strategy)
    assert np.allclose(d_hat.values, 1 / 9, atol=1e-15)
    one_hat = dft(GridFunction.constant(3, 2), strategy)
    expected = np.zeros(9)
    expected[0] = 1
    assert np.allclose(one_hat.values, expected, atol=1e-14)
    s_hat = dft(sphere_indicator(SphereSpec(3, 2, 1)), strategy)
    direct = (2 + chi(-1, 3) + chi(-2, 3)) / 9
    assert abs(s_hat[(1, 0)] - direct) < 1e-14
    assert abs(s_hat[(1, 0)] - 1 / 9) < 1e-14


def test_inverse_examples(rng):
    d_hat = dft(GridFunction.delta(3, 2))
    assert np.allclose(inverse_dft(d_hat).values, GridFunction.delta(3, 2).values, atol=1e-14)
    assert np.allclose(inverse_dft(GridFunction.delta(3, 2)).values, 1, atol=1e-14)
    f = GridFunction(rng.choice([-1.0, 1.0], size=25), 5, 2)
    assert np.max(np.abs(inverse_dft(dft(f)).values - f.values)) < 1e-10


def test_unknown_strategy():
    with pytest.raises(ValueError):
        dft(GridFunction.delta(3, 1), "fast")


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (5, 2), (3, 3), (7, 2)])
def test_dft_matches_pure_python_oracle(q, d, rng):
    vals = rng.standard_normal(q**d) + 1j * rng.standard_normal(q**d)
    f = GridFunction(vals, q, d)
    pts = list(itertools.product(range(q), repeat=d))
    ref = brute_dft(dict(zip(pts, vals)), q, d)
    ref_vec = np.array([ref[p] for p in pts])
    for strategy in ("naive", "factorized"):
        assert np.max(np.abs(dft(f, strategy).values - ref_vec)) < 1e-12


def test_plancherel_examples(rng):
    delta = GridFunction.delta(3, 2)
    assert plancherel_gap(delta, delta) < 1e-12
    assert np.vdot(dft(delta).values, dft(delta).values).real == pytest.approx(1 / 9)
    one = GridFunction.constant(3, 2)
    assert plancherel_gap(one, one) < 1e-12
    assert np.vdot(dft(one).values, dft(one).values).real == pytest.approx(1)
    idx = rng.choice(25, size=7, replace=False)
    e = GridFunction(np.isin(np.arange(25), idx).astype(float), 5, 2)
    assert plancherel_gap(e, e) < 1e-10
    assert np.vdot(dft(e).values, dft(e).values).real == pytest.approx(7 / 25)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 2), (5, 2), (3, 3), (7, 1)]), st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
def test_factorized_threads_bit_identical(grid, seed, threads):
    q, d = grid
    r = np.random.default_rng(seed)
    f = GridFunction(r.standard_normal(q**d) + 1j * r.standard_normal(q**d), q, d)
    base = dft(f, threads=1).values
    assert np.array_equal(base, dft(f, threads=threads).values)
    assert np.array_equal(inverse_dft(f, threads=1).values, inverse_dft(f, threads=threads).values)


def test_correlate_count_examples():
    s1 = sphere_indicator(SphereSpec(3, 2, 1))
    assert correlate_count(GridFunction.constant(3, 2).__class__(np.ones(9), 3, 2), s1) == 36
    single = GridFunction.indicator([(0, 0)], 3, 2)
    assert correlate_count(single, s1) == 0
    pair = GridFunction.indicator([(0, 0), (1, 0)], 3, 2)
    assert correlate_count(pair, s1) == 2


def test_correlate_count_rejects_non_indicator():
    with pytest.raises(ValueError):
        correlate_count(GridFunction(np.full(9, 0.5), 3, 2), sphere_indicator(SphereSpec(3, 2, 1)))


def test_residual_too_large_is_a_domain_error():
    assert issubclass(ResidualTooLarge, Exception)
    assert ResidualTooLarge("x").to_dict() == {"error": "ResidualTooLarge", "message": "x"}
