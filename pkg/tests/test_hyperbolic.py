import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsdim import hyperbolic as hb
from qsdim.bounds import blaschke_sq
from qsdim.exceptions import DomainError


def disk_point():
    return st.tuples(st.floats(0, 0.95), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


def square(z):
    return np.asarray(z) ** 2


def blaschke(l):
    return lambda z: blaschke_sq(-l, z)


def test_pseudo_hyp_examples():
    z = 0.3 - 0.4j
    assert hb.pseudo_hyp(z, 0) == z
    assert hb.pseudo_hyp(0.5, 1 / 3) == pytest.approx(0.2, abs=1e-16)
    assert hb.pseudo_hyp(z, z) == 0
    with pytest.raises(DomainError):
        hb.pseudo_hyp(1.0, 0.0)


def test_hyp_dist_examples():
    assert hb.hyp_dist(0.2j, 0.2j) == 0
    assert hb.hyp_dist(0, 0.5) == pytest.approx(math.log(3), abs=1e-14)
    assert hb.hyp_dist(-0.5, 1 / 3) == pytest.approx(hb.hyp_dist(0, 1 / 3) + hb.hyp_dist(0, 0.5), abs=1e-12)


@settings(max_examples=200)
@given(disk_point(), disk_point(), disk_point())
def test_metric_properties(z, w, v):
    assert abs(hb.pseudo_hyp(z, w)) < 1
    assert abs(hb.pseudo_hyp(z, w)) == pytest.approx(abs(hb.pseudo_hyp(w, z)), abs=1e-15)
    assert hb.hyp_dist(z, w) == pytest.approx(hb.hyp_dist(w, z), abs=1e-12)
    assert hb.hyp_dist(z, v) <= hb.hyp_dist(z, w) + hb.hyp_dist(w, v) + 1e-12
    assert math.tanh(hb.hyp_dist(z, w) / 2) == pytest.approx(abs(hb.pseudo_hyp(z, w)), abs=1e-12)


def test_schwarz_pick_quotient_examples():
    z = 0.4 + 0.3j
    assert hb.schwarz_pick_quotient(square, z, 0) == pytest.approx(z, abs=1e-15)
    assert hb.schwarz_pick_quotient(blaschke(0.5), 1 / 3, 0).real == pytest.approx(17 / 19, abs=1e-14)
    assert hb.schwarz_pick_quotient(lambda z: np.asarray(z) ** 2 / 2, 0.5, 0).real == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(DomainError):
        hb.schwarz_pick_quotient(square, 0.3, 0.3)


def test_three_point_examples():
    rep = hb.three_point_check(square, 0.3 + 0.2j, -0.4j, 0)
    assert rep.ok and rep.lhs == pytest.approx(rep.rhs, abs=1e-12)
    assert hb.three_point_check(blaschke(0.5), 1 / 3, -0.5, 0).ok
    with pytest.raises(DomainError):
        hb.three_point_check(square, 0.1, 0.2, 0.1)


def test_three_point_random_family():
    rep = hb.verify_three_point(samples=1000, seed=42)
    assert rep.violations == 0


def test_extremal_quotient_examples():
    l = 0.37
    assert hb.extremal_quotient_bound(0, l) == pytest.approx(math.tanh(2 * math.atanh(l)), abs=1e-15)
    assert hb.extremal_quotient_bound(1 / 3, 0.5) == pytest.approx(17 / 19, abs=1e-15)
    assert hb.extremal_quotient_bound(0.4, 1e-12) == pytest.approx(0.4, abs=1e-11)


def test_extremal_quotient_is_tanh_of_distance_sum():
    for k, l in ((0.1, 0.2), (0.7, 0.4), (0.9, 0.05)):
        want = math.tanh(hb.hyp_dist(0, k) / 2 + hb.hyp_dist(0, l))
        assert hb.extremal_quotient_bound(k, l) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("l", [0.05, 0.3, 0.5, 0.8])
def test_blaschke_extremal_equality(l):
    h = blaschke(l)
    for k in np.linspace(0, 0.95, 20):
        assert abs(h(k) - ((k + l) / (1 + k * l)) ** 2) < 1e-12


def test_scaled_square_is_l_zero_case():
    for c in (0.1, 0.5, 0.99):
        for k in np.linspace(0, 0.95, 10):
            assert c * k * k <= k * k


def test_lemma_chain_geodesic():
    l = 0.5
    h = blaschke(l)
    for k in (0.1, 1 / 3, 0.8):
        total = hb.hyp_dist(0, h(k))
        split = hb.hyp_dist(0, h(0)) + hb.hyp_dist(h(0), h(k))
        assert total == pytest.approx(split, abs=1e-10)


def test_random_family_hypotheses(rng):
    for _ in range(50):
        h = hb.random_test_function(rng)
        x = np.linspace(-0.95, 0.95, 41)
        hx = h(x)
        assert np.all(np.abs(hx.imag) < 1e-15) and np.all(hx.real >= 0) and np.all(hx.real < 1)
        z = 0.9 * np.exp(1j * np.linspace(0, 6, 30)) * np.linspace(0.1, 1, 30)
        np.testing.assert_allclose(h(np.conj(z)), np.conj(h(z)), atol=1e-15)
        assert np.all(np.abs(h(z)) < 1)


def test_schwarz_pick_bound_on_family(rng):
    for _ in range(30):
        h = hb.random_test_function(rng)
        z = hb._random_disk_points(rng, 20)
        w = hb._random_disk_points(rng, 20)
        assert np.all(np.abs(hb.schwarz_pick_quotient(h, z, w)) <= 1 + 1e-12)


def test_mixture_validation():
    with pytest.raises(DomainError):
        hb.squared_blaschke_mixture([0.5, 0.6], [1, 1], [0, 0])
    with pytest.raises(DomainError):
        hb.squared_blaschke_mixture([1.0], [1.0], [1.0])


def test_verify_blaschke_deterministic_and_thread_invariant():
    a = hb.verify_blaschke_lemma(samples=5000, seed=3, n_jobs=1)
    b = hb.verify_blaschke_lemma(samples=5000, seed=3, n_jobs=4)
    assert a == b
    assert a.violations == 0 and a.worst_margin >= -1e-12


def test_verify_blaschke_negative_tolerance_counts_everything():
    rep = hb.verify_blaschke_lemma(samples=100, seed=1, tol=-2.0)
    assert rep.violations == 100
