import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsdim import thermo
from qsdim.exceptions import DomainError


def test_pressure_examples():
    assert thermo.pressure([0.25, 0.25], 0) == pytest.approx(math.log(2), abs=1e-15)
    assert thermo.pressure([0.25, 0.25], 0.5) == pytest.approx(0.0, abs=1e-15)
    assert thermo.pressure([0.5, 0.25], 1) == pytest.approx(math.log(0.75), abs=1e-15)
    assert thermo.pressure(thermo.ComplexRadii([0.25j, -0.25]), 0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        thermo.pressure([0.5], 2.5)


def test_entropy_examples():
    assert thermo.entropy([0.25] * 4) == pytest.approx(math.log(4), abs=1e-15)
    assert thermo.entropy([1.0, 0.0, 0.0]) == 0.0
    want = (2 / 3) * math.log(1.5) + (1 / 3) * math.log(3)
    assert thermo.entropy([2 / 3, 1 / 3]) == pytest.approx(want, abs=1e-15)
    assert want == pytest.approx(0.6365, abs=1e-4)
    with pytest.raises(DomainError):
        thermo.entropy([0.5, 0.6])


def test_lyapunov_examples():
    assert thermo.lyapunov([0.5, 0.5], [0.25, 0.25]) == pytest.approx(math.log(4), abs=1e-15)
    assert thermo.lyapunov([1.0], [0.5]) == pytest.approx(math.log(2), abs=1e-15)
    lam = thermo.lyapunov([0.5, 0.25, 0.25], [0.5, 0.25, 0.25])
    assert lam == pytest.approx(1.5 * math.log(2), abs=1e-15)
    assert isinstance(lam, complex) and lam.imag == 0


def test_lyapunov_uses_branch_args():
    r = thermo.ComplexRadii([0.5 + 0j], [2 * math.pi])
    assert thermo.lyapunov([1.0], r) == pytest.approx(math.log(2) - 2j * math.pi)
    with pytest.raises(DomainError):
        thermo.ComplexRadii([0.5 + 0j], [1.0])
    with pytest.raises(DomainError):
        thermo.ComplexRadii([0.0, 0.5])
    with pytest.raises(DomainError):
        thermo.lyapunov([0.5, 0.5], [0.5])


def test_gibbs_examples():
    np.testing.assert_allclose(thermo.gibbs_weights([0.1, 0.1, 0.1], 0.7), [1 / 3] * 3, atol=1e-15)
    np.testing.assert_allclose(thermo.gibbs_weights([0.5, 0.25], 1), [2 / 3, 1 / 3], atol=1e-15)
    np.testing.assert_allclose(thermo.gibbs_weights([0.5, 0.1, 0.3], 0), [1 / 3] * 3, atol=1e-15)


def test_bowen_examples():
    assert thermo.bowen_dimension([0.25, 0.25]) == pytest.approx(0.5, abs=1e-12)
    golden = math.log2((1 + math.sqrt(5)) / 2)
    d = thermo.bowen_dimension([0.5, 0.25])
    assert d == pytest.approx(golden, abs=1e-12)
    x = 0.5**d
    assert x + x * x == pytest.approx(1.0, abs=1e-12)
    assert thermo.bowen_dimension([0.3]) == 0.0
    with pytest.raises(DomainError):
        thermo.bowen_dimension([0.5, 1.0])


@settings(max_examples=100)
@given(st.integers(2, 12), st.floats(0.01, 0.45))
def test_bowen_equal_radii(n, r):
    assert thermo.bowen_dimension([r] * n) == pytest.approx(math.log(n) / math.log(1 / r), abs=1e-10)


def test_bowen_handles_root_above_two():
    # Dimension above 2 forces the upper bracket to grow.
    radii = [0.9] * 3
    d = thermo.bowen_dimension(radii)
    assert d == pytest.approx(math.log(3) / math.log(1 / 0.9), abs=1e-10) and d > 2


def test_variational_gap_examples():
    r = [0.5, 0.25]
    assert thermo.variational_gap(thermo.gibbs_weights(r, 1), r, 1) == pytest.approx(0.0, abs=1e-12)
    assert thermo.variational_gap([0.5, 0.5], r, 1) < 0
    assert thermo.variational_gap([1.0, 0.0, 0.0], [0.1, 0.2, 0.3], 0) == pytest.approx(-math.log(3), abs=1e-15)


def test_phi_function_examples():
    assert thermo.phi_function(0.7, 0.7) == 0.0
    I = thermo.entropy([0.5, 0.25, 0.25])
    Lam = thermo.lyapunov(thermo.gibbs_weights([0.5, 0.25, 0.25], 1.0), [0.5, 0.25, 0.25])
    assert I == pytest.approx(1.5 * math.log(2), abs=1e-15)
    assert thermo.phi_function(I, Lam) == pytest.approx(0.0, abs=1e-15)
    assert thermo.phi_function(0.0, 1 + 2j) == 1.0
    assert isinstance(thermo.phi_function(0.3, 1.0), float)
    with pytest.raises(DomainError):
        thermo.phi_function(0.3, 0)


def test_pressure_decreasing_and_convex(rng):
    d = np.linspace(0, 2, 81)
    for _ in range(20):
        p = thermo.random_packing(rng, int(rng.integers(2, 15)))
        P = np.array([thermo.pressure(p.radii, x) for x in d])
        assert np.all(np.diff(P) < 0)
        assert np.all(np.diff(P, 2) >= -1e-12)


def test_bowen_bracket_equivalence(rng):
    # The pressure decreases through its root at the dimension.
    for _ in range(20):
        p = thermo.random_packing(rng, int(rng.integers(2, 15)))
        dim = thermo.bowen_dimension(p.radii)
        for delta in np.linspace(0.05, 1.0, 20):
            P = thermo.pressure(p.radii, delta)
            assert (dim <= delta) == (P <= 0) or abs(dim - delta) < 1e-12
            assert (dim >= delta) == (P >= 0) or abs(dim - delta) < 1e-12


def test_variational_principle(rng):
    for _ in range(20):
        p = thermo.random_packing(rng, int(rng.integers(2, 10)))
        d = rng.uniform(0, 2)
        P = thermo.pressure(p.radii, d)
        w = rng.dirichlet(np.ones(len(p)), 200)
        gaps = [thermo.variational_gap(x, p.radii, d) for x in w]
        assert max(gaps) <= 1e-10
        assert thermo.variational_gap(thermo.gibbs_weights(p.radii, d), p.radii, d) == pytest.approx(0, abs=1e-10)
        assert P == pytest.approx(thermo.entropy(thermo.gibbs_weights(p.radii, d))
                                  - d * thermo.lyapunov(thermo.gibbs_weights(p.radii, d), p.radii).real, abs=1e-10)


def test_packing_validation():
    assert thermo.packing_violations([-0.5, 0.5], [0.5, 0.5]) == []
    assert thermo.packing_violations([0.0, 0.3], [0.5, 0.25])
    assert thermo.packing_violations([0.9], [0.2])
    assert thermo.packing_violations([], [])
    assert thermo.packing_violations([0.0], [0.0])
    with pytest.raises(DomainError, match="overlap"):
        thermo.DiskPacking([0.0, 0.3], [0.5, 0.25])
    with pytest.raises(DomainError):
        thermo.DiskPacking.from_dict({"disks": [{"centre": 0}]})


def test_packing_round_trip_and_random(rng):
    t = thermo.tiling_packing()
    assert thermo.DiskPacking.from_dict(t.to_dict()).radii.tolist() == [0.5, 0.25, 0.25]
    for n in (1, 5, 30):
        assert len(thermo.random_packing(rng, n)) == n


def test_real_radii_give_real_outputs():
    p = [0.2, 0.3, 0.5]
    lam = thermo.lyapunov(p, [0.1, 0.2, 0.3])
    assert lam.imag == 0
    assert isinstance(thermo.phi_function(thermo.entropy(p), lam), float)


def test_random_tiling_sums_to_one(rng):
    for n in (2, 3, 7):
        p = thermo.random_tiling(rng, n)
        assert len(p) == n and p.radii.sum() == pytest.approx(1.0, abs=1e-14)
        assert thermo.bowen_dimension(p.radii) == pytest.approx(1.0, abs=1e-12)
