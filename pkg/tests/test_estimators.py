import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qsdim import spectra
from qsdim.estimators import BoxCountingSpectrum, IntegralMeansSpectrum, LegendreTransformer
from qsdim.exceptions import DomainError


def test_params_round_trip():
    est = BoxCountingSpectrum(r=2.0**-12, eps=0.1)
    assert est.get_params() == {"r": 2.0**-12, "eps": 0.1}
    est.set_params(eps=0.2)
    assert clone(est).get_params()["eps"] == 0.2
    assert IntegralMeansSpectrum().get_params()["nodes"] == 2**12
    assert clone(LegendreTransformer("beta_to_f")).direction == "beta_to_f"


def test_box_estimator_matches_function():
    m = spectra.SelfSimilarMeasure((2 / 3, 1 / 3), (0.5, 0.5))
    grid = np.linspace(0.6, 1.5, 11)
    est = BoxCountingSpectrum(2.0**-16).fit(((2 / 3, 1 / 3), (0.5, 0.5)))
    np.testing.assert_array_equal(est.transform(grid), spectra.box_f_estimate(m, 2.0**-16, 0.05, grid).y)
    assert est.alpha_range_ == m.alpha_range
    with pytest.raises(NotFittedError):
        BoxCountingSpectrum().transform(grid)


def test_integral_means_estimator():
    est = IntegralMeansSpectrum(j0=4, j1=10).fit(lambda z: z)
    beta = est.transform([-1.0, 0.0, 2.0])
    assert np.all(np.abs(beta) < 1e-9)
    assert set(est.fits_) == {-1.0, 0.0, 2.0}
    with pytest.raises(DomainError):
        IntegralMeansSpectrum().fit(3.0)
    with pytest.raises(NotFittedError):
        IntegralMeansSpectrum().transform([1.0])


def test_legendre_transformer():
    x = np.linspace(-2, 2, 81)
    X = np.column_stack([x, -x**2 / 4])
    s = np.linspace(-1, 1, 21)
    out = LegendreTransformer().fit(X).transform(s)
    np.testing.assert_allclose(out, s**2, atol=x[1] - x[0])
    curve = spectra.SpectrumCurve(x, -x**2 / 4)
    np.testing.assert_array_equal(LegendreTransformer().fit(curve).transform(s), out)
    dual = LegendreTransformer().fit_transform(X)
    back = LegendreTransformer("beta_to_f").fit(dual).transform(x)
    assert np.max(np.abs(back + x**2 / 4)) <= x[1] - x[0]
    with pytest.raises(DomainError):
        LegendreTransformer("up").fit(X)
    with pytest.raises(DomainError):
        LegendreTransformer().fit(X[:, :1])
    with pytest.raises(DomainError):
        LegendreTransformer().fit(X[:2])
