"""Estimator-style wrappers around the spectrum estimators.

Each class follows the scikit-learn conventions: hyperparameters are set in
``__init__`` and exposed through ``get_params``/``set_params``, ``fit`` stores
learned state in trailing-underscore attributes and ``transform`` evaluates on
a grid. The closed-form bounds stay plain functions.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import spectra
from .exceptions import DomainError


def _grid(X, name):
    arr = check_array(np.atleast_1d(np.asarray(X, dtype=float)), ensure_2d=False, ensure_all_finite=True,
                      input_name=name)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be 1-d")
    return arr


class BoxCountingSpectrum(BaseEstimator):
    """Box-counting f-spectrum of a self-similar measure at a fixed scale.

    Parameters
    ----------
    r : float, default=2**-20
        Scale of the disjoint cylinders.
    eps : float, default=0.05
        Half-width of the mass-exponent window.

    Attributes
    ----------
    log_mass_, log_count_ : ndarray
        Stopping cylinders grouped by letter counts.
    alpha_range_ : tuple of float
    """

    def __init__(self, r=2.0**-20, eps=0.05):
        self.r = r
        self.eps = eps

    def fit(self, X, y=None):
        """Enumerate the scale-``r`` cylinders of the measure ``X``."""
        if not isinstance(X, spectra.SelfSimilarMeasure):
            X = spectra.SelfSimilarMeasure(*X)
        self.measure_ = X
        self.log_mass_, self.log_count_ = spectra.stopping_cylinders(X, self.r)
        self.alpha_range_ = X.alpha_range
        return self

    def transform(self, X):
        """Estimate ``f`` at the exponents ``X`` (``-inf`` where nothing is counted)."""
        check_is_fitted(self, "log_mass_")
        return spectra.box_f_estimate(self.measure_, self.r, self.eps, _grid(X, "alpha")).y


class IntegralMeansSpectrum(BaseEstimator):
    """Integral means spectrum of a disk self-map from dyadic radii.

    Parameters
    ----------
    j0, j1 : int
        Radii ``1 - 2^-j`` for ``j0 <= j <= j1``.
    nodes : int
        Initial quadrature nodes (doubled until converged).
    max_residual : float
        Auto-trim threshold on the largest fit residual.
    """

    def __init__(self, j0=6, j1=14, nodes=2**12, max_residual=0.01):
        self.j0 = j0
        self.j1 = j1
        self.nodes = nodes
        self.max_residual = max_residual

    def fit(self, X, y=None):
        """Store the map ``X``; it must be callable on complex arrays."""
        if not callable(X):
            raise DomainError("IntegralMeansSpectrum.fit expects a callable disk map")
        self.map_ = X
        self.fits_ = {}
        return self

    def transform(self, X):
        """Return ``beta(t)`` for each ``t`` in ``X``; fits are kept in ``fits_``."""
        check_is_fitted(self, "map_")
        out = []
        for t in _grid(X, "t"):
            fit = spectra.beta_fit(self.map_, t, self.j0, self.j1, self.nodes, self.max_residual)
            self.fits_[float(t)] = fit
            out.append(fit.beta)
        return np.array(out)


class LegendreTransformer(TransformerMixin, BaseEstimator):
    """Discrete Legendre transform of a sampled curve.

    Parameters
    ----------
    direction : {"f_to_beta", "beta_to_f"}
    """

    def __init__(self, direction="f_to_beta"):
        self.direction = direction

    def fit(self, X, y=None):
        """Fit on a curve given as an ``(n, 2)`` array of ``(x, y)`` rows or a :class:`SpectrumCurve`."""
        if isinstance(X, spectra.SpectrumCurve):
            curve = X
        else:
            arr = check_array(X, ensure_all_finite="allow-nan")
            if arr.shape[1] != 2:
                raise DomainError("expected two columns (x, y)")
            curve = spectra.SpectrumCurve(arr[:, 0], arr[:, 1])
        if self.direction not in ("f_to_beta", "beta_to_f"):
            raise DomainError(f"unknown direction {self.direction!r}")
        if len(curve) < 3:
            raise DomainError("Legendre transform needs at least 3 points")
        self.curve_ = curve
        return self

    def transform(self, X=None):
        """Evaluate the conjugate on the dual grid ``X`` (default: hull slopes)."""
        check_is_fitted(self, "curve_")
        grid = None if X is None else _grid(X, "grid")
        return spectra.legendre_transform(self.curve_, self.direction, grid).y

    def fit_transform(self, X, y=None, **fit_params):
        """Fit, then return the conjugate as an ``(m, 2)`` array on the default dual grid."""
        g = spectra.legendre_transform(self.fit(X).curve_, self.direction)
        return np.column_stack([g.x, g.y])
