"""Closed-form dimension distortion bounds.

Every evaluator accepts scalars or arrays and returns a Python float for
scalar input. Range checks are exact: ``k = 0`` and ``delta in {0, 1}`` are
admissible without any epsilon padding.

Notation: ``k`` is the small dilatation in ``[0, 1)``, ``K = (1 + k)/(1 - k)``
the large one, ``delta`` a Hausdorff dimension of a subset of the line.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_range, scalar_or_array
from .exceptions import DomainError


@dataclass(frozen=True)
class Dilatation:
    """A quasiconformal dilatation pair ``(k, K)``.

    Build it with :meth:`from_k` or :meth:`from_K`; both fields are always
    populated and consistent.
    """

    k: float
    K: float

    @classmethod
    def from_k(cls, k):
        return cls(float(k), dilatation_convert(k, "k_to_K"))

    @classmethod
    def from_K(cls, K):
        return cls(dilatation_convert(K, "K_to_k"), float(K))


def dilatation_convert(x, direction="k_to_K"):
    """Convert between the small dilatation ``k`` and the large one ``K``.

    ``K = (1 + k)/(1 - k)`` and ``k = (K - 1)/(K + 1)``.
    """
    if direction == "k_to_K":
        k = check_range(x, "k", 0.0, 1.0, hi_closed=False)
        return scalar_or_array((1.0 + k) / (1.0 - k))
    if direction == "K_to_k":
        K = check_range(x, "K", 1.0, np.inf, hi_closed=False)
        return scalar_or_array((K - 1.0) / (K + 1.0))
    raise DomainError(f"unknown direction {direction!r}")


def qs_norm_bounds(x, direction="rho_to_k"):
    """Quantitative links between the two notions of quasisymmetry.

    ``rho_to_k`` returns the upper bound ``1 - 1/rho`` on the dilatation of a
    map satisfying the three-point ratio condition with constant ``rho``.
    ``K_to_rho`` returns the upper bound ``exp(pi K)/16`` on that constant
    for a ``K``-quasiconformal extension.
    """
    if direction == "rho_to_k":
        rho = check_range(x, "rho", 1.0, np.inf, hi_closed=False)
        return scalar_or_array(1.0 - 1.0 / rho)
    if direction == "K_to_rho":
        K = check_range(x, "K", 1.0, np.inf, hi_closed=False)
        return scalar_or_array(np.exp(np.pi * K) / 16.0)
    raise DomainError(f"unknown direction {direction!r}")


def _compress(delta, k):
    # (delta, k) = (0, -1) is 0/0; the bound is 0 there by continuity.
    num = delta * (1.0 - k * k)
    den = (1.0 + k * np.sqrt(1.0 - delta)) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    return np.where(den == 0.0, 0.0, out)


def compress_bound(delta, k):
    """Lower bound on the dimension of a ``k``-quasisymmetric image.

    ``D(delta, k) = delta (1 - k^2) / (1 + k sqrt(1 - delta))^2``, defined for
    ``delta in [0, 1]`` and ``k in [-1, 1]``. Negative ``k`` gives the
    expansion branch used by :func:`expand_bound`.
    """
    delta = check_range(delta, "delta", 0.0, 1.0)
    k = check_range(k, "k", -1.0, 1.0)
    return scalar_or_array(_compress(delta, k))


def expand_bound(delta, k):
    """Upper bound on the dimension of a ``k``-quasisymmetric image.

    Evaluates ``D(delta, -min(k, sqrt(1 - delta)))``. On the strict inverse
    branch this is the inverse of :func:`compress_bound` in ``delta``; past
    ``delta = 1 - k^2`` of the image it saturates at 1.
    """
    delta = check_range(delta, "delta", 0.0, 1.0)
    k = check_range(k, "k", 0.0, 1.0, hi_closed=False)
    ell = np.sqrt(1.0 - delta)
    # Where ell <= k the formula reduces to delta/(1 - ell^2) = 1 exactly; evaluating
    # it in floats lands a few ulps off, which D's sqrt singularity at 1 amplifies.
    return scalar_or_array(np.where(ell <= k, 1.0, np.minimum(_compress(delta, -np.minimum(k, ell)), 1.0)))


def blaschke_sq(a, z):
    """Degree-two Blaschke product ``((z - a)/(1 - a z))^2`` with real ``a``.

    The extremal function of the Schwarz-lemma step is ``blaschke_sq(-l, .)``,
    which has a double zero at ``-l``.
    """
    a = check_range(a, "a", -1.0, 1.0, lo_closed=False, hi_closed=False)
    real_input = np.isrealobj(z)
    z = np.asarray(z, dtype=float if real_input else complex)
    if np.any(np.abs(z) > 1.0):
        raise DomainError("blaschke_sq requires |z| <= 1")
    den = 1.0 - a * z
    assert np.all(den != 0), "pole inside the closed disk"
    return scalar_or_array(((z - a) / den) ** 2)


def antisym_expand(Delta, k):
    """Expansion bound for an antisymmetric ``k``-quasiconformal map.

    ``(1 + k^2) Delta / (1 - k^2 + k^2 Delta)``.
    """
    Delta = check_range(Delta, "Delta", 0.0, 1.0)
    k = check_range(k, "k", 0.0, 1.0, hi_closed=False)
    k2 = k * k
    return scalar_or_array((1.0 + k2) * Delta / (1.0 - k2 + k2 * Delta))


def conformal_expand_bound(delta, k):
    """Dimension expansion bound for conformal maps of a ``K^2``-quasidisk.

    ``(1 + k^2) delta / (1 + k^2 - 2k sqrt(1 - delta))`` for
    ``delta <= 1 - k^2``; beyond that the bound is the cap ``1 + k^2``.
    """
    delta = check_range(delta, "delta", 0.0, 1.0)
    k = check_range(k, "k", 0.0, 1.0, hi_closed=False)
    k2 = k * k
    cap = 1.0 + k2
    with np.errstate(invalid="ignore", divide="ignore"):
        val = cap * delta / (cap - 2.0 * k * np.sqrt(1.0 - delta))
    return scalar_or_array(np.where(delta <= 1.0 - k2, val, cap))


def conformal_contract_bound(delta, k):
    """Contraction counterpart: ``(1 + k^2) delta / (1 + k^2 + 2k sqrt(1 - delta))``."""
    delta = check_range(delta, "delta", 0.0, 1.0)
    k = check_range(k, "k", 0.0, 1.0, hi_closed=False)
    cap = 1.0 + k * k
    return scalar_or_array(cap * delta / (cap + 2.0 * k * np.sqrt(1.0 - delta)))


def makarov_dim_lower(dim_e, t, beta):
    """Lower bound ``-t dim_e / (beta - t + 1 - dim_e)`` on an image dimension.

    Valid for ``t < 0``; the denominator must be positive.
    """
    dim_e = check_range(dim_e, "dimE", 0.0, 1.0, lo_closed=False)
    t = check_range(t, "t", -np.inf, 0.0, hi_closed=False)
    beta = np.asarray(beta, dtype=float)
    den = beta - t + 1.0 - dim_e
    if np.any(den <= 0):
        raise DomainError("beta - t + 1 - dimE must be positive")
    return scalar_or_array(-t * dim_e / den)


def lp_exponent_bound(K):
    """Sharp integrability exponent ``2(K + 1)/(K - 1)``; ``inf`` when ``K = 1``."""
    K = float(check_range(K, "K", 1.0, np.inf, hi_closed=False))
    if K == 1.0:
        return math.inf
    return 2.0 * (K + 1.0) / (K - 1.0)
