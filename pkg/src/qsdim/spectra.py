"""Multifractal spectra: bound curves, estimators and Legendre conjugation.

Conventions
-----------
``f(alpha)`` is a dimension spectrum on ``alpha > 0`` with ``-inf`` outside
its support. ``beta(t)`` is an integral means spectrum. The Legendre pair
used throughout is

* ``f_to_beta``: ``g(s) = max_j (y_j - s x_j)``
* ``beta_to_f``: ``g(x) = min_j (y_j + x s_j)``

so that applying both returns the concave hull of the input. The bound of
the f-spectrum transforms as ``B(t) = g(t) + t - 1``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from ._validation import check_positive_int, check_probability_vector, check_range, scalar_or_array
from .exceptions import DepthOverflowError, DomainError, NumericError

CURVE_KINDS = ("f_of_alpha", "beta_of_t", "tau_of_q", "generic")
MAX_DEPTH = 40


@dataclass(frozen=True)
class SelfSimilarMeasure:
    """Self-similar measure on the line with weights ``p_i`` and ratios ``r_i``.

    Requires at least two maps, ``p_i > 0`` summing to one, ``0 < r_i < 1`` and
    ``sum r_i <= 1`` so that the first-level cylinders can be laid out
    disjointly.
    """

    probabilities: np.ndarray
    ratios: np.ndarray

    def __post_init__(self):
        p = check_probability_vector(self.probabilities, "probabilities", strictly_positive=True)
        r = check_range(np.atleast_1d(self.ratios), "ratios", 0.0, 1.0, lo_closed=False, hi_closed=False)
        if p.size < 2 or p.shape != r.shape:
            raise DomainError("need at least two maps and one ratio per probability")
        if r.sum() > 1.0 + 1e-12:
            raise DomainError("ratios must sum to at most 1")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "ratios", r)

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(list(data["probabilities"]), list(data["ratios"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed measure description: {exc!r}") from None

    @property
    def alpha_range(self):
        """Closed range ``[alpha_min, alpha_max]`` of local dimensions."""
        a = np.log(self.probabilities) / np.log(self.ratios)
        return float(a.min()), float(a.max())


@dataclass(frozen=True)
class SpectrumCurve:
    """Sampled curve ``y(x)`` with strictly increasing ``x``.

    ``y`` may hold ``-inf`` where a spectrum is empty. ``meta`` carries
    free-form tags such as ``{"conjectural": True}``.
    """

    x: np.ndarray
    y: np.ndarray
    kind: str = "generic"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.ndim != 1 or x.shape != y.shape or x.size == 0:
            raise DomainError("curve needs matching nonempty 1-d x and y")
        if not np.all(np.isfinite(x)):
            raise DomainError("curve abscissae must be finite")
        if np.any(np.isnan(y)) or np.any(y == np.inf):
            raise DomainError("curve values must be finite or -inf")
        if np.any(np.diff(x) <= 0):
            raise DomainError("curve abscissae must be strictly increasing")
        if self.kind not in CURVE_KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.x.size

    def finite(self):
        keep = np.isfinite(self.y)
        return SpectrumCurve(self.x[keep], self.y[keep], self.kind, dict(self.meta))


def _small_k(K):
    return (K - 1.0) / (K + 1.0)


def f_bound_theorem3(alpha, K):
    """Upper bound for the f-spectrum of ``K``-quasisymmetric images of Lebesgue measure.

    Quadratic branch ``-4K/(K-1)^2 (sqrt(alpha) - sqrt(K))(sqrt(alpha) - 1/sqrt(K))``
    on ``[1/K, 1-k^2]`` and ``[1/(1-k^2), K]``, ``min(alpha, 1)`` in between and
    ``-inf`` outside ``[1/K, K]``. For ``K = 1`` it is ``1`` at ``alpha = 1`` and
    ``-inf`` elsewhere.
    """
    alpha = check_range(alpha, "alpha", 0.0, np.inf, lo_closed=False, hi_closed=False)
    K = float(check_range(K, "K", 1.0, np.inf, hi_closed=False))
    if K == 1.0:
        return scalar_or_array(np.where(alpha == 1.0, 1.0, -np.inf))
    k = _small_k(K)
    lo, hi = 1.0 - k * k, 1.0 / (1.0 - k * k)
    sa = np.sqrt(alpha)
    quad = -4.0 * K / (K - 1.0) ** 2 * (sa - math.sqrt(K)) * (sa - 1.0 / math.sqrt(K))
    out = np.where((alpha >= lo) & (alpha <= hi), np.minimum(alpha, 1.0), quad)
    out = np.where((alpha < 1.0 / K) | (alpha > K), -np.inf, out)
    return scalar_or_array(out)


def f_bound_grid(K, n):
    """Log-spaced ``alpha`` grid on ``[1/K, K]`` merged with the branch joints."""
    n = check_positive_int(n, "grid", minimum=2)
    K = float(check_range(K, "K", 1.0, np.inf, lo_closed=False, hi_closed=False))
    k = _small_k(K)
    base = np.exp(np.linspace(-math.log(K), math.log(K), n))
    base[0], base[-1] = 1.0 / K, K
    joints = [1.0 - k * k, 1.0, 1.0 / (1.0 - k * k)]
    return np.unique(np.concatenate([base, joints]))


def beta_bound_theorem3(t, K):
    """Upper bound for the integral means spectrum of ``K``-quasisymmetric images.

    ``max(0, t(t-1)/(t + 4K/(K-1)^2))`` on ``[-2/(K-1), 2K/(K-1)]``, linear
    ``-(K-1)t - 1`` below and ``(1 - 1/K)t - 1`` above. ``K = 1`` gives 0.
    """
    t = check_range(t, "t")
    K = float(check_range(K, "K", 1.0, np.inf, hi_closed=False))
    if K == 1.0:
        return scalar_or_array(np.zeros_like(t))
    lo, hi = -2.0 / (K - 1.0), 2.0 * K / (K - 1.0)
    c = 4.0 * K / (K - 1.0) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        quad = np.maximum(0.0, t * (t - 1.0) / (t + c))
    out = np.where(t <= lo, -(K - 1.0) * t - 1.0, np.where(t >= hi, (1.0 - 1.0 / K) * t - 1.0, quad))
    return scalar_or_array(out)


def quasidisk_beta_bound(t, k):
    """Integral means bound for conformal maps onto ``K^2``-quasidisks.

    ``k^2 t^2/(1+k^2)^2`` for ``t in [1+k^2, (1+k^2)/k]`` and
    ``((K^2-1)/(K^2+1)) t - 1`` beyond, with ``K = (1+k)/(1-k)``.
    """
    k = float(check_range(k, "k", 0.0, 1.0, lo_closed=False, hi_closed=False))
    c = 1.0 + k * k
    t = check_range(t, "t", c, np.inf, hi_closed=False)
    K2 = ((1.0 + k) / (1.0 - k)) ** 2
    out = np.where(t <= c / k, k * k * t * t / (c * c), (K2 - 1.0) / (K2 + 1.0) * t - 1.0)
    return scalar_or_array(out)


def conjectured_lower(t, k):
    """Conjectured lower bound ``k^2 t^2 / 4`` for ``|t| <= 2/k``.

    Conjectural: callers emitting it should tag the output as such.
    """
    k = float(check_range(k, "k", 0.0, 1.0, lo_closed=False, hi_closed=False))
    t = check_range(t, "t", -2.0 / k, 2.0 / k)
    return scalar_or_array(k * k * t * t / 4.0)


def _tau_eq(T, lp, lr, q):
    v = q * lp + T * lr
    top = v.max()
    return top + math.log(np.exp(v - top).sum())


def tau_selfsimilar(m, q, xtol=1e-13):
    """The exponent ``T(q)`` solving ``sum p_i^q r_i^T(q) = 1``.

    The left side is strictly decreasing in ``T``; the root is bracketed by
    doubling and found by bisection.
    """
    q = float(check_range(q, "q"))
    lp, lr = np.log(m.probabilities), np.log(m.ratios)
    lo, hi = -1.0, 1.0
    while _tau_eq(lo, lp, lr, q) < 0:
        lo *= 2.0
    while _tau_eq(hi, lp, lr, q) > 0:
        hi *= 2.0
    return float(optimize.bisect(_tau_eq, lo, hi, args=(lp, lr, q), xtol=xtol))


def alpha_of_q(m, q, T=None):
    """``alpha(q) = -T'(q)`` by implicit differentiation.

    With ``w_i = p_i^q r_i^T(q)`` this is ``sum w log p / sum w log r``.
    """
    if T is None:
        T = tau_selfsimilar(m, q)
    lp, lr = np.log(m.probabilities), np.log(m.ratios)
    w = special.softmax(q * lp + T * lr)
    return float(np.dot(w, lp) / np.dot(w, lr))


def f_oracle(m, q_grid):
    """Exact multifractal spectrum ``f(alpha(q)) = q alpha(q) + T(q)``.

    Points are sorted by ``alpha``; coincident abscissae (the monofractal
    case) collapse to one point.
    """
    qs = np.atleast_1d(np.asarray(q_grid, dtype=float))
    if qs.size == 0 or not np.all(np.isfinite(qs)):
        raise DomainError("q_grid must be finite and nonempty")
    alphas, fs = [], []
    for q in qs:
        T = tau_selfsimilar(m, q)
        a = alpha_of_q(m, q, T)
        alphas.append(a)
        fs.append(q * a + T)
    alphas, fs = np.array(alphas), np.array(fs)
    order = np.argsort(alphas, kind="stable")
    alphas, fs = alphas[order], fs[order]
    keep = np.concatenate([[True], np.diff(alphas) > 1e-12 * np.maximum(1.0, np.abs(alphas[1:]))])
    return SpectrumCurve(alphas[keep], fs[keep], "f_of_alpha")


def _compositions(n, m):
    if m == 1:
        yield (n,)
        return
    for i in range(n + 1):
        for rest in _compositions(n - i, m - 1):
            yield (i,) + rest


def _log_multinomial(c):
    return math.lgamma(sum(c) + 1) - sum(math.lgamma(x + 1) for x in c)


def stopping_cylinders(m, r):
    """Scale-``r`` cylinders grouped by letter-count vector.

    A cylinder is kept when its length is at most ``r`` and its parent's
    length exceeds ``r``. Returns ``(log_mass, log_count)`` arrays, one entry
    per count vector, where ``log_count`` is the log of the number of such
    words.

    Raises
    ------
    DepthOverflowError
        If words longer than 40 letters would be needed.
    """
    lp, lr = np.log(m.probabilities), np.log(m.ratios)
    ls = math.log(r)
    depth = math.ceil(ls / lr.max() - 1e-12)
    if depth > MAX_DEPTH:
        raise DepthOverflowError(f"scale {r!r} needs depth {depth} > {MAX_DEPTH}")
    n_maps = lp.size
    masses, counts = [], []
    for n in range(1, depth + 1):
        for c in _compositions(n, n_maps):
            c = np.array(c)
            if c @ lr > ls:
                continue
            logs = []
            for i in np.flatnonzero(c):
                parent = c.copy()
                parent[i] -= 1
                if parent @ lr > ls:
                    logs.append(_log_multinomial(parent))
            if logs:
                masses.append(c @ lp)
                counts.append(special.logsumexp(logs))
    return np.array(masses), np.array(counts)


def box_f_estimate(m, r=2.0**-20, eps=0.05, alpha_grid=None):
    """Finite-scale box-counting proxy for the f-spectrum.

    Counts disjoint scale-``r`` cylinders whose mass lies in
    ``[r^(alpha+eps), r^(alpha-eps)]`` and returns ``log N / log(1/r)``, or
    ``-inf`` when ``N = 0``. This is a proxy for the double limit, not the
    limit itself; the default grid is 101 points on the closed alpha range
    widened by ``eps`` on each side (so a monofractal still gets a grid).
    """
    r = float(check_range(r, "r", 0.0, 1.0, lo_closed=False, hi_closed=False))
    eps = float(check_range(eps, "eps", 0.0, np.inf, lo_closed=False, hi_closed=False))
    if alpha_grid is None:
        lo, hi = m.alpha_range
        alpha_grid = np.linspace(lo - eps, hi + eps, 101)
    alphas = np.atleast_1d(np.asarray(alpha_grid, dtype=float))
    log_mass, log_count = stopping_cylinders(m, r)
    ls = math.log(r)
    est = np.full(alphas.size, -np.inf)
    for j, a in enumerate(alphas):
        sel = (log_mass >= (a + eps) * ls) & (log_mass <= (a - eps) * ls)
        if sel.any():
            est[j] = special.logsumexp(log_count[sel]) / -ls
    return SpectrumCurve(alphas, est, "f_of_alpha", {"r": r, "eps": eps})


def cayley_stretch(k):
    """Disk self-map conjugating the radial stretch by the Cayley transform.

    ``z -> C^-1(phi_k(C(z)))`` with ``C(z) = i(1 + z)/(1 - z)``; the stretch
    preserves the upper half-plane for real ``k``.
    """
    k = float(check_range(k, "k", 0.0, 1.0, hi_closed=False))
    K = (1.0 + k) / (1.0 - k)

    def phi(z):
        w = 1j * (1.0 + z) / (1.0 - z)
        v = w * np.abs(w) ** (K - 1.0)
        return (v - 1j) / (v + 1j)

    return phi


def _integral_mean(phi, r, t, n):
    theta = 2 * np.pi * np.arange(n) / n
    g = ((1.0 - np.abs(phi(r * np.exp(1j * theta)))) / (1.0 - r)) ** t
    if not np.all(np.isfinite(g)):
        raise NumericError(f"non-finite integrand at r={r!r}")
    return 2 * np.pi * np.mean(g)


def integral_mean(phi, r, t, nodes=2**12, rtol=1e-6, max_nodes=2**22):
    """Trapezoid value of ``int ((1 - |phi(r e^it)|)/(1 - r))^t dtheta``.

    Nodes double until the relative change drops below ``rtol``.
    """
    prev = _integral_mean(phi, r, t, nodes)
    n = nodes
    while n < max_nodes:
        n *= 2
        cur = _integral_mean(phi, r, t, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


@dataclass(frozen=True)
class BetaFit:
    """Least-squares fit of ``log I(r_j)`` against ``log 1/(1 - r_j)``."""

    beta: float
    intercept: float
    residual: float
    js: tuple
    trimmed: tuple


def _slope(x, y):
    xc = x - x.mean()
    yc = y - y.mean()
    beta = float(np.dot(xc, yc) / np.dot(xc, xc))
    b0 = float(y.mean() - beta * x.mean())
    res = y - (b0 + beta * x)
    return beta, b0, float(np.max(np.abs(res)))


def beta_fit(phi, t, j0=6, j1=14, nodes=2**12, max_residual=0.01, auto_trim=True):
    """Integral means exponent from radii ``r_j = 1 - 2^-j``, ``j0 <= j <= j1``.

    While the largest fit residual exceeds ``max_residual``, the end point
    with the larger residual is dropped (at least three radii are kept).
    """
    j0 = check_positive_int(j0, "j0")
    j1 = check_positive_int(j1, "j1")
    if j1 - j0 < 2:
        raise DomainError("need at least three radii")
    t = float(check_range(t, "t"))
    js = np.arange(j0, j1 + 1)
    rs = 1.0 - 2.0 ** -js.astype(float)
    logs = np.log([integral_mean(phi, r, t, nodes) for r in rs])
    x = js * math.log(2.0)
    lo, hi = 0, js.size
    trimmed = []
    beta, b0, res = _slope(x, logs)
    while auto_trim and res > max_residual and hi - lo > 3:
        fit_res = np.abs(logs[lo:hi] - (b0 + beta * x[lo:hi]))
        if fit_res[0] >= fit_res[-1]:
            trimmed.append(int(js[lo]))
            lo += 1
        else:
            hi -= 1
            trimmed.append(int(js[hi]))
        beta, b0, res = _slope(x[lo:hi], logs[lo:hi])
    return BetaFit(beta, b0, res, tuple(int(j) for j in js[lo:hi]), tuple(trimmed))


def beta_estimate(phi, t, j0=6, j1=14, nodes=2**12):
    """Slope of :func:`beta_fit`."""
    return beta_fit(phi, t, j0, j1, nodes).beta


def _upper_hull(x, y):
    # Monotone chain upper hull; x sorted ascending.
    hull = []
    for p in zip(x, y):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return np.array(hull)


def _default_dual_grid(x, y, concave):
    # The minimizer of y_j + x s_j sits where the convex hull has slope -x, so
    # the beta_to_f grid is the edge slopes of the upper hull of (s, -y).
    if not concave:
        y = -y
    hull = _upper_hull(x, y)
    if len(hull) < 2:
        return np.linspace(-2.0, 2.0, 41)
    slopes = np.diff(hull[:, 1]) / np.diff(hull[:, 0])
    pad = max(1.0, float(slopes.max() - slopes.min()))
    return np.unique(np.concatenate([[slopes.min() - pad], slopes, [slopes.max() + pad]]))


def legendre_transform(curve, direction="f_to_beta", grid=None):
    """Discrete Legendre conjugate of a sampled curve.

    ``f_to_beta`` returns ``g(s) = max_j (y_j - s x_j)`` and ``beta_to_f``
    returns ``g(x) = min_j (y_j + x s_j)``; ``-inf`` samples are ignored.
    Without ``grid`` the dual abscissae are the edge slopes of the concave
    (resp. convex) hull plus one padding slope on each side, so a double
    transform reproduces the hull at its vertices.
    """
    if len(curve) < 3:
        raise DomainError("Legendre transform needs at least 3 points")
    fin = np.isfinite(curve.y)
    if not fin.any():
        raise DomainError("curve has no finite values")
    x, y = curve.x[fin], curve.y[fin]
    if direction == "f_to_beta":
        s = _default_dual_grid(x, y, True) if grid is None else np.asarray(grid, dtype=float)
        out = np.max(y[None, :] - s[:, None] * x[None, :], axis=1)
        kind = "beta_of_t" if curve.kind == "f_of_alpha" else "generic"
    elif direction == "beta_to_f":
        s = _default_dual_grid(x, y, False) if grid is None else np.asarray(grid, dtype=float)
        out = np.min(y[None, :] + s[:, None] * x[None, :], axis=1)
        kind = "f_of_alpha" if curve.kind == "beta_of_t" else "generic"
    else:
        raise DomainError(f"unknown direction {direction!r}")
    s = np.atleast_1d(s)
    order = np.argsort(s)
    return SpectrumCurve(s[order], out[order], kind, dict(curve.meta))


def f_to_beta_bound(curve, t):
    """``B(t) = max_alpha (f(alpha) - t alpha) + t - 1`` from a sampled f-curve."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    g = legendre_transform(curve, "f_to_beta", grid=t)
    return scalar_or_array(g.y + g.x - 1.0) if t.size > 1 else float(g.y[0] + t[0] - 1.0)


@dataclass(frozen=True)
class SymmetryReport:
    """Sup-norm defects of ``F(a) = a F(1/a)`` and ``B(B(t) - t + 1) = B(t)``."""

    f_defect: float
    b_defect: float
    f_points: int
    b_points: int

    def as_dict(self):
        return {"f_defect": self.f_defect, "b_defect": self.b_defect,
                "f_points": self.f_points, "b_points": self.b_points}


def check_spectrum_symmetries(F_curve, B_curve):
    """Interpolated defects of the inverse-map symmetries.

    Only points whose partner lies inside the sampled range (and where both
    values are finite) are compared; a curve with no comparable point yields
    defect 0.
    """
    F = F_curve.finite()
    a = F.x
    with np.errstate(divide="ignore"):
        inside = (a > 0) & (1.0 / a >= a.min()) & (1.0 / a <= a.max())
    f_def = 0.0
    if inside.any():
        partner = np.interp(1.0 / a[inside], F.x, F.y)
        f_def = float(np.max(np.abs(F.y[inside] - a[inside] * partner)))
    B = B_curve.finite()
    s = B.y - B.x + 1.0
    inside_b = (s >= B.x.min()) & (s <= B.x.max())
    b_def = 0.0
    if inside_b.any():
        partner = np.interp(s[inside_b], B.x, B.y)
        b_def = float(np.max(np.abs(partner - B.y[inside_b])))
    return SymmetryReport(f_def, b_def, int(inside.sum()), int(inside_b.sum()))
