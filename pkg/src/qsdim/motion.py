"""Explicit holomorphic motions with symmetric Beltrami data.

The base family is the radial stretch ``phi_lambda(z) = z |z|^(2 lambda/(1 - lambda))``,
the normalized solution of the Beltrami equation with coefficient
``lambda z / conj(z)``. Conjugating by real Mobius maps and renormalizing to
fix ``0, 1, inf`` produces further families with the same symmetry.

Points of the extended plane are handled in homogeneous coordinates
``(n, d)`` so that Mobius poles need no special cases.
"""

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from ._validation import check_positive_int, check_range, scalar_or_array
from .bounds import _compress
from .exceptions import DomainError, InjectivityError, NumericError
from .thermo import ComplexRadii, DiskPacking, bowen_dimension, entropy, gibbs_weights

FAMILY_KINDS = ("identity", "radial_stretch", "mobius_conjugated_stretch", "composition")
_N_PARAMS = {"identity": 0, "radial_stretch": 0, "mobius_conjugated_stretch": 4, "composition": 8}

MAX_CONTINUATION_STEPS = 2**16
QS_CHUNK = 4096
DIAMETER_SAMPLES = 2**10
DIAMETER_RESAMPLE = 2**14


def _check_lambda(lam, bound=1.0, closed=False, name="lambda"):
    lam = np.asarray(lam, dtype=complex)
    if not np.all(np.isfinite(lam)):
        raise DomainError(f"{name} must be finite")
    mod = np.abs(lam)
    # Closed bounds allow rounding from rho * exp(i theta).
    if np.any(mod > bound * (1 + 1e-12)) or (not closed and np.any(mod >= bound)):
        raise DomainError(f"{name} must satisfy |{name}| {'<=' if closed else '<'} {bound!r}")
    return lam


def _stretch(lam, z):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = z * np.exp((2.0 * lam / (1.0 - lam)) * np.log(np.abs(z)))
    return np.where(z == 0, 0.0 + 0.0j, out)


def stretch_eval(lam, z):
    """Radial stretch ``z exp((2 lambda/(1 - lambda)) log|z|)``, with ``0 -> 0``.

    For real ``lambda = k`` the positive axis maps by ``x -> x^K``.
    """
    lam = _check_lambda(lam)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("z must be finite")
    return scalar_or_array(_stretch(lam, z))


@dataclass(frozen=True)
class MapFamily:
    """A holomorphic motion ``lambda -> phi_lambda`` given in closed form.

    Parameters
    ----------
    kind : str
        ``identity``, ``radial_stretch``, ``mobius_conjugated_stretch`` (params
        ``[a, b, c, d]`` of a real Mobius map ``m``; evaluates ``m^-1 o phi o m``)
        or ``composition`` (params ``[a1, b1, c1, d1, a2, b2, c2, d2]``;
        evaluates ``m2 o phi o m1``).
    params : tuple of float
        Real Mobius coefficients. Every non-identity member is renormalized
        to fix ``0``, ``1`` and ``inf``.
    """

    kind: str = "radial_stretch"
    params: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise DomainError(f"unknown family kind {self.kind!r}; expected one of {FAMILY_KINDS}")
        try:
            params = tuple(float(x) for x in self.params)
        except (TypeError, ValueError):
            raise DomainError("family params must be real numbers") from None
        if len(params) != _N_PARAMS[self.kind]:
            raise DomainError(f"{self.kind} takes {_N_PARAMS[self.kind]} params, got {len(params)}")
        if not all(np.isfinite(params)):
            raise DomainError("family params must be finite")
        for j in range(0, len(params), 4):
            a, b, c, d = params[j : j + 4]
            if a * d - b * c == 0:
                raise DomainError("Mobius map is degenerate (ad - bc = 0)")
        object.__setattr__(self, "params", params)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "kind" not in data:
            raise DomainError("family must be an object with a 'kind' key")
        return cls(data["kind"], tuple(data.get("params", ())))

    def to_dict(self):
        return {"kind": self.kind, "params": list(self.params)}

    def mobius_pair(self):
        """Return ``(m1, m2)`` as 2x2 matrices, or ``None`` for the plain stretch."""
        if self.kind == "mobius_conjugated_stretch":
            a, b, c, d = self.params
            return np.array([[a, b], [c, d]]), np.array([[d, -b], [-c, a]])
        if self.kind == "composition":
            p = self.params
            return np.array([[p[0], p[1]], [p[2], p[3]]]), np.array([[p[4], p[5]], [p[6], p[7]]])
        return None


def _apply_mobius(m, n, d):
    return m[0, 0] * n + m[0, 1] * d, m[1, 0] * n + m[1, 1] * d


def _stretch_h(lam, n, d):
    # Homogeneous stretch; inf is fixed.
    at_inf = d == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = _stretch(lam, np.where(at_inf, 0.0, n / np.where(at_inf, 1.0, d)))
    return np.where(at_inf, 1.0 + 0.0j, w), np.where(at_inf, 0.0 + 0.0j, 1.0 + 0.0j)


def _det(un, ud, vn, vd):
    return un * vd - ud * vn


def _conjugated_eval(pair, lam, z):
    m1, m2 = pair

    def image(n, d):
        n, d = _apply_mobius(m1, n, d)
        n, d = _stretch_h(lam, n, d)
        return _apply_mobius(m2, n, d)

    one = np.ones_like(z)
    wn, wd = image(z, one)
    p0 = image(0.0 * one, one)
    p1 = image(one, one)
    pinf = image(one, 0.0 * one)
    # Cross-ratio normalization sending p0, p1, pinf to 0, 1, inf.
    num = _det(wn, wd, *p0) * _det(*p1, *pinf)
    den = _det(wn, wd, *pinf) * _det(*p1, *p0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def family_eval(f, lam, z):
    """Evaluate the family member ``phi_lambda`` of ``f`` at ``z``.

    ``lam`` and ``z`` broadcast against each other.
    """
    lam = _check_lambda(lam)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("z must be finite")
    return scalar_or_array(_family(f, lam, z))


def _family(f, lam, z):
    if f.kind == "identity":
        return np.broadcast_to(z, np.broadcast(lam, z).shape).astype(complex)
    if f.kind == "radial_stretch":
        return _stretch(lam, z)
    lam, z = np.broadcast_arrays(lam, z)
    return _conjugated_eval(f.mobius_pair(), lam, z)


@dataclass(frozen=True)
class MotionConfig:
    """Settings for restricting a motion to ``rho D``.

    ``a`` is the rescaling constant of the moved radii; ``None`` means the
    empirical ``1/C^2`` from :func:`qs_constant` with ``qs_samples`` and
    ``seed``.
    """

    rho: float
    a: float = None
    steps: int = 16
    qs_samples: int = 100_000
    seed: int = 42

    def __post_init__(self):
        check_range(self.rho, "rho", 0.0, 1.0, lo_closed=False, hi_closed=False)
        if self.a is not None:
            check_range(self.a, "a", 0.0, np.inf, lo_closed=False, hi_closed=False)
        check_positive_int(self.steps, "steps")
        check_positive_int(self.qs_samples, "qs_samples")


def resolve_a(f, cfg):
    """The rescaling constant: ``cfg.a`` or ``1/C^2`` with the empirical ``C``."""
    if cfg.a is not None:
        return float(cfg.a)
    return 1.0 / qs_constant(f, cfg, cfg.qs_samples, cfg.seed) ** 2


def _disk_points(packing):
    if isinstance(packing, DiskPacking):
        return packing.centers, packing.radii
    c, r = packing
    return np.atleast_1d(np.asarray(c, dtype=float)), np.atleast_1d(np.asarray(r, dtype=float))


def complex_radii(packing, f, lam, cfg, a=None):
    """Complex radii ``a (phi_lambda(z_i + r_i) - phi_lambda(z_i))`` with tracked arguments.

    Arguments are continued along the segment from ``0`` to ``lam`` in
    ``cfg.steps`` sub-steps; the step count doubles until every per-step
    increment is below ``pi/2``.
    """
    lam = complex(_check_lambda(lam, cfg.rho, closed=True))
    if a is None:
        a = resolve_a(f, cfg)
    c, r = _disk_points(packing)
    steps = cfg.steps
    while True:
        path = lam * np.arange(steps + 1)[:, None] / steps
        vals = a * (_family(f, path, (c + r)[None, :]) - _family(f, path, c[None, :]))
        if not np.all(np.isfinite(vals)):
            raise NumericError("non-finite moved radius")
        if np.any(vals == 0):
            raise InjectivityError("moved radius vanished; the family is not injective")
        inc = np.angle(vals[1:] / vals[:-1])
        if np.all(np.abs(inc) < np.pi / 2):
            break
        steps *= 2
        if steps > MAX_CONTINUATION_STEPS:
            raise NumericError("branch continuation did not settle")
    return ComplexRadii(vals[-1], np.angle(vals[0]) + inc.sum(axis=0))


def moved_bowen_dimension(packing, f, lam, cfg, a=None):
    """Dimension of the Cantor set generated by the moved disks at ``lam``."""
    return bowen_dimension(complex_radii(packing, f, lam, cfg, a))


def _qs_quotients(f, rho, v):
    # v rows: (z.re, z.im, s, alpha, beta, u, theta).
    zr, zi, s, al, be, u, th = v.T
    z = zr + 1j * zi
    x = z + s * np.exp(1j * al)
    y = z + s * u * np.exp(1j * be)
    ok = (np.abs(z) < 1) & (np.abs(x) < 1) & (np.abs(y) < 1) & (s > 0) & (u >= 1)
    lam = rho * np.exp(1j * th)
    pts = np.stack([np.where(ok, z, 0), np.where(ok, x, 0.5), np.where(ok, y, -0.5)])
    img = _family(f, lam[None, :], pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.abs(img[1] - img[0]) / np.abs(img[2] - img[0])
    return np.where(ok & np.isfinite(q), q, 0.0)


def _qs_chunk(f, rho, seed_seq):
    rng = np.random.default_rng(seed_seq)
    n = QS_CHUNK
    z = np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    x = np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    d = x - z
    u = np.where(np.arange(n) % 2 == 0, 1.0, rng.uniform(1.0, 2.0, n))
    v = np.column_stack([
        z.real, z.imag, np.abs(d), np.angle(d),
        rng.uniform(0, 2 * np.pi, n), u, rng.uniform(0, 2 * np.pi, n),
    ])
    return v, _qs_quotients(f, rho, v)


def _refine(f, rho, v0):
    def neg(v):
        return -_qs_quotients(f, rho, v[None, :])[0]

    best = -neg(v0)
    # One restart from the converged point guards against simplex collapse.
    for _ in range(2):
        res = optimize.minimize(neg, v0, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        if -res.fun > best:
            best, v0 = float(-res.fun), res.x
    return best


@functools.lru_cache(maxsize=64)
def _qs_constant_cached(f, rho, samples, seed):
    n_chunks = -(-samples // QS_CHUNK)
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    best = 1.0
    for i, seq in enumerate(seqs):
        v, q = _qs_chunk(f, rho, seq)
        used = min(QS_CHUNK, samples - i * QS_CHUNK)
        j = int(np.argmax(q[:used]))
        if used == QS_CHUNK and q[j] > best:
            best = max(best, _refine(f, rho, v[j]))
        else:
            best = max(best, float(q[j]))
    return float(best)


def qs_constant(f, cfg, samples=None, seed=None):
    """Empirical quasisymmetry constant ``C(rho)`` of the restricted motion.

    Estimates the largest ``|phi(x) - phi(z)| / |phi(y) - phi(z)|`` over
    ``x, y, z`` in the unit disk with ``|x - z| <= |y - z|`` and
    ``|lambda| <= rho``. For fixed points the quotient is holomorphic and
    nonvanishing in ``lambda``, so ``lambda`` is sampled on the circle
    ``|lambda| = rho`` only.

    Samples come in chunks of 4096 with seeds spawned from ``seed``; the
    best sample of a complete chunk is polished by Nelder-Mead whenever it
    beats the running maximum. The
    result is a lower bound on the true constant and is nondecreasing in
    ``samples`` for a fixed seed.
    """
    samples = check_positive_int(cfg.qs_samples if samples is None else samples, "samples")
    seed = cfg.seed if seed is None else int(seed)
    if f.kind == "identity":
        return 1.0
    return _qs_constant_cached(f, float(cfg.rho), samples, seed)


def _pow2_at_least(n):
    return 1 << max(3, int(np.ceil(np.log2(n))))


def image_diameter(f, lam, disk, boundary_samples=DIAMETER_SAMPLES):
    """Sampled diameter of ``phi_lambda`` applied to a disk.

    ``boundary_samples`` is rounded up to a power of two, so sample sets are
    nested and the estimate never decreases as the count grows. Both real
    endpoints ``center +- radius`` are always among the samples.
    """
    check_positive_int(boundary_samples, "boundary_samples", minimum=8)
    lam = _check_lambda(lam)
    center, radius = (float(x) for x in disk)
    if radius <= 0:
        raise DomainError("radius must be positive")
    n = _pow2_at_least(boundary_samples)
    theta = 2 * np.pi * np.arange(n) / n
    w = _family(f, lam, center + radius * np.exp(1j * theta))
    if not np.all(np.isfinite(w)):
        raise NumericError("non-finite image point")
    pts = np.column_stack([w.real, w.imag])
    try:
        pts = pts[ConvexHull(pts).vertices]
    except QhullError:
        pass
    return float(pdist(pts).max())


def default_lambda_grid(rho):
    """8 radii x 16 angles in ``rho D``, 32 interior real points, and 0."""
    radii = rho * np.arange(1, 9) / 8
    angles = 2 * np.pi * np.arange(16) / 16
    disk = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
    real = np.linspace(-rho, rho, 34)[1:-1]
    return np.concatenate([[0.0], disk, real]).astype(complex)


@dataclass(frozen=True)
class PhiReport:
    """Per-property outcome of :func:`verify_phi_properties`.

    ``margins`` holds the worst slack of each property (negative means
    violated beyond the tolerance).
    """

    passed: dict
    margins: dict
    phi0: complex
    delta: float
    a: float
    points: int

    @property
    def ok(self):
        return all(self.passed.values())

    @property
    def violations(self):
        return sum(not v for v in self.passed.values())

    def as_dict(self):
        return {
            "passed": dict(self.passed),
            "margins": dict(self.margins),
            "phi0": float(np.real(self.phi0)),
            "delta": self.delta,
            "a": self.a,
            "points": self.points,
            "violations": self.violations,
        }


PHI_TOLS = {"unit_disk": 1e-9, "symmetry": 1e-10, "real_nonneg": 1e-10, "origin": 1e-10, "lemma": 1e-9}


def _phi_values(packing, f, lams, cfg, a, p, I):
    out = np.empty(len(lams), dtype=complex)
    for i, lam in enumerate(lams):
        radii = complex_radii(packing, f, lam, cfg, a)
        Lam = -np.sum(p * (np.log(radii.moduli) + 1j * radii.branch_args))
        out[i] = 1.0 - I / Lam if Lam != 0 else np.nan
    return out


def verify_phi_properties(packing, f, delta, cfg, lam_grid=None):
    """Check the five properties of ``Phi(lambda) = 1 - I_p / Lambda_p(lambda)``.

    ``p`` are the Gibbs weights of the rescaled radii at ``delta``. Checked
    over the grid: ``|Phi| <= 1``, ``Phi(conj lambda) = conj Phi(lambda)``,
    ``Phi`` real and nonnegative on real ``lambda``, ``Phi(0) <= 1 - delta``,
    and ``Phi(k) <= B_{-sqrt(1 - delta)}(|k|/rho)`` on real ``k``.

    Raises
    ------
    DomainError
        If ``sum (a r_i)^delta < 1``.
    """
    delta = float(check_range(delta, "delta", 0.0, 1.0, lo_closed=False))
    c, r = _disk_points(packing)
    a = resolve_a(f, cfg)
    hyp = float(np.sum((a * r) ** delta))
    if hyp < 1.0 - 1e-12:
        raise DomainError(f"hypothesis not met: sum (a r_i)^delta = {hyp!r} < 1")
    lams = default_lambda_grid(cfg.rho) if lam_grid is None else np.atleast_1d(np.asarray(lam_grid, dtype=complex))
    _check_lambda(lams, cfg.rho, closed=True)
    if not np.any(lams == 0):
        lams = np.concatenate([[0.0], lams])
    p = gibbs_weights(a * r, delta)
    I = entropy(p)

    phi = _phi_values(packing, f, lams, cfg, a, p, I)
    phi_conj = _phi_values(packing, f, np.conj(lams), cfg, a, p, I)
    if not np.all(np.isfinite(phi)) or not np.all(np.isfinite(phi_conj)):
        raise NumericError("Lyapunov exponent vanished on the grid")
    real = lams.imag == 0
    phi0 = phi[lams == 0][0]
    k = np.abs(lams[real].real)
    ell = np.sqrt(1.0 - delta)
    lemma_bound = ((k / cfg.rho + ell) / (1.0 + ell * k / cfg.rho)) ** 2

    margins = {
        "unit_disk": float(np.min(1.0 - np.abs(phi))),
        "symmetry": float(-np.max(np.abs(phi_conj - np.conj(phi)))),
        "real_nonneg": float(min(np.min(phi[real].real), -np.max(np.abs(phi[real].imag)))),
        "origin": float(1.0 - delta - phi0.real),
        "lemma": float(np.min(lemma_bound - phi[real].real)),
    }
    passed = {name: margins[name] >= -PHI_TOLS[name] for name in PHI_TOLS}
    return PhiReport(passed, margins, phi0, delta, a, int(lams.size))


@dataclass(frozen=True)
class PackingReport:
    """Outcome of :func:`verify_packing_implication`.

    ``status`` is ``"pass"``, ``"fail"`` or ``"hypothesis not met"``.
    """

    status: str
    hypothesis_sum: float
    conclusion_sum: float
    exponent: float
    a: float
    k: float
    delta: float

    @property
    def ok(self):
        return self.status != "fail"

    def as_dict(self):
        return {
            "status": self.status,
            "hypothesis_sum": self.hypothesis_sum,
            "conclusion_sum": self.conclusion_sum,
            "exponent": self.exponent,
            "a": self.a,
            "k": self.k,
            "delta": self.delta,
            "violations": int(self.status == "fail"),
        }


def verify_packing_implication(packing, f, k, delta, cfg):
    """Check that ``sum (a r_i)^delta >= 1`` implies
    ``sum (a diam phi_k B_i)^D(delta, k/rho) >= 1``.

    Diameters are sampled lower bounds (2^10 boundary points); a failing sum
    is recomputed with 2^14 points before it is reported.
    """
    k = float(check_range(k, "k", 0.0, 1.0, hi_closed=False))
    delta = float(check_range(delta, "delta", 0.0, 1.0))
    if k >= cfg.rho:
        raise DomainError("k must be smaller than rho")
    c, r = _disk_points(packing)
    a = resolve_a(f, cfg)
    exponent = float(_compress(delta, k / cfg.rho))
    hyp = float(np.sum((a * r) ** delta))
    if hyp < 1.0:
        return PackingReport("hypothesis not met", hyp, float("nan"), exponent, a, k, delta)

    def conclusion(n):
        diam = np.array([image_diameter(f, k, (ci, ri), n) for ci, ri in zip(c, r)])
        return float(np.sum((a * diam) ** exponent))

    total = conclusion(DIAMETER_SAMPLES)
    if total < 1.0 - 1e-9:
        total = conclusion(DIAMETER_RESAMPLE)
    status = "pass" if total >= 1.0 - 1e-9 else "fail"
    return PackingReport(status, hyp, total, exponent, a, k, delta)
