"""Thermodynamic formalism for finite systems of disks.

The moved disks of a holomorphic motion are summarized by their complex
radii ``r_i(lambda)``. The Cantor set they generate is treated as the
attractor of the similarity system with ratios ``|r_i|``, so its dimension
is the zero of the pressure ``P(d) = log sum |r_i|^d`` (Bowen's formula).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from ._validation import check_probability_vector, check_range
from .exceptions import DomainError

PACKING_TOL = 1e-12


def packing_violations(centers, radii, tol=PACKING_TOL):
    """List the packing invariants broken by ``(centers, radii)``.

    Returns an empty list for a valid packing: nonempty, positive radii
    below 1, every disk inside the closed unit disk, interiors disjoint
    (touching is allowed).
    """
    c = np.asarray(centers, dtype=float)
    r = np.asarray(radii, dtype=float)
    problems = []
    if c.ndim != 1 or c.shape != r.shape:
        return ["centers and radii must be 1-d lists of equal length"]
    if c.size == 0:
        return ["packing must contain at least one disk"]
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(r))):
        return ["centers and radii must be finite"]
    for i in np.flatnonzero((r <= 0) | (r >= 1)):
        problems.append(f"disk {i}: radius {r[i]!r} not in (0, 1)")
    for i in np.flatnonzero(np.abs(c) + r > 1 + tol):
        problems.append(f"disk {i}: not inside the unit disk (|center| + radius = {abs(c[i]) + r[i]!r})")
    order = np.argsort(c)
    for i, j in zip(order[:-1], order[1:]):
        if c[j] - c[i] < r[i] + r[j] - tol:
            problems.append(f"disks {i} and {j} overlap")
    return problems


@dataclass(frozen=True)
class DiskPacking:
    """Disjoint disks centered on the real line inside the unit disk."""

    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.array(self.centers, dtype=float)
        r = np.array(self.radii, dtype=float)
        problems = packing_violations(c, r)
        if problems:
            raise DomainError("invalid packing: " + "; ".join(problems))
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    def __len__(self):
        return self.centers.size

    @classmethod
    def from_dict(cls, data):
        try:
            disks = data["disks"]
            centers = [float(d["center"]) for d in disks]
            radii = [float(d["radius"]) for d in disks]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed packing description: {exc!r}") from None
        return cls(centers, radii)

    def to_dict(self):
        return {"disks": [{"center": float(c), "radius": float(r)} for c, r in zip(self.centers, self.radii)]}


def tiling_packing():
    """Disks of radii 1/2, 1/4, 1/4 whose diameters tile ``[-1, 1]``."""
    return DiskPacking([-0.5, 0.25, 0.75], [0.5, 0.25, 0.25])


def random_packing(rng, n, fill=1.0):
    """Random packing of ``n`` disks whose diameters are disjoint in ``[-fill, fill]``."""
    cuts = np.sort(rng.uniform(-fill, fill, 2 * n))
    left, right = cuts[0::2], cuts[1::2]
    return DiskPacking((left + right) / 2, (right - left) / 2)


def random_tiling(rng, n):
    """Random packing of ``n`` disks whose diameters tile ``[-1, 1]`` (so ``sum r = 1``)."""
    cuts = np.concatenate([[-1.0], np.sort(rng.uniform(-1.0, 1.0, n - 1)), [1.0]])
    return DiskPacking((cuts[:-1] + cuts[1:]) / 2, np.diff(cuts) / 2)


@dataclass(frozen=True)
class ComplexRadii:
    """Complex radii with continuously tracked arguments.

    ``branch_args[i]`` agrees with ``arg(values[i])`` modulo ``2 pi``; the
    motion module produces it by continuation from ``lambda = 0``.
    """

    values: np.ndarray
    branch_args: np.ndarray = field(default=None)

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if v.size == 0:
            raise DomainError("radii must be nonempty")
        if np.any(v == 0):
            raise DomainError("complex radius is zero")
        if self.branch_args is None:
            args = np.angle(v)
        else:
            args = np.atleast_1d(np.asarray(self.branch_args, dtype=float))
            if args.shape != v.shape:
                raise DomainError("branch_args must match values")
            drift = np.angle(np.exp(1j * (args - np.angle(v))))
            if np.any(np.abs(drift) > 1e-8):
                raise DomainError("branch_args disagree with arg(values) mod 2pi")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "branch_args", args)

    @classmethod
    def real(cls, radii):
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        if np.any(r <= 0):
            raise DomainError("real radii must be positive")
        return cls(r.astype(complex), np.zeros_like(r))

    @property
    def moduli(self):
        return np.abs(self.values)

    def __len__(self):
        return self.values.size


def _as_radii(radii):
    if isinstance(radii, ComplexRadii):
        return radii
    arr = np.atleast_1d(np.asarray(radii))
    if np.iscomplexobj(arr):
        return ComplexRadii(arr)
    return ComplexRadii.real(arr)


def _log_moduli(radii):
    return np.log(_as_radii(radii).moduli)


def _pressure(log_r, d):
    return float(special.logsumexp(d * log_r))


def pressure(radii, d):
    """Pressure ``P(d) = log sum_i |r_i|^d`` for ``d in [0, 2]``."""
    d = float(check_range(d, "d", 0.0, 2.0))
    return _pressure(_log_moduli(radii), d)


def entropy(p):
    """Shannon entropy ``-sum p_i log p_i`` with ``0 log 0 = 0``."""
    p = check_probability_vector(p)
    return float(np.sum(special.entr(p)))


def lyapunov(p, radii):
    """Complex Lyapunov exponent ``-sum p_i log r_i`` on the tracked branch."""
    p = check_probability_vector(p)
    radii = _as_radii(radii)
    if len(radii) != p.size:
        raise DomainError("weights and radii differ in length")
    logs = np.log(radii.moduli) + 1j * radii.branch_args
    return complex(-np.sum(p * logs))


def gibbs_weights(radii, delta):
    """Normalized power weights ``r_i^delta / sum_j r_j^delta``.

    These maximize ``I_p - delta Re Lambda_p`` (equality in the variational
    principle).
    """
    delta = float(check_range(delta, "delta", 0.0, 2.0))
    return special.softmax(delta * _log_moduli(radii))


def bowen_dimension(radii, xtol=1e-15):
    """Zero of the pressure, i.e. the dimension of the generated Cantor set.

    Requires every ``|r_i|`` in ``(0, 1)`` so that the pressure is strictly
    decreasing. The root is bracketed on ``[0, 2]`` and the upper end is
    doubled while the pressure is still positive there.
    """
    log_r = _log_moduli(radii)
    if np.any(log_r >= 0):
        raise DomainError("Bowen's formula needs every |r_i| < 1")
    if log_r.size == 1:
        return 0.0
    hi = 2.0
    while _pressure(log_r, hi) > 0:
        hi *= 2.0
    return float(optimize.bisect(_pressure, 0.0, hi, args=(log_r,), xtol=xtol))


def variational_gap(p, radii, d):
    """Signed gap ``I_p - d Re Lambda_p - P(d)``; never positive."""
    lam = lyapunov(p, radii)
    return entropy(p) - float(d) * lam.real - _pressure(_log_moduli(radii), float(d))


def phi_function(I, Lam):
    """The holomorphic comparison function ``1 - I / Lambda``."""
    if I < 0:
        raise DomainError("entropy must be nonnegative")
    Lam = complex(Lam)
    if Lam == 0:
        raise DomainError("Lyapunov exponent is zero")
    if Lam.real <= 0:
        raise DomainError("Lyapunov exponent must have positive real part")
    out = 1.0 - I / Lam
    return out.real if Lam.imag == 0 else out
