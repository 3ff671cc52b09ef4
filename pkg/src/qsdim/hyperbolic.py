"""Hyperbolic geometry of the unit disk and the two-step Schwarz lemma.

Contains the pseudo-hyperbolic difference quotient, the hyperbolic metric,
the Beardon-Minda three-point quotient ``h*`` and a seeded property harness
for the extremal inequality ``h(k) <= ((k + l)/(1 + k l))^2``.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import check_disk, check_positive_int, check_range, scalar_or_array
from .exceptions import DomainError

#: Inequality checks get this absolute slack.
INEQ_TOL = 1e-12
#: Sampled points stay inside this radius to keep artanh well conditioned.
SAMPLE_RADIUS = 0.95
#: Fixed shard size, so results do not depend on the worker count.
SHARD_SIZE = 2048


@dataclass(frozen=True)
class TestFunction:
    """A holomorphic self-map of the disk meeting the lemma's hypotheses.

    Real-symmetric, nonnegative on ``(-1, 1)`` and not an automorphism.
    """

    __test__ = False  # not a pytest class

    description: str
    evaluator: Callable

    def __call__(self, z):
        return self.evaluator(z)


def squared_blaschke_mixture(weights, scales, zeros):
    """Convex combination ``sum_j w_j c_j ((z - a_j)/(1 - a_j z))^2``.

    Each term is real-symmetric, nonnegative on the real segment and maps the
    disk into itself, and all three properties survive convex combination.
    """
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    c = np.atleast_1d(np.asarray(scales, dtype=float))
    a = np.atleast_1d(np.asarray(zeros, dtype=float))
    if not (w.shape == c.shape == a.shape):
        raise DomainError("weights, scales and zeros must have equal length")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise DomainError("weights must be a probability vector")
    check_range(c, "scale", 0.0, 1.0)
    check_range(a, "zero", -1.0, 1.0, lo_closed=False, hi_closed=False)

    def h(z):
        z = np.asarray(z)
        zz = z[..., None]
        terms = ((zz - a) / (1.0 - a * zz)) ** 2
        return np.sum(w * c * terms, axis=-1)

    desc = " + ".join(
        f"{wj:.6g}*{cj:.6g}*B[{aj:.6g}]" for wj, cj, aj in zip(w, c, a)
    )
    return TestFunction(desc, h)


def random_test_function(rng, max_terms=4):
    """Draw a random member of the squared-Blaschke mixture family."""
    n = int(rng.integers(1, max_terms + 1))
    w = rng.dirichlet(np.ones(n))
    c = rng.uniform(0.0, 1.0, n)
    a = rng.uniform(-SAMPLE_RADIUS, SAMPLE_RADIUS, n)
    return squared_blaschke_mixture(w, c, a)


def pseudo_hyp(z, w):
    """Pseudo-hyperbolic difference ``[z, w] = (z - w)/(1 - conj(w) z)``."""
    z = check_disk(z, "z")
    w = check_disk(w, "w")
    return scalar_or_array((z - w) / (1.0 - np.conj(w) * z))


def hyp_dist(z, w):
    """Hyperbolic distance ``2 artanh |[z, w]|`` (curvature -1)."""
    return scalar_or_array(2.0 * np.arctanh(np.abs(pseudo_hyp(z, w))))


def schwarz_pick_quotient(h, z, w):
    """Three-point quotient ``h*(z, w) = [h(z), h(w)] / [z, w]``.

    ``h`` must not be a disk automorphism; ``z == w`` is rejected because
    the derivative limit is not implemented.
    """
    z = check_disk(z, "z")
    w = check_disk(w, "w")
    if np.any(z == w):
        raise DomainError("schwarz_pick_quotient needs z != w")
    hz = np.asarray(h(z), dtype=complex)
    hw = np.asarray(h(w), dtype=complex)
    num = (hz - hw) / (1.0 - np.conj(hw) * hz)
    den = (z - w) / (1.0 - np.conj(w) * z)
    return scalar_or_array(num / den)


@dataclass(frozen=True)
class ThreePointReport:
    lhs: float
    rhs: float
    ok: bool


def three_point_check(h, z, w, v, tol=1e-10):
    """Check ``d(h*(z, v), h*(w, v)) <= d(z, w)`` at one triple of points."""
    if z == v or w == v:
        raise DomainError("three_point_check needs z != v and w != v")
    a = schwarz_pick_quotient(h, z, v)
    b = schwarz_pick_quotient(h, w, v)
    lhs = float(2.0 * np.arctanh(abs((a - b) / (1.0 - np.conj(b) * a))))
    rhs = float(hyp_dist(z, w))
    return ThreePointReport(lhs, rhs, lhs <= rhs + tol)


def extremal_quotient_bound(k, l):
    """Sharp bound ``(k + 2l + k l^2)/(1 + 2kl + l^2)`` on ``h*(k, 0)``.

    This is ``tanh`` of ``d(0, k) + 2 d(0, l)``; equality holds for the
    squared Blaschke factor with double zero at ``-l``.
    """
    k = check_range(k, "k", 0.0, 1.0, hi_closed=False)
    l = check_range(l, "l", 0.0, 1.0, lo_closed=False, hi_closed=False)
    return scalar_or_array((k + 2 * l + k * l * l) / (1.0 + 2 * k * l + l * l))


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of a randomized verification run.

    ``worst_margin`` is the smallest observed slack (bound minus value); it
    is negative exactly when some sample violated the inequality outright.
    """

    violations: int
    worst_margin: float
    samples: int
    seed: int

    def as_dict(self):
        return {
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "samples": self.samples,
            "seed": self.seed,
        }


def _draw_mixtures(rng, n, max_terms):
    # Vectorized draw of n mixtures, padded to max_terms with zero weight.
    n_terms = rng.integers(1, max_terms + 1, n)
    mask = np.arange(max_terms) < n_terms[:, None]
    w = rng.gamma(1.0, size=(n, max_terms)) * mask
    w /= w.sum(axis=1, keepdims=True)
    c = rng.uniform(0.0, 1.0, (n, max_terms))
    a = rng.uniform(-SAMPLE_RADIUS, SAMPLE_RADIUS, (n, max_terms))
    return w, c, a


def _eval_mixtures(w, c, a, z):
    zz = np.asarray(z)[..., None]
    return np.sum(w * c * ((zz - a) / (1.0 - a * zz)) ** 2, axis=-1)


def _blaschke_shard(seed_seq, n, max_terms, tol):
    rng = np.random.default_rng(seed_seq)
    w, c, a = _draw_mixtures(rng, n, max_terms)
    k = rng.uniform(0.0, SAMPLE_RADIUS, n)
    h0 = _eval_mixtures(w, c, a, np.zeros(n))
    hk = _eval_mixtures(w, c, a, k)
    l = np.sqrt(h0)
    bound = ((k + l) / (1.0 + k * l)) ** 2
    margin = bound - hk
    return int(np.sum(margin < -tol)), float(margin.min())


def _shards(samples, seed):
    n_shards = -(-samples // SHARD_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(n_shards)
    sizes = [SHARD_SIZE] * (n_shards - 1) + [samples - SHARD_SIZE * (n_shards - 1)]
    return seqs, sizes


def _n_jobs(n_jobs):
    if n_jobs is None:
        n_jobs = int(os.environ.get("QSD_THREADS", "1") or 1)
    return max(1, n_jobs)


def _run_shards(fn, samples, seed, n_jobs, *args):
    seqs, sizes = _shards(samples, seed)
    jobs = _n_jobs(n_jobs)
    if jobs == 1:
        results = [fn(s, n, *args) for s, n in zip(seqs, sizes)]
    else:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(lambda sn: fn(sn[0], sn[1], *args), zip(seqs, sizes)))
    violations = sum(r[0] for r in results)
    worst = min(r[1] for r in results)
    return violations, worst


def verify_blaschke_lemma(samples=10_000, seed=42, max_terms=4, tol=INEQ_TOL, n_jobs=None):
    """Randomized check of ``h(k) <= B_{-l}(k)`` with ``l = sqrt(h(0))``.

    Test functions come from :func:`squared_blaschke_mixture`, so every
    sample satisfies the lemma's hypotheses by construction. Samples are
    split into fixed shards with seeds spawned from ``seed``; the result is
    identical for any ``n_jobs`` (default: ``$QSD_THREADS`` or 1).
    """
    samples = check_positive_int(samples, "samples")
    violations, worst = _run_shards(_blaschke_shard, samples, seed, n_jobs, max_terms, tol)
    return LemmaReport(violations, worst, samples, int(seed))


def _random_disk_points(rng, n, radius=SAMPLE_RADIUS):
    return radius * np.sqrt(rng.uniform(0.0, 1.0, n)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))


def _three_point_shard(seed_seq, n, max_terms, tol):
    rng = np.random.default_rng(seed_seq)
    w, c, a = _draw_mixtures(rng, n, max_terms)
    z, wp, v = (_random_disk_points(rng, n) for _ in range(3))

    def bracket(x, y):
        return (x - y) / (1.0 - np.conj(y) * x)

    hv = _eval_mixtures(w, c, a, v)
    hs_z = bracket(_eval_mixtures(w, c, a, z), hv) / bracket(z, v)
    hs_w = bracket(_eval_mixtures(w, c, a, wp), hv) / bracket(wp, v)
    lhs = 2.0 * np.arctanh(np.abs(bracket(hs_z, hs_w)))
    rhs = 2.0 * np.arctanh(np.abs(bracket(z, wp)))
    margin = rhs - lhs
    return int(np.sum(margin < -tol)), float(margin.min())


def verify_three_point(samples=1000, seed=42, max_terms=4, tol=1e-10, n_jobs=None):
    """Randomized check of the three-point inequality over the test family."""
    samples = check_positive_int(samples, "samples")
    violations, worst = _run_shards(_three_point_shard, samples, seed, n_jobs, max_terms, tol)
    return LemmaReport(violations, worst, samples, int(seed))
