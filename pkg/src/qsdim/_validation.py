"""Input validation helpers.

All checks raise :class:`~qsdim.exceptions.DomainError` so callers (and the
CLI) can tell bad input apart from internal failures.
"""

import numpy as np

from .exceptions import DomainError


def _fmt(bound, closed, side):
    if side == "lo":
        return ("[" if closed else "(") + repr(bound)
    return repr(bound) + ("]" if closed else ")")


def check_range(x, name, lo=-np.inf, hi=np.inf, lo_closed=True, hi_closed=True):
    """Return ``x`` as a float array after checking ``lo <= x <= hi``.

    Parameters
    ----------
    x : float or array_like
        Value(s) to check.
    name : str
        Name used in the error message.
    lo, hi : float
        Interval end points.
    lo_closed, hi_closed : bool
        Whether the end points themselves are admissible.

    Returns
    -------
    ndarray
        ``np.asarray(x, dtype=float)``.
    """
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{name} contains NaN")
    lo_ok = arr >= lo if lo_closed else arr > lo
    hi_ok = arr <= hi if hi_closed else arr < hi
    if not np.all(lo_ok & hi_ok):
        bad = float(arr[~(lo_ok & hi_ok)].ravel()[0])
        interval = _fmt(lo, lo_closed, "lo") + ", " + _fmt(hi, hi_closed, "hi")
        raise DomainError(f"{name}={bad!r} outside {interval}")
    return arr


def check_disk(z, name="z", tol=1e-14):
    """Check that every point lies strictly inside the unit disk."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(np.abs(arr) > 1.0 - tol):
        raise DomainError(f"{name} must satisfy |{name}| < 1")
    return arr


def check_probability_vector(p, name="p", atol=1e-12, strictly_positive=False):
    """Check a probability vector: nonnegative entries summing to one."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a nonempty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if strictly_positive and np.any(arr <= 0):
        raise DomainError(f"{name} must have positive entries")
    if np.any(arr < 0):
        raise DomainError(f"{name} must have nonnegative entries")
    if abs(arr.sum() - 1.0) > atol:
        raise DomainError(f"{name} must sum to 1 (got {arr.sum()!r})")
    return arr


def check_positive_int(n, name, minimum=1):
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}")
    return int(n)


def scalar_or_array(arr):
    """Unwrap 0-d arrays to Python floats; pass other arrays through."""
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return arr.item()
    return arr
