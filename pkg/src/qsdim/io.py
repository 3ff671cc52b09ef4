"""File formats: packing and measure JSON in, CSV and JSON out.

Numbers are written with at most 12 significant digits; infinities become the
strings ``inf`` and ``-inf`` so that files never carry bare IEEE specials.
"""

import csv
import io
import json
import math

import numpy as np

from .exceptions import DomainError
from .motion import MapFamily
from .spectra import SelfSimilarMeasure, SpectrumCurve
from .thermo import DiskPacking


def fmt(x):
    """Format a number with ``%.12g``; infinities as ``inf``/``-inf``."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    out = "%.12g" % x
    return "0" if out == "-0" else out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return float(fmt(x))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    return obj


def dumps_json(obj):
    """Deterministic JSON text (sorted keys, 12-digit numbers, newline-terminated)."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def dumps_csv(header, rows, comments=()):
    """CSV text with optional ``#`` comment lines, one header row and formatted values."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def dumps_table(header, rows, fmt_name="csv", comments=()):
    if fmt_name == "json":
        payload = {"columns": list(header), "rows": [list(r) for r in rows]}
        if comments:
            payload["comments"] = list(comments)
        return dumps_json(payload)
    return dumps_csv(header, rows, comments)


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed JSON in {path}: {exc}") from None


def load_packing(path):
    """Read ``{"disks": [...], "family": {...}}``; the family defaults to the radial stretch."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise DomainError("packing file must hold a JSON object")
    packing = DiskPacking.from_dict(data)
    family = MapFamily.from_dict(data["family"]) if "family" in data else MapFamily("radial_stretch")
    return packing, family


def load_measure(path):
    """Read ``{"probabilities": [...], "ratios": [...]}``."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise DomainError("measure file must hold a JSON object")
    return SelfSimilarMeasure.from_dict(data)


def _parse_float(s):
    s = s.strip()
    if s in ("inf", "+inf"):
        return math.inf
    if s == "-inf":
        return -math.inf
    return float(s)


def load_curve_csv(path, kind="generic"):
    """Read a two-column ``x,y`` CSV with one header row; ``#`` lines are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    if len(lines) < 2:
        raise DomainError(f"{path}: expected a header row and data rows")
    xs, ys = [], []
    for n, row in enumerate(csv.reader(lines[1:]), start=2):
        if len(row) < 2:
            raise DomainError(f"{path}:{n}: expected two columns")
        try:
            xs.append(_parse_float(row[0]))
            ys.append(_parse_float(row[1]))
        except ValueError:
            raise DomainError(f"{path}:{n}: not a number") from None
    return SpectrumCurve(xs, ys, kind)
