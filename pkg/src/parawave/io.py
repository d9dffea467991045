"""File formats: JSON for matrices and coordinates, CSV for samples.

Complex numbers are always ``[re, im]`` pairs.  Floats are written with
Python's shortest round-trip ``repr``, so equal inputs give byte-identical
files and reading a file back recovers every value exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .cascade import FunctionSamples
from .parametrization import PhiParams
from .transform import Signal, SubbandCoeffs
from .wavelet_matrix import WaveletMatrix


class MalformedInput(ValueError):
    pass


def _pair(c):
    c = complex(c)
    return [float(c.real), float(c.imag)]


def _unpair(x, where):
    if (
        not isinstance(x, list)
        or len(x) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)
    ):
        raise MalformedInput(f"{where}: expected [re, im], got {x!r}")
    if not all(math.isfinite(t) for t in x):
        raise MalformedInput(f"{where}: non-finite number")
    return complex(x[0], x[1])


def _int(d, key, lo):
    v = d.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise MalformedInput(f"field {key!r} must be an integer >= {lo}, got {v!r}")
    return v


def dumps(obj):
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def wm_to_json(W):
    return {
        "m": W.m,
        "genus": W.genus,
        "rows": [[_pair(c) for c in row] for row in W.coeffs],
    }


def wm_from_json(d):
    if not isinstance(d, dict):
        raise MalformedInput("wavelet matrix must be a JSON object")
    m = _int(d, "m", 2)
    G = _int(d, "genus", 1)
    rows = d.get("rows")
    if not isinstance(rows, list) or len(rows) != m:
        raise MalformedInput(f"'rows' must list {m} rows")
    out = np.zeros((m, m * G), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m * G:
            raise MalformedInput(f"row {r} must have {m * G} entries")
        for j, x in enumerate(row):
            out[r, j] = _unpair(x, f"rows[{r}][{j}]")
    return WaveletMatrix(m, G, out)


def phi_to_json(p):
    return {"m": p.m, "g": p.g, "phi": [[_pair(c) for c in row] for row in p.phi]}


def phi_from_json(d):
    if not isinstance(d, dict):
        raise MalformedInput("coordinates must be a JSON object")
    m = _int(d, "m", 2)
    g = _int(d, "g", 0)
    phi = d.get("phi")
    if not isinstance(phi, list) or len(phi) != m - 1:
        raise MalformedInput(f"'phi' must list {m - 1} rows")
    out = np.zeros((m - 1, g), dtype=complex)
    for j, row in enumerate(phi):
        if not isinstance(row, list) or len(row) != g:
            raise MalformedInput(f"phi[{j}] must have {g} entries")
        for k, x in enumerate(row):
            out[j, k] = _unpair(x, f"phi[{j}][{k}]")
    return PhiParams(m, g, out)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc


def read_wavelet_matrices(path):
    """One matrix or a JSON array of them; returns ``(list, was_array)``."""
    d = read_json(path)
    if isinstance(d, list):
        if not d:
            raise MalformedInput(f"{path}: empty list")
        return [wm_from_json(x) for x in d], True
    return [wm_from_json(d)], False


def _csv_rows(text, header, path):
    rows = list(csv.reader(_io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip() for c in rows[0]] != header:
        raise MalformedInput(f"{path}: header must be {','.join(header)}")
    out = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != len(header):
            raise MalformedInput(f"{path}:{lineno}: expected {len(header)} fields")
        out.append((lineno, [c.strip() for c in r]))
    return out


def _parse_int(s, where):
    try:
        return int(s)
    except ValueError:
        raise MalformedInput(f"{where}: not an integer: {s!r}") from None


def _parse_float(s, where):
    try:
        v = float(s)
    except ValueError:
        raise MalformedInput(f"{where}: not a number: {s!r}") from None
    if not math.isfinite(v):
        raise MalformedInput(f"{where}: non-finite number")
    return v


def _read_text(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise MalformedInput(f"{path}: not UTF-8") from exc


def signal_from_csv(text, path="<signal>"):
    """Parse ``n,re,im``; missing indices between the extremes are zero."""
    entries = {}
    for lineno, (n, re, im) in _csv_rows(text, ["n", "re", "im"], path):
        where = f"{path}:{lineno}"
        k = _parse_int(n, where)
        if k in entries:
            raise MalformedInput(f"{where}: duplicate index {k}")
        entries[k] = complex(_parse_float(re, where), _parse_float(im, where))
    if not entries:
        return Signal(0, [])
    lo, hi = min(entries), max(entries)
    v = np.zeros(hi - lo + 1, dtype=complex)
    for k, c in entries.items():
        v[k - lo] = c
    return Signal(lo, v)


def signal_to_csv(f):
    lines = ["n,re,im"]
    for i, c in enumerate(f.samples):
        lines.append(f"{f.offset + i},{float(c.real)!r},{float(c.imag)!r}")
    return "\n".join(lines) + "\n"


def coeffs_to_csv(c):
    lines = ["r,k,re,im"]
    for r, k, v in c.rows():
        lines.append(f"{r},{k},{v.real!r},{v.imag!r}")
    return "\n".join(lines) + "\n"


def coeffs_from_csv(text, m, genus, path="<coeffs>"):
    entries = {}
    for lineno, (r, k, re, im) in _csv_rows(text, ["r", "k", "re", "im"], path):
        where = f"{path}:{lineno}"
        rr, kk = _parse_int(r, where), _parse_int(k, where)
        if not 0 <= rr < m:
            raise MalformedInput(f"{where}: subband {rr} outside 0..{m - 1}")
        if (rr, kk) in entries:
            raise MalformedInput(f"{where}: duplicate entry ({rr}, {kk})")
        entries[rr, kk] = complex(_parse_float(re, where), _parse_float(im, where))
    offsets, arrays = [], []
    for r in range(m):
        ks = [k for (rr, k) in entries if rr == r]
        if not ks:
            offsets.append(0)
            arrays.append(np.zeros(0, dtype=complex))
            continue
        lo, hi = min(ks), max(ks)
        a = np.zeros(hi - lo + 1, dtype=complex)
        for k in ks:
            a[k - lo] = entries[r, k]
        offsets.append(lo)
        arrays.append(a)
    return SubbandCoeffs(m, genus, tuple(offsets), tuple(arrays))


def samples_to_csv(phi, psis=()):
    """Columns ``i,x,phi_re,phi_im`` then ``psi<r>_re,psi<r>_im``.

    ``i`` is the global cell index and ``x`` the left end of the cell.
    """
    cols = [phi] + list(psis)
    lo = min(s.offset for s in cols)
    hi = max(s.end for s in cols)
    wins = [s.window(lo, hi) for s in cols]
    head = ["i", "x", "phi_re", "phi_im"]
    for r in range(1, len(cols)):
        head += [f"psi{r}_re", f"psi{r}_im"]
    M = phi.m**phi.level
    lines = [",".join(head)]
    for t in range(hi - lo):
        i = lo + t
        vals = [str(i), repr(i / M)]
        for w in wins:
            vals += [repr(float(w[t].real)), repr(float(w[t].imag))]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def samples_from_csv(text, m, level, path="<samples>"):
    """Inverse of ``samples_to_csv``; returns ``(phi, [psi...])``."""
    rows = [r for r in csv.reader(_io.StringIO(text)) if r]
    if not rows or rows[0][:4] != ["i", "x", "phi_re", "phi_im"] or len(rows[0]) % 2:
        raise MalformedInput(f"{path}: unexpected header")
    ncol = (len(rows[0]) - 2) // 2
    idx, vals = [], []
    for lineno, r in enumerate(rows[1:], start=2):
        where = f"{path}:{lineno}"
        if len(r) != len(rows[0]):
            raise MalformedInput(f"{where}: wrong number of fields")
        idx.append(_parse_int(r[0], where))
        nums = [_parse_float(s, where) for s in r[2:]]
        vals.append([complex(nums[2 * c], nums[2 * c + 1]) for c in range(ncol)])
    if idx and idx != list(range(idx[0], idx[0] + len(idx))):
        raise MalformedInput(f"{path}: cell indices must be consecutive")
    offset = idx[0] if idx else 0
    arr = np.array(vals, dtype=complex).reshape(len(idx), ncol)
    out = [FunctionSamples(m, level, offset, arr[:, c]) for c in range(ncol)]
    return out[0], out[1:]
