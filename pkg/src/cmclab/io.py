"""Text artifacts: field snapshots and CSV tables with 17 significant digits."""

from __future__ import annotations

import csv
import io as _io
import os

import numpy as np

from .errors import ConfigurationError
from .sphere import SphericalField, SphericalGrid

GRID_HEADER = "# cmclab-field grid"
SPECTRAL_HEADER = "# cmclab-field spectral"


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def csv_text(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]


def write_snapshot(field, path, representation="grid"):
    g = field.grid
    meta = f"l_max={g.l_max} n_lat={g.n_lat} n_lon={g.n_lon}"
    if representation == "grid":
        rows = [(i, j, field.values[i, j]) for i in range(g.n_lat) for j in range(g.n_lon)]
        text = f"{GRID_HEADER} {meta}\n" + csv_text(["i_lat", "i_lon", "value"], rows)
    elif representation == "spectral":
        c = field.coeffs
        L = g.l_max
        rows = [(l, m, c[l, m + L].real, c[l, m + L].imag) for l in range(L + 1) for m in range(-l, l + 1)]
        text = f"{SPECTRAL_HEADER} {meta}\n" + csv_text(["l", "m", "re", "im"], rows)
    else:
        raise ConfigurationError(f"unknown representation {representation!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _parse_meta(line):
    out = {}
    for tok in line.split()[3:]:
        k, _, v = tok.partition("=")
        out[k] = int(v)
    return out


def read_snapshot(path):
    if not os.path.isfile(path):
        raise ConfigurationError(f"snapshot not found: {path}")
    with open(path) as fh:
        first = fh.readline().strip()
        body = fh.read()
    try:
        meta = _parse_meta(first)
        grid = SphericalGrid(meta["l_max"], meta["n_lat"], meta["n_lon"])
        rows = list(csv.reader(_io.StringIO(body)))[1:]
        if first.startswith(GRID_HEADER):
            v = np.empty(grid.shape)
            for i, j, val in rows:
                v[int(i), int(j)] = float(val)
            return SphericalField(grid, values=v)
        if first.startswith(SPECTRAL_HEADER):
            L = grid.l_max
            c = np.zeros((L + 1, 2 * L + 1), dtype=complex)
            for l, m, re, im in rows:
                c[int(l), int(m) + L] = complex(float(re), float(im))
            return SphericalField(grid, coeffs=c)
    except (KeyError, ValueError, IndexError) as exc:
        raise ConfigurationError(f"malformed snapshot {path}: {exc}") from exc
    raise ConfigurationError(f"unrecognized snapshot header in {path}")
