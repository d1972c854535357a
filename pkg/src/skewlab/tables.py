"""CSV emission with fixed, round-trip exact number formatting."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """17 significant digits in scientific notation."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def render(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def write(path, header, rows) -> Path:
    """Write atomically so readers never see a half-written table."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(render(header, rows))
    os.replace(tmp, path)
    return path


def spectral_pairs_rows(eps, zero_modes):
    rows = [(i, e, "pair") for i, e in enumerate(eps)]
    rows += [(len(eps) + j, 0.0, "zero") for j in range(zero_modes)]
    return rows


SPECTRUM_HEADER = ("index", "eps", "kind")
DOS_HEADER = ("bin_center", "mass")
SPECTRAL_HEADER = ("eps", "re_G", "im_G", "abs_G")
PEAKS_HEADER = ("ordinate", "prominence")
COMPARISON_HEADER = ("index", "peak", "zero", "scaled_zero", "residual")
ZEROS_HEADER = ("index", "ordinate", "bracket_width")


def dos_rows(hist):
    return list(zip(hist.centers, hist.masses))


def spectral_rows(grid):
    v = grid.values
    return list(zip(grid.eps_grid, v.real, v.imag, np.abs(v)))


def peaks_rows(peaks):
    return list(zip(peaks.ordinates, peaks.prominences))


def comparison_rows(report):
    return [
        (i + 1, y, g, report.scale * g, r)
        for i, (y, g, r) in enumerate(zip(report.peaks, report.zeros, report.residuals))
    ]


def zeros_rows(ordinates, widths):
    return [(i + 1, g, w) for i, (g, w) in enumerate(zip(ordinates, widths))]
