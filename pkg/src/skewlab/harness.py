"""Experiment driver shared by the HTTP service and the CLI.

Each ``run_*`` function validates its inputs, computes, and returns plain
data.  :func:`run_scan` also writes its CSV tables and reuses cached sweeps.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import tables
from .config import RunConfig, eps_grid
from .errors import DimensionMismatch, NotEnoughPeaks
from .fock_oracle import MAX_N, MAX_N_LARGE, oracle_report
from .quadratic_hamiltonian import (
    HoppingProfile,
    block_spectrum,
    build_block,
    build_pairing,
    excitation_spectrum,
)
from .riemann_scan import (
    KGrid,
    SweepResult,
    auto_delta,
    build_gauge_delta,
    dos,
    find_peaks,
    fit_scale,
    params_key,
    primes_below,
    spectral_function,
    spectral_product,
    sweep,
)
from .skew_core import eigen_skew
from .zeta_oracle import find_zeros

log = logging.getLogger(__name__)


def run_spectrum(N: int, p: int, k: float):
    """Spectral pairs of the gauge matrix at a single k."""
    pairs, _ = eigen_skew(build_gauge_delta(N, p, k))
    return pairs


def run_hamiltonian_check(t, N=None, oracle: bool = False, allow_large: bool = False) -> dict:
    """Closed-form excitation energies against a dense eigensolve of T, per spin.

    With ``oracle=True`` the Fock-space checks run too, when the size allows;
    otherwise the report carries an explicit skip notice.
    """
    profile = HoppingProfile(tuple(t))
    if N is not None and N != profile.N:
        raise DimensionMismatch(f"N={N} needs {N - 1} hopping amplitudes, file has {len(profile.t)}")
    pairing = build_pairing(profile)
    closed = excitation_spectrum(pairing)
    deviation = 0.0
    for sigma in (1, -1):
        ev = block_spectrum(build_block(pairing, sigma))
        deviation = max(deviation, float(np.max(np.abs(ev - closed.eps))))
    report = {
        "N": profile.N,
        "quasi": [float(x) for x in closed.quasi],
        "min_excitation": float(closed.quasi[0]),
        "closed_form_max_deviation": deviation,
        "oracle": None,
        "notice": None,
    }
    if oracle:
        cap = MAX_N_LARGE if allow_large else MAX_N
        if profile.N > cap:
            report["notice"] = (
                f"Fock oracle skipped: N={profile.N} exceeds the limit of {cap} "
                f"(dimension 2^{4 * profile.N})"
            )
        else:
            report["oracle"] = oracle_report(profile, allow_large=allow_large)
    return report


def format_hamiltonian_report(report: dict) -> str:
    lines = [f"N: {report['N']}"]
    lines.append("quasi: " + " ".join(f"{q:.12g}" for q in report["quasi"]))
    lines.append(f"min_excitation: {report['min_excitation']:.12g}")
    lines.append(f"closed_form_max_deviation: {report['closed_form_max_deviation']:.3e}")
    if report.get("notice"):
        lines.append(f"notice: {report['notice']}")
    if report.get("oracle"):
        for key, val in report["oracle"].items():
            lines.append(f"oracle.{key}: {val:.3e}" if isinstance(val, float) else f"oracle.{key}: {val}")
    return "\n".join(lines) + "\n"


def run_zeros(m: int):
    return find_zeros(m)


class SweepCache:
    """Sweeps stored as ``.npz`` files named by the parameter digest."""

    def __init__(self, directory):
        self.dir = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0

    def _path(self, grid: KGrid):
        return self.dir / f"sweep_{params_key(grid)}.npz"

    def get(self, grid: KGrid):
        if self.dir is None:
            return None
        path = self._path(grid)
        if not path.exists():
            return None
        with np.load(path) as data:
            eps, zeros = data["eps"], data["zero_modes"]
        eps.setflags(write=False)
        zeros.setflags(write=False)
        self.hits += 1
        log.info("sweep cache hit: N=%d p=%d n_k=%d (%s)", grid.N, grid.p, grid.n_k, path.name)
        return SweepResult(grid, eps, zeros)

    def put(self, result: SweepResult):
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self._path(result.grid)
        tmp = path.with_name(path.name + f".{os.getpid()}.tmp.npz")
        np.savez(tmp, eps=result.eps, zero_modes=result.zero_modes)
        os.replace(tmp, path)

    def sweep(self, N, p, n_k, k_range_mode="default", workers=1) -> SweepResult:
        grid = KGrid(p, N, n_k, k_range_mode)
        cached = self.get(grid)
        if cached is not None:
            return cached
        self.misses += 1
        log.info("sweep cache miss: N=%d p=%d n_k=%d", N, p, n_k)
        result = sweep(N, p, n_k, k_range_mode, workers=workers)
        self.put(result)
        return result


@dataclass
class ScanOutcome:
    config: RunConfig
    primes: list
    delta: float
    digests: dict
    peaks: object
    report: object
    m_requested: int
    files: list = field(default_factory=list)
    cache_hits: int = 0
    cache_misses: int = 0

    def summary(self) -> dict:
        r = self.report
        return {
            "primes": self.primes,
            "delta": self.delta,
            "n_peaks": len(self.peaks),
            "m_requested": self.m_requested,
            "m": r.m,
            "scale": r.scale,
            "rms": r.rms,
            "residuals": [float(x) for x in r.residuals],
            "peaks": [float(x) for x in r.peaks],
            "zeros": [float(x) for x in r.zeros],
            "sweep_digests": self.digests,
        }


def run_scan(cfg: RunConfig) -> ScanOutcome:
    """Sweeps per prime, DOS, spectral functions, their product, peaks and fit."""
    primes = primes_below(cfg.prime_limit)
    cache = SweepCache(cfg.cache_dir)
    sweeps = [cache.sweep(cfg.N, p, cfg.n_k, cfg.k_range_mode, cfg.workers) for p in primes]
    delta = auto_delta(sweeps) if cfg.delta == "auto" else float(cfg.delta)
    grid = eps_grid(cfg)
    dos_range = max(abs(cfg.eps_min), abs(cfg.eps_max))

    out = Path(cfg.output_dir)
    files = []
    grids = []
    for p, sw in zip(primes, sweeps):
        hist = dos(sw, cfg.n_bins, dos_range)
        files.append(tables.write(out / f"dos_p{p}.csv", tables.DOS_HEADER, tables.dos_rows(hist)))
        g = spectral_function(sw, delta, grid)
        files.append(tables.write(out / f"spectral_p{p}.csv", tables.SPECTRAL_HEADER, tables.spectral_rows(g)))
        grids.append(g)
    product = spectral_product(grids)
    files.append(tables.write(out / "spectral_product.csv", tables.SPECTRAL_HEADER, tables.spectral_rows(product)))

    peaks = find_peaks(product, cfg.prominence_min)
    files.append(tables.write(out / "peaks.csv", tables.PEAKS_HEADER, tables.peaks_rows(peaks)))
    zeros = find_zeros(cfg.m)
    files.append(tables.write(out / "zeros.csv", tables.ZEROS_HEADER,
                              tables.zeros_rows(zeros.ordinates, zeros.bracket_widths)))
    if len(peaks) == 0:
        raise NotEnoughPeaks("no peaks found in the product spectral function; widen the eps grid or lower prominence_min")
    m_used = min(cfg.m, len(peaks))
    if m_used < cfg.m:
        log.warning("only %d peaks found; comparing %d of %d requested zeros", len(peaks), m_used, cfg.m)
    report = fit_scale(peaks, zeros, m_used)
    files.append(tables.write(out / "comparison.csv", tables.COMPARISON_HEADER, tables.comparison_rows(report)))

    outcome = ScanOutcome(
        config=cfg,
        primes=primes,
        delta=delta,
        digests={str(p): sw.digest for p, sw in zip(primes, sweeps)},
        peaks=peaks,
        report=report,
        m_requested=cfg.m,
        cache_hits=cache.hits,
        cache_misses=cache.misses,
    )
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(outcome.summary(), indent=2, sort_keys=True) + "\n")
    files.append(summary_path)
    outcome.files = [str(f) for f in files]
    return outcome

