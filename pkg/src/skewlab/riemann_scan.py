"""Prime-periodic gauge hopping, k-sweeps, density of states and resonance peaks.

The hopping amplitude is ``t_l(p, k) = (-1)**l / pi * cos(2 pi l k)``.  The
integral representation it is usually quoted with evaluates to
``-p/2`` times that value; :func:`hopping_quadrature` keeps the integral
available so the relation stays pinned by tests.

The spectral function of a sweep is the k-average of the resolvent trace,

    G(z) = (p / 2N) * sum_n  int_0^{2/p} dk  1 / (z - i*eps_n(k)),

approximated with the midpoint rule.  Peaks of ``|G(delta + i*eps)|`` along
``eps`` play the role of resonances at finite N.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import peak_prominences

from .errors import GridMismatch, InvalidParams, NotEnoughPeaks, PairingFailure, RangeTooSmall
from .quadratic_hamiltonian import toeplitz_skew
from .skew_core import SkewMatrixReal, SpectralPairs, spectral_pairs, validate_skew

log = logging.getLogger(__name__)

HOPPING_VERSION = "closed-form-v1"
K_RANGE_MODES = ("default", "alternate")


def is_prime(p) -> bool:
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(int(p)) + 1))


def primes_below(n: int):
    return [p for p in range(2, n) if is_prime(p)]


def hopping(p, k, l):
    """Closed-form amplitude ``(-1)**l / pi * cos(2 pi l k)``; ``l`` may be an array."""
    l = np.asarray(l)
    if np.any(l < 1):
        raise InvalidParams("hopping distance l must be >= 1")
    sign = np.where(l % 2 == 0, 1.0, -1.0)
    out = sign / np.pi * np.cos(2 * np.pi * l * k)
    return float(out) if out.ndim == 0 else out


def hopping_quadrature(p, k, l, n_points: int = 128) -> float:
    """Gauss-Legendre value of ``p*l * int_{-1/2}^{1/2} q sin(2 pi (q+k) l) dq``."""
    if n_points < 64:
        raise InvalidParams("n_points must be >= 64")
    x, w = np.polynomial.legendre.leggauss(n_points)
    q = x / 2
    return float(p * l * np.sum(w / 2 * q * np.sin(2 * np.pi * (q + k) * l)))


def check_params(N, p, k=None, k_range_mode="default"):
    if not is_prime(p):
        raise InvalidParams("p must be prime")
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise InvalidParams(f"N must be an integer >= 2, got {N!r}")
    if k_range_mode not in K_RANGE_MODES:
        raise InvalidParams(f"k_range_mode must be one of {K_RANGE_MODES}")
    if k is not None:
        hi = k_upper(p, k_range_mode)
        if not (0 <= k <= hi):
            raise InvalidParams(f"k must lie in [0, {hi:g}] for p={p}, got {k!r}")


def k_upper(p, k_range_mode="default") -> float:
    return 2.0 / p if k_range_mode == "default" else p / 2.0


def build_gauge_delta(N, p, k, k_range_mode="default", check_range=True) -> SkewMatrixReal:
    """Toeplitz skew matrix with upper triangle ``t_{j-i}(p, k) / 2``."""
    check_params(N, p, k if check_range else None, k_range_mode)
    t = hopping(p, k, np.arange(1, N))
    return validate_skew(toeplitz_skew(t), tol=0.0)


@dataclass(frozen=True)
class KGrid:
    """Midpoint nodes over ``[0, 2/p]`` (or ``[0, p/2]`` in alternate mode)."""

    p: int
    N: int
    n_k: int
    k_range_mode: str = "default"

    def __post_init__(self):
        if self.n_k < 2:
            raise InvalidParams("n_k must be >= 2")
        check_params(self.N, self.p, None, self.k_range_mode)

    @property
    def span(self) -> float:
        return k_upper(self.p, self.k_range_mode)

    @property
    def weight(self) -> float:
        return self.span / self.n_k

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.n_k) + 0.5) * self.weight

    @property
    def prefactor(self) -> float:
        """Normalisation in front of the k-integral; makes the total weight 1."""
        return 1.0 / (self.N * self.span)


@dataclass(frozen=True)
class SweepResult:
    """Per-k spectral pairs of a gauge sweep.

    ``eps`` is an ``(n_k, N // 2)`` array of pair magnitudes in descending
    order, padded with zeros where a k-point has extra zero modes;
    ``zero_modes`` holds the true count per k.
    """

    grid: KGrid
    eps: np.ndarray
    zero_modes: np.ndarray

    @property
    def N(self) -> int:
        return self.grid.N

    @property
    def p(self) -> int:
        return self.grid.p

    @property
    def n_k(self) -> int:
        return self.grid.n_k

    def pairs(self, j: int) -> SpectralPairs:
        n_pairs = (self.N - int(self.zero_modes[j])) // 2
        return SpectralPairs(self.eps[j, :n_pairs].copy(), int(self.zero_modes[j]))

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(params_key(self.grid).encode())
        h.update(np.ascontiguousarray(self.eps, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(self.zero_modes, dtype="<i8").tobytes())
        return h.hexdigest()

    def eps_max(self) -> float:
        return float(np.max(self.eps, initial=0.0))

    def mean_spacing(self) -> float:
        """Mean over k of the mean gap between consecutive positive eigenvalues."""
        gaps = []
        for j in range(self.n_k):
            e = self.pairs(j).eps
            if len(e) > 1:
                gaps.append((e[0] - e[-1]) / (len(e) - 1))
        return float(np.mean(gaps)) if gaps else 0.0


def params_key(grid: KGrid) -> str:
    """Stable cache key for a sweep."""
    payload = {
        "N": int(grid.N),
        "p": int(grid.p),
        "n_k": int(grid.n_k),
        "k_range_mode": grid.k_range_mode,
        "hopping": HOPPING_VERSION,
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _solve_k(args):
    N, p, k, mode, tol = args
    try:
        return spectral_pairs(build_gauge_delta(N, p, k, mode, check_range=False), tol)
    except PairingFailure as exc:
        raise PairingFailure(str(exc), k=k) from exc


def sweep(N, p, n_k, k_range_mode="default", workers: int = 1, tol: float = 1e-10) -> SweepResult:
    """Spectral pairs of ``build_gauge_delta(N, p, k)`` at every grid node.

    Work is spread over ``workers`` threads; results are gathered in node
    order, so the output does not depend on ``workers``.
    """
    grid = KGrid(p, N, n_k, k_range_mode)
    jobs = [(N, p, float(k), k_range_mode, tol) for k in grid.nodes]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_k, jobs))
    else:
        results = [_solve_k(job) for job in jobs]
    eps = np.zeros((n_k, N // 2))
    zeros = np.zeros(n_k, dtype=np.int64)
    for j, sp_ in enumerate(results):
        eps[j, : len(sp_.eps)] = sp_.eps
        zeros[j] = sp_.zero_modes
    eps.setflags(write=False)
    zeros.setflags(write=False)
    return SweepResult(grid, eps, zeros)


@dataclass(frozen=True)
class DoSHistogram:
    edges: np.ndarray
    masses: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2

    @property
    def total(self) -> float:
        return float(np.sum(self.masses))


def signed_spectrum(sw: SweepResult) -> np.ndarray:
    """All ``N * n_k`` eigenvalue ordinates of a sweep (flattened, k-major)."""
    rows = []
    for j in range(sw.n_k):
        rows.append(sw.pairs(j).signed())
    return np.concatenate(rows)


def dos(sw: SweepResult, n_bins: int, eps_max: float) -> DoSHistogram:
    """Histogram of signed ordinates, each weighted ``1 / (N * n_k)``.

    Bins are symmetric about zero and the result is symmetrised, so an
    ordinate sitting exactly on an edge (zero modes with an even bin count)
    is split evenly between the two neighbouring bins.
    """
    if n_bins < 1:
        raise InvalidParams("n_bins must be >= 1")
    top = sw.eps_max()
    if not eps_max > top:
        raise RangeTooSmall(f"eps_max={eps_max!r} does not exceed the largest eps {top!r}")
    edges = np.linspace(-eps_max, eps_max, n_bins + 1)
    values = signed_spectrum(sw)
    weights = np.full(values.shape, 1.0 / (sw.N * sw.n_k))
    hist, _ = np.histogram(values, bins=edges, weights=weights)
    masses = (hist + hist[::-1]) / 2
    return DoSHistogram(edges, masses)


@dataclass(frozen=True)
class SpectralGrid:
    """``G(delta + i*eps)`` sampled on ``eps_grid``."""

    delta: float
    eps_grid: np.ndarray
    values: np.ndarray
    label: tuple = field(default=())

    @property
    def z(self) -> np.ndarray:
        return self.delta + 1j * self.eps_grid


def resolvent_trace(z, eps, zero_count, chunk: int = 256):
    """``sum_n 1/(z - i e_n) + 1/(z + i e_n)`` over ``eps`` plus ``zero_count / z``."""
    z = np.asarray(z, dtype=complex)
    eps2 = np.asarray(eps, dtype=float).ravel() ** 2
    out = np.empty(z.shape, dtype=complex)
    flat_z = z.ravel()
    flat_out = out.ravel()
    for start in range(0, len(flat_z), chunk):
        zz = flat_z[start : start + chunk]
        z2 = zz * zz
        s = np.sum(1.0 / (z2[:, None] + eps2[None, :]), axis=1)
        flat_out[start : start + chunk] = 2 * zz * s + zero_count / zz
    return out


def spectral_function(sw: SweepResult, delta: float, eps_grid) -> SpectralGrid:
    """Midpoint-rule ``G_N(p, z)`` at ``z = delta + i*eps`` for each grid value."""
    if not delta > 0:
        raise InvalidParams("broadening delta must be > 0")
    eps_grid = np.asarray(eps_grid, dtype=float)
    z = delta + 1j * eps_grid
    # padded zeros in sw.eps are zero modes: count them via 1/z only
    n_pairs = (sw.N - sw.zero_modes) // 2
    mask = np.arange(sw.eps.shape[1])[None, :] < n_pairs[:, None]
    trace = resolvent_trace(z, sw.eps[mask], int(np.sum(sw.zero_modes)))
    values = sw.grid.prefactor * sw.grid.weight * trace
    return SpectralGrid(float(delta), eps_grid, values, (int(sw.p),))


def spectral_product(grids) -> SpectralGrid:
    """Pointwise product of spectral grids sharing ``delta`` and ``eps_grid``.

    Magnitudes are multiplied in the log domain and phases added, then
    re-exponentiated per point.
    """
    grids = list(grids)
    if not grids:
        raise GridMismatch("need at least one grid")
    first = grids[0]
    labels = []
    for g in grids:
        if g.delta != first.delta or not np.array_equal(g.eps_grid, first.eps_grid):
            raise GridMismatch("grids must share delta and eps_grid")
        labels.extend(g.label)
    if len(set(labels)) != len(labels):
        raise GridMismatch(f"repeated prime labels {labels}")
    if len(grids) == 1:
        return first
    with np.errstate(divide="ignore"):
        logmag = np.sum([np.log(np.abs(g.values)) for g in grids], axis=0)
    phase = np.sum([np.angle(g.values) for g in grids], axis=0)
    values = np.exp(logmag) * np.exp(1j * phase)
    return SpectralGrid(first.delta, first.eps_grid, values, tuple(labels))


@dataclass(frozen=True)
class PeakList:
    ordinates: np.ndarray
    prominences: np.ndarray
    heights: np.ndarray

    def __len__(self):
        return len(self.ordinates)


def find_peaks(grid: SpectralGrid, prominence_min: float = 0.0) -> PeakList:
    """Strict local maxima of ``|G|`` at ``eps > 0``, refined by a parabola fit."""
    eps = grid.eps_grid
    if len(eps) > 2:
        step = np.diff(eps)
        if not np.allclose(step, step[0], rtol=1e-9, atol=0):
            raise InvalidParams("find_peaks needs a uniform eps grid")
    keep = eps > 0
    x = eps[keep]
    a = np.abs(grid.values[keep])
    empty = PeakList(np.zeros(0), np.zeros(0), np.zeros(0))
    if len(a) < 3:
        return empty
    idx = np.flatnonzero((a[1:-1] > a[:-2]) & (a[1:-1] > a[2:])) + 1
    if len(idx) == 0:
        return empty
    prom = peak_prominences(a, idx)[0]
    sel = prom >= prominence_min
    idx, prom = idx[sel], prom[sel]
    h = x[1] - x[0]
    left, mid, right = a[idx - 1], a[idx], a[idx + 1]
    curv = left - 2 * mid + right
    offset = 0.5 * (left - right) / curv
    ords = x[idx] + offset * h
    heights = mid - 0.25 * (left - right) * offset
    return PeakList(ords, prom, heights)


@dataclass(frozen=True)
class ComparisonReport:
    scale: float
    residuals: np.ndarray
    rms: float
    m: int
    peaks: np.ndarray
    zeros: np.ndarray

    @property
    def scaled_zeros(self) -> np.ndarray:
        return self.scale * self.zeros


def fit_scale(peaks, zeros, m: int) -> ComparisonReport:
    """Least-squares ``y ~ s * gamma`` over the first ``m`` peaks and zeros."""
    y = np.asarray(getattr(peaks, "ordinates", peaks), dtype=float)
    g = np.asarray(getattr(zeros, "ordinates", zeros), dtype=float)
    if m < 1:
        raise NotEnoughPeaks("m must be >= 1")
    if len(y) < m or len(g) < m:
        raise NotEnoughPeaks(f"need {m} peaks and zeros, have {len(y)} peaks and {len(g)} zeros")
    y, g = y[:m], g[:m]
    s = float(np.dot(g, y) / np.dot(g, g))
    res = y - s * g
    rms = float(np.sqrt(np.mean(res**2)))
    return ComparisonReport(s, res, rms, m, y, g)


def auto_delta(sweeps) -> float:
    """Twice the mean eigenvalue spacing, averaged over the given sweeps."""
    spacings = [sw.mean_spacing() for sw in sweeps]
    d = 2 * float(np.mean(spacings))
    if not d > 0:
        raise InvalidParams("cannot derive a broadening from a sweep with no spacing")
    return d
