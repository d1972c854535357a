"""Single-particle blocks of the spin-half pairing Hamiltonian and their spectra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResidualTooLarge, TooSmall
from .skew_core import SkewMatrixReal, validate_skew


@dataclass(frozen=True)
class HoppingProfile:
    """Hopping amplitudes ``t(1) .. t(N-1)``."""

    t: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(float(x) for x in self.t))
        if len(self.t) < 1:
            raise TooSmall("a hopping profile needs N >= 2, i.e. at least one amplitude")

    @property
    def N(self) -> int:
        return len(self.t) + 1

    @classmethod
    def from_text(cls, text: str) -> "HoppingProfile":
        """Parse whitespace/comma separated amplitudes; ``#`` starts a comment."""
        values = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].replace(",", " ")
            values.extend(float(tok) for tok in line.split())
        return cls(tuple(values))


@dataclass(frozen=True)
class SingleParticleBlock:
    sigma: int
    T: np.ndarray
    delta: SkewMatrixReal

    @property
    def N(self) -> int:
        return self.delta.n


@dataclass(frozen=True)
class ExcitationSpectrum:
    eps: np.ndarray  # all 2N eigenvalues of T, ascending
    quasi: np.ndarray  # N excitation energies, ascending


@dataclass(frozen=True)
class BogoliubovMode:
    u: np.ndarray
    v: np.ndarray
    eps_n: float


def toeplitz_skew(t) -> np.ndarray:
    """Antisymmetric Toeplitz matrix with upper triangle ``t[j-i-1]/2``."""
    t = np.asarray(t, dtype=float)
    N = len(t) + 1
    i, j = np.indices((N, N))
    d = j - i
    upper = np.where(d > 0, np.concatenate([[0.0], t])[np.clip(d, 0, None)] / 2, 0.0)
    return upper - upper.T


def build_pairing(profile) -> SkewMatrixReal:
    """Pairing matrix Delta of size N from ``profile``."""
    if not isinstance(profile, HoppingProfile):
        profile = HoppingProfile(tuple(profile))
    return validate_skew(toeplitz_skew(profile.t), tol=0.0)


def build_block(pairing, sigma: int) -> SingleParticleBlock:
    """``T_sigma = sigma * [[I/2, sigma*Delta], [sigma*Delta^T, -I/2]]``."""
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    D = validate_skew(pairing).entries
    N = D.shape[0]
    eye = np.eye(N)
    T = sigma * np.block([[0.5 * eye, sigma * D], [sigma * D.T, -0.5 * eye]])
    T.setflags(write=False)
    return SingleParticleBlock(sigma, T, validate_skew(D))


def excitation_spectrum(pairing) -> ExcitationSpectrum:
    """Closed form ``sqrt(1/4 + s_n^2)`` with ``s_n`` the singular values of Delta."""
    D = validate_skew(pairing).entries
    s = np.linalg.svd(D, compute_uv=False)
    quasi = np.sort(np.sqrt(0.25 + s**2))
    eps = np.sort(np.concatenate([-quasi, quasi]))
    return ExcitationSpectrum(eps, quasi)


def block_spectrum(block: SingleParticleBlock) -> np.ndarray:
    """Eigenvalues of ``T`` by a dense symmetric eigensolve, ascending."""
    return np.linalg.eigvalsh(block.T)


def bogoliubov_modes(block: SingleParticleBlock, tol: float = 1e-10):
    """Eigenvectors ``[u; v]`` of ``T`` normalised to ``|u|^2 + |v|^2 = 1``.

    Every mode is checked against the eigen-equation and against
    ``(eps - 1/2)(eps + 1/2) v = Delta^T Delta v``.
    """
    w, V = np.linalg.eigh(block.T)
    N = block.N
    D = block.delta.entries
    DtD = D.T @ D
    scale = max(1.0, float(np.max(np.abs(w))))
    modes = []
    for e, vec in zip(w, V.T):
        res = np.linalg.norm(block.T @ vec - e * vec)
        u, v = vec[:N], vec[N:]
        quad = np.linalg.norm((e - 0.5) * (e + 0.5) * v - DtD @ v)
        if res > tol * scale or quad > tol * scale**2:
            raise ResidualTooLarge(
                f"mode at eps={e:.6g}: eigen residual {res:.2e}, quadratic residual {quad:.2e}"
            )
        modes.append(BogoliubovMode(u.copy(), v.copy(), float(e)))
    return modes


def char_poly_check(pairing, z_samples=None) -> float:
    """Max normalised ``|det((z^2 - 1/4) I - Delta^T Delta)|`` over the samples.

    Defaults to the computed ``+-eps_n``.  Each value is divided by
    ``(|z^2 - 1/4| + ||Delta^T Delta||)^N``, the size the determinant would
    have if no cancellation happened.
    """
    D = validate_skew(pairing).entries
    N = D.shape[0]
    if N > 16:
        raise ValueError("determinant check is limited to N <= 16")
    DtD = D.T @ D
    if z_samples is None:
        z_samples = excitation_spectrum(D).eps
    gram_norm = float(np.linalg.norm(DtD, 2))
    worst = 0.0
    for z in np.atleast_1d(z_samples):
        shift = z * z - 0.25
        val = abs(np.linalg.det(shift * np.eye(N) - DtD))
        scale = (abs(shift) + gram_norm) ** N
        worst = max(worst, val / scale if scale > 0 else val)
    return worst
