"""Eigenstructure and real canonical form of antisymmetric matrices.

Real skew matrices are diagonalised through the Hermitian matrix ``iM``.
Complex antisymmetric matrices are admitted only when they are normal; they
are diagonalised with a complex Schur decomposition, which is diagonal for
normal input.

Every nonzero eigenvalue ``lam`` of an antisymmetric normal matrix has the
partner ``-lam`` with eigenvector ``conj(u)``.  Partners are therefore built
by conjugation instead of being searched for, so degenerate pairs never get
crossed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import NotAntisymmetric, NotNormal, NotSquare, PairingFailure

#: relative cutoff below which an eigenvalue magnitude counts as a zero mode
ZERO_RTOL = 1e-12
#: snap window used when choosing the pair representative at phi = -pi/2
_PHASE_SNAP = 1e-9


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SkewMatrixReal:
    """Dense real antisymmetric matrix. Build it with :func:`validate_skew`."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class AntisymmetricComplex:
    """Dense complex matrix with ``M.T == -M`` that passed the normality gate."""

    entries: np.ndarray
    normal: bool = True

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralPairs:
    """Magnitudes ``eps`` (descending) of the ``+-i*eps`` pairs plus zero modes."""

    eps: np.ndarray
    zero_modes: int

    @property
    def n(self) -> int:
        return 2 * len(self.eps) + self.zero_modes

    def signed(self) -> np.ndarray:
        """All ``n`` eigenvalue ordinates ``+eps, -eps, 0...``, ascending."""
        return np.sort(np.concatenate([self.eps, -self.eps, np.zeros(self.zero_modes)]))


@dataclass(frozen=True)
class GaugePhases:
    phases: np.ndarray


@dataclass(frozen=True)
class Characteristic:
    eps: np.ndarray
    canonical: SkewMatrixReal = field(repr=False)


def zero_tolerance(norm: float) -> float:
    return ZERO_RTOL * max(1.0, norm)


def validate_skew(M, tol: float = 1e-12) -> SkewMatrixReal:
    """Check that ``M`` is real antisymmetric and return ``(M - M.T)/2``.

    Raises
    ------
    NotSquare
        If ``M`` is not a square 2-d array.
    NotAntisymmetric
        If ``max|M + M.T|`` exceeds ``tol`` or ``M`` has complex entries.
    """
    if isinstance(M, SkewMatrixReal):
        return M
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {A.shape}")
    if np.iscomplexobj(A):
        if np.any(A.imag != 0):
            raise NotAntisymmetric("real skew matrix expected, got complex entries")
        A = A.real
    A = A.astype(float)
    dev = float(np.max(np.abs(A + A.T)))
    if dev > tol:
        raise NotAntisymmetric(f"max|M + M^T| = {dev:.3e} exceeds tol = {tol:.1e}")
    return SkewMatrixReal(_frozen((A - A.T) / 2))


def validate_antisymmetric(M, tol: float = 1e-12, normal_tol: float = 1e-10) -> AntisymmetricComplex:
    """Check transpose antisymmetry and normality of a complex matrix."""
    if isinstance(M, AntisymmetricComplex):
        return M
    if isinstance(M, SkewMatrixReal):
        return AntisymmetricComplex(_frozen(M.entries.astype(complex)))
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {A.shape}")
    A = A.astype(complex)
    dev = float(np.max(np.abs(A + A.T)))
    if dev > tol:
        raise NotAntisymmetric(f"max|M + M^T| = {dev:.3e} exceeds tol = {tol:.1e}")
    A = (A - A.T) / 2
    scale = np.linalg.norm(A) ** 2
    comm = np.linalg.norm(A @ A.conj().T - A.conj().T @ A)
    if comm > normal_tol * scale:
        raise NotNormal(f"||MM^H - M^H M|| = {comm:.3e} exceeds {normal_tol:.1e}*||M||^2")
    return AntisymmetricComplex(_frozen(A))


def _as_operand(M):
    """Return ``(array, is_real)`` for any accepted matrix input."""
    if isinstance(M, SkewMatrixReal):
        return M.entries, True
    if isinstance(M, AntisymmetricComplex):
        if np.all(M.entries.imag == 0):
            return M.entries.real, True
        return M.entries, False
    A = np.asarray(M)
    if np.iscomplexobj(A) and np.any(A.imag != 0):
        return validate_antisymmetric(A).entries, False
    return validate_skew(A).entries, True


def _match_pairs(plus, minus, norm, tol):
    """Greedy match of descending magnitude lists; returns the averaged magnitudes."""
    if len(plus) != len(minus):
        raise PairingFailure(
            f"{len(plus)} eigenvalues on one side of the spectrum but {len(minus)} on the other"
        )
    plus = np.sort(plus)[::-1]
    minus = np.sort(minus)[::-1]
    if len(plus):
        worst = float(np.max(np.abs(plus - minus)))
        if worst > tol * max(norm, np.finfo(float).tiny):
            raise PairingFailure(f"pair mismatch {worst:.3e} exceeds {tol:.1e}*||M||")
    return (plus + minus) / 2


def _decompose(A, is_real, tol):
    """Representative eigenvalues, their unit eigenvectors and the zero count.

    Representatives are ordered by descending magnitude.  For real input they
    are the ``+i*eps`` members; in general the member whose gauge phase lies
    in ``[-pi/2, pi/2)``.
    """
    n = A.shape[0]
    if is_real:
        # eigenvalue of A belonging to eigenvalue mu of iA is -i*mu
        mu, V = np.linalg.eigh(1j * A)
        eps_signed = -mu
        norm = float(np.max(np.abs(mu))) if n else 0.0
        zt = zero_tolerance(norm)
        pos = np.flatnonzero(eps_signed > zt)
        neg = np.flatnonzero(eps_signed < -zt)
        eps = _match_pairs(eps_signed[pos], -eps_signed[neg], norm, tol)
        order = pos[np.argsort(-eps_signed[pos], kind="stable")]
        lam = 1j * eps
        return lam, V[:, order], n - 2 * len(eps), norm

    T, Z = sla.schur(A, output="complex")
    lam_all = np.diag(T)
    norm = float(np.max(np.abs(lam_all))) if n else 0.0
    zt = zero_tolerance(norm)
    nz = np.flatnonzero(np.abs(lam_all) > zt)
    phi = np.angle(-1j * lam_all[nz])
    # shift into [-pi/2, pi/2) with a small snap so that phi ~ -pi/2 is kept
    is_rep = (phi >= -np.pi / 2 - _PHASE_SNAP) & (phi < np.pi / 2 - _PHASE_SNAP)
    reps, others = nz[is_rep], nz[~is_rep]
    mags = _match_pairs(np.abs(lam_all[reps]), np.abs(lam_all[others]), norm, tol)
    order = reps[np.argsort(-np.abs(lam_all[reps]), kind="stable")]
    lam = lam_all[order]
    # carry the averaged magnitude, keep each representative's own phase
    lam = mags * np.exp(1j * np.angle(lam))
    return lam, Z[:, order], n - 2 * len(order), norm


def _complement(P, is_real):
    """Orthonormal basis of the orthogonal complement of the columns of ``P``."""
    n = P.shape[0]
    if P.shape[1] == 0:
        return np.eye(n)
    if is_real:
        return sla.null_space(P.T)
    return sla.null_space(P.conj().T)


def eigen_skew(M, tol: float = 1e-10):
    """Spectral pairs of a real skew matrix and a unitary that diagonalises it.

    Returns
    -------
    pairs : SpectralPairs
    U : ndarray, complex (n, n)
        Columns ``[u_1, conj(u_1), u_2, conj(u_2), ..., kernel]`` so that
        ``U^H M U = diag(i*eps_1, -i*eps_1, ..., 0, ...)``.
    """
    S = validate_skew(M)
    A = S.entries
    lam, R, zero_modes, _ = _decompose(A, True, tol)
    eps = lam.imag
    cols = []
    for j in range(R.shape[1]):
        cols += [R[:, j], R[:, j].conj()]
    P = np.array(cols).T if cols else np.zeros((S.n, 0), complex)
    real_span = np.concatenate([P.real, P.imag], axis=1) if cols else np.zeros((S.n, 0))
    K = _complement(real_span, True) if zero_modes else np.zeros((S.n, 0))
    U = np.concatenate([P, K.astype(complex)], axis=1)
    return SpectralPairs(_frozen(eps), zero_modes), U


def spectral_pairs(M, tol: float = 1e-10) -> SpectralPairs:
    """Eigenvalue-only variant of :func:`eigen_skew` (no eigenvectors kept)."""
    S = validate_skew(M)
    mu = np.linalg.eigvalsh(1j * S.entries)
    norm = float(np.max(np.abs(mu)))
    zt = zero_tolerance(norm)
    eps = _match_pairs(-mu[mu < -zt], mu[mu > zt], norm, tol)
    return SpectralPairs(_frozen(eps), S.n - 2 * len(eps))


def gauge_phases(M, tol: float = 1e-10) -> GaugePhases:
    """Phases ``phi_i`` with ``lam_i = i*eps_i*exp(i*phi_i)``, one per nonzero pair.

    The representative of each ``+-lam`` pair is the member whose phase lies
    in ``[-pi/2, pi/2)``; pairs are listed by descending ``eps``.
    """
    A, is_real = _as_operand(M)
    lam, _, _, _ = _decompose(A, is_real, tol)
    if is_real:
        return GaugePhases(_frozen(np.zeros(len(lam))))
    return GaugePhases(_frozen(np.angle(-1j * lam)))


def canonical_matrix(eps, n: int) -> SkewMatrixReal:
    """Block diagonal of ``[[0, e], [-e, 0]]`` blocks, zero padded to ``n``."""
    eps = np.asarray(eps, dtype=float)
    if 2 * len(eps) > n:
        raise ValueError(f"{len(eps)} pairs do not fit in size {n}")
    E = np.zeros((n, n))
    idx = 2 * np.arange(len(eps))
    E[idx, idx + 1] = eps
    E[idx + 1, idx] = -eps
    return SkewMatrixReal(_frozen(E))


def _already_canonical(A):
    """Return the pair magnitudes if ``A`` is exactly in canonical layout."""
    n = A.shape[0]
    if np.iscomplexobj(A):
        return None
    m = n // 2
    idx = 2 * np.arange(m)
    eps = A[idx, idx + 1]
    if np.any(eps < 0) or np.any(np.diff(eps) > 0):
        return None
    eps = eps[eps > zero_tolerance(float(eps[0]) if m else 0.0)]
    if not np.array_equal(canonical_matrix(eps, n).entries, A):
        return None
    return eps


def characteristic(M, tol: float = 1e-10):
    """Real canonical representative of an antisymmetric normal matrix.

    Returns ``(Characteristic, U)`` with ``U`` unitary and
    ``U @ E @ U.T == M`` up to rounding, where ``E`` is the canonical
    matrix.  For real input ``U`` is real orthogonal, so ``U.T == U^H``.
    Each pair is phase-stripped by ``exp(i*phi/2)`` and rotated from the
    ``(u, conj(u))`` eigenbasis into the real 2x2 block.
    """
    A, is_real = _as_operand(M)
    n = A.shape[0]
    eps0 = _already_canonical(A) if is_real else None
    if eps0 is not None:
        return Characteristic(_frozen(eps0), canonical_matrix(eps0, n)), np.eye(n)

    lam, R, _, _ = _decompose(A, is_real, tol)
    eps = np.abs(lam)
    phases = np.zeros(len(lam)) if is_real else np.angle(-1j * lam)
    cols = []
    for j in range(len(lam)):
        u = R[:, j]
        a = np.sqrt(2) * u.real
        b = -np.sqrt(2) * u.imag
        c = np.exp(0.5j * phases[j])
        cols += [c * b, c * a]
    if is_real:
        P = np.array(cols).real.T if cols else np.zeros((n, 0))
    else:
        P = np.array(cols).T if cols else np.zeros((n, 0), complex)
    K = _complement(P, is_real) if n > P.shape[1] else np.zeros((n, 0), P.dtype)
    U = np.concatenate([P, K], axis=1)
    return Characteristic(_frozen(eps), canonical_matrix(eps, n)), U


def reconstruct(char: Characteristic, U) -> np.ndarray:
    """``U @ E @ U.T`` for the canonical matrix ``E`` of ``char``."""
    return U @ char.canonical.entries @ U.T


def same_class(M1, M2, tol: float = 1e-10) -> bool:
    """True when both matrices have the same characteristic up to ``tol``."""
    c1, _ = characteristic(M1)
    c2, _ = characteristic(M2)
    if c1.canonical.n != c2.canonical.n or len(c1.eps) != len(c2.eps):
        return False
    scale = max(1.0, float(np.max(c1.eps, initial=0.0)), float(np.max(c2.eps, initial=0.0)))
    return bool(np.all(np.abs(c1.eps - c2.eps) <= tol * scale))


def to_text(M) -> str:
    """Dense text form: one row per line, whitespace separated."""
    A = np.asarray(M, dtype=float)
    return "\n".join(" ".join(repr(float(x)) for x in row) for row in A) + "\n"


def from_text(text: str) -> np.ndarray:
    return np.loadtxt(io.StringIO(text), ndmin=2)
