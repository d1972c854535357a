"""Exact many-body check of the pairing Hamiltonian on the full Fock space.

Modes are ordered (species, spin, site): p-up sites, p-down sites, h-up
sites, h-down sites.  Operators are Jordan-Wigner strings stored as sparse
matrices; only the final eigensolve is dense.  Dimension is ``2**(4N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, MismatchBeyondTol, TooLarge
from .quadratic_hamiltonian import HoppingProfile, block_spectrum, build_block, build_pairing

MAX_N = 2
MAX_N_LARGE = 3

SPECIES = ("p", "h")
SPINS = (1, -1)
DEFAULT_ORDER = ("species", "spin", "site")

_LOWER = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_PARITY = sp.csr_matrix(np.diag([1.0, -1.0]))
_ID2 = sp.identity(2, format="csr")


@dataclass(frozen=True)
class ModeIndex:
    site: int  # 1-based
    spin: int  # +1 up, -1 down
    species: str  # "p" or "h"


def mode_list(N: int, order=DEFAULT_ORDER):
    """All ``4N`` modes in Jordan-Wigner order; ``order`` permutes the sort keys."""
    axes = {
        "species": SPECIES,
        "spin": SPINS,
        "site": tuple(range(1, N + 1)),
    }
    modes = []
    for combo in product(*(axes[a] for a in order)):
        kw = dict(zip(order, combo))
        modes.append(ModeIndex(kw["site"], kw["spin"], kw["species"]))
    return modes


def _check_size(N, allow_large):
    cap = MAX_N_LARGE if allow_large else MAX_N
    if N < 1 or N > cap:
        hint = "" if allow_large else " (N=3 needs allow_large)"
        raise TooLarge(f"Fock oracle supports 1 <= N <= {cap}, got N={N}{hint}")


def build_mode_operators(N: int, order=DEFAULT_ORDER, allow_large: bool = False):
    """Annihilation operators for every mode, keyed by :class:`ModeIndex`."""
    _check_size(N, allow_large)
    modes = mode_list(N, order)
    M = len(modes)
    ops = {}
    for m, mode in enumerate(modes):
        factors = [_PARITY] * m + [_LOWER] + [_ID2] * (M - m - 1)
        ops[mode] = reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)
    return ops


def anticommutator_defect(ops) -> float:
    """Largest deviation from the canonical anticommutation relations."""
    keys = list(ops)
    dim = ops[keys[0]].shape[0]
    eye = sp.identity(dim, format="csr")
    worst = 0.0
    for i, a in enumerate(keys):
        A = ops[a]
        for b in keys[i:]:
            B = ops[b]
            mixed = A @ B.T + B.T @ A - (eye if a == b else 0 * eye)
            same = A @ B + B @ A
            for X in (mixed, same):
                if X.nnz:
                    worst = max(worst, float(np.max(np.abs(X.data))))
    return worst


def build_many_body_H(profile, N=None, order=DEFAULT_ORDER, literal=False, allow_large=False, ops=None):
    """Many-body Hamiltonian as a sparse real matrix.

    The pairing part is ``sum_sigma sum_ij Delta_ij p^+_{i sigma} h^+_{j,-sigma} + h.c.``,
    the operator whose single-particle matrix is ``T_up (+) T_down``.  With
    ``literal=True`` it is ``-sum_{i>i'} t(i-i') p^+_{i sigma} h^+_{i',-sigma} + h.c.``
    instead, which has a different single-particle matrix
    (see :func:`literal_pairing_block`).
    """
    if not isinstance(profile, HoppingProfile):
        profile = HoppingProfile(tuple(profile))
    N = profile.N if N is None else N
    if N != profile.N:
        raise DimensionMismatch(f"profile has {len(profile.t)} amplitudes, N={N} needs {N - 1}")
    if ops is None:
        ops = build_mode_operators(N, order, allow_large)
    B = literal_pairing_block(profile) if literal else build_pairing(profile).entries
    dim = next(iter(ops.values())).shape[0]
    H = sp.csr_matrix((dim, dim))
    for s in SPINS:
        for i in range(1, N + 1):
            p = ops[ModeIndex(i, s, "p")]
            h = ops[ModeIndex(i, s, "h")]
            H = H + (s / 2) * (p.T @ p - h.T @ h)
    for s in SPINS:
        for i in range(1, N + 1):
            p = ops[ModeIndex(i, s, "p")]
            for j in range(1, N + 1):
                c = B[i - 1, j - 1]
                if c == 0:
                    continue
                h = ops[ModeIndex(j, -s, "h")]
                term = p.T @ h.T
                H = H + c * (term + term.T)
    return H.tocsr()


def literal_pairing_block(profile) -> np.ndarray:
    """Pairing block of the strictly lower-triangular, unhalved hopping sum."""
    if not isinstance(profile, HoppingProfile):
        profile = HoppingProfile(tuple(profile))
    N = profile.N
    B = np.zeros((N, N))
    for i in range(N):
        for j in range(i):
            B[i, j] = -profile.t[i - j - 1]
    return B


def build_charge(N: int, order=DEFAULT_ORDER, allow_large=False, ops=None):
    """Total charge ``sum (p^+ p - h^+ h)``."""
    ops = ops or build_mode_operators(N, order, allow_large)
    return sum(
        (ops[m].T @ ops[m]) * (1 if m.species == "p" else -1) for m in ops
    ).tocsr()


def build_spin(N: int, order=DEFAULT_ORDER, allow_large=False, ops=None):
    """Total spin ``sum sigma (p^+ p + h^+ h)``."""
    ops = ops or build_mode_operators(N, order, allow_large)
    return sum((ops[m].T @ ops[m]) * m.spin for m in ops).tocsr()


def commutator_norm(A, B, norm: str = "fro") -> float:
    """``||AB - BA||`` in the Frobenius (``"fro"``) or spectral (``"2"``) norm."""
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    C = A @ B - B @ A
    C = C.toarray() if sp.issparse(C) else np.asarray(C)
    if norm == "fro":
        return float(np.linalg.norm(C))
    if norm == "2":
        return float(np.linalg.norm(C, 2))
    raise ValueError(f"unknown norm {norm!r}")


def hermiticity_defect(H) -> float:
    D = H - H.conj().T
    if sp.issparse(D):
        D.eliminate_zeros()
        return float(np.max(np.abs(D.data))) if D.nnz else 0.0
    return float(np.max(np.abs(D), initial=0.0))


def subset_sums(values) -> np.ndarray:
    """Sorted multiset of all ``2**len(values)`` subset sums."""
    sums = np.zeros(1)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return np.sort(sums)


@dataclass(frozen=True)
class SubsetSumReport:
    N: int
    n_states: int
    max_deviation: float
    ground_energy: float
    ground_degeneracy: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def subset_sum_spectrum_check(profile, N=None, tol: float = 1e-10, allow_large=False,
                              order=DEFAULT_ORDER, raise_on_fail=True) -> SubsetSumReport:
    """Compare the many-body spectrum with occupation sums of single-particle levels."""
    if not isinstance(profile, HoppingProfile):
        profile = HoppingProfile(tuple(profile))
    N = profile.N if N is None else N
    H = build_many_body_H(profile, N, order=order, allow_large=allow_large)
    many = np.linalg.eigvalsh(H.toarray())
    pairing = build_pairing(profile)
    single = np.concatenate([block_spectrum(build_block(pairing, s)) for s in SPINS])
    sums = subset_sums(single)
    dev = float(np.max(np.abs(many - sums)))
    g0 = float(many[0])
    degeneracy = int(np.sum(many <= g0 + 1e-9 * max(1.0, abs(g0))))
    report = SubsetSumReport(N, len(many), dev, g0, degeneracy, tol)
    if raise_on_fail and not report.passed:
        raise MismatchBeyondTol(f"many-body vs subset-sum deviation {dev:.3e} exceeds {tol:.1e}")
    return report


def sector_leakage(H, Q, S) -> float:
    """Largest ``||[H, P]||`` over projectors onto joint charge/spin eigenspaces."""
    q = np.rint(Q.diagonal()).astype(int)
    s = np.rint(S.diagonal()).astype(int)
    worst = 0.0
    for key in set(zip(q, s)):
        mask = ((q == key[0]) & (s == key[1])).astype(float)
        P = sp.diags(mask)
        worst = max(worst, commutator_norm(H, P))
    return worst


def oracle_report(profile, allow_large=False, tol: float = 1e-10) -> dict:
    """All Fock-space checks for one profile; values are plain floats/ints."""
    if not isinstance(profile, HoppingProfile):
        profile = HoppingProfile(tuple(profile))
    N = profile.N
    ops = build_mode_operators(N, allow_large=allow_large)
    H = build_many_body_H(profile, N, ops=ops)
    Q = build_charge(N, ops=ops)
    S = build_spin(N, ops=ops)
    sub = subset_sum_spectrum_check(profile, N, tol=tol, allow_large=allow_large, raise_on_fail=False)
    return {
        "N": N,
        "norm": "frobenius",
        "anticommutator_defect": anticommutator_defect(ops),
        "hermiticity_defect": hermiticity_defect(H),
        "comm_H_charge": commutator_norm(H, Q),
        "comm_H_spin": commutator_norm(H, S),
        "comm_charge_spin": commutator_norm(Q, S),
        "sector_leakage": sector_leakage(H, Q, S),
        "subset_sum_max_deviation": sub.max_deviation,
        "subset_sum_passed": sub.passed,
        "ground_degeneracy": sub.ground_degeneracy,
        "n_states": sub.n_states,
    }


def format_report(report: dict) -> str:
    """Plain-text ``key: value`` rendering of :func:`oracle_report`."""
    lines = []
    for key, val in report.items():
        if isinstance(val, float):
            lines.append(f"{key}: {val:.3e}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"
