"""Dense exact diagonalization for finite Heisenberg chains.

The Hamiltonian acts on N Pauli spins,

    H = s * sum_bonds (Jx sx.sx + Jy sy.sy + Jz sz.sz) - B * sum_j sz_j,

with s = +1 under the ``singlet-ground`` convention and s = -1 under
``as-printed`` (see :mod:`spinwitness.model`). Basis states are bit
strings: site j lives on bit (N-1-j) and bit value 0 means sz = +1, so
basis index 0 is the all-up state. In this basis sx.sx and sy.sy both map a
state to its double-flip partner with a real coefficient, hence H is real
symmetric and one `numpy.linalg.eigh` call yields the full spectrum.

Thermal averages never special-case T -> 0: weights are
exp(-beta (E - E0)) normalized through a log-sum-exp partition function, so
lowering kT simply concentrates weight on the ground multiplet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .model import (
    BOUNDARY_PERIODIC,
    SpecError,
    ThermalPoint,
    ValidatedSpec,
    validate_spec,
)

# Dense full diagonalization cap (dimension 2**14 = 16384). Deliberately a
# plain module attribute so callers can raise it at their own risk.
SITE_CAP = 14

# Two eigensystems at the cap are ~0.5 GB; keep the cache small.
_EIG_CACHE_SIZE = 8

_DEGENERACY_TOL = 1e-9

_SIGMA_YY = np.array([[0.0, 0.0, 0.0, -1.0],
                      [0.0, 0.0, 1.0, 0.0],
                      [0.0, 1.0, 0.0, 0.0],
                      [-1.0, 0.0, 0.0, 0.0]])


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """Dense Hamiltonian together with the bond list that built it."""

    matrix: np.ndarray
    bonds: tuple[tuple[int, int], ...]
    spec: ValidatedSpec


@dataclass(frozen=True)
class ThermalObservables:
    """Thermal expectation values of one finite chain at one temperature.

    ``u`` is the total internal energy <H>, ``m`` the total magnetization
    sum_j <sz_j>, ``bond_correlators`` one (xx, yy, zz) triple per bond in
    bond-list order, and ``log_partition`` is ln Z (NaN for ground-multiplet
    averages, which carry no temperature).
    """

    u: float
    m: float
    bond_correlators: tuple[tuple[float, float, float], ...]
    log_partition: float


@dataclass(frozen=True, eq=False)
class PairState:
    """A two-qubit density matrix (unit trace, Hermitian, PSD)."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"pair state must be 4x4, got shape {rho.shape}")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError(f"pair state trace {np.trace(rho)} is not 1")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("pair state is not Hermitian")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -1e-12:
            raise ValueError("pair state is not positive semidefinite")
        object.__setattr__(self, "matrix", rho)


def bond_list(n_sites: int, boundary: str) -> tuple[tuple[int, int], ...]:
    """Nearest-neighbor site pairs: N-1 for open chains, N for rings."""
    bonds = [(i, i + 1) for i in range(n_sites - 1)]
    if boundary == BOUNDARY_PERIODIC:
        bonds.append((n_sites - 1, 0))
    return tuple(bonds)


def _require_finite(vspec: ValidatedSpec) -> int:
    if vspec.n_sites is None:
        raise SpecError("exact diagonalization requires a finite n_sites")
    if vspec.n_sites > SITE_CAP:
        raise SpecError(
            f"n_sites={vspec.n_sites} exceeds the dense-diagonalization cap "
            f"{SITE_CAP} (raise spinwitness.exactdiag.SITE_CAP to override)")
    return vspec.n_sites


def _site_z(n_sites: int) -> np.ndarray:
    """Table z[j, r] = sz value (+1/-1) of site j in basis state r."""
    r = np.arange(1 << n_sites, dtype=np.int64)
    z = np.empty((n_sites, r.size))
    for j in range(n_sites):
        z[j] = 1.0 - 2.0 * ((r >> (n_sites - 1 - j)) & 1)
    return z


def build_hamiltonian(spec) -> HamiltonianMatrix:
    """Assemble the dense real-symmetric Hamiltonian for a finite spec.

    For each bond (i, j): sz.sz is diagonal, while sx.sx and sy.sy connect
    r to r ^ mask with coefficients 1 and -z_i(r) z_j(r). The diagonal also
    carries the field term -B sum_j sz_j.
    """
    vspec = validate_spec(spec)
    n = _require_finite(vspec)
    s = float(vspec.coupling_sign)
    dim = 1 << n
    z = _site_z(n)
    r = np.arange(dim, dtype=np.int64)

    h = np.zeros((dim, dim))
    diag = -vspec.b * z.sum(axis=0)
    bonds = bond_list(n, vspec.boundary)
    for i, j in bonds:
        zij = z[i] * z[j]
        diag += s * vspec.jz * zij
        mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
        h[r ^ mask, r] += s * (vspec.jx - vspec.jy * zij)
    h[r, r] += diag
    return HamiltonianMatrix(matrix=h, bonds=bonds, spec=vspec)


@lru_cache(maxsize=_EIG_CACHE_SIZE)
def _eigensystem(vspec: ValidatedSpec):
    """Full spectrum (ascending) and eigenvectors, cached per spec.

    ``lru_cache`` serializes insertion, so concurrent readers are safe; at
    worst two threads diagonalize the same spec once each.
    """
    energies, vectors = np.linalg.eigh(build_hamiltonian(vspec).matrix)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return energies, vectors


def _permuted_rowdot(weighted: np.ndarray, perm: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """out[r] = sum_k weighted[perm[r], k] * weighted[r, k], chunked in r.

    Chunking keeps the gather temporary below chunk*dim floats, which
    matters near the site cap.
    """
    out = np.empty(weighted.shape[0])
    for start in range(0, weighted.shape[0], chunk):
        rows = slice(start, start + chunk)
        out[rows] = np.einsum("ij,ij->i", weighted[perm[rows]], weighted[rows])
    return out


def _observables_from_weights(vspec: ValidatedSpec, energies, vectors, p):
    """(U, M, bond correlators) for the mixture sum_k p[k] |v_k><v_k|."""
    n = vspec.n_sites
    u = float(p @ energies)
    weighted = vectors * np.sqrt(p)
    q = np.einsum("ij,ij->i", weighted, weighted)  # basis-diagonal of rho
    z = _site_z(n)
    m = float(q @ z.sum(axis=0))

    r = np.arange(1 << n, dtype=np.int64)
    correlators = []
    for i, j in bond_list(n, vspec.boundary):
        zij = z[i] * z[j]
        mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
        rd = _permuted_rowdot(weighted, r ^ mask)
        xx = float(rd.sum())
        yy = float(-(rd @ zij))
        zz = float(q @ zij)
        correlators.append((xx, yy, zz))
    return u, m, tuple(correlators)


def thermal_observables(spec, kt: float) -> ThermalObservables:
    """U, M, per-bond correlators, and ln Z of the thermal state at kT.

    Weights use the spectrum shifted by its minimum, exp(-beta (E - E0)),
    so no exponential can overflow at low temperature.
    """
    vspec = validate_spec(spec)
    _require_finite(vspec)
    beta = ThermalPoint(float(kt)).beta
    energies, vectors = _eigensystem(vspec)
    shifted = energies - energies[0]
    w = np.exp(-beta * shifted)
    z0 = float(w.sum())
    log_partition = math.log(z0) - beta * energies[0]
    u, m, correlators = _observables_from_weights(vspec, energies, vectors, w / z0)
    return ThermalObservables(u=u, m=m, bond_correlators=correlators,
                              log_partition=log_partition)


def ground_state_energy(spec) -> float:
    """Lowest eigenvalue of the chain Hamiltonian."""
    vspec = validate_spec(spec)
    _require_finite(vspec)
    return float(_eigensystem(vspec)[0][0])


def ground_state_observables(spec) -> ThermalObservables:
    """U, M, correlators averaged uniformly over the ground multiplet.

    This is the T -> 0 limit of the thermal state; ``log_partition`` is NaN
    since no temperature is involved.
    """
    vspec = validate_spec(spec)
    _require_finite(vspec)
    energies, vectors = _eigensystem(vspec)
    scale = max(1.0, abs(energies[0]))
    members = (energies - energies[0]) < _DEGENERACY_TOL * scale
    p = members / members.sum()
    u, m, correlators = _observables_from_weights(vspec, energies, vectors, p)
    return ThermalObservables(u=u, m=m, bond_correlators=correlators,
                              log_partition=float("nan"))


def thermo_consistency(spec, kt: float) -> tuple[float, float]:
    """Residuals of U against -d(lnZ)/d(beta) and M against (1/beta) d(lnZ)/dB.

    Both derivatives are central finite differences with relative steps
    (1e-4 in beta, 1e-4*kT in B, the natural lnZ variation scales), and the
    residuals are normalized by max(1, |U|) and max(1, |M|).
    """
    vspec = validate_spec(spec)
    _require_finite(vspec)
    beta = ThermalPoint(float(kt)).beta
    obs = thermal_observables(vspec, kt)

    h_beta = 1e-4 * beta
    lnz_up = thermal_observables(vspec, 1.0 / (beta + h_beta)).log_partition
    lnz_dn = thermal_observables(vspec, 1.0 / (beta - h_beta)).log_partition
    u_residual = abs(obs.u + (lnz_up - lnz_dn) / (2.0 * h_beta)) / max(1.0, abs(obs.u))

    h_b = 1e-4 * float(kt)
    lnz_bup = thermal_observables(replace(vspec, b=vspec.b + h_b), kt).log_partition
    lnz_bdn = thermal_observables(replace(vspec, b=vspec.b - h_b), kt).log_partition
    m_fd = (lnz_bup - lnz_bdn) / (2.0 * h_b) / beta
    m_residual = abs(obs.m - m_fd) / max(1.0, abs(obs.m))
    return u_residual, m_residual


def reduced_pair_state(spec, kt: float, site_pair: tuple[int, int]) -> PairState:
    """Partial trace of the thermal state down to two sites.

    The returned 4x4 matrix is in the |s_a s_b> product basis with
    s_pair[0] first; basis order (uu, ud, du, dd).
    """
    vspec = validate_spec(spec)
    n = _require_finite(vspec)
    a, b = (int(site_pair[0]), int(site_pair[1]))
    if not (0 <= a < n and 0 <= b < n):
        raise SpecError(f"site pair {site_pair} out of range for n_sites={n}")
    if a == b:
        raise SpecError("site pair must name two distinct sites")

    beta = ThermalPoint(float(kt)).beta
    energies, vectors = _eigensystem(vspec)
    w = np.exp(-beta * (energies - energies[0]))
    weighted = vectors * np.sqrt(w / w.sum())
    tensor = weighted.reshape((2,) * n + (weighted.shape[1],))
    bra = np.moveaxis(tensor, (a, b), (0, 1)).reshape(4, -1)
    return PairState(np.asarray(bra @ bra.T, dtype=complex))


def concurrence(pair) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1].

    Uses the spin-flipped product sqrt(rho) rho~ sqrt(rho) (Hermitian PSD,
    same square-root eigenvalues as rho rho~ but numerically better
    behaved): C = max(0, l1 - l2 - l3 - l4) with the l's descending.
    """
    if not isinstance(pair, PairState):
        pair = PairState(pair)
    rho = pair.matrix
    evals, evecs = np.linalg.eigh(rho)
    sqrt_rho = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    flipped = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(sqrt_rho @ flipped @ sqrt_rho), 0.0, None))
    return float(max(0.0, lam[3] - lam[2] - lam[1] - lam[0]))
