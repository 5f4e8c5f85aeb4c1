"""Gaussian-state machinery: ground states, reduced covariances, entropies
and the disconnected entanglement entropy (DEE).

All states here are number conserving, so a state is fully described by
the Hermitian two-point matrix G[i, j] = <c†_j c_i> (anomalous
correlations vanish identically and are never stored).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EIG_CLAMP = 1e-12          # entropy-side clamp for eigenvalues of G
EIG_HARD_LIMIT = 1e-6      # beyond this the integrator has failed
DEGENERACY_RTOL = 1e-12    # edge-pair degeneracy threshold, relative to max|H|


class SpectrumError(RuntimeError):
    """Covariance eigenvalue left [0, 1] beyond tolerance."""


@dataclass
class CovarianceState:
    """Two-point matrix of a Gaussian state plus trajectory bookkeeping.

    Attributes
    ----------
    g : ndarray
        L x L complex Hermitian matrix, G[i, j] = <c†_j c_i>.
    time : float
        Simulation time in units of 1/gamma.
    log_norm : float
        Accumulated log of the squared norm since the last jump.
    """

    g: np.ndarray
    time: float = 0.0
    log_norm: float = 0.0

    def __post_init__(self):
        self.g = np.asarray(self.g, dtype=complex)
        if self.g.ndim != 2 or self.g.shape[0] != self.g.shape[1]:
            raise ValueError("g must be a square matrix")

    @property
    def n_sites(self) -> int:
        return self.g.shape[0]

    def copy(self) -> "CovarianceState":
        return CovarianceState(self.g.copy(), self.time, self.log_norm)

    def hermitize(self) -> None:
        self.g = 0.5 * (self.g + self.g.conj().T)

    def purity_defect(self) -> float:
        """max |G^2 - G|; zero for pure Gaussian states."""
        return float(np.abs(self.g @ self.g - self.g).max())


@dataclass(frozen=True)
class DeePartition:
    """Connected subset A and disconnected subset B of the chain.

    Intervals are (start, stop) with 1-based inclusive bounds; B has
    exactly two components.  Derived index arrays are 0-based.
    """

    set_a: tuple[int, int]
    set_b: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        a0, a1 = self.set_a
        if a0 > a1:
            raise ValueError("A interval is empty")
        (b0, b1), (b2, b3) = self.set_b
        if b0 > b1 or b2 > b3:
            raise ValueError("B intervals must be nonempty")
        if b1 >= b2:
            raise ValueError("B components must be disjoint and ordered")

    @staticmethod
    def _interval(lo: int, hi: int) -> np.ndarray:
        return np.arange(lo - 1, hi)

    @property
    def idx_a(self) -> np.ndarray:
        return self._interval(*self.set_a)

    @property
    def idx_b(self) -> np.ndarray:
        return np.concatenate([self._interval(*iv) for iv in self.set_b])

    @property
    def idx_a_union_b(self) -> np.ndarray:
        return np.unique(np.concatenate([self.idx_a, self.idx_b]))

    @property
    def idx_a_intersect_b(self) -> np.ndarray:
        return np.intersect1d(self.idx_a, self.idx_b)

    def subsets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.idx_a, self.idx_b, self.idx_a_union_b, self.idx_a_intersect_b)


def default_partition(n_sites: int) -> DeePartition:
    """Quartering partition: A = [1, L/2], B = [L/4+1, L/2] u [3L/4+1, L].

    A contains edge site 1 only and B edge site L only; both lie in
    A u B, none in A n B, and the bulk cut counts cancel, so the
    dimerized topological ground state gives S^D = 2 exactly.
    """
    if n_sites % 4 != 0:
        raise ValueError(f"default partition needs L divisible by 4, got L={n_sites}")
    q = n_sites // 4
    return DeePartition(set_a=(1, 2 * q), set_b=((q + 1, 2 * q), (3 * q + 1, n_sites)))


def site_reversal_matrix(n_sites: int) -> np.ndarray:
    return np.fliplr(np.eye(n_sites))


def parity_block_modes(h: np.ndarray, degeneracy_tol: float | None = None):
    """Single-particle eigenmodes resolved by site-reversal parity.

    Diagonalizes the even and odd parity blocks separately so that the two
    near-zero edge modes never mix numerically, then merges the spectra in
    ascending order, placing the even-parity member first whenever two
    eigenvalues are degenerate within the threshold.

    Returns (eps, modes, parities): eigenvalues ascending, eigenvectors as
    columns, parity +1/-1 per mode.
    """
    h = np.asarray(h)
    L = h.shape[0]
    if L % 2 != 0:
        raise ValueError("chain length must be even")
    if np.iscomplexobj(h) and np.abs(h.imag).max() > 1e-14:
        raise ValueError("H must be real symmetric")
    h = h.real
    scale = max(np.abs(h).max(), 1.0)
    if np.abs(h - h.T).max() > 1e-12 * scale:
        raise ValueError("H must be symmetric")
    p = site_reversal_matrix(L)
    if np.abs(h @ p - p @ h).max() > 1e-12 * scale:
        raise ValueError("H does not commute with the site-reversal parity")

    half = L // 2
    basis_even = np.zeros((L, half))
    basis_odd = np.zeros((L, half))
    for k in range(half):
        basis_even[k, k] = basis_even[L - 1 - k, k] = 1.0 / np.sqrt(2.0)
        basis_odd[k, k] = 1.0 / np.sqrt(2.0)
        basis_odd[L - 1 - k, k] = -1.0 / np.sqrt(2.0)

    eps_e, u_e = np.linalg.eigh(basis_even.T @ h @ basis_even)
    eps_o, u_o = np.linalg.eigh(basis_odd.T @ h @ basis_odd)
    eps = np.concatenate([eps_e, eps_o])
    modes = np.concatenate([basis_even @ u_e, basis_odd @ u_o], axis=1)
    parities = np.concatenate([np.ones(half), -np.ones(half)])

    order = np.argsort(eps, kind="stable")
    eps, modes, parities = eps[order], modes[:, order], parities[order]

    tol = degeneracy_tol if degeneracy_tol is not None else DEGENERACY_RTOL * scale
    # within each degenerate pair, put the even-parity mode first
    for i in range(L - 1):
        if abs(eps[i + 1] - eps[i]) <= tol and parities[i] < parities[i + 1]:
            eps[[i, i + 1]] = eps[[i + 1, i]]
            parities[[i, i + 1]] = parities[[i + 1, i]]
            modes[:, [i, i + 1]] = modes[:, [i + 1, i]]
    return eps, modes, parities


def ground_state(h: np.ndarray, filling: int | None = None) -> CovarianceState:
    """Half-filled ground-state covariance with the parity-block fix.

    Occupies the lowest ``filling`` modes (default L/2).  The two
    mid-gap edge modes are split by parity and, when degenerate to
    machine precision, the even one is occupied first, which selects the
    triplet-like superposition (|0_1 1_L> + |1_1 0_L>)/sqrt(2) of the
    boundary fermions.
    """
    L = np.asarray(h).shape[0]
    if filling is None:
        filling = L // 2
    if not 0 <= filling <= L:
        raise ValueError(f"filling must lie in [0, {L}], got {filling}")
    _, modes, _ = parity_block_modes(h)
    occ = modes[:, :filling]
    g = occ @ occ.T
    return CovarianceState(g.astype(complex))


def reduced(g: np.ndarray, subset: np.ndarray) -> np.ndarray:
    """Principal submatrix of g on ``subset`` (0-based, order preserved)."""
    subset = np.asarray(subset, dtype=int)
    if subset.size == 0:
        return np.zeros((0, 0), dtype=complex)
    return g[np.ix_(subset, subset)]


def entropy_bits(g_reduced: np.ndarray) -> float:
    """Von Neumann entropy in bits of the Gaussian state with reduced
    covariance ``g_reduced``: S = -sum_k [z log2 z + (1-z) log2(1-z)].
    """
    if g_reduced.size == 0:
        return 0.0
    zeta = np.linalg.eigvalsh(g_reduced)
    return entropy_from_eigenvalues(zeta)


def entropy_from_eigenvalues(zeta: np.ndarray) -> float:
    zeta = np.asarray(zeta, dtype=float)
    low, high = zeta.min(initial=0.0), zeta.max(initial=1.0)
    if low < -EIG_HARD_LIMIT or high > 1.0 + EIG_HARD_LIMIT:
        raise SpectrumError(
            f"covariance eigenvalue outside [0,1]: min={low:.3e}, max={high:.3e}"
        )
    z = np.clip(zeta, EIG_CLAMP, 1.0 - EIG_CLAMP)
    s = -(z * np.log2(z) + (1.0 - z) * np.log2(1.0 - z))
    # exact zeros/ones carry no entropy; the clamp would otherwise leak ~1e-11
    s[(zeta <= EIG_CLAMP) | (zeta >= 1.0 - EIG_CLAMP)] = 0.0
    return float(s.sum())


def dee(state_or_g, partition: DeePartition) -> float:
    """Disconnected entanglement entropy S^D = S_A + S_B - S_AuB - S_AnB."""
    g = state_or_g.g if isinstance(state_or_g, CovarianceState) else state_or_g
    a, b, aub, aib = partition.subsets()
    return (
        entropy_bits(reduced(g, a))
        + entropy_bits(reduced(g, b))
        - entropy_bits(reduced(g, aub))
        - entropy_bits(reduced(g, aib))
    )


# ---------------------------------------------------------------------------
# covariance snapshot export: raw little-endian float64 (re, im) pairs,
# row-major; and a long-format CSV for small chains.

def save_covariance_binary(state: CovarianceState, path) -> None:
    """Write G as row-major little-endian float64 (re, im) pairs.

    The file holds 2*L*L doubles and no header; L is recovered as
    sqrt(filesize / 16).
    """
    g = np.ascontiguousarray(state.g, dtype=complex)
    flat = np.empty(2 * g.size)
    flat[0::2] = g.real.ravel()
    flat[1::2] = g.imag.ravel()
    flat.astype("<f8").tofile(path)


def load_covariance_binary(path) -> np.ndarray:
    raw = np.fromfile(path, dtype="<f8")
    n = int(round(np.sqrt(raw.size / 2)))
    if 2 * n * n != raw.size:
        raise ValueError(f"file size {raw.size} doubles is not 2*L^2")
    return (raw[0::2] + 1j * raw[1::2]).reshape(n, n)


def save_covariance_csv(state: CovarianceState, path) -> None:
    g = state.g
    with open(path, "w") as fh:
        fh.write("i,j,re,im\n")
        for i in range(g.shape[0]):
            for j in range(g.shape[1]):
                fh.write(f"{i + 1},{j + 1},{g[i, j].real:.12g},{g[i, j].imag:.12g}\n")
