"""Dissipative tenfold-way checker in the Majorana representation.

The chain's Hamiltonian and jump channels are rewritten over the 2L
Majorana operators; the dissipative symmetry relations are evaluated on
the real shape matrix X = -2i H^M + 2 M_R, whose spectrum (the
rapidities) fixes the Lindbladian spectrum:

    TRS:  X = U_T X^T U_T†
    PHS:  X = U_C X* U_C†
    PAH:  X = U_S X† U_S†

The unitaries are the SSH representatives graded by both the Majorana
flavor (Sigma_z) and the sublattice sign S = 1_odd - 1_even:
U_T = Sigma_z, U_S = diag(S, S), U_C = U_S U_T = diag(S, -S).  All three
reduce to the closed-chain BDI relations at gamma = 0; the sublattice
grading is what resolves single-site loss/gain (symmetry-preserving)
from the two-site loss channels (symmetry-breaking), which a flavor-only
grading cannot distinguish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChannelKind, JumpChannel

RESIDUAL_TOL = 1e-10


@dataclass
class MajoranaRep:
    """Majorana-basis data for one (H, channels) pair."""

    h_m: np.ndarray   # 2L x 2L purely imaginary antisymmetric
    m: np.ndarray     # 2L x 2L Hermitian PSD bath matrix
    m_r: np.ndarray
    m_i: np.ndarray
    x: np.ndarray     # 2L x 2L real shape matrix

    def rapidities(self) -> np.ndarray:
        return np.linalg.eigvals(self.x)


@dataclass
class SymmetryReport:
    trs: bool
    phs: bool
    pah: bool
    residuals: dict[str, float]
    class_label: str

    def as_dict(self) -> dict:
        return {
            "trs": {"preserved": self.trs, "residual": self.residuals["trs"]},
            "phs": {"preserved": self.phs, "residual": self.residuals["phs"]},
            "pah": {"preserved": self.pah, "residual": self.residuals["pah"]},
            "class": self.class_label,
        }


def to_majorana(h: np.ndarray) -> np.ndarray:
    """H^M with sum_ij H_ij c†_i c_j = sum_jj' (H^M)_jj' cm_j cm_j'.

    For a number-conserving real symmetric H the blocks are
    (i/2) [[0, A], [-A, 0]] with A = H/2.
    """
    h = np.asarray(h)
    if np.iscomplexobj(h) and np.abs(h.imag).max() > 1e-14:
        raise ValueError("H must be real symmetric")
    h = h.real
    if np.abs(h - h.T).max() > 1e-12 * max(np.abs(h).max(), 1.0):
        raise ValueError("H must be symmetric")
    L = h.shape[0]
    a = h / 2.0
    h_m = np.zeros((2 * L, 2 * L), dtype=complex)
    h_m[:L, L:] = 0.5j * a
    h_m[L:, :L] = -0.5j * a
    return h_m


def from_majorana(h_m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_majorana` (drops the constant tr(H)/2 part)."""
    L = h_m.shape[0] // 2
    return (h_m[:L, L:] / 0.5j).real * 2.0


def majorana_amplitudes(channel: JumpChannel, n_sites: int) -> np.ndarray:
    """Coefficient row l with L = sum_j l_j cm_j.

    Uses c = (cm_1 + i cm_2)/2, so loss channels carry (a/2, +i a/2) and
    gain channels (a/2, -i a/2) on the two Majorana flavors.
    """
    ell = np.zeros(2 * n_sites, dtype=complex)
    flavor_sign = 1.0 if channel.kind is ChannelKind.LOSS else -1.0
    for s, a in zip(channel.support, channel.amplitude):
        ell[s] = 0.5 * a
        ell[n_sites + s] = 0.5j * a * flavor_sign
    return ell


def bath_matrix(channels: list[JumpChannel], n_sites: int):
    """M, M_R, M_I with M_jj' = sum_mu l_mu,j l*_mu,j'."""
    m = np.zeros((2 * n_sites, 2 * n_sites), dtype=complex)
    for ch in channels:
        ell = majorana_amplitudes(ch, n_sites)
        m += np.outer(ell, ell.conj())
    m_r = 0.5 * (m + m.conj()).real
    m_i = (0.5 / 1j * (m - m.conj())).real
    return m, m_r, m_i


def shape_matrix(h_m: np.ndarray, m_r: np.ndarray) -> np.ndarray:
    x = -2j * h_m + 2.0 * m_r
    if np.abs(x.imag).max() > 1e-12 * max(1.0, np.abs(x.real).max()):
        raise ValueError("shape matrix has an imaginary residue; inconsistent inputs")
    return x.real


def ssh_unitaries(n_sites: int):
    """The fixed (U_T, U_C, U_S) triple used for all checks here."""
    s = np.array([1.0 if (j + 1) % 2 else -1.0 for j in range(n_sites)])
    sigma_z = np.diag(np.concatenate([np.ones(n_sites), -np.ones(n_sites)]))
    u_s = np.diag(np.concatenate([s, s]))
    u_c = np.diag(np.concatenate([s, -s]))
    return sigma_z, u_c, u_s


def check_symmetries(x: np.ndarray, tol: float = RESIDUAL_TOL) -> SymmetryReport:
    """Evaluate the three generalized relations on a shape matrix."""
    n_sites = x.shape[0] // 2
    u_t, u_c, u_s = ssh_unitaries(n_sites)
    residuals = {
        "trs": float(np.abs(x - u_t @ x.T @ u_t.conj().T).max()),
        "phs": float(np.abs(x - u_c @ x.conj() @ u_c.conj().T).max()),
        "pah": float(np.abs(x - u_s @ x.conj().T @ u_s.conj().T).max()),
    }
    flags = {k: r < tol for k, r in residuals.items()}
    if all(flags.values()):
        label = "BDI-like (all preserved)"
    else:
        broken = sorted(k.upper() for k, ok in flags.items() if not ok)
        label = "broken: {" + ", ".join(broken) + "}"
    return SymmetryReport(flags["trs"], flags["phs"], flags["pah"], residuals, label)


def majorana_rep(h: np.ndarray, channels: list[JumpChannel]) -> MajoranaRep:
    h_m = to_majorana(h)
    m, m_r, m_i = bath_matrix(channels, h.shape[0])
    return MajoranaRep(h_m, m, m_r, m_i, shape_matrix(h_m, m_r))
