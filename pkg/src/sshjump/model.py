"""SSH chain model: Hamiltonian, dissipation profile, and jump channels.

Site convention: sites are 1-based in the docs and 0-based in arrays.
Site ``2j-1`` (odd, 1-based) is the A atom of cell ``j``, site ``2j`` the
B atom.  Odd/even always refers to the 1-based index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class DissipatorKind(Enum):
    """Which set of jump operators drives the dynamics."""

    SPD = "spd"  # single-site: loss on A (odd) sites, gain on B (even) sites
    SBD = "sbd"  # two-site loss on consecutive sites
    NONE = "none"


class ChannelKind(Enum):
    LOSS = "loss"
    GAIN = "gain"


@dataclass(frozen=True)
class ModelSpec:
    """Chain geometry, hoppings and dissipation layout.

    Parameters
    ----------
    n_cells : int
        Number of unit cells N; the chain has L = 2N sites.
    v, w : float
        Intra-cell and inter-cell hopping amplitudes.  Topological for
        v < w.  The dimerized limits v = 0 or w = 0 are allowed.
    gamma : float
        Base dissipation rate; gamma = 1 fixes the unit of time.
    alpha : float
        Fraction of the chain coupled to the environment.  The
        n = floor((1 - alpha) L / 2) outermost sites on each edge carry
        zero rate.
    dissipator : DissipatorKind
        SPD, SBD or NONE.
    """

    n_cells: int
    v: float
    w: float
    gamma: float = 1.0
    alpha: float = 1.0
    dissipator: DissipatorKind = DissipatorKind.NONE

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {self.n_cells}")
        if self.v < 0 or self.w < 0 or (self.v == 0 and self.w == 0):
            raise ValueError("hoppings must satisfy v, w >= 0 and v + w > 0")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not isinstance(self.dissipator, DissipatorKind):
            raise TypeError("dissipator must be a DissipatorKind")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells

    def validate_for_dynamics(self) -> None:
        """Dynamics and DEE partitions need at least two cells."""
        if self.n_cells < 2:
            raise ValueError("simulations require n_cells >= 2 (L >= 4)")


@dataclass(frozen=True)
class JumpChannel:
    """One Lindblad jump operator, linear in fermion operators.

    ``support`` holds 0-based site indices.  ``amplitude[k]`` multiplies
    c_{support[k]} (LOSS) or c†_{support[k]} (GAIN); units sqrt(rate).
    """

    id: int
    kind: ChannelKind
    support: tuple[int, ...]
    amplitude: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.amplitude):
            raise ValueError("support and amplitude length mismatch")
        if self.kind is ChannelKind.GAIN and len(self.support) != 1:
            raise ValueError("gain channels are single-site")

    @property
    def rate_scale(self) -> float:
        """Sum of squared amplitudes (the bare channel rate)."""
        return float(sum(a * a for a in self.amplitude))


def build_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Single-particle SSH Hamiltonian, open boundary conditions.

    Returns the real symmetric L x L matrix with -v on the (2j-1, 2j)
    bonds and -w on the (2j, 2j+1) bonds (1-based sites), so that
    H_manybody = sum_ij H[i, j] c†_i c_j.
    """
    L = spec.n_sites
    h = np.zeros((L, L))
    hop = np.empty(L - 1)
    hop[0::2] = -spec.v
    hop[1::2] = -spec.w
    idx = np.arange(L - 1)
    h[idx, idx + 1] = hop
    h[idx + 1, idx] = hop
    return h


def gamma_profile(spec: ModelSpec) -> np.ndarray:
    """Per-site dissipation rates gamma_j, length L.

    The profile is gamma on the central window [n+1, L-n] (1-based) with
    n = floor((1 - alpha) L / 2), zero on the n protected sites at each
    edge; mirror symmetric by construction.
    """
    L = spec.n_sites
    if spec.dissipator is DissipatorKind.NONE:
        return np.zeros(L)
    n = int(np.floor((1.0 - spec.alpha) * L / 2.0))
    prof = np.zeros(L)
    prof[n : L - n] = spec.gamma
    return prof


def build_channels(spec: ModelSpec, profile: np.ndarray | None = None) -> list[JumpChannel]:
    """Jump channels for the given dissipator kind and rate profile.

    SPD: one channel per site with nonzero rate, LOSS on odd (A) sites
    and GAIN on even (B) sites, amplitude sqrt(gamma_j).

    SBD: one two-site LOSS channel per link (2j-1, 2j) and (2j, 2j+1);
    the inter-cell operator of the last cell is absent at the open
    boundary.  A link is active only when both its sites are dissipated,
    with rate min(gamma_a, gamma_b), so protected edges stay untouched.
    """
    if profile is None:
        profile = gamma_profile(spec)
    L = spec.n_sites
    if len(profile) != L:
        raise ValueError(f"profile length {len(profile)} != number of sites {L}")
    channels: list[JumpChannel] = []
    if spec.dissipator is DissipatorKind.NONE:
        return channels
    if spec.dissipator is DissipatorKind.SPD:
        for i in range(L):
            if profile[i] <= 0.0:
                continue
            kind = ChannelKind.LOSS if (i + 1) % 2 == 1 else ChannelKind.GAIN
            channels.append(
                JumpChannel(len(channels), kind, (i,), (float(np.sqrt(profile[i])),))
            )
        return channels
    # SBD: links (a, a+1) for a = 0 .. L-2 (0-based); this enumerates the
    # intra-cell operators j=1..N and the inter-cell ones j=1..N-1.
    for a in range(L - 1):
        rate = min(profile[a], profile[a + 1])
        if rate <= 0.0:
            continue
        amp = float(np.sqrt(rate))
        channels.append(JumpChannel(len(channels), ChannelKind.LOSS, (a, a + 1), (amp, amp)))
    return channels


def loss_gain_matrices(channels: list[JumpChannel], n_sites: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian rate matrices K_loss = sum ell ell^T over loss channels
    (likewise K_gain), entering both the drift and the expected rates."""
    k_loss = np.zeros((n_sites, n_sites))
    k_gain = np.zeros((n_sites, n_sites))
    for ch in channels:
        ell = np.zeros(n_sites)
        for s, a in zip(ch.support, ch.amplitude):
            ell[s] = a
        target = k_loss if ch.kind is ChannelKind.LOSS else k_gain
        target += np.outer(ell, ell)
    return k_loss, k_gain
