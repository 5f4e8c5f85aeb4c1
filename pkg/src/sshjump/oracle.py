"""Dense exact reference implementations at small L.

Everything here works in the full 2^L Fock space and exists only to
validate the Gaussian engine: state-vector trajectories with the same
waiting-time rule, full Lindblad integration, exact reduced density
matrices, and scripted-jump replay.

Jordan-Wigner convention: site 1 is the least significant bit and sign
strings run from site 1 upward, matching the operator ordering
|n> = (c†_1)^{n_1} ... (c†_L)^{n_L} |0>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .gaussian import DeePartition
from .model import ChannelKind, JumpChannel, ModelSpec, build_channels, build_hamiltonian
from .gaussian import parity_block_modes

MAX_SITES_STATE = 12
MAX_SITES_TRAJECTORY = 8
MAX_SITES_LINDBLAD = 6


@dataclass
class DenseState:
    """State vector over the 2^L occupation basis (site 1 = LSB)."""

    amplitudes: np.ndarray
    n_sites: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "DenseState":
        return DenseState(self.amplitudes / self.norm, self.n_sites)


@dataclass(frozen=True)
class JumpSchedule:
    """Scripted jumps as strictly increasing (time, channel_id) pairs."""

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.entries]
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ValueError("schedule times must be strictly increasing")

    def as_list(self) -> list[tuple[float, int]]:
        return list(self.entries)


@lru_cache(maxsize=8)
def _annihilators(n_sites: int) -> tuple[np.ndarray, ...]:
    if n_sites > MAX_SITES_STATE:
        raise ValueError(f"dense oracle capped at L={MAX_SITES_STATE}")
    dim = 1 << n_sites
    ops = []
    for m in range(n_sites):
        op = np.zeros((dim, dim))
        bit = 1 << m
        mask = bit - 1
        for n in range(dim):
            if n & bit:
                sign = -1.0 if (bin(n & mask).count("1") % 2) else 1.0
                op[n ^ bit, n] = sign
        ops.append(op)
    return tuple(ops)


def _channel_operator(ch: JumpChannel, n_sites: int) -> np.ndarray:
    cs = _annihilators(n_sites)
    op = np.zeros_like(cs[0])
    for s, a in zip(ch.support, ch.amplitude):
        op += a * (cs[s] if ch.kind is ChannelKind.LOSS else cs[s].T)
    return op


def many_body_hamiltonian(h_single: np.ndarray) -> np.ndarray:
    cs = _annihilators(h_single.shape[0])
    dim = cs[0].shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(h_single.shape[0]):
        for j in range(h_single.shape[0]):
            if h_single[i, j] != 0.0:
                h += h_single[i, j] * (cs[i].T @ cs[j])
    return h


def dense_ground_state(spec: ModelSpec, filling: int | None = None) -> DenseState:
    """Half-filled many-body ground state built mode by mode, using the
    same parity-resolved orbital selection as the Gaussian engine."""
    L = spec.n_sites
    if L > MAX_SITES_STATE:
        raise ValueError(f"dense ground state capped at L={MAX_SITES_STATE}")
    if filling is None:
        filling = L // 2
    _, modes, _ = parity_block_modes(build_hamiltonian(spec))
    cs = _annihilators(L)
    psi = np.zeros(1 << L)
    psi[0] = 1.0
    for k in range(filling):
        bdag = np.zeros_like(cs[0])
        for i in range(L):
            bdag += modes[i, k] * cs[i].T
        psi = bdag @ psi
    nrm = np.linalg.norm(psi)
    if nrm < 1e-12:
        raise RuntimeError("degenerate orbital selection produced a null state")
    return DenseState((psi / nrm).astype(complex), L)


def covariance_from_dense(state: DenseState) -> np.ndarray:
    """G[i, j] = <c†_j c_i> from the explicit state vector."""
    cs = _annihilators(state.n_sites)
    psi = state.amplitudes / state.norm
    cols = np.stack([c @ psi for c in cs], axis=1)
    return cols.T @ cols.conj()


def anomalous_from_dense(state: DenseState) -> np.ndarray:
    """F[i, j] = <c_j c_i>; identically zero for number eigenstates."""
    cs = _annihilators(state.n_sites)
    psi = state.amplitudes / state.norm
    L = state.n_sites
    f = np.empty((L, L), dtype=complex)
    for j in range(L):
        bra = cs[j].T @ psi
        for i in range(L):
            f[i, j] = np.vdot(bra, cs[i] @ psi)
    return f


def reduced_density_matrix(state: DenseState, subset) -> np.ndarray:
    """Exact reduced density matrix on ``subset`` (0-based sites).

    Sites outside the subset are reordered behind it with the fermionic
    reordering signs tracked explicitly; for the fixed-parity states
    produced here the result is unambiguous.
    """
    subset = sorted(int(s) for s in subset)
    L = state.n_sites
    env = [j for j in range(L) if j not in subset]
    psi = state.amplitudes / state.norm
    mat = np.zeros((1 << len(subset), 1 << len(env)), dtype=complex)
    for n in range(1 << L):
        amp = psi[n]
        if amp == 0.0:
            continue
        a = 0
        for pos, site in enumerate(subset):
            if n >> site & 1:
                a |= 1 << pos
        e = 0
        crossings = 0
        for pos, site in enumerate(env):
            if n >> site & 1:
                e |= 1 << pos
                # occupied subset modes with larger site index must hop over
                crossings += sum(1 for s in subset if s > site and (n >> s & 1))
        sign = -1.0 if crossings % 2 else 1.0
        mat[a, e] += sign * amp
    return mat @ mat.conj().T


def entropy_dense(state: DenseState, subset) -> float:
    lam = np.linalg.eigvalsh(reduced_density_matrix(state, subset))
    lam = lam[lam > 1e-14]
    return float(-(lam * np.log2(lam)).sum())


def dee_dense(state: DenseState, partition: DeePartition) -> float:
    a, b, aub, aib = partition.subsets()
    s_aib = entropy_dense(state, aib) if aib.size else 0.0
    return (
        entropy_dense(state, a)
        + entropy_dense(state, b)
        - entropy_dense(state, aub)
        - s_aib
    )


@dataclass
class DenseTrajectoryResult:
    sample_times: np.ndarray
    covariances: list[np.ndarray]
    sdee: np.ndarray
    f_max: float
    jump_log: list[tuple[float, int]]
    final_state: DenseState


def dense_trajectory(
    spec: ModelSpec,
    t_final: float,
    dt: float,
    sample_dt: float,
    *,
    seed: int | None = None,
    schedule: JumpSchedule | list[tuple[float, int]] | None = None,
    init_state: DenseState | None = None,
    init_spec: ModelSpec | None = None,
    partition: DeePartition | None = None,
) -> DenseTrajectoryResult:
    """Exact state-vector quantum trajectory with dense exp(-i H_eff dt).

    In seeded mode jumps are drawn by the same waiting-time rule as the
    Gaussian engine; with a schedule exactly the prescribed jumps are
    applied (normalizing after each).
    """
    L = spec.n_sites
    if L > MAX_SITES_TRAJECTORY:
        raise ValueError(f"dense trajectories capped at L={MAX_SITES_TRAJECTORY}")
    if (seed is None) == (schedule is None):
        raise ValueError("exactly one of seed / schedule must be given")
    channels = build_channels(spec)
    l_ops = [_channel_operator(ch, L) for ch in channels]
    h = many_body_hamiltonian(build_hamiltonian(spec))
    h_eff = h - 0.5j * sum(op.conj().T @ op for op in l_ops) if l_ops else h.astype(complex)
    u_step = expm(-1j * h_eff * dt)

    if init_state is None:
        init_state = dense_ground_state(init_spec if init_spec is not None else spec)
    if partition is None:
        partition = DeePartition((1, L // 2), ((L // 4 + 1, L // 2), (3 * L // 4 + 1, L)))

    n_steps = int(round(t_final / dt))
    every = int(round(sample_dt / dt))
    rng = np.random.default_rng(seed) if seed is not None else None
    scripted = None
    if schedule is not None:
        entries = schedule.as_list() if isinstance(schedule, JumpSchedule) else list(schedule)
        scripted = {int(round(t / dt)): cid for t, cid in entries}
        if any(s < 1 or s > n_steps for s in scripted):
            raise ValueError("schedule times must lie on the grid within (0, t_final]")

    psi = init_state.normalized().amplitudes.astype(complex)
    psi_raw = psi.copy()
    threshold = rng.random() if rng is not None else None

    times, covs, sdees = [], [], []
    f_max = 0.0
    jump_log: list[tuple[float, int]] = []

    def record(t, vec):
        nonlocal f_max
        st = DenseState(vec.copy(), L)
        times.append(t)
        covs.append(covariance_from_dense(st))
        sdees.append(dee_dense(st, partition))
        f_max = max(f_max, float(np.abs(anomalous_from_dense(st)).max()))

    record(0.0, psi)
    for step in range(1, n_steps + 1):
        psi_raw = u_step @ psi_raw
        t = step * dt
        if scripted is not None:
            if step in scripted:
                op = l_ops[scripted[step]]
                jumped = op @ (psi_raw / np.linalg.norm(psi_raw))
                nrm = np.linalg.norm(jumped)
                if nrm < 1e-9:
                    raise RuntimeError(
                        f"scripted channel {scripted[step]} has ~zero amplitude at t={t}"
                    )
                psi_raw = jumped / nrm
                jump_log.append((t, scripted[step]))
        else:
            norm_sq = float(np.vdot(psi_raw, psi_raw).real)
            if norm_sq <= threshold:
                psi = psi_raw / np.sqrt(norm_sq)
                rates = np.array([float(np.linalg.norm(op @ psi) ** 2) for op in l_ops])
                total = rates.sum()
                if total <= 0.0:
                    raise RuntimeError("norm crossed threshold with all rates zero")
                cum = np.cumsum(rates)
                idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
                psi = l_ops[idx] @ psi
                psi /= np.linalg.norm(psi)
                psi_raw = psi.copy()
                threshold = rng.random()
                jump_log.append((t, idx))
        if step % every == 0:
            vec = psi_raw / np.linalg.norm(psi_raw)
            record(t, vec)

    final = DenseState(psi_raw / np.linalg.norm(psi_raw), L)
    return DenseTrajectoryResult(
        np.asarray(times), covs, np.asarray(sdees), f_max, jump_log, final
    )


@dataclass
class DenseLindbladResult:
    sample_times: np.ndarray
    covariances: list[np.ndarray]
    traces: np.ndarray


def dense_lindblad(
    spec: ModelSpec,
    t_final: float,
    dt: float,
    sample_dt: float,
    *,
    init_state: DenseState | None = None,
    init_spec: ModelSpec | None = None,
) -> DenseLindbladResult:
    """RK4 integration of the full Lindblad equation; ensemble-exact G(t)."""
    L = spec.n_sites
    if L > MAX_SITES_LINDBLAD:
        raise ValueError(f"dense Lindblad capped at L={MAX_SITES_LINDBLAD}")
    channels = build_channels(spec)
    l_ops = [_channel_operator(ch, L).astype(complex) for ch in channels]
    ldl = [op.conj().T @ op for op in l_ops]
    h = many_body_hamiltonian(build_hamiltonian(spec))

    if init_state is None:
        init_state = dense_ground_state(init_spec if init_spec is not None else spec)
    psi = init_state.normalized().amplitudes
    rho = np.outer(psi, psi.conj())

    def rhs(r):
        out = -1j * (h @ r - r @ h)
        for op, k in zip(l_ops, ldl):
            out += op @ r @ op.conj().T - 0.5 * (k @ r + r @ k)
        return out

    cs = _annihilators(L)
    cdag = [c.T for c in cs]

    def extract_g(r):
        g = np.empty((L, L), dtype=complex)
        for i in range(L):
            x = cs[i] @ r
            for j in range(L):
                g[i, j] = np.trace(cdag[j] @ x)
        return g

    n_steps = int(round(t_final / dt))
    every = int(round(sample_dt / dt))
    times = [0.0]
    covs = [extract_g(rho)]
    traces = [float(np.trace(rho).real)]
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > 1e-8:
            raise RuntimeError(f"Lindblad trace drifted to {tr}")
        if step % every == 0:
            times.append(step * dt)
            covs.append(extract_g(rho))
            traces.append(tr)
    return DenseLindbladResult(np.asarray(times), covs, np.asarray(traces))
