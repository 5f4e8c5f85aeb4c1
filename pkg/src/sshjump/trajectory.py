"""Single-trajectory engine: non-Hermitian drift of the covariance matrix,
norm ODE, waiting-time jump sampling and rank-structured jump updates.

The normalized no-jump flow is

    dG/dt = i (G H - H G) - {D, G}/2 + G D G,      D = K_loss - K_gain,

with K_loss = sum_mu l_mu l_mu^T over loss channels (likewise K_gain), and
the squared norm obeys d(log n)/dt = -2 Lambda with
Lambda = tr(D G)/2 + tr(K_gain)/2.  A jump fires at the first grid time
with n(t) <= r, r ~ U(0,1); the jump is a rank <= 2 update of G.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    CovarianceState,
    DeePartition,
    SpectrumError,
    default_partition,
    EIG_HARD_LIMIT,
)
from .model import ChannelKind, JumpChannel, ModelSpec, build_channels, build_hamiltonian, loss_gain_matrices

MAX_GAMMA_DT = 1e-2
JUMP_DENOMINATOR_FLOOR = 1e-12
RATE_NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class JumpEvent:
    """One quantum jump: when, which channel, and what it did to the DEE.

    ``support`` holds 1-based site indices (one site for SPD, the two link
    sites for SBD).
    """

    time: float
    channel_id: int
    kind: str
    support: tuple[int, ...]
    dsd: float
    rate_at_jump: float
    sdee_before: float
    sdee_after: float


@dataclass
class TrajectoryRecord:
    """Sampled observables and jump log of one trajectory."""

    sample_times: np.ndarray
    sdee: np.ndarray
    edge_correlator: np.ndarray  # complex G[0, L-1] on the sample grid
    events: list[JumpEvent]
    seed: int | None
    purity_max: float = 0.0
    g_snapshots: list[np.ndarray] | None = None
    final_state: CovarianceState | None = None


class Dissipator:
    """Precomputed matrices driving drift and rates for a channel set."""

    def __init__(self, channels: list[JumpChannel], n_sites: int):
        self.channels = list(channels)
        self.n = n_sites
        k_loss, k_gain = loss_gain_matrices(self.channels, n_sites)
        self.d = k_loss - k_gain
        self.lam_const = 0.5 * float(np.trace(k_gain))
        self.d_diag = np.ascontiguousarray(np.diag(self.d))
        self.diagonal = bool(np.count_nonzero(self.d - np.diag(self.d_diag)) == 0)
        # per-site rate scale (base gamma), the quantity the dt cap refers to
        self.rate_scale = max(
            (max(a * a for a in ch.amplitude) for ch in self.channels), default=0.0
        )
        # gather-index arrays for the vectorized rate evaluation
        self._r_scale = np.array([ch.amplitude[0] ** 2 for ch in self.channels])
        self._r_gain = np.array([ch.kind is ChannelKind.GAIN for ch in self.channels])
        self._r_i = np.array([ch.support[0] for ch in self.channels], dtype=int)
        self._r_j = np.array([ch.support[-1] for ch in self.channels], dtype=int)
        self._r_pair = self._r_i != self._r_j
        self._fast_rates = all(
            len(ch.support) == 1 or ch.amplitude[0] == ch.amplitude[1]
            for ch in self.channels
        )

    def lam(self, g: np.ndarray) -> np.ndarray:
        """Lambda = <sum_i L_i† L_i>/2 for a (..., L, L) stack of G."""
        if self.diagonal:
            occ = np.einsum("...ii->...i", g).real
            val = 0.5 * occ @ self.d_diag
        else:
            val = 0.5 * np.einsum("ij,...ji->...", self.d, g).real
        return val + self.lam_const

    def apply(self, g: np.ndarray) -> np.ndarray:
        """Dissipative part of the normalized drift, batched over leading axes."""
        if self.diagonal:
            d = self.d_diag
            anti = d[:, None] * g + g * d[None, :]
            return -0.5 * anti + (g * d[None, :]) @ g
        k = self.d
        return -0.5 * (k @ g + g @ k) + (g @ k) @ g

    def rates(self, g: np.ndarray) -> np.ndarray:
        """Per-channel expected rates <L_i† L_i> for a single G.

        Channels here are single-site (loss or gain) or equal-amplitude
        two-site loss, so the expectation reduces to index gathers.
        """
        if not self.channels:
            return np.zeros(0)
        if not self._fast_rates:
            return channel_rates(g, self.channels)
        if np.isnan(g[0, 0]):
            raise FloatingPointError("NaN encountered in covariance matrix")
        i, j = self._r_i, self._r_j
        vals = g[i, i].real.copy()
        pair = self._r_pair
        if pair.any():
            vals[pair] += (
                g[j[pair], j[pair]].real
                + 2.0 * g[i[pair], j[pair]].real  # G_ab + G_ba = 2 Re G_ab
            )
        vals[self._r_gain] = 1.0 - vals[self._r_gain]
        rates = self._r_scale * vals
        if rates.min(initial=0.0) < -RATE_NEGATIVE_TOL:
            raise SpectrumError(f"negative jump rate {rates.min():.3e}")
        np.clip(rates, 0.0, None, out=rates)
        return rates


def channel_rates(g: np.ndarray, channels: list[JumpChannel]) -> np.ndarray:
    if np.isnan(g).any():
        raise FloatingPointError("NaN encountered in covariance matrix")
    rates = np.empty(len(channels))
    for i, ch in enumerate(channels):
        sup = np.asarray(ch.support)
        amp = np.asarray(ch.amplitude)
        sub = g[np.ix_(sup, sup)]
        expval = (amp @ sub @ amp).real
        if ch.kind is ChannelKind.GAIN:
            expval = ch.rate_scale - expval
        rates[i] = expval
    if rates.min(initial=0.0) < -RATE_NEGATIVE_TOL:
        raise SpectrumError(f"negative jump rate {rates.min():.3e}")
    np.clip(rates, 0.0, None, out=rates)
    return rates


def lambda_expect(state: CovarianceState, channels: list[JumpChannel]):
    """Total Lambda = sum_i r_i / 2 and the per-channel rates r_i."""
    rates = channel_rates(state.g, channels)
    return 0.5 * float(rates.sum()), rates


def _drift_rhs(g, h, dis: Dissipator):
    comm = g @ h
    comm = 1j * (comm - np.conj(np.swapaxes(comm, -1, -2)))
    # i(GH - HG) = i(GH - (GH)†) for Hermitian G, H
    return comm + dis.apply(g)


def _rk4(g, logn, h, dis: Dissipator, dt: float):
    k1 = _drift_rhs(g, h, dis)
    l1 = dis.lam(g)
    g2 = g + (0.5 * dt) * k1
    k2 = _drift_rhs(g2, h, dis)
    l2 = dis.lam(g2)
    g3 = g + (0.5 * dt) * k2
    k3 = _drift_rhs(g3, h, dis)
    l3 = dis.lam(g3)
    g4 = g + dt * k3
    k4 = _drift_rhs(g4, h, dis)
    l4 = dis.lam(g4)
    g_new = g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    logn_new = logn - (2.0 * dt / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4)
    return g_new, logn_new


class _SplitStepper:
    """Interaction-picture step: exact conjugation by exp(-iH dt) plus RK4
    on the rotated dissipative flow.

    Within one step G = U_s Gt U_s†, so Gt obeys
    dGt/ds = -{W(s), Gt}/2 + Gt W(s) Gt with W(s) = e^{iHs} D e^{-iHs};
    the three stage matrices W(0), W(dt/2), W(dt) are fixed for the whole
    run.  The unitary part carries no time-step error, which admits
    gamma*dt up to the 1e-2 cap at unchanged jump statistics.
    """

    def __init__(self, h: np.ndarray, dis: Dissipator, dt: float):
        eps, q = np.linalg.eigh(h)
        self.dis = dis

        def lab_propagator(s):
            return (q * np.exp(-1j * eps * s)) @ q.conj().T

        u_half = lab_propagator(0.5 * dt)
        self.u_full = lab_propagator(dt)
        d = dis.d.astype(complex)
        self.w0 = d
        self.w_half = u_half.conj().T @ d @ u_half
        self.w_full = self.u_full.conj().T @ d @ self.u_full
        self.dt = dt

    @staticmethod
    def _rhs(w, g):
        wg = w @ g
        # {W,G} = WG + (WG)† and GWG = G (WG) for Hermitian W, G
        return -0.5 * (wg + np.conj(np.swapaxes(wg, -1, -2))) + g @ wg

    def _lam(self, w, g):
        return 0.5 * np.einsum("ij,...ji->...", w, g).real + self.dis.lam_const

    def step(self, g, logn):
        dt = self.dt
        k1 = self._rhs(self.w0, g)
        l1 = self._lam(self.w0, g)
        g2 = g + (0.5 * dt) * k1
        k2 = self._rhs(self.w_half, g2)
        l2 = self._lam(self.w_half, g2)
        g3 = g + (0.5 * dt) * k2
        k3 = self._rhs(self.w_half, g3)
        l3 = self._lam(self.w_half, g3)
        g4 = g + dt * k3
        k4 = self._rhs(self.w_full, g4)
        l4 = self._lam(self.w_full, g4)
        gt = g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        logn_new = logn - (2.0 * dt / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4)
        g_new = self.u_full @ gt @ self.u_full.conj().T
        return g_new, logn_new


def _check_step_args(dis: Dissipator, dt: float):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dis.rate_scale * dt > MAX_GAMMA_DT + 1e-15:
        raise ValueError(
            f"gamma*dt = {dis.rate_scale * dt:.3e} exceeds {MAX_GAMMA_DT}; reduce dt"
        )


def drift_step(state: CovarianceState, h: np.ndarray, channels: list[JumpChannel], dt: float) -> CovarianceState:
    """One RK4 step of the normalized no-jump flow, advancing log_norm too."""
    dis = channels if isinstance(channels, Dissipator) else Dissipator(channels, state.n_sites)
    _check_step_args(dis, dt)
    g, logn = _rk4(state.g, state.log_norm, h, dis, dt)
    g = 0.5 * (g + g.conj().T)
    out = CovarianceState(g, state.time + dt, float(logn))
    _spectrum_guard(out.g)
    return out


def _spectrum_guard(g: np.ndarray) -> None:
    zeta = np.linalg.eigvalsh(g)
    if zeta.min() < -EIG_HARD_LIMIT or zeta.max() > 1.0 + EIG_HARD_LIMIT:
        raise SpectrumError(
            f"drift pushed covariance spectrum to [{zeta.min():.2e}, {zeta.max():.2e}]"
        )


def sample_jump_time(state, h, channels, rng, dt, t_max):
    """Integrate the drift until n(t) <= r; returns (jump time or None, state).

    The comparison uses the pre-normalized squared norm, which decays
    monotonically from 1 at the segment start.
    """
    if abs(state.log_norm) > 1e-12:
        raise ValueError("log_norm must be 0 at the start of a no-jump segment")
    dis = channels if isinstance(channels, Dissipator) else Dissipator(channels, state.n_sites)
    _check_step_args(dis, dt)
    threshold = np.log(_draw_uniform(rng))
    current = state.copy()
    n_steps = int(round((t_max - state.time) / dt))
    for _ in range(n_steps):
        current = drift_step(current, h, dis, dt)
        if current.log_norm <= threshold:
            return current.time, current
    return None, current


def _draw_uniform(rng) -> float:
    r = rng.random()
    while r == 0.0:  # log(0) would stall the waiting-time clock forever
        r = rng.random()
    return r


def select_channel(rates: np.ndarray, rng) -> int:
    """Categorical draw with probabilities r_i / sum(r)."""
    total = rates.sum()
    if total <= 0.0:
        raise SpectrumError("all jump rates vanish at a scheduled jump")
    cum = np.cumsum(rates)
    return int(np.searchsorted(cum, rng.random() * total, side="right"))


def apply_jump(state: CovarianceState, channel: JumpChannel) -> CovarianceState:
    """Apply one jump as a rank-<=2 update of G and reset the norm clock."""
    g = _jump_update(state.g, channel)
    g = 0.5 * (g + g.conj().T)
    return CovarianceState(g, state.time, 0.0)


CLIP_EVERY = 10  # steps between spill clips; keeps the defect ~1e-9


def _clip_spectrum(g: np.ndarray) -> np.ndarray:
    """Clip numerical spill outside [0, 1] from the covariance spectrum.

    The exact flow keeps the spectrum inside [0, 1], but that boundary is
    repulsive for the normalized no-jump drift (d lambda/dt ~ k l (l-1)),
    so integrator spill at -eps or 1+eps grows exponentially and gets
    further amplified by ~1/rate in small-rate jumps.  Clipping removes
    only the out-of-range part; interior purity drift is untouched and
    keeps signalling integrator error.
    """
    zeta, vec = np.linalg.eigh(g)
    if zeta[0] >= -1e-14 and zeta[-1] <= 1.0 + 1e-14:
        return g
    if zeta[0] < -EIG_HARD_LIMIT or zeta[-1] > 1.0 + EIG_HARD_LIMIT:
        raise SpectrumError(
            f"covariance spectrum left [0,1]: [{zeta[0]:.2e}, {zeta[-1]:.2e}]"
        )
    return (vec * np.clip(zeta, 0.0, 1.0)) @ vec.conj().T


def _clip_spectrum_batch(g: np.ndarray) -> np.ndarray:
    zeta, vec = np.linalg.eigh(g)
    lo, hi = zeta.min(), zeta.max()
    if lo < -EIG_HARD_LIMIT or hi > 1.0 + EIG_HARD_LIMIT:
        raise SpectrumError(
            f"covariance spectrum left [0,1]: [{lo:.2e}, {hi:.2e}]"
        )
    if lo >= -1e-14 and hi <= 1.0 + 1e-14:
        return g
    zc = np.clip(zeta, 0.0, 1.0)
    return (vec * zc[..., None, :]) @ np.conj(np.swapaxes(vec, -1, -2))


def _jump_update(g: np.ndarray, channel: JumpChannel) -> np.ndarray:
    g = _clip_spectrum(g)
    sup = np.asarray(channel.support)
    amp = np.asarray(channel.amplitude, dtype=float)
    if channel.kind is ChannelKind.LOSS:
        u = np.zeros(g.shape[0], dtype=complex)
        u[sup] = amp
        gu = g @ u
        denom = (u @ gu).real
        if denom < JUMP_DENOMINATOR_FLOOR:
            raise SpectrumError(f"loss jump on support {channel.support} has rate ~0")
        return g - np.outer(gu, u.conj() @ g) / denom
    m = int(sup[0])
    denom = 1.0 - g[m, m].real
    if denom < JUMP_DENOMINATOR_FLOOR:
        raise SpectrumError(f"gain jump at site {m + 1} has rate ~0")
    v = -g[:, m].copy()
    v[m] += 1.0
    wrow = -g[m, :].copy()
    wrow[m] += 1.0
    return g + np.outer(v, wrow) / denom


def run_trajectory(
    model: ModelSpec,
    init_state: CovarianceState,
    t_final: float,
    dt: float,
    sample_dt: float,
    seed: int | None = None,
    *,
    partition: DeePartition | None = None,
    schedule: list[tuple[float, int]] | None = None,
    record_g: bool = False,
    integrator: str = "rk4",
) -> TrajectoryRecord:
    """Evolve one quantum trajectory and sample S^D and G_{1,L}.

    Alternates waiting-time sampling, channel selection and jump
    application until ``t_final``; a JumpEvent with the exact pre/post
    DEE is logged at every jump.  Deterministic given (model, seed, dt).
    With ``schedule`` the jumps are scripted as (time, channel_id) pairs
    instead of being drawn.
    """
    problem = _Problem.from_model(model, partition, init_state.n_sites)
    engine = _BatchEngine(problem, t_final, dt, sample_dt, record_g=record_g, integrator=integrator)
    if schedule is None:
        if seed is None:
            raise ValueError("seed is required unless a schedule is given")
        return engine.run_batch(init_state.g[None, :, :], [seed])[0]
    return engine.run_scripted(init_state.g, schedule)


@dataclass
class _Problem:
    h: np.ndarray
    dissipator: Dissipator
    partition: DeePartition
    subsets: tuple[np.ndarray, ...]

    @classmethod
    def from_model(cls, model: ModelSpec, partition: DeePartition | None, n_sites: int):
        model.validate_for_dynamics()
        if model.n_sites != n_sites:
            raise ValueError("initial state size does not match the model")
        h = build_hamiltonian(model)
        dis = Dissipator(build_channels(model), n_sites)
        part = partition if partition is not None else default_partition(n_sites)
        return cls(h, dis, part, part.subsets())


def _batched_entropy(g: np.ndarray, subset: np.ndarray) -> np.ndarray:
    if subset.size == 0:
        return np.zeros(g.shape[0])
    sub = g[:, subset[:, None], subset[None, :]]
    zeta = np.linalg.eigvalsh(sub)
    lo, hi = zeta.min(), zeta.max()
    if lo < -EIG_HARD_LIMIT or hi > 1.0 + EIG_HARD_LIMIT:
        raise SpectrumError(
            f"covariance eigenvalue outside [0,1]: min={lo:.3e}, max={hi:.3e}"
        )
    z = np.clip(zeta, 1e-12, 1.0 - 1e-12)
    term = -(np.log2(z) * z + np.log2(1.0 - z) * (1.0 - z))
    term[(zeta <= 1e-12) | (zeta >= 1.0 - 1e-12)] = 0.0
    return term.sum(axis=-1)


class _BatchEngine:
    """Evolves a stack of trajectories in lockstep on a shared time grid.

    All trajectories share H and the channel set; per-trajectory state is
    the covariance matrix, the norm clock and an independent RNG, so each
    trajectory is bit-reproducible regardless of how the stack is chunked.
    """

    def __init__(
        self,
        problem: _Problem,
        t_final,
        dt,
        sample_dt,
        *,
        record_events=True,
        record_g=False,
        stop_threshold: float | None = None,
        integrator: str = "rk4",
    ):
        _check_step_args(problem.dissipator, dt)
        self.p = problem
        self.dt = dt
        if integrator == "split":
            self.stepper = _SplitStepper(problem.h, problem.dissipator, dt)
        elif integrator == "rk4":
            self.stepper = None
        else:
            raise ValueError(f"unknown integrator {integrator!r}")
        self.t_final = t_final
        self.n_steps = int(round(t_final / dt))
        every = sample_dt / dt
        if abs(every - round(every)) > 1e-9:
            raise ValueError("sample_dt must be an integer multiple of dt")
        self.sample_every = int(round(every))
        self.record_events = record_events
        self.record_g = record_g
        # with a stop threshold the batch halts once every trajectory's
        # sampled S^D has left its initial value by more than the threshold
        self.stop_threshold = stop_threshold

    def _advance(self, g, logn):
        if self.stepper is not None:
            return self.stepper.step(g, logn)
        return _rk4(g, logn, self.p.h, self.p.dissipator, self.dt)

    # -- sampling helpers -------------------------------------------------
    def _sample(self, g):
        zeta = np.linalg.eigvalsh(g)
        if zeta.min() < -EIG_HARD_LIMIT or zeta.max() > 1.0 + EIG_HARD_LIMIT:
            raise SpectrumError(
                f"covariance spectrum left [0,1]: [{zeta.min():.2e}, {zeta.max():.2e}]"
            )
        a, b, aub, aib = self.p.subsets
        sdee = (
            _batched_entropy(g, a)
            + _batched_entropy(g, b)
            - _batched_entropy(g, aub)
            - _batched_entropy(g, aib)
        )
        corr = g[:, 0, -1].copy()
        purity = np.abs(g @ g - g).reshape(g.shape[0], -1).max(axis=1)
        return sdee, corr, purity

    def _dee_single(self, g) -> float:
        # event-path DEE: skips the purity/spectrum monitoring of _sample
        gb = g[None]
        a, b, aub, aib = self.p.subsets
        return float(
            _batched_entropy(gb, a)[0]
            + _batched_entropy(gb, b)[0]
            - _batched_entropy(gb, aub)[0]
            - _batched_entropy(gb, aib)[0]
        )

    # -- main loops --------------------------------------------------------
    def run_batch(self, g0: np.ndarray, seeds: list[int]) -> list[TrajectoryRecord]:
        nb = len(seeds)
        g = np.broadcast_to(g0, (nb,) + g0.shape[-2:]).astype(complex).copy()
        rngs = [np.random.default_rng(s) for s in seeds]
        logn = np.zeros(nb)
        thresholds = np.array([np.log(_draw_uniform(r)) for r in rngs])
        events: list[list[JumpEvent]] = [[] for _ in range(nb)]
        n_samples = self.n_steps // self.sample_every + 1
        times = np.arange(n_samples) * (self.sample_every * self.dt)
        sdee_out = np.empty((nb, n_samples))
        corr_out = np.empty((nb, n_samples), dtype=complex)
        purity_max = np.zeros(nb)
        snaps: list[list[np.ndarray]] = [[] for _ in range(nb)]

        sdee_out[:, 0], corr_out[:, 0], purity_max[:] = self._sample(g)
        if self.record_g:
            for k in range(nb):
                snaps[k].append(g[k].copy())

        n_recorded = n_samples
        for step in range(1, self.n_steps + 1):
            g, logn = self._advance(g, logn)
            g = 0.5 * (g + np.conj(np.swapaxes(g, -1, -2)))
            if step % CLIP_EVERY == 0:
                g = _clip_spectrum_batch(g)
            t = step * self.dt
            hit = np.flatnonzero(logn <= thresholds)
            for k in hit:
                self._do_jump(g, k, t, rngs[k], events[k])
                logn[k] = 0.0
                thresholds[k] = np.log(_draw_uniform(rngs[k]))
            if step % self.sample_every == 0:
                i = step // self.sample_every
                sdee_out[:, i], corr_out[:, i], pur = self._sample(g)
                np.maximum(purity_max, pur, out=purity_max)
                if self.record_g:
                    for k in range(nb):
                        snaps[k].append(g[k].copy())
                if self.stop_threshold is not None and np.all(
                    np.abs(sdee_out[:, : i + 1] - sdee_out[:, :1]).max(axis=1)
                    > self.stop_threshold
                ):
                    n_recorded = i + 1
                    break

        return [
            TrajectoryRecord(
                sample_times=times[:n_recorded].copy(),
                sdee=sdee_out[k, :n_recorded].copy(),
                edge_correlator=corr_out[k, :n_recorded].copy(),
                events=events[k],
                seed=seeds[k],
                purity_max=float(purity_max[k]),
                g_snapshots=snaps[k] if self.record_g else None,
                final_state=CovarianceState(g[k].copy(), times[n_recorded - 1], float(logn[k])),
            )
            for k in range(nb)
        ]

    def _do_jump(self, g, k, t, rng, event_log):
        dis = self.p.dissipator
        rates = dis.rates(g[k])
        idx = select_channel(rates, rng)
        ch = dis.channels[idx]
        if self.record_events:
            before = self._dee_single(g[k])
        g[k] = _jump_update(g[k], ch)
        g[k] = 0.5 * (g[k] + g[k].conj().T)
        if self.record_events:
            after = self._dee_single(g[k])
            event_log.append(
                JumpEvent(
                    time=t,
                    channel_id=ch.id,
                    kind=ch.kind.value,
                    support=tuple(s + 1 for s in ch.support),
                    dsd=after - before,
                    rate_at_jump=float(rates[idx]),
                    sdee_before=before,
                    sdee_after=after,
                )
            )

    def run_scripted(self, g0: np.ndarray, schedule: list[tuple[float, int]]) -> TrajectoryRecord:
        times = [t for t, _ in schedule]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("schedule times must be strictly increasing")
        steps = [int(round(t / self.dt)) for t in times]
        if any(s < 1 or s > self.n_steps for s in steps):
            raise ValueError("schedule times must lie on the grid within (0, t_final]")
        by_step = dict(zip(steps, (cid for _, cid in schedule)))

        g = g0[None].astype(complex).copy()
        logn = np.zeros(1)
        events: list[JumpEvent] = []
        n_samples = self.n_steps // self.sample_every + 1
        grid = np.arange(n_samples) * (self.sample_every * self.dt)
        sdee_out = np.empty(n_samples)
        corr_out = np.empty(n_samples, dtype=complex)
        snaps: list[np.ndarray] = []
        purity_max = 0.0

        s, c, p = self._sample(g)
        sdee_out[0], corr_out[0], purity_max = s[0], c[0], float(p[0])
        if self.record_g:
            snaps.append(g[0].copy())
        dis = self.p.dissipator
        for step in range(1, self.n_steps + 1):
            g, logn = self._advance(g, logn)
            g = 0.5 * (g + np.conj(np.swapaxes(g, -1, -2)))
            if step % CLIP_EVERY == 0:
                g = _clip_spectrum_batch(g)
            t = step * self.dt
            if step in by_step:
                ch = dis.channels[by_step[step]]
                rates = dis.rates(g[0])
                before = self._dee_single(g[0])
                g[0] = _jump_update(g[0], ch)
                g[0] = 0.5 * (g[0] + g[0].conj().T)
                after = self._dee_single(g[0])
                events.append(
                    JumpEvent(
                        time=t,
                        channel_id=ch.id,
                        kind=ch.kind.value,
                        support=tuple(x + 1 for x in ch.support),
                        dsd=after - before,
                        rate_at_jump=float(rates[by_step[step]]),
                        sdee_before=before,
                        sdee_after=after,
                    )
                )
                logn[0] = 0.0
            if step % self.sample_every == 0:
                i = step // self.sample_every
                s, c, p = self._sample(g)
                sdee_out[i], corr_out[i] = s[0], c[0]
                purity_max = max(purity_max, float(p[0]))
                if self.record_g:
                    snaps.append(g[0].copy())

        return TrajectoryRecord(
            sample_times=grid,
            sdee=sdee_out,
            edge_correlator=corr_out,
            events=events,
            seed=None,
            purity_max=purity_max,
            g_snapshots=snaps if self.record_g else None,
            final_state=CovarianceState(g[0].copy(), self.t_final, float(logn[0])),
        )
