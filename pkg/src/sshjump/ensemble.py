"""Multi-trajectory driver: averaged observables, t_c extraction,
jump-resolved histograms and edge-mode localization fits.

Trajectories are seeded ``base_seed + k`` and processed in fixed chunks,
so results are bit-identical for any worker count; reductions run in
chunk-index order.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass

import numpy as np

from .gaussian import DeePartition, ground_state, parity_block_modes
from .model import ModelSpec, build_hamiltonian
from .trajectory import JumpEvent, TrajectoryRecord, _BatchEngine, _Problem

CHUNK_SIZE = 256
TC_THRESHOLD = 2.0 * np.log2(2.0) / 100.0
HIST_RANGE = (-2.2, 1.0)
HIST_BINS = 81


@dataclass(frozen=True)
class TcSpec:
    """Threshold rule for the DEE departure time t_c."""

    threshold: float = TC_THRESHOLD
    per_trajectory: bool = True

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


@dataclass
class TcResult:
    mean: float
    stderr: float
    censored: int
    values: np.ndarray          # per-trajectory t_c, censored entries = t_final
    censored_mask: np.ndarray


@dataclass
class Histogram:
    window: tuple[float, float]
    site_filter: int | None
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    n_events: int
    empty: bool


@dataclass
class EnsembleResult:
    """Trajectory-averaged observables with standard errors.

    Series fields are None for t_c-only runs.
    """

    grid: np.ndarray
    sdee_mean: np.ndarray | None
    sdee_stderr: np.ndarray | None
    corr_mean: np.ndarray | None     # mean |G_{1,L}|
    corr_stderr: np.ndarray | None
    corr_mean_complex: np.ndarray | None  # plain average of G_{1,L}, a linear observable
    events: list[JumpEvent]
    tc: TcResult
    n_traj: int
    purity_max: float
    t_final: float
    dt: float
    sample_dt: float
    base_seed: int


def _tc_from_series(times: np.ndarray, sdee: np.ndarray, threshold: float, t_final: float):
    dev = np.abs(sdee - sdee[0]) > threshold
    idx = np.argmax(dev)
    if dev[idx]:
        return float(times[idx]), False
    return float(t_final), True


def extract_tc(records, spec: TcSpec = TcSpec(), *, t_final: float | None = None) -> TcResult:
    """Mean departure time of the DEE from its initial value.

    ``records`` is either a list of TrajectoryRecord (per-trajectory mode)
    or a (times, mean_series) pair when ``spec.per_trajectory`` is False.
    Trajectories that never cross are censored at t_final and excluded
    from the mean.
    """
    if not spec.per_trajectory:
        times, series = records
        tf = t_final if t_final is not None else float(times[-1])
        value, censored = _tc_from_series(np.asarray(times), np.asarray(series), spec.threshold, tf)
        vals = np.array([value])
        mask = np.array([censored])
        mean = np.nan if censored else value
        return TcResult(mean, 0.0, int(censored), vals, mask)
    values, mask = [], []
    for rec in records:
        tf = t_final if t_final is not None else float(rec.sample_times[-1])
        v, c = _tc_from_series(rec.sample_times, rec.sdee, spec.threshold, tf)
        values.append(v)
        mask.append(c)
    values = np.asarray(values)
    mask = np.asarray(mask)
    good = values[~mask]
    if good.size == 0:
        return TcResult(np.nan, 0.0, int(mask.sum()), values, mask)
    stderr = float(good.std(ddof=1) / np.sqrt(good.size)) if good.size > 1 else 0.0
    return TcResult(float(good.mean()), stderr, int(mask.sum()), values, mask)


def default_bin_edges() -> np.ndarray:
    return np.linspace(HIST_RANGE[0], HIST_RANGE[1], HIST_BINS + 1)


def histogram_dsd(
    events,
    window: tuple[float, float],
    site_filter: int | None = None,
    bin_edges: np.ndarray | None = None,
) -> Histogram:
    """Normalized density of jump-induced DEE changes.

    Selects events with time in ``window`` and, if ``site_filter`` is
    given, support containing that 1-based site.  The density integrates
    to one over the recorded (in-range) events.
    """
    if bin_edges is None:
        bin_edges = default_bin_edges()
    t0, tf = window
    vals = [
        e.dsd
        for e in events
        if t0 <= e.time <= tf and (site_filter is None or site_filter in e.support)
    ]
    counts, _ = np.histogram(vals, bins=bin_edges)
    total = counts.sum()
    widths = np.diff(bin_edges)
    density = counts / (total * widths) if total > 0 else np.zeros_like(widths)
    return Histogram(
        window=(t0, tf),
        site_filter=site_filter,
        bin_edges=bin_edges,
        counts=counts,
        density=density,
        n_events=int(total),
        empty=total == 0,
    )


def bin_index(bin_edges: np.ndarray, value: float) -> int:
    idx = int(np.searchsorted(bin_edges, value, side="right") - 1)
    if idx < 0 or idx >= len(bin_edges) - 1:
        raise ValueError(f"{value} outside histogram range")
    return idx


def has_local_max_at(hist: Histogram, value: float) -> bool:
    """True when the bin containing ``value`` is a strict local maximum."""
    b = bin_index(hist.bin_edges, value)
    d = hist.density
    left = d[b - 1] if b > 0 else -np.inf
    right = d[b + 1] if b < len(d) - 1 else -np.inf
    return bool(d[b] > left and d[b] > right)


def effectively_unimodal(hist: Histogram, secondary_frac: float = 0.1) -> bool:
    """No secondary strict local maximum above ``secondary_frac`` of the mode."""
    d = hist.density
    if d.max() <= 0:
        return True
    peak = int(np.argmax(d))
    for i in range(1, len(d) - 1):
        if i == peak:
            continue
        if d[i] > d[i - 1] and d[i] > d[i + 1] and d[i] > secondary_frac * d[peak]:
            return False
    return True


def edge_correlator_series(records: list[TrajectoryRecord]):
    """Trajectory-averaged |G_{1,L}|(t) from a list of records."""
    mags = np.stack([np.abs(r.edge_correlator) for r in records])
    return records[0].sample_times, mags.mean(axis=0)


# ---------------------------------------------------------------------------
# edge-mode localization length

def fit_edge_xi(h: np.ndarray) -> float:
    """Localization length of the left edge mode, in site units.

    Takes the even-parity near-zero mode, restricts to its A-sublattice
    weights on the left half of the chain, and fits log |psi|^2 against
    the site index; the decay e^{-j/xi} gives xi = 1 / ln(w/v).
    Raises in the trivial phase, where no mid-gap mode exists.
    """
    eps, modes, parities = parity_block_modes(h)
    order = np.argsort(np.abs(eps))
    abs_sorted = np.abs(eps[order])
    if abs_sorted[1] > 0.2 * abs_sorted[2]:
        raise ValueError("no mid-gap edge modes: chain is not in the topological phase")
    pair = order[:2]
    even_idx = pair[np.argmax(parities[pair])]
    mode = modes[:, even_idx]
    L = h.shape[0]
    sites = np.arange(1, L + 1)
    a_mask = sites % 2 == 1
    weights = mode[a_mask] ** 2
    a_sites = sites[a_mask]
    keep = (a_sites <= L // 2) & (weights > weights.max() * 1e-13)
    if keep.sum() < 3:
        raise ValueError("not enough A-sublattice weight for a localization fit")
    slope, _ = np.polyfit(a_sites[keep], np.log(weights[keep]), 1)
    if slope >= 0:
        raise ValueError("edge-mode weight does not decay into the bulk")
    return float(-1.0 / slope)


# ---------------------------------------------------------------------------
# parallel ensemble driver

def _chunk_ranges(n_traj: int, chunk_size: int = CHUNK_SIZE):
    return [(k, min(k + chunk_size, n_traj)) for k in range(0, n_traj, chunk_size)]


@dataclass
class _ChunkTask:
    model: ModelSpec
    init_model: ModelSpec | None
    partition: DeePartition | None
    t_final: float
    dt: float
    sample_dt: float
    record_events: bool
    tc_only: bool
    integrator: str
    seeds: list[int]


@dataclass
class _ChunkResult:
    n: int
    sum_sdee: np.ndarray | None
    sumsq_sdee: np.ndarray | None
    sum_abs_corr: np.ndarray | None
    sumsq_abs_corr: np.ndarray | None
    sum_corr: np.ndarray | None
    tc_values: np.ndarray
    tc_censored: np.ndarray
    events: list[JumpEvent]
    purity_max: float
    grid: np.ndarray


def _run_chunk(task: _ChunkTask) -> _ChunkResult:
    init_spec = task.init_model if task.init_model is not None else task.model
    init = ground_state(build_hamiltonian(init_spec))
    problem = _Problem.from_model(task.model, task.partition, init.n_sites)
    engine = _BatchEngine(
        problem,
        task.t_final,
        task.dt,
        task.sample_dt,
        record_events=task.record_events,
        stop_threshold=TC_THRESHOLD if task.tc_only else None,
        integrator=task.integrator,
    )
    records = engine.run_batch(init.g, task.seeds)
    tc_vals, tc_cens = [], []
    for rec in records:
        v, c = _tc_from_series(rec.sample_times, rec.sdee, TC_THRESHOLD, task.t_final)
        tc_vals.append(v)
        tc_cens.append(c)
    events = [e for rec in records for e in rec.events]
    if task.tc_only:
        sums = (None,) * 5
    else:
        sdee = np.stack([r.sdee for r in records])
        corr = np.stack([r.edge_correlator for r in records])
        sums = (
            sdee.sum(axis=0),
            (sdee**2).sum(axis=0),
            np.abs(corr).sum(axis=0),
            (np.abs(corr) ** 2).sum(axis=0),
            corr.sum(axis=0),
        )
    return _ChunkResult(
        n=len(records),
        sum_sdee=sums[0],
        sumsq_sdee=sums[1],
        sum_abs_corr=sums[2],
        sumsq_abs_corr=sums[3],
        sum_corr=sums[4],
        tc_values=np.asarray(tc_vals),
        tc_censored=np.asarray(tc_cens),
        events=events,
        purity_max=max(r.purity_max for r in records),
        grid=records[0].sample_times,
    )


def _mean_stderr(total, total_sq, n):
    mean = total / n
    if n < 2:
        return mean, np.zeros_like(mean)
    var = np.maximum(total_sq - n * mean**2, 0.0) / (n - 1)
    return mean, np.sqrt(var / n)


def run_ensemble(
    model: ModelSpec,
    n_traj: int,
    t_final: float,
    dt: float,
    sample_dt: float,
    base_seed: int,
    workers: int = 1,
    *,
    init_model: ModelSpec | None = None,
    partition: DeePartition | None = None,
    record_events: bool = True,
    tc_only: bool = False,
    integrator: str = "rk4",
    chunk_size: int = CHUNK_SIZE,
) -> EnsembleResult:
    """Run ``n_traj`` seeded trajectories and merge their observables.

    The initial state is the half-filled ground state of ``init_model``
    (default: the evolution model itself, the unquenched protocol).
    Output is independent of ``workers``; any failed trajectory aborts
    the whole ensemble with its diagnostic.  With ``tc_only`` each chunk
    stops integrating once all its trajectories have left the initial
    DEE value, and only t_c statistics are returned (series are None).
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    tasks = [
        _ChunkTask(
            model=model,
            init_model=init_model,
            partition=partition,
            t_final=t_final,
            dt=dt,
            sample_dt=sample_dt,
            record_events=record_events and not tc_only,
            tc_only=tc_only,
            integrator=integrator,
            seeds=[base_seed + k for k in range(lo, hi)],
        )
        for lo, hi in _chunk_ranges(n_traj, chunk_size)
    ]
    if workers > 1 and len(tasks) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=workers, initializer=_limit_blas_threads) as pool:
            chunks = pool.map(_run_chunk, tasks, chunksize=1)
    else:
        chunks = [_run_chunk(t) for t in tasks]

    grid = chunks[0].grid
    n = sum(c.n for c in chunks)
    if tc_only:
        sdee_mean = sdee_stderr = corr_mean = corr_stderr = None
        corr_complex = None
    else:
        sum_sdee = sum(c.sum_sdee for c in chunks)
        sumsq_sdee = sum(c.sumsq_sdee for c in chunks)
        sum_abs = sum(c.sum_abs_corr for c in chunks)
        sumsq_abs = sum(c.sumsq_abs_corr for c in chunks)
        sum_corr = sum(c.sum_corr for c in chunks)
        sdee_mean, sdee_stderr = _mean_stderr(sum_sdee, sumsq_sdee, n)
        corr_mean, corr_stderr = _mean_stderr(sum_abs, sumsq_abs, n)
        corr_complex = sum_corr / n

    tc_values = np.concatenate([c.tc_values for c in chunks])
    tc_mask = np.concatenate([c.tc_censored for c in chunks])
    good = tc_values[~tc_mask]
    if good.size == 0:
        tc = TcResult(np.nan, 0.0, int(tc_mask.sum()), tc_values, tc_mask)
    else:
        stderr = float(good.std(ddof=1) / np.sqrt(good.size)) if good.size > 1 else 0.0
        tc = TcResult(float(good.mean()), stderr, int(tc_mask.sum()), tc_values, tc_mask)

    return EnsembleResult(
        grid=grid,
        sdee_mean=sdee_mean,
        sdee_stderr=sdee_stderr,
        corr_mean=corr_mean,
        corr_stderr=corr_stderr,
        corr_mean_complex=corr_complex,
        events=[e for c in chunks for e in c.events],
        tc=tc,
        n_traj=n,
        purity_max=max(c.purity_max for c in chunks),
        t_final=t_final,
        dt=dt,
        sample_dt=sample_dt,
        base_seed=base_seed,
    )


_BLAS_LIMITER = None


def _limit_blas_threads():
    # keep the limiter alive for the worker's lifetime
    global _BLAS_LIMITER
    try:
        from threadpoolctl import threadpool_limits

        _BLAS_LIMITER = threadpool_limits(limits=1)
    except Exception:
        _BLAS_LIMITER = None


def linear_fit_r2(x: np.ndarray, y: np.ndarray):
    """Least-squares line y = a x + b and its R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(a), float(b), r2
