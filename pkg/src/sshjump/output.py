"""CSV and manifest emission.

All CSVs carry a header row, fixed column order, and floats with 12
significant digits.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from .ensemble import EnsembleResult, Histogram
from .trajectory import JumpEvent, TrajectoryRecord


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _write_rows(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_sdee_csv(path, results: dict[int, EnsembleResult]) -> None:
    rows = []
    for L in sorted(results):
        r = results[L]
        for t, m, s in zip(r.grid, r.sdee_mean, r.sdee_stderr):
            rows.append((L, t, m, s))
    _write_rows(path, ["L", "t", "mean", "stderr"], rows)


def write_correlator_csv(path, results: dict[int, EnsembleResult]) -> None:
    rows = []
    for L in sorted(results):
        r = results[L]
        for t, m, s, c in zip(r.grid, r.corr_mean, r.corr_stderr, r.corr_mean_complex):
            rows.append((L, t, m, s, c.real, c.imag))
    _write_rows(path, ["L", "t", "mean_abs", "stderr_abs", "mean_re", "mean_im"], rows)


def write_tc_csv(path, results: dict[int, EnsembleResult]) -> None:
    rows = [
        (L, results[L].tc.mean, results[L].tc.stderr, results[L].tc.censored)
        for L in sorted(results)
    ]
    _write_rows(path, ["L", "tc", "stderr", "censored_count"], rows)


def write_hist_csv(path, hist: Histogram) -> None:
    rows = [
        (left, right, int(c), d)
        for left, right, c, d in zip(
            hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts, hist.density
        )
    ]
    _write_rows(path, ["bin_left", "bin_right", "count", "density"], rows)


def write_events_csv(path, events: list[JumpEvent]) -> None:
    rows = [
        (
            e.time,
            e.channel_id,
            e.kind,
            e.support[0],
            e.support[-1] if len(e.support) > 1 else "",
            e.dsd,
            e.rate_at_jump,
        )
        for e in events
    ]
    header = ["t", "channel", "kind", "site", "site2", "dsd", "rate"]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(x if isinstance(x, str) else _fmt(x) for x in row) + "\n")


def write_trajectory_csv(path, record: TrajectoryRecord) -> None:
    rows = [
        (t, s, g.real, g.imag, abs(g))
        for t, s, g in zip(record.sample_times, record.sdee, record.edge_correlator)
    ]
    _write_rows(path, ["t", "sdee", "g1l_re", "g1l_im", "g1l_abs"], rows)


def hist_filename(window: tuple[float, float], site_filter) -> str:
    tag = f"t{window[0]:g}-{window[1]:g}"
    fil = "all" if site_filter is None else f"site{site_filter}"
    return f"dsd_hist_{tag}_{fil}.csv"


def write_manifest(path, config_raw: dict, **extra) -> None:
    payload = {
        "config": config_raw,
        "written_at_unix": time.time(),
        **extra,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")
