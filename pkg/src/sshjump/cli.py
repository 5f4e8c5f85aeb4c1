"""Command-line entry point.

Subcommands: ground-state, trajectory, ensemble, symmetry-check,
oracle-compare.  Exit codes: 0 success, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .ensemble import histogram_dsd, fit_edge_xi, run_ensemble
from .gaussian import (
    SpectrumError,
    dee,
    default_partition,
    ground_state,
    parity_block_modes,
    save_covariance_binary,
)
from .model import DissipatorKind, ModelSpec, build_channels, build_hamiltonian
from .oracle import dense_trajectory
from .output import (
    hist_filename,
    write_correlator_csv,
    write_events_csv,
    write_hist_csv,
    write_manifest,
    write_sdee_csv,
    write_tc_csv,
    write_trajectory_csv,
)
from .symmetry import check_symmetries, majorana_rep
from .trajectory import run_trajectory


def _preset_path(name: str) -> Path:
    base = resources.files("sshjump") / "presets" / f"{name}.yaml"
    if not base.is_file():
        available = sorted(
            p.name.removesuffix(".yaml")
            for p in (resources.files("sshjump") / "presets").iterdir()
        )
        raise ConfigError(f"unknown preset '{name}'; available: {available}")
    return Path(str(base))


def _resolve_config(args) -> RunConfig:
    if bool(args.config) == bool(args.preset):
        raise ConfigError("give exactly one of --config or --preset")
    path = Path(args.config) if args.config else _preset_path(args.preset)
    cfg = load_config(path)
    if args.out is not None:
        cfg.out_dir = Path(args.out)
    if args.seed is not None:
        cfg.base_seed = args.seed
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    return cfg


def cmd_ground_state(args) -> int:
    cfg = _resolve_config(args)
    n = cfg.sizes[0]
    spec = cfg.init_model(n)
    h = build_hamiltonian(spec)
    state = ground_state(h)
    part = cfg.partition if cfg.partition is not None else default_partition(spec.n_sites)
    eps, _, _ = parity_block_modes(h)
    L = spec.n_sites
    report = {
        "n_sites": L,
        "v": spec.v,
        "w": spec.w,
        "sdee": dee(state, part),
        "g1l": abs(state.g[0, L - 1]),
        "gap": float(eps[L // 2] - eps[L // 2 - 1]),
        "bulk_gap": float(eps[L // 2 + 1] - eps[L // 2 - 2]),
    }
    try:
        report["xi"] = fit_edge_xi(h)
    except ValueError:
        report["xi"] = None
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.out_dir / "ground_state.json"
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    write_manifest(cfg.out_dir / "manifest.json", cfg.raw,
                   command="ground-state", version=__version__)
    print(json.dumps(report, indent=2))
    print(f"wrote {out}")
    return 0


def cmd_trajectory(args) -> int:
    cfg = _resolve_config(args)
    n = cfg.sizes[0]
    model = cfg.model(n)
    init = ground_state(build_hamiltonian(cfg.init_model(n)))
    rec = run_trajectory(
        model,
        init,
        cfg.t_final,
        cfg.dt,
        cfg.sample_dt,
        seed=cfg.base_seed,
        partition=cfg.partition,
        integrator=cfg.integrator,
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(cfg.out_dir / "trajectory.csv", rec)
    write_events_csv(cfg.out_dir / "events.csv", rec.events)
    if args.dump_g:
        save_covariance_binary(rec.final_state, cfg.out_dir / "final_g.bin")
    write_manifest(
        cfg.out_dir / "manifest.json",
        cfg.raw,
        command="trajectory",
        version=__version__,
        seed=cfg.base_seed,
        n_jumps=len(rec.events),
        purity_max=rec.purity_max,
    )
    print(f"trajectory with {len(rec.events)} jumps -> {cfg.out_dir}")
    return 0


def cmd_ensemble(args) -> int:
    cfg = _resolve_config(args)
    t_start = time.time()
    results = {}
    for n in cfg.sizes:
        model = cfg.model(n)
        init = cfg.init_model(n)
        results[2 * n] = run_ensemble(
            model,
            cfg.n_traj,
            cfg.t_final,
            cfg.dt,
            cfg.sample_dt,
            cfg.base_seed,
            cfg.workers,
            init_model=init,
            partition=cfg.partition,
            record_events="events" in cfg.observables,
            tc_only=cfg.observables == ("tc",),
            integrator=cfg.integrator,
        )
        print(f"L={2 * n}: done ({time.time() - t_start:.1f}s elapsed)")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    first = next(iter(results.values()))
    if "sdee" in cfg.observables and first.sdee_mean is not None:
        write_sdee_csv(cfg.out_dir / "sdee_mean.csv", results)
        written.append("sdee_mean.csv")
    if "correlator" in cfg.observables and first.corr_mean is not None:
        write_correlator_csv(cfg.out_dir / "correlator.csv", results)
        written.append("correlator.csv")
    if "tc" in cfg.observables:
        write_tc_csv(cfg.out_dir / "tc_scaling.csv", results)
        written.append("tc_scaling.csv")
    if "events" in cfg.observables:
        half = min(4.0, cfg.t_final / 2.0)
        windows = [(0.0, half)]
        if cfg.t_final > half:
            windows.append((half, min(2.0 * half, cfg.t_final)))
        for L, res in results.items():
            for window in windows:
                for site in (None, 1, L):
                    hist = histogram_dsd(res.events, window, site_filter=site)
                    name = f"L{L}_" + hist_filename(window, site)
                    write_hist_csv(cfg.out_dir / name, hist)
                    written.append(name)
    write_manifest(
        cfg.out_dir / "manifest.json",
        cfg.raw,
        command="ensemble",
        version=__version__,
        sizes=cfg.sizes,
        n_traj=cfg.n_traj,
        base_seed=cfg.base_seed,
        dt=cfg.dt,
        integrator=cfg.integrator,
        workers=cfg.workers,
        wall_time_s=time.time() - t_start,
        purity_max={L: r.purity_max for L, r in results.items()},
        outputs=written,
    )
    print(f"wrote {len(written)} files + manifest.json -> {cfg.out_dir}")
    return 0


def cmd_symmetry_check(args) -> int:
    cfg = _resolve_config(args)
    model = cfg.model(cfg.sizes[0])
    rep = majorana_rep(build_hamiltonian(model), build_channels(model))
    report = check_symmetries(rep.x)
    payload = {
        "dissipator": model.dissipator.value,
        "alpha": model.alpha,
        "gamma": model.gamma,
        "min_re_rapidity": float(rep.rapidities().real.min()),
        **report.as_dict(),
    }
    print(json.dumps(payload, indent=2))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    with open(cfg.out_dir / "symmetry_report.json", "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    write_manifest(cfg.out_dir / "manifest.json", cfg.raw,
                   command="symmetry-check", version=__version__)
    return 0


ORACLE_SCHEDULES = {
    DissipatorKind.SPD: [
        [(0.1, 0)],
        [(0.3, 1), (0.7, 2)],
        [(0.15, 0), (0.5, 3), (1.2, 1)],
    ],
    DissipatorKind.SBD: [
        [(0.1, 0)],
        [(0.2, 0), (0.8, 2)],
        # at L=4 the half-filled chain holds two fermions, so an SBD
        # schedule may script at most two loss events
        [(0.15, 1), (1.1, 2)],
    ],
}


def oracle_compare(v: float, w: float, gamma: float, dt: float = 1e-3, t_final: float = 2.0,
                   integrator: str = "rk4") -> dict:
    """Scripted-schedule equivalence between the Gaussian engine and the
    dense oracle at L in {4, 6}; returns max errors per observable."""
    from .gaussian import DeePartition

    report = {"dt": dt, "t_final": t_final, "cases": []}
    for kind, schedules in ORACLE_SCHEDULES.items():
        for n_cells in (2, 3):
            spec = ModelSpec(n_cells, v=v, w=w, gamma=gamma, alpha=1.0, dissipator=kind)
            L = spec.n_sites
            part = (
                default_partition(L)
                if L % 4 == 0
                else DeePartition((1, L // 2), ((2, L // 2), (L - 1, L)))
            )
            init = ground_state(build_hamiltonian(spec))
            for schedule in schedules:
                rec = run_trajectory(
                    spec, init, t_final, dt, 0.1,
                    schedule=schedule, partition=part, record_g=True,
                    integrator=integrator,
                )
                dres = dense_trajectory(
                    spec, t_final, dt, 0.1, schedule=schedule, partition=part
                )
                max_dg = max(
                    float(np.abs(a - b).max())
                    for a, b in zip(rec.g_snapshots, dres.covariances)
                )
                max_dsd = float(np.abs(rec.sdee - dres.sdee).max())
                report["cases"].append(
                    {
                        "dissipator": kind.value,
                        "L": L,
                        "schedule": schedule,
                        "max_dG": max_dg,
                        "max_dSD": max_dsd,
                        "dense_f_max": dres.f_max,
                    }
                )
    report["max_dG"] = max(c["max_dG"] for c in report["cases"])
    report["max_dSD"] = max(c["max_dSD"] for c in report["cases"])
    return report


def cmd_oracle_compare(args) -> int:
    cfg = _resolve_config(args)
    report = oracle_compare(cfg.v_evolution, cfg.w, cfg.gamma, dt=cfg.dt,
                            integrator=cfg.integrator)
    print(json.dumps({k: report[k] for k in ("max_dG", "max_dSD")}, indent=2))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    with open(cfg.out_dir / "oracle_compare.json", "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    write_manifest(cfg.out_dir / "manifest.json", cfg.raw,
                   command="oracle-compare", version=__version__,
                   dt=cfg.dt, integrator=cfg.integrator)
    print(f"wrote {cfg.out_dir / 'oracle_compare.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sshjump",
        description="Quantum-jump trajectories of the open SSH chain",
    )
    parser.add_argument("--version", action="version", version=f"sshjump {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=False):
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--preset", help="named preset (fig3..fig11)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="base seed (overrides config)")
        if workers:
            p.add_argument("--workers", type=int, help="worker processes")

    p = sub.add_parser("ground-state", help="prepare the ground state and report S^D, xi, gap")
    common(p)
    p.set_defaults(func=cmd_ground_state)

    p = sub.add_parser("trajectory", help="run a single trajectory")
    common(p)
    p.add_argument("--dump-g", action="store_true", help="write the final covariance matrix")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("ensemble", help="run a trajectory ensemble and emit CSVs")
    common(p, workers=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("symmetry-check", help="dissipative tenfold-way report")
    common(p)
    p.set_defaults(func=cmd_symmetry_check)

    p = sub.add_parser("oracle-compare", help="Gaussian engine vs dense oracle diff")
    common(p)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SpectrumError, FloatingPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
