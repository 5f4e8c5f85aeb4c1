"""Run configuration: a strict YAML schema shared by all CLI subcommands.

Unknown keys anywhere in the file are hard errors; there are no silent
defaults for misspelled options.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .gaussian import DeePartition
from .model import DissipatorKind, ModelSpec

TOPOLOGICAL_RATIO = 0.1  # v/w for the topological ground state
TRIVIAL_RATIO = 1.5      # v/w of the quenched-to-trivial Hamiltonian

MODES = ("unquenched_topological", "quenched_to_trivial", "custom")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


def _require_keys(section: dict, allowed: set[str], where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _get(section: dict, key: str, default=None, required=False, where=""):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key '{key}' in {where}")
        return default
    return section[key]


@dataclass
class RunConfig:
    sizes: list[int]
    w: float
    gamma: float
    alpha: float
    dissipator: DissipatorKind
    mode: str
    v_evolution: float
    v_init: float
    dt: float
    sample_dt: float
    t_final: float
    integrator: str
    n_traj: int
    base_seed: int
    workers: int
    out_dir: Path
    observables: tuple[str, ...]
    partition: DeePartition | None
    raw: dict = field(repr=False, default_factory=dict)

    def model(self, n_cells: int | None = None) -> ModelSpec:
        n = n_cells if n_cells is not None else self.sizes[0]
        return ModelSpec(
            n_cells=n,
            v=self.v_evolution,
            w=self.w,
            gamma=self.gamma,
            alpha=self.alpha,
            dissipator=self.dissipator,
        )

    def init_model(self, n_cells: int | None = None) -> ModelSpec:
        n = n_cells if n_cells is not None else self.sizes[0]
        return ModelSpec(n_cells=n, v=self.v_init, w=self.w,
                         gamma=self.gamma, alpha=self.alpha,
                         dissipator=self.dissipator)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return parse_config(data)


def parse_config(data: dict) -> RunConfig:
    _require_keys(
        data,
        {"model", "hamiltonian_mode", "init", "numerics", "ensemble", "outputs", "partition"},
        "config root",
    )
    model = _get(data, "model", required=True, where="config root")
    _require_keys(model, {"n_cells", "v", "w", "gamma", "alpha", "dissipator"}, "model")
    n_cells = _get(model, "n_cells", required=True, where="model")
    sizes = [int(n) for n in (n_cells if isinstance(n_cells, list) else [n_cells])]
    if not sizes or any(n < 2 for n in sizes):
        raise ConfigError("model.n_cells must be (a list of) integers >= 2")
    w = float(_get(model, "w", required=True, where="model"))
    gamma = float(_get(model, "gamma", 1.0))
    alpha = float(_get(model, "alpha", 1.0))
    diss_name = str(_get(model, "dissipator", "none")).lower()
    try:
        dissipator = DissipatorKind(diss_name)
    except ValueError:
        raise ConfigError(f"unknown dissipator '{diss_name}' (spd, sbd or none)")

    mode = str(_get(data, "hamiltonian_mode", "unquenched_topological")).lower()
    if mode not in MODES:
        raise ConfigError(f"hamiltonian_mode must be one of {MODES}")

    init = _get(data, "init", {})
    _require_keys(init, {"v", "v_over_w"}, "init")
    if "v" in init and "v_over_w" in init:
        raise ConfigError("init: give either v or v_over_w, not both")

    if mode == "custom":
        if "v" not in model:
            raise ConfigError("custom mode requires model.v")
        v_evolution = float(model["v"])
    else:
        ratio = TOPOLOGICAL_RATIO if mode == "unquenched_topological" else TRIVIAL_RATIO
        v_evolution = float(model.get("v", ratio * w))

    if "v" in init:
        v_init = float(init["v"])
    elif "v_over_w" in init:
        v_init = float(init["v_over_w"]) * w
    elif mode == "custom":
        v_init = v_evolution
    else:
        v_init = TOPOLOGICAL_RATIO * w

    numerics = _get(data, "numerics", {})
    _require_keys(numerics, {"dt", "sample_dt", "t_final", "integrator"}, "numerics")
    dt = float(_get(numerics, "dt", 1e-3))
    sample_dt = float(_get(numerics, "sample_dt", 0.1))
    t_final = float(_get(numerics, "t_final", 10.0))
    integrator = str(_get(numerics, "integrator", "rk4"))
    if integrator not in ("rk4", "split"):
        raise ConfigError("numerics.integrator must be 'rk4' or 'split'")
    if dt <= 0 or t_final <= 0:
        raise ConfigError("numerics.dt and numerics.t_final must be positive")
    if abs(sample_dt / dt - round(sample_dt / dt)) > 1e-9:
        raise ConfigError("numerics.sample_dt must be an integer multiple of dt")

    ens = _get(data, "ensemble", {})
    _require_keys(ens, {"n_traj", "base_seed", "workers"}, "ensemble")
    n_traj = int(_get(ens, "n_traj", 1))
    base_seed = int(_get(ens, "base_seed", 0))
    workers = int(_get(ens, "workers", 1))
    if n_traj < 1 or workers < 1:
        raise ConfigError("ensemble.n_traj and ensemble.workers must be >= 1")

    outputs = _get(data, "outputs", {})
    _require_keys(outputs, {"directory", "observables"}, "outputs")
    out_dir = Path(_get(outputs, "directory", "out"))
    observables = tuple(_get(outputs, "observables", ["sdee", "correlator", "events", "tc"]))
    known_obs = {"sdee", "correlator", "events", "tc"}
    if set(observables) - known_obs:
        raise ConfigError(f"unknown observables {set(observables) - known_obs}")

    partition = _parse_partition(_get(data, "partition", "default"))

    return RunConfig(
        sizes=sizes,
        w=w,
        gamma=gamma,
        alpha=alpha,
        dissipator=dissipator,
        mode=mode,
        v_evolution=v_evolution,
        v_init=v_init,
        dt=dt,
        sample_dt=sample_dt,
        t_final=t_final,
        integrator=integrator,
        n_traj=n_traj,
        base_seed=base_seed,
        workers=workers,
        out_dir=out_dir,
        observables=observables,
        partition=partition,
        raw=data,
    )


def _parse_partition(value):
    if value == "default" or value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError("partition must be 'default' or a mapping with keys a, b")
    _require_keys(value, {"a", "b"}, "partition")
    try:
        a = tuple(int(x) for x in value["a"])
        b = tuple(tuple(int(x) for x in iv) for iv in value["b"])
        return DeePartition(set_a=a, set_b=b)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad partition spec: {exc}")
