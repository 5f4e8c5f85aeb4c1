import json

import numpy as np
import pytest
import yaml

from sshjump.cli import main
from sshjump.config import ConfigError, load_config
from sshjump.model import DissipatorKind

BASE = {
    "model": {"n_cells": 4, "w": 2.0, "gamma": 1.0, "alpha": 1.0, "dissipator": "spd"},
    "hamiltonian_mode": "unquenched_topological",
    "numerics": {"dt": 0.001, "sample_dt": 0.1, "t_final": 0.5, "integrator": "rk4"},
    "ensemble": {"n_traj": 2, "base_seed": 0, "workers": 1},
    "outputs": {"directory": "out", "observables": ["sdee", "correlator", "events", "tc"]},
}


def write_cfg(tmp_path, overrides=None, **sections):
    data = json.loads(json.dumps(BASE))
    for key, val in sections.items():
        if isinstance(val, dict) and key in data:
            data[key].update(val)
        else:
            data[key] = val
    if overrides:
        data.update(overrides)
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(data))
    return path


class TestConfigParsing:
    def test_mode_defaults(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path))
        assert cfg.v_evolution == pytest.approx(0.2)  # 0.1 * w
        assert cfg.v_init == pytest.approx(0.2)
        assert cfg.dissipator is DissipatorKind.SPD

    def test_quenched_mode(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path, hamiltonian_mode="quenched_to_trivial"))
        assert cfg.v_evolution == pytest.approx(3.0)  # 1.5 * w
        assert cfg.v_init == pytest.approx(0.2)       # topological start

    def test_custom_mode_requires_v(self, tmp_path):
        with pytest.raises(ConfigError, match="model.v"):
            load_config(write_cfg(tmp_path, hamiltonian_mode="custom"))
        cfg = load_config(write_cfg(tmp_path, hamiltonian_mode="custom", model={"v": 0.7}))
        assert cfg.v_evolution == 0.7 and cfg.v_init == 0.7

    def test_unknown_keys_are_hard_errors(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown keys"):
            load_config(write_cfg(tmp_path, typo_section={"a": 1}))
        with pytest.raises(ConfigError, match="unknown keys"):
            load_config(write_cfg(tmp_path, model={"n_cels": 4}))
        with pytest.raises(ConfigError, match="unknown keys"):
            load_config(write_cfg(tmp_path, numerics={"dtt": 0.1}))

    def test_size_list(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path, model={"n_cells": [4, 8]}))
        assert cfg.sizes == [4, 8]

    def test_init_v_exclusivity(self, tmp_path):
        with pytest.raises(ConfigError, match="not both"):
            load_config(write_cfg(tmp_path, init={"v": 0.1, "v_over_w": 0.1}))

    def test_sample_dt_divisibility(self, tmp_path):
        with pytest.raises(ConfigError, match="multiple"):
            load_config(write_cfg(tmp_path, numerics={"dt": 0.001, "sample_dt": 0.0015}))

    def test_partition_parsing(self, tmp_path):
        cfg = load_config(
            write_cfg(tmp_path, partition={"a": [1, 4], "b": [[3, 4], [7, 8]]})
        )
        assert cfg.partition.set_a == (1, 4)
        cfg2 = load_config(write_cfg(tmp_path, partition="default"))
        assert cfg2.partition is None

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config("/nonexistent/run.yaml")

    def test_bad_dissipator(self, tmp_path):
        with pytest.raises(ConfigError, match="dissipator"):
            load_config(write_cfg(tmp_path, model={"dissipator": "spud"}))


class TestPresets:
    @pytest.mark.parametrize(
        "name", ["fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"]
    )
    def test_packaged_presets_parse(self, name):
        from sshjump.cli import _preset_path

        cfg = load_config(_preset_path(name))
        assert cfg.w == 20.0
        assert cfg.n_traj >= 1
        # every preset must respect the step-size cap of its integrator
        assert cfg.gamma * cfg.dt <= 1e-2 + 1e-15


class TestCli:
    def test_config_error_exit_code(self, tmp_path, capsys):
        path = write_cfg(tmp_path, model={"oops": 1})
        assert main(["ground-state", "--config", str(path)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_unknown_preset(self, capsys):
        assert main(["ground-state", "--preset", "fig99"]) == 2

    def test_config_and_preset_mutually_exclusive(self, tmp_path):
        path = write_cfg(tmp_path)
        assert main(["ground-state", "--config", str(path), "--preset", "fig8"]) == 2

    def test_ground_state_outputs(self, tmp_path, capsys):
        path = write_cfg(tmp_path, model={"n_cells": 8},
                         outputs={"directory": str(tmp_path / "out")})
        assert main(["ground-state", "--config", str(path)]) == 0
        report = json.loads((tmp_path / "out" / "ground_state.json").read_text())
        assert abs(report["sdee"] - 2.0) < 1e-2
        assert abs(report["xi"] - 1.0 / np.log(10.0)) < 0.01

    def test_ground_state_trivial_phase(self, tmp_path):
        path = write_cfg(
            tmp_path,
            hamiltonian_mode="custom",
            model={"n_cells": 8, "v": 3.0},
            outputs={"directory": str(tmp_path / "out")},
        )
        assert main(["ground-state", "--config", str(path)]) == 0
        report = json.loads((tmp_path / "out" / "ground_state.json").read_text())
        assert report["sdee"] < 0.05
        assert report["xi"] is None

    def test_trajectory_outputs(self, tmp_path):
        path = write_cfg(tmp_path, outputs={"directory": str(tmp_path / "out")})
        assert main(["trajectory", "--config", str(path), "--seed", "3", "--dump-g"]) == 0
        traj = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()
        assert traj[0] == "t,sdee,g1l_re,g1l_im,g1l_abs"
        assert len(traj) == 1 + 6  # t = 0 .. 0.5 step 0.1
        events = (tmp_path / "out" / "events.csv").read_text().splitlines()
        assert events[0] == "t,channel,kind,site,site2,dsd,rate"
        gfile = tmp_path / "out" / "final_g.bin"
        assert gfile.stat().st_size == 2 * 8 * 8 * 8
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["command"] == "trajectory"
        assert manifest["seed"] == 3

    def test_ensemble_outputs(self, tmp_path):
        path = write_cfg(
            tmp_path,
            model={"n_cells": [2, 4]},
            numerics={"dt": 0.01, "sample_dt": 0.1, "t_final": 0.5, "integrator": "split"},
            ensemble={"n_traj": 4, "base_seed": 1, "workers": 1},
            outputs={"directory": str(tmp_path / "out")},
        )
        assert main(["ensemble", "--config", str(path)]) == 0
        out = tmp_path / "out"
        sdee = (out / "sdee_mean.csv").read_text().splitlines()
        assert sdee[0] == "L,t,mean,stderr"
        assert len(sdee) == 1 + 2 * 6
        corr = (out / "correlator.csv").read_text().splitlines()
        assert corr[0] == "L,t,mean_abs,stderr_abs,mean_re,mean_im"
        tc = (out / "tc_scaling.csv").read_text().splitlines()
        assert tc[0] == "L,tc,stderr,censored_count"
        assert len(tc) == 3
        named = sorted(p.name for p in out.glob("L*_dsd_hist_*.csv"))
        assert any("site1" in n for n in named) and any("all" in n for n in named)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["sizes"] == [2, 4]
        assert set(manifest["outputs"]) >= {"sdee_mean.csv", "tc_scaling.csv"}

    def test_symmetry_check_json(self, tmp_path, capsys):
        path = write_cfg(tmp_path, model={"dissipator": "sbd"},
                         outputs={"directory": str(tmp_path / "out")})
        assert main(["symmetry-check", "--config", str(path)]) == 0
        payload = json.loads((tmp_path / "out" / "symmetry_report.json").read_text())
        assert payload["class"].startswith("broken")
        assert payload["trs"]["preserved"] is True

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        # RK4 wildly unstable at w*dt >> 1: spectrum guard must trip -> 3
        path = write_cfg(
            tmp_path,
            hamiltonian_mode="custom",
            model={"n_cells": 4, "v": 1.0, "w": 4000.0},
            numerics={"dt": 0.01, "sample_dt": 0.1, "t_final": 0.5, "integrator": "rk4"},
            outputs={"directory": str(tmp_path / "out")},
        )
        assert main(["trajectory", "--config", str(path), "--seed", "0"]) == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
