"""End-to-end tests for the simulation driver and the command-line interface."""

import json

import numpy as np
import pytest

from cahnpav import SchemeKind, desk_scale_drop_spec, manufactured_spec, run_simulation
from cahnpav.cli import main
from cahnpav.output import read_history_csv, read_snapshot


class TestRunSimulation:
    def test_history_cadence_and_times(self):
        problem = manufactured_spec(dt=0.05)
        result = run_simulation(problem, SchemeKind.PAV_1A, n_steps=10, history_every=3)
        steps = [rec.step for rec in result.history]
        assert steps == [0, 3, 6, 9, 10]  # step 0, every 3rd, final
        for rec in result.history:
            assert rec.t == pytest.approx(problem.t0 + rec.step * 0.05)

    def test_manufactured_records_errors(self):
        result = run_simulation(manufactured_spec(), SchemeKind.PAV_2A, n_steps=4)
        assert all(rec.linf_err is not None for rec in result.history)
        assert all(rec.l2_err is not None for rec in result.history)

    def test_drop_records_have_no_errors(self):
        result = run_simulation(desk_scale_drop_spec(), SchemeKind.PAV_1A, n_steps=2)
        assert all(rec.linf_err is None for rec in result.history)

    def test_pav_records_r_and_xi(self):
        result = run_simulation(manufactured_spec(), SchemeKind.PAV_1B, n_steps=3)
        assert all(rec.r is not None and rec.xi is not None for rec in result.history)
        assert result.history[0].xi == 1.0
        assert all(rec.sav_r is None for rec in result.history)

    def test_sav_records_aux(self):
        result = run_simulation(manufactured_spec(), SchemeKind.SAV, n_steps=3)
        assert all(rec.sav_r is not None for rec in result.history)
        assert all(rec.r is None and rec.xi is None for rec in result.history)

    def test_deterministic(self):
        problem = manufactured_spec()
        a = run_simulation(problem, SchemeKind.PAV_2B, n_steps=6)
        b = run_simulation(problem, SchemeKind.PAV_2B, n_steps=6)
        assert a.history == b.history

    def test_diverged_keeps_partial_history(self):
        # the semi-implicit baseline blows up quickly at this step size
        result = run_simulation(desk_scale_drop_spec(), SchemeKind.SEMI_IMPLICIT, dt=0.05, n_steps=60)
        assert result.diverged
        assert result.diverged_step is not None
        assert len(result.history) >= 2  # step 0 plus everything before the blow-up
        assert result.history[-1].step < 60
        assert all(np.isfinite(rec.energy) for rec in result.history)

    def test_exact_history_changes_second_order_start(self):
        problem = manufactured_spec()
        cold = run_simulation(problem, SchemeKind.PAV_2A, n_steps=1, dt=0.05)
        seeded = run_simulation(problem, SchemeKind.PAV_2A, n_steps=1, dt=0.05, exact_history=True)
        assert seeded.history[-1].l2_err < cold.history[-1].l2_err

    def test_real_histories_satisfy_invariant_checker(self):
        from cahnpav import assert_invariants

        problem = desk_scale_drop_spec()
        for scheme in (SchemeKind.PAV_1A, SchemeKind.PAV_2B, SchemeKind.SAV):
            result = run_simulation(problem, scheme, dt=1e-2, n_steps=30)
            assert assert_invariants(result.history, scheme).all_passed

    def test_exact_history_rejected_for_drop_problem(self):
        with pytest.raises(ValueError):
            run_simulation(
                desk_scale_drop_spec(), SchemeKind.PAV_2A, n_steps=1, exact_history=True
            )

    def test_snapshots_written(self, tmp_path):
        run_simulation(
            manufactured_spec(),
            SchemeKind.PAV_1A,
            n_steps=4,
            snapshot_every=2,
            output_dir=tmp_path,
        )
        snaps = sorted(tmp_path.glob("snapshot_*.dat"))
        assert [s.name for s in snaps] == [
            "snapshot_00000000.dat",
            "snapshot_00000002.dat",
            "snapshot_00000004.dat",
        ]
        field, t = read_snapshot(snaps[0])
        assert field.grid.shape == (20, 20)
        assert t == pytest.approx(0.1)


@pytest.fixture()
def mfg_config(tmp_path):
    def write(**overrides):
        doc = {
            "problem": {"kind": "manufactured"},
            "scheme": "2a",
            "time": {"dt": 0.05},
            "output": {"dir": str(tmp_path / "out")},
        }
        doc.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        return path

    return write


class TestCliRun:
    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{oops")
        assert main(["run", "--config", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_field_exits_2(self, mfg_config, capsys):
        path = mfg_config(scheme="9z")
        assert main(["run", "--config", str(path)]) == 2
        assert "scheme" in capsys.readouterr().err

    def test_successful_run_writes_history(self, mfg_config, tmp_path):
        path = mfg_config()
        assert main(["run", "--config", str(path)]) == 0
        records = read_history_csv(tmp_path / "out" / "history.csv")
        assert records[0].step == 0
        assert records[-1].step == 20  # (1.1 - 0.1) / 0.05

    def test_run_determinism_byte_identical(self, mfg_config, tmp_path):
        path = mfg_config()
        main(["run", "--config", str(path)])
        first = (tmp_path / "out" / "history.csv").read_bytes()
        main(["run", "--config", str(path)])
        assert (tmp_path / "out" / "history.csv").read_bytes() == first

    def test_diverged_baseline_exits_3(self, tmp_path, capsys):
        doc = {
            "problem": {"kind": "drop_array"},
            "scheme": "semi",
            "time": {"dt": 0.05, "tf": 3.0},
            "output": {"dir": str(tmp_path / "out")},
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        assert main(["run", "--config", str(path)]) == 3
        assert "diverged" in capsys.readouterr().err
        # rows up to the divergence are all present
        records = read_history_csv(tmp_path / "out" / "history.csv")
        assert len(records) > 1


class TestCliConvergence:
    def test_sweep_writes_csv_and_slope(self, tmp_path, capsys):
        code = main(
            [
                "convergence",
                "--scheme",
                "2a",
                "--dts",
                "0.1,0.05,0.025,0.0125",
                "--output-dir",
                str(tmp_path),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "fitted slope" in out
        csv = (tmp_path / "convergence_2a.csv").read_text().splitlines()
        assert csv[0] == "dt,linf_err,l2_err"
        assert len(csv) == 5

    def test_too_few_dts_exits_2(self, tmp_path, capsys):
        assert main(["convergence", "--scheme", "1a", "--dts", "0.1,0.05"]) == 2
        assert "dts" in capsys.readouterr().err


class TestCliCompare:
    def test_compare_writes_per_scheme_histories(self, tmp_path, capsys):
        code = main(
            [
                "compare",
                "--schemes",
                "2a,1a",
                "--dt",
                "0.001",
                "--steps",
                "3",
                "--problem",
                "desk",
                "--output-dir",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert (tmp_path / "history_2a.csv").exists()
        assert (tmp_path / "history_1a.csv").exists()
        assert "2a:" in capsys.readouterr().out

    def test_compare_unknown_scheme_exits_2(self, tmp_path, capsys):
        code = main(
            ["compare", "--schemes", "2a,bogus", "--dt", "0.001", "--steps", "2",
             "--output-dir", str(tmp_path)]
        )
        assert code == 2

    def test_compare_diverging_baseline_exits_3(self, tmp_path, capsys):
        code = main(
            ["compare", "--schemes", "semi", "--dt", "0.05", "--steps", "60",
             "--problem", "desk", "--output-dir", str(tmp_path)]
        )
        assert code == 3
        assert "DIVERGED" in capsys.readouterr().out
        assert (tmp_path / "history_semi.csv").exists()
