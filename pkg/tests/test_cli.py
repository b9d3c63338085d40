import hashlib
import json
import subprocess
import sys

import pytest

from kickratchet.cli import _subparsers, build_parser, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analytic_csv_on_stdout(capsys):
    code, out, err = run(["analytic", "--K", "2.6", "--b", "0.0625", "--hbar", "1",
                          "--A", "1.178", "--t-max", "120"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# I0=") and any(l.startswith("# t_R=") for l in lines)
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "t,F,I" and len(body) == 121
    assert body[1].split(",")[:2] == ["1", "0.0"]


def test_invariant_violation_exit_1(capsys):
    code, out, err = run(["analytic", "--b", "1.5"], capsys)
    assert code == 1 and out == ""
    assert len(err.strip().splitlines()) == 1
    msg = json.loads(err)
    assert msg["error"] == "validation" and "0 <= b < 1" in msg["message"]


def test_unknown_flag_exit_1(capsys):
    code, _, err = run(["classical", "--frobnicate"], capsys)
    assert code == 1 and json.loads(err)["error"] == "usage"
    assert len(err.strip().splitlines()) == 1


def test_missing_command_exit_1(capsys):
    code, _, err = run([], capsys)
    assert code == 1


def test_lab_and_dimensionless_are_exclusive(capsys):
    code, _, err = run(["convert", "--freq-mod", "1e6", "--A", "1"], capsys)
    assert code == 1 and "exclusive" in err


def test_convert_lab_values(capsys, tmp_path):
    lab = tmp_path / "lab.txt"
    lab.write_text("# cesium, moving lattice\npulse_period = 9.47e-6\n"
                   "freq_mod_amplitude = 1.25e6\n")
    code, out, _ = run(["convert", "--lab-file", str(lab)], capsys)
    assert code == 0
    vals = dict(l.split(",") for l in out.splitlines()[1:])
    assert float(vals["hbar_eff"]) == pytest.approx(1.0, abs=0.01)
    assert float(vals["A"]) == pytest.approx(2.325, abs=0.001)


def test_bad_lab_file_is_validation_error(capsys, tmp_path):
    lab = tmp_path / "lab.txt"
    lab.write_text("pulse_period = 0\n")
    code, _, err = run(["convert", "--lab-file", str(lab)], capsys)
    assert code == 1 and "pulse_period" in err
    lab.write_text("colour = blue\n")
    code, _, err = run(["convert", "--lab-file", str(lab)], capsys)
    assert code == 1 and "colour" in err


def test_classical_writes_both_csvs(tmp_path, capsys):
    code, _, _ = run(["classical", "--n-trajectories", "500", "--n-kicks", "5",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    assert (tmp_path / "stats.csv").read_text().startswith("kick,mean_shift")
    assert (tmp_path / "histogram.csv").read_text().startswith("rho_lo,")


def test_quantum_same_schema_plus_manifest(tmp_path, capsys):
    code, _, _ = run(["quantum", "--n-samples", "4", "--n-kicks", "5",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    c = tmp_path / "stats.csv"
    assert c.read_text().splitlines()[0] == \
        "kick,mean_shift,sem,variance,second_moment,rocking_offset"
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert {"spec", "grid", "grid_events", "wall_time_s"} <= set(man)


def test_quantum_bad_grid_is_validation_error(capsys):
    code, _, err = run(["quantum", "--m-max", "64", "--n-phi", "100"], capsys)
    assert code == 1 and "n_phi" in err


def test_runtime_error_exit_2(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(["classical", "--n-trajectories", "10", "--n-kicks", "2",
                        "--out", str(blocker / "sub")], capsys)
    assert code == 2 and json.loads(err)["error"] == "runtime"


def test_help_lists_every_flag():
    parser = build_parser()
    for name, sp in _subparsers(parser).items():
        text = sp.format_help()
        for act in sp._actions:
            for opt in act.option_strings:
                assert opt in text, (name, opt)


NON_DEFAULT = {
    "convert": ["--K", "3", "--b", "0.1", "--A", "0.5", "--hbar", "0.5",
                "--rho-L", "2"],
    "analytic": ["--K", "3", "--b", "0.1", "--pulse-period", "5e-6",
                 "--sigma-p", "2", "--t-max", "7"],
    "classical": ["--K", "3", "--seed", "9", "--parity", "odd-long",
                  "--n-trajectories", "77", "--workers", "2", "--out", "x"],
    "quantum": ["--n-samples", "6", "--m-max", "64", "--n-phi", "256",
                "--chunk", "2", "--sigma-p", "0.5", "--freq-offset", "1e4"],
    "experiment": ["custom", "--seed", "3", "--engines", "analytic", "quantum",
                   "--grid", "K=1.0,2.0", "--option", "n_samples=4", "--out", "o"],
}


@pytest.mark.parametrize("cmd", sorted(NON_DEFAULT))
def test_every_flag_round_trips_through_config(cmd, tmp_path, capsys):
    argv = [cmd] + NON_DEFAULT[cmd]
    code, out, _ = run(argv + ["--dump-config"], capsys)
    assert code == 0
    cfg = json.loads(out)
    sp = _subparsers(build_parser())[cmd]
    dests = {a.dest for a in sp._actions} - {"help", "config", "dump_config"}
    assert dests <= set(cfg)
    path = tmp_path / "c.json"
    path.write_text(out)
    positional = [NON_DEFAULT[cmd][0]] if cmd == "experiment" else []
    code, out2, _ = run([cmd] + positional + ["--config", str(path),
                                              "--dump-config"], capsys)
    assert code == 0 and json.loads(out2) == cfg


def test_command_line_overrides_config(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"K": 4.0, "t_max": 3}))
    code, out, _ = run(["analytic", "--config", str(path), "--t-max", "2",
                        "--dump-config"], capsys)
    cfg = json.loads(out)
    assert cfg["K"] == 4.0 and cfg["t_max"] == 2


def test_config_unknown_key_rejected(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"warp": 9}))
    code, _, err = run(["analytic", "--config", str(path)], capsys)
    assert code == 1 and "warp" in err


def test_default_seed_is_fixed(capsys):
    _, out, _ = run(["classical", "--dump-config"], capsys)
    assert json.loads(out)["seed"] == 20061031


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "kickratchet.cli", "analytic",
                        "--t-max", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and "t,F,I" in r.stdout


@pytest.mark.slow
def test_experiment_fig4_reproducible(tmp_path, capsys):
    digests = []
    for d in ("a", "b"):
        code, _, _ = run(["experiment", "fig4", "--seed", "7",
                          "--out", str(tmp_path / d)], capsys)
        assert code == 0
        digests.append({p.name: hashlib.sha256(p.read_bytes()).hexdigest()
                        for p in (tmp_path / d).iterdir() if p.suffix != ".json"})
    assert digests[0] == digests[1] and "fig4.csv" in digests[0]
