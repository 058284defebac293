import json
import subprocess
import sys

import numpy as np

from qcl import cli, ls_family


def run_cli(argv, capsys, factory=None):
    code = cli.main(argv, channel_factory=factory)
    out, err = capsys.readouterr()
    return code, out, err


class _MisnormalisedChannel:
    """Looks like a KrausChannel but skips the CPT validation on purpose."""

    def __init__(self, x):
        good = ls_family.kraus_for(x)
        self.dim_in = good.dim_in
        self.dim_out = good.dim_out
        self.kraus = tuple(1.02 * np.asarray(k) for k in good.kraus)
        self.label = good.label


def test_point_prints_requested_quantities(capsys):
    code, out, err = run_cli(["point", "--x", "0", "--quantities", "chi_star,c_ea"], capsys)
    assert code == 0
    assert out == "chi_star=1.584962500721, c_ea=3.169925001442\n"


def test_point_flag_bound_vanishes_at_the_far_end(capsys):
    code, out, err = run_cli(["point", "--x", "1", "--quantities", "q_flag"], capsys)
    assert code == 0
    assert out == "q_flag=0.000000000000\n"


def test_point_rejects_x_outside_the_range(capsys):
    code, out, err = run_cli(["point", "--x", "1.5"], capsys)
    assert code == 2
    assert "x out of range" in err


def test_point_rejects_unknown_quantity(capsys):
    code, out, err = run_cli(["point", "--x", "0.5", "--quantities", "q_magic"], capsys)
    assert code == 2
    assert "q_magic" in err


def test_missing_subcommand_is_a_usage_error(capsys):
    code, out, err = run_cli([], capsys)
    assert code == 2


def test_sweep_header_and_row_count(capsys):
    code, out, err = run_cli(
        ["sweep", "--steps", "3", "--quantities", "chi_star,c_ea"], capsys
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,chi_star,c_ea"
    assert len(lines) == 4
    assert lines[1].startswith("0.000000000000,1.584962500721,")


def test_sweep_omits_unrequested_columns(capsys):
    code, out, err = run_cli(["sweep", "--steps", "2", "--quantities", "c_ea"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "x,c_ea"


def test_sweep_csv_round_trips_all_digits(capsys):
    code, out, err = run_cli(
        ["sweep", "--steps", "4", "--quantities", "chi_star,c_ea,q_flag"], capsys
    )
    assert code == 0
    lines = out.splitlines()
    for line in lines[1:]:
        for cell in line.split(","):
            assert f"{float(cell):.12f}" == cell


def test_sweep_json_matches_csv_values(capsys):
    args = ["--steps", "3", "--quantities", "chi_star"]
    code, csv_out, _ = run_cli(["sweep"] + args, capsys)
    code2, json_out, _ = run_cli(["sweep"] + args + ["--format", "json"], capsys)
    assert code == 0 and code2 == 0
    rows = json.loads(json_out)
    assert [sorted(r) for r in rows] == [["chi_star", "x"]] * 3
    csv_rows = [line.split(",") for line in csv_out.splitlines()[1:]]
    for rec, cells in zip(rows, csv_rows):
        assert rec["x"] == float(cells[0])
        assert rec["chi_star"] == float(cells[1])


def test_sweep_is_byte_identical_across_runs_and_threads(capsys, monkeypatch):
    args = ["sweep", "--steps", "5", "--starts", "4", "--seed", "42"]
    monkeypatch.setenv("QCL_THREADS", "1")
    code, first, _ = run_cli(args, capsys)
    assert code == 0
    monkeypatch.setenv("QCL_THREADS", "3")
    code, second, _ = run_cli(args, capsys)
    assert code == 0
    assert first == second
    code, third, _ = run_cli(args, capsys)
    assert third == first


def test_sweep_rejects_inverted_range(capsys):
    code, out, err = run_cli(["sweep", "--x-min", "0.8", "--x-max", "0.2"], capsys)
    assert code == 2
    assert "inverted" in err


def test_sweep_rejects_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("QCL_THREADS", "many")
    code, out, err = run_cli(["sweep", "--steps", "2", "--quantities", "c_ea"], capsys)
    assert code == 2
    assert "QCL_THREADS" in err


def test_sweep_writes_output_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, err = run_cli(
        ["sweep", "--steps", "2", "--quantities", "chi_star", "--out", str(target)], capsys
    )
    assert code == 0
    assert out == ""
    assert target.read_text().splitlines()[0] == "x,chi_star"


def test_sweep_unwritable_path_is_an_io_error(capsys):
    code, out, err = run_cli(
        [
            "sweep",
            "--steps",
            "2",
            "--quantities",
            "chi_star",
            "--out",
            "/no-such-dir/table.csv",
        ],
        capsys,
    )
    assert code == 3
    assert "error" in err


def test_verify_quick_passes(capsys):
    code, out, err = run_cli(["verify", "--level", "quick"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].endswith("0 failed")


def test_verify_names_broken_cpt_invariant(capsys):
    code, out, err = run_cli(
        ["verify", "--level", "quick"], capsys, factory=lambda x: _MisnormalisedChannel(x)
    )
    assert code == 1
    failures = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert failures
    assert failures[0].startswith("FAIL cpt-trace-preservation")


def test_protocol_reports_information_and_gap(capsys):
    code, out, err = run_cli(["protocol", "--name", "phase"], capsys)
    assert code == 0
    assert "mutual_information=0.584962500721" in out
    assert "gap_to_c_ea=1.000000000000" in out
    assert "message 0: 0.000000 0.500000 0.500000" in out


def test_protocol_rejects_unknown_name(capsys):
    code, out, err = run_cli(["protocol", "--name", "teleport"], capsys)
    assert code == 2


def test_figures_render_from_sweep_csv(tmp_path, capsys):
    table = tmp_path / "report.csv"
    code, _, _ = run_cli(
        ["sweep", "--steps", "3", "--starts", "2", "--out", str(table)], capsys
    )
    assert code == 0
    code, out, err = run_cli(["figures", "--from", str(table)], capsys)
    assert code == 0
    cap = tmp_path / "report_capacities.png"
    bounds = tmp_path / "report_bounds.png"
    assert cap.exists() and cap.stat().st_size > 0
    assert bounds.exists() and bounds.stat().st_size > 0
    assert str(cap) in out and str(bounds) in out


def test_figures_missing_source_is_an_io_error(capsys):
    code, out, err = run_cli(["figures", "--from", "/no/such/table.csv"], capsys)
    assert code == 3


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "qcl.cli", "point", "--x", "0.5", "--quantities", "chi_star"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "chi_star=0.773684376262\n"
