"""Command surface: flags, exit codes, output formats, determinism.

Every invocation goes through cli.main() in-process so the tests see
the same code path as the console script without paying for process
spawns.
"""

import json

import pytest

from flipkit import cli

CPW_ARGS = ["cpw", "--w", "10um", "--s", "5.806um",
            "--eps-sub", "11.9", "--eps-sup", "1"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ----------------------------------------------------------- exit codes

def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "cpw", "--w", "10um", "--bogus", "1")
    assert code == 1
    assert err


def test_missing_subcommand_is_usage_error(capsys):
    assert run(capsys)[0] == 1


def test_conflicting_cpw_flags(capsys):
    code, _, err = run(capsys, "cpw", "--w", "10um", "--s", "1um",
                       "--z0", "50", "--eps-sub", "11.9")
    assert code == 1


def test_numeric_failure_exit_2(capsys):
    # cutoff too small for this ratio -> CutoffError -> 2
    code, _, err = run(capsys, "transmon", "--cj", "8fF", "--cs", "81fF",
                       "--lj", "0.0001nH", "--cutoff", "10")
    assert code == 2
    assert "cutoff" in err.lower()


def test_shallow_dip_extraction_exit_2(capsys):
    code, _, err = run(capsys, "smatrix", "--fr", "7.1GHz", "--ql", "1000",
                       "--qc", "50000")
    assert code == 2


def test_missing_config_file_exit_1(capsys):
    code, _, err = run(capsys, "analyze", "--config", "/nope/missing.cfg")
    assert code == 1


# ----------------------------------------------------------------- cpw

def test_cpw_reference_numbers(capsys):
    code, out, _ = run(capsys, *CPW_ARGS)
    assert code == 0
    assert "6.45" in out
    assert "49.53" in out


def test_cpw_json_round_trip(capsys):
    code, out, _ = run(capsys, *CPW_ARGS, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["eps_eff"] == 6.45
    assert 49.2 <= doc["z0_ohm"] <= 49.9
    # re-serializing parsed output is idempotent
    assert json.loads(json.dumps(doc)) == doc


def test_cpw_gap_synthesis(capsys):
    code, out, _ = run(capsys, "cpw", "--w", "10um", "--z0", "50",
                       "--eps-sub", "11.9", "--eps-sup", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["gap_m"] == pytest.approx(5.806e-6, rel=0.04)


# ------------------------------------------------------------- transmon

def test_transmon_energy_report(capsys):
    code, out, _ = run(capsys, "transmon", "--cj", "8fF", "--cs", "81fF",
                       "--lj", "8.75nH", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ec_hz"] == pytest.approx(217.6e6, abs=0.5e6)
    assert doc["ej_hz"] == pytest.approx(18.68e9, abs=0.05e9)
    assert doc["frequency_hz"] == pytest.approx(5.486e9, abs=0.01e9)
    assert doc["frequency_cpb_hz"] == pytest.approx(doc["frequency_hz"],
                                                    rel=0.01)
    assert doc["anharmonicity_hz"] < 0.0


def test_transmon_c_eff_extra_row(capsys):
    code, out, _ = run(capsys, "transmon", "--cj", "8fF", "--cs", "81fF",
                       "--lj", "8.75nH", "--c-eff", "115fF", "--json")
    doc = json.loads(out)
    assert doc["frequency_c_eff_hz"] == pytest.approx(4.85e9, rel=0.01)


# -------------------------------------------------------------- smatrix

def test_smatrix_recovers_q(capsys, tmp_path):
    csv_path = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "smatrix", "--fr", "7.11524GHz",
                       "--ql", "6618.16", "--qc", "6618.16",
                       "--out", str(csv_path), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["extracted_q"] == pytest.approx(6618.16, rel=5e-3)
    assert doc["bandwidth_hz"] == pytest.approx(7.11524e9 / 6618.16, rel=5e-3)
    header = csv_path.read_text().splitlines()[0]
    assert header == "freq_hz,s21_re,s21_im"


def test_smatrix_plot_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        code, _, _ = run(capsys, "smatrix", "--fr", "7.1GHz", "--ql", "5000",
                         "--qc", "5000", "--plot", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<svg")


# ---------------------------------------------------------------- match

def test_match_finds_line_impedance(capsys):
    code, out, _ = run(capsys, "match", "--line-z0", "49.53",
                       "--band", "4GHz:8GHz", "--zmin", "45", "--zmax", "55",
                       "--zstep", "0.5", "--points", "501", "--json")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["best_z_port_ohm"] - 49.53) <= 0.5


# ------------------------------------------------------------ fieldsolve

def test_fieldsolve_coarse_cpw(capsys):
    code, out, _ = run(capsys, "fieldsolve", "--w", "10um", "--s", "5.806um",
                       "--eps-sub", "11.9", "--eps-sup", "1",
                       "--cell", "2um", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["eps_eff"] == pytest.approx(6.45, rel=1e-6)
    assert doc["participation"]["substrate"] > 0.9
    assert sum(doc["participation"].values()) == pytest.approx(1.0, abs=1e-9)


def test_fieldsolve_dump_potential(capsys, tmp_path):
    dump = tmp_path / "v.csv"
    code, _, _ = run(capsys, "fieldsolve", "--w", "10um", "--s", "5.806um",
                     "--eps-sub", "11.9", "--cell", "4um",
                     "--dump-potential", str(dump))
    assert code == 0
    lines = dump.read_text().splitlines()
    assert lines[0] == "x_m,y_m,v"
    assert len(lines) > 100


def test_fieldsolve_nonconvergence_exit_2(capsys):
    code, _, err = run(capsys, "fieldsolve", "--w", "10um", "--s", "5.806um",
                       "--eps-sub", "11.9", "--cell", "2um",
                       "--max-sweeps", "3")
    assert code == 2


# --------------------------------------------------------------- analyze

def test_analyze_packaged_preset(capsys):
    code, out, _ = run(capsys, "analyze", "--config", "paper-default",
                       "--json")
    assert code == 0
    doc = json.loads(out)
    names = [m["name"] for m in doc["modes"]]
    assert names == ["bottom_qubit", "top_qubit", "bottom_resonator",
                     "top_resonator"]
    assert doc["coupling"]["g_hz"]["value"] == pytest.approx(54.93e6,
                                                             abs=0.05e6)


def test_analyze_byte_identical(capsys):
    _, first, _ = run(capsys, "analyze", "--config", "paper-default",
                      "--json")
    _, second, _ = run(capsys, "analyze", "--config", "paper-default",
                       "--json")
    assert first == second


def test_analyze_out_file_matches_stdout(capsys, tmp_path):
    path = tmp_path / "report.json"
    _, out, _ = run(capsys, "analyze", "--config", "paper-default",
                    "--json", "--out", str(path))
    assert path.read_text() == out


# ----------------------------------------------------------------- sweep

def test_sweep_csv_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--config", "paper-default",
                       "--param", "interlayer_thickness",
                       "--grid", "0.1mm:4mm:8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("interlayer_thickness_m,")
    assert len(lines) == 9


def test_sweep_log_grid_with_zero_start(capsys):
    code, out, _ = run(capsys, "sweep", "--config", "paper-default",
                       "--param", "loss_tangent", "--grid", "0:1e-2:log5")
    assert code == 0
    first_col = [line.split(",")[0] for line in out.splitlines()[1:]]
    assert first_col[0] == "0"
    assert float(first_col[-1]) == pytest.approx(1e-2, rel=1e-9)
    q = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
    assert all(b <= a for a, b in zip(q, q[1:]))


def test_sweep_plot_and_csv(capsys, tmp_path):
    csv_path = tmp_path / "sweep.csv"
    svg_path = tmp_path / "sweep.svg"
    code, _, _ = run(capsys, "sweep", "--config", "paper-default",
                     "--param", "loss_tangent", "--grid", "1e-6:1e-2:log7",
                     "--out", str(csv_path), "--plot", str(svg_path),
                     "--y", "q_total_bottom", "--logx", "--logy")
    assert code == 0
    assert csv_path.read_text().splitlines()[0].startswith("tan_delta,")
    svg = svg_path.read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_sweep_plot_single_row_fails(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--config", "paper-default",
                       "--param", "loss_tangent", "--grid", "1e-4",
                       "--plot", str(tmp_path / "x.svg"),
                       "--y", "q_total_bottom")
    assert code == 1


def test_sweep_plot_unknown_column_fails(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--config", "paper-default",
                     "--param", "loss_tangent", "--grid", "1e-6:1e-2:log5",
                     "--plot", str(tmp_path / "x.svg"), "--y", "no_such")
    assert code == 1


def test_sweep_bad_grid_syntax(capsys):
    code, _, _ = run(capsys, "sweep", "--config", "paper-default",
                     "--param", "loss_tangent", "--grid", "zero:none")
    assert code == 1


def test_quantity_parsing_rejects_garbage(capsys):
    code, _, _ = run(capsys, "cpw", "--w", "10parsec", "--s", "5um",
                     "--eps-sub", "11.9")
    assert code == 1
