import os

import numpy as np
import pytest

from gravbounce import cli, export as ex


def _run(argv):
    return cli.main(argv)


def test_levels_command(tmp_path):
    out = tmp_path / "levels.csv"
    assert _run(["levels", "--n-max", "6", "--output", str(out)]) == 0
    cols, data, meta = ex.read_table(str(out))
    assert len(cols) == 4 and data.shape == (6, 4)
    assert "# n_max = 6" in meta
    assert data[0, 2] == pytest.approx(1.40672, abs=1e-5)


def test_modes_command(tmp_path):
    out = tmp_path / "modes.csv"
    assert _run(["modes", "--L", "28um", "--m-max", "6", "--output", str(out)]) == 0
    assert ex.read_table(str(out))[1].shape == (6, 6)


def test_wigner_grid_rows(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "4")
    out = tmp_path / "w.csv"
    code = _run(["wigner", "--system", "single", "--n", "1", "--z-max", "8", "--k-min", "-4", "--k-max", "4",
                 "--z-samples", "201", "--k-samples", "201", "--output", str(out)])
    assert code == 0
    cols, data, _ = ex.read_table(str(out))
    assert cols == ("zeta", "k_scaled", "W")
    assert data.shape == (40401, 3)
    assert np.all(np.isfinite(data))


def test_config_file_and_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("command = levels\nn_max = 9\n")
    out = tmp_path / "o.csv"
    assert _run(["levels", "--config", str(cfgfile), "--n-max", "3", "--output", str(out)]) == 0
    assert ex.read_table(str(out))[1].shape == (3, 4)


def test_export_reused_as_config(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run(["modes", "--m-max", "3", "--L", "35", "--output", str(first)]) == 0
    assert _run(["modes", "--config", str(first), "--output", str(second)]) == 0
    strip = lambda p: [ln for ln in p.read_text().splitlines() if not ln.startswith("# output =")]  # noqa: E731
    assert strip(first) == strip(second)


@pytest.mark.parametrize("argv", [
    ["levels", "--n-max", "zero"],
    ["mixture", "--p1", "0.6", "--p2", "0.6"],
    ["modes", "--L", "-3"],
    ["levels", "--n-max", "500"],
])
def test_invalid_input_exit_code(argv, capsys):
    assert _run(argv) == cli.EXIT_INPUT
    assert "error[input]" in capsys.readouterr().err


def test_bad_thread_setting(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.THREADS_ENV, "many")
    argv = ["wigner", "--z-samples", "3", "--k-samples", "3", "--output", str(tmp_path / "w.csv")]
    assert _run(argv) == cli.EXIT_INPUT


def test_missing_config_file_is_output_error(tmp_path):
    assert _run(["levels", "--config", str(tmp_path / "absent.cfg")]) == cli.EXIT_OUTPUT


def test_unwritable_output_exit_code(tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert _run(["levels", "--output", str(target)]) == cli.EXIT_OUTPUT


def test_unknown_command_is_argparse_error():
    with pytest.raises(SystemExit) as info:
        _run(["fly"])
    assert info.value.code == 2


def test_reproduce_figures_list(capsys):
    assert _run(["reproduce-figures", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert names == cli.figure_configs()
    assert "slit_modes_L28" in names and len(names) == 43


def test_every_figure_config_parses():
    for name in cli.figure_configs():
        cli.parse_config({}, cli.figure_config_text(name), name)


def test_reproduce_selected_figures(tmp_path):
    written = cli.reproduce_figures(str(tmp_path), only=["slit_modes_L28", "yukawa_levels"], log=open(os.devnull, "w"))
    assert [os.path.basename(p) for p in written] == ["slit_modes_L28.csv", "yukawa_levels.csv"]
    assert _run(["reproduce-figures", "--outdir", str(tmp_path), "--only", "bogus"]) == cli.EXIT_INPUT


def test_stdout_output(capsys):
    assert _run(["levels", "--n-max", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1].startswith("2,")
