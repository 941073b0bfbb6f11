import numpy as np
import pytest

from gravbounce import cli, config as cf, export as ex


@pytest.fixture
def levels_cfg():
    return cf.parse_config({"command": "levels", "n_max": "6"})


def test_levels_table_shape(levels_cfg):
    table = cli.cmd_levels(levels_cfg)
    assert table.columns == ("n", "a_n", "E_n_peV", "z_n_um")
    assert table.data.shape == (6, 4)


def test_render_is_deterministic(levels_cfg):
    a = ex.render(cli.cmd_levels(levels_cfg), levels_cfg)
    b = ex.render(cli.cmd_levels(levels_cfg), levels_cfg)
    assert a == b


def test_files_byte_identical(tmp_path, levels_cfg):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.run(levels_cfg, str(p1))
    cli.run(levels_cfg, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_layout_and_round_trip(tmp_path, levels_cfg):
    path = tmp_path / "levels.csv"
    table = cli.cmd_levels(levels_cfg)
    ex.export_grid(table, levels_cfg, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == cf.EXPORT_MARKER
    assert lines[1] == "# meta.version = 0.1.0"
    header = next(i for i, ln in enumerate(lines) if not ln.startswith("#"))
    assert all(ln.startswith("# meta.") for ln in lines[1:header] if "meta." in ln)
    assert lines[header] == "n,a_n,E_n_peV,z_n_um"
    cols, data, meta = ex.read_table(str(path))
    assert cols == table.columns
    assert np.array_equal(data, table.data)
    assert cf.parse_config({}, path.read_text()) == levels_cfg


def test_values_survive_with_full_precision(tmp_path):
    cfg = cf.build_config({"command": "levels"})
    x = np.array([[0.1, 1.0 / 3.0, -2.0 ** -60, 1e300]])
    path = tmp_path / "x.csv"
    ex.export_grid(ex.Table(("a", "b", "c", "d"), x), cfg, str(path))
    assert np.array_equal(ex.read_table(str(path))[1], x)


def test_stdout_target(capsys, levels_cfg):
    assert ex.export_grid(cli.cmd_levels(levels_cfg), levels_cfg) is None
    assert capsys.readouterr().out.startswith(cf.EXPORT_MARKER)


def test_table_shape_checked():
    with pytest.raises(ValueError):
        ex.Table(("a", "b"), np.zeros((3, 3)))


def test_modes_table():
    cfg = cf.parse_config({"command": "modes", "L": "28um", "m_max": "6"})
    table = cli.cmd_modes(cfg)
    assert table.data.shape == (6, 6)
    assert np.array_equal(table.data[:, 0], np.arange(1, 7))
