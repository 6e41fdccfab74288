import json
import math
import subprocess
import sys

import pytest

from latnet import cli
from latnet.errors import InvariantError
from latnet.table import SweepTable


def rows_by_name(table):
    return {r[0]: r for r in table.rows}


def test_bounds_square():
    t = cli.cmd_bounds("square", 4.0)
    vals = sorted(r[1] for r in t.rows)
    for target, tol in ((5.76, 0.01), (5.84, 0.01), (6.0268, 1e-4), (6.14, 0.005), (6.27, 0.005), (6.40, 0.005)):
        assert any(abs(v - target) <= tol for v in vals), target
    assert t.columns == cli.BOUND_COLUMNS
    assert vals == [r[1] for r in t.rows]


def test_bounds_triangular():
    t = rows_by_name(cli.cmd_bounds("triangular", 4.0))
    assert t["tri_lower"][1] == pytest.approx(7.583, abs=1e-3)
    assert t["exact"][1] == pytest.approx(7.71115, abs=1e-5)
    assert t["near18"][1] == pytest.approx(7.879, abs=1e-3)


def test_bounds_line():
    t = rows_by_name(cli.cmd_bounds("line", 2.0, (0.0,)))
    assert t["exact"][1] == pytest.approx(math.pi**2 / 3)
    assert t["hurwitz_upper"][1] == pytest.approx(10 / 3)


def test_bounds_with_offset():
    t = rows_by_name(cli.cmd_bounds("triangular", 4.0, (0.3, 0.2)))
    assert t["quadratic"][2] == "lower"
    assert t["quadratic"][1] <= t["quadratic"][5]
    t = rows_by_name(cli.cmd_bounds("square", 4.0, (0.3,)))
    assert t["voronoi"][1] >= t["voronoi"][5]


def test_kind_check_aborts():
    bad = [("fake", 10.0, "lower", 6.0, 5.9, 6.1, 0.6)]
    with pytest.raises(InvariantError):
        cli.check_kinds(bad)
    cli.check_kinds([("ok", 5.0, "lower", 6.0, 5.9, 6.1, -0.1), ("ok2", 7.0, "upper", 6.0, 5.9, 6.1, 0.1)])


def test_tdma_line_balanced():
    t = cli.cmd_tdma("line", 2.0, "balanced", range(2, 11))
    thr = t.column("throughput")
    assert t.column("m")[thr.index(max(thr))] in (3, 4)


def test_tdma_line_unidirectional():
    t = cli.cmd_tdma("line", 2.0, "unidirectional", range(2, 11))
    thr = t.column("throughput")
    assert t.column("m")[thr.index(max(thr))] in (4, 5)


def test_tdma_square_balanced_below_simple():
    t = cli.cmd_tdma("square", 4.0, "simple+balanced", range(2, 17))
    by = {(r[0], r[1]): r for r in t.rows}
    j = t.columns.index("normalized")
    for m in range(2, 17):
        assert by[("balanced", m)][j] < by[("simple", m)][j]


def test_tdma_triangular_columns():
    t = cli.cmd_tdma("triangular", 4.0, "all", [2, 4])
    assert t.columns[2] == "cell_area"
    area = {(r[0], r[1]): r[2] for r in t.rows}
    assert area[("parallelogram", 2)] == pytest.approx(6 * math.sqrt(3) / 2)


def test_tdma_bad_scheme():
    with pytest.raises(cli.DomainError):
        cli.cmd_tdma("square", 4.0, "rhombus", [2])


def test_sweep_offset_curve(tmp_path):
    out = tmp_path / "off.csv"
    cli.cmd_sweep("offset-curve", "r", cli.parse_grid("0..0.9:0.01"),
                  {"lattice": "triangular", "alpha": [3.0, 5.0], "tolerance": 1e-7}, "csv", out)
    t = SweepTable.from_csv(out.read_text())
    a3, a5 = t.column("I[alpha=3]"), t.column("I[alpha=5]")
    assert len(a3) == 91 and a3[0] > a5[0]
    assert any(y > x for x, y in zip(a3, a5))


def test_sweep_transport_capacity():
    text = cli.cmd_sweep("transport-capacity", "z", cli.parse_grid("0.05..0.5:0.001"), {"alpha": [2.0]})
    t = SweepTable.from_csv(text)
    col = t.column("T[alpha=2]")
    assert t.column("z")[col.index(max(col))] == pytest.approx(0.224, abs=2e-3)


def test_sweep_bound_json():
    text = cli.cmd_sweep("bound", "alpha", cli.parse_grid("2.5..6:0.5"), {"lattice": "square"}, "json")
    t = SweepTable.from_json(text)
    assert t.columns[:2] == ["alpha", "exact"]
    ex = t.column("exact")
    for name in ("simple_c", "sharp_c", "closed_form"):
        assert all(v < e for v, e in zip(t.column(name), ex))
    for name in ("rectangle", "radial_3_2", "radial_3_sqrt2"):
        assert all(v > e for v, e in zip(t.column(name), ex))


def test_sweep_throughput():
    text = cli.cmd_sweep("throughput", "m", [2, 3, 4, 5, 6], {"lattice": "line", "scheme": "balanced", "alpha": [2.0, 4.0]})
    t = SweepTable.from_csv(text)
    assert t.columns == ["m", "throughput[alpha=2]", "throughput[alpha=4]"]


def test_sweep_unknown_quantity():
    with pytest.raises(cli.DomainError, match="valid: interference"):
        cli.cmd_sweep("nonsense", "r", [0.0], {})


def test_grid_parsing():
    assert cli.parse_grid("0..0.3:0.1") == [0.0, 0.1, 0.2, 0.3]
    assert len(cli.parse_grid("1..2")) == 101
    assert cli.parse_grid("1,2.5") == [1.0, 2.5]
    assert cli.parse_m("2..4") == [2, 3, 4] and cli.parse_m("3") == [3]
    with pytest.raises(ValueError):
        cli.parse_grid("2..1")


def test_table_roundtrip_and_validation():
    t = SweepTable(["x", "y", "name"], [(1.0, 0.1, "a"), (2.0, 1 / 3, "b")], {"k": [1, 2]}, key="x")
    back = SweepTable.from_csv(t.to_csv())
    assert back.rows == t.rows and back.metadata == t.metadata
    assert SweepTable.from_json(t.to_json()).rows == [tuple(r) for r in t.rows]
    assert "0.33333333333333331" in t.to_csv()
    with pytest.raises(InvariantError):
        SweepTable(["x"], [(2.0,), (1.0,)], key="x")
    with pytest.raises(InvariantError):
        SweepTable(["x", "y"], [(1.0, float("nan"))])
    with pytest.raises(InvariantError):
        SweepTable(["x", "y"], [(1.0,)])


def test_main_exit_codes(tmp_path, capsys):
    assert cli.main(["bounds", "--lattice", "line", "--alpha", "2"]) == 0
    assert "hurwitz_upper" in capsys.readouterr().out
    assert cli.main(["bounds", "--lattice", "square", "--alpha", "1.5"]) == 3
    assert "alpha" in capsys.readouterr().err
    assert cli.main(["tdma", "--lattice", "square", "--alpha", "4", "--m", "x"]) == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["sweep", "bogus", "--var", "r", "--grid", "0"])
    assert e.value.code == 2
    assert cli.main(["bounds", "--lattice", "line", "--alpha", "2", "--out", str(tmp_path / "no" / "f.csv")]) == 1


def test_main_writes_json(tmp_path):
    out = tmp_path / "b.json"
    assert cli.main(["bounds", "--lattice", "triangular", "--alpha", "4", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["columns"] == cli.BOUND_COLUMNS and doc["metadata"]["command"] == "bounds"


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "latnet", "bounds", "--lattice", "line", "--alpha", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("# alpha: 3.0")
