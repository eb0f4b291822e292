import pandas as pd
import pytest
from pydantic import ValidationError

from src.analysis.benchmark import BenchmarkRunner, reference_qubit_count
from src.data.families import TopologyFamily
from src.models.schemas import BenchRow


def test_reference_count_for_eight_qudits():
    assert reference_qubit_count(8) == 73


def test_runner_tabulates_every_instance():
    runner = BenchmarkRunner(families=["line", "star", "kary"], sizes=[4, 7], verify=True)
    rows = runner.run(progress=False)
    assert [(r.family, r.n) for r in rows] == [
        ("line(4)", 4), ("line(7)", 7), ("star(4)", 4), ("star(7)", 7), ("kary(2,2)", 7)
    ]
    for row in rows:
        assert row.two_qudit_count == 2 * row.n - 3
        assert row.lowered_count == 2 * row.n - 2
        assert row.verified is True
    star7 = next(r for r in rows if r.family == "star(7)")
    assert star7.depth == 6 * 7 - 11
    assert star7.max_dimension == 7
    assert star7.tree_height == 1


def test_explicit_instances_and_cyclic_families():
    runner = BenchmarkRunner(families=[TopologyFamily("grid", (3, 3)), "ring", "honeycomb"], sizes=[6])
    rows = runner.run(progress=False)
    assert {r.family for r in rows} == {"grid(3,3)", "ring(6)", "honeycomb(2,3)"}
    assert all(r.verified is None for r in rows)


def test_dataframe_csv_and_table(tmp_path):
    runner = BenchmarkRunner(families=["binary"], sizes=[5, 4])
    runner.run(progress=False)
    df = runner.to_dataframe()
    assert list(df["n"]) == [4, 5]
    path = runner.save_csv(tmp_path / "bench" / "rows.csv")
    assert pd.read_csv(path)["two_qudit_count"].tolist() == [5, 7]
    assert "binary(4)" in runner.render_table()


def test_empty_runner_renders_placeholder():
    runner = BenchmarkRunner(families=["kary"], sizes=[4])
    assert runner.run(progress=False) == []
    assert runner.render_table() == "(no rows)"


def test_bench_row_rejects_wrong_count():
    with pytest.raises(ValidationError):
        BenchRow(family="line(4)", n=4, two_qudit_count=6, lowered_count=6, depth=9,
                 tree_height=2, max_dimension=3, reference_qubit_count=25)
