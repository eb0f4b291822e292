import pandas as pd

from src.analysis.benchmark import BenchmarkRunner
from src.visualization.generate_plots import main as plot_main, plot_benchmark


def test_plots_are_written(tmp_path, capsys):
    runner = BenchmarkRunner(families=["line", "star"], sizes=[4, 7, 8])
    runner.run(progress=False)
    png = plot_benchmark(runner.to_dataframe(), tmp_path / "plots" / "bench.png")
    assert png.exists() and png.stat().st_size > 0

    csv = runner.save_csv(tmp_path / "bench.csv")
    out = tmp_path / "again.png"
    plot_main(str(csv), str(out))
    assert out.exists()
    assert "Benchmark plot saved" in capsys.readouterr().out


def test_empty_csv_is_reported(tmp_path, capsys):
    csv = tmp_path / "empty.csv"
    pd.DataFrame(columns=["family", "n", "depth"]).to_csv(csv, index=False)
    plot_main(str(csv), str(tmp_path / "none.png"))
    assert "No bench rows" in capsys.readouterr().out
    assert not (tmp_path / "none.png").exists()
