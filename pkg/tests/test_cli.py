import math

import pytest

from taskcodes import Partition
from taskcodes.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    paths["uniform4"] = tmp_path / "uniform4.pmf"
    paths["uniform4"].write_text("0.25\n0.25\n0.25\n0.25\n")
    paths["bern01"] = tmp_path / "bern01.pmf"
    paths["bern01"].write_text("0.9\n0.1\n")
    paths["fair"] = tmp_path / "fair.pmf"
    paths["fair"].write_text("0.5\n0.5\n")
    paths["markov"] = tmp_path / "sticky.markov"
    paths["markov"].write_text("2\n0.5 0.5\n0.9 0.1\n0.1 0.9\n")
    paths["budgets"] = tmp_path / "counterexample.budgets"
    paths["budgets"].write_text("1\n2\n4\n4\n")
    paths["tmp"] = tmp_path
    return paths


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestEntropy:
    def test_uniform_alpha(self, capsys, files):
        code, out = run(capsys, ["entropy", "--pmf", str(files["uniform4"]),
                                 "--alpha", "0.5"])
        assert code == 0
        assert out.splitlines()[1] == "0.5,2"

    def test_bernoulli_rho(self, capsys, files):
        code, out = run(capsys, ["entropy", "--pmf", str(files["bern01"]),
                                 "--rho", "1"])
        assert code == 0
        value = float(out.splitlines()[1].split(",")[1])
        assert value == pytest.approx(2 * math.log2(math.sqrt(0.9) + math.sqrt(0.1)),
                                      abs=1e-9)

    def test_markov_rates(self, capsys, files):
        code, out = run(capsys, ["entropy", "--markov", str(files["markov"]),
                                 "--alpha", "0.5", "--n", "1..10"])
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert len(rows) == 10
        rates = [float(v) for _, v in rows]
        # normalized entropies decrease toward the sticky chain's rate
        assert all(a >= b - 1e-12 for a, b in zip(rates[1:], rates[2:]))

    def test_malformed_pmf_is_usage_error(self, capsys, files):
        bad = files["tmp"] / "bad.pmf"
        bad.write_text("0.5\nnope\n")
        code, _ = run(capsys, ["entropy", "--pmf", str(bad), "--alpha", "0.5"])
        assert code == 1


class TestConstruct:
    def test_counterexample_budget_mode(self, capsys, files):
        code, out = run(capsys, ["construct", "--budgets", str(files["budgets"])])
        assert code == 0
        blocks = [line for line in out.splitlines() if not line.startswith("#")]
        assert len(blocks) == 3

    def test_uniform4_report(self, capsys, files):
        code, out = run(capsys, ["construct", "--pmf", str(files["uniform4"]),
                                 "--M", "5", "--rho", "1"])
        assert code == 0
        lines = out.splitlines()
        row = lines[-1].split(",")
        assert float(row[5]) == pytest.approx(4.0)
        assert float(row[6]) == pytest.approx(0.8)  # 2^(2 - log2 5), vacuous
        assert float(row[7]) == pytest.approx(17.0)

    def test_m_below_threshold_exit_2(self, capsys, files):
        code = main(["construct", "--pmf", str(files["uniform4"]),
                     "--M", "4", "--rho", "1"])
        err = capsys.readouterr().err
        assert code == 2
        assert "log2|X| + 2 = 4" in err

    def test_partition_roundtrip(self, capsys, files):
        code, out = run(capsys, ["construct", "--pmf", str(files["bern01"]),
                                 "--M", "4", "--rho", "1"])
        assert code == 0
        block_lines = [l for l in out.splitlines() if "," not in l]
        reparsed = Partition.from_text("\n".join(block_lines))
        assert reparsed.ground_size == 2


class TestMomentOracle:
    def test_moment_of_explicit_partition(self, capsys, files):
        part = files["tmp"] / "part.txt"
        part.write_text("0\n1 2 3\n")
        code, out = run(capsys, ["moment", "--pmf", str(files["uniform4"]),
                                 "--partition", str(part), "--rho", "1"])
        assert code == 0
        assert float(out.strip()) == pytest.approx(0.25 + 0.75 * 3)

    def test_oracle(self, capsys, files):
        code, out = run(capsys, ["oracle", "--pmf", str(files["uniform4"]),
                                 "--M", "2", "--rho", "1"])
        assert code == 0
        assert float(out.splitlines()[0]) == pytest.approx(2.0)


class TestSweep:
    def test_deterministic_output(self, capsys, files):
        argv = ["sweep", "--pmf", str(files["bern01"]), "--rate", "0.9",
                "--rho", "1", "--n", "4..8"]
        _, first = run(capsys, argv)
        _, second = run(capsys, argv)
        assert first == second
        assert first.splitlines()[0].startswith("n,R,rho,M,N,")

    def test_rows_ordered_by_n(self, capsys, files):
        code, out = run(capsys, ["sweep", "--pmf", str(files["bern01"]),
                                 "--rate", "0.9", "--rho", "1",
                                 "--n", "4..12", "--step", "4"])
        assert code == 0
        ns = [int(line.split(",")[0]) for line in out.splitlines()[1:]]
        assert ns == [4, 8, 12]

    def test_markov_source(self, capsys, files):
        code, out = run(capsys, ["sweep", "--markov", str(files["markov"]),
                                 "--rate", "1.2", "--rho", "1", "--n", "4..6"])
        assert code == 0
        assert len(out.splitlines()) == 4

    def test_empty_range_usage_error(self, capsys, files):
        code, _ = run(capsys, ["sweep", "--pmf", str(files["bern01"]),
                               "--rate", "0.9", "--rho", "1", "--n", "8..4"])
        assert code == 1

    def test_rate_too_small_exit_2(self, capsys, files):
        code, _ = run(capsys, ["sweep", "--pmf", str(files["bern01"]),
                               "--rate", "0.3", "--rho", "1", "--n", "4..8"])
        assert code == 2

    def test_cap_exceeded_exit_3(self, capsys, files):
        code, _ = run(capsys, ["sweep", "--pmf", str(files["bern01"]),
                               "--rate", "0.9", "--rho", "1", "--n", "16..16",
                               "--cap", "1024"])
        assert code == 3

    def test_cap_env_override(self, capsys, files, monkeypatch):
        monkeypatch.setenv("TASKCODES_CAP", "1024")
        code, _ = run(capsys, ["sweep", "--pmf", str(files["bern01"]),
                               "--rate", "0.9", "--rho", "1", "--n", "16..16"])
        assert code == 3


class TestMismatch:
    def test_equal_laws_zero_column(self, capsys, files):
        code, out = run(capsys, ["mismatch", "--pmf", str(files["fair"]),
                                 "--q", str(files["fair"]), "--alpha", "0.5,2"])
        assert code == 0
        for line in out.splitlines()[1:]:
            assert float(line.split(",")[1]) == pytest.approx(0.0, abs=1e-12)

    def test_fair_vs_skew_value(self, capsys, files):
        code, out = run(capsys, ["mismatch", "--pmf", str(files["fair"]),
                                 "--q", str(files["bern01"]), "--alpha", "0.5"])
        assert code == 0
        delta = float(out.splitlines()[1].split(",")[1])
        assert delta == pytest.approx(math.log2(4 / 3), abs=1e-9)

    def test_disjoint_supports_inf_cell(self, capsys, files):
        a = files["tmp"] / "a.pmf"
        a.write_text("1\n0\n")
        b = files["tmp"] / "b.pmf"
        b.write_text("0\n1\n")
        code, out = run(capsys, ["mismatch", "--pmf", str(a), "--q", str(b),
                                 "--alpha", "2"])
        assert code == 0
        assert out.splitlines()[1].split(",")[1] == "inf"

    def test_mismatched_sweep(self, capsys, files):
        code, out = run(capsys, ["mismatch", "--pmf", str(files["fair"]),
                                 "--q", str(files["bern01"]), "--rate", "1.6",
                                 "--rho", "1", "--n", "4..8", "--step", "4"])
        assert code == 0
        header = out.splitlines()[0]
        assert header.endswith("q_id,delta_bits")
        last = out.splitlines()[-1].split(",")
        assert float(last[-1]) == pytest.approx(math.log2(4 / 3), abs=1e-9)

    def test_output_file(self, capsys, files):
        out_path = files["tmp"] / "table.csv"
        code = main(["mismatch", "--pmf", str(files["fair"]),
                     "--q", str(files["bern01"]), "--alpha", "0.5",
                     "--out", str(out_path)])
        assert code == 0
        assert out_path.read_text().endswith("\n")
