import json
import math

import numpy as np
import pytest
from scipy import integrate, stats

from ncga.cli import main
from ncga.harness import (CSV_COLUMNS, ExperimentSpec, NetworkSource, RunRecord, paired_t_test,
                          records_from_csv, records_to_csv, run_experiment, run_one, summarize,
                          write_outputs)
from ncga import make_canonical, make_cascade, parse_network

SHORT = {"max_generations": 5}


def _t_pdf(x, df):
    logc = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(logc - (df + 1) / 2 * math.log1p(x * x / df))


def _two_sided_p(t, df):
    tail, _ = integrate.quad(_t_pdf, abs(t), math.inf, args=(df,))
    return 2 * tail


def _record(net, seed, best):
    return RunRecord(net, "ncga_bts", "bts", seed, seed, best, best, 100, 1, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_t_test_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(1.0, 1.0, 12)
    b = rng.normal(0.4, 1.0, 12)
    res = paired_t_test(a, b)
    d = a - b
    assert res.t == pytest.approx(d.mean() / (d.std(ddof=1) / math.sqrt(12)))
    assert res.df == 11
    assert res.p == pytest.approx(_two_sided_p(res.t, 11), rel=1e-6)


def test_t_test_edge_cases():
    assert paired_t_test([1, 2, 3], [1, 2, 3]) == (0.0, 2, 1.0)
    res = paired_t_test([2, 3, 4], [1, 2, 3])
    assert res.t == math.inf and res.p == 0.0
    with pytest.raises(ValueError):
        paired_t_test([1, 2], [1])
    with pytest.raises(ValueError):
        paired_t_test([1], [1])


def test_t_test_size_and_power():
    rng = np.random.default_rng(7)
    null = [paired_t_test(rng.normal(size=10), rng.normal(size=10)).p < 0.05 for _ in range(2000)]
    assert abs(np.mean(null) - 0.05) <= 3 * math.sqrt(0.05 * 0.95 / 2000)
    shifted = [paired_t_test(rng.normal(1.5, 1, size=10), rng.normal(size=10)).p < 0.01
               for _ in range(2000)]
    # exact power from the noncentral t with effect 1.5 / sqrt(2) per pair
    crit = stats.t.ppf(0.995, 9)
    ncp = 1.5 / math.sqrt(2) * math.sqrt(10)
    power = stats.nct.sf(crit, 9, ncp) + stats.nct.cdf(-crit, 9, ncp)
    assert abs(np.mean(shifted) - power) <= 3 * math.sqrt(power * (1 - power) / 2000)


def test_csv_round_trip():
    recs = [_record("B", 0, 1.0), _record("B", 1, math.inf)]
    text = records_to_csv(recs)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert "inf" in text
    assert records_from_csv(text) == recs
    assert records_to_csv(recs, header=False) == "\n".join(text.splitlines()[1:]) + "\n"


def test_summarize_mean_std_and_plot():
    recs = [_record("II-3", s, v) for s, v in enumerate([0.0, 1.0, 2.0])] + [_record("II-7", 0, 4.0)]
    rows, plot = summarize(recs, {"II-3": 9.63, "II-7": 24.08})
    by = {r.network: r for r in rows}
    assert by["II-3"].mean == 1.0 and by["II-3"].std == 1.0 and by["II-3"].n == 3
    assert by["II-7"].std == 0.0
    assert plot.splitlines()[1:] == ["9.63 1.0000", "24.08 4.0000"]
    with pytest.raises(ValueError):
        summarize([])


def test_run_one_all_algorithms():
    net = make_canonical("B")
    for algo in ("ncga_bls", "ncga_bts", "ncga_mhd", "minimal1", "minimal2", "exhaustive"):
        rec = run_one(net, "B", algo, 0, 3, SHORT)
        assert rec.best_after_sweep == 1.0
    with pytest.raises(ValueError):
        run_one(net, "B", "nope", 0, 0, {})


def test_records_deterministic_in_seed():
    net = make_cascade(3)
    a = run_one(net, "II-3", "ncga_bls", 0, 11, SHORT)
    b = run_one(net, "II-3", "ncga_bls", 0, 11, SHORT)
    strip = lambda r: [getattr(r, c) for c in CSV_COLUMNS if c != "wallclock_ms"]
    assert strip(a) == strip(b)


def test_experiment_from_json(tmp_path):
    (tmp_path / "net.txt").write_text(
        "nodes 4\nsource 0\nsinks 3\nrate 2\nedge 0 1\nedge 0 2\nedge 1 3\nedge 2 3\n")
    spec_file = tmp_path / "exp.json"
    spec_file.write_text(json.dumps({
        "networks": [{"cascade": 3}, {"file": "net.txt"},
                     {"random": {"node_count": 10, "edge_count": 20, "layer_count": 3,
                                 "sink_count": 2, "rate": 1}, "name": "R"}],
        "algorithms": ["ncga_bts", "minimal2"],
        "runs": 2, "base_seed": 5, "ga": SHORT,
        "output": {"records": "out/rec.csv", "summary": "out/sum.csv", "plot": "out/plot.txt"},
    }))
    (tmp_path / "out").mkdir()
    spec = ExperimentSpec.load(spec_file)
    assert [s.name for s in spec.networks] == ["II-3", "net", "R"]
    result = run_experiment(spec)
    assert len(result.records) == 3 * 2 * 2
    assert sorted({r.seed for r in result.records}) == [5, 6]
    write_outputs(spec, result)
    assert records_from_csv((tmp_path / "out/rec.csv").read_text())[0].network == "II-3"
    assert (tmp_path / "out/sum.csv").read_text().startswith("network,algorithm,mean")
    assert "ncga_bts" in (tmp_path / "out/plot.txt").read_text()


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec([NetworkSource("B", "canonical", {"which": "B"})], ["bogus"])
    with pytest.raises(ValueError):
        NetworkSource.from_dict({"weird": 1})


def test_cli_generate_and_inspect(tmp_path, capsys):
    out = tmp_path / "ii7.txt"
    assert main(["generate", "cascade", "7", "-o", str(out)]) == 0
    assert parse_network(out.read_text()) == make_cascade(7)
    assert main(["inspect", str(out)]) == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert row == "ii7,80,40,2.00,24.08,24.08"


def test_cli_generate_random(capsys):
    assert main(["generate", "random", "--nodes", "12", "--edges", "30", "--layers", "4",
                 "--sinks", "2", "--seed", "3"]) == 0
    assert "nodes 12" in capsys.readouterr().out


def test_cli_run_and_ttest(tmp_path, capsys):
    net = tmp_path / "b.txt"
    main(["generate", "canonical", "B", "-o", str(net)])
    assert main(["run", str(net), "--encoding", "bls", "--seed", "4", "--gens", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    rec = records_from_csv("\n".join(lines))[0]
    assert (rec.algorithm, rec.seed, rec.best_after_sweep, rec.evaluations) == ("ncga_bls", 4, 1.0, 450)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text(records_to_csv([_record("x", s, v) for s, v in enumerate([3.0, 4.0, 6.0])]))
    b.write_text(records_to_csv([_record("x", s, v) for s, v in enumerate([1.0, 1.0, 2.0])]))
    assert main(["ttest", str(a), str(b)]) == 0
    t, df, p = capsys.readouterr().out.splitlines()[1].split(",")
    ref = paired_t_test([3, 4, 6], [1, 1, 2])
    assert float(t) == pytest.approx(ref.t, rel=1e-5) and int(df) == 2
    assert float(p) == pytest.approx(ref.p, rel=1e-5)


def test_cli_reports_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("nodes 2\nsource 0\nsinks 1\nrate 1\nedge 0 5\n")
    assert main(["inspect", str(bad)]) == 1
    assert "line 5" in capsys.readouterr().err
    assert main(["inspect", str(tmp_path / "missing.txt")]) == 1
