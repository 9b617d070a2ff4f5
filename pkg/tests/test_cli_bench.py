import csv
import json
import math

import pytest

from hyperarena import bench
from hyperarena.bench import RunConfig, run
from hyperarena.cli import main
from hyperarena.errors import ConfigError, VerificationFailed
from hyperarena.oracle import RefHypergraph, ref_count_all


def small(**kw):
    base = dict(n_edges=120, n_vertices=150, max_card=6, batches=4,
                batch_size=12, card="uniform:6", vertex_mods=3, t_delta=5)
    base.update(kw)
    return RunConfig(**base)


def test_count_on_fig1(tmp_path):
    p = tmp_path / "fig1.txt"
    p.write_text("1 2 3 4\n4 5\n5 6 7\n1 2\n")
    rep = run("count", RunConfig(input=str(p), motif="hyperedge"))
    r = RefHypergraph.from_records([(1, [1, 2, 3, 4]), (2, [4, 5]),
                                    (3, [5, 6, 7]), (4, [1, 2])])
    expected = ref_count_all(r).hyperedge_total
    assert rep.counts[0]["hyperedge"]["total"] == expected == 2  # {h1,h2,h3} and {h1,h2,h4}
    assert set(rep.counts[0]) == {"batch", "hyperedge"}


def test_update_report_shape():
    rep = run("update", small())
    assert len(rep.counts) == len(rep.timings) == 5
    for row in rep.timings[1:]:
        assert set(bench.PHASES) - {"build"} <= set(row)
        assert all(v >= 0 for k, v in row.items() if k != "batch")
    assert rep.timings[0]["build"] >= 0
    assert rep.config["seed"] == 0 and rep.config["t_delta"] == 5
    json.loads(rep.dumps())


def test_reports_are_deterministic():
    a, b = run("update", small(seed=3)), run("update", small(seed=3))
    assert a.deterministic_part() == b.deterministic_part()
    c = run("update", small(seed=4))
    assert c.deterministic_part() != a.deterministic_part()


def test_verify_seed_42():
    rep = run("verify", RunConfig(n_edges=150, n_vertices=150, max_card=6,
                                  batches=20, batch_size=10, card="uniform:6",
                                  vertex_mods=2, t_delta=math.inf, seed=42))
    assert rep.summary["verified_batches"] == 20


def test_verify_detects_divergence(monkeypatch):
    real = bench.apply_and_update

    def broken(state, g, batch, workers=1):
        out = real(state, g, batch, workers)
        out.counts.hyperedge_by_class[0] += 1
        return out

    monkeypatch.setattr(bench, "apply_and_update", broken)
    with pytest.raises(VerificationFailed) as exc:
        run("verify", small())
    assert exc.value.batch == 1 and exc.value.component == "hyperedge[0]"


def test_bench_reports_speedup():
    rep = run("bench", RunConfig(n_edges=3000, n_vertices=9000, max_card=6,
                                 batches=3, batch_size=20, card="uniform:6",
                                 motif="hyperedge"))
    assert rep.summary["median_speedup"] > 1
    assert all("recount" in r for r in rep.timings[1:])


@pytest.mark.parametrize("kw", [dict(motif="temporal", t_delta=0),
                                dict(motif="edges"), dict(delete_pct=1.5),
                                dict(card="zipf:2"), dict(threads=-1),
                                dict(n_vertices=3, max_card=5)])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        run("count", small(**kw))


def test_threads_zero_means_all_cores():
    assert RunConfig(threads=0).workers() >= 1
    rep = run("count", small(threads=0))
    assert rep.counts[0]["hyperedge"]["total"] >= 0


def test_cli_json_csv_and_exit_codes(tmp_path, capsys):
    out, table = tmp_path / "r.json", tmp_path / "t.csv"
    code = main(["update", "--edges", "80", "--vertices", "90", "--max-card", "5",
                 "--batches", "3", "--batch-size", "8", "--card", "uniform:5",
                 "--t-delta", "inf", "--motif", "all", "--seed", "1",
                 "--threads", "1", "--overprovision", "1.5",
                 "--out", str(out), "--csv", str(table)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["mode"] == "update" and rep["config"]["t_delta"] == "inf"
    assert len(rep["counts"]) == 4
    rows = list(csv.DictReader(table.open()))
    assert [r["batch"] for r in rows] == ["0", "1", "2", "3"]

    assert main(["count", "--edges", "30", "--vertices", "40"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["counts"][0]["hyperedge"]["by_class"][0]["pattern"]

    assert main(["count", "--motif", "temporal"]) == 1
    assert main(["count", "--input", str(tmp_path / "missing.txt")]) == 1


def test_cli_exit_2_on_verification_failure(monkeypatch):
    def fail(mode, cfg):
        raise VerificationFailed(3, "vertex[type1]", 4, 5)

    monkeypatch.setattr("hyperarena.cli.run", fail)
    assert main(["verify"]) == 2


def test_cli_ingests_3file(tmp_path, capsys):
    (tmp_path / "d-nverts.txt").write_text("2\n3\n")
    (tmp_path / "d-simplices.txt").write_text("1\n2\n1\n2\n3\n")
    (tmp_path / "d-times.txt").write_text("0\n1\n")
    assert main(["count", "--input", str(tmp_path / "d"), "--format",
                 "simplicial-3file", "--motif", "vertex"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["counts"][0]["vertex"] == {"type1": 1, "type2": 0, "type3": 0}


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "hyperarena", "count", "--edges",
                          "40", "--vertices", "60", "--motif", "hyperedge"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["mode"] == "count"
    bad = subprocess.run([sys.executable, "-m", "hyperarena", "count",
                          "--motif", "temporal"], capture_output=True, text=True)
    assert bad.returncode == 1 and bad.stderr
