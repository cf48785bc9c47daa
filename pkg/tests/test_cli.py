import json
import subprocess
import sys
from pathlib import Path

import pytest

from swnet.cli import main
from swnet.graph import from_links
from swnet.netio import save_edge_list

CORPUS = Path(__file__).parent / "fixtures" / "corpus12"


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def clique_files(workdir):
    """Four planted 10-cliques plus a block-label node table."""
    links = []
    for b in range(4):
        base = b * 10
        links += [(base + i, base + j) for i in range(10) for j in range(i + 1, 10)]
    net = from_links(links, 40, directed=False)
    edge_path = workdir / "cliques.tsv"
    save_edge_list(net, edge_path)
    label_path = workdir / "cliques_nodes.tsv"
    rows = ["id\tname\tblock"]
    rows += [f"{i}\tnode{i}\tblock{i // 10}" for i in range(40)]
    label_path.write_text("\n".join(rows) + "\n")
    return edge_path, label_path


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_extract_then_stats(workdir, capsys):
    edges = workdir / "deps.tsv"
    nodes = workdir / "deps_nodes.tsv"
    assert main(["extract", "--src", str(CORPUS), "--out", str(edges),
                 "--nodes", str(nodes)]) == 0
    capsys.readouterr()
    header = edges.read_text().splitlines()[0]
    assert "directed=true" in header
    code, doc = run_json(capsys, ["stats", str(edges), "--nodes", str(nodes)])
    assert code == 0
    assert doc["stats"]["n"] == 12 and doc["stats"]["m"] == 26
    assert doc["stats"]["directed"] is True
    assert doc["manifest"]["command"] == "stats"


def test_extract_no_implicit(workdir, capsys):
    edges = workdir / "explicit.tsv"
    assert main(["extract", "--src", str(CORPUS), "--out", str(edges),
                 "--no-implicit"]) == 0
    capsys.readouterr()
    code, doc = run_json(capsys, ["stats", str(edges)])
    assert code == 0 and doc["stats"]["m"] == 18


def test_direction_override(workdir, capsys):
    edges = workdir / "deps.tsv"
    code, doc = run_json(capsys, ["stats", str(edges), "--undirected"])
    assert code == 0 and doc["stats"]["directed"] is False


def test_mixing_with_profiles(workdir, clique_files, capsys):
    edge_path, _ = clique_files
    prefix = str(workdir / "mix")
    code, doc = run_json(capsys, ["mixing", str(edge_path),
                                  "--profiles", prefix, "--no-fit"])
    assert code == 0
    # a disjoint union of equal cliques is perfectly assortative but
    # degree-constant, so the coefficient is undefined
    assert doc["mixing"]["r"] is None
    assert doc["mixing"]["fit"] is None
    written = list(workdir.glob("mix_profile_*.csv"))
    assert written, "expected neighbor-connectivity CSVs"
    head = written[0].read_text().splitlines()[0]
    assert head.split(",")[0] == "k"


def test_clustering_json(workdir, clique_files, capsys):
    edge_path, _ = clique_files
    code, doc = run_json(capsys, ["clustering", str(edge_path)])
    assert code == 0
    assert doc["clustering"]["mean_c"] == pytest.approx(1.0)
    assert doc["clustering"]["mean_d"] == pytest.approx(1.0)


def test_groups_roundtrip_groupmix_predict(workdir, clique_files, capsys):
    edge_path, label_path = clique_files
    groups_path = workdir / "groups.json"
    assert main(["groups", str(edge_path), "--samples", "40", "--restarts",
                 "12", "--seed", "7", "--out", str(groups_path)]) == 0
    capsys.readouterr()
    doc = json.loads(groups_path.read_text())
    assert len(doc["groups"]) >= 3
    assert all(g["kind"] == "community" for g in doc["groups"])
    assert doc["manifest"]["master_seed"] == 7

    code, mixdoc = run_json(
        capsys, ["groupmix", str(edge_path), str(groups_path)])
    assert code == 0
    assert "r_tilde" in mixdoc["groupmix"]
    assert mixdoc["groupmix"]["n_groups"] >= 3

    code, pdoc = run_json(
        capsys, ["predict", str(edge_path), str(groups_path),
                 "--labels", str(label_path), "--label-key", "block",
                 "--runs", "5", "--strategy", "groups"])
    assert code == 0
    assert pdoc["prediction"]["strategies"]["groups"]["accuracy"] == pytest.approx(1.0)
    assert pdoc["prediction"]["strategies"]["groups"]["majority_accuracy"] < 1.0


def test_predict_all_strategies(workdir, clique_files, capsys):
    edge_path, label_path = clique_files
    groups_path = workdir / "groups.json"
    code, pdoc = run_json(
        capsys, ["predict", str(edge_path), str(groups_path),
                 "--labels", str(label_path), "--label-key", "block",
                 "--runs", "3", "--strategy", "all"])
    assert code == 0
    assert set(pdoc["prediction"]["strategies"]) == {
        "neighbors", "groups", "network", "majority", "random"}


def test_report_deterministic(workdir, clique_files, capsys):
    edge_path, label_path = clique_files
    args = ["report", str(edge_path), "--samples", "15", "--restarts", "6",
            "--seed", "11", "--runs", "5", "--labels", str(label_path),
            "--label-key", "block"]
    out_a, out_b = workdir / "rep_a.json", workdir / "rep_b.json"
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    capsys.readouterr()

    def normalize(path):
        doc = json.loads(path.read_text())
        doc["manifest"].pop("started")
        doc["manifest"].pop("finished")
        doc["groups"].pop("elapsed_seconds")
        return doc

    assert normalize(out_a) == normalize(out_b)


def test_seed_random_changes_manifest(workdir, capsys):
    edges = workdir / "tiny.tsv"
    save_edge_list(from_links([(0, 1), (1, 2), (2, 3)], 4, directed=False), edges)
    seeds = []
    for _ in range(2):
        code, doc = run_json(capsys, ["groups", str(edges), "--samples", "5",
                                      "--restarts", "2", "--seed", "random"])
        assert code == 0
        seeds.append(doc["manifest"]["master_seed"])
    assert seeds[0] != seeds[1]


def test_usage_errors_exit_1(workdir, capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["groups"]) == 1  # missing network positional
    assert main(["stats", str(workdir / "deps.tsv"), "--bogus-flag"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_data_errors_exit_2(workdir, capsys, tmp_path):
    assert main(["stats", str(tmp_path / "missing.tsv")]) == 2
    bad = tmp_path / "bad.tsv"
    bad.write_text("# n=2 m=1 directed=false\nonly_one_field\n")
    assert main(["stats", str(bad)]) == 2
    assert main(["groups", str(workdir / "deps.tsv"), "--seed", "notanumber"]) == 2
    err = capsys.readouterr().err
    assert "swnet:" in err


def test_predict_bad_label_key_exit_2(workdir, clique_files, capsys):
    edge_path, label_path = clique_files
    groups_path = workdir / "groups.json"
    assert main(["predict", str(edge_path), str(groups_path),
                 "--labels", str(label_path), "--label-key", "nope",
                 "--runs", "2"]) == 2
    assert "nope" in capsys.readouterr().err


def test_version_and_module_entry(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("swnet ")
    proc = subprocess.run([sys.executable, "-m", "swnet", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("swnet ")
