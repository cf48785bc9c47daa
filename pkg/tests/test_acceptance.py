"""End-to-end acceptance checks, one test per shipped guarantee.

Each test prints a single PASS/FAIL line (visible with -s / in failure
output) in addition to its assertions, so a verbose run reads as a
checklist.  Checks that need the public collaboration dataset skip with
an explanation when the file has not been fetched.
"""

import math
import sys
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from swnet.clustering import clustering_c, clustering_d, clustering_report
from swnet.graph import from_links
from swnet.groups import (
    ExtractionConfig,
    criterion_w,
    extract_all,
    group_summary,
    tabu_search_best_group,
)
from swnet.groupmix import group_mixing_report
from swnet.mixing import degree_mixing, fit_power_law, mixing_report, sample_power_law
from swnet.netbuild import build_network
from swnet.predict import PredictionConfig, evaluate

from conftest import (
    COLLAB_BLOCKED,
    cycle_graph,
    exhaustive_best_w,
    random_net,
    requires_collab,
    star_graph,
    two_cliques,
    w_link_scan,
)
from test_netbuild import EXPLICIT, FIXTURE, INHERITED_FULL, edge_names


def announce(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


# -- collaboration-network criteria (dataset-gated) ---------------------------


@requires_collab()
def test_criterion_1_collaboration_reproduction(collab_net):
    net = collab_net
    assert (net.n, net.m) == (1589, 2742)
    mix = mixing_report(net, with_profiles=False)
    clus = clustering_report(net)
    checks = {
        "r": (mix.r, 0.46, 0.02),
        "mean_c": (clus.mean_c, 0.64, 0.02),
        "mean_d": (clus.mean_d, 0.69, 0.02),
        "share_d_1": (clus.share_d_one, 0.61, 0.03),
        "share_d_lt_p": (clus.share_d_below_p, 0.28, 0.03),
        "r_c": (clus.r_c, 0.44, 0.03),
        "r_d": (clus.r_d, 0.68, 0.03),
    }
    ok = all(abs(got - want) <= tol for got, want, tol in checks.values())
    detail = ", ".join(f"{k}={got:.3f} (want {want}±{tol})"
                       for k, (got, want, tol) in checks.items())
    announce("1 collaboration reproduction", ok, detail)
    for key, (got, want, tol) in checks.items():
        assert abs(got - want) <= tol, f"{key}: {got:.4f} outside {want}±{tol}"


@requires_collab()
def test_criterion_2_collaboration_groups(collab_net):
    res = extract_all(collab_net, ExtractionConfig())
    summary = group_summary(res.groups, collab_net)
    n_groups = len(res.groups)
    communities = sum(g.kind == "community" for g in res.groups)
    mean_tau = float(np.mean([g.tau for g in res.groups]))
    ok = (120 <= n_groups <= 200 and mean_tau >= 0.85
          and communities >= 0.80 * n_groups
          and res.background_link_fraction <= 0.30)
    announce("2 collaboration group extraction", ok,
             f"groups={n_groups} (want 160±25%), mean_tau={mean_tau:.3f} (>=0.85), "
             f"community share={communities / max(n_groups, 1):.2f} (>=0.80), "
             f"background links={res.background_link_fraction:.2f} (<=0.30)")
    assert 120 <= n_groups <= 200
    assert mean_tau >= 0.85
    assert communities >= 0.80 * n_groups
    assert res.background_link_fraction <= 0.30
    assert summary.n_groups == n_groups


@requires_collab()
def test_criterion_3_collaboration_group_mixing(collab_net):
    res = extract_all(collab_net, ExtractionConfig())
    rep = group_mixing_report(res.groups, collab_net)
    ok = rep.r_tilde >= 0.70 and rep.r_d >= 0.85 and rep.r_c >= 0.65
    announce("3 collaboration group mixing", ok,
             f"r_tilde={rep.r_tilde:.3f} (>=0.70), r_d={rep.r_d:.3f} (>=0.85), "
             f"r_c={rep.r_c:.3f} (>=0.65)")
    assert rep.r_tilde >= 0.70
    assert rep.r_d >= 0.85
    assert rep.r_c >= 0.65


# -- search and criterion oracles ----------------------------------------------


def test_criterion_4_oracle_equivalence():
    hits = 0
    exact = 0
    pairs = 0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 9))
        m = int(rng.integers(n, min(2 * n, n * (n - 1) // 2) + 1))
        net = random_net(n, m, seed=seed)
        best_w, _, _ = exhaustive_best_w(net)
        got = tabu_search_best_group(net, ExtractionConfig(seed=seed))
        assert got.W <= best_w + 1e-12
        hits += abs(got.W - best_w) <= 1e-12
        und = net.undirected_view()
        links = [(int(a), int(b)) for a, b in und.edges]
        degrees = und.degrees("total")
        for _ in range(30):
            s = int(rng.integers(2, n + 1))
            t = int(rng.integers(1, n))
            S = rng.choice(n, size=s, replace=False).tolist()
            T = rng.choice(n, size=t, replace=False).tolist()
            pairs += 1
            exact += criterion_w(net, S, T) == w_link_scan(links, degrees, n, S, T)
    ok = hits >= 48 and exact == pairs
    announce("4 oracle equivalence", ok,
             f"tabu optimum {hits}/50 (need >=48), W bit-exact {exact}/{pairs}")
    assert hits >= 48
    assert exact == pairs


def test_criterion_5_invariants():
    datasets = {
        "fixture corpus": build_network(FIXTURE).network,
        "triangle+pendant": from_links([(0, 1), (0, 2), (1, 2), (2, 3)], 4,
                                       directed=False),
        "star": star_graph(10),
        "two cliques": two_cliques(4),
        "random sparse": random_net(60, 90, seed=3),
        "random dense": random_net(25, 150, seed=4),
        "random directed": random_net(40, 120, seed=5, directed=True),
    }
    from conftest import COLLAB_EDGES
    if COLLAB_EDGES.exists():
        from swnet.netio import load_network
        datasets["collaboration"], _ = load_network(COLLAB_EDGES, directed=False)

    problems = []
    for name, net in datasets.items():
        c = clustering_c(net)
        d = clustering_d(net)
        if not np.all(d >= c - 1e-12):
            problems.append(f"{name}: d < c somewhere")
        rep = mixing_report(net, with_profiles=False)
        coeffs = [rep.r, rep.r_in_in, rep.r_in_out, rep.r_out_in, rep.r_out_out]
        for val in coeffs:
            if val is not None and not -1 - 1e-12 <= val <= 1 + 1e-12:
                problems.append(f"{name}: coefficient {val} outside [-1, 1]")

    if degree_mixing(star_graph(10)) != pytest.approx(-1.0):
        problems.append("star graph r != -1")
    if degree_mixing(cycle_graph(12)) is not None:
        problems.append("regular graph r defined")

    rng = np.random.default_rng(99)
    for net in (random_net(30, 80, seed=6), two_cliques(5)):
        res = extract_all(net, ExtractionConfig(samples=25, restarts=8, seed=8))
        for g in res.groups:
            s_set, t_set = set(g.S), set(g.T)
            tau = len(s_set & t_set) / len(s_set | t_set)
            if g.tau != pytest.approx(tau):
                problems.append("tau mismatch")
            expected_kind = (
                "hub_spokes" if not s_set & t_set and len(t_set) == 1 else
                "module" if not s_set & t_set else
                "community" if s_set == t_set else
                "core_periphery" if s_set < t_set or t_set < s_set else
                "mixture")
            if g.kind != expected_kind:
                problems.append(f"kind {g.kind} != {expected_kind}")
            if not g.W <= 0.25 + 1e-12:
                problems.append("group W above 0.25")
        n = net.n
        for _ in range(200):
            S = rng.choice(n, size=int(rng.integers(2, n)), replace=False)
            T = rng.choice(n, size=int(rng.integers(1, n - 1)), replace=False)
            if not criterion_w(net, S, T) <= 0.25 + 1e-12:
                problems.append("sampled W above 0.25")

    announce("5 invariant suite", not problems,
             f"{len(datasets)} datasets, coefficients bounded, "
             f"star/regular edge cases, tau/kind/W checks"
             + (f"; problems: {problems}" if problems else ""))
    assert problems == []


def test_criterion_6_power_law_synthetic():
    good = 0
    gammas = []
    for run in range(20):
        rng = np.random.default_rng(6000 + run)
        degrees = sample_power_law(2.5, 1, 5000, rng)
        fit = fit_power_law(degrees, seed=run)
        gammas.append(fit.gamma)
        good += bool(fit.valid and 2.4 <= fit.gamma <= 2.6)
    ok = good >= 18
    announce("6 power-law fit (synthetic)", ok,
             f"{good}/20 runs valid with gamma in [2.4, 2.6] (need >=18); "
             f"mean gamma={np.mean(gammas):.3f}")
    assert good >= 18


@requires_collab()
def test_criterion_6_power_law_collaboration(collab_net):
    degrees = collab_net.undirected_view().degrees("total")
    fit = fit_power_law(degrees)
    ok = abs(fit.gamma - 2.85) <= 0.1
    announce("6 power-law fit (collaboration)", ok,
             f"gamma={fit.gamma:.3f} (want 2.85±0.1)")
    assert abs(fit.gamma - 2.85) <= 0.1


def test_criterion_7_parser_oracle():
    res = build_network(FIXTURE)
    explicit_ok = edge_names(res.explicit_network) == set(EXPLICIT)
    closure_ok = edge_names(res.network) == set(EXPLICIT) | INHERITED_FULL
    monotone_ok = res.total_links >= res.explicit_links
    ok = explicit_ok and closure_ok and monotone_ok
    announce("7 parser oracle", ok,
             f"explicit 18/18 exact={explicit_ok}, closure 26/26 exact={closure_ok}, "
             f"total>=explicit={monotone_ok}")
    assert explicit_ok and closure_ok and monotone_ok


def planted_cliques():
    links = []
    for b in range(4):
        base = b * 10
        links += [(base + i, base + j) for i in range(10) for j in range(i + 1, 10)]
    net = from_links(links, 40, directed=False)
    labels = [f"block{i // 10}" for i in range(40)]
    return net, labels


def test_criterion_8_prediction_baselines():
    net, labels = planted_cliques()
    res = extract_all(net, ExtractionConfig(samples=40, restarts=12, seed=7))
    assert len(res.groups) >= 3, "planted cliques not recovered"

    grouped = evaluate(net, res.groups, labels,
                       PredictionConfig(strategy="groups", runs=100, seed=2))
    pop_labels = [labels[int(i)] for i in grouped.node_ids]
    counts = Counter(pop_labels)
    expected_majority = max(counts.values()) / len(pop_labels)

    maj = evaluate(net, res.groups, labels,
                   PredictionConfig(strategy="majority", runs=100, seed=2))
    p = 1 / grouped.n_labels
    se = math.sqrt(p * (1 - p) / (100 * grouped.n_evaluated))
    random_dev = abs(grouped.random_accuracy - p)

    ok = (grouped.accuracy == 1.0
          and maj.accuracy == expected_majority
          and random_dev <= 3 * se)
    announce("8 prediction baselines", ok,
             f"group accuracy={grouped.accuracy:.3f} (want 1.0), "
             f"majority={maj.accuracy:.3f} (exact {expected_majority:.3f}), "
             f"random dev={random_dev:.4f} (<= 3 s.e. = {3 * se:.4f})")
    assert grouped.accuracy == 1.0
    assert maj.accuracy == expected_majority
    assert random_dev <= 3 * se


@pytest.mark.skip(reason="stretch check, not gating: needs the JUNG 2.0.1 "
                  "source tree, which is not bundled and cannot be downloaded "
                  "in this environment (no network access)")
def test_criterion_8_stretch_jung_prediction():
    pytest.fail("unreachable")


def _utility_corpus(root: Path):
    util = root / "util"
    util.mkdir(parents=True)
    for name in ("Log", "Config", "Strings"):
        (util / f"{name}.java").write_text(
            f"package app.util;\npublic class {name} {{ int state; }}\n"
        )
    for p in range(8):
        pkg = root / f"mod{p}"
        pkg.mkdir()
        (pkg / f"Service{p}.java").write_text(
            f"package app.mod{p};\nimport app.util.*;\n"
            f"public class Service{p} {{\n    Log log;\n    Config config;\n}}\n"
        )
        names = [f"Leaf{p}{c}" for c in range(4)]
        for c, name in enumerate(names):
            peer = names[(c + 1) % 4]
            (pkg / f"{name}.java").write_text(
                f"package app.mod{p};\nimport app.util.Strings;\n"
                f"public class {name} {{\n"
                f"    Service{p} service;\n    Strings fmt;\n    {peer} peer;\n}}\n"
            )


def test_criterion_9_software_mixing_signature(tmp_path):
    # shared utilities draw references from every module, so heavily
    # referenced classes sit next to barely referenced ones
    _utility_corpus(tmp_path)
    res = build_network(tmp_path)
    net = res.network
    r_in_in = degree_mixing(net, "in", "in")
    r_out_out = degree_mixing(net, "out", "out")
    ok = r_in_in < 0 and r_out_out > r_in_in
    announce("9 software mixing signature", ok,
             f"r_(in,in)={r_in_in:+.3f} (<0), r_(out,out)={r_out_out:+.3f} "
             f"(> r_(in,in))")
    assert r_in_in < 0
    assert r_out_out > r_in_in
    assert res.total_links >= res.explicit_links
