import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swnet.clustering import (
    clustering_c,
    clustering_d,
    clustering_mixing,
    clustering_report,
    degree_clustering_profile,
    neighbor_clustering_profile,
    omega_counts,
    p_baseline,
    triangle_counts,
)
from swnet.graph import from_links
from swnet.mixing import edge_end_pearson, link_end_values

from conftest import pearson_oracle, random_net, star_graph, triangles_brute


def test_triangles_match_brute_force():
    for seed in range(6):
        net = random_net(18, 45, seed=seed)
        assert (triangle_counts(net) == triangles_brute(net)).all()


def test_fixture_values(triangle_pendant):
    # node 3 is the pendant; node 2 touches the triangle and the pendant
    t = triangle_counts(triangle_pendant)
    assert t.tolist() == [1, 1, 1, 0]
    omega = omega_counts(triangle_pendant)
    c = clustering_c(triangle_pendant)
    d = clustering_d(triangle_pendant)
    # node 2: k=3, one triangle among C(3,2)=3 possible -> c=1/3
    assert c[2] == pytest.approx(1 / 3)
    # its neighbors can host at most one link given their degrees -> d=1
    assert omega[2] == 1
    assert d[2] == 1.0
    # triangle-only nodes: c = d = 1
    assert c[0] == c[1] == 1.0
    assert d[0] == d[1] == 1.0
    # pendant: degree 1 -> both zero
    assert c[3] == 0.0 and d[3] == 0.0


def test_star_hub_omega_zero():
    net = star_graph(6)
    omega = omega_counts(net)
    d = clustering_d(net)
    assert omega[0] == 0
    assert d[0] == 0.0
    assert (d == 0).all()


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_d_dominates_c_and_is_bounded(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 25))
    net = random_net(n, int(rng.integers(n, 4 * n)), seed=seed)
    c = clustering_c(net)
    d = clustering_d(net)
    t = triangle_counts(net)
    omega = omega_counts(net)
    assert (t <= omega).all()
    assert (d <= 1.0 + 1e-12).all()
    assert (d >= c - 1e-12).all()
    assert (c >= 0).all() and (d >= 0).all()


def test_p_baseline():
    net = random_net(20, 38, seed=2)
    assert p_baseline(net) == pytest.approx((2 * 38 / 20) / 19)


def test_report_shares():
    net = from_links([(0, 1), (0, 2), (1, 2), (2, 3)], 4, directed=False)
    rep = clustering_report(net)
    d = clustering_d(net)
    assert rep.share_d_eq_1 == pytest.approx(np.mean(d == 1.0))
    assert rep.share_d_lt_p == pytest.approx(np.mean(d < rep.p_baseline))
    assert rep.mean_c == pytest.approx(clustering_c(net).mean())
    assert rep.mean_d == pytest.approx(d.mean())


def test_clustering_mixing_matches_oracle():
    for seed in range(5):
        net = random_net(25, 60, seed=seed)
        for which in ("c", "d"):
            vals = (clustering_c if which == "c" else clustering_d)(net)
            xs, ys = link_end_values(net, vals, vals, both_orientations=True)
            want = pearson_oracle(xs, ys)
            got = clustering_mixing(net, which)
            if want is None:
                assert got is None
            else:
                assert got == pytest.approx(want, abs=1e-10)


def test_neighbor_profile_fixture(triangle_pendant):
    # node 3's single neighbor is node 2 with d = 1; node 2's neighbors have
    # d values {1, 1, 0} -> mean 2/3
    prof = neighbor_clustering_profile(triangle_pendant, which="d")
    d = clustering_d(triangle_pendant)
    rows = {x: m for x, m, _ in prof.rows()}
    assert rows[d[3]] is not None
    und = triangle_pendant.undirected_view()
    mean_for_node2 = np.mean([d[v] for v in und.neighbors(2)])
    assert mean_for_node2 == pytest.approx(2 / 3)


def test_degree_profile_counts_cover_all_nodes():
    net = random_net(30, 70, seed=8)
    prof = degree_clustering_profile(net, which="c")
    assert int(prof.counts.sum()) == net.n
    c = clustering_c(net)
    deg = net.degrees("total")
    for k, mean, count in prof.rows():
        sel = c[deg == k]
        assert count == sel.size
        assert mean == pytest.approx(sel.mean())


def test_directed_degree_axis():
    net = random_net(20, 50, seed=3, directed=True)
    prof = degree_clustering_profile(net, which="d", degree_kind="in")
    assert prof.x_kind == "k_in"
    assert int(prof.counts.sum()) == net.n
