import pytest

import twotier


def test_version():
    assert twotier.__version__


def test_weighted_degree():
    assert twotier.weighted_degree(4, 9) == 6
    assert twotier.weighted_degree(0, 0) == 0


def test_wks_tailed_triangle():
    edges = [(0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 3, 1), (1, 4, 1), (2, 5, 1)]
    shells = twotier.wks_shells(edges, nodes=[6])
    assert shells[6] == 1
    assert shells[0] == shells[1] == shells[2]
    assert shells[0] > shells[3]


def test_two_cliques():
    edges = []
    for base in (0, 4):
        edges += [(base + i, base + j, 1) for i in range(4) for j in range(i + 1, 4)]
    edges.append((0, 4, 1))
    result = twotier.detect(edges, seed=1)
    labels = result["communities"]
    assert len(set(labels.values())) == 2
    assert labels[0] == labels[3] != labels[4]
    assert result["modularity"] == pytest.approx(twotier.modularity(edges, labels))

    disjoint = [e for e in edges if e != (0, 4, 1)]
    assert twotier.modularity(disjoint, {i: i // 4 for i in range(8)}) == pytest.approx(0.5, abs=1e-12)


def test_betweenness_and_density():
    star = twotier.betweenness(4, [(0, 1), (0, 2), (0, 3)])
    assert star == [3.0, 0.0, 0.0, 0.0]
    assert twotier.betweenness(4, [(0, 1), (0, 2), (0, 3)], normalized=True)[0] == 1.0
    assert twotier.density(5, 2) == pytest.approx(0.2)
    assert twotier.density(1, 0) == 0.0


def test_classify_events():
    events = twotier.classify_events([[[1, 2, 3, 4]], [[1, 2, 3, 4, 5, 6]]])
    assert [(e["frame"], e["kind"], e["attribute"]) for e in events] == [(0, "Form", "V"), (1, "Grow", "S")]
    assert events[1]["predecessors"] == [(0, 0)]


def test_pipeline(tmp_path):
    log = tmp_path / "log.csv"
    assert twotier.generate_log(log, preset="small", seed=3) > 0
    rows = twotier.run_pipeline({"input": str(log), "x": [10, 20], "out_dir": str(tmp_path / "out")})
    metrics = {(r["x"], r["split"], r["metric"]): r["value"] for r in rows}
    assert metrics[("", "", "members")] > 0
    assert ("10", "all", "bm_members") in metrics
    assert (tmp_path / "out" / "manifest.json").exists()


def test_errors():
    with pytest.raises(twotier.ConfigError):
        twotier.run_pipeline({"preset": "small", "x": 0})
    with pytest.raises(twotier.Error):
        twotier.generate_log("/nonexistent/dir/log.csv")
    assert issubclass(twotier.ParseError, twotier.Error)
