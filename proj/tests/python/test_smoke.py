import math

import numpy as np
import pytest

import slapknn


def test_three_from_two_scores():
    c = slapknn.construct("three_from_two")
    r = slapknn.classify(c.set, 2, [0.5, 0.0])
    assert r.predicted == 0
    assert r.scores == pytest.approx([1.2, 0.96, 0.24], abs=1e-12)
    hit = slapknn.classify(c.set, 2, [3.0, 0.0])
    assert hit.exact_hit and math.isinf(hit.confidence)


def test_crossings_and_labels():
    c = slapknn.construct("n_from_two", n=4)
    fractions = [f for f, _, _ in slapknn.find_crossings(c.set, 2, [0.0, 0.0], [4.0, 0.0])]
    assert fractions == pytest.approx([0.25, 0.5, 0.75], abs=1e-9)
    assert slapknn.n_from_two_label_fractions(4) == [(6, 14), (5, 14), (3, 14), (0, 14)]


def test_raster_arrays():
    c = slapknn.construct("polygon_pairs", m=5)
    grid = slapknn.rasterize(c.set, 2, width=200, height=150)
    assert grid["classes"].shape == (150, 200)
    assert len(np.unique(grid["classes"])) == 10
    risk = slapknn.risk_map(c.set, 2, width=64, height=64, mode="log")
    assert risk.min() >= 0.0 and risk.max() <= 1.0


def test_batch_matches_single():
    c = slapknn.construct("star_pairs", m=4)
    pts = np.random.default_rng(0).uniform(-1.5, 1.5, size=(500, 2))
    predicted, _ = slapknn.classify_batch(c.set, 2, pts, threads=3)
    assert [slapknn.classify(c.set, 2, list(p)).predicted for p in pts] == list(predicted)


def test_json_round_trip_and_errors(tmp_path):
    c = slapknn.construct("star_pairs", m=3)
    path = tmp_path / "s.json"
    c.set.save(str(path))
    back = slapknn.PrototypeSet.load(str(path))
    assert len(back) == 3 and back.num_classes == 5
    with pytest.raises(ValueError):
        slapknn.construct("hexagon")
    with pytest.raises(ValueError):
        slapknn.classify(c.set, 9, [0.0, 0.0])


def test_verify_report():
    report = slapknn.verify(slapknn.construct("three_from_two"), trials=5)
    assert report["pass"]
    assert any(ch["name"].startswith("boundary") for ch in report["checks"])
