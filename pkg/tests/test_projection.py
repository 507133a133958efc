import re

import numpy as np
import pytest

from dissom import Embedding, MapTopology, ValidationError, build_matrix, classical_scaling, emit_scatter_svg, train
from dissom.projection import embedding_csv, palette
from dissom.synth import geo_intervals

import oracles


def pairwise(coords):
    return np.array(oracles.pairwise_euclidean(np.asarray(coords).tolist()))


def test_collinear_points():
    D2 = np.array([[0.0, 1, 4], [1, 0, 1], [4, 1, 0]])
    emb = classical_scaling(D2)
    np.testing.assert_allclose(pairwise(emb.coords), np.sqrt(D2), atol=1e-9)
    assert emb.eigenvalues[1] == pytest.approx(0.0, abs=1e-12)
    assert emb.degenerate
    assert np.all(emb.coords[:, 1] == 0)


def test_all_zero_matrix():
    emb = classical_scaling(np.zeros((5, 5)))
    assert np.all(emb.coords == 0)


def test_unit_square():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    D2 = ((pts[:, None] - pts[None]) ** 2).sum(axis=2)
    emb = classical_scaling(D2)
    np.testing.assert_allclose(pairwise(emb.coords), pairwise(pts), rtol=1e-6, atol=1e-12)
    assert not emb.degenerate and emb.negative_mass == pytest.approx(0.0, abs=1e-12)


def test_too_few_items():
    with pytest.raises(ValidationError):
        classical_scaling(np.zeros((2, 2)))


def test_centered_and_relabel_invariant():
    ds = geo_intervals(40, seed=5)
    M = build_matrix(ds, "hausdorff_l2")
    emb = classical_scaling(M)
    np.testing.assert_allclose(emb.coords.mean(axis=0), 0, atol=1e-9)
    assert 0 <= emb.negative_mass < 1
    perm = np.random.default_rng(0).permutation(40)
    back = classical_scaling(M.values[np.ix_(perm, perm)]).coords[np.argsort(perm)]
    for k in range(2):
        col, other = emb.coords[:, k], back[:, k]
        sign = 1.0 if np.dot(col, other) >= 0 else -1.0
        np.testing.assert_allclose(sign * other, col, atol=1e-8 * np.abs(col).max())


def test_palette_distinct():
    colors = palette(30)
    assert len(set(colors)) == 30
    assert all(re.fullmatch(r"#[0-9a-f]{6}", c) for c in colors)


def count(svg, tag):
    return len(re.findall(rf"<{tag}\b", svg))


def test_single_point_svg():
    svg = emit_scatter_svg(Embedding(np.zeros((1, 2)), np.zeros(2), 0.0), [0], np.array([[0]]), MapTopology(1, 1))
    assert count(svg, "circle") == 1 and count(svg, "line") == 0


def test_two_neuron_svg():
    emb = Embedding(np.array([[0.0, 0], [1, 1], [2, 0]]), np.ones(2), 0.0)
    svg = emit_scatter_svg(emb, [0, 1, 1], np.array([[0], [2]]), MapTopology(2, 1))
    assert count(svg, "circle") == 3 and count(svg, "line") == 1
    assert svg.count('stroke="#000000"') == 2


def test_full_map_svg_deterministic():
    ds = geo_intervals(80, seed=1)
    M = build_matrix(ds, "hausdorff_l2")
    tm = train(M, MapTopology(10, 3), seed=2)
    emb = classical_scaling(M)
    svg = emit_scatter_svg(emb, tm.winners, tm.referents, tm.topology, labels=ds.labels)
    assert count(svg, "circle") == 80
    assert count(svg, "line") == 47
    assert svg == emit_scatter_svg(classical_scaling(M), tm.winners, tm.referents, tm.topology, labels=ds.labels)
    plain = emit_scatter_svg(emb)
    assert count(plain, "circle") == 80 and count(plain, "line") == 0
    assert 'fill="#888888"' in plain
    lines = embedding_csv(emb, ds.labels, tm.winners).splitlines()
    assert lines[0] == "label,x,y,winner" and len(lines) == 81


def test_colored_plot_needs_map():
    emb = Embedding(np.zeros((3, 2)), np.zeros(2), 0.0)
    with pytest.raises(ValidationError):
        emit_scatter_svg(emb, [0, 0, 0])
