"""Two-dimensional classical scaling of a dissimilarity matrix and SVG plots.

The embedding double-centers the squared-dissimilarity matrix,
``B = -1/2 J D2 J`` with ``J = I - 11'/n``, and keeps the two leading
eigenvectors scaled by the square root of their eigenvalues. Non-Euclidean
dissimilarities (Hausdorff matrices usually are) give negative eigenvalues;
they are dropped and their share reported as ``negative_mass``.
"""
from __future__ import annotations

import colorsys
import csv
import io
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import ValidationError
from .topology import MapTopology


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray
    eigenvalues: np.ndarray
    negative_mass: float
    degenerate: bool = False


def classical_scaling(matrix, dims: int = 2) -> Embedding:
    """Embed items in ``dims`` dimensions from their squared dissimilarities.

    ``matrix`` is a :class:`~dissom.dissimilarity.DissimilarityMatrix` or a
    square array whose entries are already squared. A retained eigenvalue
    that is not positive yields an all-zero coordinate column and sets
    ``degenerate``.
    """
    D2 = matrix.values if hasattr(matrix, "values") else np.asarray(matrix, dtype=float)
    n = D2.shape[0]
    if D2.ndim != 2 or D2.shape[1] != n:
        raise ValidationError(f"matrix must be square, got shape {D2.shape}")
    if n < 3:
        raise ValidationError(f"classical scaling needs at least 3 items, got {n}")
    row_mean = D2.mean(axis=1)
    B = -0.5 * (D2 - row_mean[:, None] - row_mean[None, :] + D2.mean())
    B = (B + B.T) / 2
    evals, evecs = np.linalg.eigh(B)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]

    # Fix each eigenvector's sign so the embedding is reproducible.
    for k in range(dims):
        pivot = np.argmax(np.abs(evecs[:, k]))
        if evecs[pivot, k] < 0:
            evecs[:, k] = -evecs[:, k]

    top = evals[:dims]
    scale = np.sqrt(np.clip(top, 0, None))
    # Eigenvalues at round-off level of the spectrum count as zero.
    tiny = 1e-12 * max(np.abs(evals).max(), 1e-300)
    scale[top <= tiny] = 0.0
    coords = evecs[:, :dims] * scale
    coords -= coords.mean(axis=0)
    abs_total = np.abs(evals).sum()
    negative_mass = float(np.abs(evals[evals < -tiny]).sum() / abs_total) if abs_total > 0 else 0.0
    return Embedding(coords, top.copy(), negative_mass, bool(np.any(top <= tiny)))


def palette(k: int) -> list[str]:
    """``k`` distinguishable colors as hex strings (golden-angle hue steps)."""
    colors = []
    for c in range(k):
        hue = (c * 0.381966) % 1.0
        light = (0.42, 0.58, 0.32)[c % 3]
        sat = (0.85, 0.65)[(c // 3) % 2]
        r, g, b = colorsys.hls_to_rgb(hue, light, sat)
        colors.append("#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255)))
    return colors


def emit_scatter_svg(
    embedding: Embedding,
    winners: Sequence[int] | None = None,
    referents: np.ndarray | None = None,
    topology: MapTopology | None = None,
    sink: TextIO | None = None,
    labels: Sequence[str] | None = None,
    width: int = 800,
    height: int = 600,
) -> str | None:
    """Write a scatter of the embedded items as an SVG 1.1 document.

    Without ``winners`` every item is drawn as a gray dot. With a trained
    map, items are colored by winning neuron, referent items are drawn
    larger with a dark ring, and the positions of grid-adjacent neurons are
    joined by line segments.
    """
    xy = np.asarray(embedding.coords, dtype=float)[:, :2]
    n = xy.shape[0]
    margin = 30.0
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    s = min(width, height) - 2 * margin
    s = s / span if span > 0 else 0.0

    def px(p):
        x = margin + (p[0] - lo[0]) * s
        y = height - margin - (p[1] - lo[1]) * s
        return f"{x:.3f}", f"{y:.3f}"

    out = io.StringIO() if sink is None else sink
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
              f'height="{height}" viewBox="0 0 {width} {height}">\n')
    out.write(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n')

    ref_items: set[int] = set()
    if winners is not None:
        if referents is None or topology is None:
            raise ValidationError("a colored plot needs referents and the map topology")
        referents = np.atleast_2d(np.asarray(referents))
        ref_items = set(int(j) for j in referents.ravel())
        node = xy[referents].mean(axis=1)
        out.write('<g class="map" stroke="#555555" stroke-width="1">\n')
        for c, r in topology.edges():
            (x1, y1), (x2, y2) = px(node[c]), px(node[r])
            out.write(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>\n')
        out.write("</g>\n")
        colors = palette(topology.m)

    out.write('<g class="items">\n')
    for i in range(n):
        x, y = px(xy[i])
        title = f"<title>{_escape(labels[i])}</title>" if labels is not None else ""
        if winners is None:
            out.write(f'<circle cx="{x}" cy="{y}" r="3" fill="#888888">{title}</circle>\n')
        elif i in ref_items:
            out.write(f'<circle cx="{x}" cy="{y}" r="7" fill="{colors[int(winners[i])]}" '
                      f'stroke="#000000" stroke-width="2">{title}</circle>\n')
        else:
            out.write(f'<circle cx="{x}" cy="{y}" r="3" fill="{colors[int(winners[i])]}">{title}</circle>\n')
    out.write("</g>\n</svg>\n")
    if sink is None:
        return out.getvalue()
    return None


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def embedding_csv(embedding: Embedding, labels: Sequence[str], winners=None) -> str:
    """Sidecar table ``label,x,y,winner`` (winner empty when unknown)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["label", "x", "y", "winner"])
    for i, label in enumerate(labels):
        x, y = embedding.coords[i, :2]
        w.writerow([label, repr(float(x)), repr(float(y)), "" if winners is None else int(winners[i])])
    return out.getvalue()
