"""Figures and rasters of eigenstate sign patterns.

Two outputs: a physical-space vector figure (each chart cell drawn as the
mapped quadrilateral, boundary polylines overlaid) and a plain chart-space
PGM raster for quick diffing without an image stack.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from .geometry import physical_boundary
from .nodal import sample

_CMAP = ListedColormap(["#30588c", "#d9dee6", "#b5432e"])  # neg, zero, pos


def sign_figure(state, resolution=256, offset=(0.5, 0.5), figsize=(6.0, 6.0)):
    """Matplotlib figure of sign(psi) in physical coordinates.

    The chart grid is pushed through the coordinate map cell by cell, so
    curvilinear cells render as quadrilaterals; nodal lines appear as the
    colour boundaries."""
    grid = sample(state, resolution, offset)
    (ul, uh), (vl, vh) = state.chart.u_range, state.chart.v_range
    ue = np.linspace(ul, uh, resolution + 1)
    ve = np.linspace(vl, vh, resolution + 1)
    uu, vv = np.meshgrid(ue, ve, indexing="ij")
    xx, yy = state.chart.to_physical(uu, vv)

    fig, ax = plt.subplots(figsize=figsize)
    ax.pcolormesh(xx, yy, grid.signs, cmap=_CMAP, vmin=-1, vmax=1,
                  shading="flat", rasterized=False)
    for loop in physical_boundary(state.spec):
        ax.plot(loop[:, 0], loop[:, 1], color="black", linewidth=1.2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    m, n = state.qnums
    clazz = f" {state.symmetry}" if state.symmetry else ""
    ax.set_title(f"{state.spec.family.value}{clazz}  (m, n) = ({m}, {n})  "
                 f"k = {state.k:.6g}")
    fig.tight_layout()
    return fig


def save_sign_map(state, out_path, resolution=256, offset=(0.5, 0.5)):
    """Render the sign map to out_path; format follows the suffix (.svg
    default).  Returns the written path."""
    out_path = Path(out_path)
    if not out_path.suffix:
        out_path = out_path.with_suffix(".svg")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig = sign_figure(state, resolution, offset)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def save_pgm(state, out_path, resolution=256, offset=(0.5, 0.5)):
    """Chart-space sign raster as ASCII PGM (P2): 0 negative, 255 positive.

    Rows run from u_hi down to u_lo so the radial-like coordinate increases
    upward when viewed; columns follow v left to right."""
    grid = sample(state, resolution, offset)
    img = np.where(grid.signs > 0, 255, 0)[::-1, :]
    out_path = Path(out_path)
    if not out_path.suffix:
        out_path = out_path.with_suffix(".pgm")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"P2", f"{img.shape[1]} {img.shape[0]}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in img)
    out_path.write_text("\n".join(lines) + "\n")
    return out_path
