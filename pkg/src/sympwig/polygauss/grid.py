"""Grid evaluation and negativity search for PolyGauss functions."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import BudgetExceeded

MAX_GRID_POINTS = 10**7
_CHUNK = 200_000


@dataclass(frozen=True)
class GridAxes:
    """Per-axis ``(min, max, count)`` of a rectangular grid."""

    lows: np.ndarray
    highs: np.ndarray
    count: int

    def axis(self, i):
        return np.linspace(self.lows[i], self.highs[i], self.count)

    def points(self):
        """All grid points in row-major axis order, shape ``(count**d, d)``."""
        axes = [self.axis(i) for i in range(len(self.lows))]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def default_box(f, box_sigmas, per_axis):
    """Box of half-width ``box_sigmas`` times the largest shape scale,
    widened to contain every term center."""
    if per_axis < 8:
        raise ValueError("per_axis must be at least 8")
    if float(per_axis) ** f.dim > MAX_GRID_POINTS:
        raise BudgetExceeded(f"{per_axis}^{f.dim} grid points exceed {MAX_GRID_POINTS:g}")
    centers = np.array([t.center for t in f.terms])
    mid = centers.mean(axis=0)
    half = box_sigmas * f.shape_scale() + np.max(np.abs(centers - mid), axis=0)
    return GridAxes(mid - half, mid + half, int(per_axis))


def grid_values(f, axes):
    pts = axes.points()
    values = np.concatenate([f(pts[i:i + _CHUNK]) for i in range(0, len(pts), _CHUNK)])
    return pts, values


def grid_min(f, box_sigmas=4.0, per_axis=24, refine=3):
    """Smallest value of ``f`` over a box, by grid scan plus local refinement.

    The best ``refine`` grid points and every term center seed a
    Nelder-Mead descent; the lowest value found is returned with its
    location.  Term centers are included because a narrow negative dip can
    fall between grid nodes when the box is wide.

    Returns:
        tuple[float, array]: minimum value and its argument
    """
    axes = default_box(f, box_sigmas, per_axis)
    pts, values = grid_values(f, axes)
    order = np.argsort(values)[:refine]
    best_val, best_pt = float(values[order[0]]), pts[order[0]]
    seeds = [pts[i] for i in order] + [np.asarray(t.center, float) for t in f.terms]
    # the descent stays inside the box, where the result is meaningful
    bounds = list(zip(axes.lows, axes.highs))
    for seed in seeds:
        res = minimize(
            lambda z: float(f(z)),
            seed,
            method="Nelder-Mead",
            bounds=bounds,
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000 * f.dim},
        )
        if res.fun < best_val:
            best_val, best_pt = float(res.fun), res.x
    return best_val, np.asarray(best_pt)
