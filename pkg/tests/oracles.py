"""Independent reference values, computed without the package's code paths."""
import itertools
import math

import numpy as np


def hexagon_area_by_vertices():
    """Area of B_1^3 ∩ {x1+x2+x3=0}: hull of the edge midpoints (e_i - e_j)/2."""
    pts = [0.5 * (np.eye(3)[i] - np.eye(3)[j]) for i, j in itertools.permutations(range(3), 2)]
    e1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
    e2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6)
    xy = np.array([[p @ e1, p @ e2] for p in pts])
    order = np.argsort(np.arctan2(xy[:, 1], xy[:, 0]))
    x, y = xy[order].T
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def diagonal_line_codim_closed_form():
    """2/sqrt(pi) * E[((Y1+Y2)/2)^(-1/2)] with Y1+Y2 ~ Gamma(2): E[G^(-1/2)] = Gamma(3/2)/Gamma(2)."""
    return 2 / math.sqrt(math.pi) * math.sqrt(2) * math.gamma(1.5) / math.gamma(2.0)


def counterexample_area(t, grid=2_000_001):
    """|diag(1, e^t)K ∩ K| by integrating the vertical chord length over x.

    K = {|x| <= 1, |y - 1.5x| <= 0.5}; the chord at x is an interval
    intersection, piecewise linear in x, integrated by the trapezoid rule.
    """
    x = np.linspace(-1.0, 1.0, grid)
    s = math.exp(t)
    lo = np.maximum(1.5 * x - 0.5, s * (1.5 * x - 0.5))
    hi = np.minimum(1.5 * x + 0.5, s * (1.5 * x + 0.5))
    return np.trapezoid(np.clip(hi - lo, 0.0, None), x)
