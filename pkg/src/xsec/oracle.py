"""Reference volumes for sections and a small convex-polygon toolkit.

A section ``diag(a) B_1^n ∩ H`` of a ``k``-dimensional subspace spanned by
rows with columns ``v_i`` is the image of the body::

    K = {y in R^k : sum_i |<y, v_i>| / a_i <= 1}

under ``y -> (<y, v_i>)_i``, which scales k-volume by ``sqrt(det(sum v_i v_i^T))``.
For ``k = 1`` ``K`` is a segment, for ``k = 2`` a polygon built by halfplane
clipping, and for larger ``k`` the volume is estimated by hit-or-miss.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import VolumeEstimate
from .numkit import cholesky_logdet, min_eigenvalue
from .section_model import as_dilation, dim_profile
from .streams import MCConfig, run_batches, sample_uniform

__all__ = [
    "SectionBody",
    "full_volume",
    "volume_k1",
    "volume_k2",
    "volume_mc",
    "oracle_volume",
    "section_polygon",
    "clip_polygon",
    "polygon_area",
    "convex_hull",
    "enclosing_radius",
]

MAX_K2_DIM = 24
CHUNK_BITS = 15


@dataclass(frozen=True, eq=False)
class SectionBody:
    """``{y : sum_i |<y, v_i>| / a_i <= 1}`` for a ``dim`` profile."""

    profile: object
    a: np.ndarray

    def __post_init__(self):
        if self.profile.mode != "dim":
            raise ValueError("a section body needs a 'dim' profile (rows spanning H)")
        object.__setattr__(self, "a", as_dilation(self.a, self.profile.n))

    @classmethod
    def from_subspace(cls, s, a):
        return cls(dim_profile(s), a)

    @property
    def k(self):
        return self.profile.k

    def gauge(self, y):
        """``sum_i |<y, v_i>| / a_i`` for points ``y`` of shape (..., k)."""
        return np.abs(np.asarray(y) @ self.profile.matrix) @ (1.0 / self.a)

    def jacobian(self):
        """``sqrt(det(sum_i v_i v_i^T))``, the k-volume scaling of ``y -> V^T y``."""
        logdet, singular = cholesky_logdet(self.profile.outer_sum())
        if singular:
            raise ValueError("the v_i do not span R^k")
        return math.exp(0.5 * logdet)


def full_volume(a):
    """Volume ``2^n prod(a) / n!`` of ``diag(a) B_1^n``."""
    a = as_dilation(a)
    n = a.size
    return math.exp(n * math.log(2.0) + np.sum(np.log(a)) - math.lgamma(n + 1))


def volume_k1(body):
    if body.k != 1:
        raise ValueError("volume_k1 needs a one-dimensional section")
    v = body.profile.matrix[0]
    c = np.sum(np.abs(v) / body.a)
    if c == 0.0:
        raise ValueError("all v_i vanish")
    return float(2.0 * math.sqrt(np.sum(v * v)) / c)


def enclosing_radius(body):
    """Radius ``max(a) / sqrt(lambda_min(sum v_i v_i^T))`` of a ball containing K."""
    lam = min_eigenvalue(body.profile.outer_sum())
    if not lam > 0:
        raise ValueError("the v_i do not span R^k")
    return float(np.max(body.a) / math.sqrt(lam))


def polygon_area(p):
    """Shoelace area of a polygon given as an ``(m, 2)`` vertex array."""
    p = np.asarray(p, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) / 2)


def clip_polygon(p, normal, offset):
    """Intersection of a convex polygon with ``{y : <y, normal> <= offset}``.

    Vertices within a relative tolerance of the boundary count as inside,
    which makes clipping by the same halfplane twice a no-op.
    """
    p = np.asarray(p, dtype=float).reshape(-1, 2)
    if len(p) == 0:
        return p
    normal = np.asarray(normal, dtype=float)
    d = p @ normal - offset
    tol = 1e-12 * (abs(offset) + np.linalg.norm(normal) * np.abs(p).max())
    inside = d <= tol
    if inside.all():
        return p.copy()
    if not inside.any():
        return np.empty((0, 2))
    out = []
    m = len(p)
    for i in range(m):
        j = (i + 1) % m
        if inside[i]:
            out.append(p[i])
        if inside[i] != inside[j]:
            s = d[i] / (d[i] - d[j])
            out.append(p[i] + s * (p[j] - p[i]))
    out = np.array(out)
    # drop consecutive duplicates created when the boundary passes through a vertex
    keep = np.linalg.norm(out - np.roll(out, -1, axis=0), axis=1) > 1e-12 * (1 + np.abs(out).max())
    out = out[keep]
    if len(out) < 3:
        return np.empty((0, 2))
    return out


def convex_hull(points):
    """Counterclockwise hull vertices (Andrew's monotone chain); collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts

    def half(seq):
        h = []
        for q in seq:
            while len(h) >= 2:
                (x1, y1), (x2, y2) = h[-2], h[-1]
                if (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1) > 0:
                    break
                h.pop()
            h.append(q)
        return h

    pts = [tuple(q) for q in pts]
    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _sign_pattern_normals(w):
    """Hull of ``{sum_i eps_i w_i}`` over sign patterns with ``eps_1 = +1`` and their negatives."""
    n = len(w)
    rest = w[1:]
    total = n - 1
    hull = np.empty((0, 2))
    chunk = 1 << min(total, CHUNK_BITS)
    for start in range(0, 1 << total, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        bits = (idx[:, None] >> np.arange(total)) & 1
        eps = 1.0 - 2.0 * bits
        normals = w[0] + eps @ rest
        hull = convex_hull(np.concatenate([hull, normals, -normals]))
    return hull


def section_polygon(body):
    """The polygon ``K`` of a two-dimensional section body, counterclockwise."""
    if body.k != 2:
        raise ValueError("section_polygon needs a two-dimensional section")
    if body.profile.n > MAX_K2_DIM:
        raise ValueError(f"exact k=2 oracle enumerates 2^(n-1) sign patterns; n must be <= {MAX_K2_DIM}")
    R = enclosing_radius(body)
    w = body.profile.matrix.T / body.a[:, None]
    # only normals on the hull of all sign patterns can be facets of K
    normals = _sign_pattern_normals(w)
    poly = 2.0 * R * np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    for nrm in normals:
        poly = clip_polygon(poly, nrm, 1.0)
    return poly


def volume_k2(body):
    return polygon_area(section_polygon(body)) * body.jacobian()


def volume_mc(body, cfg=None):
    """Hit-or-miss estimate: uniform points in ``[-R, R]^k`` tested against the gauge."""
    cfg = cfg or MCConfig()
    R = enclosing_radius(body)
    k, m = body.k, cfg.batch_size
    V, inv_a = body.profile.matrix, 1.0 / body.a

    def batch(stream, b):
        y = R * (2.0 * sample_uniform(stream, (m, k)) - 1.0)
        return int(np.count_nonzero(np.abs(y @ V) @ inv_a <= 1.0))

    hits = sum(run_batches(cfg, batch))
    p = hits / cfg.samples
    scale = (2.0 * R) ** k * body.jacobian()
    return VolumeEstimate(
        value=scale * p,
        stderr=scale * math.sqrt(p * (1.0 - p) / cfg.samples),
        samples=cfg.samples,
        method="oracle_mc",
        seed=cfg.seed,
    )


def oracle_volume(s, a, cfg=None):
    """Best available reference volume for subspace ``s``, dispatched on its dimension."""
    a = as_dilation(a, s.n)
    if s.dim_H == s.n:
        return VolumeEstimate(full_volume(a), 0.0, 0, "closed_form")
    body = SectionBody.from_subspace(s, a)
    if body.k == 1:
        return VolumeEstimate(volume_k1(body), 0.0, 0, "oracle_k1")
    if body.k == 2:
        return VolumeEstimate(volume_k2(body), 0.0, 0, "oracle_k2")
    return volume_mc(body, cfg)
