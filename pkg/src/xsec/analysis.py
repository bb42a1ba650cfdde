"""Numerical checks of log-concavity, mixed discriminants and log-det convexity.

Also reproduces a planar example where ``t -> log mu(diag(1, e^t) K)`` fails
to be concave for the uniform measure on a parallelogram ``K``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .estimators import contrast_stderr, logvol_path_batches
from .numkit import cholesky_logdet
from .oracle import clip_polygon, polygon_area
from .streams import AUX_KEY, MCConfig, substream

__all__ = [
    "ConcavityReport",
    "ConvexityResult",
    "mixed_discriminant",
    "det_expansion_check",
    "logdet_convexity_check",
    "logconcavity_scan",
    "classify_margin",
    "PARALLELOGRAM",
    "counterexample_curve",
    "counterexample_violation",
]

MAX_MD_ORDER = 12
MAX_TUPLES = 10**6
SIGMAS = 3.0
EXACT_TOL = 1e-10

# counterclockwise vertices of conv{(-1,-2), (-1,-1), (1,1), (1,2)}
PARALLELOGRAM = np.array([[-1.0, -2.0], [1.0, 1.0], [1.0, 2.0], [-1.0, -1.0]])
COUNTEREXAMPLE_TRIPLE = (0.0, 10.0, 20.0)


def mixed_discriminant(ms):
    """Mixed discriminant ``D(A_1, ..., A_k)`` of ``k`` symmetric ``k x k`` matrices.

    Computed by polarization,
    ``D = (1/k!) sum_{S} (-1)^(k-|S|) det(sum_{i in S} A_i)``,
    normalized so that ``D(A, ..., A) = det A`` and
    ``det(sum_i x_i A_i) = sum over ordered k-tuples (j_1..j_k) of D(A_j1, ..., A_jk) x_j1 ... x_jk``.
    """
    ms = [np.asarray(m, dtype=float) for m in ms]
    k = len(ms)
    if k == 0:
        raise ValueError("need at least one matrix")
    if k > MAX_MD_ORDER:
        raise ValueError(f"polarization enumerates 2^k subsets; k must be <= {MAX_MD_ORDER}")
    for m in ms:
        if m.shape != (k, k):
            raise ValueError(f"{k} matrices must each be {k}x{k}, got shape {m.shape}")
    total = 0.0
    for mask in range(1, 1 << k):
        members = [ms[i] for i in range(k) if mask >> i & 1]
        sign = -1.0 if (k - len(members)) % 2 else 1.0
        total += sign * np.linalg.det(sum(members))
    return total / math.factorial(k)


def det_expansion_check(ms, x):
    """Relative gap between ``det(sum x_i A_i)`` and its mixed-discriminant expansion.

    The gap is divided by the larger of ``sum |D(A_j1, ...) x_j1 ... x_jk|``
    over ordered tuples and the bound ``(sum |x_i| ||A_i||_2)^k`` on
    ``|det(sum x_i A_i)|``, so neither cancellation nor a singular sum (where
    both sides are rounding noise) inflates it.
    """
    ms = [np.asarray(m, dtype=float) for m in ms]
    x = np.asarray(x, dtype=float).ravel()
    n = len(ms)
    if n == 0 or x.size != n:
        raise ValueError("need one weight per matrix")
    k = ms[0].shape[0]
    if n**k > MAX_TUPLES:
        raise ValueError(f"n^k = {n**k} ordered tuples exceeds the limit {MAX_TUPLES}")
    direct = np.linalg.det(sum(xi * m for xi, m in zip(x, ms)))

    cache = {}
    expansion = 0.0
    scale = 0.0
    for tup in itertools.product(range(n), repeat=k):
        key = tuple(sorted(tup))
        if key not in cache:
            cache[key] = mixed_discriminant([ms[j] for j in key])
        term = cache[key] * np.prod(x[list(tup)])
        expansion += term
        scale += abs(term)
    bound = sum(abs(xi) * np.linalg.norm(m, 2) for xi, m in zip(x, ms)) ** k
    scale = max(scale, bound)
    if scale == 0.0:
        return abs(direct - expansion)
    return abs(direct - expansion) / scale


class ConvexityResult(NamedTuple):
    margin: float
    skipped: int


def logdet_convexity_check(vs, pairs=1000, seed=0, box=3.0):
    """Largest midpoint-convexity margin of ``t -> log det(sum e^{t_i} v_i v_i^T)``.

    Pairs ``(s, t)`` are uniform in ``[-box, box]^n``; the margin is
    ``g((s+t)/2) - (g(s) + g(t))/2``, which must be <= 0 for a convex ``g``.
    Pairs where any of the three matrices is numerically singular are
    skipped and counted.
    """
    V = np.asarray(vs, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    n, k = V.shape
    rng = np.random.default_rng(seed)
    s = rng.uniform(-box, box, size=(pairs, n))
    t = rng.uniform(-box, box, size=(pairs, n))
    pts = np.stack([s, 0.5 * (s + t), t])
    M = np.einsum("pqi,ij,il->pqjl", np.exp(pts), V, V)
    g, singular = cholesky_logdet(M)
    bad = singular.any(axis=0)
    with np.errstate(invalid="ignore"):
        margins = g[1] - 0.5 * (g[0] + g[2])
    if bad.all():
        raise ValueError("log-det undefined at every sampled point; do the v_i span R^k?")
    return ConvexityResult(float(margins[~bad].max()), int(bad.sum()))


def classify_margin(margin, stderr):
    """``violation`` below -3 stderr, ``consistent`` above +3 stderr, else ``inconclusive``.

    A margin that is zero up to rounding with zero spread (affine directions)
    counts as consistent.
    """
    if margin < -SIGMAS * stderr - EXACT_TOL:
        return "violation"
    if margin > SIGMAS * stderr or (stderr <= EXACT_TOL and margin >= -EXACT_TOL):
        return "consistent"
    return "inconclusive"


@dataclass
class ConcavityReport:
    triples: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    stderrs: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    @property
    def violations(self):
        return sum(v == "violation" for v in self.verdicts)

    def rows(self):
        for i, ((t0, tm, t1), m, se, v) in enumerate(zip(self.triples, self.margins, self.stderrs, self.verdicts)):
            yield {
                "index": i,
                "t0": [float(x) for x in t0],
                "t1": [float(x) for x in t1],
                "margin": m,
                "stderr": se,
                "verdict": v,
            }


def logconcavity_scan(s, triples=100, box=2.0, cfg=None, mode="codim", endpoints=None):
    """Midpoint test of log-concavity of ``t -> vol(diag(e^t) B_1^n ∩ H)``.

    Endpoint pairs are uniform in ``[-box, box]^n`` (drawn from an auxiliary
    stream of ``cfg.seed``) unless given explicitly as ``endpoints``, a list
    of ``(t0, t1)``. Each triple is evaluated with common random numbers and
    the margin ``F(mid) - (F(t0) + F(t1))/2`` is classified by
    :func:`classify_margin`.
    """
    cfg = cfg or MCConfig()
    if endpoints is None:
        if box <= 0:
            raise ValueError("box must be positive")
        rng = substream(cfg.seed, AUX_KEY)
        draws = rng.uniform(-box, box, size=(triples, 2, s.n))
        endpoints = [(d[0], d[1]) for d in draws]
    report = ConcavityReport()
    weights = np.array([-0.5, 1.0, -0.5])
    for t0, t1 in endpoints:
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        mid = 0.5 * (t0 + t1)
        logvols, batch_means = logvol_path_batches(s, [t0, mid, t1], mode, cfg)
        margin = float(weights @ logvols)
        stderr = contrast_stderr(batch_means, weights)
        report.triples.append((t0, mid, t1))
        report.margins.append(margin)
        report.stderrs.append(stderr)
        report.verdicts.append(classify_margin(margin, stderr))
    return report


def _halfplanes(poly):
    """Outward normals and offsets of the edges of a counterclockwise polygon."""
    edges = np.roll(poly, -1, axis=0) - poly
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    offsets = np.einsum("ij,ij->i", normals, poly)
    return normals, offsets


def counterexample_curve(ts):
    """``[(t, log(|K_t ∩ K| / |K|)), ...]`` with ``K_t = diag(1, e^t) K``."""
    K = PARALLELOGRAM
    normals, offsets = _halfplanes(K)
    area_K = polygon_area(K)
    out = []
    for t in ts:
        t = float(t)
        poly = K * np.array([1.0, math.exp(t)])
        for nrm, off in zip(normals, offsets):
            poly = clip_polygon(poly, nrm, off)
        area = polygon_area(poly)
        out.append((t, math.log(area / area_K) if area > 0 else -math.inf))
    return out


def counterexample_violation():
    """The pinned triple ``(0, 10, 20)`` and its midpoint margin ``f(10) - (f(0) + f(20))/2``."""
    (_, f0), (_, f1), (_, f2) = counterexample_curve(COUNTEREXAMPLE_TRIPLE)
    return COUNTEREXAMPLE_TRIPLE, f1 - 0.5 * (f0 + f2)
