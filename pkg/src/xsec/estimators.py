"""Monte Carlo estimators for volumes of sections of dilated cross-polytopes.

Two exact representations are implemented. For a codimension-``k`` subspace
with orthonormal complement columns ``v_j``::

    vol = 2^(n-k) / ((n-k)! pi^(k/2)) * prod(a) * E[det(sum_j a_j^2 Y_j v_j v_j^T)^(-1/2)]

and for a ``k``-dimensional subspace spanned by rows with columns ``v_i``::

    vol = 2^k / (k! pi^((n-k)/2)) * sqrt(det(sum_i v_i v_i^T))
          * E[prod(Y)^(-1/2) * det(sum_i v_i v_i^T / (Y_i a_i^2))^(-1/2)]

with ``Y_i`` i.i.d. standard exponentials. Both are evaluated in batches
with a batch-means standard error.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .numkit import cholesky_logdet
from .section_model import as_dilation, codim_profile, dim_profile, to_dilation
from .streams import MCConfig, run_batches, sample_exponentials

__all__ = [
    "VolumeEstimate",
    "HeavyTailWarning",
    "codim_integrand",
    "dim_integrand",
    "codim_log_prefactor",
    "dim_log_prefactor",
    "estimate_codim",
    "estimate_dim",
    "estimate_volume",
    "logvol_path_batches",
    "estimate_logvol_path",
    "contrast_stderr",
    "density_identity_check",
]

TAIL_FRACTION = 1e-3
TAIL_MASS = 0.2


class HeavyTailWarning(RuntimeWarning):
    """The largest samples carry a suspicious share of the estimate."""


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    samples: int
    method: str
    seed: int | None = None
    singular: int = 0
    heavy_tail: bool = False
    stderr_finite: bool = True

    def as_dict(self):
        return {
            "value": self.value,
            "stderr": self.stderr,
            "samples": self.samples,
            "method": self.method,
            "seed": self.seed,
            "singular": self.singular,
            "heavy_tail": self.heavy_tail,
        }


def _check_profile(profile, a, mode):
    if profile.mode != mode:
        raise ValueError(f"expected a {mode!r} profile, got {profile.mode!r}")
    if profile.k == 0:
        raise ValueError("profile has no rows")
    return as_dilation(a, profile.n)


def codim_integrand(matrix, a, Y):
    """Per-sample ``prod(a) * det(sum_j a_j^2 Y_j v_j v_j^T)^(-1/2)``.

    Parameters
    ----------
    matrix : ndarray, shape (k, n)
        Orthonormal rows spanning the complement of H.
    a : ndarray, shape (n,)
    Y : ndarray, shape (m, n)

    Returns
    -------
    values : ndarray, shape (m,)
        Zero where the matrix was numerically singular.
    singular : ndarray of bool, shape (m,)
    """
    w = a * a * Y
    M = np.einsum("mj,kj,lj->mkl", w, matrix, matrix)
    logdet, singular = cholesky_logdet(M)
    with np.errstate(over="ignore"):
        values = np.exp(np.sum(np.log(a)) - 0.5 * logdet)
    values[singular] = 0.0
    return values, singular


def dim_integrand(matrix, a, Y):
    """Per-sample ``prod(Y)^(-1/2) * det(sum_i v_i v_i^T / (Y_i a_i^2))^(-1/2)``."""
    w = 1.0 / (Y * (a * a))
    M = np.einsum("mj,kj,lj->mkl", w, matrix, matrix)
    logdet, singular = cholesky_logdet(M)
    with np.errstate(over="ignore"):
        values = np.exp(-0.5 * np.sum(np.log(Y), axis=1) - 0.5 * logdet)
    values[singular] = 0.0
    return values, singular


def codim_log_prefactor(n, k):
    return (n - k) * math.log(2.0) - math.lgamma(n - k + 1) - 0.5 * k * math.log(math.pi)


def dim_log_prefactor(profile):
    n, k = profile.n, profile.k
    logdet, singular = cholesky_logdet(profile.outer_sum())
    if singular:
        raise ValueError("spanning rows are numerically dependent")
    return k * math.log(2.0) - math.lgamma(k + 1) - 0.5 * (n - k) * math.log(math.pi) + 0.5 * logdet


def _integrand_for(profile):
    return codim_integrand if profile.mode == "codim" else dim_integrand


def _log_prefactor(profile):
    if profile.mode == "codim":
        return codim_log_prefactor(profile.n, profile.k)
    return dim_log_prefactor(profile)


def _draw_batches(profile, dilations, cfg):
    """Per-sample integrands, shape (p, B, m), plus singular counts per dilation.

    The same exponential draws are shared by all ``p`` dilations.
    """
    integrand = _integrand_for(profile)
    n, m = profile.n, cfg.batch_size

    def batch(stream, b):
        Y = sample_exponentials(stream, (m, n))
        out = np.empty((len(dilations), m))
        sing = np.zeros(len(dilations), dtype=np.int64)
        for i, a in enumerate(dilations):
            out[i], s = integrand(profile.matrix, a, Y)
            sing[i] = s.sum()
        return out, sing

    results = run_batches(cfg, batch)
    values = np.stack([r[0] for r in results], axis=1)
    singular = np.sum([r[1] for r in results], axis=0)
    return values, singular


def _heavy_tailed(values):
    flat = values.ravel()
    total = flat.sum()
    if not total > 0:
        return False
    top = max(1, math.ceil(TAIL_FRACTION * flat.size))
    head = np.partition(flat, flat.size - top)[flat.size - top:]
    return bool(head.sum() > TAIL_MASS * total)


def _summarize(values, log_prefactor, method, cfg, singular, estimator):
    scale = math.exp(log_prefactor)
    batch_means = scale * values.mean(axis=1)
    B = batch_means.size
    stderr = float(np.std(batch_means, ddof=1) / math.sqrt(B))
    if estimator == "mean":
        value = float(scale * values.mean())
    elif estimator == "median_of_means":
        value = float(np.median(batch_means))
        # asymptotic efficiency of the median relative to the mean
        stderr *= math.sqrt(math.pi / 2)
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    heavy = _heavy_tailed(values)
    if heavy:
        warnings.warn(
            f"{method}: top {TAIL_FRACTION:.1%} of samples carry more than {TAIL_MASS:.0%} of the mass; "
            "the standard error may be unreliable",
            HeavyTailWarning,
            stacklevel=3,
        )
    return VolumeEstimate(
        value=value,
        stderr=stderr,
        samples=cfg.samples,
        method=method,
        seed=cfg.seed,
        singular=int(singular),
        heavy_tail=heavy,
        stderr_finite=bool(np.isfinite(stderr)),
    )


def estimate_codim(profile, a, cfg=None, estimator="mean"):
    """Volume of ``diag(a) B_1^n ∩ H`` from the complement of H."""
    cfg = cfg or MCConfig()
    a = _check_profile(profile, a, "codim")
    values, singular = _draw_batches(profile, [a], cfg)
    return _summarize(values[0], _log_prefactor(profile), "codim", cfg, singular[0], estimator)


def estimate_dim(profile, a, cfg=None, estimator="mean"):
    """Volume of ``diag(a) B_1^n ∩ H`` from any spanning set of H."""
    cfg = cfg or MCConfig()
    a = _check_profile(profile, a, "dim")
    values, singular = _draw_batches(profile, [a], cfg)
    return _summarize(values[0], _log_prefactor(profile), "dim", cfg, singular[0], estimator)


def estimate_volume(s, a, mode="codim", cfg=None, estimator="mean"):
    """Convenience wrapper building the right profile of ``s`` for ``mode``."""
    if mode == "codim":
        return estimate_codim(codim_profile(s), a, cfg, estimator)
    if mode == "dim":
        return estimate_dim(dim_profile(s), a, cfg, estimator)
    raise ValueError(f"mode must be 'codim' or 'dim', got {mode!r}")


def logvol_path_batches(s, ts, mode="codim", cfg=None):
    """Log-volumes along a list of log-dilations with common random numbers.

    Returns
    -------
    logvols : ndarray, shape (p,)
    batch_means : ndarray, shape (p, B)
        Volume estimate of each batch, for paired standard errors.
    """
    cfg = cfg or MCConfig()
    if len(ts) == 0:
        raise ValueError("need at least one log-dilation")
    ts = [np.asarray(t, dtype=float).ravel() for t in ts]
    if any(t.size != s.n for t in ts):
        raise ValueError(f"every log-dilation must have n={s.n} entries")
    if mode == "codim":
        profile = codim_profile(s)
    elif mode == "dim":
        profile = dim_profile(s)
    else:
        raise ValueError(f"mode must be 'codim' or 'dim', got {mode!r}")
    dilations = [to_dilation(t) for t in ts]
    values, _ = _draw_batches(profile, dilations, cfg)
    log_c = _log_prefactor(profile)
    with np.errstate(divide="ignore"):
        logvols = log_c + np.log(values.mean(axis=(1, 2)))
    batch_means = math.exp(log_c) * values.mean(axis=2)
    return logvols, batch_means


def contrast_stderr(batch_means, weights):
    """Standard error of ``sum_i w_i log(vol_i)`` by the delta method over batches."""
    batch_means = np.asarray(batch_means, dtype=float)
    weights = np.asarray(weights, dtype=float)
    means = batch_means.mean(axis=1)
    lin = (weights[:, None] * batch_means / means[:, None]).sum(axis=0)
    return float(np.std(lin, ddof=1) / math.sqrt(lin.size))


def estimate_logvol_path(s, ts, mode="codim", cfg=None):
    """``[(log vol, stderr of log vol), ...]`` for each log-dilation in ``ts``."""
    logvols, batch_means = logvol_path_batches(s, ts, mode, cfg)
    out = []
    for i, lv in enumerate(logvols):
        w = np.zeros(len(logvols))
        w[i] = 1.0
        out.append((float(lv), contrast_stderr(batch_means, w)))
    return out


def _graded_nodes(points, order=16, ratio=0.15):
    """Gauss-Legendre nodes on (0, 1/2], geometrically graded toward 0."""
    panels = max(1, points // (2 * order))
    edges = 0.5 * ratio ** np.arange(panels - 1, -1, -1, dtype=float)
    edges = np.concatenate([[0.0], edges])
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    weights = (0.5 * (hi - lo) * w).ravel()
    return nodes, weights


def density_identity_check(x, quadrature_points=800):
    """``|e^{-|x|}/2 - E[exp(-x^2/(4Y)) / (sqrt(2 pi) sqrt(2Y))]|`` for ``Y ~ Exp(1)``.

    The expectation is computed as an integral over ``u`` in (0, 1) with
    ``Y = -log u``, by composite Gauss-Legendre on panels graded toward both
    endpoints, where the integrand has logarithmic singularities.
    """
    if quadrature_points < 100:
        raise ValueError("quadrature_points must be at least 100")
    x = float(x)
    s, w = _graded_nodes(quadrature_points)
    # lower half: u = s; upper half: u = 1 - s, so y = -log1p(-s) stays accurate
    y = np.concatenate([-np.log(s), -np.log1p(-s)])
    w = np.concatenate([w, w])
    g = np.exp(-x * x / (4.0 * y)) / (math.sqrt(2.0 * math.pi) * np.sqrt(2.0 * y))
    rhs = float(np.sum(w * g))
    lhs = 0.5 * math.exp(-abs(x))
    return abs(lhs - rhs)
