"""Outlier detection and rejection around global dimension minimization.

The core idea: add an extra membership row (row 0) whose mass is
charged a flat price alpha per point instead of contributing a
dimension. A point that raises the dimension of every real cluster is
cheaper to park in the outlier row. Thresholding that row directly
("naive") is unreliable because the right alpha is data dependent, but
the *ranking* of points by outlier-row mass is stable, which the two
practical pipelines exploit:

* known_fraction: rank points by outlier-row mass, reject a preset
  fraction, and re-segment the survivors from scratch.
* model_reassign: run known_fraction, fit a subspace of rounded
  empirical dimension to each cluster, re-assign every point (including
  prior rejects) to its nearest subspace, and reject points farther
  than kappa from all of them.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dimension import empirical_dimension
from .exceptions import (
    DegenerateClusterError,
    InsufficientInliersError,
    InvalidInputError,
    InvalidParameterError,
)
from .objective import _validate_data, hard_cluster_dims, pnorm
from .optimizer import (
    SegmentationResult,
    _descend_loop,
    gdm,
    greedy_merge_init,
)

# Initial membership mass placed on the outlier row after merge
# initialization; the remaining 1 - beta sits on the point's own set.
OUTLIER_INIT_MASS = 0.05


@dataclass(frozen=True)
class OutlierConfig:
    """Outlier handling mode and its parameters.

    mode 'naive' thresholds the augmented membership directly and is
    provided for completeness only; it is unsound in practice because
    a good alpha is data dependent. Prefer 'known_fraction' or
    'model_reassign'.
    """

    mode: str = "none"
    alpha: float = 0.01
    fraction: float = 0.20
    kappa: float = 0.05

    def __post_init__(self):
        if self.mode not in ("none", "naive", "known_fraction", "model_reassign"):
            raise InvalidParameterError("unknown outlier mode %r" % (self.mode,))
        if self.alpha < 0.0:
            raise InvalidParameterError("alpha must be nonnegative")
        if not 0.0 < self.fraction < 1.0:
            raise InvalidParameterError("fraction must be in (0, 1)")
        if self.kappa <= 0.0:
            raise InvalidParameterError("kappa must be positive")


class FittedSubspace(NamedTuple):
    """Orthonormal basis of a fitted cluster subspace and its dimension."""

    basis: np.ndarray
    dim: int


def gdm_outlier_core(a, cfg, alpha=0.01, threads=1):
    """Optimize the outlier-augmented objective, returning the soft
    (K+1) x N membership (row 0 is the outlier row) of the restart with
    the lowest final objective value.

    Initialization runs the usual greedy merge to K sets, then each
    column receives mass 1 - beta on its own set and beta = 0.05 on the
    outlier row, letting gradient flow decide who pays the outlier price.
    """
    a = _validate_data(a)
    n = a.shape[1]
    if cfg.restarts < 1:
        raise InvalidParameterError("needs at least one restart")
    if n <= cfg.n_clusters:
        raise InvalidParameterError("need more points than clusters")
    params = cfg.objective_params(alpha=alpha)
    seed_seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def run(i):
        rng = np.random.default_rng(seed_seqs[i])
        labels0 = greedy_merge_init(a, cfg, rng)
        m0 = np.zeros((cfg.n_clusters + 1, n))
        m0[0] = OUTLIER_INIT_MASS
        m0[labels0 + 1, np.arange(n)] = 1.0 - OUTLIER_INIT_MASS
        m, trace = _descend_loop(a, m0, cfg, params, outlier=True)
        return trace[-1], i, m

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(run, range(cfg.restarts)))
    else:
        runs = [run(i) for i in range(cfg.restarts)]
    return min(runs, key=lambda t: (t[0], t[1]))[2]


def known_fraction(a, cfg, fraction=0.20, alpha=0.01, threads=1):
    """Reject a preset fraction of the data ranked by outlier-row mass,
    then re-segment the survivors with the classic pipeline.

    The rerun is cold started (fresh restarts on the survivor set) so
    results are deterministic given cfg.seed.
    """
    a = _validate_data(a)
    n = a.shape[1]
    if not 0.0 < fraction < 1.0:
        raise InvalidParameterError("fraction must be in (0, 1)")
    n_out = math.ceil(fraction * n)
    if n - n_out <= cfg.n_clusters:
        raise InsufficientInliersError(
            "rejecting %d of %d points leaves too few to segment" % (n_out, n)
        )
    membership = gdm_outlier_core(a, cfg, alpha=alpha, threads=threads)
    order = np.argsort(-membership[0], kind="stable")
    outliers = np.sort(order[:n_out])
    survivors = np.setdiff1d(np.arange(n), outliers)
    inner = gdm(a[:, survivors], cfg, threads=threads)
    labels = np.full(n, -1, dtype=int)
    labels[survivors] = inner.labels
    full_membership = np.zeros((cfg.n_clusters, n))
    full_membership[:, survivors] = inner.membership
    return SegmentationResult(
        labels=labels,
        outliers=outliers,
        gd_value=inner.gd_value,
        per_cluster_dims=inner.per_cluster_dims,
        membership=full_membership,
        restarts_run=inner.restarts_run,
        trace=inner.trace,
        restart_gd_values=inner.restart_gd_values,
    )


def fit_cluster_subspace(points, eps=0.35):
    """Fit a subspace of rounded empirical dimension to a cluster.

    The dimension is the empirical dimension rounded half up, clamped
    to [1, min(D, N_k)]; the basis holds the leading left singular
    vectors.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] == 0:
        raise DegenerateClusterError("cannot fit a subspace to an empty cluster")
    u, s, _ = np.linalg.svd(points, full_matrices=False)
    if s[0] <= 0.0:
        raise DegenerateClusterError("cannot fit a subspace to zero data")
    d_hat = empirical_dimension(s, eps)
    dim = int(np.floor(d_hat + 0.5))
    dim = max(1, min(dim, min(points.shape)))
    return FittedSubspace(basis=u[:, :dim].copy(), dim=dim)


def point_subspace_distance(v, subspace):
    """Euclidean distance from a vector to a fitted subspace."""
    v = np.asarray(v, dtype=float)
    basis = subspace.basis
    return float(np.linalg.norm(v - basis @ (basis.T @ v)))


def subspace_distances(a, subspace):
    """Distance of every column of a to a fitted subspace."""
    basis = subspace.basis
    residual = a - basis @ (basis.T @ a)
    return np.linalg.norm(residual, axis=0)


def reassignment_distances(a, cfg, fraction=0.20, alpha=0.01, threads=1):
    """Shared first stage of model_reassign and ROC sweeps.

    Runs known_fraction, fits one subspace per nonempty cluster, and
    returns (nearest_labels, min_distances, distance_matrix, result of
    the known_fraction stage). Distances cover every point, including
    the ones known_fraction rejected.
    """
    a = _validate_data(a)
    kf = known_fraction(a, cfg, fraction=fraction, alpha=alpha, threads=threads)
    n = a.shape[1]
    dists = np.full((cfg.n_clusters, n), np.inf)
    fitted_any = False
    for k in range(cfg.n_clusters):
        cols = a[:, kf.labels == k]
        if cols.shape[1] == 0 or not np.any(cols):
            continue
        sub = fit_cluster_subspace(cols, cfg.eps)
        dists[k] = subspace_distances(a, sub)
        fitted_any = True
    if not fitted_any:
        raise DegenerateClusterError("no nonempty cluster to fit")
    nearest = np.argmin(dists, axis=0)
    min_dist = dists[nearest, np.arange(n)]
    return nearest, min_dist, dists, kf


def model_reassign(a, cfg, kappa=0.05, fraction=0.20, alpha=0.01, threads=1,
                   adaptive_r=None):
    """Re-assign every point to its nearest fitted cluster subspace and
    reject the ones farther than kappa from all of them.

    With adaptive_r set, the global kappa is replaced by per-cluster
    thresholds mean + adaptive_r * std of that cluster's fit residuals.
    """
    if kappa <= 0.0:
        raise InvalidParameterError("kappa must be positive")
    a = _validate_data(a)
    n = a.shape[1]
    nearest, min_dist, dists, kf = reassignment_distances(
        a, cfg, fraction=fraction, alpha=alpha, threads=threads
    )
    if adaptive_r is not None:
        thresholds = np.full(cfg.n_clusters, np.inf)
        for k in range(cfg.n_clusters):
            residuals = dists[k, kf.labels == k]
            if residuals.size:
                thresholds[k] = residuals.mean() + adaptive_r * residuals.std()
        outlier_mask = min_dist > thresholds[nearest]
    else:
        outlier_mask = min_dist > kappa
    labels = np.where(outlier_mask, -1, nearest)
    outliers = np.flatnonzero(outlier_mask)
    dims = hard_cluster_dims(a, labels, cfg.n_clusters, cfg.eps, on_degenerate="zero")
    membership = np.zeros((cfg.n_clusters, n))
    inlier_idx = np.flatnonzero(~outlier_mask)
    membership[labels[inlier_idx], inlier_idx] = 1.0
    return SegmentationResult(
        labels=labels,
        outliers=outliers,
        gd_value=pnorm(dims, cfg.p),
        per_cluster_dims=dims,
        membership=membership,
        restarts_run=kf.restarts_run,
        trace=kf.trace,
        restart_gd_values=kf.restart_gd_values,
    )


def gdm_naive(a, cfg, alpha=0.01, threads=1):
    """Threshold the augmented membership directly.

    Unsound in practice (the right alpha is data dependent; a bad one
    silently dumps inliers into, or starves, the outlier group). Kept
    behind this explicit call for completeness and comparison.
    """
    a = _validate_data(a)
    membership = gdm_outlier_core(a, cfg, alpha=alpha, threads=threads)
    winners = np.argmax(membership, axis=0)
    labels = winners - 1
    outliers = np.flatnonzero(winners == 0)
    dims = hard_cluster_dims(a, labels, cfg.n_clusters, cfg.eps, on_degenerate="zero")
    return SegmentationResult(
        labels=labels,
        outliers=outliers,
        gd_value=pnorm(dims, cfg.p),
        per_cluster_dims=dims,
        membership=membership,
        restarts_run=cfg.restarts,
        trace=np.empty(0),
    )


def segment_with_outliers(a, cfg, outlier_cfg, threads=1):
    """Dispatch to the pipeline selected by outlier_cfg.mode."""
    if outlier_cfg.mode == "none":
        return gdm(a, cfg, threads=threads)
    if outlier_cfg.mode == "naive":
        return gdm_naive(a, cfg, alpha=outlier_cfg.alpha, threads=threads)
    if outlier_cfg.mode == "known_fraction":
        return known_fraction(
            a, cfg, fraction=outlier_cfg.fraction, alpha=outlier_cfg.alpha,
            threads=threads,
        )
    return model_reassign(
        a, cfg, kappa=outlier_cfg.kappa, fraction=outlier_cfg.fraction,
        alpha=outlier_cfg.alpha, threads=threads,
    )


def tpr_fpr(predicted_outliers, true_outliers, n_points):
    """True and false positive rates of an outlier prediction, in percent.

    TPR is 0 when there are no true outliers; FPR is 0 when there are
    no true inliers.
    """
    pred = set(int(i) for i in np.asarray(predicted_outliers, dtype=int).ravel())
    true = set(int(i) for i in np.asarray(true_outliers, dtype=int).ravel())
    universe = range(n_points)
    if not pred <= set(universe) or not true <= set(universe):
        raise InvalidInputError("outlier indices must lie in [0, n_points)")
    n_true = len(true)
    n_inliers = n_points - n_true
    tpr = 100.0 * len(pred & true) / n_true if n_true else 0.0
    fpr = 100.0 * len(pred - true) / n_inliers if n_inliers else 0.0
    return tpr, fpr
