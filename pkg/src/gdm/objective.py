"""The global dimension objective over soft partitions and its gradient.

A soft partition of N data vectors into K clusters is a column-stochastic
K x N membership matrix M. Cluster k sees the data scaled columnwise by
row k of M, and the objective is the p-norm of the per-cluster empirical
dimensions

    GD(M) = || (d_1, ..., d_K) ||_p,
    d_k = empirical dimension of (M[k, 0] v_0, ..., M[k, N-1] v_{N-1}).

At a 0/1 membership matrix this agrees with the global dimension of the
corresponding hard partition. The outlier-augmented variant adds a row
(index 0) whose mass is charged a flat unit cost alpha instead of a
dimension:

    GD_out(M) = alpha * sum(M[0]) + || (d_1, ..., d_K) ||_p.

The gradient is analytic. With A_k the scaled matrix for cluster k,
A_k = U_k S_k V_k^T its thin SVD, delta = eps / (1 - eps) and

    C1_k = ||s_k||_eps^(1-eps) / ||s_k||_delta,
    C2_k = ||s_k||_eps * ||s_k||_delta^(-1-delta),
    D_k  = C1_k * S_k^(eps-1) - C2_k * S_k^(delta-1),

the derivative with respect to M[k, n] is

    d GD / d M[k, n]
        = V_k[n, :] @ (d_k^(p-1) * GD^(1-p) * D_k @ U_k^T) @ A[:, n].

GD is only almost-everywhere differentiable: the powers in D_k blow up
as a singular value approaches zero, so each singular value is floored
at 1e-8 times its cluster's largest when forming D_k (objective values
are never floored).
"""

from dataclasses import dataclass, field

import numpy as np

from .dimension import RELATIVE_ZERO_TOL, empirical_dimension
from .exceptions import (
    DegenerateClusterError,
    InvalidInputError,
    InvalidParameterError,
)

# Scaled cluster matrices with a top singular value at or below this are
# treated as empty; with on_degenerate="zero" they contribute dimension 0.
DEGENERATE_SMAX = 1e-14

# Relative floor applied to singular values inside the gradient's D_k
# diagonal (bounded subgradient surrogate near the non-smooth set).
GRADIENT_SIGMA_FLOOR = 1e-8


@dataclass(frozen=True)
class ObjectiveParams:
    """Tunables of the global dimension objective.

    eps is the empirical-dimension strictness (must be strictly inside
    (0, 1) so that delta = eps / (1 - eps) is finite), p the exponent of
    the combining norm, and alpha the flat unit cost of outlier-row mass
    (used only by the outlier-augmented objective).
    """

    eps: float = 0.35
    p: float = 15.0
    alpha: float = 0.01
    delta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise InvalidParameterError("eps must be in (0, 1), got %r" % (self.eps,))
        if self.p <= 0.0:
            raise InvalidParameterError("p must be positive, got %r" % (self.p,))
        if self.alpha < 0.0:
            raise InvalidParameterError(
                "alpha must be nonnegative, got %r" % (self.alpha,)
            )
        object.__setattr__(self, "delta", self.eps / (1.0 - self.eps))


def validate_membership(m, tol=1e-10):
    """Check that m is column-stochastic and return it as a float array."""
    m = _validate_weights(m)
    if np.any(m < -tol) or np.any(m > 1.0 + tol):
        raise InvalidInputError("membership entries must lie in [0, 1]")
    colsums = m.sum(axis=0)
    if np.any(np.abs(colsums - 1.0) > tol):
        raise InvalidInputError("membership columns must sum to 1")
    return m


def _validate_weights(m):
    """Shape and finiteness checks only.

    The objective and its gradient are smooth functions of arbitrary
    weight matrices (that is what makes finite differencing them
    meaningful); the simplex constraint is enforced by the optimizer,
    not here.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise InvalidInputError("membership must be a 2-d matrix")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("membership entries must be finite")
    return m


def _validate_data(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[1] == 0:
        raise InvalidInputError("data must be a D x N matrix with N >= 1")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("data entries must be finite")
    return a


def scaled_cluster_matrix(a, m, k):
    """Data matrix with column j scaled by the membership M[k, j]."""
    a = _validate_data(a)
    m = _validate_weights(m)
    if not 0 <= k < m.shape[0]:
        raise InvalidParameterError(
            "cluster index %r out of range for %d rows" % (k, m.shape[0])
        )
    if a.shape[1] != m.shape[1]:
        raise InvalidInputError("data and membership disagree on point count")
    return a * m[k][None, :]


def pnorm(values, p):
    """(sum v_i^p)^(1/p) for nonnegative values, stable for large p.

    Values are summed in sorted order so the result is exactly invariant
    under permutations of its input.
    """
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0.0
    top = v[-1]
    if top <= 0.0:
        return 0.0
    return float(top * np.sum((v / top) ** p) ** (1.0 / p))


def _dim_of_columns(cols, eps, on_degenerate):
    """Empirical dimension of a (possibly empty) block of data columns."""
    if cols.size == 0:
        smax = 0.0
    else:
        s = np.linalg.svd(cols, compute_uv=False)
        smax = s[0]
    if smax <= DEGENERATE_SMAX:
        if on_degenerate == "zero":
            return 0.0
        raise DegenerateClusterError("cluster is empty or identically zero")
    return empirical_dimension(s, eps)


def hard_cluster_dims(a, labels, n_clusters, eps=0.35, on_degenerate="raise"):
    """Per-cluster empirical dimensions of a hard partition.

    Negative labels mark rejected points and are excluded.
    """
    a = _validate_data(a)
    labels = np.asarray(labels)
    if labels.shape != (a.shape[1],):
        raise InvalidInputError("labels must have one entry per data column")
    return np.array(
        [
            _dim_of_columns(a[:, labels == k], eps, on_degenerate)
            for k in range(n_clusters)
        ]
    )


def global_dimension_hard(a, labels, params=None, n_clusters=None, on_degenerate="raise"):
    """Global dimension of a hard partition.

    Parameters
    ----------
    a : ndarray, shape (D, N)
    labels : int array, shape (N,)
        Cluster ids; negative ids mark rejected points.
    params : ObjectiveParams, optional
    n_clusters : int, optional
        Defaults to max(labels) + 1.
    on_degenerate : {'raise', 'zero'}
        'raise' errors on an empty cluster; 'zero' uses the continuous
        extension in which an empty cluster contributes dimension 0.
    """
    params = params or ObjectiveParams()
    labels = np.asarray(labels)
    if n_clusters is None:
        n_clusters = int(labels.max()) + 1 if labels.size else 0
    dims = hard_cluster_dims(a, labels, n_clusters, params.eps, on_degenerate)
    return pnorm(dims, params.p)


def _cluster_svd_terms(a, row, params, on_degenerate, want_uv):
    """Spectrum-derived quantities for one scaled cluster.

    Returns (dim, grad_row or None). The gradient row is the unweighted
    part V[n, :] @ D @ U.T @ A[:, n]; the caller applies the p-norm
    chain factor.
    """
    scaled = a * row[None, :]
    if want_uv:
        u, s, vt = np.linalg.svd(scaled, full_matrices=False)
    else:
        s = np.linalg.svd(scaled, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax <= DEGENERATE_SMAX:
        if on_degenerate == "zero":
            return 0.0, np.zeros(a.shape[1]) if want_uv else None
        raise DegenerateClusterError("scaled cluster matrix is identically zero")
    sn = s / smax
    sn[sn < RELATIVE_ZERO_TOL] = 0.0
    eps, delta = params.eps, params.delta
    norm_e = float(np.sum(sn**eps)) ** (1.0 / eps)
    norm_d = float(np.sum(sn**delta)) ** (1.0 / delta)
    dim = norm_e / norm_d
    if not want_uv:
        return dim, None
    # D (diagonal of the chain rule through the singular values),
    # expressed in the normalized spectrum: the 1/smax factor restores
    # the original scale.
    sf = np.maximum(sn, GRADIENT_SIGMA_FLOOR)
    c1 = norm_e ** (1.0 - eps) / norm_d
    c2 = norm_e * norm_d ** (-1.0 - delta)
    dvec = (c1 * sf ** (eps - 1.0) - c2 * sf ** (delta - 1.0)) / smax
    w = dvec[:, None] * (u.T @ a)
    grad_row = np.sum(vt * w, axis=0)
    return dim, grad_row


def _soft_dims(a, rows, params, on_degenerate, want_uv):
    dims = np.zeros(rows.shape[0])
    grows = np.zeros(rows.shape) if want_uv else None
    for k in range(rows.shape[0]):
        dim, grow = _cluster_svd_terms(a, rows[k], params, on_degenerate, want_uv)
        dims[k] = dim
        if want_uv:
            grows[k] = grow
    return dims, grows


def global_dimension_soft(a, m, params=None, on_degenerate="raise"):
    """Global dimension of a soft partition (membership matrix)."""
    params = params or ObjectiveParams()
    a = _validate_data(a)
    m = _validate_weights(m)
    if a.shape[1] != m.shape[1]:
        raise InvalidInputError("data and membership disagree on point count")
    dims, _ = _soft_dims(a, m, params, on_degenerate, want_uv=False)
    return pnorm(dims, params.p)


def gd_gradient(a, m, params=None, on_degenerate="raise"):
    """Gradient of the soft global dimension with respect to M.

    Entry (k, n) is d GD / d M[k, n]. Requires every scaled cluster to
    have a nonzero spectrum unless on_degenerate='zero', in which case
    degenerate clusters get zero rows.
    """
    params = params or ObjectiveParams()
    a = _validate_data(a)
    m = _validate_weights(m)
    if a.shape[1] != m.shape[1]:
        raise InvalidInputError("data and membership disagree on point count")
    dims, grows = _soft_dims(a, m, params, on_degenerate, want_uv=True)
    return _apply_pnorm_chain(dims, grows, params.p)


def _apply_pnorm_chain(dims, grows, p):
    gd = pnorm(dims, p)
    if gd == 0.0:
        return np.zeros_like(grows)
    weights = (dims / gd) ** (p - 1.0)
    return weights[:, None] * grows


def global_dimension_outlier(a, m, params=None, on_degenerate="raise"):
    """Outlier-augmented global dimension.

    m has K + 1 rows; row 0 is the outlier row, charged alpha per unit
    of mass, and rows 1..K contribute their empirical dimensions through
    the usual p-norm.
    """
    params = params or ObjectiveParams()
    a = _validate_data(a)
    m = _validate_weights(m)
    if m.shape[0] < 2:
        raise InvalidInputError("outlier membership needs at least 2 rows")
    if a.shape[1] != m.shape[1]:
        raise InvalidInputError("data and membership disagree on point count")
    dims, _ = _soft_dims(a, m[1:], params, on_degenerate, want_uv=False)
    return params.alpha * float(m[0].sum()) + pnorm(dims, params.p)


def gd_gradient_outlier(a, m, params=None, on_degenerate="raise"):
    """Gradient of the outlier-augmented objective.

    Row 0 is alpha * M[0] (linear in the outlier mass); rows 1..K carry
    the same structure as the classic gradient with the p-norm taken
    over the K true clusters.
    """
    params = params or ObjectiveParams()
    a = _validate_data(a)
    m = _validate_weights(m)
    if m.shape[0] < 2:
        raise InvalidInputError("outlier membership needs at least 2 rows")
    if a.shape[1] != m.shape[1]:
        raise InvalidInputError("data and membership disagree on point count")
    dims, grows = _soft_dims(a, m[1:], params, on_degenerate, want_uv=True)
    grad = np.empty_like(m)
    grad[0] = params.alpha * m[0]
    grad[1:] = _apply_pnorm_chain(dims, grows, params.p)
    return grad
