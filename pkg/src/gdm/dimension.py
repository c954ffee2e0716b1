"""Singular spectra and the empirical dimension estimator.

The empirical dimension of a point set is the ratio of two power-mean
norms of its singular values,

    d_hat(sigma; eps) = ||sigma||_eps / ||sigma||_delta,
    delta = eps / (1 - eps),

where ||u||_p = (sum u_i^p)^(1/p) for any p > 0 (not a norm for p < 1).
It is invariant to scaling and rotation, never exceeds the true
dimension of the span, and converges to it for spherically symmetric
samples. eps = 1 degenerates to the effective rank ||sigma||_1 / max(sigma).
"""

import math
from typing import NamedTuple

import numpy as np

from .exceptions import (
    DegenerateSpectrumError,
    InvalidInputError,
    InvalidParameterError,
)


# Singular values below this fraction of the largest one are treated as
# exactly zero, both for rank counting and inside the empirical
# dimension: the x**eps powers otherwise turn numerical zeros
# (~1e-16 * sigma_max from the SVD of an exactly rank-deficient matrix)
# into contributions far above the estimator's stated tolerances.
RELATIVE_ZERO_TOL = 1e-12


class SingularSpectrum(NamedTuple):
    """Thin SVD factors A = U @ diag(sigma) @ V.T."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray


def thin_svd(a):
    """Thin singular value decomposition of a real matrix.

    Returns a :class:`SingularSpectrum` with U of shape (D, r), sigma of
    length r = min(D, N) sorted nonincreasing, and V of shape (N, r).
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise InvalidInputError("expected a 2-d matrix, got shape %s" % (a.shape,))
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix entries must be finite")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SingularSpectrum(U=u, sigma=s, V=vt.T)


def singular_values(a):
    """Singular values of a real matrix, sorted nonincreasing."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix entries must be finite")
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(sigma, rel_tol=RELATIVE_ZERO_TOL):
    """Number of singular values above rel_tol times the largest one."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0 or sigma.max() <= 0:
        return 0
    return int(np.sum(sigma > rel_tol * sigma.max()))


def empirical_dimension(sigma, eps=0.35):
    """Empirical dimension of a singular spectrum.

    Parameters
    ----------
    sigma : array-like of nonnegative reals
        Singular values (any order).
    eps : float in (0, 1]
        Strictness parameter. Small values track true dimension
        tightly; values near 1 are lenient. eps = 1 gives the
        effective rank sum(sigma) / max(sigma).

    Returns
    -------
    float in [1, len(sigma)].
    """
    if not 0.0 < eps <= 1.0:
        raise InvalidParameterError("eps must be in (0, 1], got %r" % (eps,))
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1 or sigma.size == 0:
        raise InvalidInputError("sigma must be a nonempty 1-d vector")
    if not np.all(np.isfinite(sigma)) or np.any(sigma < 0):
        raise InvalidInputError("singular values must be finite and nonnegative")
    smax = sigma.max()
    if smax <= 0.0:
        raise DegenerateSpectrumError("all singular values are zero")
    # Scale invariance lets us normalize by the largest value, which
    # keeps the p-th powers bounded for any eps.
    s = sigma / smax
    s[s < RELATIVE_ZERO_TOL] = 0.0
    if eps == 1.0:
        return float(s.sum())
    delta = eps / (1.0 - eps)
    num = float(np.sum(s**eps)) ** (1.0 / eps)
    den = float(np.sum(s**delta)) ** (1.0 / delta)
    return num / den


def batch_empirical_dimension(sigmas, eps=0.35):
    """Empirical dimension of each row of a stack of spectra.

    Rows that are identically zero get dimension 0 (the continuous
    extension used for empty clusters).
    """
    if not 0.0 < eps <= 1.0:
        raise InvalidParameterError("eps must be in (0, 1], got %r" % (eps,))
    sigmas = np.asarray(sigmas, dtype=float)
    smax = sigmas.max(axis=1)
    ok = smax > 0.0
    dims = np.zeros(sigmas.shape[0])
    if not np.any(ok):
        return dims
    s = sigmas[ok] / smax[ok, None]
    s[s < RELATIVE_ZERO_TOL] = 0.0
    if eps == 1.0:
        dims[ok] = s.sum(axis=1)
        return dims
    delta = eps / (1.0 - eps)
    num = np.sum(s**eps, axis=1) ** (1.0 / eps)
    den = np.sum(s**delta, axis=1) ** (1.0 / delta)
    dims[ok] = num / den
    return dims


def p_lower_bound(n_clusters, d):
    """Smallest exponent p guaranteeing the natural partition wins.

    For n_clusters subspaces of common dimension d sampled
    non-degenerately, any p above ln(K) / (ln(d+1) - ln(d)) makes the
    natural partition the unique minimizer of the rank-based global
    dimension over all partitions into at most K sets.
    """
    if not isinstance(n_clusters, (int, np.integer)) or n_clusters < 2:
        raise InvalidParameterError(
            "n_clusters must be an integer >= 2, got %r" % (n_clusters,)
        )
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidParameterError("d must be an integer >= 1, got %r" % (d,))
    return math.log(n_clusters) / (math.log(d + 1) - math.log(d))
