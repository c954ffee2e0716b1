"""Global dimension minimization by projected gradient descent.

One restart runs four stages: a greedy merge initialization (from the
all-singletons partition, repeatedly merge the sampled pair of sets
whose union yields the lowest global dimension), projected gradient
descent on the soft membership matrix, thresholding back to a hard
partition, and a greedy point-reassignment cleanup. Several restarts
are run and the partition with the lowest hard global dimension wins.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dimension import batch_empirical_dimension
from .exceptions import DegenerateClusterError, InvalidInputError, InvalidParameterError
from .objective import (
    ObjectiveParams,
    _dim_of_columns,
    _soft_dims,
    _apply_pnorm_chain,
    _validate_data,
    hard_cluster_dims,
    pnorm,
)


@dataclass(frozen=True)
class GdmConfig:
    """All tunables of the segmentation pipeline.

    Defaults follow the values the method was designed around:
    eps = 0.35, p = 15, 10 restarts, 30 gradient iterations, 10
    reassignment passes, target step length 0.3, and at most 100
    candidate pairs per merge round.
    """

    n_clusters: int
    eps: float = 0.35
    p: float = 15.0
    restarts: int = 10
    grad_iters: int = 30
    genetic_passes: int = 10
    step_target: float = 0.3
    merge_candidates: int = 100
    seed: int | None = None

    def __post_init__(self):
        if self.n_clusters < 1:
            raise InvalidParameterError("n_clusters must be >= 1")
        if min(self.restarts, self.grad_iters, self.genetic_passes) < 0:
            raise InvalidParameterError("iteration counts must be >= 0")
        if self.step_target <= 0.0:
            raise InvalidParameterError("step_target must be positive")
        if not 0.0 < self.eps < 1.0:
            raise InvalidParameterError("eps must be in (0, 1)")
        if self.p <= 0.0:
            raise InvalidParameterError("p must be positive")
        if self.merge_candidates < 1:
            raise InvalidParameterError("merge_candidates must be >= 1")

    def objective_params(self, alpha=0.01):
        return ObjectiveParams(eps=self.eps, p=self.p, alpha=alpha)


@dataclass
class SegmentationResult:
    """Outcome of a segmentation run.

    labels holds one cluster id per point (-1 marks rejected points),
    outliers the indices of rejected points, gd_value the hard global
    dimension of the returned partition, and trace the per-iteration
    objective values of the winning restart's descent stage.
    """

    labels: np.ndarray
    outliers: np.ndarray
    gd_value: float
    per_cluster_dims: np.ndarray
    membership: np.ndarray
    restarts_run: int
    trace: np.ndarray
    restart_gd_values: np.ndarray = field(default_factory=lambda: np.empty(0))


def project_simplex(v):
    """Euclidean projection of a vector onto the probability simplex.

    Returns the closest point of {w : w >= 0, sum(w) = 1}. Idempotent.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInputError("expected a nonempty vector")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("entries must be finite")
    return project_columns(v[:, None])[:, 0]


def project_columns(m):
    """Project every column of a K x N matrix onto the simplex."""
    m = np.asarray(m, dtype=float)
    k, n = m.shape
    u = -np.sort(-m, axis=0)
    css = np.cumsum(u, axis=0)
    counts = np.arange(1, k + 1)[:, None]
    cond = u + (1.0 - css) / counts > 0.0
    # cond[0] is always true, so each column has a last true row.
    rho = k - 1 - np.argmax(cond[::-1], axis=0)
    lam = (1.0 - css[rho, np.arange(n)]) / (rho + 1.0)
    return np.maximum(m + lam[None, :], 0.0)


def indicator_membership(labels, n_clusters):
    """0/1 membership matrix of a hard labeling."""
    labels = np.asarray(labels, dtype=int)
    m = np.zeros((n_clusters, labels.size))
    m[labels, np.arange(labels.size)] = 1.0
    return m


def _decode_pairs(codes, m):
    """Map flat pair codes to index pairs (i, j), i < j, among m items."""
    counts = m - 1 - np.arange(m - 1)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    i = np.searchsorted(starts, codes, side="right") - 1
    j = codes - starts[i] + i + 1
    return i, j


def greedy_merge_init(a, cfg, rng=None):
    """Agglomerative initialization: merge down to n_clusters sets.

    Starting from the all-singletons partition, each round samples up
    to cfg.merge_candidates distinct pairs of current sets (all pairs
    when fewer exist), scores the global dimension of each hypothetical
    merge, and commits the best one. Only the two touched sets'
    dimensions are recomputed; the rest are cached. Spectra of merged
    sets come from D x D Gram matrices, which add under merging.

    Returns a label vector. If N <= n_clusters each point keeps its own
    singleton label and no merging happens.
    """
    a = _validate_data(a)
    n = a.shape[1]
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if n <= cfg.n_clusters:
        return np.arange(n)
    members = [[j] for j in range(n)]
    grams = list(a.T[:, :, None] * a.T[:, None, :])
    # A singleton has dimension 1 unless the point is exactly zero.
    dims = (np.linalg.norm(a, axis=0) > 0.0).astype(float)
    dp = dims**cfg.p
    while len(members) > cfg.n_clusters:
        m_sets = len(members)
        total_pairs = m_sets * (m_sets - 1) // 2
        n_cand = min(cfg.merge_candidates, total_pairs)
        codes = rng.choice(total_pairs, size=n_cand, replace=False)
        ia, ib = _decode_pairs(codes, m_sets)
        gram_stack = np.stack([grams[x] + grams[y] for x, y in zip(ia, ib)])
        evals = np.linalg.eigvalsh(gram_stack)
        spectra = np.sqrt(np.clip(evals, 0.0, None))
        merged_dims = batch_empirical_dimension(spectra, cfg.eps)
        scores = merged_dims**cfg.p - dp[ia] - dp[ib]
        best = int(np.argmin(scores))
        x, y = int(ia[best]), int(ib[best])
        members[x] = members[x] + members[y]
        grams[x] = grams[x] + grams[y]
        dims[x] = merged_dims[best]
        dp[x] = merged_dims[best] ** cfg.p
        del members[y]
        del grams[y]
        dims = np.delete(dims, y)
        dp = np.delete(dp, y)
    labels = np.empty(n, dtype=int)
    for k, idx in enumerate(members):
        labels[idx] = k
    return labels


def _descend_loop(a, m0, cfg, params, outlier):
    """Projected gradient descent; returns (membership, objective trace)."""
    m = np.array(m0, dtype=float)
    n = m.shape[1]
    n_top = -(-n // 10)
    trace = []
    for _ in range(cfg.grad_iters):
        value, grad = _soft_value_and_gradient(a, m, params, outlier)
        trace.append(value)
        col_norms = np.linalg.norm(grad, axis=0)
        rho = float(np.partition(col_norms, n - n_top)[n - n_top :].mean())
        if rho == 0.0:
            break
        m = project_columns(m - (cfg.step_target / rho) * grad)
    value, _ = _soft_value_and_gradient(a, m, params, outlier, want_grad=False)
    trace.append(value)
    return m, np.array(trace)


def _soft_value_and_gradient(a, m, params, outlier, want_grad=True):
    rows = m[1:] if outlier else m
    dims, grows = _soft_dims(a, rows, params, on_degenerate="zero", want_uv=want_grad)
    value = pnorm(dims, params.p)
    if outlier:
        value += params.alpha * float(m[0].sum())
    if not want_grad:
        return value, None
    if outlier:
        grad = np.empty_like(m)
        grad[0] = params.alpha * m[0]
        grad[1:] = _apply_pnorm_chain(dims, grows, params.p)
    else:
        grad = _apply_pnorm_chain(dims, grows, params.p)
    return value, grad


def descend(a, m0, cfg):
    """Run cfg.grad_iters projected gradient iterations on the soft
    global dimension, starting from membership m0.

    Each iteration computes the gradient, scales the step so the
    mean norm of the ceil(N/10) largest gradient columns moves a
    membership vector a distance of cfg.step_target, then projects
    every column back onto the simplex. A zero gradient stops early.
    """
    a = _validate_data(a)
    m0 = np.asarray(m0, dtype=float)
    m, _ = _descend_loop(a, m0, cfg, cfg.objective_params(), outlier=False)
    return m


def threshold(m):
    """Hard labels from a membership matrix: argmax per column, ties to
    the lowest cluster index."""
    m = np.asarray(m, dtype=float)
    return np.argmax(m, axis=0)


def genetic_refine(a, labels, cfg):
    """Greedy single-point reassignment passes.

    Visits points in index order; for each point tries every other
    cluster (all other assignments fixed) and keeps the move only if it
    strictly lowers the hard global dimension. Moves that would empty a
    cluster are disallowed. Stops after cfg.genetic_passes sweeps or
    after the first sweep with no accepted move.
    """
    a = _validate_data(a)
    labels = np.array(labels, dtype=int)
    k_total = cfg.n_clusters
    n = labels.size
    sizes = np.bincount(labels, minlength=k_total)
    dims = hard_cluster_dims(a, labels, k_total, cfg.eps, on_degenerate="zero")
    for _ in range(cfg.genetic_passes):
        changed = False
        for j in range(n):
            k0 = labels[j]
            if sizes[k0] <= 1:
                continue
            gd_cur = pnorm(dims, cfg.p)
            mask_src = labels == k0
            mask_src[j] = False
            dim_src = _dim_of_columns(a[:, mask_src], cfg.eps, "zero")
            best_gd, best_k, best_tgt = gd_cur, -1, 0.0
            for k in range(k_total):
                if k == k0:
                    continue
                mask_tgt = labels == k
                mask_tgt[j] = True
                dim_tgt = _dim_of_columns(a[:, mask_tgt], cfg.eps, "zero")
                cand = dims.copy()
                cand[k0] = dim_src
                cand[k] = dim_tgt
                gd_cand = pnorm(cand, cfg.p)
                if gd_cand < best_gd:
                    best_gd, best_k, best_tgt = gd_cand, k, dim_tgt
            if best_k >= 0:
                labels[j] = best_k
                dims[k0] = dim_src
                dims[best_k] = best_tgt
                sizes[k0] -= 1
                sizes[best_k] += 1
                changed = True
        if not changed:
            break
    return labels


def _run_restart(a, cfg, params, seed_seq):
    rng = np.random.default_rng(seed_seq)
    labels0 = greedy_merge_init(a, cfg, rng)
    m0 = indicator_membership(labels0, cfg.n_clusters)
    m, trace = _descend_loop(a, m0, cfg, params, outlier=False)
    labels = threshold(m)
    labels = genetic_refine(a, labels, cfg)
    dims = hard_cluster_dims(a, labels, cfg.n_clusters, cfg.eps, on_degenerate="zero")
    gd = pnorm(dims, cfg.p)
    return gd, labels, dims, m, trace


def gdm(a, cfg, threads=1):
    """Segment the columns of a into cfg.n_clusters clusters.

    Runs cfg.restarts independent restarts (merge initialization,
    gradient descent, thresholding, reassignment cleanup) and returns
    the result whose hard partition has the lowest global dimension.
    Fully deterministic given cfg.seed; restarts may execute on several
    threads without changing the selected partition.
    """
    a = _validate_data(a)
    n = a.shape[1]
    if cfg.restarts < 1:
        raise InvalidParameterError("gdm needs at least one restart")
    if n <= cfg.n_clusters:
        raise InvalidParameterError(
            "need more points than clusters (N=%d, K=%d)" % (n, cfg.n_clusters)
        )
    params = cfg.objective_params()
    seed_seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    results = [None] * cfg.restarts
    errors = []

    def run(i):
        try:
            results[i] = _run_restart(a, cfg, params, seed_seqs[i])
        except DegenerateClusterError as exc:
            errors.append(exc)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(cfg.restarts)))
    else:
        for i in range(cfg.restarts):
            run(i)

    completed = [(r[0], i) + r[1:] for i, r in enumerate(results) if r is not None]
    if not completed:
        raise errors[-1] if errors else DegenerateClusterError("all restarts failed")
    gd, idx, labels, dims, m, trace = min(completed, key=lambda t: (t[0], t[1]))
    return SegmentationResult(
        labels=labels,
        outliers=np.empty(0, dtype=int),
        gd_value=gd,
        per_cluster_dims=dims,
        membership=m,
        restarts_run=cfg.restarts,
        trace=trace,
        restart_gd_values=np.array([t[0] for t in sorted(completed, key=lambda t: t[1])]),
    )
