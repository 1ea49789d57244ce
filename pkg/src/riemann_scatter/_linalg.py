"""Dense linear-algebra helpers: deterministic norms, numerical rank, angles."""

from __future__ import annotations

import numpy as np

from .errors import ThresholdAmbiguous

POWER_ITER_CAP = 200
POWER_ITER_SEED = 0


def spectral_norm_with_residual(a, tol=1e-14, max_iter=POWER_ITER_CAP,
                                seed=POWER_ITER_SEED):
    """Largest singular value of ``a`` by power iteration on a^H a.

    Deterministic: fixed RNG seed, fixed iteration cap.  Returns
    ``(value, residual)`` where ``residual`` is the relative change of the
    Rayleigh quotient at the final iteration.
    """
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    lam = 0.0
    res = np.inf
    for _ in range(max_iter):
        y = a.conj().T @ (a @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, 0.0
        lam_new = float(np.real(np.vdot(x, y)))
        res = abs(lam_new - lam) / max(lam_new, np.finfo(float).tiny)
        lam = lam_new
        x = y / ny
        if res < tol:
            break
    return float(np.sqrt(max(lam, 0.0))), float(res)


def spectral_norm(a, **kw):
    return spectral_norm_with_residual(a, **kw)[0]


def numerical_rank(svals, threshold, guard=10.0):
    """Count singular values >= threshold, refusing ambiguous gaps.

    Raises ThresholdAmbiguous when any singular value lies within a factor
    ``guard`` of the threshold on either side.
    """
    svals = np.asarray(svals, dtype=float)
    if svals.size == 0:
        return 0
    near = (svals > threshold / guard) & (svals < threshold * guard)
    if np.any(near):
        raise ThresholdAmbiguous(
            f"singular value {svals[near][0]:.3e} within {guard}x of "
            f"threshold {threshold:.3e}")
    return int(np.count_nonzero(svals >= threshold))


def kernel_cokernel(matrix, rel_threshold=1e-6, guard=10.0):
    """(dim ker, dim coker, index, svals) of a dense block via SVD."""
    m = np.asarray(matrix, dtype=complex)
    rows, cols = m.shape
    if m.size == 0:
        return cols, rows, cols - rows, np.zeros(0)
    svals = np.linalg.svd(m, compute_uv=False)
    thr = rel_threshold * svals[0] if svals[0] > 0 else rel_threshold
    rank = numerical_rank(svals, thr, guard=guard)
    return cols - rank, rows - rank, cols - rows, svals


def subspace_angle(u, v):
    """Principal angle (radians) between the spans of column sets u, v."""
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    v = np.atleast_2d(np.asarray(v, dtype=complex))
    if u.shape[0] == 1:
        u = u.T
    if v.shape[0] == 1:
        v = v.T
    qu, _ = np.linalg.qr(u)
    qv, _ = np.linalg.qr(v)
    s = np.linalg.svd(qu.conj().T @ qv, compute_uv=False)
    c = min(1.0, max(s[0], 0.0) if s.size else 0.0)
    return float(np.arccos(c))


def condition_number(a):
    s = np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)
    if s[-1] == 0:
        return np.inf
    return float(s[0] / s[-1])
