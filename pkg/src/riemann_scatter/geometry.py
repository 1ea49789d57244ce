"""Separating-curve configurations and their polynomial machinery.

Exterior maps g(z) = z + b0 + sum b_k z^{-k} define analytic separating
curves Gamma = g(S^1).  The curve is oriented by increasing theta in
z = g(e^{i theta}); this is the positive orientation of the bounded side.
The module provides the univalence certificate, Grunsky coefficients and
Faber polynomials of g, area moments of the bounded side by Stokes
reduction to the boundary, Gram-orthonormal polynomial bases, interior
Dirichlet solves by boundary least squares, and the annulus harmonic
measure with its boundary period matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import boundary
from .errors import (DimensionMismatch, IllConditioned, InvalidConfig,
                     NonConvergent, ResidualTooLarge, SeriesOverflow)

__all__ = [
    "ExteriorMapPoly",
    "UnitCircleConfig",
    "ConcentricConfig",
    "ExteriorPolyConfig",
    "GrunskyData",
    "HarmonicMeasureAnnulus",
    "HarmonicPolyFunction",
    "ValidationReport",
    "validate_config",
    "grunsky_coefficients",
    "area_moment",
    "area_moment_matrix",
    "gram_orthonormal_basis",
    "interior_dirichlet_solve",
    "harmonic_measure",
    "period_matrix",
]

SERIES_MAGNITUDE_BOUND = 1e8
GRAM_CONDITION_BOUND = 1e12


# ---------------------------------------------------------------------------
# Maps and configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExteriorMapPoly:
    """g(z) = z + b0 + sum_{k=1}^{d} b_k z^{-k}, univalent on |z| > 1."""

    b0: complex = 0.0
    tail: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "tail",
                           np.asarray(self.tail, dtype=complex))

    @property
    def degree(self) -> int:
        return len(self.tail)

    def tail_weight(self) -> float:
        """sum k |b_k|; the univalence certificate requires this < 1."""
        k = np.arange(1, self.degree + 1, dtype=float)
        return float(np.sum(k * np.abs(self.tail)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = z + self.b0
        for k, bk in enumerate(self.tail, start=1):
            out = out + bk * z ** (-k)
        return out

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for k, bk in enumerate(self.tail, start=1):
            out = out - k * bk * z ** (-k - 1)
        return out

    def deriv_bound(self, rho: float) -> float:
        """Upper bound on |g'(z) - 1| for |z| >= rho."""
        k = np.arange(1, self.degree + 1, dtype=float)
        return float(np.sum(k * np.abs(self.tail) * rho ** (-k - 1)))

    def safe_inner_radius(self, target=0.7, grid=(0.8, 0.85, 0.9, 0.95, 0.97)):
        """Smallest grid radius rho < 1 with deriv_bound(rho) <= target."""
        for rho in grid:
            if self.deriv_bound(rho) <= target:
                return rho
        raise InvalidConfig("map tail too large for interior sample rings")


@dataclass(frozen=True)
class UnitCircleConfig:
    """Gamma = unit circle; side 1 the disk, side 2 the exterior."""

    kind: str = "unit_circle"


@dataclass(frozen=True)
class ConcentricConfig:
    """Two concentric circles |z| = r and |z| = R.

    Side 2 is the annulus between them, side 1 the two caps (the disk
    |z| < r and the exterior |z| > R).
    """

    r: float
    R: float
    kind: str = "concentric"

    def __post_init__(self):
        if not 0 < self.r < self.R:
            raise InvalidConfig("require 0 < r < R")


@dataclass(frozen=True)
class ExteriorPolyConfig:
    """Gamma = g(S^1); side 1 the bounded interior, side 2 the exterior."""

    gmap: ExteriorMapPoly
    kappa_max: float = 0.9
    kind: str = "exterior_poly"


CurveConfig = (UnitCircleConfig, ConcentricConfig, ExteriorPolyConfig)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    margin: float
    rho_estimate: float
    message: str


def validate_config(config) -> ValidationReport:
    """Univalence certificate and analytic-extension estimate for a config.

    For an exterior polynomial map the certificate is
    sum k |b_k| <= kappa_max; margin = 1 - sum k |b_k|.  The extension
    radius estimate is (sum k |b_k|)^{1/(d+1)}.

    Raises InvalidConfig when the certificate fails.
    """
    if isinstance(config, UnitCircleConfig):
        return ValidationReport(True, 1.0, 0.0, "unit circle")
    if isinstance(config, ConcentricConfig):
        return ValidationReport(True, 1.0, 0.0,
                                f"concentric r={config.r} R={config.R}")
    g = config.gmap
    weight = g.tail_weight()
    margin = 1.0 - weight
    if g.degree == 0:
        return ValidationReport(True, 1.0, 0.0, "identity exterior map")
    rho = weight ** (1.0 / (g.degree + 1)) if weight > 0 else 0.0
    if weight > config.kappa_max:
        raise InvalidConfig(
            f"univalence certificate failed: sum k|b_k| = {weight:.6f} "
            f"> kappa_max = {config.kappa_max}; margin = {margin:.6f}")
    return ValidationReport(True, margin, rho,
                            f"certificate ok, margin {margin:.6f}")


# ---------------------------------------------------------------------------
# Grunsky coefficients and Faber polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrunskyData:
    """Grunsky coefficients b_mn of g and the monic Faber polynomials.

    ``b[m-1, n-1]`` holds b_mn; ``normalized`` holds sqrt(mn) b_mn.
    ``faber[n]`` are the coefficients (ascending powers) of the monic
    polynomial F_n with F_n(g(z)) = z^n + O(1/z); faber[0] = [1].
    """

    b: np.ndarray
    normalized: np.ndarray
    faber: list


def _laurent_mul(a, b, depth):
    """Product of two series in (x, y) = (z^{-1}, zeta^{-1}), truncated.

    Arrays are indexed [i, j] for x^i y^j, 0 <= i, j <= depth.
    """
    out = np.zeros((depth + 1, depth + 1), dtype=complex)
    ai, aj = np.nonzero(a)
    for i, j in zip(ai, aj):
        imax = depth - i + 1
        jmax = depth - j + 1
        out[i:, j:] += a[i, j] * b[:imax, :jmax]
    return out


def grunsky_coefficients(gmap: ExteriorMapPoly, order: int) -> GrunskyData:
    """Expand log((g(z) - g(zeta)) / (z - zeta)) = -sum b_mn z^{-m} zeta^{-n}.

    The quotient is the bivariate polynomial
        1 - sum_k b_k sum_{i=0}^{k-1} z^{-(k-i)} zeta^{-(i+1)}
    and the logarithm is taken by formal power series, truncated at
    total degree ``order`` in each variable.  Faber polynomials come from
    triangular coefficient matching on Laurent series of powers of g.
    """
    depth = order
    u = np.zeros((depth + 1, depth + 1), dtype=complex)
    for k, bk in enumerate(gmap.tail, start=1):
        if bk == 0:
            continue
        for i in range(k):
            xi, yj = k - i, i + 1
            if xi <= depth and yj <= depth:
                u[xi, yj] -= bk
    # log(1 + u) = u - u^2/2 + u^3/3 - ...
    log_f = np.zeros_like(u)
    term = u.copy()
    j = 1
    while np.any(term) and j <= depth:
        log_f += ((-1) ** (j + 1) / j) * term
        term = _laurent_mul(term, u, depth)
        j += 1
    b = -log_f[1:order + 1, 1:order + 1]
    if np.any(np.abs(b) > SERIES_MAGNITUDE_BOUND):
        raise SeriesOverflow("Grunsky coefficients exceed magnitude bound")
    m = np.arange(1, order + 1, dtype=float)
    normalized = np.sqrt(np.outer(m, m)) * b
    return GrunskyData(b, normalized, _faber_polynomials(gmap, order))


def _g_laurent_powers(gmap: ExteriorMapPoly, order: int, depth: int):
    """Laurent coefficients of g(z)^m for m = 0..order.

    Returns a list of dicts {power: coeff} with powers in [-depth, m].
    """
    base = {1: 1.0 + 0j}
    if gmap.b0 != 0:
        base[0] = complex(gmap.b0)
    for k, bk in enumerate(gmap.tail, start=1):
        if bk != 0:
            base[-k] = complex(bk)
    powers = [{0: 1.0 + 0j}]
    for m in range(1, order + 1):
        prev = powers[-1]
        cur = {}
        for p, c in prev.items():
            for q, d in base.items():
                s = p + q
                if s >= -depth:
                    cur[s] = cur.get(s, 0.0 + 0j) + c * d
        powers.append(cur)
    return powers


def _faber_polynomials(gmap: ExteriorMapPoly, order: int) -> list:
    depth = order * (gmap.degree + 1) + 1
    gp = _g_laurent_powers(gmap, order, depth)
    faber = [np.array([1.0 + 0j])]
    for n in range(1, order + 1):
        # F_n = w^n + lower order; choose coefficients to cancel the
        # z^0..z^{n-1} parts of F_n(g(z)).
        coeffs = np.zeros(n + 1, dtype=complex)
        coeffs[n] = 1.0
        residual = dict(gp[n])
        for p in range(n - 1, -1, -1):
            c = residual.get(p, 0.0 + 0j)
            if c != 0:
                coeffs[p] -= c
                for q, d in gp[p].items():
                    residual[q] = residual.get(q, 0.0 + 0j) - c * d
        faber.append(coeffs)
    return faber


def faber_eval(faber_coeffs: np.ndarray, w):
    """Evaluate a Faber polynomial given ascending coefficients."""
    w = np.asarray(w, dtype=complex)
    out = np.zeros_like(w)
    for c in faber_coeffs[::-1]:
        out = out * w + c
    return out


# ---------------------------------------------------------------------------
# Area moments and Gram bases on the bounded side
# ---------------------------------------------------------------------------

def _circle_nodes(nodes: int):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    return np.exp(1j * theta)


def area_moment(gmap: ExteriorMapPoly, j: int, k: int, nodes: int,
                tol=1e-10) -> complex:
    """∬_{Omega_1} w^j wbar^k dA as a boundary integral.

    Stokes reduction: (1 / (2 i (k+1))) ∮_Gamma w^j wbar^{k+1} dw with
    w = g(e^{i theta}); trapezoid quadrature, spectral in the node count.
    A Richardson check against half the nodes guards convergence.
    """
    if j < 0 or k < 0:
        raise DimensionMismatch("moments need j, k >= 0")

    def value(m):
        z = _circle_nodes(m)
        w = gmap(z)
        dw = gmap.deriv(z) * 1j * z * (2 * np.pi / m)
        return complex(np.sum(w ** j * np.conj(w) ** (k + 1) * dw)
                       / (2j * (k + 1)))

    fine = value(nodes)
    coarse = value(max(nodes // 2, 8))
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise NonConvergent(
            f"area moment ({j},{k}) moved {abs(fine - coarse):.3e} "
            f"under node halving")
    return fine


def area_moment_matrix(gmap: ExteriorMapPoly, order: int, nodes: int
                       ) -> np.ndarray:
    """Matrix of moments ∬ w^j wbar^k dA for 0 <= j, k < order."""
    z = _circle_nodes(nodes)
    w = gmap(z)
    dw = gmap.deriv(z) * 1j * z * (2 * np.pi / nodes)
    wj = w[:, None] ** np.arange(order)
    wbk = np.conj(w)[:, None] ** np.arange(1, order + 1)
    raw = (wj * dw[:, None]).T @ wbk
    return raw / (2j * np.arange(1, order + 1)[None, :])


def gram_orthonormal_basis(gmap: ExteriorMapPoly, order: int, nodes: int
                           ) -> np.ndarray:
    """Upper-triangular change of basis orthonormalising w^j dw on Omega_1.

    Returns C with columns defining phi_j = sum_k C[k, j] w^k dw such that
    <phi_i, phi_j> = delta_ij in the inner product ∬ h1 conj(h2) dA.
    For the identity map C is diagonal with entries sqrt((n+1)/pi).
    """
    gram = area_moment_matrix(gmap, order, nodes)
    gram = 0.5 * (gram + gram.conj().T)
    svals = np.linalg.svd(gram, compute_uv=False)
    if svals[-1] <= 0 or svals[0] / svals[-1] > GRAM_CONDITION_BOUND:
        raise IllConditioned(
            f"monomial Gram condition {svals[0] / max(svals[-1], 1e-300):.3e} "
            f"exceeds {GRAM_CONDITION_BOUND:.0e}")
    low = np.linalg.cholesky(gram)
    return np.linalg.inv(low.conj().T)


# ---------------------------------------------------------------------------
# Interior Dirichlet solve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicPolyFunction:
    """c0 + sum_{k>=1} p_k w^k + sum_{k>=1} qbar_k wbar^k on the bounded side."""

    c0: complex
    p: np.ndarray
    qbar: np.ndarray
    residual: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=complex))
        object.__setattr__(self, "qbar", np.asarray(self.qbar, dtype=complex))

    @property
    def order(self) -> int:
        return len(self.p)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        k = np.arange(1, self.order + 1)
        wp = w[..., None] ** k
        return self.c0 + wp @ self.p + np.conj(wp) @ self.qbar


def interior_dirichlet_solve(gmap: ExteriorMapPoly, boundary_values,
                             order: int, nodes: int,
                             max_residual=1e-8) -> HarmonicPolyFunction:
    """Least-squares harmonic polynomial matching boundary data on Gamma.

    ``boundary_values`` is either an array of samples at the nodes
    theta_i = 2 pi i / nodes (taken at w = g(e^{i theta_i})) or a
    FourierFunction in theta.  The fit runs in the Faber basis of the
    curve (well conditioned) and is converted back to monomials.
    """
    z = _circle_nodes(nodes)
    if isinstance(boundary_values, boundary.FourierFunction):
        vals = boundary_values(2 * np.pi * np.arange(nodes) / nodes)
    else:
        vals = np.asarray(boundary_values, dtype=complex)
        if vals.shape != (nodes,):
            raise DimensionMismatch("boundary samples must match node count")
    gdata = grunsky_coefficients(gmap, max(order - 1, 1))
    w = gmap(z)
    cols = [np.ones(nodes, dtype=complex)]
    for n in range(1, order):
        cols.append(faber_eval(gdata.faber[n], w))
    for n in range(1, order):
        cols.append(np.conj(faber_eval(gdata.faber[n], w)))
    design = np.stack(cols, axis=1)
    svals = np.linalg.svd(design, compute_uv=False)
    if svals[-1] <= 0 or svals[0] / svals[-1] > GRAM_CONDITION_BOUND:
        raise IllConditioned("boundary fit matrix is numerically singular")
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.linalg.norm(design @ coef - vals)
                  / max(1.0, np.linalg.norm(vals)))
    if resid > max_residual:
        raise ResidualTooLarge(
            f"boundary misfit {resid:.3e} exceeds {max_residual:.1e}")
    c0 = complex(coef[0])
    p = np.zeros(order - 1, dtype=complex)
    qbar = np.zeros(order - 1, dtype=complex)
    for n in range(1, order):
        fc = gdata.faber[n]
        c0 += coef[n] * fc[0] + np.conj(np.conj(coef[order - 1 + n]) * fc[0])
        p[:n] += coef[n] * fc[1:n + 1]
        qbar[:n] += coef[order - 1 + n] * np.conj(fc[1:n + 1])
    return HarmonicPolyFunction(c0, p, qbar, resid)


# ---------------------------------------------------------------------------
# Annulus harmonic measure and the boundary period matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicMeasureAnnulus:
    """omega = (log|z| - log r) / log(R/r): 0 on |z| = r, 1 on |z| = R.

    d omega splits as d_holo dz/z + conj(d_holo) dzbar/zbar with
    d_holo = 1 / (2 log(R/r)).
    """

    r: float
    R: float
    omega: boundary.AnnulusHarmonicFunction
    d_holo: complex

    def del_density(self, z):
        """Density of the dz part of d omega."""
        return self.d_holo / np.asarray(z, dtype=complex)

    def delbar_density(self, z):
        """Density of the dzbar part of d omega."""
        return np.conj(self.d_holo) / np.conj(np.asarray(z, dtype=complex))


def harmonic_measure(r: float, R: float) -> HarmonicMeasureAnnulus:
    if not 0 < r < R:
        raise InvalidConfig("require 0 < r < R")
    log_ratio = np.log(R / r)
    zeros = np.zeros(1, dtype=complex)
    omega = boundary.AnnulusHarmonicFunction(
        -np.log(r) / log_ratio, 1.0 / log_ratio,
        zeros, zeros.copy(), zeros.copy(), zeros.copy(), (r, R))
    return HarmonicMeasureAnnulus(r, R, omega, 0.5 / log_ratio)


def period_matrix(r: float, R: float) -> np.ndarray:
    """Boundary period matrix of the annulus: the 1x1 matrix [2 pi / log(R/r)]."""
    if not 0 < r < R:
        raise InvalidConfig("require 0 < r < R")
    return np.array([[2 * np.pi / np.log(R / r)]])
