"""Kernels and operator-matrix assembly for genus-zero configurations.

The comparison operators map anti-holomorphic Bergman one-forms on one side
of the separating curve to holomorphic ones on either side.  On the sphere
the kernel is L(z, w) = -(1/2 pi i) dw dz / (w - z)^2 and integration
against an anti-holomorphic density reduces by Stokes to a single boundary
integral,

    (T_j conj(alpha))(z) = -(i / 2 pi) ∮_{dSigma_j} hbar(w) / (w - z) dwbar . dz,

over the positively oriented boundary of the source side; for z inside the
source side this equals the principal-value integral (the small-circle
contribution vanishes).  All sign conventions are anchored by the unit
circle, where the cross blocks are the identity in the canonical monomial
bases and the same-side blocks vanish.

Two assembly methods are provided and cross-validated:

* ``series``   - closed forms: identity/zero blocks on the circle,
  normalized Grunsky matrices and Gram factors for exterior polynomial
  curves, explicit mode formulas on the concentric configuration.
* ``quadrature`` - trapezoid evaluation of the boundary integral at sample
  rings inside the target side, followed by a spectral fit in the target
  orthonormal basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import (DimensionMismatch, MethodDisagreement, SingularPoint)
from ._linalg import spectral_norm, spectral_norm_with_residual

__all__ = [
    "OperatorBlock",
    "kernel_L_sphere",
    "kernel_LK_disk",
    "build_T",
    "build_all_T",
    "build_S_and_R",
    "verify_quadratic_identities",
    "schiffer_identity_check",
    "cross_validate",
    "side_dimensions",
]

FIT_RATIO = 0.72  # sample-ring contraction for disk/exterior fits


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

def kernel_L_sphere(z, w):
    """Density of L(z, w) = -(1/2 pi i) dw dz / (w - z)^2 on the sphere."""
    if np.any(np.asarray(z) == np.asarray(w)):
        raise SingularPoint("L kernel evaluated on the diagonal")
    return -1.0 / (2j * np.pi * (np.asarray(w) - np.asarray(z)) ** 2)


def kernel_LK_disk(z, w):
    """(L, K) kernel densities of the unit disk.

    L coincides with the sphere kernel; K(z, w) = (1/2 pi i) / (1 - wbar z)^2
    on dzbar... dz (Bergman kernel of the disk).
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(z == w):
        raise SingularPoint("L kernel evaluated on the diagonal")
    lk = -1.0 / (2j * np.pi * (w - z) ** 2)
    kk = 1.0 / (2j * np.pi * (1.0 - np.conj(w) * z) ** 2)
    return lk, kk


# ---------------------------------------------------------------------------
# Operator blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorBlock:
    """Dense matrix of an operator between tagged orthonormal bases."""

    matrix: np.ndarray
    domain_basis: str
    codomain_basis: str
    method: str
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           np.asarray(self.matrix, dtype=complex))

    @property
    def shape(self):
        return self.matrix.shape

    def adjoint_matrix(self) -> np.ndarray:
        return self.matrix.conj().T

    def norm(self) -> float:
        return spectral_norm(self.matrix)


def side_dimensions(config, order: int):
    """(dim side 1, dim side 2) of the truncated Bergman bases."""
    if isinstance(config, geometry.ConcentricConfig):
        return 2 * order, 2 * order + 1
    return order, order


def _basis_tags(config):
    if isinstance(config, geometry.UnitCircleConfig):
        return "disk-monomial", "exterior-monomial"
    if isinstance(config, geometry.ConcentricConfig):
        return "caps-monomial", "annulus-laurent"
    return "omega1-faber-gram", "omega2-pullback"


# ---------------------------------------------------------------------------
# Series method
# ---------------------------------------------------------------------------

def _series_circle(j, k, order):
    eye = np.eye(order, dtype=complex)
    return eye if j != k else np.zeros((order, order), dtype=complex)


def _poly_factors(gmap, order, buffer_extra=16):
    """Normalized Grunsky block and Faber-form Gram factors.

    The Faber-derivative forms phi_m = F'_m(w) dw / sqrt(pi m) have inner
    products <phi_a, phi_b> = (I - beta beta^H)_{ab}, and the operators act
    on them in closed form (each verified against the boundary-integral
    oracle in the tests):

        T(1->2) phibar_m  has f_n coefficient (I - beta beta^H)_{n+1, m},
        T(2->1) fbar_m    = phi_{m+1} exactly,
        T(1->1) phibar_m  = sum_k (beta^H)_{km} phi_k exactly,
        T(2->2) fbar_m    has f_j coefficient -beta_{j+1, m+1}.

    Coefficient vectors pair through the Gram array
    gamma[a, b] = <phi_{b+1}, phi_{a+1}>, i.e. <phi x, phi y> = y^H gamma x,
    and gamma = I - beta^H beta.  The orthonormalising change of basis is
    ``bc = inv(chol(gamma)^H)``; products are buffered so retained entries
    carry the full inner sums.  Returns (beta, gamma_big, bc, big).
    """
    big = 2 * order + buffer_extra
    beta = geometry.grunsky_coefficients(gmap, big).normalized
    gamma_big = np.eye(big, dtype=complex) - beta.conj().T @ beta
    gamma = gamma_big[:order, :order]
    low = np.linalg.cholesky(0.5 * (gamma + gamma.conj().T))
    basis_change = np.linalg.inv(low.conj().T)
    return beta, gamma_big, basis_change, big


def _series_poly(gmap, j, k, order):
    beta, gamma_big, bc, big = _poly_factors(gmap, order)
    gamma = gamma_big[:order, :order]
    if (j, k) == (2, 2):
        return -beta[:order, :order]
    if (j, k) == (1, 2):
        return gamma.T @ np.conj(bc)
    if (j, k) == (2, 1):
        return bc.conj().T @ gamma
    x11 = (gamma_big @ beta.conj().T)[:order, :order]
    return bc.conj().T @ x11 @ np.conj(bc)


def _series_concentric(cfg, j, k, order):
    rho = cfg.r / cfg.R
    n = np.arange(order)
    cross = np.sqrt(1.0 - rho ** (2 * n + 2))
    if (j, k) == (1, 1):
        m = np.zeros((2 * order, 2 * order), dtype=complex)
        m[order + n, n] = rho ** (n + 1)
        m[n, order + n] = rho ** (n + 1)
        return m
    if (j, k) == (2, 2):
        m = np.zeros((2 * order + 1, 2 * order + 1), dtype=complex)
        ks = np.arange(-(order + 1), order)
        m[-ks - 2 + order + 1, ks + order + 1] = -rho ** np.abs(ks + 1)
        return m
    t12 = np.zeros((2 * order + 1, 2 * order), dtype=complex)
    t12[order - 1 - n, n] = cross          # inner cap -> mode -n-2
    t12[order + 1 + n, order + n] = cross  # outer cap -> mode +n
    if (j, k) == (1, 2):
        return t12
    return t12.T


# ---------------------------------------------------------------------------
# Quadrature method: boundary curves, domain densities, target fitters
# ---------------------------------------------------------------------------

def _nodes(count):
    theta = 2 * np.pi * np.arange(count) / count
    return np.exp(1j * theta)


def _boundary_curves(config, count):
    """List of (points, d(points)/dtheta, orientation in dSigma_1)."""
    u = _nodes(count)
    if isinstance(config, geometry.UnitCircleConfig):
        return [(u, 1j * u, +1.0)]
    if isinstance(config, geometry.ConcentricConfig):
        return [(config.r * u, 1j * config.r * u, +1.0),
                (config.R * u, 1j * config.R * u, -1.0)]
    g = config.gmap
    return [(g(u), g.deriv(u) * 1j * u, +1.0)]


def _domain_conj_densities(config, j, order, count):
    """Columns of conjugated basis densities at the boundary nodes.

    Returns an array of shape (total nodes, dim) stacked over the curves
    in the order produced by :func:`_boundary_curves`.
    """
    u = _nodes(count)
    if isinstance(config, geometry.UnitCircleConfig):
        n = np.arange(order)
        c = np.sqrt((n + 1) / np.pi)
        if j == 1:
            return np.conj(u[:, None] ** n) * c
        return np.conj(u[:, None] ** (-n - 2)) * c
    if isinstance(config, geometry.ConcentricConfig):
        n = np.arange(order)
        cin = np.sqrt((n + 1) / np.pi) * config.r ** (-n - 1.0)
        cout = np.sqrt((n + 1) / np.pi) * config.R ** (n + 1.0)
        win = config.r * u
        wout = config.R * u
        if j == 1:
            inner = np.conj(win[:, None] ** n) * cin
            outer = np.conj(wout[:, None] ** (-n - 2)) * cout
            block_in = np.concatenate(
                [inner, np.zeros((count, order), dtype=complex)], axis=1)
            block_out = np.concatenate(
                [np.zeros((count, order), dtype=complex), outer], axis=1)
            return np.concatenate([block_in, block_out], axis=0)
        ks = np.arange(-(order + 1), order)
        norms = np.sqrt(_annulus_mode_norms(config, order))
        rows = []
        for w in (win, wout):
            rows.append(np.conj(w[:, None] ** ks) / norms)
        return np.concatenate(rows, axis=0)
    g = config.gmap
    if j == 1:
        phi = _faber_form_values(g, order, u)
        bc = _poly_factors(g, order)[2]
        return np.conj(phi @ bc)
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)
    dens = (u[:, None] ** (-n - 2)) * c / g.deriv(u)[:, None]
    return np.conj(dens)


def _annulus_mode_norms(cfg, order):
    """Squared norms of z^k dz on the annulus, k = -(order+1) .. order-1."""
    ks = np.arange(-(order + 1), order)
    out = np.empty(len(ks))
    for i, k in enumerate(ks):
        if k == -1:
            out[i] = 2 * np.pi * np.log(cfg.R / cfg.r)
        else:
            out[i] = np.pi * (cfg.R ** (2 * k + 2) - cfg.r ** (2 * k + 2)) \
                / (k + 1)
    return out


def _faber_form_values(gmap, order, u):
    """Values of the Faber-derivative densities F'_m(g(u)) / sqrt(pi m).

    Uses the pull-back identity F'_m(g(u)) g'(u) = m u^{m-1}
    - m sum_k k b_{mk} u^{-k-1}; columns m = 1..order.
    """
    big = 2 * order + 8
    b = geometry.grunsky_coefficients(gmap, big).b
    gp = gmap.deriv(u)
    cols = []
    ks = np.arange(1, big + 1)
    um = u[:, None] ** (-ks - 1)
    for m in range(1, order + 1):
        vals = m * u ** (m - 1) - m * (um @ (ks * b[m - 1, :]))
        cols.append(vals / (gp * np.sqrt(np.pi * m)))
    return np.stack(cols, axis=1)


def _cauchy_images(curves, conj_density, side_sign, targets):
    """Boundary-integral image values at the target points.

    F(z) = -(i / M) * sum over nodes of orient*side_sign*dens*conj(w')/(w-z).
    """
    count = curves[0][0].shape[0]
    total = np.zeros((len(targets), conj_density.shape[1]), dtype=complex)
    row = 0
    for pts, dpts, orient in curves:
        dens = conj_density[row:row + count]
        row += count
        cau = 1.0 / (pts[None, :] - targets[:, None])
        weights = orient * side_sign * np.conj(dpts)
        total += cau @ (dens * weights[:, None])
    return -1j / count * total


def _fit_disk(values, radius_ring, order, scale):
    """Fit F = sum t_n z^n from ring samples; return t_n / scale_n."""
    count = len(values)
    fft = np.fft.fft(values) / count
    n = np.arange(order)
    return fft[n] / radius_ring ** n / scale


def _fit_exterior(values, radius_ring, order, scale):
    """Fit F = sum t_n z^{-n-2} from ring samples; return t_n / scale_n."""
    count = len(values)
    fft = np.fft.fft(values) / count
    n = np.arange(order)
    return fft[(-n - 2) % count] * radius_ring ** (n + 2.0) / scale


def _codomain_fit(config, k, order, count):
    """(target points, fitter) for expanding holomorphic densities on side k."""
    u = _nodes(count)
    if isinstance(config, geometry.UnitCircleConfig):
        n = np.arange(order)
        c = np.sqrt((n + 1) / np.pi)
        if k == 1:
            rho = FIT_RATIO
            return rho * u, lambda vals: _fit_disk(vals, rho, order, c)
        rho = 1.0 / FIT_RATIO
        return rho * u, lambda vals: _fit_exterior(vals, rho, order, c)
    if isinstance(config, geometry.ConcentricConfig):
        n = np.arange(order)
        if k == 1:
            cin = np.sqrt((n + 1) / np.pi) * config.r ** (-n - 1.0)
            cout = np.sqrt((n + 1) / np.pi) * config.R ** (n + 1.0)
            rin = FIT_RATIO * config.r
            rout = config.R / FIT_RATIO
            pts = np.concatenate([rin * u, rout * u])

            def fit(vals):
                inner = _fit_disk(vals[:count], rin, order, cin)
                outer = _fit_exterior(vals[count:], rout, order, cout)
                return np.concatenate([inner, outer])
            return pts, fit
        q = (config.R / config.r) ** 0.25
        rlo, rhi = config.r * q, config.R / q
        pts = np.concatenate([rlo * u, rhi * u])
        norms = np.sqrt(_annulus_mode_norms(config, order))
        ks = np.arange(-(order + 1), order)

        def fit(vals):
            flo = np.fft.fft(vals[:count]) / count
            fhi = np.fft.fft(vals[count:]) / count
            out = np.empty(len(ks), dtype=complex)
            for i, kk in enumerate(ks):
                if kk >= 0:
                    out[i] = fhi[kk % count] / rhi ** kk
                else:
                    out[i] = flo[kk % count] / rlo ** kk
            return out * norms
        return pts, fit
    g = config.gmap
    rho_in = g.safe_inner_radius()
    if k == 1:
        ring = rho_in * u
        pts = g(ring)
        gp = g.deriv(ring)
        _, gamma_big, bc, big = _poly_factors(g, order)
        # True projections onto the orthonormal span: expand the image in
        # the (non-orthogonal) Faber forms well past the truncation, then
        # contract with the Gram.  The expansion coefficients come from the
        # positive Laurent powers alone because only phi_m carries u^{m-1}.
        nmodes = min(big, count // 2 - 2)
        proj = bc.conj().T @ gamma_big[:order, :nmodes]

        def fit(vals):
            pulled = vals * gp
            fft = np.fft.fft(pulled) / count
            m = np.arange(1, nmodes + 1)
            cphi = np.sqrt(np.pi / m) * fft[m - 1] / rho_in ** (m - 1.0)
            return proj @ cphi
        return pts, fit
    rho_out = 1.0 / rho_in
    ring = rho_out * u
    pts = g(ring)
    gp = g.deriv(ring)
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)

    def fit(vals):
        return _fit_exterior(vals * gp, rho_out, order, c)
    return pts, fit


def _quadrature_block(config, j, k, order, count):
    curves = _boundary_curves(config, count)
    dens = _domain_conj_densities(config, j, order, count)
    targets, fit = _codomain_fit(config, k, order, count)
    side_sign = 1.0 if j == 1 else -1.0
    images = _cauchy_images(curves, dens, side_sign, targets)
    cols = [fit(images[:, c]) for c in range(images.shape[1])]
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# Public assembly
# ---------------------------------------------------------------------------

def build_T(config, j, k, order, method="series", nodes=512) -> OperatorBlock:
    """Matrix of the comparison operator from side j to side k.

    Domain: anti-holomorphic Bergman basis of side j; codomain: holomorphic
    Bergman basis of side k.  For j = k the same-side kernel cancellation is
    built into both methods (no principal-value quadrature is performed).
    """
    if j not in (1, 2) or k not in (1, 2):
        raise DimensionMismatch("sides must be 1 or 2")
    geometry.validate_config(config)
    tags = _basis_tags(config)
    if method == "series":
        if isinstance(config, geometry.UnitCircleConfig):
            mat = _series_circle(j, k, order)
        elif isinstance(config, geometry.ConcentricConfig):
            mat = _series_concentric(config, j, k, order)
        else:
            mat = _series_poly(config.gmap, j, k, order)
    elif method == "quadrature":
        mat = _quadrature_block(config, j, k, order, nodes)
    else:
        raise DimensionMismatch(f"unknown method {method!r}")
    return OperatorBlock(mat, f"conj({tags[j - 1]})", tags[k - 1],
                         method, order)


def build_all_T(config, order, method="series", nodes=512):
    """All four blocks keyed by (source side, target side)."""
    return {(j, k): build_T(config, j, k, order, method, nodes)
            for j in (1, 2) for k in (1, 2)}


def build_S_and_R(config, k, order):
    """Bergman-projection and restriction blocks; both trivial at genus zero.

    The sphere carries no holomorphic one-forms, so the S block is the zero
    map into a zero-dimensional space and the restriction block has an
    empty domain.  Basis tags are kept so adjoint checks degenerate cleanly.
    """
    tags = _basis_tags(config)
    dim = side_dimensions(config, order)[k - 1]
    s_block = OperatorBlock(np.zeros((0, dim)), tags[k - 1],
                            "compact-holomorphic", "series", order)
    r_block = OperatorBlock(np.zeros((dim, 0)), "compact-holomorphic",
                            tags[k - 1], "series", order)
    return s_block, r_block


def verify_quadratic_identities(blocks, genus_zero=True):
    """Spectral-norm residuals of the quadratic and adjoint identities.

    ``blocks`` maps (j, k) to OperatorBlock.  Returns a dict of residuals:
    two resolution-of-identity defects, two cross-term defects, and the
    entrywise adjoint cross-checks.  The S-augmented forms coincide with
    these at genus zero where the S blocks are zero-dimensional.
    """
    t = {key: blk.matrix for key, blk in blocks.items()}
    eye1 = np.eye(t[(1, 1)].shape[1])
    eye2 = np.eye(t[(2, 2)].shape[1])
    out = {}
    out["identity_1"], out["identity_1_iterres"] = spectral_norm_with_residual(
        eye1 - (t[(1, 1)].conj().T @ t[(1, 1)]
                + t[(1, 2)].conj().T @ t[(1, 2)]))
    out["identity_2"], out["identity_2_iterres"] = spectral_norm_with_residual(
        eye2 - (t[(2, 1)].conj().T @ t[(2, 1)]
                + t[(2, 2)].conj().T @ t[(2, 2)]))
    out["cross_12"], out["cross_12_iterres"] = spectral_norm_with_residual(
        t[(1, 1)].conj().T @ t[(2, 1)] + t[(1, 2)].conj().T @ t[(2, 2)])
    out["cross_21"], out["cross_21_iterres"] = spectral_norm_with_residual(
        t[(2, 2)].conj().T @ t[(1, 2)] + t[(2, 1)].conj().T @ t[(1, 1)])
    for (j, k) in ((1, 2), (1, 1), (2, 2)):
        diff = t[(j, k)].conj().T - np.conj(t[(k, j)])
        out[f"adjoint_{j}{k}"] = float(np.max(np.abs(diff))) if diff.size \
            else 0.0
    return out


def cross_validate(config, order, nodes=512, tol=1e-7):
    """Max entrywise difference between series and quadrature assemblies.

    Raises MethodDisagreement beyond ``tol``; this is a first-class
    diagnostic for sign or normalization drift, not a fallback.
    """
    worst = 0.0
    for j in (1, 2):
        for k in (1, 2):
            a = build_T(config, j, k, order, "series").matrix
            b = build_T(config, j, k, order, "quadrature", nodes).matrix
            worst = max(worst, float(np.max(np.abs(a - b))))
    if worst > tol:
        raise MethodDisagreement(
            f"series vs quadrature blocks differ by {worst:.3e} > {tol:.1e}")
    return worst


def schiffer_identity_check(config, mode_index, nodes=512, n_samples=5):
    """Residual of the vanishing integral of the own-side kernel.

    Integrating the source side's own kernel against one of its
    anti-holomorphic basis forms gives zero.  On circle configurations the
    own kernel is the sphere kernel, so the boundary-reduced principal
    value itself must vanish at interior sample points.  On polynomial
    curves the interior kernel is not closed-form; there the vanishing is
    equivalent to the principal-value boundary integral agreeing with the
    desingularized series block, and the residual reported is that
    difference, evaluated pointwise.
    """
    count = nodes
    if isinstance(config, geometry.UnitCircleConfig):
        u = _nodes(count)
        n = mode_index
        c = np.sqrt((n + 1) / np.pi)
        dens = (np.conj(u ** n) * c)[:, None]
        targets = 0.45 * _nodes(n_samples)
        vals = _cauchy_images([(u, 1j * u, +1.0)], dens, 1.0, targets)
        return float(np.max(np.abs(vals)))
    if isinstance(config, geometry.ConcentricConfig):
        u = _nodes(count)
        n = mode_index
        cin = np.sqrt((n + 1) / np.pi) * config.r ** (-n - 1.0)
        dens = (np.conj((config.r * u) ** n) * cin)[:, None]
        targets = 0.45 * config.r * _nodes(n_samples)
        vals = _cauchy_images([(config.r * u, 1j * config.r * u, +1.0)],
                              dens, 1.0, targets)
        return float(np.max(np.abs(vals)))
    g = config.gmap
    order = max(mode_index + 4, 24)
    dens = _domain_conj_densities(config, 1, order, count)[:, [mode_index]]
    rho = g.safe_inner_radius()
    ring = (rho * 0.9) * _nodes(n_samples)
    targets = g(ring)
    pv_vals = _cauchy_images(_boundary_curves(config, count), dens, 1.0,
                             targets)[:, 0]
    block = build_T(config, 1, 1, order, "series")
    col = block.matrix[:, mode_index]
    phi = _faber_form_values(g, order, ring)
    bc = _poly_factors(g, order)[2]
    series_vals = (phi @ bc) @ col
    return float(np.max(np.abs(pv_vals - series_vals)))
