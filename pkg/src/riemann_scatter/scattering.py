"""Genus-zero scattering matrices, period maps, index counts, and the
holomorphic boundary value problem.

The scattering matrix in matched orthonormal bases is the block operator

    ( -conj(T11)  -conj(T21) )
    ( -conj(T12)  -conj(T22) )

sending the holomorphic parts of a pair of matched harmonic one-forms to
their anti-holomorphic parts; unitarity is equivalent to the quadratic
operator identities.  The compact surface carries no holomorphic one-forms
at genus zero, so the catalyzing slot of a matched triple is empty and
matching reduces to equality of boundary classes under overfare.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry, jump, schiffer
from ._linalg import (condition_number, kernel_cokernel, spectral_norm,
                      spectral_norm_with_residual, subspace_angle)
from .errors import DimensionMismatch, NonConvergent, NotSemiExact

__all__ = [
    "CompatibleTriple",
    "ScatteringMatrix",
    "build_scattering_genus0",
    "scatter",
    "compatible_from",
    "cohomology_period_check",
    "index_estimate",
    "period_map",
    "grunsky_operator",
    "solve_holomorphic_bvp",
    "harmonic_measure_operator_check",
]


@dataclass(frozen=True)
class CompatibleTriple:
    """Matched harmonic one-forms on the two sides plus catalyzing data.

    Coefficient vectors live in the orthonormal bases used by the operator
    blocks; ``zeta`` holds the compact-surface harmonic-form coefficients
    (empty at genus zero, (dz, dzbar) pair on the torus).
    """

    alpha1: np.ndarray
    beta1bar: np.ndarray
    alpha2: np.ndarray
    beta2bar: np.ndarray
    zeta: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        for name in ("alpha1", "beta1bar", "alpha2", "beta2bar", "zeta"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=complex))


@dataclass(frozen=True)
class ScatteringMatrix:
    """Assembled block scattering matrix with its unitarity defect."""

    blocks: dict
    matrix: np.ndarray
    unitarity_residual: float
    config_kind: str
    truncation: int

    def dims(self):
        d1 = self.blocks[(1, 1)].shape[1]
        d2 = self.blocks[(2, 2)].shape[1]
        return d1, d2


def build_scattering_genus0(config, order, method="series",
                            nodes=512) -> ScatteringMatrix:
    """Assemble the two-by-two block scattering matrix at genus zero."""
    t = schiffer.build_all_T(config, order, method, nodes)
    d1, d2 = schiffer.side_dimensions(config, order)
    mat = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    mat[:d1, :d1] = -np.conj(t[(1, 1)].matrix)
    mat[:d1, d1:] = -np.conj(t[(2, 1)].matrix)
    mat[d1:, :d1] = -np.conj(t[(1, 2)].matrix)
    mat[d1:, d1:] = -np.conj(t[(2, 2)].matrix)
    res = spectral_norm(mat.conj().T @ mat - np.eye(d1 + d2))
    return ScatteringMatrix(t, mat, float(res), config.kind, order)


def scatter(s: ScatteringMatrix, t: CompatibleTriple):
    """Apply the scattering matrix to the holomorphic input data.

    Returns (beta1bar, beta2bar) predicted from (alpha1, alpha2) at genus
    zero.  Torus triples carry their catalyzing slot through the mode
    machinery in the torus module instead.
    """
    d1, d2 = s.dims()
    if len(t.alpha1) != d1 or len(t.alpha2) != d2:
        raise DimensionMismatch("triple does not match the matrix blocks")
    out = s.matrix @ np.concatenate([t.alpha1, t.alpha2])
    return out[:d1], out[d1:]


# ---------------------------------------------------------------------------
# Matched pairs by exact overfare
# ---------------------------------------------------------------------------

def _exterior_form_from_coeffs(config, alpha2, beta2bar):
    """Primitive of a side-2 harmonic one-form, as exterior harmonic data.

    Side-2 forms are sum a_n f_n + sum b_n conj(f_n) with
    f_n = sqrt((n+1)/pi) v^{-n-2} dv in the parameter plane; primitives
    decay at infinity so the form is exact.
    """
    order = len(alpha2)
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)
    # integral of v^{-n-2} is -v^{-n-1}/(n+1)
    holo = -alpha2 * c / (n + 1)
    anti = -beta2bar * c / (n + 1)
    return jump.ExteriorHarmonicFunction(0.0, holo, anti)


def _interior_form_coeffs(config, h1, order):
    """(alpha1, beta1bar) coefficients of d h1 on the bounded side."""
    if isinstance(config, geometry.UnitCircleConfig):
        a1 = jump._disk_holo_coeffs(h1, order)
        conj_part = geometry.HarmonicPolyFunction(
            0.0, np.conj(h1.qbar), np.zeros(h1.order))
        b1 = np.conj(jump._disk_holo_coeffs(conj_part, order))
    else:
        a1 = jump._poly_holo_coeffs(config.gmap, h1, order)
        b1 = jump._poly_antiholo_coeffs(config.gmap, h1, order)
    return a1, b1


def compatible_from(config, alpha2, beta2bar, zeta=None, order=None,
                    nodes=512, period_tol=1e-10) -> CompatibleTriple:
    """Construct the matched side-1 form for given side-2 data.

    At genus zero the catalyzing form is zero and the side-1 form is the
    exact overfare of the side-2 form: integrate, carry the primitive
    across the curve, differentiate.  Raises NotSemiExact when the side-2
    form has a nonzero period around the curve (only possible on the
    two-circle configuration, whose homology the annulus carries).
    """
    alpha2 = np.asarray(alpha2, dtype=complex)
    beta2bar = np.asarray(beta2bar, dtype=complex)
    if zeta is not None and np.asarray(zeta).size:
        raise DimensionMismatch("catalyzing data must be empty at genus zero")
    order = order or len(alpha2)
    if isinstance(config, geometry.ConcentricConfig):
        return _compatible_from_concentric(config, alpha2, beta2bar, order,
                                           period_tol)
    h2 = _exterior_form_from_coeffs(config, alpha2, beta2bar)
    h1 = jump.overfare_2to1(config, h2, order + 1, nodes)
    a1, b1 = _interior_form_coeffs(config, h1, order)
    return CompatibleTriple(a1, b1, alpha2, beta2bar, np.zeros(0))


def _compatible_from_concentric(cfg, alpha2, beta2bar, order, period_tol):
    """Exact overfare from the annulus onto the two caps, mode by mode.

    The primitive of an annulus mode z^k dz is z^{k+1}/(k+1) for k != -1;
    its trace on each circle extends harmonically into the cap, picking up
    the holomorphic extension on the side where the angular mode matches
    and the reflected anti-holomorphic extension on the other.  The k = -1
    coefficients are periods: the total period must vanish (semi-exact
    data) and the matched logarithmic parts carry constant traces, hence
    contribute nothing.
    """
    two_n = (len(alpha2) - 1) // 2
    if len(alpha2) != 2 * two_n + 1:
        raise DimensionMismatch("annulus coefficient count must be odd")
    norms = np.sqrt(schiffer._annulus_mode_norms(cfg, two_n))
    ks = np.arange(-(two_n + 1), two_n)
    mid = int(np.where(ks == -1)[0][0])
    period = 2j * np.pi * (alpha2[mid] - beta2bar[mid]) / norms[mid]
    if abs(period) > period_tol:
        raise NotSemiExact(
            f"annulus data has boundary period {abs(period):.3e}")
    d = alpha2 / norms   # density coefficients of z^k dz
    e = beta2bar / norms
    a1 = np.zeros(2 * two_n, dtype=complex)
    b1 = np.zeros(2 * two_n, dtype=complex)
    r, big_r = cfg.r, cfg.R
    m_modes = np.arange(two_n)
    cin = np.sqrt((m_modes + 1) / np.pi) * r ** (-m_modes - 1.0)
    cout = np.sqrt((m_modes + 1) / np.pi) * big_r ** (m_modes + 1.0)
    for m in range(two_n):
        i_pos = int(np.where(ks == m)[0][0])
        i_neg = int(np.where(ks == -m - 2)[0][0])
        rr = r ** (2.0 * (-m - 2) + 2)      # r^{2k+2} at k = -m-2
        bb = big_r ** (2.0 * m + 2)         # R^{2k+2} at k = m
        a1[m] = (d[i_pos] - e[i_neg] * rr) / cin[m]
        b1[m] = (e[i_pos] - d[i_neg] * rr) / cin[m]
        a1[two_n + m] = (d[i_neg] - e[i_pos] * bb) / cout[m]
        b1[two_n + m] = (e[i_neg] - d[i_pos] * bb) / cout[m]
    return CompatibleTriple(a1, b1, alpha2, beta2bar, np.zeros(0))


# ---------------------------------------------------------------------------
# Cohomology, index, period map
# ---------------------------------------------------------------------------

def cohomology_period_check(cfg: geometry.ConcentricConfig, source_index,
                            order, nodes=512):
    """Periods of cross-mapped forms around the annulus core circle.

    The image of any cap-side basis form under the cross operator is exact
    on the annulus, so its period around |z| = sqrt(rR) vanishes; the
    period functional itself is anchored by ∮ dz/z = 2 pi i.
    """
    t12 = schiffer.build_T(cfg, 1, 2, order, "series").matrix
    col = t12[:, source_index]
    norms = np.sqrt(schiffer._annulus_mode_norms(cfg, order))
    ks = np.arange(-(order + 1), order)
    rho = np.sqrt(cfg.r * cfg.R)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = rho * np.exp(1j * theta)
    dz = 1j * z * (2 * np.pi / nodes)
    dens = (z[:, None] ** ks) / norms
    period = complex(np.sum(dens @ col * dz))
    anchor = complex(np.sum(dz / z))
    if abs(anchor - 2j * np.pi) > 1e-10:
        raise NonConvergent("period quadrature failed its anchor")
    return abs(period), anchor


def index_estimate(config, order, rel_threshold=1e-6, method="series",
                   nodes=512):
    """Numerical (dim ker, dim coker, index) of the cross block, by SVD.

    Also returns the principal angle between the numerical cokernel and
    the harmonic-measure direction on the two-circle configuration, where
    the cokernel is one-dimensional.
    """
    t12 = schiffer.build_T(config, 1, 2, order, method, nodes).matrix
    ker, coker, index, svals = kernel_cokernel(t12, rel_threshold)
    angle = None
    if isinstance(config, geometry.ConcentricConfig) and coker >= 1:
        u_mat, s, _ = np.linalg.svd(t12)
        null_dir = u_mat[:, -coker:]
        hm_dir = np.zeros((t12.shape[0], 1))
        ks = np.arange(-(order + 1), order)
        hm_dir[np.where(ks == -1)[0][0], 0] = 1.0
        angle = subspace_angle(null_dir, hm_dir)
    return {"ker": ker, "coker": coker, "index": index,
            "svals": svals, "cokernel_angle_to_domega": angle}


def period_map(config, order, method="series", nodes=512):
    """Period-map blocks at genus zero: the cross block is the isomorphism
    onto exact forms and the same-side block is the graph operator with
    norm strictly below one.
    """
    t12 = schiffer.build_T(config, 1, 2, order, method, nodes).matrix
    t11 = schiffer.build_T(config, 1, 1, order, method, nodes).matrix
    theta_block = -t12
    upsilon_block = -t11
    svals = np.linalg.svd(theta_block, compute_uv=False)
    ups_norm, ups_res = spectral_norm_with_residual(upsilon_block)
    return {
        "theta": theta_block,
        "upsilon": upsilon_block,
        "theta_sigma_min": float(svals[min(t12.shape) - 1]),
        "upsilon_norm": float(ups_norm),
        "upsilon_norm_iterres": float(ups_res),
    }


def grunsky_operator(config: geometry.ExteriorPolyConfig, order,
                     nodes=512) -> schiffer.OperatorBlock:
    """Normalized Grunsky block sqrt(mn) b_mn of the exterior map.

    Unitarily equivalent (up to sign) to the same-side comparison operator,
    so its spectral norm is the same strict contraction bound.
    """
    data = geometry.grunsky_coefficients(config.gmap, order)
    return schiffer.OperatorBlock(data.normalized, "conj(disk-monomial)",
                                  "disk-monomial", "series", order)


# ---------------------------------------------------------------------------
# Harmonic-measure identities on the two-circle configuration
# ---------------------------------------------------------------------------

def harmonic_measure_operator_check(cfg: geometry.ConcentricConfig, order,
                                    method="series", nodes=512):
    """Residuals of the annulus harmonic-measure identities.

    With omega the annulus harmonic measure (side 2), the same-side
    operator sends delbar omega to -del omega and the cross operator
    annihilates it.  Returns the two residuals in the block bases.
    """
    hm = geometry.harmonic_measure(cfg.r, cfg.R)
    order_full = 2 * order + 1
    norms = np.sqrt(schiffer._annulus_mode_norms(cfg, order))
    ks = np.arange(-(order + 1), order)
    mid = int(np.where(ks == -1)[0][0])
    # delbar omega = conj(d_holo) zbar^{-1} dzbar: conjugate-basis vector
    dbar_omega = np.zeros(order_full, dtype=complex)
    dbar_omega[mid] = np.conj(hm.d_holo) * norms[mid]
    del_omega = np.zeros(order_full, dtype=complex)
    del_omega[mid] = hm.d_holo * norms[mid]
    t22 = schiffer.build_T(cfg, 2, 2, order, method, nodes).matrix
    t21 = schiffer.build_T(cfg, 2, 1, order, method, nodes).matrix
    res_same = float(np.linalg.norm(t22 @ dbar_omega + del_omega)
                     / np.linalg.norm(del_omega))
    res_cross = float(np.linalg.norm(t21 @ dbar_omega)
                      / np.linalg.norm(del_omega))
    return {"same_side": res_same, "cross": res_cross}


def scattering_on_harmonic_measure(cfg: geometry.ConcentricConfig, order,
                                   method="series", nodes=512) -> float:
    """Residual of the scattering symmetry (0, del omega) -> (0, delbar omega)."""
    s = build_scattering_genus0(cfg, order, method, nodes)
    hm = geometry.harmonic_measure(cfg.r, cfg.R)
    d1, d2 = s.dims()
    norms = np.sqrt(schiffer._annulus_mode_norms(cfg, order))
    ks = np.arange(-(order + 1), order)
    mid = int(np.where(ks == -1)[0][0])
    alpha2 = np.zeros(d2, dtype=complex)
    alpha2[mid] = hm.d_holo * norms[mid]
    triple = CompatibleTriple(np.zeros(d1), np.zeros(d1), alpha2,
                              np.zeros(d2))
    b1, b2 = scatter(s, triple)
    want = np.zeros(d2, dtype=complex)
    want[mid] = np.conj(hm.d_holo) * norms[mid]
    scale = np.linalg.norm(want)
    return float(max(np.linalg.norm(b1), np.linalg.norm(b2 - want)) / scale)


# ---------------------------------------------------------------------------
# Semi-exact holomorphic boundary value problem
# ---------------------------------------------------------------------------

def solve_holomorphic_bvp(config, delta, order, method="series", nodes=512):
    """Solve the genus-zero holomorphic boundary value problem.

    ``delta`` is the anti-holomorphic data vector on the bounded side (its
    coefficients in the conjugated orthonormal basis).  The one-form on the
    unbounded side with matching boundary class is beta = -T(1->2) gamma
    where (I - T(1->1)) gamma = delta; the system is a strict contraction
    perturbation of the identity, hence uniquely solvable.

    Returns a dict with gamma, beta, the condition number of the linear
    system, and the boundary-class residual of the solution measured by
    pairing both sides against circle-parameter test modes on the curve.
    """
    delta = np.asarray(delta, dtype=complex)
    t11 = schiffer.build_T(config, 1, 1, order, method, nodes).matrix
    t12 = schiffer.build_T(config, 1, 2, order, method, nodes).matrix
    system = np.eye(order) - t11
    gamma = np.linalg.solve(system, delta)
    beta = -t12 @ gamma
    cond = condition_number(system)
    class_res = _boundary_class_residual(config, gamma, beta, nodes)
    return {"gamma": gamma, "beta": beta, "condition": float(cond),
            "t11_norm": float(spectral_norm(t11)),
            "class_residual": float(class_res)}


def _side1_form_values(config, gamma, u):
    """Boundary values of gamma - T(1->1) gamma as (holo, antiholo) density
    pairs along the curve parameter, times the parameter derivative."""
    order = len(gamma)
    t11 = schiffer.build_T(config, 1, 1, order, "series").matrix
    holo_coeff = t11 @ gamma
    if isinstance(config, geometry.UnitCircleConfig):
        n = np.arange(order)
        c = np.sqrt((n + 1) / np.pi)
        basis = (u[:, None] ** n) * c * (1j * u)[:, None]
        anti = np.conj(basis) @ np.conj(gamma)
        holo = basis @ holo_coeff
        return anti, -holo
    g = config.gmap
    phi = schiffer._faber_form_values(g, order, u)
    bc = schiffer._poly_factors(g, order)[2]
    psi = (phi @ bc) * (g.deriv(u) * 1j * u)[:, None]
    anti = np.conj(psi) @ np.conj(gamma)
    holo = psi @ holo_coeff
    return anti, -holo


def _boundary_class_residual(config, gamma, beta, nodes):
    """Pair both sides of the class identity against test modes on the curve.

    The boundary class of the solution equals the class of
    gamma - T(1->1) gamma; both classes are evaluated as limits of circle
    integrals, which on analytic curves can be taken on the curve itself.
    """
    order = len(gamma)
    if isinstance(config, geometry.UnitCircleConfig):
        g = geometry.ExteriorMapPoly()
    else:
        g = config.gmap
    u = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    gp = g.deriv(u)
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)
    # side-2 form values along the curve, times du-parameter derivative
    f_dens = (u[:, None] ** (-n - 2)) * c
    beta_vals = (f_dens @ beta) * 1j * u
    anti_vals, neg_holo_vals = _side1_form_values(config, gamma, u)
    worst = 0.0
    scale = max(np.max(np.abs(beta)), np.max(np.abs(gamma)), 1e-30)
    for ell in range(-order - 1, order + 2):
        test = np.exp(1j * ell * (2 * np.pi * np.arange(nodes) / nodes))
        lhs = np.sum(test * beta_vals) * (2 * np.pi / nodes)
        rhs = np.sum(test * (anti_vals + neg_holo_vals)) \
            * (2 * np.pi / nodes)
        worst = max(worst, abs(lhs - rhs))
    return worst / scale
