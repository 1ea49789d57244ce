"""Cauchy transform with basepoint normalization, overfare, jump identities.

On the sphere the Green's-function derivative kernel reduces the boundary
transform of a harmonic function h on the bounded side to

    J^q h(z) = (1/2 pi i) ∮_Gamma [1/(w - z) - 1/(w - q)] h(w) dw,

with q a basepoint off the curve (q = infinity drops the second term).
Restricting z to either side yields two harmonic functions; their jump
across the curve recovers h.  Overfare carries a harmonic function to the
other side through its boundary trace: Fourier extension outward, a
harmonic-polynomial Dirichlet solve inward.

These operations are supported on single-curve configurations (unit circle
and exterior polynomial curves), which is where the bounded side is simply
connected; the two-circle configuration exercises its identities through
the harmonic-measure checks instead.

All residuals are measured in the Dirichlet seminorm (modulo constants),
matching the homogeneous-space statements they verify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry, schiffer
from .boundary import FourierFunction
from .errors import DimensionMismatch, SampleNearCurve
from .geometry import HarmonicPolyFunction

__all__ = [
    "ExteriorHarmonicFunction",
    "TwoSidedFunction",
    "INFINITY",
    "cauchy_royden",
    "overfare_1to2",
    "overfare_2to1",
    "jump_formula_check",
    "two_sided_limit_check",
    "jump_derivative_check",
    "greens_reproducing_check",
    "dirichlet_energy_interior",
    "dirichlet_energy_exterior",
]

INFINITY = None  # basepoint at the point at infinity


@dataclass(frozen=True)
class ExteriorHarmonicFunction:
    """Harmonic on the unbounded side, in exterior-map pull-back form.

    H(g(v)) = c0 + sum_{n>=1} (holo_n v^{-n} + antiholo_n vbar^{-n}),
    decaying to c0 at infinity.  For the unit circle g is the identity.
    """

    c0: complex
    holo: np.ndarray
    antiholo: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "holo", np.asarray(self.holo, dtype=complex))
        object.__setattr__(self, "antiholo",
                           np.asarray(self.antiholo, dtype=complex))

    @property
    def order(self) -> int:
        return len(self.holo)

    def eval_param(self, v):
        v = np.asarray(v, dtype=complex)
        n = np.arange(1, self.order + 1)
        vm = v[..., None] ** (-n)
        return self.c0 + vm @ self.holo + np.conj(vm) @ self.antiholo


@dataclass(frozen=True)
class TwoSidedFunction:
    """Pair of one-sided harmonic restrictions produced by the transform."""

    side1: HarmonicPolyFunction
    side2: ExteriorHarmonicFunction
    basepoint: complex | None


def _config_map(config) -> geometry.ExteriorMapPoly:
    if isinstance(config, geometry.UnitCircleConfig):
        return geometry.ExteriorMapPoly()
    if isinstance(config, geometry.ExteriorPolyConfig):
        return config.gmap
    raise DimensionMismatch(
        "jump operations need a single separating curve")


def _curve_nodes(gmap, count):
    u = np.exp(2j * np.pi * np.arange(count) / count)
    return u, gmap(u), gmap.deriv(u) * 1j * u * (2 * np.pi / count)


def _cauchy_sums(w, dw, values, targets, q):
    """(1/2 pi i) sum values * [1/(w-z) - 1/(w-q)] dw at the targets."""
    kern = 1.0 / (w[None, :] - targets[:, None])
    if q is not INFINITY:
        kern = kern - 1.0 / (w[None, :] - q)
    return kern @ (values * dw) / (2j * np.pi)


def cauchy_royden(config, h: HarmonicPolyFunction, q=INFINITY,
                  nodes=512, order=16, min_distance=1e-3) -> TwoSidedFunction:
    """Basepoint-normalized Cauchy transform of h, fitted on both sides.

    h is harmonic on the bounded side with analytic boundary data; q lies
    off the curve (default infinity).  The transform is evaluated on sample
    rings inside each side and refit: Faber-basis least squares inside,
    angular-mode extraction outside.
    """
    g = _config_map(config)
    geometry.validate_config(config)
    u, w, dw = _curve_nodes(g, nodes)
    hvals = h(w)
    rho = g.safe_inner_radius()
    if q is not INFINITY:
        if np.min(np.abs(w - q)) < min_distance:
            raise SampleNearCurve("basepoint too close to the curve")

    ring_in = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    z_in = g(ring_in)
    vals_in = _cauchy_sums(w, dw, hvals, z_in, q)
    side1 = _fit_interior(g, z_in, vals_in, order)

    ring_out = np.exp(2j * np.pi * np.arange(nodes) / nodes) / rho
    vals_out = _cauchy_sums(w, dw, hvals, g(ring_out), q)
    side2 = _fit_exterior_harmonic(vals_out, 1.0 / rho, order)
    return TwoSidedFunction(side1, side2, q)


def _fit_interior(gmap, pts, vals, order) -> HarmonicPolyFunction:
    """Least-squares harmonic-polynomial fit at interior ring points."""
    gdata = geometry.grunsky_coefficients(gmap, max(order - 1, 1))
    count = len(pts)
    cols = [np.ones(count, dtype=complex)]
    for n in range(1, order):
        cols.append(geometry.faber_eval(gdata.faber[n], pts))
    for n in range(1, order):
        cols.append(np.conj(geometry.faber_eval(gdata.faber[n], pts)))
    design = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.linalg.norm(design @ coef - vals)
                  / max(1.0, np.linalg.norm(vals)))
    c0 = complex(coef[0])
    p = np.zeros(order - 1, dtype=complex)
    qbar = np.zeros(order - 1, dtype=complex)
    for n in range(1, order):
        fc = gdata.faber[n]
        c0 += coef[n] * fc[0] + np.conj(coef[order - 1 + n]) * np.conj(fc[0])
        p[:n] += coef[n] * fc[1:n + 1]
        qbar[:n] += coef[order - 1 + n] * np.conj(fc[1:n + 1])
    return HarmonicPolyFunction(c0, p, qbar, resid)


def _fit_exterior_harmonic(vals, ring_radius, order) -> ExteriorHarmonicFunction:
    """Angular-mode extraction of a decaying harmonic on |v| = ring_radius.

    v^{-n} lives in angular mode -n and vbar^{-n} in mode +n, so one ring
    separates all coefficients.
    """
    count = len(vals)
    fft = np.fft.fft(vals) / count
    n = np.arange(1, order + 1)
    holo = fft[(-n) % count] * ring_radius ** n
    antiholo = fft[n] * ring_radius ** n
    return ExteriorHarmonicFunction(complex(fft[0]), holo, antiholo)


# ---------------------------------------------------------------------------
# Overfare of harmonic functions
# ---------------------------------------------------------------------------

def overfare_1to2(config, h: HarmonicPolyFunction, order=16,
                  nodes=512) -> ExteriorHarmonicFunction:
    """Harmonic function on the unbounded side with the same boundary trace.

    The trace along theta -> g(e^{i theta}) is expanded in Fourier modes;
    positive modes extend as vbar^{-n}, negative modes as v^{-n}.
    """
    g = _config_map(config)
    u, w, _ = _curve_nodes(g, nodes)
    fft = np.fft.fft(h(w)) / nodes
    n = np.arange(1, order + 1)
    return ExteriorHarmonicFunction(complex(fft[0]),
                                    fft[(-n) % nodes], fft[n])


def overfare_2to1(config, h2: ExteriorHarmonicFunction, order=16,
                  nodes=512) -> HarmonicPolyFunction:
    """Harmonic function on the bounded side with the same boundary trace."""
    g = _config_map(config)
    u, w, _ = _curve_nodes(g, nodes)
    vals = h2.eval_param(u)
    return geometry.interior_dirichlet_solve(g, vals, order, nodes,
                                             max_residual=1e-6)


def boundary_trace(config, h, nodes=512) -> FourierFunction:
    """Fourier trace of either-side data along theta -> g(e^{i theta})."""
    g = _config_map(config)
    u, w, _ = _curve_nodes(g, nodes)
    vals = h(w) if isinstance(h, HarmonicPolyFunction) else h.eval_param(u)
    fft = np.fft.fft(vals) / nodes
    trunc = nodes // 4
    coeffs = np.concatenate([fft[-trunc:], fft[:trunc + 1]])
    return FourierFunction(coeffs, trunc)


# ---------------------------------------------------------------------------
# Dirichlet energies (modulo constants)
# ---------------------------------------------------------------------------

def dirichlet_energy_interior(gmap, h: HarmonicPolyFunction,
                              nodes=512) -> float:
    """∬ dh wedge * conj(dh) over the bounded side, via area moments."""
    order = h.order
    if order == 0:
        return 0.0
    moments = geometry.area_moment_matrix(gmap, order, nodes)
    k = np.arange(1, order + 1, dtype=float)
    dp = h.p * k
    dq = h.qbar * k
    e_holo = np.real(dp @ moments @ np.conj(dp))
    e_anti = np.real(np.conj(dq) @ moments @ dq)
    return float(2.0 * (e_holo + e_anti))


def dirichlet_energy_exterior(h2: ExteriorHarmonicFunction) -> float:
    """Energy on the unbounded side; conformally invariant mode formula."""
    n = np.arange(1, h2.order + 1, dtype=float)
    return float(2 * np.pi * np.sum(n * (np.abs(h2.holo) ** 2
                                         + np.abs(h2.antiholo) ** 2)))


def _diff_energy_interior(gmap, a: HarmonicPolyFunction,
                          b: HarmonicPolyFunction, nodes=512) -> float:
    order = max(a.order, b.order)
    pad = lambda arr: np.concatenate([arr, np.zeros(order - len(arr))])
    diff = HarmonicPolyFunction(0.0, pad(a.p) - pad(b.p),
                                pad(a.qbar) - pad(b.qbar))
    return dirichlet_energy_interior(gmap, diff, nodes)


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

def jump_formula_check(config, h: HarmonicPolyFunction, q=INFINITY,
                       nodes=512, order=16) -> float:
    """Residual of O(2->1) J(1->2) h = J(1->1) h - h, modulo constants.

    Measured as the square root of the Dirichlet energy of the defect on
    the bounded side, relative to the energy of h.
    """
    g = _config_map(config)
    two = cauchy_royden(config, h, q, nodes, order)
    back = overfare_2to1(config, two.side2, order, nodes)
    pad = max(order - 1, h.order)

    def padded(arr):
        return np.concatenate([arr, np.zeros(pad - len(arr), dtype=complex)])

    lhs_p = padded(back.p)
    lhs_q = padded(back.qbar)
    rhs_p = padded(two.side1.p) - padded(h.p)
    rhs_q = padded(two.side1.qbar) - padded(h.qbar)
    defect = HarmonicPolyFunction(0.0, lhs_p - rhs_p, lhs_q - rhs_q)
    scale = max(dirichlet_energy_interior(g, h, nodes), 1e-30)
    return float(np.sqrt(dirichlet_energy_interior(g, defect, nodes) / scale))


def two_sided_limit_check(config, h: HarmonicPolyFunction, q=INFINITY,
                          nodes=512, order=16) -> float:
    """Residual of J(1) h + J(2) O(1->2) h = 0 modulo constants, both sides.

    The transform from the unbounded side integrates over its own
    positively oriented boundary (the curve reversed).
    """
    g = _config_map(config)
    two = cauchy_royden(config, h, q, nodes, order)
    h2 = overfare_1to2(config, h, order, nodes)

    u, w, dw = _curve_nodes(g, nodes)
    h2vals = h2.eval_param(u)
    rho = g.safe_inner_radius()
    ring_in = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals_in = -_cauchy_sums(w, dw, h2vals, g(ring_in), q)
    j2_side1 = _fit_interior(g, g(ring_in), vals_in, order)
    ring_out = np.exp(2j * np.pi * np.arange(nodes) / nodes) / rho
    vals_out = -_cauchy_sums(w, dw, h2vals, g(ring_out), q)
    j2_side2 = _fit_exterior_harmonic(vals_out, 1.0 / rho, order)

    e1 = _diff_energy_interior(g, two.side1,
                               _negate_interior(j2_side1), nodes)
    diff2 = ExteriorHarmonicFunction(0.0, two.side2.holo + j2_side2.holo,
                                     two.side2.antiholo + j2_side2.antiholo)
    e2 = dirichlet_energy_exterior(diff2)
    scale = max(dirichlet_energy_interior(g, h, nodes), 1e-30)
    return float(np.sqrt((e1 + e2) / scale))


def _negate_interior(f: HarmonicPolyFunction) -> HarmonicPolyFunction:
    return HarmonicPolyFunction(-f.c0, -f.p, -f.qbar)


def jump_derivative_check(config, h: HarmonicPolyFunction, q=INFINITY,
                          nodes=512, order=16) -> dict:
    """Residuals linking derivatives of the transform to the kernel blocks.

    del J(1->2) h = T(1->2) delbar h and
    del J(1->1) h = del h + T(1->1) delbar h, compared as coefficient
    vectors in the orthonormal bases used by the operator blocks; at genus
    zero the antiholomorphic derivative of the transform vanishes.
    """
    g = _config_map(config)
    order_h = h.order
    n_ops = max(order, order_h + 2)
    two = cauchy_royden(config, h, q, nodes, n_ops + 2)

    # delbar h in the conjugated orthonormal basis on the bounded side
    if isinstance(config, geometry.UnitCircleConfig):
        dbar = _disk_antiholo_coeffs(h, n_ops)
        dj12 = _exterior_del_coeffs(two.side2, n_ops)
        t12 = schiffer.build_T(config, 1, 2, n_ops, "series").matrix
        d_holo_h = _disk_holo_coeffs(h, n_ops)
        dj11 = _disk_holo_coeffs_from(two.side1, n_ops)
        t11 = schiffer.build_T(config, 1, 1, n_ops, "series").matrix
    else:
        dbar = _poly_antiholo_coeffs(config.gmap, h, n_ops)
        dj12 = _exterior_del_coeffs(two.side2, n_ops)
        t12 = schiffer.build_T(config, 1, 2, n_ops, "series").matrix
        d_holo_h = _poly_holo_coeffs(config.gmap, h, n_ops)
        dj11 = _poly_holo_coeffs(config.gmap, two.side1, n_ops)
        t11 = schiffer.build_T(config, 1, 1, n_ops, "series").matrix
    scale = max(np.linalg.norm(dbar), np.linalg.norm(d_holo_h), 1e-30)
    res12 = np.linalg.norm(dj12 - t12 @ dbar) / scale
    res11 = np.linalg.norm(dj11 - (d_holo_h + t11 @ dbar)) / scale
    anti2 = np.linalg.norm(two.side2.antiholo) / scale
    return {"del_J12": float(res12), "del_J11": float(res11),
            "delbar_J": float(anti2)}


def _disk_holo_coeffs(h: HarmonicPolyFunction, order):
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)
    out = np.zeros(order, dtype=complex)
    k = np.arange(1, min(h.order, order) + 1)
    out[:len(k)] = h.p[:len(k)] * k / c[:len(k)]
    return out


def _disk_holo_coeffs_from(f: HarmonicPolyFunction, order):
    return _disk_holo_coeffs(f, order)


def _disk_antiholo_coeffs(h: HarmonicPolyFunction, order):
    n = np.arange(order)
    c = np.sqrt((n + 1) / np.pi)
    out = np.zeros(order, dtype=complex)
    k = np.arange(1, min(h.order, order) + 1)
    out[:len(k)] = np.conj(h.qbar[:len(k)] * k) / c[:len(k)]
    return np.conj(out)


def _exterior_del_coeffs(h2: ExteriorHarmonicFunction, order):
    """Coefficients of del H2 in the orthonormal exterior one-form basis."""
    out = np.zeros(order, dtype=complex)
    c = np.sqrt((np.arange(order) + 1) / np.pi)
    for n in range(1, min(h2.order, order + 1) + 1):
        if n - 1 < order:
            out[n - 1] = -n * h2.holo[n - 1] / c[n - 1]
    return out


_POLY_CACHE = {}


def _poly_factors_cached(gmap, order):
    key = (gmap.b0, tuple(gmap.tail.tolist()), order)
    if key not in _POLY_CACHE:
        _POLY_CACHE[key] = schiffer._poly_factors(gmap, order)
    return _POLY_CACHE[key]


def _poly_holo_coeffs(gmap, h: HarmonicPolyFunction, order):
    """Coefficients of del h in the orthonormalised Faber-form basis."""
    _, gamma_big, bc, big = _poly_factors_cached(gmap, order)
    gd = geometry.grunsky_coefficients(gmap, order)
    # del h = p'(w) dw; expand p' in Faber derivatives: triangular match.
    k = np.arange(1, h.order + 1)
    mono = h.p * k  # density coefficients of p'(w): sum mono_j w^{j-1}
    cphi = np.zeros(order, dtype=complex)
    rem = mono.astype(complex).copy()
    for m in range(min(len(mono), order), 0, -1):
        fc = gd.faber[m]
        lead = rem[m - 1] / (m * fc[m])
        cphi[m - 1] = lead * np.sqrt(np.pi * m)
        rem[:m] -= lead * np.arange(1, m + 1) * fc[1:m + 1]
    # convert expansion coefficients to the orthonormal basis
    return np.linalg.inv(bc) @ cphi


def _poly_antiholo_coeffs(gmap, h: HarmonicPolyFunction, order):
    """Coefficients of delbar h in the conjugated orthonormal basis."""
    conj_part = HarmonicPolyFunction(0.0, np.conj(h.qbar), np.zeros(h.order))
    return np.conj(_poly_holo_coeffs(gmap, conj_part, order))


def greens_reproducing_check(h, z_samples, nodes=512) -> float:
    """Residual of the disk Green's-function reproducing identity.

    For harmonic h on the unit disk,
    h(z) = (1/2 pi i) ∮ [1/(w-z) + zbar/(1-zbar w)] h(w) dw,
    from the derivative of g(w; z) = -log|(w-z)/(1-zbar w)|.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = np.exp(1j * theta)
    dw = 1j * w * (2 * np.pi / nodes)
    hv = h(w)
    worst = 0.0
    for z in np.atleast_1d(z_samples):
        kern = 1.0 / (w - z) + np.conj(z) / (1.0 - np.conj(z) * w)
        val = np.sum(kern * hv * dw) / (2j * np.pi)
        worst = max(worst, abs(val - complex(h(np.array([z]))[0])))
    return float(worst)
