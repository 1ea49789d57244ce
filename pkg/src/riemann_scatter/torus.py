"""Genus-one realization on the square flat torus split into two strips.

The torus C / (Z + iZ) is cut by the horizontal circles y = y1 and y = y2
into strips Sigma_1 = {y1 < y < y2} and Sigma_2 = {y2 < y < y1 + 1} of
heights h1 and h2 = 1 - h1.  Translation invariance in x decouples every
operator over the angular modes e^{2 pi i k x}; each block is computed in
closed form from elementary exponential integrals and cross-checked by
one-dimensional quadrature of the kernel's mode transform.

Kernels.  The torus Green's function with unit-area background is
G(u) = -log|sigma(u)| + (pi/2)|u|^2 (Weierstrass sigma of the square
lattice, eta_1 = pi), giving the second-derivative kernel
L(z, w) = -(1/2 pi i) wp(w - z) dw dz with wp the Weierstrass p-function,
and a constant Bergman kernel K(z, w) = kappa dz dwbar whose value is
fixed operationally by the reproducing requirement ∬ K wedge dz = dz,
yielding kappa = 1/(2i) on the unit-area torus.

Mode tables.  Writing p = e^{-2 pi |k| h1}, q = e^{-2 pi |k| h2}, the
same-side entry is (p - q)/(1 - pq), the cross entries are
-sqrt((1-p^2)(1-q^2))/(1 - pq), and the opposite same-side entry is the
negative of the first.  At mode zero the blocks act on the span of dz and
dzbar restricted to the strips, with projection and restriction entries
sqrt(h_j); the harmonic measures d omega_j = dy / h_j live in this block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, InvalidConfig, SingularPoint,
                     TailTooLarge)
from ._linalg import kernel_cokernel, spectral_norm

__all__ = [
    "TorusConfig",
    "ModeBlock",
    "weierstrass_p",
    "weierstrass_p_raw",
    "torus_kernels",
    "bergman_constant",
    "mode_transform_F",
    "build_mode_operators",
    "scattering_3x3",
    "torus_identity_suite",
    "compatible_from_torus",
    "catalyzing_residual",
]


@dataclass(frozen=True)
class TorusConfig:
    """Square torus split by the circles y = y1 and y = y2."""

    y1: float = 0.0
    y2: float = 0.5
    modes: int = 8
    lattice_cutoff: int = 40

    def __post_init__(self):
        if not 0 <= self.y1 < self.y2 < 1:
            raise InvalidConfig("require 0 <= y1 < y2 < 1")

    @property
    def h1(self) -> float:
        return self.y2 - self.y1

    @property
    def h2(self) -> float:
        return 1.0 - self.h1


@dataclass(frozen=True)
class ModeBlock:
    """Operator entries restricted to one angular mode.

    ``t[j, l]`` is the entry of the comparison operator from side j+1 to
    side l+1; ``s`` and ``r`` hold the projection/restriction entries into
    the compact-surface forms (empty away from mode zero, where that
    component vanishes).
    """

    k: int
    t: np.ndarray
    s: np.ndarray
    r: np.ndarray
    heights: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=complex))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex))
        object.__setattr__(self, "r", np.asarray(self.r, dtype=complex))


# ---------------------------------------------------------------------------
# Weierstrass p-function of the square lattice
# ---------------------------------------------------------------------------

def weierstrass_p(u, row_terms=12):
    """wp(u) for the lattice Z + iZ, by exponentially convergent row sums.

    Rows of the lattice sum are resummed through pi^2 / sin^2, leaving a
    sum over row offsets n with terms decaying like e^{-2 pi n}:

    wp(u) = pi^2/sin^2(pi u) - pi^2/3
            + sum_{n>=1} [pi^2/sin^2(pi(u-ni)) + pi^2/sin^2(pi(u+ni))
                          + 2 pi^2/sinh^2(pi n)].
    """
    u = np.asarray(u, dtype=complex)
    if np.any(np.abs(u - np.round(np.real(u)) - 1j * np.round(np.imag(u)))
              < 1e-14):
        raise SingularPoint("wp evaluated at a lattice point")
    out = np.pi ** 2 / np.sin(np.pi * u) ** 2 - np.pi ** 2 / 3.0
    for n in range(1, row_terms + 1):
        out = out + np.pi ** 2 / np.sin(np.pi * (u - 1j * n)) ** 2
        out = out + np.pi ** 2 / np.sin(np.pi * (u + 1j * n)) ** 2
        out = out + 2 * np.pi ** 2 / np.sinh(np.pi * n) ** 2
    return out


def weierstrass_p_raw(u, cutoff=40, tol=None):
    """Square-cutoff lattice sum 1/u^2 + sum' [1/(u-w)^2 - 1/w^2].

    Slowly convergent (tail of order |u|^2 / cutoff^2 after the symmetric
    cancellations); kept as the independent oracle for the accelerated
    evaluation.  Raises TailTooLarge when the requested tolerance exceeds
    what the cutoff supports.
    """
    u = np.asarray(u, dtype=complex)
    if tol is not None:
        bound = 12.0 * float(np.max(np.abs(u))) ** 2 / cutoff ** 2
        if bound > tol:
            raise TailTooLarge(
                f"cutoff {cutoff} supports only ~{bound:.1e}, wanted {tol:.1e}")
    out = 1.0 / u ** 2
    for m in range(-cutoff, cutoff + 1):
        for n in range(-cutoff, cutoff + 1):
            if m == 0 and n == 0:
                continue
            w = m + 1j * n
            out = out + 1.0 / (u - w) ** 2 - 1.0 / w ** 2
    return out


def torus_kernels(u, row_terms=12):
    """(L density, K constant) at separation u = w - z.

    L(z, w) = -(1/2 pi i) wp(w - z) on dw dz; K is the constant
    reproducing kernel on dz dwbar.
    """
    return -weierstrass_p(u, row_terms) / (2j * np.pi), bergman_constant()


def bergman_constant(grid=64):
    """Constant density of the reproducing kernel on dz dwbar.

    Fixed by requiring ∬ K(z, w) wedge dw = dz: with K = kappa dz dwbar
    and dwbar wedge dw = 2i dA, the condition reads kappa * 2i * Area = 1.
    The area of the fundamental square is evaluated by the same midpoint
    rule used elsewhere rather than assumed.
    """
    xs = (np.arange(grid) + 0.5) / grid
    area = float(np.sum(np.ones((grid, grid)))) / grid ** 2
    del xs
    return 1.0 / (2j * area)


# ---------------------------------------------------------------------------
# Mode transforms of the kernel
# ---------------------------------------------------------------------------

def mode_transform_F(k: int, v, row_terms=12):
    """F_k(v) = ∫_0^1 wp(x + iv) e^{-2 pi i k x} dx in closed form.

    For v in (0, 1) and k >= 1 this is -(4 pi^2 k / (1 - e^{-2 pi k}))
    e^{-2 pi k v}; for k <= -1 replace v by 1 - v; F_0 = -pi (the row sum
    of the zeta quasi-period).  Extended to all v by unit periodicity.
    """
    v = np.asarray(v, dtype=float)
    vv = np.mod(v, 1.0)
    if np.any(np.abs(vv) < 1e-14) or np.any(np.abs(vv - 1.0) < 1e-14):
        raise SingularPoint("mode transform on the singular row")
    if k == 0:
        return -np.pi * np.ones_like(vv)
    ak = abs(k)
    den = 1.0 - np.exp(-2 * np.pi * ak)
    if k > 0:
        return -(4 * np.pi ** 2 * ak / den) * np.exp(-2 * np.pi * ak * vv)
    return -(4 * np.pi ** 2 * ak / den) * np.exp(-2 * np.pi * ak * (1 - vv))


def mode_transform_F_quadrature(k: int, v: float, nodes=4096, row_terms=12):
    """Oracle for :func:`mode_transform_F` by x-quadrature of wp."""
    x = (np.arange(nodes) + 0.5) / nodes
    vals = weierstrass_p(x + 1j * v, row_terms)
    return complex(np.sum(vals * np.exp(-2j * np.pi * k * x)) / nodes)


# ---------------------------------------------------------------------------
# Mode blocks
# ---------------------------------------------------------------------------

def _strip_bounds(cfg: TorusConfig, side: int):
    if side == 1:
        return cfg.y1, cfg.y2
    return cfg.y2, cfg.y1 + 1.0


def build_mode_operators(cfg: TorusConfig, k: int) -> ModeBlock:
    """Closed-form operator entries on the k-th angular mode.

    At nonzero modes each Bergman space is one-dimensional per side and
    the projection/restriction components vanish; at mode zero the block
    carries the dz/dzbar directions, with projection and restriction
    entries sqrt(h_j).
    """
    if abs(k) > cfg.modes:
        raise DimensionMismatch("mode exceeds the configured cutoff")
    h1, h2 = cfg.h1, cfg.h2
    if k == 0:
        t = np.array([[h2, -np.sqrt(h1 * h2)],
                      [-np.sqrt(h1 * h2), h1]], dtype=complex)
        s = np.array([np.sqrt(h1), np.sqrt(h2)], dtype=complex)
        return ModeBlock(0, t, s, s.copy(), (h1, h2))
    ak = abs(k)
    p = np.exp(-2 * np.pi * ak * h1)
    q = np.exp(-2 * np.pi * ak * h2)
    den = 1.0 - p * q
    cross = -np.sqrt((1.0 - p ** 2) * (1.0 - q ** 2)) / den
    same = (p - q) / den
    t = np.array([[same, cross], [cross, -same]], dtype=complex)
    return ModeBlock(k, t, np.zeros(0), np.zeros(0), (h1, h2))


def _mode_entry_quadrature(cfg: TorusConfig, k: int, j: int, l: int,
                           ny=4000):
    """Oracle for the mode table: iterated 1-D integrals of F_k.

    Evaluates I(y_z) = (1/pi) ∫_{strip j} e^{-2 pi k y} F_k(y - y_z) dy at
    two heights in strip l and solves for the holomorphic-profile
    coefficient; the same-side case carries the extra -e^{-2 pi k y_z}
    term from the diagonal of the iterated sum, which the principal-value
    operator removes.  Returns the orthonormal-basis entry.
    """
    a, b = _strip_bounds(cfg, j)
    c, d = _strip_bounds(cfg, l)
    ys = np.linspace(a, b, ny + 1)[:-1] + (b - a) / (2 * ny)

    def ival(y_z):
        vals = np.exp(-2 * np.pi * k * ys) * mode_transform_F(k, ys - y_z)
        return np.sum(vals) * (b - a) / ny / np.pi

    z1, z2 = c + 0.31 * (d - c), c + 0.73 * (d - c)
    rows = np.array([[np.exp(2 * np.pi * k * z1), np.exp(-2 * np.pi * k * z1)],
                     [np.exp(2 * np.pi * k * z2), np.exp(-2 * np.pi * k * z2)]])
    coef = np.linalg.solve(rows, np.array([ival(z1), ival(z2)]))
    n_dom = (np.exp(-4 * np.pi * k * a) - np.exp(-4 * np.pi * k * b)) \
        / (4 * np.pi * k)
    m_cod = (np.exp(4 * np.pi * k * d) - np.exp(4 * np.pi * k * c)) \
        / (4 * np.pi * k)
    return complex(coef[0] * np.sqrt(m_cod / n_dom))


def scattering_3x3(cfg: TorusConfig, k: int):
    """Per-mode scattering matrix and its unitarity residual.

    Mode zero couples the two strip components with the compact-surface
    form through the projection/restriction entries (a 3 x 3 matrix);
    nonzero modes see no compact-surface component and degenerate to the
    2 x 2 block of negated conjugated entries.
    """
    blk = build_mode_operators(cfg, k)
    t = blk.t
    if k == 0:
        m = np.zeros((3, 3), dtype=complex)
        m[:2, :2] = -np.conj(t.T)
        m[0, 2] = np.conj(blk.r[0])
        m[1, 2] = np.conj(blk.r[1])
        m[2, 0] = blk.s[0]
        m[2, 1] = blk.s[1]
    else:
        m = -np.conj(t.T)
    res = float(spectral_norm(m.conj().T @ m - np.eye(m.shape[0])))
    return m, res


# ---------------------------------------------------------------------------
# Mode-wise overfare and matched triples
# ---------------------------------------------------------------------------

def _mode_norms(cfg: TorusConfig, k: int):
    """((n1, m1), (n2, m2)): squared norms of e^{2 pi i k z} dz and
    e^{2 pi i k zbar} dzbar on each strip."""
    out = []
    for side in (1, 2):
        a, b = _strip_bounds(cfg, side)
        if k == 0:
            out.append((b - a, b - a))
            continue
        n = (np.exp(-4 * np.pi * k * a) - np.exp(-4 * np.pi * k * b)) \
            / (4 * np.pi * k)
        m = (np.exp(4 * np.pi * k * b) - np.exp(4 * np.pi * k * a)) \
            / (4 * np.pi * k)
        out.append((n, m))
    return out


def _overfare_mode(cfg: TorusConfig, k: int, c_plus, c_minus):
    """Carry the strip-2 primitive C+ e^{2 pi i k z} + C- e^{2 pi i k zbar}
    to strip 1 by matching traces on both boundary circles."""
    a, b = cfg.y1, cfg.y2
    tw = 2 * np.pi * k
    rows = np.array([[np.exp(-tw * b), np.exp(tw * b)],
                     [np.exp(-tw * a), np.exp(tw * a)]], dtype=complex)
    rhs = np.array([
        c_plus * np.exp(-tw * b) + c_minus * np.exp(tw * b),
        c_plus * np.exp(-tw * (a + 1)) + c_minus * np.exp(tw * (a + 1)),
    ])
    return np.linalg.solve(rows, rhs)


def compatible_from_torus(cfg: TorusConfig, alpha2, beta2bar, zeta):
    """Matched strip-1 data for given strip-2 data and catalyzing form.

    ``alpha2``/``beta2bar`` map mode k to the density coefficients of
    c e^{2 pi i k z} dz and d e^{2 pi i k zbar} dzbar on strip 2; ``zeta``
    is the (dz, dzbar) coefficient pair on the torus.  The mode-zero data
    must make alpha2 + beta2bar - zeta exact on the strip (coefficients
    summing to the zeta total); other modes are exact automatically.

    Returns dict mode -> (alpha1, beta1bar) density coefficients.
    """
    xi, eta = complex(zeta[0]), complex(zeta[1])
    out = {}
    for k in alpha2:
        c = complex(alpha2[k])
        d = complex(beta2bar.get(k, 0.0))
        if k == 0:
            total = (c - xi) + (d - eta)
            if abs(total) > 1e-11:
                raise DimensionMismatch(
                    f"mode-zero data is not exact: defect {abs(total):.3e}")
            x = c - xi
            ratio = cfg.h2 / cfg.h1
            out[0] = (xi - ratio * x, eta + ratio * x)
            continue
        tw = 2j * np.pi * k
        d_plus, d_minus = _overfare_mode(cfg, k, c / tw, d / tw)
        out[k] = (tw * d_plus, tw * d_minus)
    return out


def catalyzing_residual(cfg: TorusConfig, side1, side2, zeta) -> float:
    """Norm of S1h(side 1) + S2h(side 2) - zeta on the compact forms.

    Only mode zero contributes: S_j integrates the density over the strip.
    """
    xi, eta = complex(zeta[0]), complex(zeta[1])
    a1, b1 = side1.get(0, (0.0, 0.0))
    a2, b2 = side2.get(0, (0.0, 0.0))
    s_dz = cfg.h1 * complex(a1) + cfg.h2 * complex(a2) - xi
    s_dzbar = cfg.h1 * complex(b1) + cfg.h2 * complex(b2) - eta
    return float(np.hypot(abs(s_dz), abs(s_dzbar)))


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

def torus_identity_suite(cfg: TorusConfig, rng_seed=0):
    """Residuals of the operator identities, per mode, plus index data.

    Families: resolution of the identity on each side (projection-
    augmented at mode zero), the cross identities, completeness of the
    projections on the compact forms, the harmonic-measure identity, the
    catalyzing consistency of an overfare-built triple, unitarity per
    mode, and the kernel/cokernel of the assembled cross block.
    """
    report = {}
    worst = {"identity_1": 0.0, "identity_2": 0.0, "cross": 0.0,
             "unitarity": 0.0, "part_iii": 0.0}
    t12_entries = []
    for k in range(-cfg.modes, cfg.modes + 1):
        blk = build_mode_operators(cfg, k)
        t = blk.t
        if k == 0:
            ss = np.outer(np.conj(blk.s), blk.s)
            id1 = abs(1 - (abs(t[0, 0]) ** 2 + abs(t[0, 1]) ** 2
                           + abs(blk.s[0]) ** 2))
            id2 = abs(1 - (abs(t[1, 0]) ** 2 + abs(t[1, 1]) ** 2
                           + abs(blk.s[1]) ** 2))
            cross = abs(np.conj(t[0, 0]) * t[1, 0]
                        + np.conj(t[0, 1]) * t[1, 1] + ss[0, 1])
            p3 = max(abs(t[0, 0] * np.conj(blk.r[0])
                         + t[1, 0] * np.conj(blk.r[1])),
                     abs(t[0, 1] * np.conj(blk.r[0])
                         + t[1, 1] * np.conj(blk.r[1])))
            worst["part_iii"] = max(worst["part_iii"], float(p3))
            s_complete = abs(1 - (abs(blk.s[0]) ** 2 + abs(blk.s[1]) ** 2))
            report["s_completeness"] = float(s_complete)
        else:
            id1 = abs(1 - (abs(t[0, 0]) ** 2 + abs(t[0, 1]) ** 2))
            id2 = abs(1 - (abs(t[1, 0]) ** 2 + abs(t[1, 1]) ** 2))
            cross = abs(np.conj(t[0, 0]) * t[1, 0]
                        + np.conj(t[0, 1]) * t[1, 1])
        worst["identity_1"] = max(worst["identity_1"], float(id1))
        worst["identity_2"] = max(worst["identity_2"], float(id2))
        worst["cross"] = max(worst["cross"], float(cross))
        _, ures = scattering_3x3(cfg, k)
        worst["unitarity"] = max(worst["unitarity"], float(ures))
        t12_entries.append(t[0, 1])
    report.update(worst)

    # conjugation symmetry of opposite modes
    sym = 0.0
    for k in range(1, cfg.modes + 1):
        bp = build_mode_operators(cfg, k)
        bm = build_mode_operators(cfg, -k)
        sym = max(sym, float(np.max(np.abs(bp.t - np.conj(bm.t)))))
    report["conjugation_symmetry"] = sym

    # harmonic-measure identity at mode zero:
    # T(1->1) delbar omega_1 + del omega_1 - R1 S1 del omega_1 = 0.
    h1 = cfg.h1
    blk0 = build_mode_operators(cfg, 0)
    d_omega = -0.5j / h1          # dz density of del omega_1
    db_omega = 0.5j / h1          # dzbar density of delbar omega_1
    t11_dens = blk0.t[0, 0] * db_omega   # dz density of T(1->1) delbar omega
    r1s1 = h1 * d_omega                  # dz density of R1 S1 del omega
    report["harmonic_measure"] = float(abs(t11_dens + d_omega - r1s1))

    # catalyzing consistency of an overfare-built triple
    rng = np.random.default_rng(rng_seed)
    zeta = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    alpha2, beta2bar = {}, {}
    for k in range(-min(cfg.modes, 4), min(cfg.modes, 4) + 1):
        decay = 0.5 ** abs(k)
        alpha2[k] = (rng.standard_normal() + 1j * rng.standard_normal()) \
            * decay
        beta2bar[k] = (rng.standard_normal() + 1j * rng.standard_normal()) \
            * decay
    beta2bar[0] = zeta[0] + zeta[1] - alpha2[0]
    side1 = compatible_from_torus(cfg, alpha2, beta2bar, zeta)
    side2 = {k: (alpha2[k], beta2bar[k]) for k in alpha2}
    report["catalyzing"] = catalyzing_residual(cfg, side1, side2, zeta)

    # scattering relation on the built triple, every mode
    scat = 0.0
    for k in alpha2:
        m, _ = scattering_3x3(cfg, k)
        norms = _mode_norms(cfg, k)
        a1on = side1[k][0] * np.sqrt(norms[0][0])
        b1on = side1[k][1] * np.sqrt(norms[0][1])
        a2on = alpha2[k] * np.sqrt(norms[1][0])
        b2on = beta2bar[k] * np.sqrt(norms[1][1])
        if k == 0:
            vec = m @ np.array([a1on, a2on, zeta[1]])
            want = np.array([b1on, b2on, zeta[0]])
        else:
            vec = m @ np.array([a1on, a2on])
            want = np.array([b1on, b2on])
        scat = max(scat, float(np.max(np.abs(vec - want))))
    report["scattering_on_triple"] = scat

    # index of the assembled cross block (block diagonal over modes)
    diag = np.array(t12_entries, dtype=complex)
    ker, coker, index, svals = kernel_cokernel(np.diag(diag))
    report["index"] = {"ker": ker, "coker": coker, "index": index,
                       "sigma_min": float(svals[-1])}
    return report
