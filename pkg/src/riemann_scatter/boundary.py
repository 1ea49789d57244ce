"""Fourier analysis on the unit circle.

Function and one-form boundary spaces, fractional Sobolev norms, the Douglas
double-integral energy, Dirichlet solvers on disk and annulus, the bounce
operator from collar data to the disk, and the duality machinery between
H^{1/2} boundary functions and boundary one-form classes.

Conventions
-----------
Boundary functions are truncated Fourier series

    f(e^{i theta}) = sum_{|n| <= N} c_n e^{i n theta}.

A boundary one-form class is stored through its canonical representative on
the punctured disk,

    alpha = sum_{n>=0} f_n z^n dz + sum_{n>=0} A_n zbar^n dzbar
            + (a / 4 pi i) (dz/z - dzbar/zbar),

where ``A_n`` multiplies ``zbar^n dzbar`` directly.  Pairing a class against a
boundary function is the limit of circle integrals ∮ H alpha as the radius
tends to one; the closed-form pairing table used below is

    pair = a * h(0)  +  2 pi i * sum_n f_n h(-n-1)  -  2 pi i * sum_n A_n h(n+1),

with h(k) the k-th Fourier coefficient of the test function.  The table is
frozen from residue integration and cross-checked against near-boundary
quadrature in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonConvergent

__all__ = [
    "FourierFunction",
    "DiskHarmonicFunction",
    "AnnulusHarmonicFunction",
    "BoundaryFormClass",
    "h_half_norm",
    "h_minus_half_norm",
    "dual_action_coefficients",
    "pair",
    "pair_quadrature",
    "douglas_energy",
    "dirichlet_energy",
    "poisson_extend",
    "bounce_annulus_to_disk",
    "riesz_representer",
    "representer_apply",
    "h_conf_norm",
]


# ---------------------------------------------------------------------------
# Boundary data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierFunction:
    """Truncated Fourier series on the unit circle.

    ``coeffs[n + truncation]`` is the coefficient of e^{i n theta} for
    ``|n| <= truncation``.
    """

    coeffs: np.ndarray
    truncation: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * self.truncation + 1,):
            raise DimensionMismatch(
                f"expected {2 * self.truncation + 1} coefficients, "
                f"got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_modes(cls, modes: dict, truncation: int) -> "FourierFunction":
        c = np.zeros(2 * truncation + 1, dtype=complex)
        for n, v in modes.items():
            if abs(n) > truncation:
                raise DimensionMismatch(f"mode {n} exceeds truncation")
            c[n + truncation] = v
        return cls(c, truncation)

    @classmethod
    def zero(cls, truncation: int) -> "FourierFunction":
        return cls(np.zeros(2 * truncation + 1, dtype=complex), truncation)

    def mode(self, n: int) -> complex:
        if abs(n) > self.truncation:
            return 0.0 + 0.0j
        return complex(self.coeffs[n + self.truncation])

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        n = np.arange(-self.truncation, self.truncation + 1)
        return np.exp(1j * np.outer(theta, n)) @ self.coeffs

    def derivative(self) -> "FourierFunction":
        """d/dtheta, as a Fourier series."""
        n = np.arange(-self.truncation, self.truncation + 1)
        return FourierFunction(1j * n * self.coeffs, self.truncation)

    def is_real(self, tol=1e-12) -> bool:
        return bool(np.all(np.abs(self.coeffs - np.conj(self.coeffs[::-1]))
                           <= tol))

    def l2_norm(self) -> float:
        """Norm in L^2(S^1, dtheta): (2 pi sum |c_n|^2)^{1/2}."""
        return float(np.sqrt(2 * np.pi * np.sum(np.abs(self.coeffs) ** 2)))


@dataclass(frozen=True)
class DiskHarmonicFunction:
    """c0 + sum a_n z^n + sum b_n zbar^n, harmonic on the unit disk.

    ``holo[n-1] = a_n`` and ``antiholo[n-1] = b_n`` for n = 1..truncation.
    """

    c0: complex
    holo: np.ndarray
    antiholo: np.ndarray
    truncation: int

    def __post_init__(self):
        for name in ("holo", "antiholo"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (self.truncation,):
                raise DimensionMismatch(f"{name} must have length truncation")
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, truncation: int) -> "DiskHarmonicFunction":
        z = np.zeros(truncation, dtype=complex)
        return cls(0.0, z, z.copy(), truncation)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        n = np.arange(1, self.truncation + 1)
        zp = z[..., None] ** n
        return (self.c0 + zp @ self.holo
                + np.conj(zp) @ self.antiholo)

    def boundary_trace(self) -> FourierFunction:
        c = np.zeros(2 * self.truncation + 1, dtype=complex)
        c[self.truncation] = self.c0
        c[self.truncation + 1:] = self.holo
        c[:self.truncation] = self.antiholo[::-1]
        return FourierFunction(c, self.truncation)


@dataclass(frozen=True)
class AnnulusHarmonicFunction:
    """Harmonic function on r < |z| < R.

    h(z) = c0 + dlog*log|z|
           + sum_{n>=1} (a_n z^n + am_n z^{-n} + b_n zbar^n + bm_n zbar^{-n}).
    """

    c0: complex
    dlog: complex
    a: np.ndarray
    am: np.ndarray
    b: np.ndarray
    bm: np.ndarray
    radii: tuple
    truncation: int = field(default=0)

    def __post_init__(self):
        r, big_r = self.radii
        if not 0 < r < big_r:
            raise DimensionMismatch("annulus radii must satisfy 0 < r < R")
        n = len(np.asarray(self.a))
        object.__setattr__(self, "truncation", n)
        for name in ("a", "am", "b", "bm"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (n,):
                raise DimensionMismatch("mode arrays must share one length")
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, truncation: int, radii=(0.5, 1.0)) -> "AnnulusHarmonicFunction":
        z = np.zeros(truncation, dtype=complex)
        return cls(0.0, 0.0, z, z.copy(), z.copy(), z.copy(), radii)

    @classmethod
    def from_disk(cls, h: DiskHarmonicFunction, r: float) -> "AnnulusHarmonicFunction":
        """Restriction of a disk-harmonic function to the annulus (r, 1)."""
        zeros = np.zeros(h.truncation, dtype=complex)
        return cls(h.c0, 0.0, h.holo.copy(), zeros, h.antiholo.copy(),
                   zeros.copy(), (r, 1.0))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        n = np.arange(1, self.truncation + 1)
        zp = z[..., None] ** n
        zm = z[..., None] ** (-n)
        out = self.c0 + self.dlog * np.log(np.abs(z))
        out = out + zp @ self.a + zm @ self.am
        out = out + np.conj(zp) @ self.b + np.conj(zm) @ self.bm
        return out


@dataclass(frozen=True)
class BoundaryFormClass:
    """Canonical representative of a boundary one-form class on the circle.

    ``holo[n]`` multiplies z^n dz, ``antiholo[n]`` multiplies zbar^n dzbar
    (n = 0..truncation-1) and ``period`` is the coefficient a of the
    rotation-invariant part (a / 4 pi i)(dz/z - dzbar/zbar).
    """

    holo: np.ndarray
    antiholo: np.ndarray
    period: complex
    truncation: int

    def __post_init__(self):
        for name in ("holo", "antiholo"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (self.truncation,):
                raise DimensionMismatch(f"{name} must have length truncation")
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, truncation: int) -> "BoundaryFormClass":
        z = np.zeros(truncation, dtype=complex)
        return cls(z, z.copy(), 0.0, truncation)

    @classmethod
    def dtheta(cls, truncation: int) -> "BoundaryFormClass":
        """The class of dtheta: pure period part with a = 2 pi."""
        z = np.zeros(truncation, dtype=complex)
        return cls(z, z.copy(), 2 * np.pi, truncation)


# ---------------------------------------------------------------------------
# Sobolev norms and the duality pairing
# ---------------------------------------------------------------------------

def h_half_norm(f: FourierFunction) -> float:
    """H^{1/2}(S^1) norm: (sum (1+n^2)^{1/2} |c_n|^2)^{1/2}."""
    n = np.arange(-f.truncation, f.truncation + 1)
    w = np.sqrt(1.0 + n.astype(float) ** 2)
    return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2)))


def pair(b: BoundaryFormClass, h: FourierFunction) -> complex:
    """Duality pairing lim_{r->1} ∮_{|z|=r} H alpha in closed form.

    The period part contributes a*h(0); the z^n dz part pairs with mode
    -(n+1) carrying a factor 2 pi i; the zbar^n dzbar part pairs with mode
    n+1 carrying -2 pi i.
    """
    total = b.period * h.mode(0)
    for n in range(b.truncation):
        total += 2j * np.pi * b.holo[n] * h.mode(-n - 1)
        total -= 2j * np.pi * b.antiholo[n] * h.mode(n + 1)
    return complex(total)


def pair_quadrature(b: BoundaryFormClass, h: FourierFunction,
                    radius=1.0 - 1e-6, nodes=4096) -> complex:
    """Brute-force oracle for :func:`pair`: quadrature of ∮_{|z|=r} H alpha.

    H is the harmonic extension of h; alpha is evaluated from the stored
    canonical representative.  Slowly convergent in (1 - radius); used only
    to validate the frozen pairing table.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = radius * np.exp(1j * theta)
    big_h = poisson_extend(h)(z)
    n = np.arange(b.truncation)
    zn = z[:, None] ** n
    f_dens = zn @ b.holo
    a_dens = np.conj(z[:, None]) ** n @ b.antiholo
    dz = 1j * z * (2 * np.pi / nodes)
    dzbar = np.conj(dz)
    delta = b.period / (4j * np.pi) * (dz / z - dzbar / np.conj(z))
    return complex(np.sum(big_h * (f_dens * dz + a_dens * dzbar + delta)))


def dual_action_coefficients(b: BoundaryFormClass, max_mode: int) -> np.ndarray:
    """alpha_n = pair(b, e^{i n theta}) for |n| <= max_mode."""
    out = np.zeros(2 * max_mode + 1, dtype=complex)
    out[max_mode] = b.period
    for n in range(min(b.truncation, max_mode)):
        out[max_mode - n - 1] = 2j * np.pi * b.holo[n]
        out[max_mode + n + 1] = -2j * np.pi * b.antiholo[n]
    return out


def h_minus_half_norm(b: BoundaryFormClass) -> float:
    """Dual H^{-1/2} norm via the action coefficients alpha_n.

    Returns (sum_n |alpha_n|^2 / (1+n^2)^{1/2})^{1/2} with
    alpha_n = pair(b, e^{i n theta}).
    """
    alpha = dual_action_coefficients(b, b.truncation + 1)
    n = np.arange(-b.truncation - 1, b.truncation + 2)
    w = np.sqrt(1.0 + n.astype(float) ** 2)
    return float(np.sqrt(np.sum(np.abs(alpha) ** 2 / w)))


# ---------------------------------------------------------------------------
# Energies and harmonic extension
# ---------------------------------------------------------------------------

def douglas_energy(f: FourierFunction, nodes: int, tol=1e-8) -> float:
    """Raw Douglas double integral by the trapezoid rule.

    Computes ∬ |f(z)-f(zeta)|^2 / |z-zeta|^2 |dz| |dzeta| over the torus of
    angle pairs, with the diagonal replaced by its analytic limit |f'|^2
    (the derivative taken in theta).  No prefactor is applied; the
    calibration constant relating this to the disk Dirichlet energy is
    exposed by the test suite (value 2 pi, fixed by f = e^{i theta}).

    Raises NonConvergent when doubling ``nodes`` moves the value by more
    than ``tol`` relatively.
    """
    if nodes < 4 * max(f.truncation, 1):
        raise DimensionMismatch("node count must be at least 4N")

    def value(m):
        theta = 2 * np.pi * np.arange(m) / m
        z = np.exp(1j * theta)
        fv = f(theta)
        dfv = f.derivative()(theta)
        num = np.abs(fv[:, None] - fv[None, :]) ** 2
        den = np.abs(z[:, None] - z[None, :]) ** 2
        np.fill_diagonal(num, 0.0)
        np.fill_diagonal(den, 1.0)
        integrand = num / den
        np.fill_diagonal(integrand, np.abs(dfv) ** 2)
        return float(np.sum(integrand) * (2 * np.pi / m) ** 2)

    coarse = value(nodes)
    fine = value(2 * nodes)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise NonConvergent(
            f"Douglas integral moved by {abs(fine - coarse):.3e} "
            f"under node doubling")
    return coarse


def dirichlet_energy(h: DiskHarmonicFunction) -> float:
    """∬_D dh wedge * conj(dh) = 2 pi sum n (|a_n|^2 + |b_n|^2)."""
    n = np.arange(1, h.truncation + 1, dtype=float)
    return float(2 * np.pi * np.sum(n * (np.abs(h.holo) ** 2
                                         + np.abs(h.antiholo) ** 2)))


def poisson_extend(f: FourierFunction) -> DiskHarmonicFunction:
    """Harmonic extension to the disk: mode n -> z^n, mode -n -> zbar^n."""
    n = f.truncation
    holo = f.coeffs[n + 1:].copy()
    antiholo = f.coeffs[:n][::-1].copy()
    return DiskHarmonicFunction(complex(f.coeffs[n]), holo, antiholo, n)


def bounce_annulus_to_disk(h: AnnulusHarmonicFunction) -> DiskHarmonicFunction:
    """Disk-harmonic function with the same boundary values at |z| = 1.

    Requires outer radius 1.  Per mode the z^n and zbar^{-n} contributions
    collapse onto z^n (and symmetrically); log|z| vanishes on the circle.
    """
    if abs(h.radii[1] - 1.0) > 1e-14:
        raise DimensionMismatch("bounce requires outer radius 1")
    holo = h.a + h.bm
    antiholo = h.b + h.am
    return DiskHarmonicFunction(h.c0, holo, antiholo, h.truncation)


def h_conf_norm(h: DiskHarmonicFunction) -> float:
    """Conformally invariant norm (energy + |mean boundary integral|^2)^{1/2}.

    The boundary functional is ∮ h dtheta = 2 pi c0 on the disk.
    """
    mean = 2 * np.pi * h.c0
    return float(np.sqrt(dirichlet_energy(h) + abs(mean) ** 2))


# ---------------------------------------------------------------------------
# Riesz representer of a boundary-form functional
# ---------------------------------------------------------------------------

def riesz_representer(b: BoundaryFormClass, inner_radius: float
                      ) -> AnnulusHarmonicFunction:
    """Harmonic representer of the functional L_b on the annulus (r, 1).

    With F the Riesz representer of L_b in H^{1/2}(S^1), the returned
    function carries mode-n coefficient (1+n^2)^{1/2} F(n) = conj(alpha_n)
    on s^{|n|} e^{i n theta}.  Apply it with :func:`representer_apply`.
    """
    if not 0 < inner_radius < 1:
        raise DimensionMismatch("inner radius must lie in (0, 1)")
    nmax = b.truncation + 1
    alpha = dual_action_coefficients(b, nmax)
    coeff = np.conj(alpha)
    a = coeff[nmax + 1:]
    bneg = coeff[:nmax][::-1]
    zeros = np.zeros(nmax, dtype=complex)
    return AnnulusHarmonicFunction(coeff[nmax], 0.0, a, zeros, bneg,
                                   zeros.copy(), (inner_radius, 1.0))


def representer_apply(alpha: AnnulusHarmonicFunction, h: FourierFunction,
                      s: float = 1.0) -> complex:
    """(1/2 pi) ∮ h(e^{i theta}) conj(alpha(s e^{i theta})) dtheta.

    At s -> 1 this reproduces the represented functional; evaluated in
    closed form per mode.
    """
    total = h.mode(0) * np.conj(alpha.c0)
    for n in range(1, alpha.truncation + 1):
        total += h.mode(n) * np.conj(alpha.a[n - 1]) * s ** n
        total += h.mode(-n) * np.conj(alpha.b[n - 1]) * s ** n
    return complex(total)
