"""Numerical scattering theory for L^2 harmonic one-forms on split surfaces."""

__version__ = "0.1.0"
