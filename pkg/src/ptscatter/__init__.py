"""Closed-form and numerical scattering for rationally extended PT-symmetric potentials."""

from __future__ import annotations

__version__ = "0.1.0"
