"""Exception and warning types shared across the package."""

from __future__ import annotations


class PtScatterError(Exception):
    """Base class for all package errors."""


class PoleError(PtScatterError, ZeroDivisionError):
    """Argument lies within the pole tolerance of a Gamma pole."""


class GammaOverflowError(PtScatterError, OverflowError):
    """Gamma value exceeds the double-precision range."""


class DegenerateParamError(PtScatterError, ValueError):
    """A denominator of a closed-form construction vanishes."""


class NearNodeError(PtScatterError, ValueError):
    """A rational-extension denominator comes too close to zero on the real line."""


class EmptySpectrum(PtScatterError, ValueError):
    """The requested bound-state family has no members."""


class NonConvergence(PtScatterError, RuntimeError):
    """The numerical integrator could not meet its tolerance."""


class AsymptoteError(PtScatterError, ValueError):
    """The potential has not reached its asymptotic value at the domain edge."""


class NoRootError(PtScatterError, ValueError):
    """No sign change of the shooting mismatch inside the bracket."""


class MultipleRootWarning(UserWarning):
    """The shooting bracket appears to contain more than one eigenvalue."""


class ParameterWarning(UserWarning):
    """Parameters fall outside the range where the closed forms are believed safe."""
