"""PT-symmetric Scarf II and Rosen-Morse II potentials and their rational extensions.

All potentials are complex-valued functions of a real coordinate ``x`` and
accept scalars or numpy arrays.  Scarf II extensions are built from Jacobi
polynomials in ``i sinh x``; Rosen-Morse II extensions from Jacobi
polynomials in ``tanh x``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from .errors import NearNodeError, ParameterWarning
from .specfun import jacobi, jacobi_deriv

NODE_EVAL_TOL = 1e-10
NODE_GUARD_TOL = 1e-8
GUARD_RANGE = (-30.0, 30.0)
GUARD_SAMPLES = 6001


def _sech2(x):
    # sech^2 without overflow in cosh for large |x|.
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True)
class ScarfParams:
    """Parameters of the PT-symmetric Scarf II family.

    Attributes
    ----------
    A : float
        Depth index, ``A > 0``.
    B : float
        Strength of the imaginary ``sech x tanh x`` term.
    m : int
        Rational extension order; 0 is the conventional potential.
    """

    A: float
    B: float
    m: int = 0

    def __post_init__(self):
        if not np.isfinite(self.A) or not np.isfinite(self.B):
            raise ValueError("A and B must be finite")
        if self.A <= 0:
            raise ValueError(f"Scarf II requires A > 0, got A={self.A}")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"extension order must be a non-negative integer, got m={self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.m >= 1 and not self.B > self.m - 0.5:
            warnings.warn(
                f"B={self.B} <= m-1/2={self.m - 0.5}: the extension factor 2B-m+1 may degenerate",
                ParameterWarning,
                stacklevel=3,
            )

    @property
    def alpha(self) -> float:
        return self.B - self.A - 0.5

    @property
    def beta(self) -> float:
        return -self.B - self.A - 0.5

    @property
    def gamma(self) -> float:
        return self.A - self.B + 0.5

    @property
    def delta(self) -> float:
        return -self.A - self.B - 0.5

    @property
    def b(self) -> float:
        return (self.beta + self.alpha) / (self.beta - self.alpha)

    def swapped(self) -> "ScarfParams":
        """Parameters after the substitution ``B <-> A + 1/2``."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            return ScarfParams(self.B - 0.5, self.A + 0.5, self.m)


@dataclass(frozen=True)
class RMParams:
    """Parameters of the PT-symmetric Rosen-Morse II family.

    Attributes
    ----------
    A : float
        Well strength, ``A > 0`` and ``A > m - 1``.
    B : float
        Strength of the ``2iB tanh x`` term.
    m : int
        Rational extension order.
    """

    A: float
    B: float
    m: int = 0

    def __post_init__(self):
        if not np.isfinite(self.A) or not np.isfinite(self.B):
            raise ValueError("A and B must be finite")
        if self.A <= 0:
            raise ValueError(f"Rosen-Morse II requires A > 0, got A={self.A}")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"extension order must be a non-negative integer, got m={self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.m >= 1 and not self.A > self.m - 1:
            raise ValueError(f"extension requires A > m-1, got A={self.A}, m={self.m}")

    def exponents(self, n: int) -> Tuple[complex, complex]:
        """``(alpha_n, beta_n)`` with ``c = A+1-n``: ``c + iB/c`` and ``c - iB/c``."""
        c = self.A + 1.0 - n
        if c == 0:
            raise ValueError(f"exponents undefined at n = A+1 = {n}")
        return c + 1j * self.B / c, c - 1j * self.B / c

    def g(self, z, order: int = 0, shift: int = 0):
        """Polynomial ``g_{m-shift}`` with the exponents of level ``m``.

        ``shift=0`` gives ``g_m^{(A,iB)} = P_m^{(alpha_m, beta_m)}``; ``shift=1``
        gives ``g_{m-1}^{(A-1,iB)}``, which carries the same exponents.
        """
        if self.m == 0:
            base = np.asarray(z, dtype=complex) * 0.0
            return base + (1.0 if shift == 0 and order == 0 else 0.0)
        a, b = self.exponents(self.m)
        return jacobi_deriv(self.m - shift, a, b, z, order) if order else jacobi(self.m - shift, a, b, z)


class Model(str, enum.Enum):
    SCARF = "scarf"
    SCARF_PSYM = "scarf-psym"
    RM = "rm"


@dataclass(frozen=True)
class PotentialSpec:
    """A concrete potential: model family plus ``(A, B, m)``.

    ``scarf`` is the extended Scarf II potential (conventional at ``m=0``),
    ``scarf-psym`` its parametric partner obtained from ``B <-> A+1/2``, and
    ``rm`` the extended Rosen-Morse II potential.
    """

    model: Model
    A: float
    B: float
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        self.params  # validate

    @property
    def params(self) -> Union[ScarfParams, RMParams]:
        if self.model is Model.RM:
            return RMParams(self.A, self.B, self.m)
        return ScarfParams(self.A, self.B, self.m)

    @property
    def is_scarf(self) -> bool:
        return self.model is not Model.RM

    def potential(self, conventional: bool = False) -> Callable:
        """The potential as a callable ``V(x)``."""
        p = self.params
        if self.model is Model.SCARF:
            f = scarf_conventional if conventional else scarf_extended
        elif self.model is Model.SCARF_PSYM:
            f = scarf_conventional if conventional else scarf_extended_partner
        else:
            f = rm_conventional if conventional else rm_extended
        return lambda x: f(x, p)

    def tail_deviation(self, conventional: bool = False) -> Callable:
        """Callable ``V(x) - V(sign(x) inf)``, accurate far into the tails."""
        if self.is_scarf:
            return self.potential(conventional)
        p = self.params
        return lambda x: rm_tail_deviation(x, p, extended=not conventional)

    def asymptotes(self) -> Tuple[complex, complex]:
        """Values ``(V(-inf), V(+inf))``."""
        if self.is_scarf:
            return 0j, 0j
        return -2j * self.B, 2j * self.B

    def denominator(self, x):
        """The polynomial whose zeros would be poles of the extended potential."""
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.m == 0:
            return np.ones_like(x, dtype=complex)
        if self.model is Model.SCARF:
            return jacobi(p.m, -p.alpha - 1, p.beta - 1, 1j * np.sinh(x))
        if self.model is Model.SCARF_PSYM:
            return jacobi(p.m, -p.gamma - 1, p.delta - 1, 1j * np.sinh(x))
        return p.g(np.tanh(x))


def scarf_conventional(x, p: ScarfParams):
    """Conventional PT-symmetric Scarf II potential.

    ``V(x) = (-B^2 - A(A+1)) sech^2 x + iB(2A+1) sech x tanh x``.
    """
    A, B = p.A, p.B
    return (-B * B - A * (A + 1.0)) * _sech2(x) + 1j * B * (2.0 * A + 1.0) * _sech(x) * np.tanh(x)


def _scarf_rational(x, m: int, lam: float, c1: float, c2: float, a_num, b_num, a_den, b_den):
    # Shared form of the two rationally extended Scarf II potentials:
    # 2m*lam + lam*(c1 + c2 i sinh x) R - lam^2 cosh^2 x R^2 / 2,
    # R = P_{m-1}^{(a_num,b_num)} / P_m^{(a_den,b_den)} at i sinh x.
    z = 1j * np.sinh(x)
    den = jacobi(m, a_den, b_den, z)
    scale = (1.0 + np.abs(z)) ** m
    if np.any(np.abs(den) < NODE_EVAL_TOL * scale):
        raise NearNodeError(f"extension denominator nearly vanishes (min |P_m| = {np.min(np.abs(den)):.3g})")
    R = jacobi(m - 1, a_num, b_num, z) / den
    # cosh^2 x * R^2 = (1 - z^2) R^2; keeps large-|x| evaluation finite.
    return 2.0 * m * lam + lam * (c1 + c2 * z) * R - 0.5 * lam * lam * (1.0 - z * z) * R * R


def scarf_extended(x, p: ScarfParams):
    """Rationally extended Scarf II potential of order ``p.m``.

    Built from ``P_{m-1}^{(-alpha,beta)} / P_m^{(-alpha-1,beta-1)}`` at
    ``i sinh x``; returns exactly :func:`scarf_conventional` when ``m=0``.

    Raises
    ------
    NearNodeError
        If ``|P_m^{(-alpha-1,beta-1)}(i sinh x)| < 1e-10 (1+|sinh x|)^m``.
    """
    V0 = scarf_conventional(x, p)
    if p.m == 0:
        return V0
    lam = 2.0 * p.B - p.m + 1.0
    return V0 + _scarf_rational(
        x, p.m, lam, -2.0 * p.A - 1.0, 2.0 * p.B + 1.0, -p.alpha, p.beta, -p.alpha - 1.0, p.beta - 1.0
    )


def scarf_extended_partner(x, p: ScarfParams):
    """Extended Scarf II potential after the substitution ``B <-> A+1/2``.

    Uses the partner exponents ``gamma = A-B+1/2`` and ``delta = -A-B-1/2``
    directly; it coincides with ``scarf_extended(x, p.swapped())``.
    """
    V0 = scarf_conventional(x, p)
    if p.m == 0:
        return V0
    lam = 2.0 * p.A - p.m + 2.0
    return V0 + _scarf_rational(
        x, p.m, lam, -2.0 * p.B, 2.0 * p.A + 2.0, -p.gamma, p.delta, -p.gamma - 1.0, p.delta - 1.0
    )


def rm_conventional(x, p: RMParams):
    """Conventional PT-symmetric Rosen-Morse II potential.

    ``V(x) = -A(A+1) sech^2 x + 2iB tanh x``.
    """
    return -p.A * (p.A + 1.0) * _sech2(x) + 2j * p.B * np.tanh(x)


def _rm_rational(x, p: RMParams):
    z = np.tanh(x)
    g0 = p.g(z)
    if np.any(np.abs(g0) < NODE_EVAL_TOL):
        raise NearNodeError(f"g_m nearly vanishes (min |g_m| = {np.min(np.abs(g0)):.3g})")
    d1 = p.g(z, 1) / g0
    d2 = p.g(z, 2) / g0
    w = _sech2(x)
    return 2.0 * w * (2.0 * z * d1 - w * (d2 - d1 * d1) - p.m)


def rm_extended(x, p: RMParams):
    """Rationally extended Rosen-Morse II potential.

    Adds ``2(1-z^2){2z g'/g - (1-z^2)[g''/g - (g'/g)^2] - m}`` with
    ``z = tanh x`` and ``g = P_m^{(alpha_m, beta_m)}``.

    Raises
    ------
    NearNodeError
        If ``|g_m(tanh x)| < 1e-10``.
    """
    V0 = rm_conventional(x, p)
    if p.m == 0:
        return V0
    return V0 + _rm_rational(x, p)


def rm_tail_deviation(x, p: RMParams, extended: bool = True):
    """``V(x) - V(sign(x) inf)`` for Rosen-Morse II without cancellation.

    ``V(x) + 2iB`` computed as a difference loses all digits once
    ``1 + tanh x`` drops below the rounding unit of ``2B`` (``|x| > 18`` or
    so); here ``tanh x - sign x = -sign(x) 2e^{-2|x|} / (1 + e^{-2|x|})``.
    """
    x = np.asarray(x, dtype=float)
    e = np.exp(-2.0 * np.abs(x))
    gap = -np.sign(x) * 2.0 * e / (1.0 + e)
    out = -p.A * (p.A + 1.0) * _sech2(x) + 2j * p.B * gap
    if extended and p.m > 0:
        out = out + _rm_rational(x, p)
    return out


def denominator_min_abs(spec: PotentialSpec, x_range=GUARD_RANGE, samples: int = GUARD_SAMPLES) -> float:
    """Minimum modulus of the extension denominator over a uniform grid.

    Parameters
    ----------
    spec : PotentialSpec
    x_range : (float, float)
        Closed interval to scan.
    samples : int
        Number of grid points, at least 2.

    Returns
    -------
    float
        1.0 for conventional (``m=0``) potentials.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    x = np.linspace(x_range[0], x_range[1], samples)
    return float(np.min(np.abs(spec.denominator(x))))


def check_nodeless(spec: PotentialSpec, x_range=GUARD_RANGE, samples: int = GUARD_SAMPLES,
                   threshold: float = NODE_GUARD_TOL) -> float:
    """Raise :class:`NearNodeError` unless the denominator stays above `threshold`."""
    dmin = denominator_min_abs(spec, x_range, samples)
    if dmin < threshold:
        raise NearNodeError(
            f"{spec.model.value} A={spec.A} B={spec.B} m={spec.m}: denominator minimum {dmin:.3g} < {threshold:g}"
        )
    return dmin
