"""Complex Gamma function and classical Jacobi polynomials.

The Gamma function uses a fixed 14-term Lanczos-type rational approximation
(g = 671/128) on the right half-plane and the reflection formula on the
left.  Jacobi polynomials are evaluated by the three-term degree recurrence,
which accepts scalar or array arguments and complex parameters.
"""

from __future__ import annotations

import cmath
import math
from typing import Union

import numpy as np

from .errors import DegenerateParamError, GammaOverflowError, PoleError

ComplexLike = Union[complex, float, int, np.ndarray]

POLE_TOL = 1e-12
DEGENERACY_TOL = 1e-13

_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005
_LOG_PI = math.log(math.pi)
_LOG_MAX = math.log(np.finfo(float).max)


def _check_pole(z: complex) -> None:
    n = round(z.real)
    if n <= 0 and abs(z - n) < POLE_TOL:
        raise PoleError(f"Gamma pole at z={z!r} (distance {abs(z - n):.3g} from {n})")


def _lanczos_log(z: complex) -> complex:
    # Valid for Re z >= 0.5.
    tmp = z + _LANCZOS_G
    tmp = (z + 0.5) * cmath.log(tmp) - tmp
    ser = _LANCZOS_C0
    y = z
    for c in _LANCZOS_COEF:
        y += 1.0
        ser += c / y
    return tmp + cmath.log(_SQRT_2PI * ser / z)


def _sinpi(z: complex) -> complex:
    # sin(pi z) with the integer part removed first, which keeps full
    # relative accuracy next to the zeros.
    n = round(z.real)
    s = cmath.sin(math.pi * (z - n))
    return -s if n % 2 else s


def _log_sinpi(z: complex) -> complex:
    """Principal logarithm of sin(pi z), safe for large |Im z|."""
    if abs(z.imag) < 30.0:
        return cmath.log(_sinpi(z))
    if z.imag < 0:
        return _log_sinpi(z.conjugate()).conjugate()
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}); the last factor is 1
    # to double precision once Im z > 30.
    val = -1j * math.pi * z + cmath.log(0.5j)
    im = math.remainder(val.imag, 2 * math.pi)
    if im == -math.pi:
        im = math.pi
    return complex(val.real, im)


def _clgamma(z: complex) -> complex:
    if z.real >= 0.5:
        return _lanczos_log(z)
    # Reflection with the branch correction that keeps the result on the
    # analytic continuation of the real log-gamma.
    shift = math.copysign(2 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
    return complex(_LOG_PI, shift) - _log_sinpi(z) - _clgamma(1.0 - z)


def clgamma(z: complex) -> complex:
    """Logarithm of the Gamma function on its principal branch.

    The branch is the analytic continuation of the real ``lgamma`` from the
    positive real axis, with the cut along the negative real axis (the same
    convention as :func:`scipy.special.loggamma`).

    Parameters
    ----------
    z : complex
        Argument.

    Returns
    -------
    complex

    Raises
    ------
    PoleError
        If `z` lies within ``POLE_TOL`` of a non-positive integer.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    _check_pole(z)
    return _clgamma(z)


def cgamma(z: complex) -> complex:
    """Complex Gamma function.

    Parameters
    ----------
    z : complex
        Argument.

    Returns
    -------
    complex

    Raises
    ------
    PoleError
        Near a non-positive integer.
    GammaOverflowError
        If ``|Gamma(z)|`` exceeds the double range.
    """
    lg = clgamma(z)
    if lg.real > _LOG_MAX:
        raise GammaOverflowError(f"|Gamma({complex(z)!r})| overflows (log modulus {lg.real:.6g})")
    return cmath.exp(lg)


def _as_argument(z: ComplexLike):
    if np.ndim(z) == 0:
        return complex(z)
    return np.asarray(z, dtype=complex)


def jacobi(n: int, alpha: complex, beta: complex, z: ComplexLike) -> ComplexLike:
    """Jacobi polynomial ``P_n^{(alpha, beta)}(z)`` by degree recurrence.

    Parameters
    ----------
    n : int
        Degree.  Negative degrees return zero, which is the convention the
        closed-form constructions rely on (``P_{-1} = 0``).
    alpha, beta : complex
        Parameters; arbitrary complex values are allowed.
    z : complex or array_like
        Evaluation point(s).

    Returns
    -------
    complex or ndarray

    Raises
    ------
    DegenerateParamError
        If a recurrence denominator ``2k(k+a+b)(2k+a+b-2)`` vanishes for some
        ``2 <= k <= n``.
    """
    z = _as_argument(z)
    a = complex(alpha)
    b = complex(beta)
    if n < 0:
        return z * 0.0
    p0 = z * 0.0 + 1.0
    if n == 0:
        return p0
    p1 = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0
    for k in range(2, n + 1):
        c = 2 * k + a + b
        if abs(k + a + b) < DEGENERACY_TOL or abs(c - 2.0) < DEGENERACY_TOL:
            raise DegenerateParamError(
                f"Jacobi recurrence degenerates at k={k} for alpha={a!r}, beta={b!r}"
            )
        a1 = 2.0 * k * (k + a + b) * (c - 2.0)
        a2 = (c - 1.0) * (a * a - b * b)
        a3 = (c - 1.0) * c * (c - 2.0)
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c
        p0, p1 = p1, ((a2 + a3 * z) * p1 - a4 * p0) / a1
    return p1


def jacobi_deriv(n: int, alpha: complex, beta: complex, z: ComplexLike, order: int = 1) -> ComplexLike:
    """Derivative of a Jacobi polynomial with respect to its argument.

    Uses ``d/dz P_n^{(a,b)} = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}`` applied
    `order` times, which is exact for polynomials.

    Parameters
    ----------
    n : int
        Degree.
    alpha, beta : complex
        Parameters.
    z : complex or array_like
        Evaluation point(s).
    order : int, optional
        Derivative order, default 1.

    Returns
    -------
    complex or ndarray
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    z = _as_argument(z)
    a = complex(alpha)
    b = complex(beta)
    if order > n:
        return z * 0.0
    factor = 1.0 + 0.0j
    for j in range(1, order + 1):
        factor *= (n + a + b + j) / 2.0
    return factor * jacobi(n - order, a + order, b + order, z)


def jacobi_leading_coeff(n: int, alpha: complex, beta: complex) -> complex:
    """Coefficient of ``z**n`` in ``P_n^{(alpha, beta)}(z)``.

    Mathematically ``Gamma(2n+a+b+1) / (2^n n! Gamma(n+a+b+1))``.  The two
    Gamma factors are cancelled into the finite product
    ``prod_{j=1..n} (n+a+b+j) / (2j)``, which is entire in ``a+b`` and so
    never hits a Gamma pole.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    s = complex(alpha) + complex(beta)
    if n == 0:
        return 1.0 + 0.0j
    prod = 1.0 + 0.0j
    for j in range(1, n + 1):
        prod *= (n + s + j) / (2.0 * j)
    return prod
