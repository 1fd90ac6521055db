"""Exceptional Jacobi polynomials and the Rosen-Morse II ``y_nu`` polynomials."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateParamError
from .potentials import RMParams
from .specfun import DEGENERACY_TOL, jacobi, jacobi_deriv


def _nonzero(value: complex, what: str) -> complex:
    if abs(value) < DEGENERACY_TOL:
        raise DegenerateParamError(f"{what} vanishes ({value!r})")
    return value


@dataclass(frozen=True)
class XmJacobi:
    """Index data of an X_m exceptional Jacobi polynomial of degree ``n + m``."""

    m: int
    n: int
    alpha: complex
    beta: complex

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")


@dataclass(frozen=True)
class YPoly:
    """Index data of the Rosen-Morse II polynomial ``y_nu``, ``nu = m + n - 1``."""

    params: RMParams
    n: int

    def __post_init__(self):
        if self.params.m < 1:
            raise ValueError("y_nu needs an extension order m >= 1")
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @property
    def nu(self) -> int:
        return self.params.m + self.n - 1


def x1_jacobi(n: int, alpha: complex, beta: complex, z, eliminate: bool = False):
    """X_1 exceptional Jacobi polynomial of degree ``n + 1``.

    ``[((b - z)(a+b+2n) + 2b) P_n - 2 P_{n-1}] / (2(a+b+2n))`` with
    ``b = (beta+alpha)/(beta-alpha)``.

    Parameters
    ----------
    n : int
        Index; the result has degree ``n + 1``.
    alpha, beta : complex
        Jacobi parameters, ``alpha != beta``.
    z : complex or array_like
    eliminate : bool, optional
        If True, ``P_{n-1}`` is replaced by its expression through
        ``P_n`` and ``P_n'``, giving a second construction path.

    Raises
    ------
    DegenerateParamError
        If ``alpha == beta``, ``alpha + beta + 2n == 0`` or, with
        ``eliminate``, ``(n+alpha)(n+beta) == 0``.
    """
    a = complex(alpha)
    c = complex(beta)
    b = (c + a) / _nonzero(c - a, "beta - alpha")
    s = _nonzero(a + c + 2 * n, "alpha + beta + 2n")
    pn = jacobi(n, a, c, z)
    if eliminate and n > 0:
        d = _nonzero((n + a) * (n + c), "(n+alpha)(n+beta)")
        dpn = jacobi_deriv(n, a, c, z)
        two_pm1 = (s * (1 - z * z) * dpn - n * ((a - c) - s * z) * pn) / d
    else:
        two_pm1 = 2.0 * jacobi(n - 1, a, c, z)
    return (((b - z) * s + 2.0 * b) * pn - two_pm1) / (2.0 * s)


def xm_jacobi(q: XmJacobi, z):
    """X_m exceptional Jacobi polynomial ``P^_{n+m}^{(alpha,beta)}(z)``.

    Built literally from five classical Jacobi polynomials::

        {P_m^{(-a-2,b)} + 2n(m-a+b-1) P_{m-1}^{(-a,b)} / ((2m-a+b-2)(2n+a+b))
         - n(b+m-1) P_{m-2}^{(-a,b)} / ((a+n-m+1)(2m-a+b-2))} P_n^{(a,b)}
        + (m-a+b-1)(a+n) / ((a+n-m+1)(2n+a+b)) P_{m-1}^{(-a,b)} P_{n-1}^{(a,b)}

    Terms whose Jacobi factor has negative degree are dropped before any
    denominator is inspected, so ``m = 0`` returns ``P_n`` and ``n = 0``
    returns ``P_m^{(-a-2,b)}``.

    Raises
    ------
    DegenerateParamError
        If a denominator of a surviving term vanishes.
    """
    m, n = q.m, q.n
    a = complex(q.alpha)
    b = complex(q.beta)
    head = jacobi(m, -a - 2, b, z)
    if n > 0 and m >= 1:
        head = head + 2 * n * (m - a + b - 1) * jacobi(m - 1, -a, b, z) / (
            _nonzero(2 * m - a + b - 2, "2m-alpha+beta-2") * _nonzero(2 * n + a + b, "2n+alpha+beta")
        )
    if n > 0 and m >= 2:
        head = head - n * (b + m - 1) * jacobi(m - 2, -a, b, z) / (
            _nonzero(a + n - m + 1, "alpha+n-m+1") * _nonzero(2 * m - a + b - 2, "2m-alpha+beta-2")
        )
    out = head * jacobi(n, a, b, z)
    if n > 0 and m >= 1:
        out = out + (m - a + b - 1) * (a + n) / (
            _nonzero(a + n - m + 1, "alpha+n-m+1") * _nonzero(2 * n + a + b, "2n+alpha+beta")
        ) * jacobi(m - 1, -a, b, z) * jacobi(n - 1, a, b, z)
    return out


def y_poly(y: YPoly, z):
    """Rosen-Morse II polynomial ``y_nu^{(A,iB)}(z)`` of degree ``m + n - 1``.

    ``2(n+a_n)(n+b_n)/(2n+a_n+b_n) g_m P_{n-1}^{(a_n,b_n)}
    - 2(m+a_m)(m+b_m)/(2m+a_m+b_m) g_{m-1}^{(A-1,iB)} P_n^{(a_n,b_n)}``.

    At ``n = m`` the two products cancel identically; that level is removed
    from the spectrum of the extended potential.

    Raises
    ------
    DegenerateParamError
        If ``2n + a_n + b_n`` or ``2m + a_m + b_m`` vanishes.
    """
    p, n, m = y.params, y.n, y.params.m
    an, bn = p.exponents(n)
    am, bm = p.exponents(m)
    cm = 2 * (m + am) * (m + bm) / _nonzero(2 * m + am + bm, "2m+alpha_m+beta_m")
    second = cm * p.g(z, shift=1) * jacobi(n, an, bn, z)
    if n == 0:
        return -second
    cn = 2 * (n + an) * (n + bn) / _nonzero(2 * n + an + bn, "2n+alpha_n+beta_n")
    return cn * p.g(z) * jacobi(n - 1, an, bn, z) - second
