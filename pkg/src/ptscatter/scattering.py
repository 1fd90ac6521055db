"""Closed-form reflection and transmission amplitudes.

Conventions
-----------
Scarf II (vanishing asymptotics): left incidence ``e^{ikx} + r_l e^{-ikx}``
for ``x -> -inf`` and ``t_l e^{ikx}`` for ``x -> +inf``; right incidence
``e^{-ikx} + r_r e^{ikx}`` for ``x -> +inf`` and ``t_r e^{-ikx}`` for
``x -> -inf``.

Rosen-Morse II (``V(-/+inf) = -/+ 2iB``): ``k`` is the wavenumber for
``x -> -inf`` with ``k^2 = E + 2iB`` and ``k'`` the one for ``x -> +inf``
with ``k'^2 = E - 2iB``, both principal square roots.  Left incidence is
``e^{ikx} + r_l e^{-ikx}`` / ``t_l e^{ik'x}``; right incidence is
``e^{-ik'x} + r_r e^{ik'x}`` / ``t_r e^{-ikx}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateParamError, PoleError
from .potentials import Model, PotentialSpec, RMParams, ScarfParams
from .specfun import clgamma

POLE_REFINE_TOL = 1e-10


@dataclass(frozen=True)
class Amplitudes:
    """Reflection and transmission amplitudes for both incidence sides."""

    r_left: complex
    t_left: complex
    r_right: complex
    t_right: complex
    k: complex
    k_prime: complex

    @property
    def R_left(self) -> float:
        return abs(self.r_left) ** 2

    @property
    def R_right(self) -> float:
        return abs(self.r_right) ** 2

    @property
    def T_left(self) -> float:
        return abs(self.t_left) ** 2

    @property
    def T_right(self) -> float:
        return abs(self.t_right) ** 2

    def scaled(self, factor: complex) -> "Amplitudes":
        return Amplitudes(
            self.r_left * factor, self.t_left * factor, self.r_right * factor, self.t_right * factor,
            self.k, self.k_prime,
        )


@dataclass(frozen=True)
class WaveNumbers:
    """Asymptotic wavenumbers at energy ``E``: ``k`` for ``x -> -inf``, ``k_prime`` for ``x -> +inf``."""

    energy: float
    k: complex
    k_prime: complex


def reflectivity_transmitivity(a: Amplitudes) -> dict:
    """``R = |r|^2`` and ``T = |t|^2``.

    Returns a dict with ``R_left``, ``R_right``, ``T`` (left incidence) and
    ``T_right``.
    """
    return {"R_left": a.R_left, "R_right": a.R_right, "T": a.T_left, "T_right": a.T_right}


def _sech(y: complex) -> complex:
    if y.real < 0:
        y = -y
    e = cmath.exp(-y)
    return 2.0 * e / (1.0 + e * e)


def _csch(y: complex) -> complex:
    sign = 1.0
    if y.real < 0:
        y, sign = -y, -1.0
    e = cmath.exp(-y)
    den = 1.0 - e * e
    if den == 0:
        raise PoleError("csch pole at k = 0")
    return sign * 2.0 * e / den


def _scarf_log_t(k: complex, A: float, B: float) -> complex:
    ik = 1j * k
    return (
        clgamma(-A - ik) + clgamma(1 + A - ik) + clgamma(0.5 - B - ik) + clgamma(0.5 + B - ik)
        - clgamma(-ik) - clgamma(1 - ik) - 2 * clgamma(0.5 - ik)
    )


def scarf_usual_amplitudes(k: complex, A: float, B: float) -> Amplitudes:
    """Amplitudes of the conventional PT-symmetric Scarf II potential.

    ``t = G(-A-ik) G(1+A-ik) G(1/2-B-ik) G(1/2+B-ik) / [G(-ik) G(1-ik) G(1/2-ik)^2]``,
    ``r_l = t i [cos(pi A) sin(pi B) sech(pi k) + sin(pi A) cos(pi B) csch(pi k)]``,
    ``r_r = t i [-cos(pi A) sin(pi B) sech(pi k) + sin(pi A) cos(pi B) csch(pi k)]``,
    ``t_r = t_l``.  Complex `k` is accepted for pole scans.

    Raises
    ------
    PoleError
        At a Gamma pole of the formula.
    """
    k = complex(k)
    t = cmath.exp(_scarf_log_t(k, A, B))
    c1 = math.cos(math.pi * A) * math.sin(math.pi * B)
    c2 = math.sin(math.pi * A) * math.cos(math.pi * B)
    y = math.pi * k
    even = c1 * _sech(y)
    odd = c2 * _csch(y) if c2 != 0.0 else 0.0
    return Amplitudes(t * 1j * (even + odd), t, t * 1j * (odd - even), t, k, k)


def scarf_fm_factor(k: complex, B: float, m: int) -> complex:
    """Extension multiplier ``F_m(k)``.

    ``([B^2 - (ik-1/2)^2] + (B-ik+1/2)(1-m)) / ([B^2 - (ik+1/2)^2] + (B+ik+1/2)(1-m))``,
    which factors as ``(B+1/2-ik)(B+1/2-m+ik) / [(B+1/2+ik)(B+1/2-m-ik)]`` and
    so has unit modulus for real ``k`` and ``B``.
    """
    ik = 1j * complex(k)
    num = (B * B - (ik - 0.5) ** 2) + (B - ik + 0.5) * (1 - m)
    den = (B * B - (ik + 0.5) ** 2) + (B + ik + 0.5) * (1 - m)
    if abs(den) < 1e-300 or abs(den) < 1e-14 * max(1.0, abs(num)):
        raise PoleError(f"F_m denominator vanishes at k={k!r}")
    return num / den


def scarf_extended_amplitudes(k: complex, p: ScarfParams) -> Amplitudes:
    """Amplitudes of the rationally extended Scarf II potential: usual times ``F_m``."""
    usual = scarf_usual_amplitudes(k, p.A, p.B)
    if p.m == 0:
        return usual
    return usual.scaled(scarf_fm_factor(k, p.B, p.m))


def scarf_psym_amplitudes(k: complex, p: ScarfParams) -> Amplitudes:
    """Amplitudes of the parametric partner, from ``B <-> A+1/2``.

    Equal to :func:`scarf_extended_amplitudes` at ``A' = B-1/2``,
    ``B' = A+1/2``.
    """
    return scarf_extended_amplitudes(k, p.swapped())


def _principal_sqrt(w: complex) -> complex:
    s = cmath.sqrt(complex(w.real, w.imag + 0.0))
    if s.real == 0.0 and s.imag < 0:
        s = -s
    return s


def rm_wavenumbers(E: float, B: float) -> WaveNumbers:
    """``k = sqrt(E + 2iB)`` and ``k' = sqrt(E - 2iB)`` on the principal branch."""
    if E == 0 and B == 0:
        raise ValueError("zero energy with B=0 has vanishing wavenumbers")
    return WaveNumbers(float(E), _principal_sqrt(complex(E, 2.0 * B)), _principal_sqrt(complex(E, -2.0 * B)))


def _rm_log_n(w: WaveNumbers, A: float) -> complex:
    s = 0.5j * (w.k + w.k_prime)
    return clgamma(-A - 1 - s) + clgamma(A + 2 - s)


def _reflection(log_num: complex, z1: complex, z2: complex) -> complex:
    # A Gamma pole in the denominator makes the amplitude vanish (reflectionless case).
    try:
        return cmath.exp(log_num - clgamma(z1) - clgamma(z2))
    except PoleError:
        return 0j


def rm_usual_amplitudes(w: WaveNumbers, A: float) -> Amplitudes:
    """Closed-form amplitudes of the conventional partner ``V_{(A+1, iB)}``.

    With ``N = G(-A-1-i(k+k')/2) G(A+2-i(k+k')/2)`` and ``d = (k-k')/2``:
    ``t_l = N / [G(1-ik') G(-ik)]``,
    ``r_l = G(ik)/G(-ik) N / [G(-A-1+id) G(A+2+id)]``,
    ``r_r = G(ik')/G(-ik') N / [G(-A-1-id) G(A+2-id)]``,
    ``t_r = (k'/k) t_l``.

    Use :func:`rm_conventional_amplitudes` for ``V_{(A, iB)}`` itself.
    """
    k, kp = w.k, w.k_prime
    ik, ikp = 1j * k, 1j * kp
    d = 0.5 * (k - kp)
    ln = _rm_log_n(w, A)
    t_l = cmath.exp(ln - clgamma(1 - ikp) - clgamma(-ik))
    r_l = _reflection(clgamma(ik) - clgamma(-ik) + ln, -A - 1 + 1j * d, A + 2 + 1j * d)
    r_r = _reflection(clgamma(ikp) - clgamma(-ikp) + ln, -A - 1 - 1j * d, A + 2 - 1j * d)
    return Amplitudes(r_l, t_l, r_r, (kp / k) * t_l, k, kp)


def rm_conventional_amplitudes(w: WaveNumbers, A: float) -> Amplitudes:
    """Closed-form amplitudes of the conventional ``V_{(A, iB)}``."""
    return rm_usual_amplitudes(w, A - 1.0)


def rm_extension_factors(w: WaveNumbers, p: RMParams) -> dict:
    """The four multipliers turning usual amplitudes into extended ones.

    Keys ``t_left``, ``r_left``, ``t_right``, ``r_right``::

        t_l: (a_m + ik') / (ik - b_m)       r_l: (-b_m - ik) / (-b_m + ik)
        t_r: (-b_m - ik) / (a_m - ik')      r_r: (a_m + ik') / (a_m - ik')

    The ``t_right`` entry multiplies ``(k'/k) t_l^usual``.
    """
    am, bm = p.exponents(p.m)
    ik, ikp = 1j * w.k, 1j * w.k_prime
    dens = {"t_left": ik - bm, "r_left": -bm + ik, "t_right": am - ikp, "r_right": am - ikp}
    for key, den in dens.items():
        if abs(den) < 1e-14:
            raise DegenerateParamError(f"{key} extension factor has a vanishing denominator at k={w.k!r}")
    return {
        "t_left": (am + ikp) / (ik - bm),
        "r_left": (-bm - ik) / (-bm + ik),
        "t_right": (-bm - ik) / (am - ikp),
        "r_right": (am + ikp) / (am - ikp),
    }


def rm_extended_amplitudes(w: WaveNumbers, p: RMParams) -> Amplitudes:
    """Closed-form amplitudes of the rationally extended Rosen-Morse II potential.

    Each usual amplitude of :func:`rm_usual_amplitudes` at the same ``A`` is
    multiplied by its factor from :func:`rm_extension_factors`, with
    ``a_m, b_m = A+1-m +/- iB/(A+1-m)``.  At ``m = 0`` the result equals
    the amplitudes of the conventional ``V_{(A, iB)}``.
    """
    usual = rm_usual_amplitudes(w, p.A)
    f = rm_extension_factors(w, p)
    return Amplitudes(
        usual.r_left * f["r_left"],
        usual.t_left * f["t_left"],
        usual.r_right * f["r_right"],
        usual.t_right * f["t_right"],
        w.k,
        w.k_prime,
    )


LABELINGS = ("artifact", "swapped")


def model_amplitudes(
    spec: PotentialSpec, value: float, conventional: bool = False, labeling: str = "artifact"
) -> Amplitudes:
    """Closed-form amplitudes of a model at wavenumber (Scarf II) or energy (Rosen-Morse II).

    For Rosen-Morse II, ``labeling="swapped"`` evaluates the same formulas
    with the roles of ``k`` and ``k'`` exchanged, i.e. with ``k^2 = E - 2iB``
    attached to ``x -> -inf``.  It has no effect on Scarf II.
    """
    if labeling not in LABELINGS:
        raise ValueError(f"labeling must be one of {LABELINGS}")
    p = spec.params
    if spec.model is Model.RM:
        w = rm_wavenumbers(value, p.B)
        if labeling == "swapped":
            w = WaveNumbers(w.energy, w.k_prime, w.k)
        return rm_conventional_amplitudes(w, p.A) if conventional else rm_extended_amplitudes(w, p)
    if conventional:
        return scarf_usual_amplitudes(value, p.A, p.B)
    if spec.model is Model.SCARF_PSYM:
        return scarf_psym_amplitudes(value, p)
    return scarf_extended_amplitudes(value, p)


def _transmission(model) -> Callable[[complex], complex]:
    if callable(model) and not isinstance(model, PotentialSpec):
        return model
    if model.model is Model.RM:
        raise ValueError("pole scans on the imaginary k axis are defined for Scarf II models only")
    return lambda k: model_amplitudes(model, k).t_left


def pole_scan(model: Union[PotentialSpec, Callable[[complex], complex]], segment: Tuple[float, float] = (0.0, 3.0),
              samples: int = 3000) -> List[complex]:
    """Poles of ``t_left`` on a segment ``(i lo, i hi]`` of the positive imaginary axis.

    ``1/t`` is real on the imaginary axis.  Sign changes of ``1/t`` between
    samples are refined by bracketing root search; a bracket is kept only
    if ``|1/t|`` at the refined point is smaller than at both bracket ends,
    which rejects sign changes caused by poles of ``1/t``.

    Parameters
    ----------
    model : PotentialSpec or callable
        A Scarf II model, or any function ``t(k)`` of complex ``k``.
    segment : (lo, hi)
        Imaginary parts bounding the scan, ``0 <= lo < hi``.
    samples : int
        Number of uniformly spaced sample points in ``(lo, hi]``.

    Returns
    -------
    list of complex
        Pole locations ``i kappa`` in increasing ``kappa``.
    """
    lo, hi = segment
    if not 0 <= lo < hi:
        raise ValueError("segment must satisfy 0 <= lo < hi")
    t_of = _transmission(model)

    def u(kappa: float) -> float:
        try:
            t = complex(t_of(1j * kappa))
        except PoleError:
            return 0.0
        return (1.0 / t).real if t != 0 else math.inf

    kap = lo + (hi - lo) * np.arange(1, samples + 1) / samples
    vals = np.array([u(x) for x in kap])
    found: List[float] = []
    for i, v in enumerate(vals):
        if v == 0.0:
            found.append(float(kap[i]))
    for i in range(len(kap) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0 or b == 0.0 or not (np.isfinite(a) and np.isfinite(b)) or a * b > 0:
            continue
        root = brentq(u, kap[i], kap[i + 1], xtol=POLE_REFINE_TOL, rtol=4 * np.finfo(float).eps)
        if abs(u(root)) <= min(abs(a), abs(b)):
            found.append(float(root))
    return [1j * x for x in sorted(found)]
