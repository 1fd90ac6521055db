"""Closed-form bound states of the Scarf II and Rosen-Morse II families.

Eigenfunctions are returned unnormalized as :class:`BoundState` objects.
Powers such as ``(sech x)^A`` and ``(1 -/+ tanh x)^{a/2}`` are evaluated in
log form so that they stay accurate far in the tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .eop import XmJacobi, YPoly, xm_jacobi, y_poly
from .errors import DegenerateParamError, EmptySpectrum, NearNodeError
from .potentials import (
    NODE_EVAL_TOL,
    Model,
    PotentialSpec,
    RMParams,
    ScarfParams,
    rm_conventional,
    rm_extended,
)
from .specfun import jacobi, jacobi_deriv

NEAR_THRESHOLD = 0.3

SCARF_VARIANTS = ("conventional", "extended", "psym-conventional", "psym-extended")
RM_VARIANTS = ("conventional", "extended-closed-form", "extended-operator")


@dataclass(frozen=True)
class BoundState:
    """An unnormalized bound state.

    Attributes
    ----------
    n : int
        Level index in the closed-form family.
    energy : float
    model : PotentialSpec
        Potential the state belongs to.  ``conventional`` selects the
        conventional member of the family instead of the extended one.
    variant : str
        Construction used for the wavefunction.
    psi : callable
        Wavefunction of a real coordinate (scalar or array).
    decay : float
        Exponential decay rate at both infinities.
    conventional : bool
        Whether the state belongs to the conventional potential.
    scale : complex
        Constant factor applied on evaluation.
    """

    n: int
    energy: float
    model: PotentialSpec
    variant: str
    psi: Callable = field(repr=False, compare=False)
    decay: float
    conventional: bool = False
    scale: complex = 1.0

    def __call__(self, x):
        return self.scale * self.psi(np.asarray(x, dtype=float))

    @property
    def near_threshold(self) -> bool:
        return self.decay < NEAR_THRESHOLD

    def potential(self) -> Callable:
        return self.model.potential(conventional=self.conventional)

    def l2_norm(self, x_range=(-30.0, 30.0), samples: int = 60001) -> float:
        x = np.linspace(x_range[0], x_range[1], samples)
        return float(np.sqrt(trapezoid(np.abs(self(x)) ** 2, x)))

    def normalized(self, x_range=(-30.0, 30.0), samples: int = 60001) -> "BoundState":
        """Copy scaled to unit L2 modulus norm over `x_range`."""
        return replace(self, scale=self.scale / self.l2_norm(x_range, samples))


def _log_sech(x):
    ax = np.abs(x)
    return math.log(2.0) - ax - np.log1p(np.exp(-2.0 * ax))


def _gd(x):
    return np.arctan(np.sinh(x))


def _log_one_minus_tanh(x):
    return math.log(2.0) - np.logaddexp(0.0, 2.0 * x)


def _log_one_plus_tanh(x):
    return math.log(2.0) - np.logaddexp(0.0, -2.0 * x)


def scarf_energies(p: ScarfParams) -> List[float]:
    """Levels ``E_n = -(A-n)^2`` for ``0 <= n < A``.

    Shared by the conventional and extended potentials.
    """
    return [-(p.A - n) ** 2 for n in range(int(math.ceil(p.A)))]


def scarf_psym_energies(p: ScarfParams) -> List[float]:
    """Second family ``E_n = -(B-n-1/2)^2`` for ``0 <= n < B-1/2``.

    Returns an empty list when ``B <= 1/2``.
    """
    top = p.B - 0.5
    return [-(top - n) ** 2 for n in range(max(0, int(math.ceil(top))))]


def rm_energies(p: RMParams, extended: bool = False) -> List[float]:
    """Rosen-Morse II levels.

    Conventional: ``E_n = -(A-n)^2 + B^2/(A-n)^2`` for ``n < A``.
    Extended: the same with ``A -> A+1`` and ``n < A+1``; this is the
    spectrum of the partner ``V_{(A+1, iB)}``.
    """
    a = p.A + 1.0 if extended else p.A
    return [-(a - n) ** 2 + p.B ** 2 / (a - n) ** 2 for n in range(int(math.ceil(a)))]


def rm_deleted_level(p: RMParams) -> Optional[int]:
    """Index of the extended-spectrum level that has no eigenstate.

    The intertwining operator annihilates ``psi_m^(+)``, so the level
    ``n = m`` of the extended list is absent from the extended potential.
    Returns None when ``m`` is outside the list.
    """
    return p.m if p.m < p.A + 1 else None


def _require_level(n: int, count: int, what: str) -> None:
    if not 0 <= n < count:
        raise ValueError(f"level n={n} outside the {what} spectrum (0 <= n < {count})")


def scarf_wavefunction(p: ScarfParams, variant: str, n: int) -> BoundState:
    """Closed-form Scarf II eigenfunction.

    Parameters
    ----------
    p : ScarfParams
    variant : {"conventional", "extended", "psym-conventional", "psym-extended"}
        ``conventional``: ``sech^A e^{-iB gd x} P_n^{(alpha,beta)}(i sinh x)``.
        ``extended``: ``sech^A e^{-iB gd x} P^_{n+m}^{(alpha,beta)} / P_m^{(-alpha-1,beta-1)}``.
        ``psym-conventional``: ``sech^{B-1/2} e^{-i(A+1/2) gd x} P_n^{(gamma,delta)}``.
        ``psym-extended``: ``sech^{B-1/2} e^{-i(A+1/2) gd x} P^_{n+m}^{(gamma,delta)} / P_m^{(-gamma-1,delta-1)}``.
        Here ``gd x = arctan(sinh x)``.
    n : int

    Raises
    ------
    EmptySpectrum
        For a partner variant when ``B <= 1/2``.
    NearNodeError
        If the extension denominator nearly vanishes on the real line.
    """
    if variant not in SCARF_VARIANTS:
        raise ValueError(f"unknown Scarf II variant {variant!r}")
    psym = variant.startswith("psym")
    extended = variant.endswith("extended")
    if psym:
        levels = scarf_psym_energies(p)
        if not levels:
            raise EmptySpectrum(f"no partner-family bound states for B={p.B} <= 1/2")
        power, phase = p.B - 0.5, p.A + 0.5
        a, b = p.gamma, p.delta
        model = Model.SCARF_PSYM
    else:
        levels = scarf_energies(p)
        power, phase = p.A, p.B
        a, b = p.alpha, p.beta
        model = Model.SCARF
    _require_level(n, len(levels), variant)
    m = p.m if extended else 0
    spec = PotentialSpec(model, p.A, p.B, p.m)

    def psi(x):
        z = 1j * np.sinh(x)
        env = np.exp(power * _log_sech(x) - 1j * phase * _gd(x))
        if m == 0:
            return env * jacobi(n, a, b, z)
        den = jacobi(m, -a - 1, b - 1, z)
        if np.any(np.abs(den) < NODE_EVAL_TOL * (1.0 + np.abs(z)) ** m):
            raise NearNodeError("extension denominator nearly vanishes")
        return env * xm_jacobi(XmJacobi(m, n, a, b), z) / den

    return BoundState(n, levels[n], spec, variant, psi, decay=power - n, conventional=not extended)


def rm_wavefunction(p: RMParams, variant: str, n: int) -> BoundState:
    """Closed-form Rosen-Morse II eigenfunction, ``z = tanh x``.

    Parameters
    ----------
    p : RMParams
    variant : {"conventional", "extended-closed-form", "extended-operator"}
        ``conventional``: ``(1-z)^{a/2} (1+z)^{b/2} P_n^{(a,b)}(z)`` with
        ``a, b = c +/- iB/c``, ``c = A-n``, on ``V_{(A,iB)}``.
        ``extended-closed-form``: ``(1-z)^{a_n/2} (1+z)^{b_n/2} y_nu(z) / g_m(z)``.
        ``extended-operator``: the intertwining operator
        ``(1-z^2) d/dz + iB/(A+1) + (A+1) z - c_m g_{m-1}/g_m`` applied
        analytically to the partner state ``psi_n^(+)``.
        Both extended variants live on the extended potential with the
        shifted levels ``-(A+1-n)^2 + B^2/(A+1-n)^2``.
    n : int

    Raises
    ------
    DegenerateParamError
        For an extended variant at ``n = m``, where both constructions
        vanish identically.
    NearNodeError
        If ``g_m`` nearly vanishes.
    """
    if variant not in RM_VARIANTS:
        raise ValueError(f"unknown Rosen-Morse II variant {variant!r}")
    spec = PotentialSpec(Model.RM, p.A, p.B, p.m)
    if variant == "conventional":
        levels = rm_energies(p, extended=False)
        _require_level(n, len(levels), variant)
        c = p.A - n
        a, b = c + 1j * p.B / c, c - 1j * p.B / c

        def psi(x):
            z = np.tanh(x)
            env = np.exp(0.5 * a * _log_one_minus_tanh(x) + 0.5 * b * _log_one_plus_tanh(x))
            return env * jacobi(n, a, b, z)

        return BoundState(n, levels[n], spec, variant, psi, decay=c, conventional=True)

    levels = rm_energies(p, extended=True)
    _require_level(n, len(levels), variant)
    if n == p.m:
        raise DegenerateParamError(
            f"level n=m={n} is annihilated by the intertwining operator; it is not an eigenstate of the extended potential"
        )
    an, bn = p.exponents(n)
    am, bm = p.exponents(p.m)
    cm = 2 * (p.m + am) * (p.m + bm) / (2 * p.m + am + bm)

    def _g(z):
        g = p.g(z)
        if np.any(np.abs(g) < NODE_EVAL_TOL):
            raise NearNodeError("g_m nearly vanishes")
        return g

    if variant == "extended-closed-form":
        yp = YPoly(p, n) if p.m >= 1 else None

        def psi(x):
            z = np.tanh(x)
            env = np.exp(0.5 * an * _log_one_minus_tanh(x) + 0.5 * bn * _log_one_plus_tanh(x))
            y = y_poly(yp, z) if yp is not None else (
                2 * (n + an) * (n + bn) / (2 * n + an + bn) * jacobi(n - 1, an, bn, z)
            )
            return env * y / _g(z)

    else:

        def psi(x):
            z = np.tanh(x)
            env = np.exp(0.5 * an * _log_one_minus_tanh(x) + 0.5 * bn * _log_one_plus_tanh(x))
            P = jacobi(n, an, bn, z)
            dP = jacobi_deriv(n, an, bn, z)
            # (1-z^2) d/dz of env*P, with the (1 -/+ z) poles cancelled.
            dpsi = (1 - z * z) * dP + P * (-0.5 * an * (1 + z) + 0.5 * bn * (1 - z))
            shift = 1j * p.B / (p.A + 1) + (p.A + 1) * z - cm * p.g(z, shift=1) / _g(z)
            return env * (dpsi + shift * P)

    return BoundState(n, levels[n], spec, variant, psi, decay=p.A + 1.0 - n)


def residual(V: Callable, psi: Callable, E: float, grid: Tuple[float, float, float] = (-15.0, 15.0, 1e-3)) -> float:
    """Relative Schrodinger residual of a trial eigenfunction.

    ``max |-psi'' + V psi - E psi| / max |psi|`` over the interior of a
    uniform grid, with ``psi''`` from the five-point central difference.

    Parameters
    ----------
    V : callable
        Potential, vectorized over x.
    psi : callable
        Wavefunction, vectorized over x (a :class:`BoundState` works).
    E : float
    grid : (x_min, x_max, step)
    """
    x_min, x_max, h = grid
    x = np.arange(x_min, x_max + 0.5 * h, h)
    p = np.asarray(psi(x), dtype=complex)
    d2 = (-p[4:] + 16 * p[3:-1] - 30 * p[2:-2] + 16 * p[1:-3] - p[:-4]) / (12 * h * h)
    r = -d2 + (V(x[2:-2]) - E) * p[2:-2]
    return float(np.max(np.abs(r)) / np.max(np.abs(p)))


def _rm_log_derivs(p: RMParams, z):
    # Log-derivatives (and their z-derivatives) of g_m and g_{m-1}^{(A-1)}.
    gm = p.g(z)
    gs = p.g(z, shift=1)
    if np.any(np.abs(gm) < NODE_EVAL_TOL) or np.any(np.abs(gs) < NODE_EVAL_TOL):
        raise NearNodeError("superpotential denominator nearly vanishes")
    lm = p.g(z, 1) / gm
    ls = p.g(z, 1, shift=1) / gs
    dlm = p.g(z, 2) / gm - lm * lm
    dls = p.g(z, 2, shift=1) / gs - ls * ls
    return lm, ls, dlm, dls


def rm_superpotential(p: RMParams, x):
    """Superpotential ``W = -(log psi_0^(-))'`` of the extended Rosen-Morse II potential.

    ``W = iB/(A+1) + (A+1) z - (1-z^2) (g'_{m-1}/g_{m-1} - g'_m/g_m)`` with
    ``z = tanh x`` and ``g_{m-1} = g_{m-1}^{(A-1,iB)}``.
    """
    if p.m < 1:
        raise ValueError("superpotential needs m >= 1")
    z = np.tanh(x)
    lm, ls, _, _ = _rm_log_derivs(p, z)
    return 1j * p.B / (p.A + 1) + (p.A + 1) * z - (1 - z * z) * (ls - lm)


def rm_superpotential_deriv(p: RMParams, x):
    """``dW/dx`` by the chain rule ``d/dx = (1-z^2) d/dz``."""
    if p.m < 1:
        raise ValueError("superpotential needs m >= 1")
    z = np.tanh(x)
    lm, ls, dlm, dls = _rm_log_derivs(p, z)
    dw_dz = (p.A + 1) + 2 * z * (ls - lm) - (1 - z * z) * (dls - dlm)
    return (1 - z * z) * dw_dz


@dataclass(frozen=True)
class SICheck:
    """Result of the extended shape-invariance check.

    ``const_plus`` and ``const_minus`` are the fitted constants ``c`` in
    ``W^2 + W' + c`` and ``W^2 - W' + c``; ``max_dev`` is the largest
    deviation after the fit for the pairing that holds.  The two
    ``pairings`` entries name the potential each combination is matched to.
    """

    const_plus: complex
    const_minus: complex
    max_dev: float
    dev_plus: float
    dev_minus: float
    pairings: Dict[str, str]
    ground_energy: float
    alternative_max_dev: float


def _fit_constant(target, trial):
    c = np.mean(target - trial)
    return complex(c), float(np.max(np.abs(target - trial - c)))


def rm_si_check(p: RMParams, grid: Sequence[float] = (-10.0, 10.0, 2001)) -> SICheck:
    """Check the extended shape invariance of the Rosen-Morse II extension.

    With the superpotential of the extended potential ``V^{(m)}_{A}``,
    ``W^2 - W'`` reproduces ``V^{(m)}_{A}`` and ``W^2 + W'`` reproduces
    ``V^{(m-1)}_{A-1}``, each up to an additive constant equal to the
    ground-state energy ``-(A+1)^2 + B^2/(A+1)^2``.  The deviation of the
    opposite assignment is returned as ``alternative_max_dev``.

    Parameters
    ----------
    p : RMParams
        Requires ``m >= 1`` and ``A > 1``.
    grid : (x_min, x_max, samples)
    """
    if p.m < 1:
        raise ValueError("shape-invariance check needs m >= 1")
    if p.A <= 1:
        raise ValueError("shape-invariance check needs A > 1 so that A-1 is admissible")
    x = np.linspace(grid[0], grid[1], int(grid[2]))
    W = rm_superpotential(p, x)
    dW = rm_superpotential_deriv(p, x)
    lower = RMParams(p.A - 1.0, p.B, p.m - 1)
    v_same = rm_extended(x, p)
    v_lower = rm_extended(x, lower)
    c_minus, dev_minus = _fit_constant(v_same, W * W - dW)
    c_plus, dev_plus = _fit_constant(v_lower, W * W + dW)
    _, alt1 = _fit_constant(v_same, W * W + dW)
    _, alt2 = _fit_constant(v_lower, W * W - dW)
    e0 = rm_energies(p, extended=True)[0]
    return SICheck(
        const_plus=c_plus,
        const_minus=c_minus,
        max_dev=max(dev_plus, dev_minus),
        dev_plus=dev_plus,
        dev_minus=dev_minus,
        pairings={
            "W^2+W'": f"rm_extended(A={lower.A:g}, m={lower.m})",
            "W^2-W'": f"rm_extended(A={p.A:g}, m={p.m})",
        },
        ground_energy=e0,
        alternative_max_dev=max(alt1, alt2),
    )


def closed_form_states(spec: PotentialSpec) -> List[Tuple[int, float, Optional[BoundState], Optional[str]]]:
    """All closed-form levels of a model with their eigenfunctions.

    Returns ``(n, E_n, state, problem)`` tuples; ``state`` is None and
    ``problem`` describes why when the closed form yields no eigenfunction.
    """
    p = spec.params
    out = []
    if spec.model is Model.RM:
        if p.m == 0:
            for n, E in enumerate(rm_energies(p)):
                out.append((n, E, rm_wavefunction(p, "conventional", n), None))
        else:
            for n, E in enumerate(rm_energies(p, extended=True)):
                try:
                    out.append((n, E, rm_wavefunction(p, "extended-closed-form", n), None))
                except DegenerateParamError as exc:
                    out.append((n, E, None, str(exc)))
        return out
    variant = "psym-extended" if spec.model is Model.SCARF_PSYM else "extended"
    levels = scarf_psym_energies(p) if spec.model is Model.SCARF_PSYM else scarf_energies(p)
    for n, E in enumerate(levels):
        out.append((n, E, scarf_wavefunction(p, variant, n), None))
    return out
