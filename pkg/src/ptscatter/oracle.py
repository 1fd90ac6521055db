"""Direct numerical solution of the one-dimensional Schrodinger equation.

Scattering amplitudes are obtained by integrating ``-psi'' + V psi = E psi``
with an adaptive eighth-order Runge-Kutta pair (DOP853) between two matching
points ``x_minus < 0 < x_plus``.  Outside the matching points the solution is
represented by the exact Jost solutions of the tail, computed from their
Volterra integral equations by Picard iteration on composite Gauss-Legendre
panels.  This keeps the matching well conditioned when the asymptotic
wavenumbers are complex and one exponential grows, because the Volterra form
never integrates the parasitic solution.

Bound-state energies are found by shooting decaying solutions inward from
``+-L`` and locating zeros of their Wronskian at ``x = 0``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import AsymptoteError, MultipleRootWarning, NonConvergence, NoRootError
from .potentials import PotentialSpec

Potential = Callable[[np.ndarray], np.ndarray]

ACCEPT_RESIDUAL = 1e-6
FLAT_TOL = 1e-6
MIN_TOL = 1e-14
DEFAULT_L = {"scarf": 20.0, "rm": 25.0}
# Largest growth factor of the parasitic exponential tolerated between a
# matching point and the origin.
_AMP_TARGET = 30.0
_PANEL_WIDTH = 0.25
_PANEL_NODES = 16
_PICARD_MAX_ITER = 400
_SCAN_POINTS = 50
_TAIL_STEP = 5.0
_TAIL_MAX = 200.0


@dataclass(frozen=True)
class ScatterSolution:
    """Numerical scattering amplitudes for one incidence side.

    Attributes
    ----------
    r, t : complex
        Reflection and transmission amplitudes for unit incident coefficient
        of ``exp(+ikx)`` (left incidence) or ``exp(-ik'x)`` (right incidence).
    side : {"left", "right"}
    energy : float
    k, k_prime : complex
        Asymptotic wavenumbers at ``-inf`` and ``+inf``.
    match_residual : float
        Estimated contamination of ``r, t`` from the truncated tail, the Jost
        iteration and error growth along the integration.
    domain_half_width : float
        Truncation point ``L``.
    step_control : float
        Relative tolerance given to the integrator.
    x_minus, x_plus : float
        Matching points.
    """

    r: complex
    t: complex
    side: str
    energy: float
    k: complex
    k_prime: complex
    match_residual: float
    domain_half_width: float
    step_control: float
    x_minus: float = 0.0
    x_plus: float = 0.0

    @property
    def accepted(self) -> bool:
        return self.match_residual < ACCEPT_RESIDUAL

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def T(self) -> float:
        return abs(self.t) ** 2


@lru_cache(maxsize=None)
def _panel_rule(p: int):
    # Gauss-Legendre nodes on [-1, 1] with matrices that integrate the
    # interpolating polynomial from -1 to each node and from each node to 1.
    tau, w = npleg.leggauss(p)
    vinv = np.linalg.inv(npleg.legvander(tau, p - 1))
    from_left = np.empty((p, p))
    at_one = np.empty(p)
    for k in range(p):
        c = np.zeros(p)
        c[k] = 1.0
        ci = npleg.legint(c, lbnd=-1.0)
        from_left[:, k] = npleg.legval(tau, ci)
        at_one[k] = npleg.legval(1.0, ci)
    to_right = at_one[None, :] - from_left
    return tau, w, from_left @ vinv, to_right @ vinv


def _evaluate(V: Potential, x: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(V(x), dtype=complex)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(V(float(xi))) for xi in x.ravel()]).reshape(x.shape)


@dataclass
class _Jost:
    value: complex
    deriv: complex
    error: float
    iterations: int = field(default=0)


def _jost(dev: Potential, q: complex, sign: int, side: str, x0: float, X: float) -> _Jost:
    """Jost solution ``~ exp(sign*i*q*x)`` of the tail beyond ``x0``, at ``x0``.

    ``dev`` is the deviation of the potential from its asymptotic constant.
    ``side="right"`` uses the tail ``[x0, X]``; ``side="left"`` uses
    ``[X, x0]`` with ``X < x0``.  The potential beyond ``X`` is taken equal to
    its asymptotic constant; ``X`` is pushed outward first if the weighted
    tail at ``X`` is not negligible.
    """
    s = sign * 1j * q
    X = _tail_extent(dev, s, x0, X, side)
    width = abs(X - x0)
    if width == 0.0:
        return _Jost(cmath.exp(s * x0), s * cmath.exp(s * x0), 0.0)
    npan = max(1, math.ceil(width / _PANEL_WIDTH))
    tau, w, from_left, to_right = _panel_rule(_PANEL_NODES)
    lo, hi = (x0, X) if side == "right" else (X, x0)
    edges = np.linspace(lo, hi, npan + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = mid[:, None] + half[:, None] * tau[None, :]
    dv = _evaluate(dev, t)
    grow = np.exp(2 * s * (t - x0))
    shrink = np.exp(-2 * s * (t - x0))
    scale = float(np.max(np.abs(grow * dv)))

    def integrals(g):
        panel_tot = (g @ w) * half
        if side == "right":
            inner = (g @ to_right.T) * half[:, None]
            outer = np.concatenate([np.cumsum(panel_tot[::-1])[::-1][1:], [0.0]])
        else:
            inner = (g @ from_left.T) * half[:, None]
            outer = np.concatenate([[0.0], np.cumsum(panel_tot)[:-1]])
        return inner + outer[:, None], panel_tot.sum()

    sgn = -1.0 if side == "right" else 1.0
    m = np.ones_like(t)
    change = np.inf
    it = 0
    for it in range(1, _PICARD_MAX_ITER + 1):
        g = dv * m
        i1, _ = integrals(g)
        i2, _ = integrals(grow * g)
        m_new = 1.0 + sgn * (i1 - shrink * i2) / (2 * s)
        change = float(np.max(np.abs(m_new - m)))
        m = m_new
        if change <= 1e-15 * max(1.0, float(np.max(np.abs(m)))):
            break
    else:
        raise NonConvergence(f"Jost iteration stalled at x0={x0} (last change {change:.3g})")
    g = dv * m
    _, tot1 = integrals(g)
    _, tot2 = integrals(grow * g)
    m0 = 1.0 + sgn * (tot1 - tot2) / (2 * s)
    dm0 = sgn * tot2
    # Neglected tail beyond X: the integrand decays like exp(-lam |x|) there.
    tail_val = float(np.max(np.abs(grow * dv)[-1 if side == "right" else 0]))
    tail = _tail_estimate(dev, X, side, s, x0, scale, tail_val)
    e0 = cmath.exp(s * x0)
    return _Jost(e0 * m0, e0 * (s * m0 + dm0), tail + change, it)


def _tail_extent(dev: Potential, s: complex, x0: float, X: float, side: str) -> float:
    # The dominant Jost solution weights the tail by exp(2|Re s| |t - x0|), so
    # the quadrature runs past X until that weighted deviation is negligible.
    direction = 1.0 if side == "right" else -1.0
    growth = 2.0 * abs(s.real)

    def weight(x):
        return abs(complex(dev(x))) * math.exp(growth * abs(x - x0))

    ref = max(weight(x0 + direction * d) for d in np.linspace(0.0, abs(X - x0), 16))
    if ref == 0.0:
        return X
    while weight(X) > 1e-17 * ref and abs(X - x0) < _TAIL_MAX:
        X += direction * _TAIL_STEP
    return X


def _tail_estimate(dev, X, side, s, x0, scale, tail_val) -> float:
    direction = 1.0 if side == "right" else -1.0
    a = abs(complex(dev(X)))
    if a == 0.0:
        return 0.0
    b = abs(complex(dev(X - direction)))
    lam = math.log(b / a) if b > a else 0.0
    growth = 2 * abs(s.real)
    if lam <= growth:
        if scale > 0 and tail_val > 1e-3 * scale:
            raise AsymptoteError(
                f"potential tail at |x|={abs(X)} decays too slowly for wavenumber growth rate {growth:.3g}"
            )
        lam = growth + 1.0
    g_tail = a * math.exp(growth * abs(X - x0))
    return g_tail / (abs(2 * s) * (lam - growth)) + a / (abs(2 * s) * lam)


def _wavenumbers(E: float, B_asym: float):
    k = cmath.sqrt(E + 2j * B_asym)
    kp = cmath.sqrt(E - 2j * B_asym)
    return k, kp


def _matching_point(q: complex, L: float) -> float:
    rate = 2.0 * abs(q.imag)
    if rate == 0.0:
        return L
    return min(L, math.log(_AMP_TARGET) / rate)


def _rhs(V: Potential, E: float):
    def fun(x, y):
        return np.array([y[1], (complex(V(x)) - E) * y[0]])

    return fun


def _integrate(V: Potential, E: float, y0, start: float, stop: float, tol: float, breakpoints: Sequence[float]):
    fun = _rhs(V, E)
    lo, hi = sorted((start, stop))
    cuts = sorted(b for b in breakpoints if lo < b < hi)
    if start > stop:
        cuts = cuts[::-1]
    nodes = [start, *cuts, stop]
    y = np.asarray(y0, dtype=complex)
    for a, b in zip(nodes[:-1], nodes[1:]):
        atol = tol * 1e-6 * max(1e-300, float(np.max(np.abs(y))))
        sol = solve_ivp(fun, (a, b), y, method="DOP853", rtol=tol, atol=atol)
        if sol.status != 0:
            raise NonConvergence(f"integrator failed on [{a}, {b}]: {sol.message}")
        y = sol.y[:, -1]
    return y


def _wronskian(f, g) -> complex:
    return f[0] * g[1] - f[1] * g[0]


def solve_scattering(
    V: Potential,
    E: float,
    B_asym: float = 0.0,
    side: str = "left",
    L: float = 20.0,
    tol: float = 1e-10,
    breakpoints: Sequence[float] = (),
    deviation: Potential | None = None,
) -> ScatterSolution:
    """Reflection and transmission amplitudes by direct integration.

    The asymptotic potential is ``-2i B_asym`` at ``-inf`` and ``+2i B_asym``
    at ``+inf``; the wavenumbers are the principal roots
    ``k = sqrt(E + 2i B_asym)`` and ``k' = sqrt(E - 2i B_asym)``.  Left
    incidence is ``exp(ikx) + r exp(-ikx)`` on the left and
    ``t exp(ik'x)`` on the right; right incidence is ``exp(-ik'x) +
    r exp(ik'x)`` on the right and ``t exp(-ikx)`` on the left.

    The pure outgoing Jost solution is set up on the transmission side,
    integrated to the incident side and decomposed there into the two Jost
    solutions by a 2x2 Wronskian solve.

    Parameters
    ----------
    V : callable
        Potential; vectorized callables are evaluated faster.
    E : float
        Energy.
    B_asym : float, optional
        Asymptotic imaginary offset parameter.
    side : {"left", "right"}
    L : float, optional
        Truncation point; ``V`` is treated as constant beyond ``+-L``.
    tol : float, optional
        Relative tolerance of the integrator.
    breakpoints : sequence of float, optional
        Points where ``V`` is discontinuous; integration restarts there.
    deviation : callable, optional
        ``V(x) - V(sign(x) inf)`` evaluated without cancellation.  The Jost
        tails need it when ``|V_inf|`` is large enough that ``V(x) - V_inf``
        rounds to zero while ``exp(2|Im k| |x|)`` still amplifies it.

    Returns
    -------
    ScatterSolution

    Raises
    ------
    AsymptoteError
        If ``V(+-L)`` is not within ``FLAT_TOL`` of its asymptotic value.
    NonConvergence
        If ``tol`` is below ``MIN_TOL`` or the integrator fails.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if not (tol >= MIN_TOL):
        raise NonConvergence(f"step control {tol:g} is below the double-precision floor {MIN_TOL:g}")
    if L <= 0:
        raise ValueError("L must be positive")
    E = float(E)
    k, kp = _wavenumbers(E, B_asym)
    if abs(k) == 0.0 or abs(kp) == 0.0:
        raise ValueError("asymptotic wavenumber vanishes at this energy")
    v_minus, v_plus = -2j * B_asym, 2j * B_asym
    for x, v_inf in ((-L, v_minus), (L, v_plus)):
        dev = abs(complex(V(x)) - v_inf)
        if not dev <= FLAT_TOL * max(1.0, abs(v_inf)):
            raise AsymptoteError(f"|V({x:g}) - V_inf| = {dev:.3g} exceeds {FLAT_TOL:g}")

    x_plus = _matching_point(kp, L)
    x_minus = -_matching_point(k, L)
    amp = math.exp(2 * abs(kp.imag) * x_plus + 2 * abs(k.imag) * abs(x_minus))

    if deviation is None:
        dev_minus = lambda x: V(x) - v_minus  # noqa: E731
        dev_plus = lambda x: V(x) - v_plus  # noqa: E731
    else:
        dev_minus = dev_plus = deviation
    if side == "left":
        out = _jost(dev_plus, kp, +1, "right", x_plus, L)
        lp = _jost(dev_minus, k, +1, "left", x_minus, -L)
        lm = _jost(dev_minus, k, -1, "left", x_minus, -L)
        psi = _integrate(V, E, [out.value, out.deriv], x_plus, x_minus, tol, breakpoints)
        fp = (lp.value, lp.deriv)
        fm = (lm.value, lm.deriv)
        w = _wronskian(fp, fm)
        a = _wronskian(psi, fm) / w
        b = _wronskian(fp, psi) / w
        jost_err = out.error + lp.error + lm.error
    else:
        out = _jost(dev_minus, k, -1, "left", x_minus, -L)
        rp = _jost(dev_plus, kp, +1, "right", x_plus, L)
        rm = _jost(dev_plus, kp, -1, "right", x_plus, L)
        psi = _integrate(V, E, [out.value, out.deriv], x_minus, x_plus, tol, breakpoints)
        fm = (rm.value, rm.deriv)
        fp = (rp.value, rp.deriv)
        w = _wronskian(fm, fp)
        a = _wronskian(psi, fp) / w
        b = _wronskian(fm, psi) / w
        jost_err = out.error + rp.error + rm.error
    if a == 0:
        raise NonConvergence("incident coefficient vanished (spectral singularity or bound state)")
    t = 1.0 / a
    r = b / a
    residual = tol * (1.0 + amp) + jost_err
    return ScatterSolution(
        r=complex(r),
        t=complex(t),
        side=side,
        energy=E,
        k=k,
        k_prime=kp,
        match_residual=float(residual),
        domain_half_width=float(L),
        step_control=float(tol),
        x_minus=float(x_minus),
        x_plus=float(x_plus),
    )


def _decaying_wronskian(V: Potential, energies: np.ndarray, L: float, tol: float, B_asym: float) -> np.ndarray:
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    n = energies.size
    kap_r = np.sqrt(2j * B_asym - energies + 0j)
    kap_l = np.sqrt(-2j * B_asym - energies + 0j)

    def fun(x, y):
        return np.concatenate([y[n:], (complex(V(x)) - energies) * y[:n]])

    def run(y0, a):
        atol = tol * 1e-6
        sol = solve_ivp(fun, (a, 0.0), y0, method="DOP853", rtol=tol, atol=atol)
        if sol.status != 0:
            raise NonConvergence(f"shooting integration failed: {sol.message}")
        return sol.y[:, -1]

    ones = np.ones(n, dtype=complex)
    right = run(np.concatenate([ones, -kap_r]), L)
    left = run(np.concatenate([ones, kap_l]), -L)
    w = right[:n] * left[n:] - right[n:] * left[:n]
    norm = np.abs(right[:n]) * np.abs(left[:n]) + np.abs(right[n:]) * np.abs(left[:n])
    return w / np.where(norm > 0, norm, 1.0)


def matching_function(V: Potential, E, L: float = 20.0, tol: float = 1e-10, B_asym: float = 0.0):
    """Real part of the normalized Wronskian of the two decaying solutions at 0.

    For a PT-symmetric potential the Wronskian is real, and its zeros in
    ``E`` are the bound-state energies.
    """
    out = _decaying_wronskian(V, E, L, tol, B_asym).real
    return out if np.ndim(E) else float(out[0])


def shoot_eigen(
    V: Potential,
    E_bracket: tuple[float, float],
    L: float = 20.0,
    tol: float = 1e-10,
    B_asym: float = 0.0,
) -> float:
    """Bound-state energy inside a bracket by shooting.

    Decaying solutions ``exp(-+kappa x)`` are launched at ``+-L`` and
    integrated to ``x = 0``.  A 50-point scan of the matching function
    locates the sign change, which is refined with Brent's method
    (bisection with secant and inverse quadratic steps) to absolute
    tolerance `tol` in energy.

    Raises
    ------
    NoRootError
        If the matching function keeps its sign on the bracket.
    NonConvergence
        If `tol` is below ``MIN_TOL`` or the integrator fails.

    Warns
    -----
    MultipleRootWarning
        If the scan sees more than one sign change; the lowest is refined.
    """
    if not (tol >= MIN_TOL):
        raise NonConvergence(f"step control {tol:g} is below the double-precision floor {MIN_TOL:g}")
    lo, hi = float(E_bracket[0]), float(E_bracket[1])
    if not lo < hi:
        raise ValueError("bracket must be ordered (lo < hi)")
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = matching_function(V, grid, L, tol, B_asym)
    exact = np.flatnonzero(vals == 0.0)
    flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    count = flips.size + exact.size
    if count == 0:
        raise NoRootError(f"matching function has no sign change on [{lo}, {hi}]")
    if count > 1:
        warnings.warn(
            f"{count} sign changes on [{lo}, {hi}]; refining the lowest", MultipleRootWarning, stacklevel=2
        )
    if exact.size and (not flips.size or exact[0] <= flips[0]):
        return float(grid[exact[0]])
    i = flips[0]
    return float(
        brentq(lambda e: matching_function(V, e, L, tol, B_asym), grid[i], grid[i + 1], xtol=tol, rtol=1e-15)
    )


def default_L(spec: PotentialSpec) -> float:
    return DEFAULT_L["scarf" if spec.is_scarf else "rm"]


@dataclass(frozen=True)
class Check:
    """One named pass/fail comparison."""

    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Oracle-versus-closed-form comparison for one model and energy."""

    model: str
    A: float
    B: float
    m: int
    energy: float
    checks: list[Check]
    info: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "A": self.A,
            "B": self.B,
            "m": self.m,
            "energy": self.energy,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "info": self.info,
        }


def _rel(num: float, ref: float) -> float:
    return abs(num - ref) / max(abs(ref), 1e-12)


def verify_amplitudes(
    spec: PotentialSpec,
    value: float,
    L: float | None = None,
    tol: float = 1e-10,
    conventional: bool = False,
) -> VerificationReport:
    """Compare oracle amplitudes with the closed forms for one model.

    Parameters
    ----------
    spec : PotentialSpec
    value : float
        Wavenumber ``k`` for the Scarf II models, energy ``E`` for RM-II.
    L : float, optional
        Truncation point; defaults to 20 (Scarf II) or 25 (RM-II).
    tol : float, optional
        Integrator tolerance.
    conventional : bool, optional
        Use the conventional instead of the rationally extended potential.

    Returns
    -------
    VerificationReport
        Relative errors of ``R_left``, ``R_right``, ``T_left``, ``T_right``,
        phase offsets ``arg(num/analytic)`` of the four amplitudes, and for
        RM-II both wavenumber labelings plus the moduli of the extension
        factor ratios.
    """
    from . import scattering as sc

    if L is None:
        L = default_L(spec)
    if spec.is_scarf:
        k = float(value)
        energy = k * k
        B_asym = 0.0
        tol_amp = 1e-4
    else:
        energy = float(value)
        B_asym = float(spec.B)
        tol_amp = 1e-3
    V = spec.potential(conventional=conventional)
    dev = spec.tail_deviation(conventional=conventional)
    num_l = solve_scattering(V, energy, B_asym, "left", L, tol, deviation=dev)
    num_r = solve_scattering(V, energy, B_asym, "right", L, tol, deviation=dev)
    an = sc.model_amplitudes(spec, value, conventional=conventional)

    checks = [
        Check("match_residual_left", num_l.match_residual, ACCEPT_RESIDUAL, num_l.accepted),
        Check("match_residual_right", num_r.match_residual, ACCEPT_RESIDUAL, num_r.accepted),
    ]
    T_left = _rel(num_l.T, abs(an.t_left) ** 2)
    T_right = _rel(num_r.T, abs(an.t_right) ** 2)
    checks.append(Check("T_left", T_left, tol_amp, T_left < tol_amp))
    checks.append(Check("T_right", T_right, tol_amp, T_right < tol_amp))
    R_left = _rel(num_l.R, abs(an.r_left) ** 2)
    R_right = _rel(num_r.R, abs(an.r_right) ** 2)
    phases = {}
    for name, num, ref in (
        ("r_left", num_l.r, an.r_left),
        ("t_left", num_l.t, an.t_left),
        ("r_right", num_r.r, an.r_right),
        ("t_right", num_r.t, an.t_right),
    ):
        phases[name] = float(cmath.phase(num / ref)) if ref != 0 and num != 0 else None
    info: dict = {
        "wavenumbers": {
            "k": [num_l.k.real, num_l.k.imag],
            "k_prime": [num_l.k_prime.real, num_l.k_prime.imag],
        },
        "numeric": {
            "R_left": num_l.R,
            "R_right": num_r.R,
            "T_left": num_l.T,
            "T_right": num_r.T,
        },
        "analytic": {
            "R_left": abs(an.r_left) ** 2,
            "R_right": abs(an.r_right) ** 2,
            "T_left": abs(an.t_left) ** 2,
            "T_right": abs(an.t_right) ** 2,
        },
        "phase_offsets": phases,
        "match_residual": max(num_l.match_residual, num_r.match_residual),
    }
    if spec.is_scarf:
        checks.append(Check("R_left", R_left, tol_amp, R_left < tol_amp))
        checks.append(Check("R_right", R_right, tol_amp, R_right < tol_amp))
    else:
        # The alternative labeling swaps the roles of k and k'.
        alt = sc.model_amplitudes(spec, energy, conventional=conventional, labeling="swapped")
        labelings = {
            "artifact": {"R_left": R_left, "R_right": R_right},
            "swapped": {
                "R_left": _rel(num_l.R, abs(alt.r_left) ** 2),
                "R_right": _rel(num_r.R, abs(alt.r_right) ** 2),
            },
        }
        best = min(labelings, key=lambda key: max(labelings[key].values()))
        worst = max(labelings[best].values())
        info["labelings"] = labelings
        info["matching_labeling"] = best if worst < tol_amp else None
        checks.append(Check("R_labeling", worst, tol_amp, worst < tol_amp, detail=best))
        if not conventional and spec.m >= 1:
            factors = sc.rm_extension_factors(sc.rm_wavenumbers(energy, spec.B), spec.params)
            info["extension_factor_moduli"] = {name: abs(f) for name, f in factors.items()}
    return VerificationReport(spec.model.value, float(spec.A), float(spec.B), int(spec.m), energy, checks, info)
