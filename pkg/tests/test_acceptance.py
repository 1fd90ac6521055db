"""Acceptance suite: one test per criterion, each timed against its runtime budget."""

from __future__ import annotations

import warnings

import numpy as np

from ptscatter.eop import XmJacobi, x1_jacobi, xm_jacobi
from ptscatter.errors import MultipleRootWarning, NoRootError, NonConvergence, ParameterWarning, PtScatterError
from ptscatter.oracle import shoot_eigen, solve_scattering, verify_amplitudes
from ptscatter.potentials import PotentialSpec, RMParams, ScarfParams
from ptscatter.scattering import pole_scan, scarf_extended_amplitudes, scarf_fm_factor, scarf_usual_amplitudes
from ptscatter.spectra import (
    closed_form_states,
    residual,
    rm_energies,
    rm_si_check,
    rm_wavefunction,
    scarf_energies,
    scarf_psym_energies,
    scarf_wavefunction,
)

SPECTRAL_SETS = [(2.0, 1.0, 0), (2.5, 1.3, 1), (2.0, 1.0, 1), (1.0, 1.0, 1)]


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _quiet_spec(model, A, B, m):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        return PotentialSpec(model, A, B, m)


def test_m0_reduction(criterion):
    with criterion(1, "m=0 Scarf II amplitudes equal conventional ones", 1.0) as c:
        rng = np.random.default_rng(1)
        worst = 0.0
        for A, B, k in zip(rng.uniform(0.5, 4, 200), rng.uniform(0.6, 4, 200), rng.uniform(0.1, 5, 200)):
            ext = scarf_extended_amplitudes(k, ScarfParams(A, B, 0))
            conv = scarf_usual_amplitudes(k, A, B)
            for name in ("r_left", "t_left", "r_right", "t_right"):
                err = _rel(getattr(ext, name), getattr(conv, name))
                worst = max(worst, err)
                if err > 1e-12:
                    c.fail(f"{name} A={A:.3f} B={B:.3f} k={k:.3f} rel {err:.2e}")
        c.measured(f"max rel {worst:.1e}")
    c.check()


def test_modulus_one_multiplier(criterion):
    with criterion(2, "|F_m(k)| = 1 and extended moduli equal conventional", 1.0) as c:
        rng = np.random.default_rng(2)
        ks = rng.uniform(0.1, 5, 1000)
        B = 1.3
        worst_f = worst_m = 0.0
        for m in range(6):
            f = np.array([scarf_fm_factor(k, B, m) for k in ks])
            worst_f = max(worst_f, float(np.max(np.abs(np.abs(f) - 1))))
        for m in range(6):
            for k in ks[:200]:
                ext = scarf_extended_amplitudes(k, ScarfParams(2.5, B, m) if m <= 1 else _quiet_params(2.5, B, m))
                conv = scarf_usual_amplitudes(k, 2.5, B)
                for a, b in ((ext.R_left, conv.R_left), (ext.R_right, conv.R_right), (ext.T_left, conv.T_left)):
                    worst_m = max(worst_m, _rel(a, b))
        if worst_f >= 1e-13:
            c.fail(f"max ||F_m|-1| {worst_f:.2e}")
        if worst_m > 1e-12:
            c.fail(f"max moduli rel {worst_m:.2e}")
        c.measured(f"max ||F|-1| {worst_f:.1e}, moduli rel {worst_m:.1e}")
    c.check()


def _quiet_params(A, B, m):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        return ScarfParams(A, B, m)


def test_m1_cross_formula(criterion):
    # The general X_m construction carries an overall factor (alpha - beta) at m = 1.
    with criterion(3, "X_m at m=1 against the X_1 formula", 1.0) as c:
        rng = np.random.default_rng(3)
        worst = 0.0
        for trial in range(5):
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            z = rng.uniform(-1.5, 1.5, 20) + 1j * rng.uniform(-1.5, 1.5, 20)
            for n in range(7):
                gen = xm_jacobi(XmJacobi(1, n, a, b), z)
                ref = (a - b) * x1_jacobi(n, a, b, z)
                err = float(np.max(np.abs(gen - ref) / np.maximum(np.abs(ref), 1e-300)))
                worst = max(worst, err)
                if err > 1e-10:
                    c.fail(f"n={n} alpha={a:.3f} beta={b:.3f} rel {err:.2e}")
        c.measured(f"max rel {worst:.1e}")
    c.check()


def test_scarf_oracle_scattering(criterion):
    with criterion(4, "Scarf II closed forms against the ODE oracle", 30.0) as c:
        worst = 0.0
        for m in (0, 1, 2):
            spec = _quiet_spec("scarf", 2.5, 1.3, m)
            V = spec.potential()
            for k in (0.5, 1.0, 2.0):
                amp = scarf_extended_amplitudes(k, spec.params)
                left = solve_scattering(V, k * k, side="left", L=20.0, tol=1e-10)
                right = solve_scattering(V, k * k, side="right", L=20.0, tol=1e-10)
                pairs = {
                    "R_left": (left.R, amp.R_left), "T_left": (left.T, amp.T_left),
                    "R_right": (right.R, amp.R_right), "T_right": (right.T, amp.T_right),
                }
                for name, (num, ana) in pairs.items():
                    err = _rel(num, ana)
                    worst = max(worst, err)
                    if err > 1e-4:
                        c.fail(f"m={m} k={k} {name} rel {err:.2e}")
        c.measured(f"max rel {worst:.1e}")
    c.check()


def test_rm_oracle_scattering(criterion):
    with criterion(5, "RM-II closed forms against the ODE oracle with labeling resolution", 60.0) as c:
        worst_t = 0.0
        labels = set()
        for m in (0, 1):
            spec = PotentialSpec("rm", 2.0, 1.0, m)
            for E in (2.0, 3.0, 5.0):
                rep = verify_amplitudes(spec, E, conventional=(m == 0))
                checks = {ch.name: ch for ch in rep.checks}
                for name in ("T_left", "T_right"):
                    worst_t = max(worst_t, checks[name].measured)
                    if checks[name].measured > 1e-3:
                        c.fail(f"m={m} E={E} {name} rel {checks[name].measured:.2e}")
                label = rep.info["matching_labeling"]
                if label is None:
                    c.fail(f"m={m} E={E}: no labeling matches R to 1e-3 ({rep.info['labelings']})")
                else:
                    labels.add(label)
        c.measured(f"max T rel {worst_t:.1e}, matching labeling {sorted(labels)}")
    c.check()


def _shoot_cases(A, B, m):
    """(label, potential, closed-form level, all levels of that potential, B_asym)."""
    out = []
    p = _quiet_params(A, B, m)
    conventional_levels = scarf_energies(p) + scarf_psym_energies(p)
    V = _quiet_spec("scarf", A, B, m).potential()
    for E in scarf_energies(p):
        out.append(("scarf", V, E, conventional_levels if m == 0 else scarf_energies(p), 0.0))
    Vp = _quiet_spec("scarf-psym", A, B, m).potential()
    for E in scarf_psym_energies(p):
        out.append(("scarf-psym", Vp, E, conventional_levels if m == 0 else scarf_psym_energies(p), 0.0))
    q = RMParams(A, B, m)
    Vr = PotentialSpec("rm", A, B, m).potential()
    levels = rm_energies(q, extended=m > 0)
    for E in levels:
        out.append(("rm", Vr, E, levels, float(B)))
    return out


def test_spectra_shooting(criterion):
    with criterion(6, "shooting reproduces every closed-form level", 30.0) as c:
        worst, count = 0.0, 0
        for A, B, m in SPECTRAL_SETS:
            for label, V, E, levels, b_asym in _shoot_cases(A, B, m):
                gaps = [abs(E - o) for o in levels if abs(E - o) > 1e-12]
                hw = min([0.05] + [0.45 * g for g in gaps])
                count += 1
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("error", MultipleRootWarning)
                        Es = shoot_eigen(V, (E - hw, E + hw), L=20.0 if label != "rm" else 25.0, B_asym=b_asym)
                except (NoRootError, NonConvergence, MultipleRootWarning) as exc:
                    c.fail(f"{label} {(A, B, m)} E={E:.6g}: {type(exc).__name__}")
                    continue
                worst = max(worst, abs(Es - E))
                if abs(Es - E) > 1e-6:
                    c.fail(f"{label} {(A, B, m)} E={E:.6g} shot {Es:.10g}")
        c.measured(f"{count} levels, max |dE| {worst:.1e} among found")
    c.check()


def test_eigenfunction_residuals(criterion):
    with criterion(7, "closed-form eigenfunctions have Schrodinger residual < 1e-6", 30.0) as c:
        worst, count = 0.0, 0
        for A, B, m in SPECTRAL_SETS:
            p = _quiet_params(A, B, m)
            for variant, levels in (("conventional", scarf_energies(p)), ("extended", scarf_energies(p)),
                                    ("psym-conventional", scarf_psym_energies(p)),
                                    ("psym-extended", scarf_psym_energies(p))):
                if m == 0 and variant.endswith("extended"):
                    continue
                for n in range(len(levels)):
                    s = scarf_wavefunction(p, variant, n)
                    r = residual(s.potential(), s, s.energy)
                    count += 1
                    worst = max(worst, r)
                    if r >= 1e-6:
                        c.fail(f"scarf {variant} {(A, B, m)} n={n} residual {r:.2e}")
            for n, E, s, problem in closed_form_states(PotentialSpec("rm", A, B, m)):
                count += 1
                if s is None:
                    c.fail(f"rm {(A, B, m)} n={n} E={E:.6g}: {problem}")
                    continue
                r = residual(s.potential(), s, s.energy)
                worst = max(worst, r)
                if r >= 1e-6:
                    c.fail(f"rm {(A, B, m)} n={n} residual {r:.2e}")
        c.measured(f"{count} states, max residual {worst:.1e} among constructed")
    c.check()


SIX_POTENTIALS = [
    ("scarf", True), ("scarf", False), ("scarf-psym", True), ("scarf-psym", False), ("rm", True), ("rm", False),
]


def test_pt_symmetry(criterion):
    with criterion(8, "V(-x)* = V(x) for all six potentials", 1.0) as c:
        rng = np.random.default_rng(8)
        worst = 0.0
        for model, conventional in SIX_POTENTIALS:
            A, B = (2.0, 1.0) if model == "rm" else (2.5, 1.8)
            V = PotentialSpec(model, A, B, 1).potential(conventional=conventional)
            x = rng.uniform(-10, 10, 200)
            dev = float(np.max(np.abs(np.conj(V(-x)) - V(x))))
            worst = max(worst, dev)
            if dev >= 1e-12:
                c.fail(f"{model} conventional={conventional} dev {dev:.2e}")
        c.measured(f"max dev {worst:.1e}")
    c.check()


def test_handedness(criterion):
    with criterion(9, "left/right reflection differ, transmission equal", 10.0) as c:
        for m in (0, 1, 2):
            p = _quiet_params(2.3, 1.1, m)
            a = scarf_extended_amplitudes(1.0, p)
            if abs(a.r_left - a.r_right) <= 1e-3:
                c.fail(f"m={m}: |r_left - r_right| = {abs(a.r_left - a.r_right):.2e}")
            if a.t_left != a.t_right:
                c.fail(f"m={m}: t_left != t_right")
            V = _quiet_spec("scarf", 2.3, 1.1, m).potential()
            left = solve_scattering(V, 1.0, side="left")
            right = solve_scattering(V, 1.0, side="right")
            if (abs(left.r) > abs(right.r)) != (abs(a.r_left) > abs(a.r_right)):
                c.fail(f"m={m}: oracle ordering of |r_left| vs |r_right| differs")
    c.check()


def test_pole_spectrum(criterion):
    with criterion(10, "pole scan finds the Gamma-function poles", 5.0) as c:
        poles = pole_scan(PotentialSpec("scarf", 2.5, 0.3), (0.0, 3.0))
        expected = [0.5, 1.5, 2.5]
        kap = sorted(p.imag for p in poles)
        if len(kap) != 3 or max(abs(a - b) for a, b in zip(kap, expected)) > 1e-8:
            c.fail(f"(2.5, 0.3): found {kap}")
        A, B = 0.3, 2.0
        poles = pole_scan(PotentialSpec("scarf", A, B), (0.0, 2.0))
        kap = [p.imag for p in poles]
        for target in (0.5, 1.5):
            if not any(abs(x - target) < 1e-8 for x in kap):
                c.fail(f"(0.3, 2): missing {target}i in {kap}")
        for x in kap:
            first = abs((A - x) - round(A - x)) < 1e-8
            second = abs((B - 0.5 - x) - round(B - 0.5 - x)) < 1e-8
            if not (first or second):
                c.fail(f"(0.3, 2): spurious pole {x}i")
        c.measured(f"(0.3, 2) poles {[round(x, 10) for x in kap]}")
    c.check()


def test_extended_shape_invariance(criterion):
    with criterion(11, "RM-II extended shape invariance", 5.0) as c:
        si = rm_si_check(RMParams(2.0, 1.0, 1))
        if si.max_dev >= 1e-8:
            c.fail(f"max_dev {si.max_dev:.2e}")
        c.measured(f"max_dev {si.max_dev:.1e}; pairing {si.pairings}")
    c.check()


def test_dual_path_rm(criterion):
    with criterion(12, "RM-II closed-form and operator eigenfunctions proportional", 2.0) as c:
        p = RMParams(2.0, 1.0, 1)
        x = np.linspace(-10, 10, 2001)
        for n in (0, 1):
            try:
                a = rm_wavefunction(p, "extended-closed-form", n)(x)
                b = rm_wavefunction(p, "extended-operator", n)(x)
            except PtScatterError as exc:
                c.fail(f"n={n}: {type(exc).__name__}: {exc}")
                continue
            ratio = a / b
            ref = ratio[len(x) // 2]
            dev = float(np.max(np.abs(ratio / ref - 1)))
            if dev > 1e-9:
                c.fail(f"n={n}: ratio deviation {dev:.2e}")
    c.check()
