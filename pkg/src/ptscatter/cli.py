"""Command-line front end: ``ptscatter {potential,spectrum,amplitudes,verify,check}``.

Every subcommand writes a deterministic CSV (default) or JSON artifact.  CSV
files start with ``#`` header lines echoing the version, subcommand, full
configuration and wavenumber convention, followed by a fixed column row.
Numbers use 17 significant digits.

Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 degenerate
or near-node parameters.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Any, List, Optional, Sequence

import numpy as np

from . import __version__
from . import scattering as sc
from . import spectra
from .errors import (
    DegenerateParamError,
    GammaOverflowError,
    MultipleRootWarning,
    NearNodeError,
    NonConvergence,
    NoRootError,
    PoleError,
    PtScatterError,
)
from .oracle import Check, MIN_TOL, default_L, shoot_eigen, verify_amplitudes
from .potentials import Model, PotentialSpec, check_nodeless, denominator_min_abs

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2
EXIT_DEGENERATE = 3

CONVENTION = (
    "k^2 = E + 2iB for x -> -inf, k'^2 = E - 2iB for x -> +inf, principal square roots; "
    "Scarf II: B_asym = 0, E = k^2"
)

POTENTIAL_COLUMNS = ("x", "re_V", "im_V")
SPECTRUM_COLUMNS = ("n", "E_n", "residual", "E_shoot", "status")
_AMPLITUDE_VALUES = (
    "re_r_left",
    "im_r_left",
    "re_t_left",
    "im_t_left",
    "re_r_right",
    "im_r_right",
    "re_t_right",
    "im_t_right",
    "R_left",
    "R_right",
    "T",
    "T_right",
    "pole",
)
AMPLITUDE_COLUMNS_SCARF = ("k",) + _AMPLITUDE_VALUES
AMPLITUDE_COLUMNS_RM = ("E", "re_k", "im_k", "re_k_prime", "im_k_prime") + _AMPLITUDE_VALUES
CHECK_COLUMNS = ("key", "value")

RESIDUAL_THRESHOLD = 1e-6
SHOOT_THRESHOLD = 1e-6
PT_THRESHOLD = 1e-12
DEFAULT_VERIFY_POINTS = {"scarf": (0.5, 1.0, 2.0), "rm": (2.0, 3.0, 5.0)}


@dataclass
class RunConfig:
    """All settings of one CLI run; flags override a JSON config file."""

    command: str = "potential"
    model: str = "scarf"
    A: float = 2.5
    B: float = 1.3
    m: int = 0
    conventional: bool = False
    xmin: float = -10.0
    xmax: float = 10.0
    nx: int = 201
    kmin: float = 0.1
    kmax: float = 5.0
    nk: int = 50
    Emin: float = 0.5
    Emax: float = 5.0
    nE: int = 46
    points: Optional[List[float]] = None
    L: Optional[float] = None
    tol: float = 1e-10
    out: Optional[str] = None
    format: str = "csv"
    jobs: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.model not in [m.value for m in Model]:
            raise ValueError(f"unknown model {self.model!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        for lo, hi, n in (("xmin", "xmax", "nx"), ("kmin", "kmax", "nk"), ("Emin", "Emax", "nE")):
            a, b, c = getattr(self, lo), getattr(self, hi), getattr(self, n)
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"{lo}/{hi} must be finite")
            if a > b:
                raise ValueError(f"{lo} must not exceed {hi}")
            if int(c) != c or c < 1:
                raise ValueError(f"{n} must be a positive integer")
        if self.points is not None and not all(math.isfinite(v) for v in self.points):
            raise ValueError("points must be finite")
        if self.L is not None and not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError("L must be positive and finite")
        if not (self.tol > 0):
            raise ValueError("tol must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def spec(self) -> PotentialSpec:
        return PotentialSpec(self.model, float(self.A), float(self.B), int(self.m))

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        return d


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v == 0.0:
        return "0"
    return format(v, ".17g")


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return None
        return 0.0 if v == 0.0 else v
    return v


def _header_lines(cfg: RunConfig) -> List[str]:
    return [
        f"# ptscatter {__version__}",
        f"# command: {cfg.command}",
        f"# config: {json.dumps(_jsonable(cfg.echo()), sort_keys=True)}",
        f"# convention: {CONVENTION}",
    ]


def render_table(cfg: RunConfig, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Serialize a table as CSV with header lines, or as JSON."""
    if cfg.format == "json":
        doc = {
            "format": "ptscatter-table",
            "version": __version__,
            "command": cfg.command,
            "config": cfg.echo(),
            "convention": CONVENTION,
            "columns": list(columns),
            "rows": [list(r) for r in rows],
        }
        return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    for line in _header_lines(cfg):
        buf.write(line + "\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _linspace(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, int(n))


def cmd_potential(cfg: RunConfig) -> int:
    """Tabulate ``x, Re V, Im V`` on the requested grid."""
    V = cfg.spec().potential(conventional=cfg.conventional)
    x = _linspace(cfg.xmin, cfg.xmax, cfg.nx)
    v = np.asarray(V(x), dtype=complex)
    rows = [(xi, vi.real, vi.imag) for xi, vi in zip(x, v)]
    _emit(cfg, render_table(cfg, POTENTIAL_COLUMNS, rows))
    return EXIT_OK


def _spectrum_spec(cfg: RunConfig) -> PotentialSpec:
    spec = cfg.spec()
    if cfg.conventional and spec.m != 0:
        spec = PotentialSpec(spec.model, spec.A, spec.B, 0)
    return spec


def _bracket_half_width(E: float, others: Sequence[float]) -> float:
    gaps = [abs(E - o) for o in others if abs(E - o) > 1e-12]
    return min([0.05] + [0.45 * g for g in gaps])


def spectrum_rows(spec: PotentialSpec, L: Optional[float], tol: float):
    """Rows ``(n, E_n, residual, E_shoot, status)`` and the list of failures."""
    V = spec.potential()
    L = default_L(spec) if L is None else L
    B_asym = 0.0 if spec.is_scarf else float(spec.B)
    states = spectra.closed_form_states(spec)
    levels = [E for _, E, _, _ in states]
    if spec.is_scarf and spec.m == 0:
        levels = spectra.scarf_energies(spec.params) + spectra.scarf_psym_energies(spec.params)
    rows, failures = [], []
    for n, E, state, problem in states:
        res = None
        if state is not None:
            try:
                res = spectra.residual(V, state, E)
            except NearNodeError as exc:
                problem = str(exc)
        hw = _bracket_half_width(E, levels)
        e_shoot = None
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", MultipleRootWarning)
                e_shoot = shoot_eigen(V, (E - hw, E + hw), L=L, tol=tol, B_asym=B_asym)
        except (NoRootError, MultipleRootWarning, NonConvergence) as exc:
            problem = problem or f"{type(exc).__name__}: {exc}"
        ok = res is not None and res < RESIDUAL_THRESHOLD and e_shoot is not None and abs(e_shoot - E) < SHOOT_THRESHOLD
        if e_shoot is None and state is None:
            status = "not-an-eigenvalue"
        else:
            status = "ok" if ok else "fail"
        rows.append((n, E, res, e_shoot, status))
        if not ok:
            failures.append((n, E, res, e_shoot, problem))
    return rows, failures


def cmd_spectrum(cfg: RunConfig) -> int:
    """Closed-form levels with eigenfunction residuals and shooting energies."""
    rows, failures = spectrum_rows(_spectrum_spec(cfg), cfg.L, cfg.tol)
    _emit(cfg, render_table(cfg, SPECTRUM_COLUMNS, rows))
    return EXIT_VERIFY if failures else EXIT_OK


def _amplitude_row(task) -> tuple:
    spec, value, conventional = task
    lead: tuple
    if spec.model is Model.RM:
        w = sc.rm_wavenumbers(value, spec.B)
        lead = (value, w.k.real, w.k.imag, w.k_prime.real, w.k_prime.imag)
    else:
        lead = (value,)
    try:
        a = sc.model_amplitudes(spec, value, conventional=conventional)
    except (PoleError, GammaOverflowError, DegenerateParamError):
        return lead + (None,) * (len(_AMPLITUDE_VALUES) - 1) + (1,)
    body = (
        a.r_left.real,
        a.r_left.imag,
        a.t_left.real,
        a.t_left.imag,
        a.r_right.real,
        a.r_right.imag,
        a.t_right.real,
        a.t_right.imag,
        a.R_left,
        a.R_right,
        a.T_left,
        a.T_right,
        0,
    )
    return lead + body


def amplitude_rows(spec: PotentialSpec, values: Sequence[float], conventional: bool, jobs: int = 1) -> List[tuple]:
    """Closed-form amplitude rows in input order, optionally computed in parallel."""
    tasks = [(spec, float(v), conventional) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_amplitude_row, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_amplitude_row(t) for t in tasks]


def cmd_amplitudes(cfg: RunConfig) -> int:
    """Sweep closed-form amplitudes over ``k`` (Scarf II) or ``E`` (RM-II)."""
    spec = cfg.spec()
    if spec.model is Model.RM:
        values, columns = _linspace(cfg.Emin, cfg.Emax, cfg.nE), AMPLITUDE_COLUMNS_RM
    else:
        values, columns = _linspace(cfg.kmin, cfg.kmax, cfg.nk), AMPLITUDE_COLUMNS_SCARF
    rows = amplitude_rows(spec, values, cfg.conventional, cfg.jobs)
    _emit(cfg, render_table(cfg, columns, rows))
    return EXIT_OK


def _verify_points(cfg: RunConfig, spec: PotentialSpec) -> Sequence[float]:
    if cfg.points is not None:
        return cfg.points
    return DEFAULT_VERIFY_POINTS["scarf" if spec.is_scarf else "rm"]


def invariant_checks(spec: PotentialSpec, cfg: RunConfig) -> List[Check]:
    """Model invariants that do not need the oracle."""
    checks: List[Check] = []
    rng = np.random.default_rng(cfg.seed)
    x = rng.uniform(-10.0, 10.0, 200)
    V = spec.potential(conventional=cfg.conventional)
    dev = float(np.max(np.abs(np.conj(V(-x)) - V(x))))
    checks.append(Check("pt_symmetry", dev, PT_THRESHOLD, dev < PT_THRESHOLD))
    if spec.is_scarf:
        p = spec.params
        ks = np.linspace(0.01, 10.0, 1000)
        fm = max(abs(abs(sc.scarf_fm_factor(k, p.B, p.m)) - 1.0) for k in ks) if spec.model is Model.SCARF else None
        if fm is not None:
            checks.append(Check("fm_modulus", fm, 1e-13, fm < 1e-13))
        worst = 0.0
        for k in _verify_points(cfg, spec):
            a = sc.model_amplitudes(spec, k, conventional=cfg.conventional)
            worst = max(worst, abs(a.t_left - a.t_right))
        checks.append(Check("t_left_equals_t_right", worst, 0.0, worst == 0.0))
    else:
        worst = 0.0
        for E in _verify_points(cfg, spec):
            a = sc.model_amplitudes(spec, E, conventional=cfg.conventional)
            worst = max(worst, abs(a.t_right - a.k_prime / a.k * a.t_left) / abs(a.t_right))
        checks.append(Check("t_right_wronskian_relation", worst, 1e-12, worst < 1e-12))
        p = spec.params
        if not cfg.conventional and p.m >= 1 and p.A > 1:
            si = spectra.rm_si_check(p)
            checks.append(Check("extended_shape_invariance", si.max_dev, 1e-8, si.max_dev < 1e-8))
    sspec = PotentialSpec(spec.model, spec.A, spec.B, 0) if cfg.conventional else spec
    rows, failures = spectrum_rows(sspec, cfg.L, cfg.tol)
    bad = {f[0]: f for f in failures}
    for n, E, res, e_shoot, status in rows:
        detail = (bad[n][4] or "") if n in bad else ""
        r = res if res is not None else math.nan
        checks.append(Check(f"eigenfunction_residual[n={n}]", r, RESIDUAL_THRESHOLD, res is not None and res < RESIDUAL_THRESHOLD, detail))
        d = abs(e_shoot - E) if e_shoot is not None else math.nan
        checks.append(Check(f"shooting_energy[n={n}]", d, SHOOT_THRESHOLD, e_shoot is not None and d < SHOOT_THRESHOLD, detail))
    return checks


def verify_report(cfg: RunConfig) -> dict:
    """Oracle comparisons at each verify point plus the invariant suite."""
    spec = cfg.spec()
    checks: List[Check] = []
    info: dict = {}
    for v in _verify_points(cfg, spec):
        tag = f"k={v:g}" if spec.is_scarf else f"E={v:g}"
        try:
            rep = verify_amplitudes(spec, v, L=cfg.L, tol=cfg.tol, conventional=cfg.conventional)
        except (NonConvergence, PtScatterError) as exc:
            checks.append(Check(f"oracle[{tag}]", math.nan, cfg.tol, False, f"{type(exc).__name__}: {exc}"))
            continue
        checks.extend(Check(f"{c.name}[{tag}]", c.measured, c.tolerance, c.passed, c.detail) for c in rep.checks)
        info[tag] = rep.info
    try:
        checks.extend(invariant_checks(spec, cfg))
    except (NonConvergence, PtScatterError) as exc:
        checks.append(Check("invariants", math.nan, cfg.tol, False, f"{type(exc).__name__}: {exc}"))
    return {
        "format": "ptscatter-verify",
        "version": __version__,
        "config": cfg.echo(),
        "convention": CONVENTION,
        "passed": all(c.passed for c in checks),
        "checks": [c.as_dict() for c in checks],
        "info": info,
    }


def cmd_verify(cfg: RunConfig) -> int:
    """Write a JSON verification report; exit 2 unless every check passes."""
    if cfg.tol < MIN_TOL:
        warnings.warn(f"tol={cfg.tol:g} is below {MIN_TOL:g}; the oracle will refuse it", stacklevel=2)
    report = verify_report(cfg)
    _emit(cfg, json.dumps(_jsonable(report), indent=2, allow_nan=False) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_check(cfg: RunConfig) -> int:
    """Validate parameters and the node-free condition of the extension."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = cfg.spec()
    rows = [
        ("model", spec.model.value),
        ("A", float(spec.A)),
        ("B", float(spec.B)),
        ("m", int(spec.m)),
        ("min_abs_denominator", denominator_min_abs(spec)),
    ]
    states = spectra.closed_form_states(_spectrum_spec(cfg))
    rows.append(("bound_states", len(states)))
    rows.append(("near_threshold", sum(1 for _, _, s, _ in states if s is not None and s.near_threshold)))
    rows.extend(("warning", str(w.message)) for w in caught)
    _emit(cfg, render_table(cfg, CHECK_COLUMNS, rows))
    check_nodeless(spec)
    return EXIT_OK


COMMANDS = {
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "amplitudes": cmd_amplitudes,
    "verify": cmd_verify,
    "check": cmd_check,
}


def _points(text: str) -> List[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and output")
    g.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    g.add_argument("--model", choices=[m.value for m in Model])
    g.add_argument("--A", type=float)
    g.add_argument("--B", type=float)
    g.add_argument("--m", type=int)
    g.add_argument("--conventional", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--xmin", type=float)
    g.add_argument("--xmax", type=float)
    g.add_argument("--nx", type=int)
    g.add_argument("--kmin", type=float)
    g.add_argument("--kmax", type=float)
    g.add_argument("--nk", type=int)
    g.add_argument("--Emin", type=float)
    g.add_argument("--Emax", type=float)
    g.add_argument("--nE", type=int)
    g.add_argument("--points", type=_points, help="comma-separated k (Scarf II) or E (RM-II) values for verify")
    g.add_argument("--L", type=float, help="oracle truncation point")
    g.add_argument("--tol", type=float, help="oracle integrator tolerance")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--jobs", type=int, help="worker processes for sweeps")
    g.add_argument("--seed", type=int, help="seed for randomized invariant samples")
    parser = argparse.ArgumentParser(prog="ptscatter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ptscatter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__.splitlines()[0])
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, an optional JSON config file and explicit flags."""
    values: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)} - {"command"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    values["command"] = args.command
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        cfg = load_config(args)
        return COMMANDS[cfg.command](cfg)
    except (NearNodeError, DegenerateParamError) as exc:
        print(f"ptscatter: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, TypeError, OSError) as exc:
        print(f"ptscatter: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
