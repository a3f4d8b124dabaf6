"""Command-line front end.

    kkriemann solve --config catalog:case01_region_Ia --out runs/c1
    kkriemann regions --config my.cfg --time 0 --grid 60 --window 12,-12,12
    kkriemann case-id --a-exp -1.5 --source 0:0.1 --left 3,-3 --horizon 100

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 unclassifiable
region under ``--strict``.  Failures print a JSON record on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import catalog as cat
from . import io
from . import svg
from .classify import boundary_overlays, case_id, case_transitions, classify_region, region_map
from .config import parse_config, render_config
from .delta import integrate_delta, scan_overcompressive
from .errors import ParseError, RiemannError, Unclassifiable, ValidationError
from .model import SourceTerm, State, SystemParams
from .scenario import Scenario
from .solver import simulate
from .solver.extract import extract_wave_structure
from .summary import RunSummary

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_UNCLASSIFIABLE = 0, 2, 3, 4
DEFAULT_WINDOW = (15.0, -10.0, 10.0)
DEFAULT_GRID = 40


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra


def _pair(text: str):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RHO,U but got {text!r}") from None
    return a, b


def _window(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected RHO_MAX,U_MIN,U_MAX but got {text!r}")
    if not (vals[0] > 0 and vals[1] < vals[2]):
        raise argparse.ArgumentTypeError("window needs RHO_MAX > 0 and U_MIN < U_MAX")
    return vals


def _pieces(text: str):
    out = []
    for item in text.split(","):
        s, _, v = item.partition(":")
        try:
            out.append((float(s), float(v)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad source piece {item!r}") from None
    return tuple(out)


def load_scenario(source: str) -> Scenario:
    """A config file path, or ``catalog:NAME`` for a built-in scenario."""
    if source.startswith("catalog:"):
        sc = cat.lookup(source.split(":", 1)[1])
        if sc is None:
            raise ValidationError(f"no catalog scenario named {source.split(':', 1)[1]!r}")
        return sc
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {source}: {exc.strerror}") from None
    return parse_config(text)


def scenario_from_args(args, need_right: bool = True) -> Scenario:
    """Config first, then individual flags override it."""
    base = load_scenario(args.config) if args.config else None
    if base is None:
        if args.a_exp is None or args.left is None or (need_right and args.right is None):
            raise ValidationError("give --config, or --a-exp and --left"
                                  + (" and --right" if need_right else ""))
        left = State(*args.left)
        right = State(*args.right) if args.right else left
        src = SourceTerm(args.source) if args.source else SourceTerm()
        base = Scenario(SystemParams(args.a_exp, args.rho_bar, src), left, right,
                        t_end=args.t_end if args.t_end is not None else 10.0)
        return base
    kw = {}
    if args.left:
        kw["left"] = State(*args.left)
    if args.right:
        kw["right"] = State(*args.right)
    if args.t_end is not None:
        kw["t_end"] = args.t_end
    if args.a_exp is not None or args.source is not None or args.rho_bar_set:
        p = base.params
        kw["params"] = SystemParams(args.a_exp if args.a_exp is not None else p.a_exp,
                                    args.rho_bar if args.rho_bar_set else p.rho_bar,
                                    SourceTerm(args.source) if args.source else p.source)
    return base.with_(**kw) if kw else base


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def _times(args, default: Sequence[float]) -> List[float]:
    ts = args.time if args.time else list(default)
    if any(t < 0 for t in ts):
        raise ValidationError("times must be nonnegative")
    return ts


def _tag(t: float) -> str:
    return ("t%.6g" % t).replace(".", "p")


# ---------------------------------------------------------------------------
# subcommands

def cmd_solve(args) -> int:
    sc = scenario_from_args(args)
    if args.grid:
        sc = sc.with_(n_cells=args.grid)
    if args.no_renormalize:
        sc = sc.with_(renormalize=False)
    out = _out(args)
    res = simulate(sc)
    snaps = res.snapshots
    pattern = classify_region(sc.left, sc.right, sc.params, 0.0)
    if args.strict and not pattern.ok:
        raise Unclassifiable("no construction connects the data", pattern.diagnostics)
    coarse = snaps[len(snaps) // 2] if len(snaps) > 2 else None
    report = extract_wave_structure(snaps[-1], sc.left, sc.right, sc.params, coarse=coarse)
    manifest = {"config": "scenario.cfg", "profiles_csv": "profiles.csv", "profiles_svg": "profiles.svg"}
    _write(out / "scenario.cfg", render_config(sc))
    io.write_profiles(out / "profiles.csv", snaps)
    table = io.read_table(out / "profiles.csv")
    _write(out / "profiles.svg", svg.profile_svg(table, sc.name))
    traj_ref = None
    if "S_delta" in pattern.sequence and sc.t_end > 0:
        try:
            traj = integrate_delta(sc.left, sc.right, sc.params, sc.t_end)
        except RiemannError:
            traj = None
        if traj is not None:
            io.write_trajectory(out / "trajectory.csv", traj)
            traj_ref = manifest["trajectory_csv"] = "trajectory.csv"
    try:
        cid = str(case_id(sc.params, sc.left, 0.0))
    except RiemannError as exc:
        cid = f"undefined ({type(exc).__name__})"
    summary = RunSummary(
        name=sc.name, case_id=cid, region=pattern.label,
        analytic_sequence=pattern.sequence, extracted_sequence=report.sequence,
        middle_states=[None if m is None else (m.rho, m.u_tilde) for m in pattern.middle_states],
        extracted_plateaus=[(p.rho, p.u_tilde) for p in report.plateaus],
        delta_trajectory=traj_ref, steps=res.steps, cfl_max=res.cfl_max)
    manifest["summary"] = "summary.json"
    summary.manifest = manifest
    _write(out / "summary.json", summary.to_json())
    print(f"{sc.name or 'scenario'}: region {pattern.label}; analytic {pattern} ; extracted {report}")
    return EXIT_OK


def cmd_regions(args) -> int:
    sc = scenario_from_args(args, need_right=False)
    out = _out(args)
    window = args.window or DEFAULT_WINDOW
    n = args.grid or DEFAULT_GRID
    status = EXIT_OK
    for t in _times(args, [0.0]):
        rmap = region_map(sc.left, sc.params, t, window, n)
        if args.strict and "Unclassifiable" in rmap.regions():
            status = EXIT_UNCLASSIFIABLE
        io.write_region_grid(out / f"regions_{_tag(t)}.csv", rmap)
        io.write_curves(out / f"overlays_{_tag(t)}.csv", rmap.overlays)
        grid = io.read_table(out / f"regions_{_tag(t)}.csv")
        curves = io.curves_from_table(io.read_table(out / f"overlays_{_tag(t)}.csv"))
        _write(out / f"regions_{_tag(t)}.svg", svg.state_space_svg(grid, curves, f"{rmap.case} t={t:g}"))
        print(f"t={t:g}: {rmap.case}; regions {', '.join(sorted(rmap.regions()))}")
    if status:
        raise CliError(status, "Unclassifiable", "unclassifiable cells in region map")
    return status


def cmd_curves(args) -> int:
    sc = scenario_from_args(args, need_right=False)
    out = _out(args)
    window = args.window or DEFAULT_WINDOW
    for t in _times(args, [0.0]):
        curves = boundary_overlays(sc.left, sc.params, t, window, n=args.grid or 400)
        io.write_curves(out / f"curves_{_tag(t)}.csv", curves)
        parsed = io.curves_from_table(io.read_table(out / f"curves_{_tag(t)}.csv"))
        _write(out / f"curves_{_tag(t)}.svg", svg.curves_svg(parsed, f"t={t:g}"))
        print(f"t={t:g}: {', '.join(sorted(curves))}")
    return EXIT_OK


def cmd_delta(args) -> int:
    sc = scenario_from_args(args)
    out = _out(args)
    traj = integrate_delta(sc.left, sc.right, sc.params, sc.t_end, dt=args.dt)
    io.write_trajectory(out / "trajectory.csv", traj)
    _write(out / "trajectory.svg", svg.trajectory_svg(io.read_table(out / "trajectory.csv")))
    x, z, e = traj.at(sc.t_end)
    print(f"x'(0)={traj.xprime[0]:.10g}; at t={sc.t_end:g}: x={x:.10g} zeta={z:.10g} eta={e:.10g}")
    return EXIT_OK


def cmd_scan(args) -> int:
    sc = scenario_from_args(args, need_right=False)
    out = _out(args)
    rho_max, u_min, u_max = args.window or DEFAULT_WINDOW
    n = args.grid or DEFAULT_GRID
    scans = []
    for t in _times(args, [0.0]):
        s = scan_overcompressive(sc.left, sc.params, t, (rho_max / n, rho_max), (u_min, u_max), n)
        scans.append(s)
        print(f"t={t:g}: {int(s.mask.sum())} of {s.mask.size} overcompressive")
    io.write_scan(out / "scan.csv", scans)
    _write(out / "scan.svg", svg.scan_svg(io.read_table(out / "scan.csv")))
    return EXIT_OK


def cmd_case_id(args) -> int:
    sc = scenario_from_args(args, need_right=False)
    cid = case_id(sc.params, sc.left, 0.0)
    parts = [f"Case {cid.index}"]
    horizon = args.horizon if args.horizon is not None else sc.t_end
    for t, idx in case_transitions(sc.params, sc.left, horizon):
        parts.append(f"transition to Case {idx} at t={t:.12g}")
    print("; ".join(parts))
    return EXIT_OK


def cmd_catalog(args) -> int:
    scs = cat.catalog()
    if args.out:
        out = _out(args)
        for sc in scs:
            _write(out / f"{sc.name}.cfg", render_config(sc))
    for sc in scs:
        print(f"{sc.name:32s} {sc.caption}")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    """Randomized flux/eigen and Rankine-Hugoniot spot checks."""
    from .model import eigenvalues, eigenvectors, flux
    from .waves import SHOCK, a_wave, rh_residual

    rng = np.random.default_rng(args.seed)
    worst_eig = worst_rh = 0.0
    for a in (-1.5, -1.0, -0.5, 0.5):
        p = SystemParams(a, 5.0)
        for _ in range(args.samples):
            s = State(rng.uniform(0.2, 12.0), rng.uniform(-8.0, 8.0))
            if abs(s.rho - p.rho_bar) < 1e-3:
                continue
            # directional derivatives of G = flux and H = (rho, rho u) by central differences
            lam = eigenvalues(s, 0.0, p)
            for r, l in zip(eigenvectors(s, 0.0, p), (lam.lambda_a, lam.lambda_0)):
                h = 1e-6 / max(1.0, float(np.hypot(*r)))
                sp = State(s.rho + h * r[0], s.u_tilde + h * r[1])
                sm = State(s.rho - h * r[0], s.u_tilde - h * r[1])
                dG = (np.array(flux(sp, 0.0, p)) - np.array(flux(sm, 0.0, p))) / (2 * h)
                dH = np.array([r[0], r[0] * s.u_tilde + s.rho * r[1]])
                worst_eig = max(worst_eig, float(np.max(np.abs(dG - l * dH))) / max(1.0, float(np.max(np.abs(dG)))))
            w = a_wave(s, rng.uniform(0.2, 12.0), 0.0, p)
            if w.kind == SHOCK:
                worst_rh = max(worst_rh, float(np.max(np.abs(rh_residual(w.left, w.right, w.speed, 0.0, p)))))
    rec = {"seed": args.seed, "eigen_residual": worst_eig, "rh_residual": worst_rh,
           "ok": worst_eig < 1e-5 and worst_rh < 1e-8}
    print(json.dumps(rec, sort_keys=True))
    return EXIT_OK if rec["ok"] else EXIT_NUMERIC


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file, or catalog:NAME")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--time", type=float, action="append", help="evaluation time (repeatable)")
    common.add_argument("--grid", type=int, help="cells (solve) or points per axis (maps)")
    common.add_argument("--window", type=_window, help="RHO_MAX,U_MIN,U_MAX")
    common.add_argument("--strict", action="store_true", help="exit 4 on unclassifiable data")
    common.add_argument("--no-renormalize", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--a-exp", type=float)
    common.add_argument("--rho-bar", type=float, default=None)
    common.add_argument("--source", type=_pieces, help="piecewise a(t) as START:VALUE,...")
    common.add_argument("--left", type=_pair, help="RHO,U_TILDE")
    common.add_argument("--right", type=_pair, help="RHO,U_TILDE")
    common.add_argument("--t-end", type=float)

    ap = argparse.ArgumentParser(prog="kkriemann", description="Riemann problems for a crowd-limited flux system.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="run the LLF solver").set_defaults(func=cmd_solve)
    sub.add_parser("regions", parents=[common], help="state-space region map").set_defaults(func=cmd_regions)
    sub.add_parser("curves", parents=[common], help="sampled wave curves").set_defaults(func=cmd_curves)
    d = sub.add_parser("delta", parents=[common], help="integrate a delta-shock trajectory")
    d.add_argument("--dt", type=float, default=1e-3)
    d.set_defaults(func=cmd_delta)
    sub.add_parser("scan", parents=[common], help="overcompressive right states").set_defaults(func=cmd_scan)
    c = sub.add_parser("case-id", parents=[common], help="case index and transition times")
    c.add_argument("--horizon", type=float)
    c.set_defaults(func=cmd_case_id)
    sub.add_parser("catalog", parents=[common], help="list or write built-in scenarios").set_defaults(func=cmd_catalog)
    s = sub.add_parser("selfcheck", parents=[common], help="randomized consistency checks")
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_selfcheck)
    return ap


def _error(code: int, kind: str, message: str, **extra) -> int:
    rec = {"error": kind, "message": message, "exit_code": code, **extra}
    print(json.dumps(rec, sort_keys=True, default=str), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        return _error(EXIT_INPUT, "UsageError", "invalid command line")
    args.rho_bar_set = args.rho_bar is not None
    if args.rho_bar is None:
        args.rho_bar = 5.0
    try:
        return args.func(args)
    except CliError as exc:
        return _error(exc.code, exc.kind, str(exc), **exc.extra)
    except ParseError as exc:
        return _error(EXIT_INPUT, "ParseError", str(exc), line=exc.line)
    except ValidationError as exc:
        return _error(EXIT_INPUT, "ValidationError", str(exc))
    except Unclassifiable as exc:
        return _error(EXIT_UNCLASSIFIABLE, "Unclassifiable", str(exc), diagnostics=exc.diagnostics)
    except RiemannError as exc:
        return _error(EXIT_NUMERIC, type(exc).__name__, str(exc))
    except FloatingPointError as exc:
        return _error(EXIT_NUMERIC, "FloatingPointError", str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
