"""CSV tables written with 17 significant digits so floats survive a round trip."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

PROFILE_COLUMNS = ("t", "x", "xt", "rho", "u_tilde", "u_phys")
REGION_COLUMNS = ("rho", "u_tilde", "region", "subregion")
TRAJECTORY_COLUMNS = ("t", "x", "zeta", "eta")
CURVE_COLUMNS = ("curve", "rho", "u_tilde")
SCAN_COLUMNS = ("t", "rho", "u_tilde", "overcompressive")

# columns kept as text when reading back
TEXT_COLUMNS = frozenset({"region", "subregion", "curve"})


def fmt(value) -> str:
    if isinstance(value, (str, np.str_)):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return "%.17g" % value


def write_table(path, columns: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_table(path) -> Dict[str, np.ndarray]:
    """Columns by name; numeric columns as float arrays, label columns as str."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty table")
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        out[name] = np.array(col, dtype=str) if name in TEXT_COLUMNS else np.array(col, dtype=float)
    return out


def profile_rows(snapshots) -> List[tuple]:
    rows = []
    for s in snapshots:
        xt = s.xt
        for j in range(s.x.size):
            rows.append((s.t, s.x[j], xt[j], s.rho[j], s.u_tilde[j], s.u_phys[j]))
    return rows


def write_profiles(path, snapshots) -> Path:
    return write_table(path, PROFILE_COLUMNS, profile_rows(snapshots))


def write_region_grid(path, rmap) -> Path:
    rows = []
    for k, u in enumerate(rmap.u_tilde):
        for i, r in enumerate(rmap.rho):
            rows.append((r, u, rmap.labels[k, i], rmap.subregions[k, i]))
    return write_table(path, REGION_COLUMNS, rows)


def write_curves(path, curves: Dict[str, tuple]) -> Path:
    """One row per sampled point; ``curves`` maps a name to (rho, u_tilde)."""
    rows = []
    for name in sorted(curves):
        rho, u = curves[name]
        rows.extend((name, r, v) for r, v in zip(np.asarray(rho), np.asarray(u)))
    return write_table(path, CURVE_COLUMNS, rows)


def curves_from_table(table: Dict[str, np.ndarray]) -> Dict[str, tuple]:
    out = {}
    for name in dict.fromkeys(table["curve"].tolist()):
        sel = table["curve"] == name
        out[name] = (table["rho"][sel], table["u_tilde"][sel])
    return out


def write_trajectory(path, traj) -> Path:
    return write_table(path, TRAJECTORY_COLUMNS, zip(traj.times, traj.x, traj.zeta, traj.eta))


def write_scan(path, scans) -> Path:
    rows = []
    for sc in scans:
        for k, u in enumerate(sc.u_tilde):
            for i, r in enumerate(sc.rho):
                rows.append((sc.t, r, u, bool(sc.mask[k, i])))
    return write_table(path, SCAN_COLUMNS, rows)
