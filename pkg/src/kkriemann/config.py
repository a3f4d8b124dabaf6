"""Flat ``section.key = value`` scenario files.

    # Case 1, Region I_a
    system.a_exp = -1.5
    system.rho_bar = 5
    source.pieces = 0:0.1, 30:0
    initial.left_rho = 3
    ...

Blank lines and ``#`` comments are ignored.  Arrays are comma lists;
source pieces are ``start:value`` pairs.
"""
from __future__ import annotations

from typing import Dict, Tuple

from .errors import ParseError, ValidationError
from .model import SourceTerm, State, SystemParams
from .scenario import OUTPUT_KINDS, Scenario

# key -> (converter name, required)
KEYS: Dict[str, Tuple[str, bool]] = {
    "system.a_exp": ("float", True),
    "system.rho_bar": ("float", True),
    "source.pieces": ("pieces", False),
    "initial.left_rho": ("float", True),
    "initial.left_u": ("float", True),
    "initial.right_rho": ("float", True),
    "initial.right_u": ("float", True),
    "grid.n_cells": ("int", False),
    "grid.dx": ("float", False),
    "run.t_end": ("float", True),
    "run.cfl": ("float", False),
    "run.blocks": ("int", False),
    "run.renormalize": ("bool", False),
    "output.kinds": ("kinds", False),
    "meta.name": ("str", False),
    "meta.caption": ("str", False),
}


def _pieces(text: str):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        start, sep, value = item.partition(":")
        if not sep:
            raise ValueError(f"source piece {item!r} is not start:value")
        out.append((float(start), float(value)))
    return tuple(out)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _kinds(text: str):
    kinds = frozenset(k.strip() for k in text.split(",") if k.strip())
    unknown = kinds - OUTPUT_KINDS
    if unknown:
        raise ValueError(f"unknown output kinds {sorted(unknown)}")
    return kinds


_CONVERT = {"float": float, "int": int, "str": str, "bool": _bool,
            "pieces": _pieces, "kinds": _kinds}


def parse_entries(text: str) -> Dict[str, object]:
    """Raw key/value pairs with line-numbered errors; no scenario checks."""
    values: Dict[str, object] = {}
    seen: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError("expected 'section.key = value'", lineno)
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        kind, _ = KEYS[key]
        try:
            values[key] = _CONVERT[kind](value)
        except ValueError as exc:
            raise ParseError(f"{key}: {exc}", lineno) from None
        seen[key] = lineno
    if not values:
        raise ParseError("configuration is empty", 1)
    return values


def parse_config(text: str) -> Scenario:
    """Scenario from config text; defaults cfl=0.45, dx=1, blocks=20."""
    v = parse_entries(text)
    missing = [k for k, (_, req) in KEYS.items() if req and k not in v]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")
    source = SourceTerm(v["source.pieces"]) if "source.pieces" in v else SourceTerm()
    params = SystemParams(v["system.a_exp"], v["system.rho_bar"], source)
    left = State(v["initial.left_rho"], v["initial.left_u"])
    right = State(v["initial.right_rho"], v["initial.right_u"])
    kw = {}
    for key, field_name in (("grid.n_cells", "n_cells"), ("grid.dx", "dx"), ("run.cfl", "cfl"),
                            ("run.blocks", "blocks"), ("run.renormalize", "renormalize"),
                            ("output.kinds", "outputs"), ("meta.name", "name"),
                            ("meta.caption", "caption")):
        if key in v:
            kw[field_name] = v[key]
    return Scenario(params, left, right, t_end=v["run.t_end"], **kw)


def render_config(sc: Scenario) -> str:
    """Inverse of ``parse_config``; floats are written with repr so they round-trip."""
    pieces = ", ".join(f"{s!r}:{val!r}" for s, val in sc.params.source.pieces)
    lines = []
    if sc.name:
        lines.append(f"meta.name = {sc.name}")
    if sc.caption:
        lines.append(f"meta.caption = {sc.caption}")
    lines += [
        f"system.a_exp = {sc.params.a_exp!r}",
        f"system.rho_bar = {sc.params.rho_bar!r}",
        f"source.pieces = {pieces}",
        f"initial.left_rho = {sc.left.rho!r}",
        f"initial.left_u = {sc.left.u_tilde!r}",
        f"initial.right_rho = {sc.right.rho!r}",
        f"initial.right_u = {sc.right.u_tilde!r}",
        f"grid.n_cells = {sc.n_cells}",
        f"grid.dx = {sc.dx!r}",
        f"run.t_end = {sc.t_end!r}",
        f"run.cfl = {sc.cfl!r}",
        f"run.blocks = {sc.blocks}",
        f"run.renormalize = {'true' if sc.renormalize else 'false'}",
        f"output.kinds = {', '.join(sorted(sc.outputs))}",
    ]
    return "\n".join(lines) + "\n"
