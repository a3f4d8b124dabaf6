"""Grid-refinement study used to confirm delta concentrations.

The cell width stays at 1 and the grid doubles in cell count.  For Riemann
data with zero forcing the solution depends on x/t only, so doubling both
the cell count and the final time is the same as halving dx on a fixed
physical window; that is what each level does.  With forcing the levels are
plain longer runs on wider grids.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import ValidationError
from ..model import State
from ..scenario import Scenario
from .core import simulate
from .extract import extract_wave_structure

GROWTH_FACTOR = 1.5


@dataclass(frozen=True)
class RefineLevel:
    n_cells: int
    t_end: float
    max_rho: float
    plateaus: Tuple[State, ...]
    sequence: Tuple[str, ...]


@dataclass(frozen=True)
class GrowthTable:
    levels: Tuple[RefineLevel, ...]

    @property
    def ratios(self) -> np.ndarray:
        peaks = np.array([lv.max_rho for lv in self.levels])
        return peaks[1:] / peaks[:-1]

    @property
    def delta_confirmed(self) -> bool:
        return bool(np.all(self.ratios >= GROWTH_FACTOR))

    def plateau_drift(self) -> float:
        """Largest relative change of matching plateaus between the last two levels."""
        a, b = self.levels[-2].plateaus, self.levels[-1].plateaus
        if len(a) != len(b):
            return float("inf")
        drift = 0.0
        for p, q in zip(a, b):
            drift = max(drift, abs(p.rho - q.rho) / max(abs(q.rho), 1e-12),
                        abs(p.u_tilde - q.u_tilde) / max(abs(q.u_tilde), 1e-12))
        return drift

    def rows(self) -> List[Tuple[int, float, float, float]]:
        ratios = [float("nan")] + list(self.ratios)
        return [(lv.n_cells, lv.t_end, lv.max_rho, r) for lv, r in zip(self.levels, ratios)]


def refine_study(scenario: Scenario, levels: int) -> GrowthTable:
    """Run ``levels`` doublings of the scenario and tabulate max rho and plateaus."""
    if levels < 2:
        raise ValidationError("refine_study needs at least two levels")
    out = []
    for k in range(levels):
        sc = scenario.with_(n_cells=scenario.n_cells * 2 ** k, t_end=scenario.t_end * 2 ** k)
        snap = simulate(sc).snapshots[-1]
        rep = extract_wave_structure(snap, sc.left, sc.right, sc.params)
        out.append(RefineLevel(sc.n_cells, sc.t_end, float(snap.rho.max()),
                               tuple(rep.plateaus), rep.sequence))
    return GrowthTable(tuple(out))
