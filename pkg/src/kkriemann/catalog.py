"""Named scenarios: every captioned zero-source panel plus the transition studies.

Panel captions are stored as wave sequences in the short notation used by
the figures (``S_a``, ``R_a``, ``C_0``, ``C_a``, ``V``, ``S_delta``).
"""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from .model import SourceTerm, State, SystemParams, eigenvalues
from .scenario import Scenario

RHO_BAR = 5.0
LEFT_NEG = (3.0, -3.0)
LEFT_POS = (3.0, 3.0)

# case number -> (a_exp, left state)
CASE_DATA: Dict[int, Tuple[float, Tuple[float, float]]] = {
    1: (-1.5, LEFT_NEG), 4: (-1.5, LEFT_POS),
    7: (-1.0, LEFT_NEG), 10: (-1.0, LEFT_POS),
    13: (-0.5, LEFT_NEG), 16: (-0.5, LEFT_POS),
    19: (0.5, LEFT_NEG), 22: (0.5, LEFT_POS),
}

# (case, right state, region label, caption sequence)
PANELS: List[Tuple[int, Tuple[float, float], str, Tuple[str, ...]]] = [
    (1, (2, -5), "Ia", ("S_a", "C_0")),
    (1, (7, -2), "IIa", ("R_a", "C_0")),
    (1, (9, -9), "IV", ("R_a", "S_delta")),
    (1, (4, 5), "VI", ("R_a", "C_0", "R_a")),
    (4, (7, 5), "I0", ("C_0", "S_a")),
    (4, (2, 5), "II0", ("C_0", "R_a")),
    (4, (9, -8), "IV", ("S_delta",)),
    (4, (4, -5), "V", ("C_0", "V", "C_0")),
    (7, (9, -9), "IV", ("S_delta",)),
    (7, (6, 4), "VI", ("C_a", "C_0", "C_a")),
    (7, (2, -5), "IIIa", ("C_a", "C_0")),
    (7, (6, -4), "IIIa", ("C_a", "C_0")),
    (10, (7, 5), "III0", ("C_0", "C_a")),
    (10, (7, -2), "V", ("C_0", "V", "C_a", "C_0")),
    (10, (9, -9), "IV", ("S_delta",)),
    (13, (7, -2), "Ia", ("S_a", "C_0")),
    (13, (2, -5), "IIa", ("R_a", "C_0")),
    (13, (9, -9), "IV", ("S_delta",)),
    (13, (7, 5), "VI", ("S_a", "C_0", "R_a")),
    (16, (2, 5), "I0", ("C_0", "S_a")),
    (16, (7, 5), "II0", ("C_0", "R_a")),
    (16, (9, -9), "IV", ("S_delta",)),
    (16, (7, -2), "V", ("C_0", "V", "S_a", "C_0")),
    (19, (2, -5), "I0", ("C_0", "S_a")),
    (19, (7, -5), "II0", ("C_0", "R_a")),
    (19, (9, 9), "IV", ("S_delta",)),
    (19, (7, 2), "V", ("C_0", "V", "S_a", "C_0")),
    (22, (7, 5), "Ia", ("S_a", "C_0")),
    (22, (2, 4), "IIa", ("R_a", "C_0")),
    (22, (1, 5), "V", ("R_a", "V", "C_0")),
    (22, (4, -4), "VI", ("S_a", "C_0", "S_a")),
]

# name -> (case, a(t), right state, t_end)
TRANSITIONS = {
    "case01_to_case04": (1, 0.1, (2.0, -5.0), 60.0),
    "case13_to_case16": (13, 0.1, (9.0, -9.0), 60.0),
    "case07_to_case10_to_case10": (7, 0.1, (2.0, -5.0), 80.0),
    "case19_to_case22": (19, 0.05, (7.0, 2.0), 120.0),
    "case22_to_case19_to_case19": (22, -0.01, (7.0, 5.0), 600.0),
}

# overcompressive scan parameter sets: name -> (a_exp, a(t), rho_bar, left, times)
SCAN_SETS = {
    "case18_scan": (-0.5, 0.1, 3.0, (5.0, 4.0), (0.0, 3.0, 6.0, 9.0)),
    "case13_scan": (-0.5, 0.1, 5.0, (3.0, -4.0), (0.0, 20.0, 40.0, 50.0)),
    "case19_scan": (0.5, 0.1, 5.0, (3.0, -4.0), (0.0, 15.0, 30.0, 45.0)),
}

# state-space figures: case -> (a_exp, rho_bar, left, window (rho_max, u_min, u_max), regions)
FIGURE_MAPS: Dict[int, Tuple[float, float, Tuple[float, float], Tuple[float, float, float], frozenset]] = {
    1: (-1.5, 6.0, (4.0, -3.0), (15.0, -10.0, 10.0), frozenset({"I_a", "II_a", "IV_a", "VI"})),
    10: (-1.0, 6.0, (4.0, 3.0), (15.0, -10.0, 10.0),
         frozenset({"III_0", "IV", "V_{C0VC0}", "V_{C0VCaC0}"})),
}

PANEL_CELLS = 2000
DELTA_CELLS = 16000
VACUUM_CELLS = 2000


def _nice(x: float) -> float:
    """Round down to two significant digits."""
    k = math.floor(math.log10(x)) - 1
    return float(f"{math.floor(x / 10 ** k)}e{k}")


def fan_speed(params: SystemParams, left: State, right: State) -> float:
    """Largest characteristic speed among the data and their rho_bar projections."""
    probes = [left, right, State(params.rho_bar, left.u_tilde), State(params.rho_bar, right.u_tilde)]
    top = 0.0
    for s in probes:
        e = eigenvalues(s, 0.0, params)
        top = max(top, abs(e.lambda_a), abs(e.lambda_0))
    return top


def panel_name(case: int, label: str, taken: set) -> str:
    base = f"case{case:02d}_region_{label}"
    name, k = base, 2
    while name in taken:
        name = f"{base}_{k}"
        k += 1
    return name


def _panel_scenario(case, right, label, seq, name) -> Scenario:
    a, left = CASE_DATA[case]
    params = SystemParams(a, RHO_BAR)
    L, R = State(*left), State(*map(float, right))
    n = {"IV": DELTA_CELLS, "V": VACUUM_CELLS}.get(label, PANEL_CELLS)
    t_end = _nice(n / (3.2 * fan_speed(params, L, R)))
    return Scenario(params, L, R, t_end=t_end, n_cells=n, blocks=20,
                    name=name, caption=" + ".join(seq))


def panels() -> List[Scenario]:
    out, taken = [], set()
    for case, right, label, seq in PANELS:
        name = panel_name(case, label, taken)
        taken.add(name)
        out.append(_panel_scenario(case, right, label, seq, name))
    return out


def transitions() -> List[Scenario]:
    out = []
    for name, (case, a_t, right, t_end) in TRANSITIONS.items():
        a, left = CASE_DATA[case]
        params = SystemParams(a, RHO_BAR, SourceTerm.constant(a_t))
        out.append(Scenario(params, State(*left), State(*right), t_end=t_end,
                            n_cells=PANEL_CELLS, blocks=20, name=name))
    return out


def catalog() -> List[Scenario]:
    return panels() + transitions()


def lookup(name: str) -> Optional[Scenario]:
    for sc in catalog():
        if sc.name == name:
            return sc
    return None


def caption_sequence(scenario: Scenario) -> Tuple[str, ...]:
    return tuple(s.strip() for s in scenario.caption.split("+")) if scenario.caption else ()
