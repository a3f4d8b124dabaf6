"""Scenario: everything needed to pose and run one Riemann problem."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import FrozenSet

from .errors import ValidationError
from .model import State, SystemParams

OUTPUT_KINDS = frozenset({"profiles", "regions", "curves", "delta", "scan"})


@dataclass(frozen=True)
class Scenario:
    params: SystemParams
    left: State
    right: State
    t_end: float
    n_cells: int = 1000
    dx: float = 1.0
    cfl: float = 0.45
    blocks: int = 20
    renormalize: bool = True
    outputs: FrozenSet[str] = field(default_factory=lambda: frozenset({"profiles"}))
    name: str = ""
    caption: str = ""

    def __post_init__(self):
        if not 0 < self.cfl <= 0.5:
            raise ValidationError(f"cfl={self.cfl} violates 0 < cfl <= 0.5")
        if self.t_end < 0:
            raise ValidationError("t_end must be nonnegative")
        if self.n_cells < 3:
            raise ValidationError("grid needs at least 3 cells")
        if not self.dx > 0:
            raise ValidationError("dx must be positive")
        if self.blocks < 1:
            raise ValidationError("blocks must be at least 1")
        bad = set(self.outputs) - OUTPUT_KINDS
        if bad:
            raise ValidationError(f"unknown output kinds {sorted(bad)}")

    def with_(self, **kw) -> "Scenario":
        return replace(self, **kw)
