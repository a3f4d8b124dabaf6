"""Machine-readable record of one solver run."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple


@dataclass
class RunSummary:
    name: str
    case_id: str
    region: str
    analytic_sequence: Tuple[str, ...]
    extracted_sequence: Tuple[str, ...]
    middle_states: List[Optional[Tuple[float, float]]]
    extracted_plateaus: List[Tuple[float, float]]
    delta_trajectory: Optional[str] = None
    manifest: Dict[str, str] = field(default_factory=dict)
    steps: int = 0
    cfl_max: float = 0.0

    @property
    def sequences_agree(self) -> bool:
        return tuple(self.analytic_sequence) == tuple(self.extracted_sequence)

    def to_json(self) -> str:
        d = asdict(self)
        d["sequences_agree"] = self.sequences_agree
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    def missing_files(self, root) -> List[str]:
        root = Path(root)
        return [p for p in self.manifest.values() if not (root / p).exists()]

    @classmethod
    def from_json(cls, text: str) -> "RunSummary":
        d = json.loads(text)
        d.pop("sequences_agree", None)
        d["analytic_sequence"] = tuple(d["analytic_sequence"])
        d["extracted_sequence"] = tuple(d["extracted_sequence"])
        d["middle_states"] = [None if m is None else tuple(m) for m in d["middle_states"]]
        d["extracted_plateaus"] = [tuple(p) for p in d["extracted_plateaus"]]
        return cls(**d)
