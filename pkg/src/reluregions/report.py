"""Census reports: per-definition counts with provenance."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFINITIONS = (1, 2, 3, 4, 5, 6)
NOT_COMPUTED = "not computed"


@dataclass
class DefinitionEntry:
    value: int | None
    method: str
    exact: bool = True
    note: str = ""

    @property
    def computed(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        out = {"value": self.value if self.computed else NOT_COMPUTED, "method": self.method, "exact": self.exact}
        if self.note:
            out["note"] = self.note
        return out


def not_computed(note: str) -> DefinitionEntry:
    return DefinitionEntry(None, "none", False, note)


@dataclass
class CensusReport:
    """Region counts keyed by definition id (1..6) plus enumeration statistics."""

    entries: dict[int, DefinitionEntry] = field(default_factory=dict)
    patterns_visited: int = 0
    lps_solved: int = 0
    max_coefficient_size: int = 0
    coefficient_bound: int | None = None

    def __getitem__(self, definition: int) -> int | None:
        entry = self.entries.get(definition)
        return entry.value if entry else None

    def set(self, definition: int, value: int | None, method: str, exact: bool = True, note: str = ""):
        self.entries[definition] = DefinitionEntry(value, method, exact, note)

    def hierarchy_holds(self) -> bool:
        """R6 <= R4 <= R2 <= R1 over whichever of these are exact."""
        chain = [self.entries.get(d) for d in (6, 4, 2, 1)]
        vals = [e.value for e in chain if e is not None and e.computed and e.exact]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_dict(self) -> dict:
        return {
            "counts": {str(d): self.entries[d].to_dict() for d in sorted(self.entries)},
            "stats": {
                "patterns_visited": self.patterns_visited,
                "lps_solved": self.lps_solved,
                "max_coefficient_size": self.max_coefficient_size,
                "coefficient_bound": self.coefficient_bound,
            },
        }
