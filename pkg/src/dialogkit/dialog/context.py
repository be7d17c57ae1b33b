"""The dialogue frame: per-field bindings plus everything the manager needs
to carry between turns."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..nlu.types import FieldBinding
from .states import LowerState, UpperState


@dataclass(frozen=True)
class InteractionTemplate:
    """Language-neutral feedback record; the interactor renders it to text."""

    act: str
    slots: tuple[tuple[str, object], ...] = ()

    def slot(self, name: str, default=None):
        for key, value in self.slots:
            if key == name:
                return value
        return default

    def has(self, name: str) -> bool:
        return any(key == name for key, _ in self.slots)


def template(act: str, **slots) -> InteractionTemplate:
    return InteractionTemplate(act=act, slots=tuple(slots.items()))


@dataclass(frozen=True)
class PendingClarification:
    kind: str  # lexical | class | field | correction
    term: str
    options: tuple[tuple[str, str, object], ...]  # (label, semantic class, value)


@dataclass(frozen=True)
class RelaxOption:
    field: str
    window: int


@dataclass
class DialogueContext:
    bindings: dict[str, FieldBinding] = field(default_factory=dict)
    query_type: str | None = None
    upper_state: UpperState = UpperState.INITIAL
    sub_state: LowerState | None = None
    expected_field: str | None = None
    last_template: InteractionTemplate | None = None
    pending_confirmation: tuple[str, object] | None = None
    turn_index: int = 0
    candidate_rows_count: int | None = None
    # Sub-dialogue and follow-up bookkeeping.
    pending_clarification: PendingClarification | None = None
    windows: dict[str, int] = field(default_factory=dict)  # field -> minutes
    pending_relax: RelaxOption | None = None
    relax_offered: dict[str, int] = field(default_factory=dict)  # highest window proposed
    relax_found: int = 0
    success_row: tuple | None = None
    success_age: int = -1  # -1 = no recent success
    verify_action: str | None = None
    verify_attempts: int = 0
    closed: bool = False

    def clone(self) -> "DialogueContext":
        out = replace(self)
        out.bindings = dict(self.bindings)
        out.windows = dict(self.windows)
        out.relax_offered = dict(self.relax_offered)
        return out

    def unconfirmed_bindings(self) -> list[FieldBinding]:
        return [b for b in self.bindings.values() if b.status != "confirmed"]

    def snapshot(self) -> dict:
        """Field -> value map for transcripts and the debug panel."""
        return {
            name: {"value": b.value, "status": b.status, "approx": b.approx}
            for name, b in self.bindings.items()
        }
