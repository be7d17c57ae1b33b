"""Two-layer dialogue management."""
from .context import DialogueContext, InteractionTemplate, PendingClarification, RelaxOption, template
from .engine import DialogueEngine, StateDecision, TurnResult, select_informative_field
from .states import (
    DECISION_ORDER,
    LowerState,
    POST_QUERY_STATES,
    PRE_QUERY_STATES,
    SUB_STATE_OWNERS,
    TEMPLATE_ACTS,
    UpperState,
)

__all__ = [
    "DECISION_ORDER",
    "DialogueContext",
    "DialogueEngine",
    "InteractionTemplate",
    "LowerState",
    "POST_QUERY_STATES",
    "PRE_QUERY_STATES",
    "PendingClarification",
    "RelaxOption",
    "StateDecision",
    "SUB_STATE_OWNERS",
    "TEMPLATE_ACTS",
    "TurnResult",
    "UpperState",
    "select_informative_field",
    "template",
]
