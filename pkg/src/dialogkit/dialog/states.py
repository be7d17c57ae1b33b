"""The two-layer dialogue state vocabulary.

Upper-layer states are domain independent and tried in a fixed order each
turn; the first nine need no database query, the last five classify the
result of exactly one query. Lower-layer states live inside sub-dialogues
owned by SUCCESS, DATABASE_CONFLICT, and MANY_MATCHES.
"""
from __future__ import annotations

from enum import Enum


class UpperState(str, Enum):
    INITIAL = "INITIAL"
    QUIT = "QUIT"
    META_QUERY = "META_QUERY"
    OUT_OF_BOUNDS = "OUT_OF_BOUNDS"
    STATUS_QUO = "STATUS_QUO"
    AMBIGUOUS = "AMBIGUOUS"
    INCONSISTENT = "INCONSISTENT"
    CORRECTION = "CORRECTION"
    MANDATORY_FIELDS = "MANDATORY_FIELDS"
    SUCCESS = "SUCCESS"
    DATABASE_CONFLICT = "DATABASE_CONFLICT"
    UNKNOWN_QUERY = "UNKNOWN_QUERY"
    FEW_MATCHES = "FEW_MATCHES"
    MANY_MATCHES = "MANY_MATCHES"


class LowerState(str, Enum):
    VERIFY_USER = "VERIFY_USER"
    SIDE_EFFECTS = "SIDE_EFFECTS"
    RELAX_CONSTRAINT = "RELAX_CONSTRAINT"
    CONFIRM_VALUE = "CONFIRM_VALUE"
    GET_CONSTRAINT = "GET_CONSTRAINT"


# Decision order of the upper layer; INITIAL is the resting state between
# queries, not a branch of this chain.
DECISION_ORDER = (
    UpperState.QUIT,
    UpperState.META_QUERY,
    UpperState.OUT_OF_BOUNDS,
    UpperState.STATUS_QUO,
    UpperState.AMBIGUOUS,
    UpperState.INCONSISTENT,
    UpperState.CORRECTION,
    UpperState.MANDATORY_FIELDS,
    UpperState.SUCCESS,
    UpperState.DATABASE_CONFLICT,
    UpperState.UNKNOWN_QUERY,
    UpperState.FEW_MATCHES,
    UpperState.MANY_MATCHES,
)

PRE_QUERY_STATES = frozenset(
    {
        UpperState.INITIAL,
        UpperState.QUIT,
        UpperState.META_QUERY,
        UpperState.OUT_OF_BOUNDS,
        UpperState.STATUS_QUO,
        UpperState.AMBIGUOUS,
        UpperState.INCONSISTENT,
        UpperState.CORRECTION,
        UpperState.MANDATORY_FIELDS,
    }
)

POST_QUERY_STATES = frozenset(
    {
        UpperState.SUCCESS,
        UpperState.DATABASE_CONFLICT,
        UpperState.UNKNOWN_QUERY,
        UpperState.FEW_MATCHES,
        UpperState.MANY_MATCHES,
    }
)

SUB_STATE_OWNERS = {
    LowerState.VERIFY_USER: UpperState.SUCCESS,
    LowerState.SIDE_EFFECTS: UpperState.SUCCESS,
    LowerState.RELAX_CONSTRAINT: UpperState.DATABASE_CONFLICT,
    LowerState.CONFIRM_VALUE: UpperState.DATABASE_CONFLICT,
    LowerState.GET_CONSTRAINT: UpperState.MANY_MATCHES,
}


TEMPLATE_ACTS = (
    "GREET",
    "GOODBYE",
    "HELP",
    "META_ANSWER",
    "NOTIFY_OOB",
    "NOTIFY_UNKNOWN_WORD",
    "REPEAT_LAST",
    "NO_NEW_INFO",
    "CLARIFY_AMBIGUITY",
    "NOTIFY_INCONSISTENT",
    "ACK_CORRECTION",
    "ASK_FIELD",
    "ASK_QUERY_TYPE",
    "REPORT_ANSWER",
    "ENUMERATE",
    "CONFIRM_FIELD",
    "RELAX_PROPOSAL",
    "VERIFY_PROMPT",
    "SIDE_EFFECT_NOTICE",
)

# Slots that must be present for each act (the renderer checks these).
REQUIRED_SLOTS = {
    "GREET": ("domain_label",),
    "GOODBYE": (),
    "HELP": ("text",),
    "META_ANSWER": ("topic_label", "values"),
    "NOTIFY_OOB": ("term", "explanation", "reentry_hint"),
    "NOTIFY_UNKNOWN_WORD": ("word",),
    "REPEAT_LAST": (),
    "NO_NEW_INFO": ("cause",),
    "CLARIFY_AMBIGUITY": ("kind", "term", "candidates"),
    "NOTIFY_INCONSISTENT": ("message",),
    "ACK_CORRECTION": ("field_label", "old_value", "new_value"),
    "ASK_FIELD": ("field", "field_label"),
    "ASK_QUERY_TYPE": ("options",),
    "REPORT_ANSWER": ("count",),
    "ENUMERATE": ("count", "rows"),
    "CONFIRM_FIELD": ("field_label", "value"),
    "RELAX_PROPOSAL": ("field_label", "window_text", "found_count"),
    "VERIFY_PROMPT": ("action_label", "attempt"),
    "SIDE_EFFECT_NOTICE": ("notice",),
}
