"""Schema-driven, mixed-initiative dialogue management for information-access
tasks: typed-text understanding, a two-layer dialogue state manager, query
execution against a local table store or a web form, and template rendering.
"""
from .dialog import DialogueContext, DialogueEngine, LowerState, StateDecision, UpperState
from .errors import DialogkitError
from .schema import DomainPack, load_domain_pack, resolve_user_term

__version__ = "0.1.0"

__all__ = [
    "DialogkitError",
    "DialogueContext",
    "DialogueEngine",
    "DomainPack",
    "LowerState",
    "StateDecision",
    "UpperState",
    "load_domain_pack",
    "resolve_user_term",
    "__version__",
]
