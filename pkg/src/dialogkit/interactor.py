"""Turn interaction templates into user-facing text.

Rendering walks an ordered rule list: the domain pack's rules first, then the
framework defaults, first match wins. A rule may carry alternative outputs;
when prompt variation is enabled the variant is chosen by the seeded
generator, keyed on (seed, turn), so transcripts stay reproducible.
"""
from __future__ import annotations

import logging

from .data import read_data_file
from .dialog.context import InteractionTemplate
from .dialog.states import REQUIRED_SLOTS
from .errors import NoRuleMatched
from .rand import pick_variant
from .schema import DomainPack, RenderRule

log = logging.getLogger(__name__)

LIST_CAP = 10  # longer lists end with "and N more"

APOLOGY = "Sorry, something went wrong on my side. Please try that again."

_default_rules_cache: tuple[RenderRule, ...] | None = None


def default_rules() -> tuple[RenderRule, ...]:
    global _default_rules_cache
    if _default_rules_cache is None:
        from .schema import parse_render_rules_text

        text = read_data_file("default-render-rules.conf")
        _default_rules_cache = parse_render_rules_text(text, "<default-render-rules>")
    return _default_rules_cache


def rules_for(pack: DomainPack) -> tuple[RenderRule, ...]:
    """Domain rules prepended to the framework defaults."""
    return tuple(pack.render_rules) + default_rules()


def _matches(rule: RenderRule, template: InteractionTemplate) -> bool:
    if rule.act != template.act:
        return False
    for slot in rule.present:
        if not template.has(slot):
            return False
    for slot, expected in rule.equals:
        if str(template.slot(slot)) != expected:
            return False
    return True


def _expand_list(values, cap: int = LIST_CAP) -> list[str]:
    items = [str(v) for v in values]
    if len(items) > cap:
        extra = len(items) - cap
        items = items[:cap] + [f"and {extra} more"]
    return items


def _substitute(text: str, template: InteractionTemplate) -> str:
    out = []
    i = 0
    while i < len(text):
        if text[i] != "{":
            out.append(text[i])
            i += 1
            continue
        end = text.find("}", i)
        if end < 0:
            out.append(text[i:])
            break
        token = text[i + 1 : end]
        if ":" in token:
            mode, _, name = token.partition(":")
            values = template.slot(name)
            if values is None:
                raise KeyError(name)
            items = _expand_list(values)
            if mode == "list":
                out.append("\n".join(f"{n}. {item}" for n, item in enumerate(items, start=1)))
            elif mode == "join":
                out.append(", ".join(items))
            elif mode == "or":
                if len(items) == 1:
                    out.append(items[0])
                elif len(items) == 2:
                    out.append(f"{items[0]} or {items[1]}")
                else:
                    out.append(", ".join(items[:-1]) + f", or {items[-1]}")
            else:
                raise KeyError(token)
        else:
            value = template.slot(token)
            if value is None:
                raise KeyError(token)
            out.append(str(value))
        i = end + 1
    return "".join(out)


def render(
    template: InteractionTemplate,
    rules: tuple[RenderRule, ...],
    seed: int | None = None,
    turn: int = 0,
) -> str:
    """Render a template through the first matching rule.

    `seed=None` disables prompt variation: the rule's primary text is always
    used, which keeps regression transcripts byte-stable.
    """
    missing = [s for s in REQUIRED_SLOTS.get(template.act, ()) if not template.has(s)]
    if missing:
        log.error("template %s missing slots %s", template.act, missing)
        return APOLOGY
    for rule in rules:
        if not _matches(rule, template):
            continue
        outputs = (rule.output, *rule.variants)
        if seed is not None and len(outputs) > 1:
            text = outputs[pick_variant(seed, turn, len(outputs))]
        else:
            text = outputs[0]
        try:
            return _substitute(text, template).replace("\\n", "\n")
        except KeyError as exc:
            log.error("rule for %s references missing slot %s", template.act, exc)
            return APOLOGY
    log.error("no rule matched act %s", template.act)
    raise NoRuleMatched(template.act)


def render_or_apologize(template, rules, seed=None, turn=0) -> str:
    try:
        return render(template, rules, seed=seed, turn=turn)
    except NoRuleMatched:
        return APOLOGY


def help_text(state, expected_field: str | None, pack: DomainPack) -> str:
    """Context-sensitive help: (state, field) key, then state, then global."""
    state_name = getattr(state, "value", state) or ""
    field_name = expected_field or ""
    entries = pack.help_entries
    for want_state, want_field in ((state_name, field_name), (state_name, ""), ("", "")):
        for entry in entries:
            if entry.state == want_state and entry.field == want_field:
                return entry.text
    return "You can ask me questions, correct values, or say quit to finish."
