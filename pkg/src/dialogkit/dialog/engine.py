"""The two-layer dialogue manager.

Each turn is folded into the context, then classified into exactly one
upper-layer state, trying the states in their fixed order: QUIT, META_QUERY,
OUT_OF_BOUNDS, STATUS_QUO, AMBIGUOUS, INCONSISTENT, CORRECTION,
MANDATORY_FIELDS, and then the post-query states decided by one back-end
query: SUCCESS, DATABASE_CONFLICT, UNKNOWN_QUERY, FEW_MATCHES, MANY_MATCHES.
An active sub-dialogue (confirmation, relaxation, constraint seeking, user
verification) is consulted before the upper chain.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from ..interactor import help_text
from ..nlu.acts import detect_acts
from ..nlu.chunker import chunk
from ..nlu.extract import MergeOutcome, extract, merge
from ..nlu.taggers import DIGIT_WORDS, annotate
from ..nlu.types import ActReport, ExtractionResult, Token
from ..query import Querier, QueryConstraint, QueryResultSet, compile_constraints
from ..schema import ActionSpec, DomainPack
from .context import DialogueContext, InteractionTemplate, PendingClarification, RelaxOption, template
from .states import LowerState, SUB_STATE_OWNERS, UpperState
from .templates import (
    answer_phrases,
    fmt_value,
    fmt_window,
    pluralize,
    row_fields,
    row_line,
    subject_text,
)

log = logging.getLogger(__name__)

DEFAULT_FEW_THRESHOLD = 5

_AMBIGUITY_PRIORITY = {"lexical": 0, "class": 1, "field": 2}


@dataclass(frozen=True)
class StateDecision:
    state: UpperState
    sub_state: LowerState | None
    cause: str
    template: InteractionTemplate
    queried: bool
    match_count: int | None = None


@dataclass
class TurnResult:
    decision: StateDecision
    context: DialogueContext
    extraction: ExtractionResult
    query_count: int
    probe_count: int


def select_informative_field(candidate_rows, unbound_fields, schema) -> str:
    """Field whose answer is expected to shrink the candidate set the most.

    Minimizes the expected residual match count E(f) = sum(count_v^2) / N over
    the distribution of f's values among the candidate rows; ties go to the
    earlier field in schema order. Rows are mappings field name -> value.
    """
    if len(candidate_rows) < 2:
        raise ValueError("need at least two candidate rows")
    unbound = set(unbound_fields)
    if not unbound:
        raise ValueError("need at least one unbound field")
    n = len(candidate_rows)
    best_name = None
    best_e = None
    for spec in schema.fields:
        if spec.name not in unbound:
            continue
        counts: dict = {}
        for row in candidate_rows:
            v = row.get(spec.name)
            counts[v] = counts.get(v, 0) + 1
        e = sum(c * c for c in counts.values()) / n
        if best_e is None or e < best_e:
            best_name, best_e = spec.name, e
    if best_name is None:
        raise ValueError("no unbound field is a schema field")
    return best_name


class DialogueEngine:
    def __init__(self, pack: DomainPack, querier: Querier, few_threshold: int = DEFAULT_FEW_THRESHOLD):
        self.pack = pack
        self.querier = querier
        self.few_threshold = few_threshold
        self._query_count = 0
        self._probe_count = 0

    # ------------------------------------------------------------------ api

    def initial_context(self) -> DialogueContext:
        return DialogueContext()

    def greeting_template(self) -> InteractionTemplate:
        return template("GREET", domain_label=self.pack.schema.domain_label)

    def run_turn(self, context: DialogueContext, utterance: str) -> TurnResult:
        tokens, tags = annotate(utterance, self.pack)
        chunks = chunk(tokens, tags, self.pack)
        acts = detect_acts(tokens, tags, context, self.pack)
        extraction = extract(chunks, tags, self.pack, context, acts, tokens)
        decision, new_context = self.decide_state(context, extraction)
        return TurnResult(
            decision=decision,
            context=new_context,
            extraction=extraction,
            query_count=self._query_count,
            probe_count=self._probe_count,
        )

    def decide_state(self, context: DialogueContext, extraction: ExtractionResult):
        """Classify one turn; returns (StateDecision, new context).

        Raises QuerierUnavailable with the caller's context untouched when the
        back-end cannot be reached.
        """
        self._query_count = 0
        self._probe_count = 0

        pre = context.clone()
        pre.turn_index += 1
        work, outcome = merge(pre, extraction, self.pack)
        self._age_success(work, outcome.query_type_changed)

        decision = None
        if work.sub_state is not None:
            decision = self._step_subdialogue(work, extraction, outcome)
        if decision is None:
            decision = self._upper_chain(work, extraction, outcome)

        if decision.state == UpperState.OUT_OF_BOUNDS:
            # A rejected utterance must not update the frame; the user
            # resumes from where the dialogue stood.
            work = context.clone()
            work.turn_index = pre.turn_index
            self._age_success(work, False)

        work.last_template = decision.template
        self._finalize(work, decision)
        return decision, work

    def _age_success(self, work: DialogueContext, query_type_changed: bool) -> None:
        # A success keeps its query type and matched row for one follow-up turn.
        if work.sub_state in (LowerState.VERIFY_USER, LowerState.SIDE_EFFECTS):
            return  # the action sub-dialogue is still using the matched row
        if work.success_age >= 0:
            work.success_age += 1
            if work.success_age > 1:
                work.success_row = None
                work.success_age = -1
                if not query_type_changed:
                    work.query_type = None

    # ------------------------------------------------------------- plumbing

    def _dec(self, state, sub, cause, tmpl, queried=False, match_count=None) -> StateDecision:
        return StateDecision(
            state=state, sub_state=sub, cause=cause, template=tmpl, queried=queried, match_count=match_count
        )

    def _classify_query(self, constraints) -> QueryResultSet:
        self._query_count += 1
        return self.querier.run(constraints)

    def _probe_query(self, constraints) -> QueryResultSet:
        self._probe_count += 1
        return self.querier.run(constraints)

    def _finalize(self, work: DialogueContext, decision: StateDecision) -> None:
        state = decision.state
        if state == UpperState.QUIT:
            work.closed = True
            work.upper_state = UpperState.QUIT
        elif state in (UpperState.META_QUERY, UpperState.STATUS_QUO):
            pass  # overlay turns resume whatever was pending
        elif state == UpperState.OUT_OF_BOUNDS:
            work.upper_state = UpperState.INITIAL
        elif state == UpperState.SUCCESS and work.sub_state is None:
            work.upper_state = UpperState.INITIAL
        else:
            work.upper_state = state
        if work.sub_state is not None and SUB_STATE_OWNERS[work.sub_state] != work.upper_state:
            work.sub_state = None

    def _field_label(self, name: str) -> str:
        return self.pack.schema.field_by_name(name).label

    def _fmt_field_value(self, name: str, value) -> str:
        return fmt_value(value, self.pack.schema.field_by_name(name).semantic_class)

    def _ask_field_template(self, name: str, found_count: int | None = None) -> InteractionTemplate:
        spec = self.pack.schema.field_by_name(name)
        slots = {"field": name, "field_label": spec.label}
        if spec.prompt_text:
            slots["prompt"] = spec.prompt_text
        if found_count is not None:
            slots["found_count"] = found_count
        return template("ASK_FIELD", **slots)

    # -------------------------------------------------------- upper layer

    def _upper_chain(self, work, extraction, outcome) -> StateDecision:
        acts = extraction.acts
        schema = self.pack.schema

        if acts.quit:
            return self._dec(UpperState.QUIT, None, "quit", template("GOODBYE"))

        if acts.help or acts.meta_query:
            return self._meta(work, acts)

        if extraction.out_of_scope_hits:
            term, explanation = extraction.out_of_scope_hits[0]
            return self._dec(
                UpperState.OUT_OF_BOUNDS,
                None,
                "oob:out_of_scope",
                template(
                    "NOTIFY_OOB",
                    term=term,
                    explanation=explanation,
                    reentry_hint="You can still ask me anything within that coverage.",
                ),
            )
        if extraction.unknown_terms:
            word = extraction.unknown_terms[0]
            return self._dec(
                UpperState.OUT_OF_BOUNDS,
                None,
                "oob:unknown_word",
                template("NOTIFY_UNKNOWN_WORD", word=word),
            )

        if work.success_row is not None and work.sub_state is None:
            action = self._match_action(extraction)
            if action is not None:
                work.sub_state = LowerState.VERIFY_USER
                work.verify_action = action.name
                work.verify_attempts = 0
                return self._dec(
                    UpperState.SUCCESS,
                    LowerState.VERIFY_USER,
                    f"action:{action.name}",
                    template("VERIFY_PROMPT", action_label=action.label, attempt=1),
                )

        info = (
            outcome.carries_information(extraction)
            or outcome.correction_error is not None
        )
        if not info:
            return self._status_quo(work, acts)

        ambiguity = self._first_open_ambiguity(extraction, outcome)
        if ambiguity is not None:
            return self._ambiguous(work, ambiguity)

        violated = self._first_violated_rule(work)
        if violated is not None:
            return violated

        if outcome.correction is not None:
            name, old, new = outcome.correction
            return self._dec(
                UpperState.CORRECTION,
                None,
                "correction:applied",
                template(
                    "ACK_CORRECTION",
                    field_label=self._field_label(name),
                    old_value=self._fmt_field_value(name, old),
                    new_value=self._fmt_field_value(name, new),
                ),
            )
        if outcome.correction_error is not None:
            err = outcome.correction_error
            old = fmt_value(err.old_value, err.semantic_class)
            new = fmt_value(err.new_value, err.semantic_class)
            return self._dec(
                UpperState.CORRECTION,
                None,
                "correction:target_missing",
                template("CLARIFY_AMBIGUITY", kind="correction", term=old, candidates=(old, new)),
            )

        if work.success_row is not None and outcome.query_type_changed and not outcome.changed_fields:
            # "flight 472" ... "when does it arrive?": a fresh question about
            # the item just matched re-queries that row under the new type.
            return self._query_matched_row(work)

        missing = self._missing_mandatory(work)
        if missing is not None:
            work.expected_field = missing
            return self._dec(
                UpperState.MANDATORY_FIELDS,
                None,
                f"mandatory:{missing}",
                self._ask_field_template(missing),
            )

        return self._query_and_classify(work)

    def _query_matched_row(self, work) -> StateDecision:
        fields = row_fields(work.success_row, self.pack)
        constraints = [
            QueryConstraint(column=spec.db_column, op="eq", value=fields[spec.name])
            for spec in self.pack.schema.fields
            if spec.name in fields
        ]
        work.success_row = None
        work.success_age = -1
        result = self._classify_query(constraints)
        work.candidate_rows_count = result.count
        if result.count == 1:
            return self._success(work, result)
        # Duplicate rows or a changed dataset: report what came back.
        rows = tuple(row_line(row, self.pack) for row in result.rows)
        return self._dec(
            UpperState.FEW_MATCHES if result.count else UpperState.DATABASE_CONFLICT,
            None,
            f"few:{result.count}" if result.count else "conflict:no_relax",
            template("ENUMERATE", count=result.count, rows=rows)
            if result.count
            else template("REPORT_ANSWER", count=0),
            queried=True,
            match_count=result.count,
        )

    def _meta(self, work, acts: ActReport) -> StateDecision:
        if acts.meta_query and acts.meta_topic:
            values = self.pack.lexicon_values(acts.meta_topic)
            if values:
                return self._dec(
                    UpperState.META_QUERY,
                    work.sub_state,
                    f"meta:{acts.meta_topic}",
                    template(
                        "META_ANSWER",
                        topic=acts.meta_topic,
                        topic_label=pluralize(acts.meta_topic),
                        values=values,
                    ),
                )
        text = help_text(work.upper_state, work.expected_field, self.pack)
        return self._dec(
            UpperState.META_QUERY,
            work.sub_state,
            "meta:help",
            template(
                "HELP",
                text=text,
                state=work.upper_state.value,
                expected_field=work.expected_field or "",
            ),
        )

    def _status_quo(self, work, acts: ActReport) -> StateDecision:
        prompt = None
        if work.expected_field:
            spec = self.pack.schema.field_by_name(work.expected_field)
            prompt = spec.prompt_text or f"Please tell me the {spec.label}."
        if acts.silence:
            cause, slots = "status_quo:silence", {"cause": "silence"}
        elif acts.dont_know:
            cause, slots = "status_quo:dont_know", {"cause": "dont_know"}
        elif acts.repeat:
            tmpl = work.last_template or template("REPEAT_LAST")
            return self._dec(UpperState.STATUS_QUO, work.sub_state, "status_quo:repeat", tmpl)
        else:
            cause, slots = "status_quo:no_new_info", {"cause": "no_new_info"}
        if prompt:
            slots["prompt"] = prompt
        return self._dec(UpperState.STATUS_QUO, work.sub_state, cause, template("NO_NEW_INFO", **slots))

    def _first_open_ambiguity(self, extraction, outcome: MergeOutcome):
        candidates = [
            (_AMBIGUITY_PRIORITY[amb.kind], i, amb)
            for i, amb in enumerate(extraction.ambiguities)
            if i not in outcome.resolved
        ]
        base = len(extraction.ambiguities)
        candidates += [
            (_AMBIGUITY_PRIORITY[amb.kind], base + i, amb) for i, amb in enumerate(outcome.cascade)
        ]
        if not candidates:
            return None
        return min(candidates)[2]

    def _ambiguous(self, work, amb) -> StateDecision:
        if amb.kind == "field":
            display = tuple(self._field_label(name) for name in amb.candidates)
        elif amb.kind == "class":
            display = tuple(f"the {c}" for c in amb.candidates)
        else:
            display = amb.candidates
        work.pending_clarification = PendingClarification(kind=amb.kind, term=amb.term, options=amb.options)
        return self._dec(
            UpperState.AMBIGUOUS,
            work.sub_state,
            f"ambiguous:{amb.kind}",
            template("CLARIFY_AMBIGUITY", kind=amb.kind, term=amb.term, candidates=display),
        )

    def _first_violated_rule(self, work) -> StateDecision | None:
        for rule in self.pack.schema.consistency_rules:
            left = work.bindings.get(rule.left_field)
            right = work.bindings.get(rule.right_field)
            if left is None or right is None:
                continue
            if rule.relation == "not_equal":
                bad = left.value == right.value
            elif rule.relation == "less_than":
                bad = not (left.value < right.value)
            else:
                bad = not (left.value > right.value)
            if not bad:
                continue
            message = rule.message.format(
                left_field=self._field_label(rule.left_field),
                right_field=self._field_label(rule.right_field),
                left_value=self._fmt_field_value(rule.left_field, left.value),
                right_value=self._fmt_field_value(rule.right_field, right.value),
            )
            return self._dec(
                UpperState.INCONSISTENT,
                None,
                f"inconsistent:{rule.id}",
                template(
                    "NOTIFY_INCONSISTENT",
                    message=message,
                    left_field=rule.left_field,
                    right_field=rule.right_field,
                ),
            )
        return None

    def _missing_mandatory(self, work) -> str | None:
        """First missing field of the closest-to-complete mandatory set, or
        None when some set is fully bound."""
        best: tuple[int, int, str] | None = None
        for index, mset in enumerate(self.pack.schema.mandatory_sets):
            missing = [name for name in mset if name not in work.bindings]
            if not missing:
                return None
            key = (len(missing), index, missing[0])
            if best is None or key < best:
                best = key
        return best[2] if best else None

    def _match_action(self, extraction) -> ActionSpec | None:
        norms = [t.norm for t in extraction.tokens]
        for action in self.pack.schema.actions:
            for pattern in action.patterns:
                n = len(pattern)
                for i in range(len(norms) - n + 1):
                    if tuple(norms[i : i + n]) == pattern:
                        return action
        return None

    # --------------------------------------------------------- query layer

    def _query_and_classify(self, work) -> StateDecision:
        # A fresh classification closes any success follow-up window; the
        # query type stays, since it is driving this very query.
        work.success_row = None
        work.success_age = -1
        constraints = compile_constraints(work, self.pack)
        result = self._classify_query(constraints)
        work.candidate_rows_count = result.count
        count = result.count
        if count == 1:
            return self._success(work, result)
        if count == 0:
            return self._conflict(work)
        if work.query_type is None:
            options = tuple(qt.label for qt in self.pack.schema.query_types)
            return self._dec(
                UpperState.UNKNOWN_QUERY,
                None,
                "unknown_query",
                template("ASK_QUERY_TYPE", options=options, found_count=count),
                queried=True,
                match_count=count,
            )
        if count <= self.few_threshold:
            rows = tuple(row_line(row, self.pack) for row in result.rows)
            return self._dec(
                UpperState.FEW_MATCHES,
                None,
                f"few:{count}",
                template("ENUMERATE", count=count, rows=rows),
                queried=True,
                match_count=count,
            )
        return self._many(work, result)

    def _success(self, work, result: QueryResultSet) -> StateDecision:
        row = result.rows[0]
        tmpl = template(
            "REPORT_ANSWER",
            count=1,
            subject=subject_text(row, self.pack),
            answers=answer_phrases(row, self.pack, work.query_type),
        )
        # Reset: the query is completely processed; the query type and the
        # matched row survive for one follow-up turn.
        work.bindings.clear()
        work.windows.clear()
        work.expected_field = None
        work.pending_confirmation = None
        work.pending_clarification = None
        work.pending_relax = None
        work.relax_offered.clear()
        work.sub_state = None
        work.success_row = row
        work.success_age = 0
        return self._dec(UpperState.SUCCESS, None, "success", tmpl, queried=True, match_count=1)

    def _conflict(self, work) -> StateDecision:
        unconfirmed = [name for name, b in work.bindings.items() if b.status != "confirmed"]
        if unconfirmed:
            name = unconfirmed[0]
            value = work.bindings[name].value
            work.pending_confirmation = (name, value)
            work.sub_state = LowerState.CONFIRM_VALUE
            return self._dec(
                UpperState.DATABASE_CONFLICT,
                LowerState.CONFIRM_VALUE,
                "conflict:confirm",
                template(
                    "CONFIRM_FIELD",
                    field=name,
                    field_label=self._field_label(name),
                    value=self._fmt_field_value(name, value),
                ),
                queried=True,
                match_count=0,
            )
        return self._relax_entry(work)

    def _relax_options(self, work) -> list[RelaxOption]:
        options: list[RelaxOption] = []
        for policy in self.pack.schema.relaxable_fields:
            binding = work.bindings.get(policy.field)
            if binding is None:
                continue
            floor = max(work.windows.get(policy.field, 0), work.relax_offered.get(policy.field, 0))
            for step in policy.widen_steps:
                if step > floor:
                    options.append(RelaxOption(field=policy.field, window=step))
        return options

    def _relax_entry(self, work) -> StateDecision:
        queue = self._relax_options(work)
        while queue:
            option = queue.pop(0)
            probe_ctx = work.clone()
            probe_ctx.windows[option.field] = option.window
            found = self._probe_query(compile_constraints(probe_ctx, self.pack))
            work.relax_offered[option.field] = option.window
            if found.count >= 1:
                work.pending_relax = option
                work.relax_found = found.count
                work.sub_state = LowerState.RELAX_CONSTRAINT
                binding = work.bindings[option.field]
                return self._dec(
                    UpperState.DATABASE_CONFLICT,
                    LowerState.RELAX_CONSTRAINT,
                    "conflict:relax",
                    template(
                        "RELAX_PROPOSAL",
                        field=option.field,
                        field_label=self._field_label(option.field),
                        window_text=fmt_window(option.window)
                        + f" of {self._fmt_field_value(option.field, binding.value)}",
                        found_count=found.count,
                    ),
                    queried=True,
                    match_count=0,
                )
        # Nothing left to loosen: report and go back to the start.
        work.bindings.clear()
        work.windows.clear()
        work.expected_field = None
        work.pending_confirmation = None
        work.pending_relax = None
        work.relax_offered.clear()
        work.sub_state = None
        work.success_age = -1
        work.success_row = None
        return self._dec(
            UpperState.DATABASE_CONFLICT,
            None,
            "conflict:no_relax",
            template("REPORT_ANSWER", count=0),
            queried=True,
            match_count=0,
        )

    def _many(self, work, result: QueryResultSet) -> StateDecision:
        unbound = [f.name for f in self.pack.schema.fields if f.name not in work.bindings]
        if self.querier.supports_row_stats and len(result.rows) >= 2 and unbound:
            rows = [row_fields(row, self.pack) for row in result.rows]
            field = select_informative_field(rows, unbound, self.pack.schema)
        elif unbound:
            field = unbound[0]
        else:  # everything bound yet still many matches; ask for the query type
            options = tuple(qt.label for qt in self.pack.schema.query_types)
            return self._dec(
                UpperState.MANY_MATCHES,
                None,
                "many:no_unbound",
                template("ASK_QUERY_TYPE", options=options, found_count=result.count),
                queried=True,
                match_count=result.count,
            )
        work.sub_state = LowerState.GET_CONSTRAINT
        work.expected_field = field
        return self._dec(
            UpperState.MANY_MATCHES,
            LowerState.GET_CONSTRAINT,
            "many:get_constraint",
            self._ask_field_template(field, found_count=result.count),
            queried=True,
            match_count=result.count,
        )

    # -------------------------------------------------------- lower layer

    def _step_subdialogue(self, work, extraction, outcome) -> StateDecision | None:
        """Advance an active sub-dialogue; None hands control to the upper layer."""
        acts = extraction.acts
        if acts.quit or acts.help or acts.meta_query:
            return None

        sub = work.sub_state
        if sub == LowerState.GET_CONSTRAINT:
            if outcome.changed_fields or outcome.query_type_changed:
                work.sub_state = None  # answer in hand; the chain re-queries
            return None

        if sub == LowerState.CONFIRM_VALUE:
            return self._step_confirm(work, extraction, outcome)

        if sub == LowerState.RELAX_CONSTRAINT:
            return self._step_relax(work, extraction, outcome)

        if sub in (LowerState.VERIFY_USER, LowerState.SIDE_EFFECTS):
            return self._step_verify(work, extraction, outcome)
        return None

    def _step_confirm(self, work, extraction, outcome) -> StateDecision | None:
        acts = extraction.acts
        if outcome.changed_fields:
            # New or corrected values change the constraints; re-classify.
            work.pending_confirmation = None
            work.sub_state = None
            return None
        if acts.affirm and work.pending_confirmation:
            name, _ = work.pending_confirmation
            if name in work.bindings:
                work.bindings[name] = work.bindings[name].with_status("confirmed")
            work.pending_confirmation = None
            work.sub_state = None
            return self._query_and_classify(work)
        if acts.deny and work.pending_confirmation:
            name, _ = work.pending_confirmation
            work.bindings.pop(name, None)
            work.windows.pop(name, None)
            work.pending_confirmation = None
            work.sub_state = None
            work.expected_field = name
            outcome.changed_fields.add(name)  # dropping a value is a change
            return None  # the chain asks for the field again (mandatory check)
        return None

    def _step_relax(self, work, extraction, outcome) -> StateDecision | None:
        acts = extraction.acts
        if outcome.changed_fields or outcome.query_type_changed:
            work.pending_relax = None
            work.relax_offered.clear()
            work.sub_state = None
            return None
        if acts.affirm and work.pending_relax:
            option = work.pending_relax
            work.windows[option.field] = option.window
            work.pending_relax = None
            work.relax_offered.clear()
            work.sub_state = None
            return self._query_and_classify(work)
        if acts.deny and work.pending_relax:
            work.pending_relax = None
            work.sub_state = None
            return self._query_and_classify(work)  # count is still 0; next proposal
        return None

    def _step_verify(self, work, extraction, outcome) -> StateDecision | None:
        acts = extraction.acts
        action = next((a for a in self.pack.schema.actions if a.name == work.verify_action), None)
        if action is None or outcome.changed_fields:
            work.sub_state = None
            work.verify_action = None
            return None
        if acts.deny:
            work.sub_state = None
            work.verify_action = None
            return self._dec(
                UpperState.SUCCESS,
                LowerState.VERIFY_USER,
                "verify:cancelled",
                template("SIDE_EFFECT_NOTICE", notice="Okay, I will not set that up."),
            )
        pin = self._extract_pin(extraction.tokens)
        if pin is None:
            if acts.silence or acts.dont_know or acts.repeat:
                return None  # plain status-quo handling keeps the prompt alive
            work.verify_attempts += 1
            if work.verify_attempts >= 3:
                work.sub_state = None
                work.verify_action = None
                return self._dec(
                    UpperState.SUCCESS,
                    LowerState.VERIFY_USER,
                    "verify:cancelled",
                    template("SIDE_EFFECT_NOTICE", notice="I could not verify you, so nothing was set up."),
                )
            return self._dec(
                UpperState.SUCCESS,
                LowerState.VERIFY_USER,
                "verify:retry",
                template("VERIFY_PROMPT", action_label=action.label, attempt=work.verify_attempts + 1),
            )
        if pin in action.pins:
            fields = row_fields(work.success_row, self.pack) if work.success_row else {}
            try:
                notice = action.notice.format(**fields)
            except KeyError:
                notice = action.notice
            work.sub_state = None
            work.verify_action = None
            work.success_row = None
            work.success_age = -1
            return self._dec(
                UpperState.SUCCESS,
                LowerState.SIDE_EFFECTS,
                "verify:ok",
                template("SIDE_EFFECT_NOTICE", notice=notice),
            )
        work.verify_attempts += 1
        if work.verify_attempts >= 3:
            work.sub_state = None
            work.verify_action = None
            return self._dec(
                UpperState.SUCCESS,
                LowerState.VERIFY_USER,
                "verify:cancelled",
                template("SIDE_EFFECT_NOTICE", notice="That PIN does not match, so nothing was set up."),
            )
        return self._dec(
            UpperState.SUCCESS,
            LowerState.VERIFY_USER,
            "verify:retry",
            template("VERIFY_PROMPT", action_label=action.label, attempt=work.verify_attempts + 1),
        )

    def _extract_pin(self, tokens: tuple[Token, ...]) -> str | None:
        for t in tokens:
            if t.category == "number" and t.text.isdigit() and len(t.text) == 4:
                return t.text
        digits: list[str] = []
        for t in tokens:
            if t.norm in DIGIT_WORDS:
                digits.append(str(DIGIT_WORDS[t.norm]))
            elif t.category != "punct" and digits:
                break
        if len(digits) == 4:
            return "".join(digits)
        return None
