"""Scripted-dialogue driver shared by the scenario and acceptance tests."""
from dataclasses import dataclass, field

from dialogkit.service import DialogService


@dataclass
class Scenario:
    name: str
    domain: str
    turns: list  # (utterance, expected state) or (utterance, state, sub_state)
    final_reply: str | None = None
    backend: str = "local"
    seed: int = 0


@dataclass
class ScenarioRun:
    states: list = field(default_factory=list)
    sub_states: list = field(default_factory=list)
    replies: list = field(default_factory=list)
    debugs: list = field(default_factory=list)


def run_scenario(service: DialogService, scenario: Scenario) -> ScenarioRun:
    session = service.create_session(scenario.domain, backend=scenario.backend, seed=scenario.seed)
    run = ScenarioRun()
    for step in scenario.turns:
        utterance, expected_state = step[0], step[1]
        expected_sub = step[2] if len(step) > 2 else None
        response = service.step(session.id, utterance)
        run.states.append(response.state)
        run.sub_states.append(response.sub_state)
        run.replies.append(response.reply)
        run.debugs.append(response.debug)
        assert response.state == expected_state, (
            f"{scenario.name}: {utterance!r} -> {response.state} "
            f"(cause {response.debug.get('cause')}), expected {expected_state}; reply {response.reply!r}"
        )
        if expected_sub is not None:
            assert response.sub_state == expected_sub, (
                f"{scenario.name}: {utterance!r} -> sub {response.sub_state}, expected {expected_sub}"
            )
    if scenario.final_reply is not None:
        assert run.replies[-1] == scenario.final_reply, (
            f"{scenario.name}: final reply\n got: {run.replies[-1]!r}\nwant: {scenario.final_reply!r}"
        )
    return run
