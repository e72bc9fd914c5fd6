"""The ERC-721 minting scenario: a template, the SWB contract's concrete
behaviour, a request to mint token number 32, its entrustment and execution."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from oasis2.builder import build_behaviour, build_plan, build_template
from oasis2.graph import TypedGraph
from oasis2.harness import PlanRequest, ScenarioResult, World, run_scenario, trace
from oasis2.spec import SpecDocument, spec_from_dict
from oasis2.turtle import serialize
from oasis2.validator import validate
from oasis2.vocab import DEFAULT_NS, Layer

EX = "urn:example:swb#"
PREFIXES = {"ex": EX}

_MINT_TASK = {
    "operator": "ex:mint",
    "argument": {"exactly": "ex:blockchain_digital_token"},
    "object": {"as_new": "ex:token_template", "instance_of": ["ex:EthereumTokenERC721"]},
    "outputs": [{"as_new": "ex:token_template", "instance_of": ["ex:EthereumTokenERC721"]}],
}

TEMPLATE_SPEC = {
    "prefixes": PREFIXES,
    "agent": "ex:ERC721_token_minter",
    "behaviours": [{
        "id": "ex:mint_ERC721_token_behaviour",
        "goals": [{
            "id": "ex:mint_ERC721_token_goal",
            "tasks": [{"id": "ex:mint_ERC721_token_task", **_MINT_TASK}],
        }],
    }],
}

BEHAVIOUR_SPEC = {
    "prefixes": PREFIXES,
    "agent": "ex:SWB_contract",
    "behaviours": [{
        "id": "ex:SWB_mint_ERC721_token_behaviour",
        "goals": [{
            "id": "ex:SWB_mint_ERC721_token_goal",
            "tasks": [{"id": "ex:SWB_mint_ERC721_token_task", **_MINT_TASK}],
        }],
    }],
    "overloads": {"ex:SWB_mint_ERC721_token_task": "ex:mint_ERC721_token_task"},
}

PLAN_SPEC = {
    "prefixes": PREFIXES,
    "requester": "ex:SWB_customer",
    "behaviours": [{
        "id": "ex:mint_SWB_token32_plan",
        "goals": [{
            "id": "ex:mint_SWB_token32_goal",
            "tasks": [{
                "id": "ex:mint_SWB_token32_task",
                "operator": "ex:mint",
                "argument": {"exactly": "ex:blockchain_digital_token"},
                "object": {"exactly": "ex:SWB_token32"},
                "outputs": [{"exactly": "ex:SWB_token32"}],
            }],
        }],
    }],
    "submitted_to": {"ex:mint_SWB_token32_task": "ex:SWB_mint_ERC721_token_task"},
    "facts": {"types": {"ex:SWB_token32": ["ex:EthereumTokenERC721"]}},
}

ENTRUSTER = EX + "SWB_entruster"
PERFORMER = EX + "SWB_contract"
FILES = ("template.ttl", "behaviour.ttl", "plan.ttl", "entrustment.ttl", "execution.ttl", "events.log")


@dataclass
class DemoRun:
    template: TypedGraph
    behaviour: TypedGraph
    plan: TypedGraph
    scenario: ScenarioResult

    def fragments(self) -> dict[str, TypedGraph]:
        """The five layer files: each holds its layer plus what it links to."""
        return {
            "template.ttl": self.template,
            "behaviour.ttl": self.behaviour,
            "plan.ttl": self.plan,
            "entrustment.ttl": self.scenario.fragment(Layer.ENTRUSTMENT),
            "execution.ttl": self.scenario.fragment(Layer.EXECUTION),
        }


def documents() -> tuple[SpecDocument, SpecDocument, SpecDocument]:
    return spec_from_dict(TEMPLATE_SPEC), spec_from_dict(BEHAVIOUR_SPEC), spec_from_dict(PLAN_SPEC)


def run_demo(seed: int = 0) -> DemoRun:
    tdoc, bdoc, pdoc = documents()
    template = build_template(tdoc.spec).bind("ex", EX)
    behaviour = build_behaviour(bdoc.spec, (template, bdoc.overloads)).bind("ex", EX)
    plan = build_plan(pdoc.spec, pdoc.requester, (behaviour | pdoc.facts, pdoc.submitted_to)).bind("ex", EX)
    world = World(entruster=ENTRUSTER, behaviours=behaviour, facts=pdoc.facts)
    request = PlanRequest(pdoc.requester, pdoc.spec, pdoc.submitted_to)
    scenario = run_scenario(world, [request], seed)
    return DemoRun(template, behaviour, plan, scenario)


def write_demo(out: str | Path, seed: int = 0, ns: str = DEFAULT_NS) -> DemoRun:
    """Run the scenario and write the layer files and event log into ``out``.

    Every file is validated and every executed task traced before returning.
    """
    run = run_demo(seed)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, g in run.fragments().items():
        problems = validate(g)
        if problems:
            raise RuntimeError(f"{name} does not validate: {problems[0]}")
        g.bind("ex", EX)
        (out / name).write_text(serialize(g, ns), encoding="utf-8", newline="\n")
    for task in run.scenario.execution_tasks():
        trace(run.scenario.final, task)
    (out / "events.log").write_text(run.scenario.event_log(), encoding="utf-8", newline="\n")
    return run
