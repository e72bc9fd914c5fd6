from __future__ import annotations

import random

import pytest

from oasis2.builder import build_behaviour, build_plan
from oasis2.demo import documents
from oasis2.errors import InvalidPlan, MalformedTask
from oasis2.graph import TypedGraph
from oasis2.matcher import compatible, discover, pair_parameters, refs_compatible
from oasis2.spec import BehaviourDef, BehaviourSpec, GoalSpec, TaskSpec
from oasis2.structure import AsNew, Exactly
from oasis2.vocab import Prop

import gen
from layers import build_kb, discovery_case
from oracles import brute_discover, pairing_ok, ref_ok, task_ok

EX = "urn:example:swb#"
NS = gen.NS


def _one_task(agent: str | None, prefix: str, task: TaskSpec) -> BehaviourSpec:
    return BehaviourSpec(agent, [BehaviourDef(f"{NS}{prefix}_b", [GoalSpec(f"{NS}{prefix}_g", [task])])])


def _pair_graph(plan_task: TaskSpec, offered: TaskSpec) -> TypedGraph:
    plan = build_plan(_one_task(None, "p", plan_task), NS + "requester")
    return plan | build_behaviour(_one_task(NS + "agent", "k", offered)) | gen.facts()


# -- examples ----------------------------------------------------------------

def test_demo_plan_finds_the_contract(demo):
    found = discover(demo.plan, demo.behaviour | demo.plan)
    [candidate] = found.choices[EX + "mint_SWB_token32_task"]
    assert (candidate.agent, candidate.task) == (EX + "SWB_contract", EX + "SWB_mint_ERC721_token_task")
    assert found.unmatched() == []


def test_template_tasks_are_not_offered(demo):
    pdoc = documents()[2]
    plan = build_plan(pdoc.spec, pdoc.requester)
    found = discover(plan, demo.template | pdoc.facts)
    assert found.unmatched() == [EX + "mint_SWB_token32_task"]


def test_empty_kb_leaves_every_task_unmatched(demo):
    found = discover(demo.plan, TypedGraph())
    assert found.choices == {EX + "mint_SWB_token32_task": []}


def test_two_agents_are_listed_in_order():
    task = TaskSpec(NS + "t1", Exactly(NS + "op_a"))
    kb = TypedGraph()
    for agent in ("zeta", "alpha"):
        kb.update(build_behaviour(_one_task(NS + agent, agent, TaskSpec(NS + agent + "_t", Exactly(NS + "op_a")))))
    plan = build_plan(_one_task(None, "p", task), NS + "requester")
    agents = [c.agent for c in discover(plan, kb).choices[NS + "t1"]]
    assert agents == [NS + "alpha", NS + "zeta"]


def test_malformed_task_raises():
    plan_task = TaskSpec(NS + "t1", Exactly(NS + "op_a"))
    g = _pair_graph(plan_task, TaskSpec(NS + "k_t", Exactly(NS + "op_a")))
    g.add_entity(NS + "second_operator")
    g.add_triple(NS + "t1", Prop.HAS_OPERATOR, NS + "second_operator")
    with pytest.raises(MalformedTask):
        compatible(NS + "t1", NS + "k_t", g)


def test_discover_rejects_invalid_plans(demo):
    broken = demo.plan.copy()
    broken.remove_triple(EX + "mint_SWB_token32_task", Prop.HAS_OPERATOR, EX + "mint_SWB_token32_task_operator")
    with pytest.raises(InvalidPlan):
        discover(broken, demo.behaviour)
    with pytest.raises(InvalidPlan):
        discover(TypedGraph(), demo.behaviour)


@pytest.mark.parametrize("plan_ref, offered, expected", [
    (Exactly(NS + "ind_3"), Exactly(NS + "ind_3"), True),
    (Exactly(NS + "ind_3"), Exactly(NS + "ind_4"), False),
    (Exactly(NS + "ind_3"), AsNew(NS + "e", [NS + "C1"]), True),   # C3 is under C1
    (Exactly(NS + "ind_3"), AsNew(NS + "e", [NS + "C2"]), False),
    (AsNew(NS + "p", [NS + "C4"]), AsNew(NS + "e", [NS + "C0"]), True),
    (AsNew(NS + "p", [NS + "C0"]), AsNew(NS + "e", [NS + "C4"]), False),
    (AsNew(NS + "p", []), AsNew(NS + "e", []), True),
])
def test_reference_compatibility_examples(plan_ref, offered, expected):
    assert refs_compatible(gen.facts(), plan_ref, offered) is expected
    assert ref_ok(plan_ref, offered) is expected


# -- parameter pairing -------------------------------------------------------------

def _param_task(rng: random.Random, tid: str, n: int) -> TaskSpec:
    names = gen._Names(tid.rsplit("#", 1)[1])
    return TaskSpec(tid, Exactly(NS + "op_a"),
                    inputs=[gen.random_ref(rng, names) for _ in range(n)],
                    outputs=[gen.random_ref(rng, names) for _ in range(rng.randint(0, 2))])


@pytest.mark.parametrize("seed", range(60))
def test_pairing_agrees_with_permutation_search(seed):
    rng = random.Random(seed)
    n = rng.randint(0, 4)
    offered = _param_task(rng, NS + "k_t", n)
    if rng.random() < 0.5:
        names = gen._Names(f"q{seed}")
        plan_task = TaskSpec(NS + "t1", Exactly(NS + "op_a"),
                             inputs=[gen.plan_ref(rng, r, names) for r in offered.inputs],
                             outputs=[gen.plan_ref(rng, r, names) for r in offered.outputs])
        rng.shuffle(plan_task.inputs)
    else:
        plan_task = _param_task(rng, NS + "t1", n)
    g = _pair_graph(plan_task, offered)
    result = compatible(NS + "t1", NS + "k_t", g)
    assert bool(result) is task_ok(plan_task, offered)
    if result:
        assert pairing_ok(plan_task, offered, result.pairing)


def test_unequal_lengths_never_pair():
    assert pair_parameters([NS + "a"], [], TypedGraph()) is None


# -- oracle equivalence ----------------------------------------------------------

@pytest.mark.parametrize("seed", range(50))
def test_discover_equals_brute_force(seed):
    plan_spec, specs, plan, kb = discovery_case(seed)
    got = {t: [(c.agent, c.behaviour, c.goal, c.task) for c in cands]
           for t, cands in discover(plan, kb).choices.items()}
    assert got == brute_discover(plan_spec, specs)


def test_kb_builder_keeps_each_agent():
    specs = gen.random_kb_specs(random.Random(1), 1)
    kb = build_kb(specs)
    for agent in specs:
        assert kb.objects(agent, Prop.HAS_BEHAVIOUR)
