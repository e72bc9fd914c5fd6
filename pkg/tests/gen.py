"""Seeded random generators for specs, worlds and knowledge bases."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from oasis2.graph import TypedGraph
from oasis2.spec import BehaviourDef, BehaviourSpec, GoalSpec, TaskSpec
from oasis2.structure import AsNew, Exactly
from oasis2.vocab import Element, Layer, Prop

NS = "urn:test:gen#"

OPERATORS = [NS + f"op_{c}" for c in "abc"]
ARGUMENTS = [NS + f"arg_{c}" for c in "xy"]
# A small class forest: C1, C2 under C0; C3 under C1; C4 under C3; C5 alone.
CLASS_EDGES = [("C1", "C0"), ("C2", "C0"), ("C3", "C1"), ("C4", "C3")]
CLASSES = [NS + f"C{i}" for i in range(6)]
INDIVIDUALS = {NS + f"ind_{i}": NS + f"C{i % 6}" for i in range(8)}


def facts() -> TypedGraph:
    g = TypedGraph().bind("gen", NS)
    for sub, sup in CLASS_EDGES:
        g.add_subclass(NS + sub, NS + sup)
    for ind, cls in INDIVIDUALS.items():
        g.add_entity(ind, [cls])
    return g


def subclasses(cls: str) -> list[str]:
    """``cls`` and everything below it (naive, independent of TypedGraph)."""
    out = {cls}
    changed = True
    while changed:
        changed = False
        for sub, sup in CLASS_EDGES:
            if NS + sup in out and NS + sub not in out:
                out.add(NS + sub)
                changed = True
    return sorted(out)


def superclasses(cls: str) -> set[str]:
    out = {cls}
    changed = True
    while changed:
        changed = False
        for sub, sup in CLASS_EDGES:
            if NS + sub in out and NS + sup not in out:
                out.add(NS + sup)
                changed = True
    return out


def instances_of(classes) -> list[str]:
    return sorted(i for i, c in INDIVIDUALS.items()
                  if all(k in superclasses(c) for k in classes))


class _Names:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.n = 0

    def __call__(self, kind: str) -> str:
        self.n += 1
        return f"{NS}{self.prefix}_{kind}{self.n}"


def random_ref(rng: random.Random, names: _Names, pool: list[str] | None = None):
    if rng.random() < 0.5:
        return Exactly(rng.choice(pool or sorted(INDIVIDUALS)))
    classes = rng.sample(CLASSES, rng.choice([0, 1, 1, 2]))
    return AsNew(names("ent"), classes)


def random_task(rng: random.Random, names: _Names, params: int = 2) -> TaskSpec:
    task = TaskSpec(
        task_id=names("task"),
        operator=Exactly(rng.choice(OPERATORS)),
        argument=Exactly(rng.choice(ARGUMENTS)) if rng.random() < 0.4 else None,
        object=random_ref(rng, names) if rng.random() < 0.7 else None,
        inputs=[random_ref(rng, names) for _ in range(rng.randint(0, params))],
        outputs=[random_ref(rng, names) for _ in range(rng.randint(0, params))],
    )
    if isinstance(task.object, AsNew) and rng.random() < 0.3:
        task.outputs.append(task.object)  # the output is the object itself
    return task


def _random_dag(rng: random.Random, ids: list[str], p: float = 0.3) -> dict[str, set[str]]:
    deps = {i: set() for i in ids}
    for j, later in enumerate(ids):
        for earlier in ids[:j]:
            if rng.random() < p:
                deps[later].add(earlier)
    return deps


def random_spec(rng: random.Random, agent: str | None, prefix: str, *,
                behaviours: tuple[int, int] = (1, 2), goals: tuple[int, int] = (1, 2),
                tasks: tuple[int, int] = (1, 3), params: int = 2) -> BehaviourSpec:
    names = _Names(prefix)
    defs = []
    for _ in range(rng.randint(*behaviours)):
        goal_specs = []
        for _ in range(rng.randint(*goals)):
            goal_specs.append(GoalSpec(names("goal"),
                                       [random_task(rng, names, params) for _ in range(rng.randint(*tasks))]))
        _add_dependencies(rng, goal_specs)
        defs.append(BehaviourDef(names("behaviour"), goal_specs))
    return BehaviourSpec(agent, defs)


def _add_dependencies(rng: random.Random, goal_specs: list[GoalSpec]) -> None:
    for gid, deps in _random_dag(rng, [g.goal_id for g in goal_specs]).items():
        next(g for g in goal_specs if g.goal_id == gid).depends_on = deps
    tasks = [t for g in goal_specs for t in g.tasks]
    for tid, deps in _random_dag(rng, [t.task_id for t in tasks], 0.2).items():
        next(t for t in tasks if t.task_id == tid).depends_on = deps


def _rename(spec: BehaviourSpec, agent: str | None, prefix: str,
            refs=lambda r: r) -> tuple[BehaviourSpec, dict[str, str]]:
    """Copy of ``spec`` with fresh ids; returns the copy and old -> new task ids."""
    names = _Names(prefix)
    mapping: dict[str, str] = {}
    defs = []
    for b in spec.behaviours:
        goal_specs = []
        for g in b.goals:
            tasks = []
            for t in g.tasks:
                mapping[t.task_id] = names("task")
                tasks.append(TaskSpec(
                    mapping[t.task_id], refs(t.operator),
                    refs(t.argument) if t.argument else None,
                    refs(t.object) if t.object else None,
                    [refs(r) for r in t.inputs], [refs(r) for r in t.outputs]))
            mapping[g.goal_id] = names("goal")
            goal_specs.append(GoalSpec(mapping[g.goal_id], tasks))
        mapping[b.behaviour_id] = names("behaviour")
        defs.append(BehaviourDef(mapping[b.behaviour_id], goal_specs))
    for b in spec.behaviours:
        for g in b.goals:
            new_goal = _find_goal(defs, mapping[g.goal_id])
            new_goal.depends_on = {mapping[d] for d in g.depends_on}
            for t in g.tasks:
                new_task = next(x for x in new_goal.tasks if x.task_id == mapping[t.task_id])
                new_task.depends_on = {mapping[d] for d in t.depends_on}
    return BehaviourSpec(agent, defs), mapping


def _find_goal(defs: list[BehaviourDef], goal_id: str) -> GoalSpec:
    return next(g for b in defs for g in b.goals if g.goal_id == goal_id)


def plan_ref(rng: random.Random, ref, names: _Names):
    """A plan-side reference the behaviour reference can satisfy."""
    if isinstance(ref, Exactly):
        return ref
    named = instances_of(ref.classes)
    if named and rng.random() < 0.6:
        return Exactly(rng.choice(named))
    narrowed = [rng.choice(subclasses(c)) for c in sorted(ref.classes)]
    return AsNew(names("pent"), narrowed)


def plan_for(rng: random.Random, offered: list[TaskSpec], prefix: str,
             goals: int = 2) -> tuple[BehaviourSpec, dict[str, str]]:
    """A one-behaviour plan whose tasks each ask for something a task in
    ``offered`` provides; returns the spec and plan task -> offered task."""
    names = _Names(prefix)
    goal_specs = [GoalSpec(names("goal"), []) for _ in range(goals)]
    chosen: dict[str, str] = {}
    for i, t in enumerate(offered):
        inputs = [plan_ref(rng, r, names) for r in t.inputs]
        outputs = [plan_ref(rng, r, names) for r in t.outputs]
        rng.shuffle(inputs)
        rng.shuffle(outputs)
        task = TaskSpec(names("task"), t.operator, t.argument,
                        plan_ref(rng, t.object, names) if t.object else None, inputs, outputs)
        goal_specs[i % goals].tasks.append(task)
        chosen[task.task_id] = t.task_id
    goal_specs = [g for g in goal_specs if g.tasks]
    _add_dependencies(rng, goal_specs)
    return BehaviourSpec(None, [BehaviourDef(names("plan"), goal_specs)]), chosen


@dataclass
class LayerCase:
    """Inputs for one pass through all five layers."""

    template: BehaviourSpec
    behaviour: BehaviourSpec
    overloads: dict[str, str]
    plan: BehaviourSpec
    submitted_to: dict[str, str]
    requester: str
    facts: TypedGraph = field(default_factory=facts)


def layer_case(seed: int) -> LayerCase:
    rng = random.Random(seed)
    template = random_spec(rng, NS + f"template_agent{seed}", f"t{seed}")
    behaviour, mapping = _rename(template, NS + f"performer{seed}", f"b{seed}")
    overloads = {mapping[t.task_id]: t.task_id for t in template.tasks()}
    # Target one behaviour; the plan's single root must map to a single root.
    target = rng.choice(behaviour.behaviours)
    offered = [t for g in target.goals for t in g.tasks]
    offered = rng.sample(offered, rng.randint(1, len(offered)))
    offered_goal = {t.task_id: g.goal_id for g in target.goals for t in g.tasks}
    # Plan goals must commute with submission, so group plan tasks by goal.
    by_goal: dict[str, list[TaskSpec]] = {}
    for t in offered:
        by_goal.setdefault(offered_goal[t.task_id], []).append(t)
    goal_specs, submitted = [], {}
    for i, (_, tasks) in enumerate(sorted(by_goal.items())):
        spec, chosen = plan_for(rng, tasks, f"p{seed}g{i}", goals=1)
        goal_specs.extend(spec.behaviours[0].goals)
        submitted.update(chosen)
    _add_dependencies(rng, goal_specs)
    plan = BehaviourSpec(None, [BehaviourDef(NS + f"p{seed}_plan", goal_specs)])
    return LayerCase(template, behaviour, overloads, plan, submitted, NS + f"requester{seed}")


@dataclass
class WorldCase:
    performers: dict[str, BehaviourSpec]
    plan: BehaviourSpec
    intended: dict[str, str]      # plan task -> a compatible performer task
    requester: str
    facts: TypedGraph = field(default_factory=facts)


def world_case(seed: int, performers: int | None = None, plan_tasks: int | None = None) -> WorldCase:
    rng = random.Random(seed)
    count = performers or rng.randint(1, 3)
    specs = {}
    for k in range(count):
        agent = NS + f"w{seed}_agent{k}"
        specs[agent] = random_spec(rng, agent, f"w{seed}a{k}", behaviours=(1, 2), goals=(1, 2), tasks=(1, 2))
    offered = [t for s in specs.values() for t in s.tasks()]
    n = plan_tasks or rng.randint(1, min(4, len(offered)))
    picked = [rng.choice(offered) for _ in range(n)]
    plan, intended = plan_for(rng, picked, f"w{seed}p", goals=rng.randint(1, 2))
    return WorldCase(specs, plan, intended, NS + f"w{seed}_requester")


def random_kb_specs(rng: random.Random, seed: int) -> dict[str, BehaviourSpec]:
    """Up to 8 behaviours with up to 3 tasks each, spread over 1-4 agents."""
    agents = [NS + f"kb{seed}_agent{k}" for k in range(rng.randint(1, 4))]
    total = rng.randint(0, 8)
    per_agent = {a: 0 for a in agents}
    for _ in range(total):
        per_agent[rng.choice(agents)] += 1
    specs = {}
    for k, (agent, n) in enumerate(sorted(per_agent.items())):
        if n == 0:
            continue
        names = _Names(f"kb{seed}a{k}")
        defs = []
        for _ in range(n):
            tasks = [random_task(rng, names) for _ in range(rng.randint(1, 3))]
            defs.append(BehaviourDef(names("behaviour"), [GoalSpec(names("goal"), tasks)]))
        specs[agent] = BehaviourSpec(agent, defs)
    return specs


def random_graph(rng: random.Random) -> TypedGraph:
    """Arbitrary typed graph: odd IRIs, any classes, tags and vocabulary edges."""
    spaces = ["urn:example:swb#", "http://ex.org/a/", "urn:x:", "http://ex.org/h#", NS]
    locals_ = ["a", "B_1", "x.y", "9lives", "with-dash", "", "trailing.", "-lead", "é", "a%20b"]
    nodes = sorted({f"{rng.choice(spaces)}{rng.choice(locals_)}{rng.randint(0, 9)}"
                    for _ in range(rng.randint(1, 15))})
    g = TypedGraph()
    for n in nodes:
        g.add_entity(n)
        for cls in rng.sample(list(Element) + [rng.choice(CLASSES)], rng.randint(0, 2)):
            g.assert_type(n, cls)
        if rng.random() < 0.7:
            g.assert_type(n, rng.choice(list(Layer)))
    props = [p for p in Prop if not p.is_abstract and p not in (Prop.TYPE, Prop.SUBCLASS_OF)]
    for _ in range(rng.randint(0, 25)):
        g.add_triple(rng.choice(nodes), rng.choice(props), rng.choice(nodes))
    for sub, sup in rng.sample(CLASS_EDGES, rng.randint(0, len(CLASS_EDGES))):
        g.add_subclass(NS + sub, NS + sup)
    if rng.random() < 0.5:
        g.bind("ex", "urn:example:swb#")
    return g
