"""Deterministic discrete-event simulation of the entrustment protocol.

Requesters submit plans to an entruster, which discovers performers,
entrusts plan tasks to them and collects their execution reports.  Agents
only exchange serialized Turtle fragments; every fragment is parsed and
validated on delivery.  Messages are delivered from a single FIFO queue and
each delivery advances the clock by one tick.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field

from oasis2.builder import (
    build_entrustment,
    build_plan,
    link_entrustment_execution,
    pair_elements,
    record_execution,
)
from oasis2.errors import BrokenChain, NotAnExecution, WorldInvalid
from oasis2.graph import TypedGraph
from oasis2.matcher import compatible, discover, plan_root
from oasis2.spec import BehaviourSpec
from oasis2.structure import AsNew, Exactly, agents_of, behaviour_tasks, only, reference, root_of
from oasis2.turtle import parse, serialize
from oasis2.validator import validate
from oasis2.vocab import Element, Layer, Prop

PLAN_SUBMISSION = "PlanSubmission"
ENTRUSTMENT_NOTICE = "EntrustmentNotice"
EXECUTION_REPORT = "ExecutionReport"

_EXPECTED_LAYER = {
    PLAN_SUBMISSION: Layer.PLANNING,
    ENTRUSTMENT_NOTICE: Layer.ENTRUSTMENT,
    EXECUTION_REPORT: Layer.EXECUTION,
}


@dataclass(frozen=True)
class TaskState:
    state: str
    reason: str | None = None

    def __str__(self) -> str:
        return f"{self.state}({self.reason})" if self.reason else self.state


SUBMITTED = TaskState("Submitted")
MATCHED = TaskState("Matched")
ENTRUSTED = TaskState("Entrusted")
EXECUTED = TaskState("Executed")
NO_CANDIDATE = TaskState("Failed", "NoCandidate")

_NEXT = {None: SUBMITTED, SUBMITTED: MATCHED, MATCHED: ENTRUSTED, ENTRUSTED: EXECUTED}


@dataclass(frozen=True)
class Message:
    kind: str
    sender: str
    receiver: str
    fragment: str
    seq: int


@dataclass(frozen=True)
class LifecycleEvent:
    tick: int
    task: str
    before: TaskState | None
    after: TaskState
    cause: int | str

    def to_line(self) -> str:
        before = str(self.before) if self.before is not None else "-"
        return f"{self.tick}\t{self.task}\t{before}\t{self.after}\t{self.cause}"


@dataclass
class World:
    """The entruster agent, the performers' behaviours (with any templates
    they overload) and domain facts known to everyone."""

    entruster: str
    behaviours: TypedGraph
    facts: TypedGraph = field(default_factory=TypedGraph)


@dataclass
class PlanRequest:
    requester: str
    spec: BehaviourSpec
    submitted_to: Mapping[str, str] | None = None


@dataclass
class ScenarioResult:
    final: TypedGraph
    events: list[LifecycleEvent]
    messages: list[Message]
    states: dict[str, TaskState]
    ticks: int

    def event_log(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    def fragment(self, layer: Layer) -> TypedGraph:
        """Union of the delivered fragments whose kind carries ``layer``."""
        out = TypedGraph()
        for m in self.messages:
            if _EXPECTED_LAYER[m.kind] is layer:
                out.update(parse(m.fragment))
        return out

    def execution_tasks(self) -> list[str]:
        return self.final.instances(Element.TASK, Layer.EXECUTION)


class _Simulation:
    def __init__(self, world: World, seed: int):
        self.world = world
        self.rng = random.Random(seed)
        self.knowledge = world.behaviours | world.facts
        self.queue: deque[Message] = deque()
        self.seq = 0
        self.tick = 0
        self.events: list[LifecycleEvent] = []
        self.messages: list[Message] = []
        self.states: dict[str, TaskState] = {}
        self.final = TypedGraph()
        self.fresh: dict[tuple[str, str], str] = {}
        self.execution_count: dict[str, int] = {}

    # -- plumbing --------------------------------------------------------

    def send(self, kind: str, sender: str, receiver: str, g: TypedGraph) -> None:
        self.seq += 1
        self.queue.append(Message(kind, sender, receiver, serialize(g), self.seq))

    def move(self, task: str, after: TaskState, cause: int | str) -> None:
        before = self.states.get(task)
        if after != NO_CANDIDATE and _NEXT.get(before) != after:
            raise RuntimeError(f"illegal transition {before} -> {after} for {task}")
        self.states[task] = after
        self.events.append(LifecycleEvent(self.tick, task, before, after, cause))

    def receive(self, m: Message) -> TypedGraph:
        g = parse(m.fragment)
        problems = validate(g)
        if problems:
            raise RuntimeError(f"message {m.seq} carries an invalid fragment: {problems[0]}")
        if not g.instances(Element.BEHAVIOUR, _EXPECTED_LAYER[m.kind]):
            raise RuntimeError(f"message {m.seq} carries no {_EXPECTED_LAYER[m.kind]} behaviour")
        self.final.update(g)
        return g

    def run(self) -> None:
        while self.queue:
            m = self.queue.popleft()
            self.tick += 1
            self.messages.append(m)
            g = self.receive(m)
            handler = {PLAN_SUBMISSION: self.on_plan, ENTRUSTMENT_NOTICE: self.on_notice,
                       EXECUTION_REPORT: self.on_report}[m.kind]
            handler(m, g)

    # -- entruster -------------------------------------------------------

    def on_plan(self, m: Message, plan: TypedGraph) -> None:
        root = plan_root(plan)
        tasks = behaviour_tasks(plan, root)
        for task in tasks:
            self.move(task, SUBMITTED, m.seq)
        found = discover(plan, self.knowledge, check=False)
        assignment: dict[str, str] = {}
        performers: set[str] = set()
        for task in tasks:
            targets = plan.objects(task, Prop.TASK_SUBMITTED_TO)
            choices = [c for c in found.choices[task] if not targets or c.task in targets]
            if not choices:
                self.move(task, NO_CANDIDATE, "internal")
                continue
            pick = choices[0]
            self.move(task, MATCHED, "internal")
            assignment[task] = pick.task
            performers.add(pick.agent)
        if not assignment:
            return
        entrustment = build_entrustment(plan, self.knowledge, assignment, allow_partial=True)
        for performer in sorted(performers):
            self.send(ENTRUSTMENT_NOTICE, self.world.entruster, performer, entrustment)

    def on_report(self, m: Message, g: TypedGraph) -> None:
        for etask in g.instances(Element.TASK, Layer.ENTRUSTMENT):
            if m.sender in g.objects(etask, Prop.ENTRUSTS) and g.objects(etask, Prop.TASK_ENTRUSTED_WITH):
                ptask = only(g.objects(etask, Prop.TASK_ENTRUSTED_BY))
                if ptask is not None and self.states.get(ptask) == ENTRUSTED:
                    self.move(ptask, EXECUTED, m.seq)

    # -- performer -------------------------------------------------------

    def mine(self, g: TypedGraph, performer: str) -> list[tuple[str, str, str]]:
        """(entrusted task, plan task, behaviour task) entrusted to ``performer``."""
        out = []
        for etask in g.instances(Element.TASK, Layer.ENTRUSTMENT):
            ptask = only(g.objects(etask, Prop.TASK_ENTRUSTED_BY))
            for btask in sorted(g.objects(etask, Prop.TASK_ENTRUSTED_FROM)):
                if performer in agents_of(g, root_of(g, btask) or "") and ptask is not None:
                    out.append((etask, ptask, btask))
        return out

    def on_notice(self, m: Message, entrustment: TypedGraph) -> None:
        performer = m.receiver
        work = self.mine(entrustment, performer)
        for _, ptask, _ in work:
            self.move(ptask, ENTRUSTED, m.seq)
        executions = TypedGraph()
        for _, ptask, btask in work:
            bindings, facts = self.bindings(entrustment, ptask, btask)
            n = self.execution_count.get(performer, 0) + 1
            self.execution_count[performer] = n
            suffix = "execution" if n == 1 else f"execution_{n}"
            executions.update(record_execution(
                self.world.behaviours, performer, bindings, entrustment,
                tasks=[btask], plan_map={ptask: btask}, facts=facts, suffix=suffix))
        linked = link_entrustment_execution(entrustment, executions, performer)
        self.send(EXECUTION_REPORT, performer, m.sender, linked)

    def bindings(self, g: TypedGraph, ptask: str, btask: str) -> tuple[dict[str, str], TypedGraph]:
        """Bind the behaviour's placeholders to what the plan asks for.

        A placeholder met by a named plan individual is bound to it; one met
        by a plan placeholder gets a fresh individual (named from the seeded
        generator) that instantiates the classes both sides require.
        """
        knowledge = g | self.knowledge
        facts = self.world.facts.copy()
        bindings: dict[str, str] = {}
        pairing = compatible(ptask, btask, knowledge).pairing
        for pel, bel in sorted(pair_elements(knowledge, ptask, btask, pairing).items()):
            bref, pref = reference(knowledge, bel), reference(knowledge, pel)
            if not isinstance(bref, AsNew) or bref.entity in bindings:
                continue
            if isinstance(pref, Exactly):
                bindings[bref.entity] = pref.target
                for cls in knowledge.classes_of(pref.target):
                    if not isinstance(cls, (Element, Layer)):
                        facts.add_entity(pref.target, [cls])
                continue
            key = (bref.entity, pref.entity)
            if key not in self.fresh:
                self.fresh[key] = f"{bref.entity}_{self.rng.getrandbits(32):08x}"
            fresh = self.fresh[key]
            facts.add_entity(fresh, sorted(bref.classes | pref.classes))
            bindings[bref.entity] = fresh
        for sub, sup in knowledge.subclass_edges:
            facts.add_subclass(sub, sup)
        return bindings, facts


def run_scenario(world: World, plans: list[PlanRequest], seed: int = 0) -> ScenarioResult:
    """Drive every plan through submission, entrustment and execution.

    Raises WorldInvalid if the world's behaviours do not validate cleanly.
    Plan tasks end Executed, or Failed(NoCandidate) when no performer task
    is compatible; failures are terminal.
    """
    problems = validate(world.behaviours | world.facts)
    if problems:
        raise WorldInvalid(f"world behaviours fail validation: {problems[0]}")
    sim = _Simulation(world, seed)
    submitted: set[str] = set()
    for request in plans:
        target = (sim.knowledge, request.submitted_to) if request.submitted_to else None
        plan = build_plan(request.spec, request.requester, target)
        root = plan_root(plan)
        if root in submitted:
            raise WorldInvalid(f"plan {root} is submitted twice")
        submitted.add(root)
        sim.send(PLAN_SUBMISSION, request.requester, world.entruster, plan)
    sim.run()
    return ScenarioResult(sim.final, sim.events, sim.messages, sim.states, sim.tick)


# -- provenance --------------------------------------------------------------

@dataclass(frozen=True)
class Trace:
    """How one executed task came about.

    The behaviour leg runs execution -> behaviour task -> template task; the
    plan leg runs plan task -> entrusted task -> performer.  Plan-leg fields
    are None for executions recorded without a plan.
    """

    execution_task: str
    behaviour_task: str
    template_task: str | None = None
    plan_task: str | None = None
    entrustment_task: str | None = None
    performer: str | None = None

    def chain(self) -> list[tuple[str, str]]:
        steps = [("execution", self.execution_task),
                 (Prop.TASK_EXECUTION_DRAWN_BY.value, self.behaviour_task)]
        if self.template_task:
            steps.append((Prop.OVERLOADS_TASK.value, self.template_task))
        if self.plan_task:
            steps.append((Prop.HAS_TASK_EXECUTION.value, self.plan_task))
        if self.entrustment_task:
            steps.append((Prop.TASK_ENTRUSTED_BY.value, self.entrustment_task))
        if self.performer:
            steps.append((Prop.ENTRUSTS.value, self.performer))
        return steps


def trace(g: TypedGraph, execution_task: str) -> Trace:
    """Follow provenance edges from an execution task.

    Raises NotAnExecution, or BrokenChain naming the first missing link.
    """
    if not (g.has_class(execution_task, Element.TASK)
            and g.layer_of(execution_task) is Layer.EXECUTION):
        raise NotAnExecution(f"{execution_task} is not an execution task")
    btask = only(g.objects(execution_task, Prop.TASK_EXECUTION_DRAWN_BY))
    if btask is None:
        raise BrokenChain(Prop.TASK_EXECUTION_DRAWN_BY.value, execution_task)
    template = min(g.objects(btask, Prop.OVERLOADS_TASK), default=None)
    plan_tasks = sorted(g.subjects(Prop.HAS_TASK_EXECUTION, execution_task))
    if not plan_tasks:
        return Trace(execution_task, btask, template)
    ptask = plan_tasks[0]
    entrusted = sorted(e for e in g.subjects(Prop.TASK_ENTRUSTED_BY, ptask)
                       if execution_task in g.objects(e, Prop.TASK_ENTRUSTED_WITH))
    if not entrusted:
        return Trace(execution_task, btask, template, ptask)
    etask = entrusted[0]
    performer = min(g.objects(etask, Prop.ENTRUSTS), default=None)
    if performer is None:
        raise BrokenChain(Prop.ENTRUSTS.value, etask)
    return Trace(execution_task, btask, template, ptask, etask, performer)
