"""Agent discovery: which behaviour tasks can realise which plan tasks."""

from __future__ import annotations

from dataclasses import dataclass, field

from oasis2.errors import InvalidPlan, MalformedTask, UnknownClass
from oasis2.graph import TypedGraph
from oasis2.structure import (
    Exactly,
    Ref,
    agents_of,
    behaviour_tasks,
    parent_of,
    reference,
    roots,
    task_parts,
)
from oasis2.vocab import Element, Layer, Prop


@dataclass(frozen=True)
class Compatibility:
    """Outcome of :func:`compatible`; truthy iff the tasks are compatible.

    ``pairing`` maps every plan input/output parameter to its behaviour
    counterpart when compatible.
    """

    ok: bool
    pairing: dict[str, str] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


INCOMPATIBLE = Compatibility(False)


@dataclass(frozen=True)
class Candidate:
    agent: str
    behaviour: str
    goal: str
    task: str
    parameter_pairing: dict[str, str] = field(default_factory=dict, compare=True)

    def sort_key(self) -> tuple[str, str, str]:
        return (self.agent, self.behaviour, self.task)


@dataclass
class CandidateAssignment:
    plan: str
    choices: dict[str, list[Candidate]]

    def unmatched(self) -> list[str]:
        return sorted(t for t, c in self.choices.items() if not c)


def _closure_or_self(g: TypedGraph, cls: str) -> set:
    try:
        return g.superclass_closure(cls)
    except UnknownClass:
        return {cls}


def refs_compatible(g: TypedGraph, plan_ref: Ref, behaviour_ref: Ref) -> bool:
    """Whether what the plan asks for fits what the behaviour offers.

    Plan-side AsNew constraints must be at least as specific as the
    behaviour's, so an advertised capability is never exceeded.
    """
    if isinstance(plan_ref, Exactly):
        if isinstance(behaviour_ref, Exactly):
            return plan_ref.target == behaviour_ref.target
        return all(g.is_instance_of(plan_ref.target, c) for c in behaviour_ref.classes)
    if isinstance(behaviour_ref, Exactly):
        # The behaviour always acts on one individual; it must satisfy the plan.
        return all(g.is_instance_of(behaviour_ref.target, c) for c in plan_ref.classes)
    plan_closures = [_closure_or_self(g, c) for c in sorted(plan_ref.classes)]
    return all(any(c in closure for closure in plan_closures) for c in behaviour_ref.classes)


def _element_ref(g: TypedGraph, element: str) -> Ref:
    ref = reference(g, element)
    if ref is None:
        raise MalformedTask(f"{element} needs exactly one refersExactlyTo/refersAsNewTo")
    return ref


def pair_parameters(plan_params: list[str], behaviour_params: list[str],
                    g: TypedGraph) -> dict[str, str] | None:
    """Perfect matching between parameter lists, or None.

    Each plan parameter is paired with one distinct, compatible behaviour
    parameter; augmenting paths (Kuhn's algorithm) find the matching.
    Unequal list lengths never match.
    """
    if len(plan_params) != len(behaviour_params):
        return None
    plan_params = sorted(plan_params)
    behaviour_params = sorted(behaviour_params)
    refs = {p: reference(g, p) for p in plan_params + behaviour_params}
    adj = {
        p: [b for b in behaviour_params
            if refs[p] is not None and refs[b] is not None and refs_compatible(g, refs[p], refs[b])]
        for p in plan_params
    }
    owner: dict[str, str] = {}

    def augment(p: str, visited: set[str]) -> bool:
        for b in adj[p]:
            if b in visited:
                continue
            visited.add(b)
            if b not in owner or augment(owner[b], visited):
                owner[b] = p
                return True
        return False

    for p in plan_params:
        if not augment(p, set()):
            return None
    return {p: b for b, p in owner.items()}


def _check_task(g: TypedGraph, task: str) -> None:
    for prop, most in ((Prop.HAS_OPERATOR, 1), (Prop.HAS_ARGUMENT, 1), (Prop.HAS_OBJECT, 1)):
        n = len(g.objects(task, prop))
        if n > most or (prop is Prop.HAS_OPERATOR and n == 0):
            raise MalformedTask(f"{task} has {n} {prop} edges")


def compatible(plan_task: str, behaviour_task: str, g: TypedGraph) -> Compatibility:
    """Decide whether ``behaviour_task`` can realise ``plan_task``.

    Operators must be compatible, arguments and objects both absent or
    compatible, and inputs and outputs must each admit a perfect pairing.
    """
    _check_task(g, plan_task)
    _check_task(g, behaviour_task)
    mine, theirs = task_parts(g, plan_task), task_parts(g, behaviour_task)

    for a, b in ((mine.operator, theirs.operator),
                 (mine.argument, theirs.argument),
                 (mine.object, theirs.object)):
        if a is None and b is None:
            continue
        if a is None or b is None:
            return INCOMPATIBLE
        if not refs_compatible(g, _element_ref(g, a), _element_ref(g, b)):
            return INCOMPATIBLE

    pairing: dict[str, str] = {}
    for ours, offered in ((mine.inputs, theirs.inputs), (mine.outputs, theirs.outputs)):
        for p in (*ours, *offered):
            _element_ref(g, p)
        matched = pair_parameters(list(ours), list(offered), g)
        if matched is None:
            return INCOMPATIBLE
        pairing.update(matched)
    return Compatibility(True, pairing)


def plan_root(plan: TypedGraph) -> str:
    found = roots(plan, Layer.PLANNING)
    if len(found) != 1:
        raise InvalidPlan(f"expected exactly one plan behaviour node, found {len(found)}")
    return found[0]


def performer_tasks(kb: TypedGraph) -> list[tuple[str, str, str, str]]:
    """Every (agent, behaviour, goal, task) offered by a concrete behaviour in ``kb``."""
    found = []
    for behaviour in roots(kb, Layer.BEHAVIOUR):
        agents = agents_of(kb, behaviour)
        for task in behaviour_tasks(kb, behaviour):
            if kb.layer_of(task) is not Layer.BEHAVIOUR:
                continue
            goal = parent_of(kb, task)
            for agent in agents:
                if kb.has_class(agent, Element.AGENT):
                    found.append((agent, behaviour, goal, task))
    return sorted(found)


def discover(plan: TypedGraph, kb: TypedGraph, *, check: bool = True) -> CandidateAssignment:
    """List, for each plan task, every compatible performer task in ``kb``."""
    from oasis2.validator import validate

    root = plan_root(plan)
    if check:
        problems = validate(plan)
        if problems:
            raise InvalidPlan(f"plan {root} fails validation: {problems[0]}")
    g = plan | kb
    offered = performer_tasks(kb)
    choices: dict[str, list[Candidate]] = {}
    for task in behaviour_tasks(plan, root):
        found = []
        for agent, behaviour, goal, btask in offered:
            result = compatible(task, btask, g)
            if result:
                found.append(Candidate(agent, behaviour, goal, btask, result.pairing))
        choices[task] = sorted(found, key=Candidate.sort_key)
    return CandidateAssignment(root, choices)
