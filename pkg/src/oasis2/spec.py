"""Declarative behaviour specifications and the YAML/JSON spec-file format.

A spec file looks like::

    prefixes:
      ex: "urn:example:swb#"
    agent: ex:SWB_contract            # owner of the behaviours (templates, behaviours)
    requester: ex:alice               # plans only
    behaviours:
      - id: ex:mint_ERC721_token_behaviour
        goals:
          - id: ex:mint_ERC721_token_goal
            tasks:
              - id: ex:mint_ERC721_token_task
                operator: ex:mint                      # shorthand for {exactly: ex:mint}
                argument: {exactly: ex:blockchain_digital_token}
                object: {as_new: ex:token_template, instance_of: [ex:EthereumTokenERC721]}
                outputs:
                  - {as_new: ex:token_template, instance_of: [ex:EthereumTokenERC721]}
                depends_on: []
    overloads: {ex:concrete_behaviour: ex:template_behaviour}   # behaviour step
    submitted_to: {ex:plan_task: ex:behaviour_task}             # plan step
    facts:
      types: {ex:SWB_token32: [ex:EthereumTokenERC721]}
      subclasses: {ex:SWBWheatToken: [ex:EthereumTokenERC721]}

Prefixed names are expanded with ``prefixes``; any other string containing a
colon is taken as an absolute IRI.
"""

from __future__ import annotations

import graphlib
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from oasis2.errors import InvalidIri, SpecError
from oasis2.graph import TypedGraph, check_iri
from oasis2.structure import AsNew, Exactly, Ref


@dataclass
class TaskSpec:
    task_id: str
    operator: Ref
    argument: Ref | None = None
    object: Ref | None = None
    inputs: list[Ref] = field(default_factory=list)
    outputs: list[Ref] = field(default_factory=list)
    depends_on: set[str] = field(default_factory=set)

    def element_iris(self) -> dict[str, str]:
        """Deterministic IRIs minted for this task's elements, keyed by slot
        (``operator``, ``argument``, ``object``, ``input_1``, ``output_1`` ...)."""
        t = self.task_id
        iris = {"operator": f"{t}_operator"}
        if self.argument is not None:
            iris["argument"] = f"{t}_operator_argument"
        if self.object is not None:
            iris["object"] = f"{t}_object"
        for kind, refs in (("input", self.inputs), ("output", self.outputs)):
            if len(refs) == 1:
                iris[f"{kind}_1"] = f"{t}_{kind}"
            else:
                for i in range(1, len(refs) + 1):
                    iris[f"{kind}_{i}"] = f"{t}_{kind}_{i}"
        return iris


@dataclass
class GoalSpec:
    goal_id: str
    tasks: list[TaskSpec]
    depends_on: set[str] = field(default_factory=set)


@dataclass
class BehaviourDef:
    behaviour_id: str
    goals: list[GoalSpec]


@dataclass
class BehaviourSpec:
    """An agent's behaviours, goals and tasks.  ``agent`` may be None for plans,
    whose owner is the requester passed to the plan builder."""

    agent: str | None
    behaviours: list[BehaviourDef]

    def tasks(self) -> list[TaskSpec]:
        return [t for b in self.behaviours for g in b.goals for t in g.tasks]

    def goals(self) -> list[GoalSpec]:
        return [g for b in self.behaviours for g in b.goals]


def refs_of(task: TaskSpec) -> list[Ref]:
    out = [task.operator]
    out += [r for r in (task.argument, task.object) if r is not None]
    return out + list(task.inputs) + list(task.outputs)


def check_spec(spec: BehaviourSpec) -> None:
    """Raise SpecError unless the spec is well formed."""
    if not spec.behaviours:
        raise SpecError("spec declares no behaviours")
    seen: set[str] = set()

    def claim(iri: str, what: str) -> None:
        try:
            check_iri(iri)
        except InvalidIri as exc:
            raise SpecError(f"{what}: {exc}") from None
        if iri in seen:
            raise SpecError(f"duplicate IRI {iri} ({what})")
        seen.add(iri)

    if spec.agent is not None:
        claim(spec.agent, "agent")
    sorter: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
    for b in spec.behaviours:
        claim(b.behaviour_id, "behaviour")
        if not b.goals:
            raise SpecError(f"behaviour {b.behaviour_id} has no goals")
        goal_ids = {g.goal_id for g in b.goals}
        task_ids = {t.task_id for g in b.goals for t in g.tasks}
        for goal in b.goals:
            claim(goal.goal_id, "goal")
            if not goal.tasks:
                raise SpecError(f"goal {goal.goal_id} has no tasks")
            for dep in sorted(goal.depends_on):
                if dep not in goal_ids:
                    raise SpecError(f"goal {goal.goal_id} depends on {dep} outside its behaviour")
            sorter.add(goal.goal_id, *sorted(goal.depends_on))
            for task in goal.tasks:
                claim(task.task_id, "task")
                for slot, iri in task.element_iris().items():
                    claim(iri, f"{slot} of {task.task_id}")
                for dep in sorted(task.depends_on):
                    if dep not in task_ids:
                        raise SpecError(f"task {task.task_id} depends on {dep} outside its behaviour")
                sorter.add(task.task_id, *sorted(task.depends_on))
                for ref in refs_of(task):
                    _check_ref(ref, task.task_id)
    try:
        sorter.prepare()
    except graphlib.CycleError as exc:
        raise SpecError(f"dependsOn cycle: {' -> '.join(exc.args[1])}") from None
    for task in spec.tasks():
        for ref in refs_of(task):
            target = ref.target if isinstance(ref, Exactly) else ref.entity
            if target in seen:
                raise SpecError(f"{task.task_id} refers to structural node {target}")


def _check_ref(ref: Ref, where: str) -> None:
    try:
        if isinstance(ref, Exactly):
            check_iri(ref.target)
        elif isinstance(ref, AsNew):
            check_iri(ref.entity)
            for cls in ref.classes:
                check_iri(cls)
        else:
            raise SpecError(f"{where}: not a reference: {ref!r}")
    except InvalidIri as exc:
        raise SpecError(f"{where}: {exc}") from None


# -- spec files --------------------------------------------------------------

@dataclass
class SpecDocument:
    spec: BehaviourSpec
    requester: str | None = None
    overloads: dict[str, str] = field(default_factory=dict)
    submitted_to: dict[str, str] = field(default_factory=dict)
    facts: TypedGraph = field(default_factory=TypedGraph)
    prefixes: dict[str, str] = field(default_factory=dict)


class _Expander:
    def __init__(self, prefixes: Mapping[str, str]):
        self.prefixes = dict(prefixes)

    def __call__(self, term) -> str:
        if not isinstance(term, str):
            raise SpecError(f"expected an IRI string, got {term!r}")
        prefix, sep, local = term.partition(":")
        if sep and prefix in self.prefixes:
            return self.prefixes[prefix] + local
        if not sep:
            raise SpecError(f"{term!r} is neither a prefixed name nor an absolute IRI")
        return term


def _ref(raw, expand: _Expander, where: str) -> Ref:
    if isinstance(raw, str):
        return Exactly(expand(raw))
    if isinstance(raw, Mapping):
        if "exactly" in raw:
            return Exactly(expand(raw["exactly"]))
        if "as_new" in raw:
            return AsNew(expand(raw["as_new"]), [expand(c) for c in raw.get("instance_of", [])])
    raise SpecError(f"{where}: cannot read reference {raw!r}")


def _list(raw, where: str, *, of_mappings: bool = False) -> list:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise SpecError(f"{where} must be a list")
    if of_mappings and not all(isinstance(item, Mapping) for item in raw):
        raise SpecError(f"every entry of {where} must be a mapping")
    return raw


def spec_from_dict(data) -> SpecDocument:
    """Build a SpecDocument from the parsed YAML/JSON mapping."""
    if not isinstance(data, Mapping):
        raise SpecError("spec document must be a mapping")
    prefixes = data.get("prefixes") or {}
    expand = _Expander(prefixes)

    behaviours = []
    for b in _list(data.get("behaviours"), "behaviours", of_mappings=True):
        goals = []
        for g in _list(b.get("goals"), f"goals of {b.get('id')}", of_mappings=True):
            tasks = []
            for t in _list(g.get("tasks"), f"tasks of {g.get('id')}", of_mappings=True):
                tid = expand(t.get("id"))
                if not t.get("operator"):
                    raise SpecError(f"task {tid} has no operator")
                tasks.append(TaskSpec(
                    task_id=tid,
                    operator=_ref(t["operator"], expand, tid),
                    argument=_ref(t["argument"], expand, tid) if t.get("argument") else None,
                    object=_ref(t["object"], expand, tid) if t.get("object") else None,
                    inputs=[_ref(r, expand, tid) for r in _list(t.get("inputs"), tid)],
                    outputs=[_ref(r, expand, tid) for r in _list(t.get("outputs"), tid)],
                    depends_on={expand(d) for d in _list(t.get("depends_on"), tid)},
                ))
            gid = expand(g.get("id"))
            goals.append(GoalSpec(gid, tasks, {expand(d) for d in _list(g.get("depends_on"), gid)}))
        behaviours.append(BehaviourDef(expand(b.get("id")), goals))

    agent = expand(data["agent"]) if data.get("agent") else None
    spec = BehaviourSpec(agent, behaviours)
    check_spec(spec)

    facts = TypedGraph()
    raw_facts = data.get("facts") or {}
    for node, classes in (raw_facts.get("types") or {}).items():
        facts.add_entity(expand(node), [expand(c) for c in classes])
    for sub, sups in (raw_facts.get("subclasses") or {}).items():
        for sup in sups:
            facts.add_subclass(expand(sub), expand(sup))
    for prefix, ns in prefixes.items():
        facts.bind(prefix, ns)

    def mapping(key: str) -> dict[str, str]:
        return {expand(k): expand(v) for k, v in (data.get(key) or {}).items()}

    return SpecDocument(
        spec=spec,
        requester=expand(data["requester"]) if data.get("requester") else None,
        overloads=mapping("overloads"),
        submitted_to=mapping("submitted_to"),
        facts=facts,
        prefixes=dict(prefixes),
    )


def load_spec(path: str | Path) -> SpecDocument:
    """Read a UTF-8 YAML or JSON spec file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"{path}: {exc}") from None
    if data is None:
        raise SpecError(f"{path}: empty spec file")
    return spec_from_dict(data)
