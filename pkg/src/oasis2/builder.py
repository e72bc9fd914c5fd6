"""Graph builders for the five OASIS 2 layers.

Templates, behaviours and plans are emitted from a :class:`BehaviourSpec`;
executions and entrustments mirror an existing behaviour or plan.  Every
builder returns a self-contained graph: the new layer together with the
graphs it links to, so the output can be validated (or sent) on its own.
"""

from __future__ import annotations

from collections.abc import Mapping

from oasis2.errors import (
    AgentMismatch,
    BindingError,
    IncompatibleAssignment,
    IncompleteAssignment,
    MissingExecution,
    OverloadMismatch,
    SpecError,
    SubmissionMismatch,
)
from oasis2.graph import TypedGraph
from oasis2.matcher import compatible, plan_root
from oasis2.spec import BehaviourSpec, TaskSpec, check_spec
from oasis2.structure import (
    Exactly,
    Ref,
    agents_of,
    behaviour_tasks,
    element_of,
    goals_of,
    only,
    parent_of,
    reference,
    root_of,
    task_parts,
)
from oasis2.vocab import CHILD_PROP, FAMILIES, Element, Layer, Prop, member_for

_SLOT_ELEMENT = {"operator": Element.OPERATOR, "argument": Element.ARGUMENT,
                 "object": Element.OBJECT, "input": Element.INPUT, "output": Element.OUTPUT}

# Elements taking part in the overloads/drawnBy/submittedTo/hasExecution families.
_SEVEN = frozenset(FAMILIES[Prop.OVERLOADS])


def _task_refs(task: TaskSpec) -> dict[str, Ref]:
    refs: dict[str, Ref] = {"operator": task.operator}
    if task.argument is not None:
        refs["argument"] = task.argument
    if task.object is not None:
        refs["object"] = task.object
    for kind, values in (("input", task.inputs), ("output", task.outputs)):
        for i, ref in enumerate(values, 1):
            refs[f"{kind}_{i}"] = ref
    return refs


def _add_ref(g: TypedGraph, element: str, ref: Ref, is_operator: bool) -> None:
    extra = [Element.ACTION] if is_operator else []
    if isinstance(ref, Exactly):
        g.add_entity(ref.target, extra)
        g.add_triple(element, Prop.REFERS_EXACTLY_TO, ref.target)
    else:
        # Placeholders are template entities wherever they are used.
        g.add_entity(ref.entity, extra, Layer.TEMPLATE)
        g.add_triple(element, Prop.REFERS_AS_NEW_TO, ref.entity)
        for cls in sorted(ref.classes):
            g.add_entity(cls)
            g.add_triple(ref.entity, Prop.REFERS_AS_INSTANCE_OF, cls)


def _emit(spec: BehaviourSpec, layer: Layer, g: TypedGraph) -> None:
    check_spec(spec)
    for b in spec.behaviours:
        g.add_entity(b.behaviour_id, [Element.BEHAVIOUR], layer)
        for goal in b.goals:
            g.add_entity(goal.goal_id, [Element.GOAL], layer)
            g.add_triple(b.behaviour_id, Prop.CONSISTS_OF_GOAL, goal.goal_id)
            for task in goal.tasks:
                g.add_entity(task.task_id, [Element.TASK], layer)
                g.add_triple(goal.goal_id, Prop.CONSISTS_OF_TASK, task.task_id)
                refs = _task_refs(task)
                for slot, iri in task.element_iris().items():
                    el = _SLOT_ELEMENT[slot.split("_")[0]]
                    g.add_entity(iri, [el], layer)
                    g.add_triple(task.task_id, CHILD_PROP[el], iri)
                    _add_ref(g, iri, refs[slot], el is Element.OPERATOR)
    for goal in spec.goals():
        for dep in sorted(goal.depends_on):
            g.add_triple(goal.goal_id, Prop.DEPENDS_ON, dep)
    for task in spec.tasks():
        for dep in sorted(task.depends_on):
            g.add_triple(task.task_id, Prop.DEPENDS_ON, dep)


def _emit_with_agent(spec: BehaviourSpec, layer: Layer) -> TypedGraph:
    if spec.agent is None:
        raise SpecError("spec has no agent")
    g = TypedGraph()
    g.add_entity(spec.agent, [Element.AGENT], layer)
    _emit(spec, layer, g)
    for b in spec.behaviours:
        g.add_triple(spec.agent, Prop.HAS_BEHAVIOUR, b.behaviour_id)
    return g


def build_template(spec: BehaviourSpec) -> TypedGraph:
    """Abstract agent template: every structural node is a TemplateThing."""
    return _emit_with_agent(spec, Layer.TEMPLATE)


# -- cross-layer element maps ---------------------------------------------------

def pair_elements(g: TypedGraph, src_task: str, dst_task: str,
                  params: Mapping[str, str] | None = None) -> dict[str, str]:
    """Pair the elements of two tasks slot by slot.  Parameters follow
    ``params`` when given, otherwise their natural order (equal counts only)."""
    a, b = task_parts(g, src_task), task_parts(g, dst_task)
    pairs = {}
    for x, y in ((a.operator, b.operator), (a.argument, b.argument), (a.object, b.object)):
        if x and y:
            pairs[x] = y
    if params is not None:
        pairs.update(params)
    else:
        for xs, ys in ((a.inputs, b.inputs), (a.outputs, b.outputs)):
            if len(xs) == len(ys):
                pairs.update(zip(xs, ys))
    return pairs


def _complete_map(g: TypedGraph, scope: list[str], partial: Mapping[str, str],
                  target_layer: Layer, error: type[Exception],
                  by_compatibility: bool) -> dict[str, str]:
    """Extend a map given at least for tasks to every structural element under
    the ``scope`` roots (arguments excepted), then check class equality,
    target layer, totality and commutation with the parent structure."""
    full = dict(partial)
    for src, dst in sorted(partial.items()):
        if element_of(g, src) is Element.TASK and element_of(g, dst) is Element.TASK:
            params = None
            if by_compatibility:
                result = compatible(src, dst, g)
                if not result:
                    raise error(f"{dst} cannot realise {src}")
                params = result.pairing
            for x, y in pair_elements(g, src, dst, params).items():
                full.setdefault(x, y)
            goal, dgoal = parent_of(g, src), parent_of(g, dst)
            if goal and dgoal:
                full.setdefault(goal, dgoal)
                root, droot = parent_of(g, goal), parent_of(g, dgoal)
                if root and droot:
                    full.setdefault(root, droot)

    nodes = _structure_nodes(g, scope)
    for src in sorted(set(full) - set(nodes)):
        raise error(f"{src} is not an element of the graph being built")
    for src in nodes:
        el = element_of(g, src)
        if el is Element.ARGUMENT:
            full.pop(src, None)
            continue
        if src not in full:
            raise error(f"{src} ({el}) is not mapped")
        dst = full[src]
        if dst not in g or g.layer_of(dst) is not target_layer:
            raise error(f"{dst} is not a {target_layer} node")
        if element_of(g, dst) is not el:
            raise error(f"{src} is a {el} but {dst} is a {element_of(g, dst)}")
        parent = parent_of(g, src)
        if parent is not None and full.get(parent) != parent_of(g, dst):
            raise error(f"mapping of {src} does not commute with its parent {parent}")
    return full


def _structure_nodes(g: TypedGraph, scope: list[str]) -> list[str]:
    out = []
    for root in scope:
        out.append(root)
        for goal in goals_of(g, root):
            out.append(goal)
            for task in sorted(g.objects(goal, Prop.CONSISTS_OF_TASK)):
                out.append(task)
                out.extend(task_parts(g, task).elements())
    return out


def _link_family(g: TypedGraph, family: Prop, pairs: Mapping[str, str]) -> None:
    for src, dst in sorted(pairs.items()):
        prop = member_for(family, element_of(g, src))
        if prop is not None:
            g.add_triple(src, prop, dst)


def build_behaviour(spec: BehaviourSpec,
                    template: tuple[TypedGraph, Mapping[str, str]] | None = None) -> TypedGraph:
    """Concrete behaviour, optionally overloading a template.

    The overload map must name at least each task's template counterpart;
    goals, behaviours and task elements are completed from it.  The result
    includes the template graph when one is given.
    """
    g = _emit_with_agent(spec, Layer.BEHAVIOUR)
    if template is None:
        return g
    tgraph, overloads = template
    g = tgraph | g
    scope = [b.behaviour_id for b in spec.behaviours]
    full = _complete_map(g, scope, overloads, Layer.TEMPLATE, OverloadMismatch,
                         by_compatibility=False)
    _link_family(g, Prop.OVERLOADS, full)
    return g


def build_plan(spec: BehaviourSpec, requester: str,
               target: tuple[TypedGraph, Mapping[str, str]] | None = None) -> TypedGraph:
    """Plan requested by ``requester``, optionally submitted to a behaviour.

    The plan's root is a Behaviour node tagged PlanningThing.  With a target,
    every plan element is linked to its performer counterpart through the
    submittedTo subproperties; the submission map must name each task.
    """
    g = TypedGraph()
    g.add_entity(requester, [Element.AGENT], Layer.BEHAVIOUR)
    _emit(spec, Layer.PLANNING, g)
    for b in spec.behaviours:
        g.add_triple(requester, Prop.REQUESTS_PLAN, b.behaviour_id)
    if target is None:
        return g
    bgraph, submission = target
    g = bgraph | g
    scope = [b.behaviour_id for b in spec.behaviours]
    full = _complete_map(g, scope, submission, Layer.BEHAVIOUR, SubmissionMismatch,
                         by_compatibility=True)
    _link_family(g, Prop.SUBMITTED_TO, full)
    return g


# -- mirrors ---------------------------------------------------------------------

def _mirror_structure(g: TypedGraph, src: TypedGraph, root: str, tasks: list[str],
                      layer: Layer, suffix: str) -> dict[str, str]:
    """Copy ``root`` with the goals and tasks listed (plus their elements)
    into ``layer``; returns original -> copy."""
    mirror: dict[str, str] = {root: f"{root}_{suffix}"}
    g.add_entity(mirror[root], [Element.BEHAVIOUR], layer)
    for goal in goals_of(src, root):
        chosen = [t for t in sorted(src.objects(goal, Prop.CONSISTS_OF_TASK)) if t in tasks]
        if not chosen:
            continue
        mirror[goal] = f"{goal}_{suffix}"
        g.add_entity(mirror[goal], [Element.GOAL], layer)
        g.add_triple(mirror[root], Prop.CONSISTS_OF_GOAL, mirror[goal])
        for task in chosen:
            mirror[task] = f"{task}_{suffix}"
            g.add_entity(mirror[task], [Element.TASK], layer)
            g.add_triple(mirror[goal], Prop.CONSISTS_OF_TASK, mirror[task])
            for element in task_parts(src, task).elements():
                el = element_of(src, element)
                mirror[element] = f"{element}_{suffix}"
                g.add_entity(mirror[element], [el], layer)
                g.add_triple(mirror[task], CHILD_PROP[el], mirror[element])
    for node in list(mirror):
        for dep in src.objects(node, Prop.DEPENDS_ON):
            if dep in mirror:
                g.add_triple(mirror[node], Prop.DEPENDS_ON, mirror[dep])
    return mirror


def _copy_node(g: TypedGraph, knowledge: TypedGraph, node: str) -> None:
    g.add_entity(node, [c for c in knowledge.classes_of(node) if not isinstance(c, Layer)])


def record_execution(behaviour_graph: TypedGraph, performer: str,
                     bindings: Mapping[str, str], plan: TypedGraph | None = None, *,
                     behaviour: str | None = None, tasks: list[str] | None = None,
                     plan_map: Mapping[str, str] | None = None,
                     facts: TypedGraph | None = None,
                     suffix: str = "execution") -> TypedGraph:
    """Record ``performer`` carrying out (some of) the tasks of one of its
    behaviours.

    Placeholders (refersAsNewTo) are replaced by the individuals in
    ``bindings``, each of which must instantiate the placeholder's classes
    according to ``facts``.  With a ``plan``, plan elements are linked to
    the execution through hasExecution; ``plan_map`` (plan task -> behaviour
    task) defaults to the plan's taskDescriptionSubmittedTo edges.
    """
    knowledge = behaviour_graph | plan if plan is not None else behaviour_graph.copy()
    if facts is not None:
        knowledge.update(facts)

    if tasks:
        owners = {root_of(behaviour_graph, t) for t in tasks}
        if len(owners) != 1 or None in owners:
            raise AgentMismatch(f"tasks {sorted(tasks)} do not belong to one behaviour")
        behaviour = owners.pop()
    if behaviour is None:
        mine = [b for b in sorted(behaviour_graph.objects(performer, Prop.HAS_BEHAVIOUR))
                if behaviour_graph.layer_of(b) is Layer.BEHAVIOUR]
        if len(mine) != 1:
            raise AgentMismatch(f"{performer} has {len(mine)} concrete behaviours; name one")
        behaviour = mine[0]
    if behaviour_graph.layer_of(behaviour) is not Layer.BEHAVIOUR:
        raise AgentMismatch(f"{behaviour} is not a concrete behaviour")
    if performer not in agents_of(behaviour_graph, behaviour):
        raise AgentMismatch(f"{performer} does not own {behaviour}")
    selected = list(tasks) if tasks else behaviour_tasks(behaviour_graph, behaviour)

    g = behaviour_graph | plan if plan is not None else behaviour_graph.copy()
    g.add_entity(performer, [Element.AGENT], Layer.BEHAVIOUR)
    mirror = _mirror_structure(g, behaviour_graph, behaviour, selected, Layer.EXECUTION, suffix)
    g.add_triple(performer, Prop.PERFORMS_PLAN_EXECUTION, mirror[behaviour])

    for src, copy in sorted(mirror.items()):
        el = element_of(behaviour_graph, src)
        ref = reference(behaviour_graph, src) if el not in (Element.BEHAVIOUR, Element.GOAL, Element.TASK) else None
        if ref is not None:
            target = _bind(knowledge, ref, bindings, src)
            _copy_node(g, knowledge, target)
            if el is Element.OPERATOR:
                g.add_entity(target, [Element.ACTION])
            g.add_triple(copy, Prop.REFERS_EXACTLY_TO, target)
        if el in _SEVEN:
            g.add_triple(copy, member_for(Prop.DRAWN_BY, el), src)
    for sub, sup in sorted(knowledge.subclass_edges):
        g.add_subclass(sub, sup)

    if plan is not None:
        if plan_map is None:
            plan_map = {s: o for s, _, o in plan.match(prop=Prop.TASK_SUBMITTED_TO)}
        for ptask, btask in sorted(plan_map.items()):
            if btask not in mirror:
                continue
            result = compatible(ptask, btask, knowledge)
            if not result:
                raise IncompatibleAssignment(f"plan task {ptask} is not realised by {btask}")
            pairs = pair_elements(knowledge, ptask, btask, result.pairing)
            pairs[ptask] = btask
            pgoal, bgoal = parent_of(plan, ptask), parent_of(behaviour_graph, btask)
            pairs[pgoal] = bgoal
            pairs[parent_of(plan, pgoal)] = behaviour
            _link_family(g, Prop.HAS_EXECUTION, {p: mirror[b] for p, b in pairs.items()})
    return g


def _bind(knowledge: TypedGraph, ref: Ref, bindings: Mapping[str, str], element: str) -> str:
    if isinstance(ref, Exactly):
        return ref.target
    if ref.entity not in bindings:
        raise BindingError(f"placeholder {ref.entity} used by {element} is unbound")
    target = bindings[ref.entity]
    for cls in sorted(ref.classes):
        if not knowledge.is_instance_of(target, cls):
            raise BindingError(f"{target} bound to {ref.entity} is not an instance of {cls}")
    return target


def build_entrustment(plan: TypedGraph, performer_behaviour: TypedGraph,
                      per_task_assignment: Mapping[str, str], *,
                      allow_partial: bool = False,
                      suffix: str = "entrustment") -> TypedGraph:
    """Entrust plan tasks to performer behaviour tasks.

    The entrustment mirrors the plan as EntrustmentThings, linked to the plan
    through entrustedBy and to the performer behaviours through entrustedFrom.
    Tasks may go to different behaviours.  With ``allow_partial`` unassigned
    tasks (and goals left empty) are simply not entrusted.
    """
    root = plan_root(plan)
    ptasks = behaviour_tasks(plan, root)
    missing = [t for t in ptasks if t not in per_task_assignment]
    if missing and not allow_partial:
        raise IncompleteAssignment(f"plan tasks not assigned: {', '.join(missing)}")
    stray = sorted(set(per_task_assignment) - set(ptasks))
    if stray:
        raise IncompleteAssignment(f"assigned tasks are not in plan {root}: {', '.join(stray)}")
    chosen = [t for t in ptasks if t in per_task_assignment]
    if not chosen:
        raise IncompleteAssignment(f"nothing of plan {root} is assigned")

    knowledge = plan | performer_behaviour
    links: dict[str, str] = {}
    for ptask in chosen:
        btask = per_task_assignment[ptask]
        if (element_of(performer_behaviour, btask) is not Element.TASK
                or performer_behaviour.layer_of(btask) is not Layer.BEHAVIOUR):
            raise IncompatibleAssignment(f"{btask} is not a concrete behaviour task")
        result = compatible(ptask, btask, knowledge)
        if not result:
            raise IncompatibleAssignment(f"{btask} cannot realise plan task {ptask}")
        links.update(pair_elements(knowledge, ptask, btask, result.pairing))
        links[ptask] = btask

    g = knowledge.copy()
    mirror = _mirror_structure(g, plan, root, chosen, Layer.ENTRUSTMENT, suffix)
    for src, copy in sorted(mirror.items()):
        el = element_of(plan, src)
        if el in _SLOT_ELEMENT.values():
            _add_ref(g, copy, reference(plan, src), el is Element.OPERATOR)
    _link_family(g, Prop.ENTRUSTED_BY, {copy: src for src, copy in mirror.items()})

    sources = {(mirror[p], b) for p, b in links.items()}
    for ptask in chosen:
        bgoal = parent_of(performer_behaviour, per_task_assignment[ptask])
        pgoal = parent_of(plan, ptask)
        sources.add((mirror[pgoal], bgoal))
        sources.add((mirror[root], parent_of(performer_behaviour, bgoal)))
    for src, dst in sorted(sources):
        g.add_triple(src, member_for(Prop.ENTRUSTED_FROM, element_of(g, src)), dst)
    return g


def link_entrustment_execution(entrustment: TypedGraph, execution: TypedGraph,
                               performer: str) -> TypedGraph:
    """Connect the tasks entrusted to ``performer`` with their executions
    (entrustedWith) and each task entrustment with the performer (entrusts)."""
    g = entrustment | execution
    entrusted = []
    for etask in g.instances(Element.TASK, Layer.ENTRUSTMENT):
        for btask in sorted(g.objects(etask, Prop.TASK_ENTRUSTED_FROM)):
            if performer in agents_of(g, root_of(g, btask) or ""):
                entrusted.append((etask, btask))
    if not entrusted:
        raise AgentMismatch(f"no task is entrusted to {performer}")

    g.add_entity(performer, [Element.AGENT], Layer.BEHAVIOUR)
    for etask, btask in entrusted:
        ptask = only(g.objects(etask, Prop.TASK_ENTRUSTED_BY))
        candidates = (g.subjects(Prop.TASK_EXECUTION_DRAWN_BY, btask)
                      & g.objects(ptask or "", Prop.HAS_TASK_EXECUTION))
        xtask = min(candidates) if candidates else None
        if xtask is None or g.layer_of(xtask) is not Layer.EXECUTION:
            raise MissingExecution(f"no execution of {btask} realises entrusted task {etask}")
        pairs = {etask: xtask}
        eparts, xparts = task_parts(g, etask), task_parts(g, xtask)
        if eparts.argument and xparts.argument:
            pairs[eparts.argument] = xparts.argument
        for el in (eparts.operator, eparts.object, *eparts.inputs, *eparts.outputs):
            if el is None:
                continue
            pel = only(g.objects(el, Prop.ENTRUSTED_BY))
            xel = only({x for x in g.objects(pel or "", Prop.HAS_EXECUTION)
                        if parent_of(g, x) == xtask})
            if xel is None:
                raise MissingExecution(f"no execution counterpart for {el}")
            pairs[el] = xel
        egoal, xgoal = parent_of(g, etask), parent_of(g, xtask)
        pairs[egoal] = xgoal
        pairs[parent_of(g, egoal)] = parent_of(g, xgoal)
        _link_family(g, Prop.ENTRUSTED_WITH, pairs)
        g.add_triple(etask, Prop.ENTRUSTS, performer)
    return g


__all__ = [
    "build_template",
    "build_behaviour",
    "build_plan",
    "record_execution",
    "build_entrustment",
    "link_entrustment_execution",
    "pair_elements",
]
