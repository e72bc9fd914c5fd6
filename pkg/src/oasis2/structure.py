"""Reading the behaviour/goal/task skeleton and element references of a graph."""

from __future__ import annotations

import re
from dataclasses import dataclass

from oasis2.graph import TypedGraph
from oasis2.vocab import CHILD_LINKS, CHILD_PROP, STRUCTURAL, Element, Layer, Prop


@dataclass(frozen=True)
class Exactly:
    """Reference to one precise, named individual."""

    target: str


@dataclass(frozen=True)
class AsNew:
    """Reference to a placeholder entity that must instantiate ``classes``."""

    entity: str
    classes: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(self.classes))


Ref = Exactly | AsNew


@dataclass(frozen=True)
class TaskParts:
    operator: str | None
    argument: str | None
    object: str | None
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def elements(self) -> list[str]:
        single = [e for e in (self.operator, self.argument, self.object) if e]
        return single + list(self.inputs) + list(self.outputs)


_DIGITS = re.compile(r"(\d+)")


def natural_key(iri: str) -> list:
    """Sort key that orders ``x_input_2`` before ``x_input_10``."""
    return [int(p) if p.isdigit() else p for p in _DIGITS.split(iri)]


def element_of(g: TypedGraph, node: str) -> Element | None:
    """The structural element class of ``node`` (None if it has none or several)."""
    found = [c for c in g.classes_of(node) if c in STRUCTURAL]
    return found[0] if len(found) == 1 else None


def only(values: set[str]) -> str | None:
    return next(iter(values)) if len(values) == 1 else None


def parent_of(g: TypedGraph, node: str) -> str | None:
    """Structural parent: behaviour of a goal, goal of a task, task of an element."""
    el = element_of(g, node)
    if el is None or el not in CHILD_PROP:
        return None
    return only(g.subjects(CHILD_PROP[el], node))


def children(g: TypedGraph, node: str, prop: Prop) -> list[str]:
    return sorted(g.objects(node, prop), key=natural_key)


def goals_of(g: TypedGraph, behaviour: str) -> list[str]:
    return children(g, behaviour, Prop.CONSISTS_OF_GOAL)


def tasks_of(g: TypedGraph, goal: str) -> list[str]:
    return children(g, goal, Prop.CONSISTS_OF_TASK)


def behaviour_tasks(g: TypedGraph, behaviour: str) -> list[str]:
    return [t for goal in goals_of(g, behaviour) for t in tasks_of(g, goal)]


def task_parts(g: TypedGraph, task: str) -> TaskParts:
    """Elements of a task; singular slots are None when absent or ambiguous."""
    return TaskParts(
        operator=only(g.objects(task, Prop.HAS_OPERATOR)),
        argument=only(g.objects(task, Prop.HAS_ARGUMENT)),
        object=only(g.objects(task, Prop.HAS_OBJECT)),
        inputs=tuple(children(g, task, Prop.HAS_INPUT)),
        outputs=tuple(children(g, task, Prop.HAS_OUTPUT)),
    )


def roots(g: TypedGraph, layer: Layer) -> list[str]:
    """Behaviour-class nodes of one layer, sorted."""
    return g.instances(Element.BEHAVIOUR, layer)


def root_of(g: TypedGraph, node: str) -> str | None:
    """Walk parents up to the behaviour node."""
    seen = set()
    while node is not None and node not in seen:
        if g.has_class(node, Element.BEHAVIOUR):
            return node
        seen.add(node)
        node = parent_of(g, node)
    return None


def agents_of(g: TypedGraph, behaviour: str) -> list[str]:
    """Agents owning (hasBehaviour) a template or concrete behaviour."""
    return sorted(g.subjects(Prop.HAS_BEHAVIOUR, behaviour))


def reference(g: TypedGraph, element: str) -> Ref | None:
    """The element's reference, or None unless exactly one refers* edge exists."""
    exact = g.objects(element, Prop.REFERS_EXACTLY_TO)
    new = g.objects(element, Prop.REFERS_AS_NEW_TO)
    if len(exact) + len(new) != 1:
        return None
    if exact:
        return Exactly(next(iter(exact)))
    entity = next(iter(new))
    return AsNew(entity, g.objects(entity, Prop.REFERS_AS_INSTANCE_OF))


def structural_subgraph(g: TypedGraph, layer: Layer) -> TypedGraph:
    """Nodes of ``layer`` reachable from its behaviour roots, the edges among
    them and their references; agent links and cross-layer edges dropped."""
    out = TypedGraph()
    seen: set[str] = set()
    for root in roots(g, layer):
        stack = [root]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            out.add_entity(node, g.classes_of(node))
            for prop in (*CHILD_LINKS, Prop.DEPENDS_ON):
                for child in g.objects(node, prop):
                    if g.layer_of(child) is layer:
                        stack.append(child)
            for prop in (Prop.REFERS_EXACTLY_TO, Prop.REFERS_AS_NEW_TO):
                for target in g.objects(node, prop):
                    out.add_entity(target, g.classes_of(target))
                    for cls in g.objects(target, Prop.REFERS_AS_INSTANCE_OF):
                        out.add_entity(cls, g.classes_of(cls))
    for t in g.triples:
        if t.subject in out and t.object in out and t.property not in (
                Prop.HAS_BEHAVIOUR, Prop.REQUESTS_PLAN, Prop.PERFORMS_PLAN_EXECUTION):
            if t.property.parent is None:
                out.add_triple(*t)
    return out
