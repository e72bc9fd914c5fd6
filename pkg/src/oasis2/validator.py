"""Structural conformance rules V1-V8 over arbitrary typed graphs.

Validation never raises: malformed input of any kind becomes a list of
:class:`Violation` records, sorted by rule and first subject.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass

from oasis2.graph import TypedGraph
from oasis2.structure import AsNew, element_of, parent_of, reference, task_parts
from oasis2.vocab import (
    CHILD_LINKS,
    CHILD_PROP,
    FAMILIES,
    STRUCTURAL,
    TASK_ELEMENTS,
    Element,
    Layer,
    Prop,
)

RULES = ("V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8")


@dataclass(frozen=True, order=True)
class Violation:
    rule: str
    subjects: tuple[str, ...]
    message: str

    def to_line(self) -> str:
        return f"{self.rule}\t{' '.join(self.subjects)}\t{self.message}"

    def to_dict(self) -> dict:
        return {"rule": self.rule, "subjects": list(self.subjects), "message": self.message}

    def __str__(self) -> str:
        return self.to_line()


class _Report:
    def __init__(self) -> None:
        self.found: set[Violation] = set()

    def add(self, rule: str, subjects, message: str) -> None:
        self.found.add(Violation(rule, tuple(subjects), message))


# Root link each layer's behaviour node must receive.
_ROOT_LINK = {
    Layer.TEMPLATE: Prop.HAS_BEHAVIOUR,
    Layer.BEHAVIOUR: Prop.HAS_BEHAVIOUR,
    Layer.PLANNING: Prop.REQUESTS_PLAN,
    Layer.EXECUTION: Prop.PERFORMS_PLAN_EXECUTION,
}

# Cross-layer families: rule, source layer, target layer.
_FAMILY_RULES = {
    Prop.OVERLOADS: ("V4", Layer.BEHAVIOUR, Layer.TEMPLATE),
    Prop.DRAWN_BY: ("V6", Layer.EXECUTION, Layer.BEHAVIOUR),
    Prop.HAS_EXECUTION: ("V6", Layer.PLANNING, Layer.EXECUTION),
    Prop.SUBMITTED_TO: ("V7", Layer.PLANNING, Layer.BEHAVIOUR),
    Prop.ENTRUSTED_BY: ("V7", Layer.ENTRUSTMENT, Layer.PLANNING),
    Prop.ENTRUSTED_FROM: ("V7", Layer.ENTRUSTMENT, Layer.BEHAVIOUR),
    Prop.ENTRUSTED_WITH: ("V7", Layer.ENTRUSTMENT, Layer.EXECUTION),
}


def validate(g: TypedGraph) -> list[Violation]:
    """All violations of ``g``; empty iff the graph conforms."""
    report = _Report()
    for check in (_v1_layers, _v2_skeleton, _v3_references, _families,
                  _v5_acyclic, _v7_entrusts, _v8_bindings):
        check(g, report)
    return sorted(report.found, key=lambda v: (v.rule, v.subjects[:1], v.subjects, v.message))


def _label(x) -> str:
    return str(x)


def _ambiguous(g: TypedGraph, *nodes: str) -> bool:
    """Nodes with several layers are reported once, under V1."""
    return any(len(g.layers_of(n)) > 1 for n in nodes)


def _v1_layers(g: TypedGraph, report: _Report) -> None:
    for node, classes in sorted(g.nodes.items()):
        layers = sorted(_label(c) for c in classes if isinstance(c, Layer))
        structural = any(c in STRUCTURAL for c in classes)
        if len(layers) > 1:
            report.add("V1", [node], f"tagged with several layers: {', '.join(layers)}")
        elif structural and not layers:
            report.add("V1", [node], "structural node without a layer tag")


def _v2_skeleton(g: TypedGraph, report: _Report) -> None:
    def count(node: str, prop: Prop) -> int:
        return len(g.objects(node, prop))

    for node in sorted(g.nodes):
        found = [c for c in g.classes_of(node) if c in STRUCTURAL]
        if len(found) > 1:
            report.add("V2", [node], "typed with several structural classes: "
                       + ", ".join(sorted(map(_label, found))))
            continue
        if not found:
            continue
        el = found[0]
        layer = g.layer_of(node)
        if el is Element.BEHAVIOUR:
            if count(node, Prop.CONSISTS_OF_GOAL) == 0:
                report.add("V2", [node], "behaviour has no goal")
            link = _ROOT_LINK.get(layer)  # None for entrustments and ambiguous tags
            if link is not None and not g.subjects(link, node):
                report.add("V2", [node], f"{layer} behaviour is not reached by {link}")
        elif el is Element.GOAL:
            if count(node, Prop.CONSISTS_OF_TASK) == 0:
                report.add("V2", [node], "goal has no task")
        elif el is Element.TASK:
            n = count(node, Prop.HAS_OPERATOR)
            if n != 1:
                report.add("V2", [node], f"task has {n} operators, expected exactly one")
            for prop in (Prop.HAS_ARGUMENT, Prop.HAS_OBJECT):
                if count(node, prop) > 1:
                    report.add("V2", [node], f"task has more than one {prop}")
        if el in CHILD_PROP:
            parents = g.subjects(CHILD_PROP[el], node)
            if len(parents) != 1:
                report.add("V2", [node], f"{el} has {len(parents)} parents via {CHILD_PROP[el]}")

    for t in g.triples:
        p = t.property
        if p in CHILD_LINKS:
            domain, rng = CHILD_LINKS[p]
            if not g.has_class(t.subject, domain) or not g.has_class(t.object, rng):
                report.add("V2", [t.subject, t.object], f"{p} must link a {domain} to a {rng}")
            elif not _ambiguous(g, *t[::2]) and g.layer_of(t.subject) != g.layer_of(t.object):
                report.add("V2", [t.subject, t.object], f"{p} crosses layers")
        elif p is Prop.HAS_BEHAVIOUR:
            if not g.has_class(t.subject, Element.AGENT) or not g.has_class(t.object, Element.BEHAVIOUR):
                report.add("V2", [t.subject, t.object], "hasBehaviour must link an Agent to a Behaviour")
            elif not _ambiguous(g, t.object) and g.layer_of(t.object) not in (Layer.TEMPLATE, Layer.BEHAVIOUR):
                report.add("V2", [t.subject, t.object], "hasBehaviour must target a template or concrete behaviour")
        elif p in (Prop.REQUESTS_PLAN, Prop.PERFORMS_PLAN_EXECUTION):
            want = Layer.PLANNING if p is Prop.REQUESTS_PLAN else Layer.EXECUTION
            if (not g.has_class(t.subject, Element.AGENT)
                    or not g.has_class(t.object, Element.BEHAVIOUR)
                    or (not _ambiguous(g, t.object) and g.layer_of(t.object) is not want)):
                report.add("V2", [t.subject, t.object], f"{p} must link an Agent to a {want} behaviour")
        elif p is Prop.DEPENDS_ON:
            a, b = element_of(g, t.subject), element_of(g, t.object)
            if a != b or a not in (Element.GOAL, Element.TASK):
                report.add("V2", [t.subject, t.object], "dependsOn must link two goals or two tasks")
            elif parent_of(g, t.subject) is not None and _root(g, t.subject) != _root(g, t.object):
                report.add("V2", [t.subject, t.object], "dependsOn crosses behaviours")


def _root(g: TypedGraph, node: str) -> str | None:
    seen = set()
    while node is not None and element_of(g, node) is not Element.BEHAVIOUR:
        if node in seen:
            return None  # parent cycle; reported elsewhere under V2
        seen.add(node)
        node = parent_of(g, node)
    return node


def _v3_references(g: TypedGraph, report: _Report) -> None:
    for el in TASK_ELEMENTS:
        for node in g.instances(el):
            exact = g.objects(node, Prop.REFERS_EXACTLY_TO)
            new = g.objects(node, Prop.REFERS_AS_NEW_TO)
            if len(exact) + len(new) != 1:
                report.add("V3", [node], f"{el} has {len(exact)} refersExactlyTo and "
                           f"{len(new)} refersAsNewTo edges, expected exactly one in total")
    for t in g.triples:
        if t.property in (Prop.REFERS_EXACTLY_TO, Prop.REFERS_AS_NEW_TO):
            if element_of(g, t.subject) not in TASK_ELEMENTS:
                report.add("V3", [t.subject], f"{t.property} used on a node that is not a task element")
            if element_of(g, t.object) is not None:
                report.add("V3", [t.subject, t.object], f"{t.property} targets a structural node")
        elif t.property is Prop.REFERS_AS_INSTANCE_OF:
            if not g.subjects(Prop.REFERS_AS_NEW_TO, t.subject):
                report.add("V3", [t.subject], "refersAsInstanceOf on an entity no element refers to as new")


def _families(g: TypedGraph, report: _Report) -> None:
    for family, (rule, src_layer, dst_layer) in _FAMILY_RULES.items():
        edges = g.match(prop=family)
        linked = {(t.subject, t.object) for t in edges}
        for s, p, o in edges:
            el = p.element
            if not g.has_class(s, el) or not g.has_class(o, el):
                report.add(rule, [s, o], f"{p} must link two {el} nodes")
                continue
            if _ambiguous(g, s, o):
                continue
            if g.layer_of(s) is not src_layer or g.layer_of(o) is not dst_layer:
                report.add(rule, [s, o], f"{p} must run from {src_layer} to {dst_layer}")
                continue
            if el is Element.BEHAVIOUR:
                continue
            ps, po = parent_of(g, s), parent_of(g, o)
            if ps is None or po is None:
                continue  # reported under V2
            if (ps, po) not in linked:
                parent_prop = FAMILIES[family][element_of(g, ps)]
                report.add(rule, [s, o], f"{p} does not commute: parents {ps} and {po} "
                           f"lack {parent_prop}")


def _v5_acyclic(g: TypedGraph, report: _Report) -> None:
    edges = {(t.subject, t.object) for t in g.match(prop=Prop.DEPENDS_ON)}
    # Peel off one cycle at a time so every cycle is reported.
    while True:
        sorter: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
        for s, o in sorted(edges):
            sorter.add(s, o)
        try:
            sorter.prepare()
            return
        except graphlib.CycleError as exc:
            cycle = exc.args[1]
            nodes = sorted(set(cycle))
            report.add("V5", nodes, "dependsOn cycle: " + " -> ".join(cycle))
            edges.discard((cycle[0], cycle[1]))
            edges.discard((cycle[1], cycle[0]))


def _v7_entrusts(g: TypedGraph, report: _Report) -> None:
    for s, _, o in g.match(prop=Prop.ENTRUSTS):
        if not (g.has_class(s, Element.TASK) and g.layer_of(s) is Layer.ENTRUSTMENT):
            report.add("V7", [s, o], "entrusts must start from an entrusted task")
        if not g.has_class(o, Element.AGENT):
            report.add("V7", [s, o], "entrusts must target an Agent")


def _v8_bindings(g: TypedGraph, report: _Report) -> None:
    for el in TASK_ELEMENTS:
        for node in g.instances(el, Layer.EXECUTION):
            if g.objects(node, Prop.REFERS_AS_NEW_TO):
                report.add("V8", [node], "execution element is still unbound (refersAsNewTo)")
            required = _required_classes(g, node, el)
            for target in sorted(g.objects(node, Prop.REFERS_EXACTLY_TO)):
                for cls in sorted(required):
                    if not g.is_instance_of(target, cls):
                        report.add("V8", [node, target], f"{target} is not an instance of {cls}")


def _required_classes(g: TypedGraph, node: str, el: Element) -> set[str]:
    if el is Element.ARGUMENT:
        task = parent_of(g, node)
        counterparts = {task_parts(g, b).argument
                        for b in g.objects(task or "", Prop.TASK_EXECUTION_DRAWN_BY)}
    else:
        counterparts = g.objects(node, Prop.DRAWN_BY)
    required: set[str] = set()
    for other in counterparts:
        if other is None:
            continue
        ref = reference(g, other)
        if isinstance(ref, AsNew):
            required |= set(ref.classes)
    return required


def format_report(violations: list[Violation]) -> str:
    return "".join(v.to_line() + "\n" for v in violations)
