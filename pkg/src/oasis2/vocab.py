"""Closed OASIS 2 vocabulary: element classes, layer marker classes and properties.

Terms are kept as enum members in memory and only expanded to IRIs by the
Turtle reader/writer, so the core namespace can be chosen at I/O time.
"""

from __future__ import annotations

from enum import Enum

DEFAULT_NS = "urn:oasis2:core#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"


class Element(str, Enum):
    AGENT = "Agent"
    BEHAVIOUR = "Behaviour"
    GOAL = "GoalDescription"
    TASK = "TaskDescription"
    OPERATOR = "TaskOperator"
    ARGUMENT = "TaskOperatorArgument"
    OBJECT = "TaskObject"
    INPUT = "TaskInputParameter"
    OUTPUT = "TaskOutputParameter"
    PARAMETER = "TaskParameter"
    ACTION = "Action"

    def __str__(self) -> str:
        return self.value


class Layer(str, Enum):
    """The five marker classes that separate templates, behaviours, plans,
    executions and entrustments sharing one graph shape."""

    TEMPLATE = "TemplateThing"
    BEHAVIOUR = "BehaviourThing"
    PLANNING = "PlanningThing"
    EXECUTION = "ExecutionThing"
    ENTRUSTMENT = "EntrustmentThing"

    def __str__(self) -> str:
        return self.value


# Nodes carrying one of these classes must have exactly one layer tag.
STRUCTURAL = frozenset({
    Element.AGENT, Element.BEHAVIOUR, Element.GOAL, Element.TASK,
    Element.OPERATOR, Element.ARGUMENT, Element.OBJECT,
    Element.INPUT, Element.OUTPUT,
})

# Elements owned by a task and linked to a referent.
TASK_ELEMENTS = (Element.OPERATOR, Element.ARGUMENT, Element.OBJECT,
                 Element.INPUT, Element.OUTPUT)

# Implied superclasses among the core element classes.
ELEMENT_SUPERCLASSES = {
    Element.INPUT: Element.PARAMETER,
    Element.OUTPUT: Element.PARAMETER,
}


class Prop(str, Enum):
    # structure
    HAS_BEHAVIOUR = "hasBehaviour"
    CONSISTS_OF_GOAL = "consistsOfGoalDescription"
    CONSISTS_OF_TASK = "consistsOfTaskDescription"
    DEPENDS_ON = "dependsOn"
    HAS_OPERATOR = "hasTaskOperator"
    HAS_ARGUMENT = "hasTaskOperatorArgument"
    HAS_OBJECT = "hasTaskObject"
    HAS_INPUT = "hasTaskInputParameter"
    HAS_OUTPUT = "hasTaskOutputParameter"
    # references
    REFERS_EXACTLY_TO = "refersExactlyTo"
    REFERS_AS_NEW_TO = "refersAsNewTo"
    REFERS_AS_INSTANCE_OF = "refersAsInstanceOf"
    # agents
    PERFORMS = "performs"
    PERFORMS_PLAN_EXECUTION = "performsPlanExecution"
    REQUESTS_PLAN = "requestsPlan"
    ENTRUSTS = "entrusts"
    # RDF / RDFS
    TYPE = "rdf:type"
    SUBCLASS_OF = "rdfs:subClassOf"

    OVERLOADS = "overloads"
    OVERLOADS_BEHAVIOUR = "overloadsBehaviour"
    OVERLOADS_GOAL = "overloadsGoalDescription"
    OVERLOADS_TASK = "overloadsTaskDescription"
    OVERLOADS_OBJECT = "overloadsTaskObject"
    OVERLOADS_OPERATOR = "overloadsTaskOperator"
    OVERLOADS_INPUT = "overloadsTaskInputParameter"
    OVERLOADS_OUTPUT = "overloadsTaskOutputParameter"

    DRAWN_BY = "drawnBy"
    PLAN_EXECUTION_DRAWN_BY = "planExecutionDrawnBy"
    GOAL_EXECUTION_DRAWN_BY = "goalExecutionDrawnBy"
    TASK_EXECUTION_DRAWN_BY = "taskExecutionDrawnBy"
    TASK_OBJECT_DRAWN_BY = "taskObjectDrawnBy"
    TASK_OPERATOR_DRAWN_BY = "taskOperatorDrawnBy"
    TASK_INPUT_DRAWN_BY = "taskInputParameterDrawnBy"
    TASK_OUTPUT_DRAWN_BY = "taskOutputParameterDrawnBy"

    SUBMITTED_TO = "submittedTo"
    PLAN_SUBMITTED_TO = "planDescriptionSubmittedTo"
    GOAL_SUBMITTED_TO = "goalDescriptionSubmittedTo"
    TASK_SUBMITTED_TO = "taskDescriptionSubmittedTo"
    TASK_OBJECT_SUBMITTED_TO = "taskObjectSubmittedTo"
    TASK_OPERATOR_SUBMITTED_TO = "taskOperatorSubmittedTo"
    TASK_INPUT_SUBMITTED_TO = "taskInputParameterSubmittedTo"
    TASK_OUTPUT_SUBMITTED_TO = "taskOutputParameterSubmittedTo"

    HAS_EXECUTION = "hasExecution"
    HAS_PLAN_EXECUTION = "hasPlanExecution"
    HAS_GOAL_EXECUTION = "hasGoalExecution"
    HAS_TASK_EXECUTION = "hasTaskExecution"
    HAS_TASK_OBJECT_EXECUTION = "hasTaskObjectExecution"
    HAS_TASK_OPERATOR_EXECUTION = "hasTaskOperatorExecution"
    HAS_TASK_INPUT_EXECUTION = "hasTaskInputParameterExecution"
    HAS_TASK_OUTPUT_EXECUTION = "hasTaskOutputParameterExecution"

    ENTRUSTED_BY = "entrustedBy"
    PLAN_ENTRUSTED_BY = "planEntrustedBy"
    GOAL_ENTRUSTED_BY = "goalEntrustedBy"
    TASK_ENTRUSTED_BY = "taskEntrustedBy"
    TASK_OBJECT_ENTRUSTED_BY = "taskObjectEntrustedBy"
    TASK_OPERATOR_ENTRUSTED_BY = "taskOperatorEntrustedBy"
    TASK_ARGUMENT_ENTRUSTED_BY = "taskOperatorArgumentEntrustedBy"
    TASK_INPUT_ENTRUSTED_BY = "taskInputParameterEntrustedBy"
    TASK_OUTPUT_ENTRUSTED_BY = "taskOutputParameterEntrustedBy"

    ENTRUSTED_FROM = "entrustedFrom"
    PLAN_ENTRUSTED_FROM = "planEntrustedFrom"
    GOAL_ENTRUSTED_FROM = "goalEntrustedFrom"
    TASK_ENTRUSTED_FROM = "taskEntrustedFrom"
    TASK_OBJECT_ENTRUSTED_FROM = "taskObjectEntrustedFrom"
    TASK_OPERATOR_ENTRUSTED_FROM = "taskOperatorEntrustedFrom"
    TASK_ARGUMENT_ENTRUSTED_FROM = "taskOperatorArgumentEntrustedFrom"
    TASK_INPUT_ENTRUSTED_FROM = "taskInputParameterEntrustedFrom"
    TASK_OUTPUT_ENTRUSTED_FROM = "taskOutputParameterEntrustedFrom"

    ENTRUSTED_WITH = "entrustedWith"
    PLAN_ENTRUSTED_WITH = "planEntrustedWith"
    GOAL_ENTRUSTED_WITH = "goalEntrustedWith"
    TASK_ENTRUSTED_WITH = "taskEntrustedWith"
    TASK_OBJECT_ENTRUSTED_WITH = "taskObjectEntrustedWith"
    TASK_OPERATOR_ENTRUSTED_WITH = "taskOperatorEntrustedWith"
    TASK_ARGUMENT_ENTRUSTED_WITH = "taskOperatorArgumentEntrustedWith"
    TASK_INPUT_ENTRUSTED_WITH = "taskInputParameterEntrustedWith"
    TASK_OUTPUT_ENTRUSTED_WITH = "taskOutputParameterEntrustedWith"

    def __str__(self) -> str:
        return self.value

    @property
    def parent(self) -> Prop | None:
        """The super-property, if this is a family member."""
        return _PARENT.get(self)

    @property
    def element(self) -> Element | None:
        """Element class a family member connects, if any."""
        return _MEMBER_ELEMENT.get(self)

    @property
    def is_abstract(self) -> bool:
        """Super-properties are queried, never asserted."""
        return self in SUPER_PROPERTIES

    @classmethod
    def lookup(cls, name: str | Prop) -> Prop:
        """Resolve a local name (or a Prop) to a vocabulary member.

        Raises UnknownProperty for anything outside the closed vocabulary.
        """
        from oasis2.errors import UnknownProperty

        if isinstance(name, Prop):
            return name
        try:
            return cls(name)
        except ValueError:
            raise UnknownProperty(name) from None


_SEVEN = (Element.BEHAVIOUR, Element.GOAL, Element.TASK, Element.OBJECT,
          Element.OPERATOR, Element.INPUT, Element.OUTPUT)
_EIGHT = (Element.BEHAVIOUR, Element.GOAL, Element.TASK, Element.OBJECT,
          Element.OPERATOR, Element.ARGUMENT, Element.INPUT, Element.OUTPUT)


def _family(members: tuple[Prop, ...], elements: tuple[Element, ...]) -> dict[Element, Prop]:
    assert len(members) == len(elements)
    return dict(zip(elements, members))


P = Prop
FAMILIES: dict[Prop, dict[Element, Prop]] = {
    P.OVERLOADS: _family(
        (P.OVERLOADS_BEHAVIOUR, P.OVERLOADS_GOAL, P.OVERLOADS_TASK, P.OVERLOADS_OBJECT,
         P.OVERLOADS_OPERATOR, P.OVERLOADS_INPUT, P.OVERLOADS_OUTPUT), _SEVEN),
    P.DRAWN_BY: _family(
        (P.PLAN_EXECUTION_DRAWN_BY, P.GOAL_EXECUTION_DRAWN_BY, P.TASK_EXECUTION_DRAWN_BY,
         P.TASK_OBJECT_DRAWN_BY, P.TASK_OPERATOR_DRAWN_BY, P.TASK_INPUT_DRAWN_BY,
         P.TASK_OUTPUT_DRAWN_BY), _SEVEN),
    P.SUBMITTED_TO: _family(
        (P.PLAN_SUBMITTED_TO, P.GOAL_SUBMITTED_TO, P.TASK_SUBMITTED_TO,
         P.TASK_OBJECT_SUBMITTED_TO, P.TASK_OPERATOR_SUBMITTED_TO,
         P.TASK_INPUT_SUBMITTED_TO, P.TASK_OUTPUT_SUBMITTED_TO), _SEVEN),
    P.HAS_EXECUTION: _family(
        (P.HAS_PLAN_EXECUTION, P.HAS_GOAL_EXECUTION, P.HAS_TASK_EXECUTION,
         P.HAS_TASK_OBJECT_EXECUTION, P.HAS_TASK_OPERATOR_EXECUTION,
         P.HAS_TASK_INPUT_EXECUTION, P.HAS_TASK_OUTPUT_EXECUTION), _SEVEN),
    P.ENTRUSTED_BY: _family(
        (P.PLAN_ENTRUSTED_BY, P.GOAL_ENTRUSTED_BY, P.TASK_ENTRUSTED_BY,
         P.TASK_OBJECT_ENTRUSTED_BY, P.TASK_OPERATOR_ENTRUSTED_BY,
         P.TASK_ARGUMENT_ENTRUSTED_BY, P.TASK_INPUT_ENTRUSTED_BY,
         P.TASK_OUTPUT_ENTRUSTED_BY), _EIGHT),
    P.ENTRUSTED_FROM: _family(
        (P.PLAN_ENTRUSTED_FROM, P.GOAL_ENTRUSTED_FROM, P.TASK_ENTRUSTED_FROM,
         P.TASK_OBJECT_ENTRUSTED_FROM, P.TASK_OPERATOR_ENTRUSTED_FROM,
         P.TASK_ARGUMENT_ENTRUSTED_FROM, P.TASK_INPUT_ENTRUSTED_FROM,
         P.TASK_OUTPUT_ENTRUSTED_FROM), _EIGHT),
    P.ENTRUSTED_WITH: _family(
        (P.PLAN_ENTRUSTED_WITH, P.GOAL_ENTRUSTED_WITH, P.TASK_ENTRUSTED_WITH,
         P.TASK_OBJECT_ENTRUSTED_WITH, P.TASK_OPERATOR_ENTRUSTED_WITH,
         P.TASK_ARGUMENT_ENTRUSTED_WITH, P.TASK_INPUT_ENTRUSTED_WITH,
         P.TASK_OUTPUT_ENTRUSTED_WITH), _EIGHT),
}
del P

_PARENT: dict[Prop, Prop] = {Prop.PERFORMS_PLAN_EXECUTION: Prop.PERFORMS}
_MEMBER_ELEMENT: dict[Prop, Element] = {}
for _super, _members in FAMILIES.items():
    for _el, _p in _members.items():
        _PARENT[_p] = _super
        _MEMBER_ELEMENT[_p] = _el

SUPER_PROPERTIES = frozenset(FAMILIES) | {Prop.PERFORMS}

# Structural child links: property -> (parent class, child class).
CHILD_LINKS: dict[Prop, tuple[Element, Element]] = {
    Prop.CONSISTS_OF_GOAL: (Element.BEHAVIOUR, Element.GOAL),
    Prop.CONSISTS_OF_TASK: (Element.GOAL, Element.TASK),
    Prop.HAS_OPERATOR: (Element.TASK, Element.OPERATOR),
    Prop.HAS_ARGUMENT: (Element.TASK, Element.ARGUMENT),
    Prop.HAS_OBJECT: (Element.TASK, Element.OBJECT),
    Prop.HAS_INPUT: (Element.TASK, Element.INPUT),
    Prop.HAS_OUTPUT: (Element.TASK, Element.OUTPUT),
}
CHILD_PROP: dict[Element, Prop] = {child: p for p, (_, child) in CHILD_LINKS.items()}


def members(prop: Prop) -> tuple[Prop, ...]:
    """Concrete subproperties of a super-property (the property itself otherwise)."""
    if prop is Prop.PERFORMS:
        return (Prop.PERFORMS_PLAN_EXECUTION,)
    if prop in FAMILIES:
        return tuple(FAMILIES[prop].values())
    return (prop,)


def member_for(family: Prop, element: Element) -> Prop | None:
    return FAMILIES[family].get(element)
