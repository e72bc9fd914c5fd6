"""Exception hierarchy shared by all oasis2 modules."""

from __future__ import annotations


class OasisError(Exception):
    """Base class for every error raised by this package."""


# graph core

class InvalidIri(OasisError, ValueError):
    pass


class LayerConflict(OasisError):
    def __init__(self, node: str, existing, given):
        super().__init__(f"{node} already tagged {existing}, cannot tag {given}")
        self.node = node
        self.existing = existing
        self.given = given


class UnknownProperty(OasisError, KeyError):
    def __init__(self, prop, reason: str = "not in the OASIS 2 vocabulary"):
        super().__init__(f"{prop}: {reason}")
        self.prop = prop

    def __str__(self) -> str:
        return self.args[0]


class MissingNode(OasisError, KeyError):
    def __init__(self, node: str):
        super().__init__(f"node {node} is not in the graph")
        self.node = node

    def __str__(self) -> str:
        return self.args[0]


class UnknownClass(OasisError, KeyError):
    def __init__(self, cls: str):
        super().__init__(f"{cls} is not a class of this graph")
        self.cls = cls

    def __str__(self) -> str:
        return self.args[0]


class SubclassCycle(OasisError):
    pass


# Turtle I/O

class ParseError(OasisError, SyntaxError):
    """Malformed Turtle input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.msg = message
        self.line = self.lineno = line
        self.column = self.offset = column

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.msg}"


# builders

class SpecError(OasisError, ValueError):
    pass


class OverloadMismatch(OasisError):
    pass


class SubmissionMismatch(OasisError):
    pass


class BindingError(OasisError):
    pass


class AgentMismatch(OasisError):
    pass


class IncompleteAssignment(OasisError):
    pass


class IncompatibleAssignment(OasisError):
    pass


class MissingExecution(OasisError):
    pass


# matcher

class MalformedTask(OasisError):
    pass


class InvalidPlan(OasisError):
    pass


# harness

class WorldInvalid(OasisError):
    pass


class NotAnExecution(OasisError):
    pass


class BrokenChain(OasisError):
    """A provenance walk hit a missing edge; ``link`` names the property."""

    def __init__(self, link: str, node: str):
        super().__init__(f"broken provenance chain at {node}: no {link} link")
        self.link = link
        self.node = node
