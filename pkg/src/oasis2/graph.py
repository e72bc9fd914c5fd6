"""Typed, directed, labelled graph over the closed OASIS 2 vocabulary."""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator
from typing import NamedTuple, Union

from oasis2.errors import (
    InvalidIri,
    LayerConflict,
    MissingNode,
    SubclassCycle,
    UnknownClass,
    UnknownProperty,
)
from oasis2.vocab import ELEMENT_SUPERCLASSES, Element, Layer, Prop, members

# A node class is a core element class, a layer marker, or a domain class IRI.
NodeClass = Union[Element, Layer, str]

_BAD_IRI_CHARS = re.compile(r'[\s<>"{}|^`\\]')


def check_iri(value: str) -> str:
    """Return ``value`` if it is an absolute IRI we can name nodes with."""
    if not isinstance(value, str) or not value:
        raise InvalidIri(f"IRI must be a non-empty string, got {value!r}")
    if ":" not in value or value.startswith(":"):
        raise InvalidIri(f"IRI is not absolute: {value!r}")
    if _BAD_IRI_CHARS.search(value):
        raise InvalidIri(f"IRI contains whitespace or forbidden characters: {value!r}")
    return value


class Triple(NamedTuple):
    subject: str
    property: Prop
    object: str


class TypedGraph:
    """Nodes with class assertions and layer tags, IRI-to-IRI triples and an
    explicit ``rdfs:subClassOf`` hierarchy.

    Mutators return ``self`` so calls can be chained.  Readers never mutate,
    so a graph that is no longer being written can be shared between threads.
    ``namespaces`` holds prefix bindings for serialization and takes no part
    in equality.
    """

    def __init__(self) -> None:
        self._classes: dict[str, set[NodeClass]] = {}
        self._triples: set[Triple] = set()
        self._out: dict[str, dict[Prop, set[str]]] = defaultdict(lambda: defaultdict(set))
        self._in: dict[str, dict[Prop, set[str]]] = defaultdict(lambda: defaultdict(set))
        self._supers: dict[str, set[str]] = defaultdict(set)
        self._subclass_edges: set[tuple[str, str]] = set()
        self._class_use: Counter[str] = Counter()
        self.namespaces: dict[str, str] = {}

    # -- mutation ---------------------------------------------------------

    def add_entity(self, node: str, classes: Iterable[NodeClass] = (),
                   layer: Layer | None = None) -> TypedGraph:
        """Add ``node`` (or extend it) with ``classes`` and an optional layer.

        Raises LayerConflict if the node already carries a different layer.
        """
        check_iri(node)
        classes = list(classes)
        for cls in classes:
            if isinstance(cls, Layer):
                layer = self._merge_layer(node, layer, cls)
            elif not isinstance(cls, Element):
                check_iri(cls)
        if layer is not None:
            existing = self.layers_of(node)
            if existing and existing != {layer}:
                raise LayerConflict(node, "/".join(sorted(map(str, existing))), layer)
        self._classes.setdefault(node, set())
        for cls in classes:
            if not isinstance(cls, Layer):
                self._assert(node, cls)
        if layer is not None:
            self._assert(node, layer)
        return self

    @staticmethod
    def _merge_layer(node: str, current: Layer | None, extra: Layer) -> Layer:
        if current is not None and current is not extra:
            raise LayerConflict(node, current, extra)
        return extra

    def assert_type(self, node: str, cls: NodeClass) -> TypedGraph:
        """Raw ``rdf:type`` assertion without the layer-conflict check.

        Used when reading untrusted fragments; conflicting tags are reported
        by the validator instead of failing here.
        """
        check_iri(node)
        if not isinstance(cls, (Element, Layer)):
            check_iri(cls)
        self._classes.setdefault(node, set())
        self._assert(node, cls)
        return self

    def _assert(self, node: str, cls: NodeClass) -> None:
        bucket = self._classes[node]
        if cls not in bucket:
            bucket.add(cls)
            if isinstance(cls, str) and not isinstance(cls, (Element, Layer)):
                self._class_use[cls] += 1

    def remove_type(self, node: str, cls: NodeClass) -> TypedGraph:
        bucket = self._classes.get(node)
        if bucket and cls in bucket:
            bucket.discard(cls)
            if not isinstance(cls, (Element, Layer)):
                self._class_use[cls] -= 1
                if not self._class_use[cls]:
                    del self._class_use[cls]
        return self

    def add_triple(self, subject: str, prop: Prop | str, obj: str) -> TypedGraph:
        """Assert ``(subject, prop, obj)``; both ends must already be nodes.

        ``rdf:type`` and ``rdfs:subClassOf`` are routed to class assertions
        and the subclass hierarchy.  Super-properties such as ``overloads``
        cannot be asserted directly.
        """
        prop = Prop.lookup(prop)
        if prop is Prop.TYPE:
            return self.add_entity(subject, [obj])
        if prop is Prop.SUBCLASS_OF:
            return self.add_subclass(subject, obj)
        if prop.is_abstract:
            raise UnknownProperty(prop, "super-properties are never asserted; use a subproperty")
        for end in (subject, obj):
            if end not in self._classes:
                raise MissingNode(end)
        t = Triple(subject, prop, obj)
        if t not in self._triples:
            self._triples.add(t)
            self._out[subject][prop].add(obj)
            self._in[obj][prop].add(subject)
        return self

    def remove_triple(self, subject: str, prop: Prop | str, obj: str) -> TypedGraph:
        t = Triple(subject, Prop.lookup(prop), obj)
        if t in self._triples:
            self._triples.discard(t)
            self._out[subject][t.property].discard(obj)
            self._in[obj][t.property].discard(subject)
        return self

    def add_subclass(self, sub: str, sup: str) -> TypedGraph:
        check_iri(sub)
        check_iri(sup)
        if (sub, sup) in self._subclass_edges:
            return self
        if sub == sup or (sup in self._supers and sub in self._closure(sup)):
            raise SubclassCycle(f"{sub} rdfs:subClassOf {sup} closes a cycle")
        for end in (sub, sup):
            self._classes.setdefault(end, set())
        self._subclass_edges.add((sub, sup))
        self._supers[sub].add(sup)
        return self

    def bind(self, prefix: str, namespace: str) -> TypedGraph:
        self.namespaces[prefix] = namespace
        return self

    def update(self, other: TypedGraph) -> TypedGraph:
        """In-place union.  Layer tags are unioned without conflict checks."""
        for node, classes in other._classes.items():
            self._classes.setdefault(node, set())
            for cls in classes:
                self._assert(node, cls)
        for t in other._triples:
            if t not in self._triples:
                self._triples.add(t)
                self._out[t.subject][t.property].add(t.object)
                self._in[t.object][t.property].add(t.subject)
        for sub, sup in other._subclass_edges:
            self.add_subclass(sub, sup)
        for prefix, ns in other.namespaces.items():
            self.namespaces.setdefault(prefix, ns)
        return self

    def copy(self) -> TypedGraph:
        return TypedGraph().update(self)

    def __or__(self, other: TypedGraph) -> TypedGraph:
        return self.copy().update(other)

    # -- reading ----------------------------------------------------------

    def __contains__(self, node: object) -> bool:
        return node in self._classes

    def __len__(self) -> int:
        return len(self._triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypedGraph):
            return NotImplemented
        return (self._classes == other._classes
                and self._triples == other._triples
                and self._subclass_edges == other._subclass_edges)

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return (f"<TypedGraph nodes={len(self._classes)} triples={len(self._triples)}"
                f" subclass_edges={len(self._subclass_edges)}>")

    @property
    def nodes(self) -> dict[str, frozenset[NodeClass]]:
        """Snapshot of node -> classes (layer markers included)."""
        return {n: frozenset(c) for n, c in self._classes.items()}

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    @property
    def subclass_edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._subclass_edges)

    def classes_of(self, node: str) -> frozenset[NodeClass]:
        return frozenset(self._classes.get(node, ()))

    def layers_of(self, node: str) -> set[Layer]:
        return {c for c in self._classes.get(node, ()) if isinstance(c, Layer)}

    def layer_of(self, node: str) -> Layer | None:
        """The node's layer, or None when it has none or several."""
        layers = self.layers_of(node)
        return next(iter(layers)) if len(layers) == 1 else None

    def has_class(self, node: str, cls: NodeClass) -> bool:
        return cls in self._classes.get(node, ())

    def instances(self, cls: NodeClass, layer: Layer | None = None) -> list[str]:
        """Sorted nodes directly asserted in ``cls`` (and ``layer`` if given)."""
        return sorted(n for n, c in self._classes.items()
                      if cls in c and (layer is None or layer in c))

    def objects(self, subject: str, prop: Prop) -> set[str]:
        out = self._out.get(subject)
        if not out:
            return set()
        found: set[str] = set()
        for p in members(prop):
            found |= out.get(p, set())
        return found

    def subjects(self, prop: Prop, obj: str) -> set[str]:
        inc = self._in.get(obj)
        if not inc:
            return set()
        found: set[str] = set()
        for p in members(prop):
            found |= inc.get(p, set())
        return found

    def outgoing(self, subject: str) -> Iterator[tuple[Prop, str]]:
        for p, objs in self._out.get(subject, {}).items():
            for o in objs:
                yield p, o

    def incoming(self, obj: str) -> Iterator[tuple[Prop, str]]:
        for p, subs in self._in.get(obj, {}).items():
            for s in subs:
                yield p, s

    def match(self, subject: str | None = None, prop: Prop | None = None,
              obj: str | None = None) -> list[Triple]:
        """Triples matching the given pattern, sorted.  ``prop`` may be a
        super-property, in which case all of its subproperties match."""
        props = set(members(prop)) if prop is not None else None
        found = [t for t in self._triples
                 if (subject is None or t.subject == subject)
                 and (props is None or t.property in props)
                 and (obj is None or t.object == obj)]
        return sorted(found)

    # -- classes ----------------------------------------------------------

    def is_class(self, cls: NodeClass) -> bool:
        if isinstance(cls, (Element, Layer)):
            return True
        return (cls in self._class_use
                or cls in self._supers
                or any(cls == sup for _, sup in self._subclass_edges)
                or bool(self.subjects(Prop.REFERS_AS_INSTANCE_OF, cls)))

    def _closure(self, cls: str) -> set[str]:
        seen = {cls}
        stack = [cls]
        while stack:
            for sup in self._supers.get(stack.pop(), ()):
                if sup not in seen:
                    seen.add(sup)
                    stack.append(sup)
        return seen

    def superclass_closure(self, cls: NodeClass) -> set[NodeClass]:
        """``cls`` together with all of its transitive superclasses."""
        if isinstance(cls, Element):
            sup = ELEMENT_SUPERCLASSES.get(cls)
            return {cls, sup} if sup else {cls}
        if isinstance(cls, Layer):
            return {cls}
        if not self.is_class(cls):
            raise UnknownClass(cls)
        return self._closure(cls)

    def is_instance_of(self, node: str, cls: NodeClass) -> bool:
        """True iff some asserted class of ``node`` has ``cls`` in its closure."""
        for asserted in self._classes.get(node, ()):
            if asserted == cls:
                return True
            if isinstance(asserted, Element):
                if ELEMENT_SUPERCLASSES.get(asserted) == cls:
                    return True
            elif not isinstance(asserted, Layer) and cls in self._closure(asserted):
                return True
        return False
