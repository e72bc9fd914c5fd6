"""Graphviz DOT export for diagrams (layout left to Graphviz)."""

from __future__ import annotations

from oasis2.graph import TypedGraph
from oasis2.vocab import Element, Layer

_COLOURS = {
    Layer.TEMPLATE: "lightgrey",
    Layer.BEHAVIOUR: "lightblue",
    Layer.PLANNING: "khaki",
    Layer.EXECUTION: "palegreen",
    Layer.ENTRUSTMENT: "lightpink",
}


def _short(iri: str) -> str:
    cut = max(iri.rfind("#"), iri.rfind("/"), iri.rfind(":"))
    return iri[cut + 1:] or iri


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quote(text: str) -> str:
    return f'"{_escape(text)}"'


def to_dot(g: TypedGraph, name: str = "oasis") -> str:
    """Nodes labelled with their local name and classes, coloured by layer."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=box, style=filled];"]
    for node, classes in sorted(g.nodes.items()):
        layer = g.layer_of(node)
        kinds = sorted(c.value if isinstance(c, (Element, Layer)) else _short(c)
                       for c in classes if not isinstance(c, Layer))
        label = _escape(_short(node)) + (f"\\n{_escape(', '.join(kinds))}" if kinds else "")
        colour = _COLOURS.get(layer, "white")
        lines.append(f'  {_quote(node)} [label="{label}", fillcolor={colour}];')
    for s, p, o in sorted(g.triples):
        lines.append(f"  {_quote(s)} -> {_quote(o)} [label={_quote(p.value)}];")
    for sub, sup in sorted(g.subclass_edges):
        lines.append(f"  {_quote(sub)} -> {_quote(sup)} [label=\"subClassOf\", style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
