"""Canonical Turtle subset for exchanging and storing graphs.

Only IRI terms are supported: prefix declarations, ``<IRI>`` and prefixed
names, ``a``, the ``;`` and ``,`` abbreviations, ``.`` terminators and ``#``
comments.  Output is canonical, so equal graphs serialize to equal bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from oasis2.errors import ParseError, UnknownProperty
from oasis2.graph import TypedGraph
from oasis2.vocab import DEFAULT_NS, RDF_NS, RDFS_NS, Element, Layer, Prop

_LOCAL = re.compile(r"[A-Za-z0-9_]([A-Za-z0-9_.-]*[A-Za-z0-9_-])?\Z")
_PREFIX = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")
_RESERVED = {"oasis", "rdf", "rdfs"}

_CORE_CLASSES = {m.value: m for m in (*Element, *Layer)}
_RESOURCE = "Resource"


def _split(iri: str) -> tuple[str, str]:
    """Namespace/local split at the last ``#``, ``/`` or ``:``."""
    cut = max(iri.rfind("#"), iri.rfind("/"), iri.rfind(":"))
    return iri[:cut + 1], iri[cut + 1:]


@dataclass
class _Terms:
    ns: str
    prefixes: dict[str, str]            # prefix -> namespace
    by_ns: dict[str, str]               # namespace -> prefix

    def iri(self, iri: str) -> str:
        space, local = _split(iri)
        prefix = self.by_ns.get(space)
        if prefix is not None and _LOCAL.match(local):
            return f"{prefix}:{local}"
        return f"<{iri}>"

    def core(self, name: str) -> str:
        return f"oasis:{name}"


def _prefix_table(g: TypedGraph, ns: str) -> _Terms:
    used: set[str] = set()
    for node, classes in g.nodes.items():
        used.add(_split(node)[0])
        for c in classes:
            if not isinstance(c, (Element, Layer)):
                used.add(_split(c)[0])
    for sub, sup in g.subclass_edges:
        used.update((_split(sub)[0], _split(sup)[0]))
    used -= {ns, RDF_NS, RDFS_NS, ""}

    prefixes = {"oasis": ns, "rdf": RDF_NS, "rdfs": RDFS_NS}
    by_ns = {ns: "oasis", RDF_NS: "rdf", RDFS_NS: "rdfs"}
    for prefix, space in sorted(g.namespaces.items()):
        if space in used and space not in by_ns and prefix not in prefixes and _PREFIX.match(prefix):
            prefixes[prefix] = space
            by_ns[space] = prefix
    n = 0
    for space in sorted(used - set(by_ns)):
        n += 1
        while f"ns{n}" in prefixes:
            n += 1
        prefixes[f"ns{n}"] = space
        by_ns[space] = f"ns{n}"
    return _Terms(ns, prefixes, by_ns)


def serialize(g: TypedGraph, ns: str = DEFAULT_NS) -> str:
    """Canonical Turtle text for ``g`` (UTF-8 safe, ``\\n`` line endings)."""
    terms = _prefix_table(g, ns)
    lines = [f"@prefix {p}: <{space}> ." for p, space in sorted(terms.prefixes.items())]

    statements: dict[str, dict[str, set[str]]] = {}

    def put(subject: str, pred: str, obj: str) -> None:
        statements.setdefault(subject, {}).setdefault(pred, set()).add(obj)

    for node, classes in g.nodes.items():
        for c in classes:
            put(node, "a", terms.core(c.value) if isinstance(c, (Element, Layer)) else terms.iri(c))
    for s, p, o in g.triples:
        put(s, terms.core(p.value), terms.iri(o))
    for sub, sup in g.subclass_edges:
        put(sub, "rdfs:subClassOf", terms.iri(sup))
    for node in g.nodes:
        if node not in statements:
            put(node, "a", "rdfs:Resource")

    for subject in sorted(statements):
        preds = statements[subject]
        order = sorted(preds, key=lambda p: (p != "a", _expand_pred(p, terms)))
        body = " ;\n    ".join(f"{p} {', '.join(sorted(preds[p]))}" for p in order)
        lines.append("")
        lines.append(f"{terms.iri(subject)} {body} .")
    return "\n".join(lines) + "\n"


def _expand_pred(pred: str, terms: _Terms) -> str:
    prefix, _, local = pred.partition(":")
    return terms.prefixes.get(prefix, "") + local


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<prefix_kw>@prefix\b)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<pname>(?:[A-Za-z][A-Za-z0-9_-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?)
  | (?P<a>a\b)
  | (?P<punct>[.;,])
  | (?P<error>.)
""", re.VERBOSE | re.DOTALL)


@dataclass(slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        kind, chunk, pos = m.lastgroup, m.group(), m.start()
        if kind == "ws" or kind == "comment":
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
            continue
        if kind == "error":
            raise ParseError(f"unexpected character {chunk!r}", line, pos - line_start + 1)
        out.append(_Tok(kind, chunk, line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, ns: str):
        text = text.replace("\r\n", "\n")
        self.toks = _tokenize(text)
        self.i = 0
        self.ns = ns
        self.prefixes: dict[str, str] = {}
        self.expanded: dict[str, str] = {}  # prefixed name -> IRI, reset on @prefix
        self.g = TypedGraph()
        # Just past the last character.
        self.eof = (text.count("\n") + 1, len(text) - text.rfind("\n"))

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, tok: _Tok | None, message: str) -> ParseError:
        if tok is None:
            return ParseError(message + " at end of input", *self.eof)
        return ParseError(f"{message}, found {tok.text!r}", tok.line, tok.col)

    def next(self, *kinds: str) -> _Tok:
        tok = self.peek()
        if tok is None or (kinds and tok.kind not in kinds):
            raise self.fail(tok, f"expected {' or '.join(kinds)}")
        self.i += 1
        return tok

    def expect_punct(self, char: str) -> None:
        tok = self.peek()
        if tok is None or tok.text != char:
            raise self.fail(tok, f"expected {char!r}")
        self.i += 1

    def term(self, tok: _Tok) -> str:
        known = self.expanded.get(tok.text)
        if known is not None:
            return known
        if tok.kind == "iri":
            iri = tok.text[1:-1]
            if ":" not in iri or iri.startswith(":"):
                raise ParseError(f"relative IRI {tok.text} is not supported", tok.line, tok.col)
            return iri
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise ParseError(f"undeclared prefix {prefix!r}", tok.line, tok.col)
        self.expanded[tok.text] = self.prefixes[prefix] + local
        return self.expanded[tok.text]

    def parse(self) -> TypedGraph:
        while self.peek() is not None:
            if self.peek().kind == "prefix_kw":
                self.prefix()
            else:
                self.statement()
        for prefix, space in self.prefixes.items():
            if prefix not in _RESERVED and space not in (self.ns, RDF_NS, RDFS_NS):
                self.g.bind(prefix, space)
        return self.g

    def prefix(self) -> None:
        self.next("prefix_kw")
        tok = self.next("pname")
        name, _, local = tok.text.partition(":")
        if local:
            raise ParseError("prefix name must end with ':'", tok.line, tok.col)
        iri = self.next("iri")
        self.prefixes[name] = iri.text[1:-1]
        self.expanded.clear()
        self.expect_punct(".")

    def statement(self) -> None:
        subject_tok = self.next("iri", "pname")
        subject = self.term(subject_tok)
        while True:
            pred_tok = self.next("iri", "pname", "a")
            while True:
                obj_tok = self.next("iri", "pname")
                self.assert_(subject, subject_tok, pred_tok, obj_tok)
                tok = self.peek()
                if tok is not None and tok.text == ",":
                    self.i += 1
                    continue
                break
            tok = self.peek()
            if tok is not None and tok.text == ";":
                self.i += 1
                # tolerate a dangling ';' before '.'
                if self.peek() is not None and self.peek().text == ".":
                    break
                continue
            break
        self.expect_punct(".")

    def assert_(self, subject: str, stok: _Tok, ptok: _Tok, otok: _Tok) -> None:
        obj = self.term(otok)
        pred = RDF_NS + "type" if ptok.kind == "a" else self.term(ptok)
        try:
            if pred == RDF_NS + "type":
                self.assert_type(subject, obj)
            elif pred == RDFS_NS + "subClassOf":
                self.g.add_subclass(subject, obj)
            elif pred.startswith(self.ns):
                prop = Prop.lookup(pred[len(self.ns):])
                if prop in (Prop.TYPE, Prop.SUBCLASS_OF):
                    raise UnknownProperty(pred)
                for node in (subject, obj):
                    if node not in self.g:
                        self.g.add_entity(node)
                self.g.add_triple(subject, prop, obj)
            else:
                raise UnknownProperty(pred)
        except UnknownProperty:
            raise
        except Exception as exc:  # invalid IRI, subclass cycle, ...
            raise ParseError(str(exc), otok.line, otok.col) from None

    def assert_type(self, subject: str, cls: str) -> None:
        if cls == RDFS_NS + _RESOURCE:
            if subject not in self.g:
                self.g.add_entity(subject)
            return
        if cls.startswith(self.ns) and cls[len(self.ns):] in _CORE_CLASSES:
            self.g.assert_type(subject, _CORE_CLASSES[cls[len(self.ns):]])
        else:
            self.g.assert_type(subject, cls)


def parse(text: str, ns: str = DEFAULT_NS) -> TypedGraph:
    """Read canonical (or hand-written) Turtle into a TypedGraph.

    Raises ParseError with a line and column, or UnknownProperty for
    predicates outside the vocabulary.
    """
    return _Parser(text, ns).parse()
