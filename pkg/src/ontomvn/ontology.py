"""Ontology documents in a subset of OWL 2 Functional-Style Syntax.

The subset covers the EL constructors the rest of the tool reasons over:
named classes, ``owl:Thing``/``owl:Nothing``, ``ObjectIntersectionOf`` and
``ObjectSomeValuesFrom``, plus the axiom types listed in :data:`Axiom`.
Everything else in the functional syntax is rejected with
:class:`~ontomvn.errors.UnsupportedConstruct`, or, when parsing with
``lax=True``, kept verbatim as an :class:`UnsupportedAxiom` so that profile
checks and syntactic diffs can still see it.

Values are immutable; ``serialize_ontology`` is deterministic and always
writes full IRIs (only ``owl:Thing`` and ``owl:Nothing`` are abbreviated).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import OntologySyntaxError, UnsupportedConstruct

OWL = "http://www.w3.org/2002/07/owl#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

THING_IRI = OWL + "Thing"
NOTHING_IRI = OWL + "Nothing"
RDFS_COMMENT = RDFS + "comment"

STANDARD_PREFIXES = {"owl": OWL, "rdf": RDF, "rdfs": RDFS, "xsd": XSD}

EL_PROFILE = "OWL 2 EL (tool subset)"
OUTSIDE_PROFILE = "outside subset"

DECLARATION_KINDS = ("Class", "ObjectProperty", "DataProperty", "NamedIndividual")


# -- class expressions --------------------------------------------------------


@dataclass(frozen=True)
class Named:
    iri: str


@dataclass(frozen=True)
class Thing:
    pass


@dataclass(frozen=True)
class Nothing:
    pass


@dataclass(frozen=True)
class IntersectionOf:
    operands: tuple

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("IntersectionOf needs at least two operands")


@dataclass(frozen=True)
class SomeValuesFrom:
    property: str
    filler: "ClassExpression"


ClassExpression = Union[Named, Thing, Nothing, IntersectionOf, SomeValuesFrom]


def intersection(operands) -> ClassExpression:
    """Build an intersection, dropping duplicate operands (order kept).

    Collapses to the single operand when only one remains.
    """
    unique: list = []
    for op in operands:
        if op not in unique:
            unique.append(op)
    if len(unique) == 1:
        return unique[0]
    return IntersectionOf(tuple(unique))


# -- axioms -------------------------------------------------------------------


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses:
    first: ClassExpression
    second: ClassExpression


@dataclass(frozen=True)
class Declaration:
    kind: str
    iri: str

    def __post_init__(self):
        if self.kind not in DECLARATION_KINDS:
            raise ValueError(f"unknown declaration kind {self.kind!r}")


@dataclass(frozen=True)
class SubObjectPropertyOf:
    sub: str
    sup: str


@dataclass(frozen=True)
class ObjectPropertyDomain:
    property: str
    domain: ClassExpression


@dataclass(frozen=True)
class ObjectPropertyRange:
    property: str
    range: ClassExpression


@dataclass(frozen=True)
class DataPropertyDomain:
    property: str
    domain: ClassExpression


@dataclass(frozen=True)
class DataPropertyRange:
    property: str
    datatype: str


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpression
    individual: str


@dataclass(frozen=True)
class UnsupportedAxiom:
    """An axiom outside the subset, retained only by lax parsing."""

    text: str
    construct: str


Axiom = Union[
    SubClassOf,
    EquivalentClasses,
    Declaration,
    SubObjectPropertyOf,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    DataPropertyDomain,
    DataPropertyRange,
    ClassAssertion,
    UnsupportedAxiom,
]


@dataclass(frozen=True)
class Ontology:
    iri: str | None = None
    imports: tuple = ()
    axioms: tuple = ()
    description: str | None = None

    def __post_init__(self):
        if len(set(self.imports)) != len(self.imports):
            raise ValueError("duplicate imports")

    @property
    def supported_axioms(self) -> tuple:
        return tuple(a for a in self.axioms if not isinstance(a, UnsupportedAxiom))

    @property
    def unsupported_axioms(self) -> tuple:
        return tuple(a for a in self.axioms if isinstance(a, UnsupportedAxiom))


# -- traversal helpers --------------------------------------------------------


def subexpressions(expr: ClassExpression) -> Iterator[ClassExpression]:
    yield expr
    if isinstance(expr, IntersectionOf):
        for op in expr.operands:
            yield from subexpressions(op)
    elif isinstance(expr, SomeValuesFrom):
        yield from subexpressions(expr.filler)


def class_names(expr: ClassExpression) -> Iterator[str]:
    for sub in subexpressions(expr):
        if isinstance(sub, Named):
            yield sub.iri


def object_properties_in(expr: ClassExpression) -> Iterator[str]:
    for sub in subexpressions(expr):
        if isinstance(sub, SomeValuesFrom):
            yield sub.property


def axiom_expressions(axiom) -> tuple:
    """Class expressions occurring directly in ``axiom``."""
    if isinstance(axiom, SubClassOf):
        return (axiom.sub, axiom.sup)
    if isinstance(axiom, EquivalentClasses):
        return (axiom.first, axiom.second)
    if isinstance(axiom, (ObjectPropertyDomain, DataPropertyDomain)):
        return (axiom.domain,)
    if isinstance(axiom, ObjectPropertyRange):
        return (axiom.range,)
    if isinstance(axiom, ClassAssertion):
        return (axiom.cls,)
    return ()


def axiom_classes(axiom) -> set[str]:
    """Named classes referenced by ``axiom`` (built-ins excluded)."""
    names = {n for expr in axiom_expressions(axiom) for n in class_names(expr)}
    if isinstance(axiom, Declaration) and axiom.kind == "Class":
        names.add(axiom.iri)
    return names


# -- signature ----------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    classes: frozenset = frozenset()
    object_properties: frozenset = frozenset()
    data_properties: frozenset = frozenset()
    individuals: frozenset = frozenset()
    warnings: tuple = field(default=(), compare=False)

    def all(self) -> frozenset:
        return self.classes | self.object_properties | self.data_properties | self.individuals


_PARTITION = {
    "Class": "classes",
    "ObjectProperty": "object_properties",
    "DataProperty": "data_properties",
    "NamedIndividual": "individuals",
}


def _positional_uses(axiom) -> Iterator[tuple[str, str]]:
    for expr in axiom_expressions(axiom):
        for sub in subexpressions(expr):
            if isinstance(sub, Named):
                yield sub.iri, "Class"
            elif isinstance(sub, SomeValuesFrom):
                yield sub.property, "ObjectProperty"
    if isinstance(axiom, SubObjectPropertyOf):
        yield axiom.sub, "ObjectProperty"
        yield axiom.sup, "ObjectProperty"
    elif isinstance(axiom, (ObjectPropertyDomain, ObjectPropertyRange)):
        yield axiom.property, "ObjectProperty"
    elif isinstance(axiom, (DataPropertyDomain, DataPropertyRange)):
        yield axiom.property, "DataProperty"
    elif isinstance(axiom, ClassAssertion):
        yield axiom.individual, "NamedIndividual"


def signature(ontology: Ontology) -> Signature:
    """Partition the entities of ``ontology`` by kind.

    Declarations win over positional inference; the first declaration or
    use decides when an IRI is used in more than one role, and every such
    clash is reported in ``warnings``.  Datatype IRIs and the built-in
    ``owl:Thing``/``owl:Nothing`` belong to no partition.
    """
    kinds: dict[str, str] = {}
    uses: dict[str, set[str]] = {}
    for axiom in ontology.axioms:
        if isinstance(axiom, Declaration):
            uses.setdefault(axiom.iri, set()).add(axiom.kind)
            kinds.setdefault(axiom.iri, axiom.kind)
    for axiom in ontology.axioms:
        for iri, kind in _positional_uses(axiom):
            uses.setdefault(iri, set()).add(kind)
            kinds.setdefault(iri, kind)

    parts: dict[str, set[str]] = {name: set() for name in _PARTITION.values()}
    for iri, kind in kinds.items():
        parts[_PARTITION[kind]].add(iri)
    warnings = tuple(
        f"{iri} used as {', '.join(sorted(uses[iri]))}; treated as {kinds[iri]}"
        for iri in sorted(uses)
        if len(uses[iri]) > 1
    )
    return Signature(**{k: frozenset(v) for k, v in parts.items()}, warnings=warnings)


# -- profile ------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileReport:
    profile_name: str
    violations: tuple = ()

    @property
    def in_profile(self) -> bool:
        return not self.violations


def check_profile(ontology: Ontology) -> ProfileReport:
    violations = tuple(
        (index, f"{axiom.construct} is outside the EL subset")
        for index, axiom in enumerate(ontology.axioms)
        if isinstance(axiom, UnsupportedAxiom)
    )
    return ProfileReport(OUTSIDE_PROFILE if violations else EL_PROFILE, violations)


# -- serialization ------------------------------------------------------------


def render_iri(iri: str) -> str:
    return f"<{iri}>"


def render_expression(expr: ClassExpression) -> str:
    if isinstance(expr, Named):
        return render_iri(expr.iri)
    if isinstance(expr, Thing):
        return "owl:Thing"
    if isinstance(expr, Nothing):
        return "owl:Nothing"
    if isinstance(expr, IntersectionOf):
        return "ObjectIntersectionOf(" + " ".join(render_expression(o) for o in expr.operands) + ")"
    if isinstance(expr, SomeValuesFrom):
        return f"ObjectSomeValuesFrom({render_iri(expr.property)} {render_expression(expr.filler)})"
    raise TypeError(f"not a class expression: {expr!r}")


def render_axiom(axiom) -> str:
    if isinstance(axiom, SubClassOf):
        return f"SubClassOf({render_expression(axiom.sub)} {render_expression(axiom.sup)})"
    if isinstance(axiom, EquivalentClasses):
        return f"EquivalentClasses({render_expression(axiom.first)} {render_expression(axiom.second)})"
    if isinstance(axiom, Declaration):
        return f"Declaration({axiom.kind}({render_iri(axiom.iri)}))"
    if isinstance(axiom, SubObjectPropertyOf):
        return f"SubObjectPropertyOf({render_iri(axiom.sub)} {render_iri(axiom.sup)})"
    if isinstance(axiom, ObjectPropertyDomain):
        return f"ObjectPropertyDomain({render_iri(axiom.property)} {render_expression(axiom.domain)})"
    if isinstance(axiom, ObjectPropertyRange):
        return f"ObjectPropertyRange({render_iri(axiom.property)} {render_expression(axiom.range)})"
    if isinstance(axiom, DataPropertyDomain):
        return f"DataPropertyDomain({render_iri(axiom.property)} {render_expression(axiom.domain)})"
    if isinstance(axiom, DataPropertyRange):
        return f"DataPropertyRange({render_iri(axiom.property)} {render_iri(axiom.datatype)})"
    if isinstance(axiom, ClassAssertion):
        return f"ClassAssertion({render_expression(axiom.cls)} {render_iri(axiom.individual)})"
    if isinstance(axiom, UnsupportedAxiom):
        return axiom.text
    raise TypeError(f"not an axiom: {axiom!r}")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_ontology(ontology: Ontology) -> str:
    head = "Ontology(" + (render_iri(ontology.iri) if ontology.iri else "")
    lines = [head]
    lines += [f"Import({render_iri(i)})" for i in ontology.imports]
    if ontology.description is not None:
        lines.append(f"Annotation({render_iri(RDFS_COMMENT)} {_quote(ontology.description)})")
    lines += [render_axiom(a) for a in ontology.axioms]
    lines.append(")")
    return "\n".join(lines) + "\n"


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<lang>@[A-Za-z][A-Za-z0-9-]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<eq>=)
  | (?P<name>[^\s()<>"=^@\#]+)
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise OntologySyntaxError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- parser -------------------------------------------------------------------

# OWL 2 functional-syntax keywords the subset does not handle.
_FOREIGN_KEYWORDS = frozenset(
    """
    ObjectUnionOf ObjectComplementOf ObjectOneOf ObjectAllValuesFrom ObjectHasValue
    ObjectHasSelf ObjectMinCardinality ObjectMaxCardinality ObjectExactCardinality
    DataSomeValuesFrom DataAllValuesFrom DataHasValue DataMinCardinality
    DataMaxCardinality DataExactCardinality ObjectInverseOf ObjectPropertyChain
    DataIntersectionOf DataUnionOf DataComplementOf DataOneOf DatatypeRestriction
    DisjointClasses DisjointUnion EquivalentObjectProperties DisjointObjectProperties
    InverseObjectProperties FunctionalObjectProperty InverseFunctionalObjectProperty
    ReflexiveObjectProperty IrreflexiveObjectProperty SymmetricObjectProperty
    AsymmetricObjectProperty TransitiveObjectProperty SubDataPropertyOf
    EquivalentDataProperties DisjointDataProperties FunctionalDataProperty
    DatatypeDefinition HasKey SameIndividual DifferentIndividuals
    ObjectPropertyAssertion NegativeObjectPropertyAssertion DataPropertyAssertion
    NegativeDataPropertyAssertion DLSafeRule
    """.split()
)

_ANNOTATION_AXIOMS = frozenset(
    ("AnnotationAssertion", "SubAnnotationPropertyOf", "AnnotationPropertyDomain", "AnnotationPropertyRange")
)


class _Parser:
    def __init__(self, text: str, lax: bool):
        self.tokens = tokenize(text)
        self.pos = 0
        self.lax = lax
        self.prefixes = dict(STANDARD_PREFIXES)

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> OntologySyntaxError:
        tok = tok or self.peek()
        return OntologySyntaxError(message, tok.line, tok.column, tok.value or "<end of input>")

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            raise self.error(f"expected {value or kind}", tok)
        return tok

    def at_keyword(self, value: str | None = None) -> bool:
        tok = self.peek()
        return (
            tok.kind == "name"
            and ":" not in tok.value
            and (value is None or tok.value == value)
            and self.peek(1).kind == "lparen"
        )

    def is_iri_token(self, tok: Token) -> bool:
        return tok.kind == "iri" or (tok.kind == "name" and ":" in tok.value)

    def expand(self, tok: Token) -> str:
        if tok.kind == "iri":
            iri = tok.value[1:-1]
        elif tok.kind == "name" and ":" in tok.value:
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise OntologySyntaxError(f"undeclared prefix {prefix!r}", tok.line, tok.column, tok.value)
            iri = self.prefixes[prefix] + local
        else:
            raise self.error("expected IRI", tok)
        if not iri:
            raise OntologySyntaxError("empty IRI", tok.line, tok.column, tok.value)
        return iri

    def iri(self) -> str:
        return self.expand(self.next())

    # document

    def document(self) -> Ontology:
        while self.at_keyword("Prefix"):
            self.prefix()
        if not self.at_keyword("Ontology"):
            raise self.error("expected Ontology(")
        self.next()
        self.expect("lparen")
        iri = None
        if self.is_iri_token(self.peek()):
            iri = self.iri()
            if self.is_iri_token(self.peek()):
                self.iri()  # version IRI, not retained
        imports: list[str] = []
        axioms: list = []
        description = None
        while self.peek().kind != "rparen":
            if self.peek().kind == "eof":
                raise self.error("unterminated Ontology(")
            if self.at_keyword("Import"):
                self.next()
                self.expect("lparen")
                target = self.iri()
                self.expect("rparen")
                if target not in imports:
                    imports.append(target)
            elif self.at_keyword("Annotation"):
                prop, value = self.annotation()
                if prop == RDFS_COMMENT and value is not None and description is None:
                    description = value
            else:
                axiom = self.axiom_or_skip()
                if axiom is not None:
                    axioms.append(axiom)
        self.expect("rparen")
        if self.peek().kind != "eof":
            raise self.error("trailing content after Ontology(...)")
        return Ontology(iri, tuple(imports), tuple(axioms), description)

    def prefix(self) -> None:
        self.next()
        self.expect("lparen")
        tok = self.next()
        if tok.kind != "name" or not tok.value.endswith(":"):
            raise self.error("expected prefix name", tok)
        self.expect("eq")
        target = self.expect("iri").value[1:-1]
        self.expect("rparen")
        self.prefixes[tok.value[:-1]] = target

    def annotation(self) -> tuple[str, str | None]:
        """Parse ``Annotation(...)``; returns (property, string value or None)."""
        self.next()
        self.expect("lparen")
        while self.at_keyword("Annotation"):
            self.annotation()
        prop = self.iri()
        value = None
        tok = self.next()
        if tok.kind == "string":
            value = _unquote(tok.value)
            if self.peek().kind == "dtype":
                self.next()
                self.iri()
            elif self.peek().kind == "lang":
                self.next()
        elif not (self.is_iri_token(tok) or tok.kind == "name"):
            raise self.error("expected annotation value", tok)
        self.expect("rparen")
        return prop, value

    def skip_axiom_annotations(self) -> None:
        while self.at_keyword("Annotation"):
            self.annotation()

    def skip_group(self) -> None:
        """Skip a ``Keyword( ... )`` group including nested parentheses."""
        self.next()
        self.expect("lparen")
        depth = 1
        while depth:
            tok = self.next()
            if tok.kind == "eof":
                raise self.error("unbalanced parentheses", tok)
            if tok.kind == "lparen":
                depth += 1
            elif tok.kind == "rparen":
                depth -= 1

    # axioms

    def axiom_or_skip(self):
        start = self.pos
        try:
            return self.axiom()
        except UnsupportedConstruct as exc:
            if not self.lax:
                raise
            self.pos = start
            self.skip_group()
            return UnsupportedAxiom(self.canonical_text(start, self.pos), exc.construct)

    def canonical_text(self, start: int, end: int) -> str:
        out: list[str] = []
        prev = None
        for tok in self.tokens[start:end]:
            if tok.kind == "name" and ":" in tok.value:
                iri = self.expand(tok)
                text = {THING_IRI: "owl:Thing", NOTHING_IRI: "owl:Nothing"}.get(iri, f"<{iri}>")
            elif tok.kind == "iri":
                iri = tok.value[1:-1]
                text = {THING_IRI: "owl:Thing", NOTHING_IRI: "owl:Nothing"}.get(iri, tok.value)
            else:
                text = tok.value
            glue = prev in (None, "lparen", "dtype") or tok.kind in ("rparen", "lparen", "lang", "dtype")
            out.append(text if glue else " " + text)
            prev = tok.kind
        return "".join(out)

    def axiom(self):
        tok = self.peek()
        if not self.at_keyword():
            raise self.error("expected axiom")
        keyword = tok.value
        if keyword in _ANNOTATION_AXIOMS:
            self.skip_group()
            return None
        handler = getattr(self, "ax_" + keyword, None)
        if handler is None:
            if keyword in _FOREIGN_KEYWORDS:
                raise UnsupportedConstruct(keyword, tok.line, tok.column)
            raise self.error("unknown axiom type", tok)
        self.next()
        self.expect("lparen")
        self.skip_axiom_annotations()
        result = handler(tok)
        self.expect("rparen")
        return result

    def ax_Declaration(self, tok):
        kind_tok = self.peek()
        if not self.at_keyword():
            raise self.error("expected entity kind")
        self.next()
        self.expect("lparen")
        iri = self.iri()
        self.expect("rparen")
        if kind_tok.value in DECLARATION_KINDS:
            return Declaration(kind_tok.value, iri)
        if kind_tok.value in ("AnnotationProperty", "Datatype"):
            return None
        raise self.error("unknown entity kind", kind_tok)

    def ax_SubClassOf(self, tok):
        return SubClassOf(self.class_expression(), self.class_expression())

    def ax_EquivalentClasses(self, tok):
        operands = [self.class_expression(), self.class_expression()]
        while self.peek().kind != "rparen":
            operands.append(self.class_expression())
        if len(operands) != 2:
            raise UnsupportedConstruct(f"EquivalentClasses with {len(operands)} operands", tok.line, tok.column)
        return EquivalentClasses(*operands)

    def ax_SubObjectPropertyOf(self, tok):
        if self.at_keyword("ObjectPropertyChain"):
            t = self.peek()
            raise UnsupportedConstruct("ObjectPropertyChain", t.line, t.column)
        return SubObjectPropertyOf(self.object_property(), self.object_property())

    def ax_ObjectPropertyDomain(self, tok):
        return ObjectPropertyDomain(self.object_property(), self.class_expression())

    def ax_ObjectPropertyRange(self, tok):
        return ObjectPropertyRange(self.object_property(), self.class_expression())

    def ax_DataPropertyDomain(self, tok):
        return DataPropertyDomain(self.iri(), self.class_expression())

    def ax_DataPropertyRange(self, tok):
        if self.at_keyword():
            t = self.peek()
            raise UnsupportedConstruct(t.value, t.line, t.column)
        return DataPropertyRange(self.iri(), self.iri())

    def ax_ClassAssertion(self, tok):
        cls = self.class_expression()
        ind_tok = self.peek()
        if ind_tok.kind == "name" and ind_tok.value.startswith("_:"):
            raise UnsupportedConstruct("anonymous individual", ind_tok.line, ind_tok.column)
        return ClassAssertion(cls, self.iri())

    # expressions

    def object_property(self) -> str:
        if self.at_keyword():
            t = self.peek()
            if t.value in _FOREIGN_KEYWORDS:
                raise UnsupportedConstruct(t.value, t.line, t.column)
            raise self.error("expected object property", t)
        return self.iri()

    def class_expression(self) -> ClassExpression:
        tok = self.peek()
        if self.is_iri_token(tok):
            iri = self.iri()
            if iri == THING_IRI:
                return Thing()
            if iri == NOTHING_IRI:
                return Nothing()
            return Named(iri)
        if not self.at_keyword():
            raise self.error("expected class expression", tok)
        if tok.value == "ObjectIntersectionOf":
            self.next()
            self.expect("lparen")
            operands = [self.class_expression()]
            while self.peek().kind != "rparen":
                operands.append(self.class_expression())
            self.expect("rparen")
            if len(operands) < 2:
                raise self.error("ObjectIntersectionOf needs two operands", tok)
            return intersection(operands)
        if tok.value == "ObjectSomeValuesFrom":
            self.next()
            self.expect("lparen")
            prop = self.object_property()
            filler = self.class_expression()
            self.expect("rparen")
            return SomeValuesFrom(prop, filler)
        if tok.value in _FOREIGN_KEYWORDS:
            raise UnsupportedConstruct(tok.value, tok.line, tok.column)
        raise self.error("unknown class expression", tok)


def _unquote(literal: str) -> str:
    return re.sub(r"\\(.)", r"\1", literal[1:-1], flags=re.DOTALL)


def parse_ontology(text: str, *, lax: bool = False) -> Ontology:
    """Parse a functional-syntax document.

    With ``lax=True`` axioms using constructs outside the subset are kept as
    :class:`UnsupportedAxiom` instead of raising.
    """
    return _Parser(text, lax).document()


def load_ontology(path, *, lax: bool = False) -> Ontology:
    with open(path, encoding="utf-8") as fh:
        return parse_ontology(fh.read(), lax=lax)


def short_name(iri: str) -> str:
    """Local part of an IRI: text after the last ``#`` or ``/``."""
    for sep in ("#", "/"):
        head, found, tail = iri.rstrip("/#").rpartition(sep)
        if found and tail:
            return tail
    return iri
