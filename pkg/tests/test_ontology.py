from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontomvn.errors import OntologySyntaxError, UnsupportedConstruct
from ontomvn.ontology import (
    EL_PROFILE,
    OUTSIDE_PROFILE,
    ClassAssertion,
    DataPropertyDomain,
    Declaration,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Nothing,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    Thing,
    UnsupportedAxiom,
    check_profile,
    parse_ontology,
    serialize_ontology,
    short_name,
    signature,
)

CORPUS = Path(__file__).parent / "fixtures" / "corpus"
CAMERA = "www.xfront.com/owl/ontologies/camera/#"


def test_empty_ontology():
    o = parse_ontology("Ontology(<http://ex.org/o>)")
    assert o == Ontology(iri="http://ex.org/o")


def test_camera_subclass_of_thing():
    o = parse_ontology(f"Ontology(SubClassOf(<http://{CAMERA}Money> owl:Thing))")
    assert o.axioms == (SubClassOf(Named(f"http://{CAMERA}Money"), Thing()),)


def test_imports_keep_document_order():
    o = parse_ontology("Ontology(Import(<http://ex.org/a>) Import(<http://ex.org/b>))")
    assert o.imports == ("http://ex.org/a", "http://ex.org/b")


def test_duplicate_import_is_dropped():
    o = parse_ontology("Ontology(Import(<http://ex.org/a>) Import(<http://ex.org/a>))")
    assert o.imports == ("http://ex.org/a",)


def test_schemeless_iris_are_accepted():
    o = parse_ontology(f"Ontology(Declaration(Class(<{CAMERA}Money>)))")
    assert o.axioms == (Declaration("Class", f"{CAMERA}Money"),)
    assert f"Declaration(Class(<{CAMERA}Money>))" in serialize_ontology(o)


def test_prefixes_expand_and_serialization_uses_full_iris():
    text = """
    Prefix(:=<http://ex.org/o#>)
    Prefix(ex:=<http://ex.org/other#>)
    Ontology(<http://ex.org/o>
      SubClassOf(:A ObjectIntersectionOf(ex:B ObjectSomeValuesFrom(:r owl:Nothing)))
    )
    """
    o = parse_ontology(text)
    assert o.axioms == (
        SubClassOf(
            Named("http://ex.org/o#A"),
            IntersectionOf((Named("http://ex.org/other#B"), SomeValuesFrom("http://ex.org/o#r", Nothing()))),
        ),
    )
    out = serialize_ontology(o)
    assert "<http://ex.org/o#A>" in out and "Prefix" not in out


def test_every_axiom_kind_round_trips():
    a, b = Named("http://ex.org/A"), Named("http://ex.org/B")
    axioms = (
        Declaration("Class", "http://ex.org/A"),
        Declaration("ObjectProperty", "http://ex.org/r"),
        Declaration("DataProperty", "http://ex.org/d"),
        Declaration("NamedIndividual", "http://ex.org/i"),
        SubClassOf(a, IntersectionOf((b, SomeValuesFrom("http://ex.org/r", Thing())))),
        EquivalentClasses(a, b),
        SubObjectPropertyOf("http://ex.org/r", "http://ex.org/s"),
        ObjectPropertyDomain("http://ex.org/r", a),
        ObjectPropertyRange("http://ex.org/r", b),
        DataPropertyDomain("http://ex.org/d", a),
        ClassAssertion(a, "http://ex.org/i"),
    )
    o = Ontology("http://ex.org/o", ("http://ex.org/imp",), axioms, description='say "hi"')
    assert parse_ontology(serialize_ontology(o)) == o


def test_annotations_are_discarded_except_header_comment():
    text = """
    Ontology(<http://ex.org/o>
      Annotation(rdfs:comment "camera ontology")
      Annotation(rdfs:label "ignored")
      AnnotationAssertion(rdfs:label <http://ex.org/A> "A")
      SubClassOf(Annotation(rdfs:comment "why") <http://ex.org/A> <http://ex.org/B>)
    )
    """
    o = parse_ontology(text)
    assert o.description == "camera ontology"
    assert o.axioms == (SubClassOf(Named("http://ex.org/A"), Named("http://ex.org/B")),)


def test_syntax_error_reports_position_and_token():
    with pytest.raises(OntologySyntaxError) as info:
        parse_ontology("Ontology(\n  SubClassOf(<http://ex.org/A> )\n)")
    err = info.value
    assert (err.line, err.column) == (2, 32)
    assert err.token == ")"


def test_unknown_keyword_is_a_syntax_error():
    with pytest.raises(OntologySyntaxError):
        parse_ontology("Ontology(Frobnicate(<http://ex.org/A>))")


@pytest.mark.parametrize(
    "body, construct",
    [
        ("SubClassOf(<http://ex.org/A> ObjectUnionOf(<http://ex.org/B> <http://ex.org/C>))", "ObjectUnionOf"),
        ("EquivalentClasses(<http://ex.org/A> <http://ex.org/B> <http://ex.org/C>)", "EquivalentClasses"),
        ("TransitiveObjectProperty(<http://ex.org/r>)", "TransitiveObjectProperty"),
    ],
)
def test_constructs_outside_subset(body, construct):
    with pytest.raises(UnsupportedConstruct) as info:
        parse_ontology(f"Ontology(\n{body}\n)")
    assert construct in info.value.construct
    assert info.value.line == 2


def test_lax_mode_keeps_unsupported_axioms():
    text = (
        "Prefix(:=<http://ex.org/#>)\n"
        "Ontology(SubClassOf(:A :B) SubClassOf(:A ObjectUnionOf(:B owl:Thing)))"
    )
    o = parse_ontology(text, lax=True)
    assert o.axioms[0] == SubClassOf(Named("http://ex.org/#A"), Named("http://ex.org/#B"))
    bad = o.axioms[1]
    assert isinstance(bad, UnsupportedAxiom) and bad.construct == "ObjectUnionOf"
    assert "<http://ex.org/#B>" in bad.text
    assert parse_ontology(serialize_ontology(o), lax=True) == o
    report = check_profile(o)
    assert report.profile_name == OUTSIDE_PROFILE
    assert report.violations[0][0] == 1 and "ObjectUnionOf" in report.violations[0][1]


def test_profile_of_el_ontology():
    assert check_profile(Ontology()) == check_profile(parse_ontology((CORPUS / "el04_exists_conjunctive_filler.owl").read_text()))
    assert check_profile(Ontology()).profile_name == EL_PROFILE


def test_signature_partitions():
    assert signature(Ontology()).all() == frozenset()
    o = parse_ontology((CORPUS / "el28_camera.owl").read_text())
    sig = signature(o)
    ns = "http://example.org/el28_camera#"
    assert ns + "Money" in sig.classes
    assert ns + "currency" in sig.data_properties
    assert ns + "cost" in sig.object_properties
    assert not sig.warnings


def test_signature_undeclared_subclass_operand_is_class():
    o = parse_ontology("Ontology(SubClassOf(<http://ex.org/A> <http://ex.org/B>))")
    assert signature(o).classes == {"http://ex.org/A", "http://ex.org/B"}


def test_signature_declaration_wins_and_clash_is_reported():
    o = parse_ontology(
        "Ontology(Declaration(ObjectProperty(<http://ex.org/x>)) SubClassOf(<http://ex.org/x> <http://ex.org/B>))"
    )
    sig = signature(o)
    assert "http://ex.org/x" in sig.object_properties and "http://ex.org/x" not in sig.classes
    assert len(sig.warnings) == 1


def test_short_name():
    assert short_name(f"{CAMERA}Money") == "Money"
    assert short_name("http://ex.org/a/b") == "b"


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.owl")), ids=lambda p: p.stem)
def test_corpus_serialization_is_idempotent(path):
    once = serialize_ontology(parse_ontology(path.read_text()))
    assert serialize_ontology(parse_ontology(once)) == once


# -- generated round trips ---------------------------------------------------

iris = st.sampled_from(["http://ex.org/A", "http://ex.org/B", "urn:x:C", "www.ex.org/D#E"])
roles = st.sampled_from(["http://ex.org/r", "http://ex.org/s"])


def _dedupe(ops):
    out = []
    for op in ops:
        if op not in out:
            out.append(op)
    return out


expressions = st.recursive(
    st.one_of(iris.map(Named), st.just(Thing()), st.just(Nothing())),
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(_dedupe).filter(lambda ops: len(ops) >= 2).map(
            lambda ops: IntersectionOf(tuple(ops))
        ),
        st.builds(SomeValuesFrom, roles, inner),
    ),
    max_leaves=6,
)

axioms = st.one_of(
    st.builds(SubClassOf, expressions, expressions),
    st.builds(EquivalentClasses, expressions, expressions),
    st.builds(Declaration, st.sampled_from(["Class", "ObjectProperty", "DataProperty", "NamedIndividual"]), iris),
    st.builds(SubObjectPropertyOf, roles, roles),
    st.builds(ObjectPropertyDomain, roles, expressions),
    st.builds(ObjectPropertyRange, roles, expressions),
    st.builds(ClassAssertion, expressions, iris),
)

ontologies = st.builds(
    Ontology,
    st.one_of(st.none(), iris),
    st.lists(iris, unique=True, max_size=2).map(tuple),
    st.lists(axioms, max_size=6).map(tuple),
    st.one_of(st.none(), st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20)),
)


@settings(max_examples=200, deadline=None)
@given(ontologies)
def test_round_trip(o):
    text = serialize_ontology(o)
    assert parse_ontology(text) == o
    assert serialize_ontology(parse_ontology(text)) == text
