from __future__ import annotations

import json
import shutil
import xml.etree.ElementTree as ET
from dataclasses import replace

import pytest
from conftest import FIXTURES
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import has_model, refutes

from ontomvn.errors import SuiteError
from ontomvn.ontology import EL_PROFILE, OUTSIDE_PROFILE, load_ontology
from ontomvn.pom import ArtifactCoordinate, PluginConfig, ProjectDescriptor, load_pom
from ontomvn.testrunner import (
    CONSISTENCY,
    ENTAILED,
    ENTAILMENT,
    LAX,
    NOT_ENTAILED,
    SYNTAX,
    SYNTAX_FAILURE,
    TestCase,
    cases_from_project,
    render_report_text,
    run_cases,
    run_suite,
    write_report,
)

SUITE = FIXTURES / "suite"
MANIFEST = json.loads((SUITE / "manifest.json").read_text())
CORPUS = sorted((FIXTURES / "corpus").glob("*.owl"))
COORD = ArtifactCoordinate("de.csw", "owltests", "1.0")

VERDICTS = {
    SYNTAX: {EL_PROFILE, OUTSIDE_PROFILE, SYNTAX_FAILURE, "unknown"},
    CONSISTENCY: {"consistent", "inconsistent", "unknown"},
    ENTAILMENT: {ENTAILED, NOT_ENTAILED, "unknown"},
}


def single(case: TestCase, base=SUITE):
    (outcome,) = run_cases([case], base).outcomes
    assert outcome.verdict in VERDICTS[case.kind]
    return outcome


def plugin(artifact: str, goal: str, **config) -> PluginConfig:
    return PluginConfig("de.csw.MvnOnt", artifact, "1.0-SNAPSHOT", config, (goal,))


def test_case_requires_inputs():
    with pytest.raises(ValueError):
        TestCase(ENTAILMENT, {"premise_file": "a.owl"})
    with pytest.raises(ValueError):
        TestCase(SYNTAX, {"owlfile": "a.owl"}, "relaxed")
    with pytest.raises(ValueError):
        TestCase("sparql", {"owlfile": "a.owl"})


def test_syntax_modes():
    clean = single(TestCase(SYNTAX, {"owlfile": "owl/1a.owl"}))
    assert clean.verdict == EL_PROFILE and not clean.failed
    strict = single(TestCase(SYNTAX, {"owlfile": "consistency/c06_union_outside_subset.owl"}))
    assert strict.failed and strict.verdict == SYNTAX_FAILURE
    assert "ObjectUnionOf" in strict.details[0]
    lax = single(TestCase(SYNTAX, {"owlfile": "consistency/c06_union_outside_subset.owl"}, LAX))
    assert not lax.failed and lax.verdict == OUTSIDE_PROFILE
    assert lax.details[0].startswith("warning:")


def test_syntax_error_fails_in_both_modes():
    for mode in ("strict", "lax"):
        outcome = single(TestCase(SYNTAX, {"owlfile": "consistency/c09_syntax_error.owl"}, mode))
        assert outcome.failed and outcome.verdict == SYNTAX_FAILURE


def test_missing_file_is_unknown():
    outcome = single(TestCase(SYNTAX, {"owlfile": "owl/absent.owl"}))
    assert outcome.verdict == "unknown" and not outcome.failed
    assert "file not found" in outcome.details[0]


@pytest.mark.parametrize("owlfile,expected", sorted(MANIFEST["consistency"].items()))
def test_consistency_manifest(owlfile, expected):
    outcome = single(TestCase(CONSISTENCY, {"owlfile": owlfile}), SUITE)
    assert outcome.verdict == expected
    assert outcome.failed == (expected == "inconsistent")


def test_consistency_verdicts_match_oracle():
    for owlfile, expected in MANIFEST["consistency"].items():
        if expected == "unknown":
            continue
        onto = load_ontology(SUITE / owlfile, lax=True)
        # an inconsistent EL part makes the whole ontology inconsistent
        core = replace(onto, axioms=tuple(a for a in onto.axioms if a not in onto.unsupported_axioms))
        assert not onto.unsupported_axioms or expected == "inconsistent"
        model = has_model(core)
        assert (model is not None) == (expected == "consistent"), owlfile


def test_inconsistency_witness():
    outcome = single(TestCase(CONSISTENCY, {"owlfile": "consistency/c02_assertion_unsat.owl"}))
    assert any("http://example.org/t#a" in d for d in outcome.details)


def test_unreachable_import_is_unmappable():
    outcome = single(TestCase(CONSISTENCY, {"owlfile": "consistency/c07_unreachable_import.owl"}))
    assert outcome.verdict == "unknown"
    assert outcome.details[0].startswith("UnmappableImport")


def test_imports_resolved_through_catalog(tmp_path):
    (tmp_path / "dep.owl").write_text(
        "Ontology(<http://ex.org/dep>\nSubClassOf(<http://ex.org/t#A> owl:Nothing)\n)\n"
    )
    (tmp_path / "main.owl").write_text(
        "Ontology(<http://ex.org/main>\nImport(<http://ex.org/dep>)\n"
        "ClassAssertion(<http://ex.org/t#A> <http://ex.org/t#a>)\n)\n"
    )
    (tmp_path / "catalog.xml").write_text(
        '<catalog xmlns="urn:oasis:names:tc:entity:xmlns:xml:catalog">'
        '<system systemId="http://ex.org/dep" uri="dep.owl"/></catalog>'
    )
    assert single(TestCase(CONSISTENCY, {"owlfile": "main.owl"}), tmp_path).verdict == "inconsistent"


@pytest.mark.parametrize("premise,conclusion,expected", MANIFEST["entailment"])
def test_entailment_manifest(premise, conclusion, expected):
    outcome = single(TestCase(ENTAILMENT, {"premise_file": premise, "conclusion_file": conclusion}))
    assert outcome.verdict == expected
    assert outcome.failed == (expected == NOT_ENTAILED)


def test_entailment_verdicts_match_oracle():
    for premise, conclusion, expected in MANIFEST["entailment"]:
        if expected == "unknown":
            continue
        base = load_ontology(SUITE / premise)
        refuted = [a for a in load_ontology(SUITE / conclusion).axioms if refutes(base, a) is not None]
        assert bool(refuted) == (expected == NOT_ENTAILED), (premise, conclusion)


def test_no_entailment_names_first_failing_axiom():
    outcome = single(TestCase(ENTAILMENT, {"premise_file": "owl/5a.owl", "conclusion_file": "owl/5aconclusion.owl"}))
    assert outcome.details == ("not entailed: ClassAssertion(<http://example.org/t#A> <http://example.org/t#y>)",)


@settings(max_examples=len(CORPUS), deadline=None)
@given(st.sampled_from(CORPUS))
def test_ontology_entails_itself(path):
    case = TestCase(ENTAILMENT, {"premise_file": path.name, "conclusion_file": path.name})
    assert single(case, path.parent).verdict == ENTAILED


def test_suite_from_listing_pom(tmp_path):
    shutil.copytree(SUITE / "owl", tmp_path / "owl")
    shutil.copy(FIXTURES / "poms" / "test_plugins.xml", tmp_path / "pom.xml")
    project = load_pom(tmp_path / "pom.xml")
    report = run_suite(project, tmp_path)
    assert [(o.case.kind, o.verdict) for o in report.outcomes] == [
        (CONSISTENCY, "consistent"),
        (ENTAILMENT, ENTAILED),
    ]
    assert report.success
    path = write_report(report, tmp_path / "target/test-reports/report.xml")
    root = ET.parse(path).getroot()
    assert root.tag == "testsuite" and root.get("tests") == "2"
    assert [c.get("verdict") for c in root] == ["consistent", "Entailment"]
    assert "Tests run: 2, passed: 2, failed: 0, unknown: 0" in render_report_text(report)


def test_empty_suite_succeeds(tmp_path):
    report = run_suite(ProjectDescriptor(COORD), tmp_path)
    assert report.outcomes == () and report.success


def test_one_pass_one_fail():
    project = ProjectDescriptor(
        COORD,
        plugins=(
            plugin("MvnOwlEntailment", "owlentailment", premise_file="owl/1a.owl", conclusion_file="owl/1aconclusion.owl"),
            plugin("MvnOwlEntailment", "owlentailment", premise_file="owl/2a.owl", conclusion_file="owl/2aconclusion.owl"),
        ),
    )
    report = run_suite(project, SUITE)
    assert (report.passed, report.failed) == (1, 1)
    assert not report.success


def test_compliancemode_precedence():
    project = ProjectDescriptor(
        COORD,
        plugins=(plugin("MvnOwlSyntax", "test-syntax", owlfile="consistency/c06_union_outside_subset.owl", compliancemode="lax"),),
    )
    (case,) = cases_from_project(project)
    assert case.compliancemode == "lax"
    assert run_suite(project, SUITE).success
    (case,) = cases_from_project(project, "strict")
    assert case.compliancemode == "strict"
    assert not run_suite(project, SUITE, compliancemode="strict").success


def test_malformed_configuration_names_plugin():
    project = ProjectDescriptor(COORD, plugins=(plugin("MvnOwlEntailment", "owlentailment", premise_file="owl/1a.owl"),))
    with pytest.raises(SuiteError) as info:
        cases_from_project(project)
    assert "de.csw.MvnOnt:MvnOwlEntailment" in str(info.value)
    assert "conclusion_file" in str(info.value)


def test_outcome_order_is_declaration_order():
    files = sorted(MANIFEST["consistency"])
    project = ProjectDescriptor(COORD, plugins=tuple(plugin(f"T{i}", "owltest", owlfile=f) for i, f in enumerate(files)))
    report = run_suite(project, SUITE)
    assert [o.case.inputs["owlfile"] for o in report.outcomes] == files
    assert [o.verdict for o in report.outcomes] == [MANIFEST["consistency"][f] for f in files]
