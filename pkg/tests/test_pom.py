from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontomvn.errors import SchemaError, XmlError
from ontomvn.pom import (
    ArtifactCoordinate,
    DependencyDecl,
    Developer,
    License,
    Organization,
    PluginConfig,
    Profile,
    ProjectDescriptor,
    ProjectMetadata,
    RepositoryDecl,
    effective_repositories,
    load_pom,
    parse_pom,
    serialize_pom,
)

POMS = Path(__file__).parent / "fixtures" / "poms"


def test_dependency_listing():
    p = load_pom(POMS / "dependency_listing.xml")
    assert p.dependencies == (DependencyDecl(ArtifactCoordinate("de.onto.maven", "TimeOntologie", "1.0")),)
    assert p.dependencies[0].coordinate.type == "owl"
    assert not p.dependencies[0].coordinate.snapshot


def test_profile_repository_listing():
    p = load_pom(POMS / "profile_repository.xml")
    repos = effective_repositories(p)
    assert repos == [
        RepositoryDecl(
            "snapshots",
            "http://www.corporate-semantic-web.de/repository/snapshots/",
            "OntoMaven Snapshot Repository",
            True,
        )
    ]
    (dep,) = p.dependencies
    assert str(dep.coordinate) == "xfront.com.owl.ontologies:Camera-OWL-Ontology:1.0-SNAPSHOT"
    assert dep.coordinate.snapshot


def test_minimal_pom():
    p = load_pom(POMS / "minimal.xml")
    assert p.coordinate == ArtifactCoordinate("de.onto.maven", "TimeOntologie", "1.0")
    assert p.dependencies == p.repositories == p.plugins == p.reporting == ()
    assert p.metadata.empty
    assert effective_repositories(p) == []
    assert not p.warnings


def test_metadata_listing():
    meta = load_pom(POMS / "project_metadata.xml").metadata
    assert meta.description == "here's the descripton of an ontology"
    assert meta.organization == Organization("Corporate Semantic Web, Freie Universität Berlin", "www.corporate-semantic-web.de")
    assert meta.inception_year == "2013"
    assert meta.licenses == (License("LGPL-3.0", "www.gnu.org/licenses/lgpl.txt"),)
    (dev,) = meta.developers
    assert dev.organization_url == "www.corporate-semantic-web.de/"
    assert dev.roles == ("developer",)


def test_plugin_listings():
    (imp,) = load_pom(POMS / "import_plugin.xml").plugins
    assert imp.artifact_id == "OntoMvnImport"
    assert imp.configuration == {"owlfile": "src/resource/reputation.owl", "local": "true"}
    assert imp.goals == ("owlimport",)

    (diff,) = load_pom(POMS / "semantic_diff_plugin.xml").plugins
    assert diff.version == "1.0-SNAPSHOT"
    assert diff.goals == ("semantic-diff",)

    test, entail = load_pom(POMS / "test_plugins.xml").plugins
    assert test.configuration == {"owlfile": "owl/1a.owl"}
    assert entail.configuration["conclusion_file"] == "owl/1aconclusion.owl"
    assert entail.goals == ("owlentailment",)

    (report,) = load_pom(POMS / "reporting_plugin.xml").reporting
    assert report.reports == ("ontologyreport", "technicalreport", "visualizer")


def test_namespaced_pom_and_repository_precedence():
    p = load_pom(POMS / "maven_namespace.xml")
    assert p.coordinate.artifact_id == "pizza"
    assert p.dependencies[0].coordinate.classifier == "core"
    repos = effective_repositories(p)
    assert [(r.id, r.url) for r in repos] == [
        ("central", "http://repo.example.org/owl/"),
        ("extra", "https://extra.example.org/"),
    ]
    assert p.warnings == ("ignored element project/packaging",)


def test_unknown_elements_are_reported():
    p = parse_pom(
        "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>"
        "<scm><url>x</url></scm><profiles><profile><id>p</id>"
        "<activation><property><name>env</name></property></activation></profile></profiles></project>"
    )
    assert p.warnings == ("ignored element project/scm", "ignored element project/profiles/profile/activation/property")


@pytest.mark.parametrize(
    "text",
    [
        "<project><artifactId>a</artifactId><version>1</version></project>",
        "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>"
        "<dependencies><dependency><groupId>x</groupId><artifactId>y</artifactId></dependency></dependencies></project>",
        "<pom/>",
    ],
)
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        parse_pom(text)


def test_duplicate_dependency_is_rejected():
    dep = "<dependency><groupId>x</groupId><artifactId>y</artifactId><version>{}</version></dependency>"
    text = (
        "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version><dependencies>"
        + dep.format("1.0")
        + dep.format("2.0")
        + "</dependencies></project>"
    )
    with pytest.raises(SchemaError, match="duplicate dependency x:y"):
        parse_pom(text)


def test_malformed_xml():
    with pytest.raises(XmlError):
        parse_pom("<project><groupId>g</project")


def test_coordinate_validation_and_parsing():
    with pytest.raises(ValueError):
        ArtifactCoordinate("a/b", "c", "1")
    with pytest.raises(ValueError):
        ArtifactCoordinate("a", "c d", "1")
    c = ArtifactCoordinate.parse("ex.com:example:1.0")
    assert c == ArtifactCoordinate("ex.com", "example", "1.0", "owl")
    assert ArtifactCoordinate.parse("g:a:1:pom:src") == ArtifactCoordinate("g", "a", "1", "pom", "src")
    assert str(ArtifactCoordinate("g", "a", "1", "owl", "src")) == "g:a:1:owl:src"


def test_serialize_minimal():
    text = serialize_pom(ProjectDescriptor(ArtifactCoordinate("de.onto.maven", "TimeOntologie", "1.0")))
    assert "<groupId>de.onto.maven</groupId>" in text
    assert "<artifactId>TimeOntologie</artifactId>" in text
    assert "<version>1.0</version>" in text


def test_serialize_license():
    meta = ProjectMetadata(licenses=(License("LGPL-3.0", "www.gnu.org/licenses/lgpl.txt"),))
    text = serialize_pom(ProjectDescriptor(ArtifactCoordinate("g", "a", "1"), metadata=meta))
    assert "<name>LGPL-3.0</name>" in text and "<url>www.gnu.org/licenses/lgpl.txt</url>" in text


@pytest.mark.parametrize("path", sorted(POMS.glob("*.xml")), ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    p = load_pom(path)
    assert parse_pom(serialize_pom(p)) == p
    assert serialize_pom(parse_pom(serialize_pom(p))) == serialize_pom(p)


# -- generated descriptors ---------------------------------------------------------

token = st.text(alphabet="abcdefghij.-_0123456789", min_size=1, max_size=8).filter(lambda s: s.strip(".") != "")
prose = st.text(alphabet="abc XYZ,'äü", min_size=1, max_size=12).map(lambda s: " ".join(s.split())).filter(bool)
coords = st.builds(
    ArtifactCoordinate, token, token, token, st.sampled_from(["owl", "pom"]), st.one_of(st.none(), token)
)
repos = st.builds(
    RepositoryDecl, token, token.map(lambda t: "http://" + t), st.one_of(st.none(), prose), st.booleans()
)
plugins = st.builds(
    PluginConfig,
    st.one_of(st.none(), token),
    token,
    st.one_of(st.none(), token),
    st.dictionaries(st.sampled_from(["owlfile", "local", "premise_file"]), token, max_size=2),
    st.lists(token, max_size=2).map(tuple),
    st.just(()),
)
metadata = st.builds(
    ProjectMetadata,
    st.one_of(st.none(), prose),
    st.one_of(st.none(), st.builds(Organization, st.one_of(st.none(), prose), st.one_of(st.none(), token))),
    st.one_of(st.none(), token),
    st.lists(st.builds(License, st.one_of(st.none(), prose), st.one_of(st.none(), token)), max_size=2).map(tuple),
    st.lists(
        st.builds(Developer, prose, st.one_of(st.none(), token), st.none(), st.none(), st.lists(token, max_size=2).map(tuple)),
        max_size=2,
    ).map(tuple),
)


def _unique_deps(cs):
    seen, out = set(), []
    for c in cs:
        if c.key not in seen:
            seen.add(c.key)
            out.append(DependencyDecl(c))
    return tuple(out)


descriptors = st.builds(
    ProjectDescriptor,
    coords.map(lambda c: ArtifactCoordinate(c.group_id, c.artifact_id, c.version)),
    st.lists(coords, max_size=3).map(_unique_deps),
    st.lists(repos, max_size=2).map(tuple),
    st.lists(st.builds(Profile, token, st.booleans(), st.lists(repos, max_size=2).map(tuple)), max_size=2).map(tuple),
    st.lists(plugins, max_size=2).map(tuple),
    st.lists(
        st.builds(PluginConfig, st.one_of(st.none(), token), token, st.none(), st.just({}), st.just(()), st.lists(token, min_size=1, max_size=3).map(tuple)),
        max_size=1,
    ).map(tuple),
    metadata,
)


@settings(max_examples=150, deadline=None)
@given(descriptors)
def test_generated_round_trip(p):
    assert parse_pom(serialize_pom(p)) == p


@settings(max_examples=100, deadline=None)
@given(descriptors)
def test_effective_repositories_first_id_wins(p):
    repos = effective_repositories(p)
    ids = [r.id for r in repos]
    assert len(ids) == len(set(ids))
    assert repos == effective_repositories(p)
    for r in p.repositories:
        assert next(x for x in repos if x.id == r.id) == next(x for x in p.repositories if x.id == r.id)
