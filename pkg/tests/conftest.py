from __future__ import annotations

from pathlib import Path

import pytest

from ontomvn.pom import ArtifactCoordinate, DependencyDecl, PluginConfig, ProjectDescriptor, serialize_pom
from ontomvn.repository import LocalRepository
from ontomvn.server import serve

FIXTURES = Path(__file__).parent / "fixtures"

# acceptance criteria outcomes, printed after the run: nodeid -> (title, detail, outcome)
_CRITERIA: dict[str, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(title): acceptance criterion reported in the summary")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.outcome == "failed":
        _CRITERIA[report.nodeid] = (props["criterion"], props.get("detail", ""), report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for title, detail, outcome in _CRITERIA.values():
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {title}" + (f"  ({detail})" if detail else ""))


def write_project(
    directory: Path,
    coordinate: str,
    ontology: str = "Ontology()\n",
    *,
    dependencies=(),
    plugins=(),
    reporting=(),
) -> Path:
    """Create ``pom.xml`` and the conventional ontology file under ``directory``."""
    coord = ArtifactCoordinate.parse(coordinate)
    project = ProjectDescriptor(
        coord,
        dependencies=tuple(DependencyDecl(ArtifactCoordinate.parse(d)) for d in dependencies),
        plugins=tuple(plugins),
        reporting=tuple(reporting),
    )
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "pom.xml").write_text(serialize_pom(project), encoding="utf-8")
    owl = directory / "src" / "main" / "owl" / f"{coord.artifact_id}.owl"
    owl.parent.mkdir(parents=True, exist_ok=True)
    owl.write_text(ontology, encoding="utf-8")
    return directory


def import_plugin(owlfile: str | None = None, local: str = "true") -> PluginConfig:
    config = {"local": local}
    if owlfile:
        config["owlfile"] = owlfile
    return PluginConfig("de.csw.ontomaven", "OntoMvnImport", "1.0-SNAPSHOT", config, ("owlimport",))


@pytest.fixture
def remote_root(tmp_path) -> Path:
    root = tmp_path / "remote"
    root.mkdir()
    return root


@pytest.fixture
def server(remote_root):
    with serve(remote_root) as handle:
        yield handle


def publish_artifact(repo_root: Path, coordinate: str, ontology: str = "Ontology()\n", dependencies=()) -> None:
    """Store an artifact and its pom (with sidecars) in a repository directory."""
    coord = ArtifactCoordinate.parse(coordinate)
    project = ProjectDescriptor(
        coord, dependencies=tuple(DependencyDecl(ArtifactCoordinate.parse(d)) for d in dependencies)
    )
    LocalRepository(repo_root).store(coord, ontology.encode(), serialize_pom(project).encode())


def build_diamond(repo_root: Path, project_dir: Path, *, direct: bool = True) -> Path:
    """root -> A:1.0 -> C:1.0, root -> B:1.0 -> C:2.0 and optionally root -> C:3.0."""
    publish_artifact(repo_root, "diamond:A:1.0", dependencies=["diamond:C:1.0"])
    publish_artifact(repo_root, "diamond:B:1.0", dependencies=["diamond:C:2.0"])
    for version in ("1.0", "2.0", "3.0"):
        publish_artifact(repo_root, f"diamond:C:{version}")
    deps = ["diamond:A:1.0", "diamond:B:1.0"] + (["diamond:C:3.0"] if direct else [])
    return write_project(project_dir, "diamond:root:1.0", dependencies=deps)


CAMERA_COORD = "xfront.com.owl.ontologies:Camera-OWL-Ontology:1.0-SNAPSHOT"


def camera_project(project_dir: Path, repo_root: Path) -> Path:
    """Camera project holding the working copy; the base version is stored in ``repo_root``."""
    camera = FIXTURES / "camera"
    owl = project_dir / "src" / "main" / "owl" / "Camera-OWL-Ontology.owl"
    owl.parent.mkdir(parents=True)
    (project_dir / "pom.xml").write_text((camera / "pom.xml").read_text())
    owl.write_text((camera / "working.owl").read_text())
    publish_artifact(repo_root, CAMERA_COORD, (camera / "base.owl").read_text())
    return project_dir
