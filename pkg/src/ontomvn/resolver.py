"""Dependency closure over pom dependencies and ontology imports.

Resolution is breadth first from the project.  Each (groupId, artifactId)
is selected once: the first occurrence in BFS order wins, which is the
shallowest one and, among equally deep ones, the first declared.  Later
occurrences with other versions are recorded as conflicts.

Ontology ``Import(...)`` IRIs become graph edges too.  They are mapped to
coordinates through an existing XML catalog, then the project's import
registry, and finally by downloading the IRI itself into the local
repository under a derived coordinate.
"""

from __future__ import annotations

import logging
import re
import urllib.parse
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    NotFound,
    OntologySyntaxError,
    SchemaError,
    TransportError,
    UnmappableImport,
    XmlError,
)
from .ontology import Ontology, load_ontology, parse_ontology
from .pom import ArtifactCoordinate, ProjectDescriptor, normalize_url
from .repository import (
    LocalRepository,
    ResolvedArtifact,
    Transport,
    UrlTransport,
    coordinate_from_path,
    fetch,
    ontology_file,
)

log = logging.getLogger(__name__)

CATALOG_NS = "urn:oasis:names:tc:entity:xmlns:xml:catalog"
CATALOG_FILE = "catalog.xml"
REGISTRY_FILE = "import-registry.xml"
EXTERNAL_VERSION = "0.0.0-EXTERNAL"

POM_EDGE = "pom"
IMPORT_EDGE = "owl-import"


# -- catalog and registry files ---------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    system_id: str
    uri: str


@dataclass(frozen=True)
class Catalog:
    entries: tuple = ()
    base: Path | None = None  # directory that relative uris are resolved against

    def lookup(self, iri: str) -> Path | None:
        for entry in self.entries:
            if entry.system_id == iri:
                path = Path(entry.uri)
                if not path.is_absolute() and self.base is not None:
                    path = self.base / path
                return path
        return None


def _read_xml(path: Path) -> ET.Element:
    try:
        return ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise XmlError(f"{path}: malformed XML: {exc}") from None


def _systems(root: ET.Element):
    for el in root:
        if isinstance(el.tag, str) and el.tag.rsplit("}", 1)[-1] == "system":
            yield el


def load_catalog(path) -> Catalog:
    path = Path(path)
    if not path.is_file():
        return Catalog(base=path.parent)
    entries = []
    for el in _systems(_read_xml(path)):
        system_id, uri = el.get("systemId"), el.get("uri")
        if not system_id or not uri:
            raise SchemaError("<system> needs systemId and uri attributes", str(path))
        entries.append(CatalogEntry(system_id, uri))
    return Catalog(tuple(entries), path.parent)


def render_catalog(catalog: Catalog) -> str:
    ET.register_namespace("", CATALOG_NS)
    root = ET.Element(f"{{{CATALOG_NS}}}catalog")
    for entry in catalog.entries:
        ET.SubElement(root, f"{{{CATALOG_NS}}}system", {"systemId": entry.system_id, "uri": entry.uri})
    ET.indent(root, space="    ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_catalog(catalog: Catalog, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_catalog(catalog), encoding="utf-8")
    return path


@dataclass
class ImportRegistry:
    """Project-maintained mapping from import IRIs to artifact coordinates."""

    entries: dict = field(default_factory=dict)  # iri -> ArtifactCoordinate

    def lookup(self, iri: str) -> ArtifactCoordinate | None:
        return self.entries.get(iri)


def load_registry(path) -> ImportRegistry:
    path = Path(path)
    if not path.is_file():
        return ImportRegistry()
    entries = {}
    for el in _systems(_read_xml(path)):
        system_id, coordinate = el.get("systemId"), el.get("coordinate")
        if not system_id or not coordinate:
            raise SchemaError("<system> needs systemId and coordinate attributes", str(path))
        try:
            entries[system_id] = ArtifactCoordinate.parse(coordinate)
        except ValueError as exc:
            raise SchemaError(str(exc), str(path)) from None
    return ImportRegistry(entries)


def render_registry(registry: ImportRegistry) -> str:
    root = ET.Element("registry")
    for iri, coord in registry.entries.items():
        ET.SubElement(root, "system", {"systemId": iri, "coordinate": str(coord)})
    if len(root):
        ET.indent(root, space="    ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_registry(registry: ImportRegistry, path) -> Path:
    path = Path(path)
    path.write_text(render_registry(registry), encoding="utf-8")
    return path


# -- import mapping --------------------------------------------------------------------


def derive_coordinate(iri: str) -> ArtifactCoordinate:
    """Coordinate under which a directly downloaded ontology is cached.

    Group is the reversed host name, artifact the stem of the last path
    segment, version ``0.0.0-EXTERNAL``.
    """
    parts = urllib.parse.urlsplit(normalize_url(iri))
    host = parts.hostname or "localhost"
    group = ".".join(reversed([label for label in host.split(".") if label]))
    segments = [s for s in parts.path.split("/") if s]
    stem = segments[-1].rsplit(".", 1)[0] if segments else host
    artifact = re.sub(r"[^A-Za-z0-9._-]", "_", stem) or "ontology"
    return ArtifactCoordinate(group, artifact, EXTERNAL_VERSION)


@dataclass(frozen=True)
class ImportMapping:
    iri: str
    coordinate: ArtifactCoordinate
    source: str  # "catalog", "registry", "cache" or "download"


def map_import(
    iri: str,
    registry: ImportRegistry,
    local: LocalRepository,
    *,
    catalog: Catalog | None = None,
    transport: Transport | None = None,
    offline: bool = False,
) -> ImportMapping:
    if catalog is not None:
        path = catalog.lookup(iri)
        if path is not None and path.is_file():
            try:
                coord = coordinate_from_path(path.resolve().relative_to(local.root.resolve()).as_posix())
            except ValueError:
                coord = None
            if coord is not None and local.contains(coord):
                return ImportMapping(iri, coord, "catalog")
    coord = registry.lookup(iri)
    if coord is not None:
        return ImportMapping(iri, coord, "registry")
    coord = derive_coordinate(iri)
    if local.contains(coord):
        return ImportMapping(iri, coord, "cache")
    if offline:
        raise UnmappableImport(iri, "not registered and offline")
    transport = transport if transport is not None else UrlTransport()
    url = normalize_url(iri)
    try:
        data = transport.get(url)
    except TransportError as exc:
        raise UnmappableImport(iri, str(exc.cause)) from None
    if data is None:
        raise UnmappableImport(iri, f"{url} answered 404")
    local.store(coord, data)
    log.info("downloaded import %s as %s", iri, coord)
    return ImportMapping(iri, coord, "download")


# -- resolution ------------------------------------------------------------------------


@dataclass
class DependencyNode:
    coordinate: ArtifactCoordinate
    depth: int
    requested_by: list = field(default_factory=list)
    edge_kind: str = POM_EDGE


@dataclass(frozen=True)
class Conflict:
    key: tuple
    winner: str
    losers: tuple  # (version, depth)


@dataclass(frozen=True)
class ImportEdge:
    iri: str
    importer: ArtifactCoordinate
    coordinate: ArtifactCoordinate
    source: str


@dataclass
class ResolutionResult:
    root: ArtifactCoordinate
    selected: dict = field(default_factory=dict)  # (group, artifact) -> DependencyNode
    conflicts: list = field(default_factory=list)
    order: list = field(default_factory=list)  # keys in selection order
    import_edges: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)  # key -> ResolvedArtifact
    cycles: list = field(default_factory=list)

    def version_of(self, group_id: str, artifact_id: str) -> str | None:
        node = self.selected.get((group_id, artifact_id))
        return node.coordinate.version if node else None


@dataclass
class _Pending:
    coordinate: ArtifactCoordinate
    depth: int
    parent: ArtifactCoordinate
    chain: tuple
    edge_kind: str


def _imports_of(path: Path) -> tuple:
    return load_ontology(path, lax=True).imports


def resolve(
    project: ProjectDescriptor,
    repos,
    local: LocalRepository,
    *,
    project_dir=None,
    registry: ImportRegistry | None = None,
    catalog: Catalog | None = None,
    transport: Transport | None = None,
    offline: bool = False,
) -> ResolutionResult:
    """Select one version per (groupId, artifactId), nearest first."""
    registry = registry if registry is not None else ImportRegistry()
    root = project.coordinate
    result = ResolutionResult(root)
    queue: deque[_Pending] = deque()
    conflict_losers: dict[tuple, list] = {}

    def enqueue(parent: ArtifactCoordinate, chain: tuple, depth: int, deps, imports) -> None:
        for dep in deps:
            queue.append(_Pending(dep.coordinate, depth + 1, parent, chain, POM_EDGE))
        for iri in imports:
            mapping = map_import(iri, registry, local, catalog=catalog, transport=transport, offline=offline)
            result.import_edges.append(ImportEdge(iri, parent, mapping.coordinate, mapping.source))
            queue.append(_Pending(mapping.coordinate, depth + 1, parent, chain, IMPORT_EDGE))

    root_imports: tuple = ()
    if project_dir is not None:
        owl = ontology_file(project_dir, project)
        if owl.is_file():
            root_imports = _imports_of(owl)
    enqueue(root, (root,), 0, project.dependencies, root_imports)

    while queue:
        item = queue.popleft()
        coord = item.coordinate
        key = coord.key
        if key == root.key or any(c.key == key for c in item.chain):
            cycle = [*item.chain, coord]
            result.cycles.append(tuple(cycle))
            log.info("dependency cycle: %s", " -> ".join(str(c) for c in cycle))
            continue
        node = result.selected.get(key)
        if node is not None:
            if node.coordinate.version == coord.version:
                if item.parent not in node.requested_by:
                    node.requested_by.append(item.parent)
            else:
                conflict_losers.setdefault(key, []).append((coord.version, item.depth))
            continue
        try:
            artifact = fetch(coord, repos, local)
        except NotFound as exc:
            raise NotFound(coord, exc.tried, chain=item.chain) from None
        node = DependencyNode(coord, item.depth, [item.parent], item.edge_kind)
        result.selected[key] = node
        result.order.append(key)
        result.artifacts[key] = artifact
        imports: tuple = ()
        if coord.type == "owl":
            try:
                imports = _imports_of(artifact.file)
            except OntologySyntaxError as exc:
                raise OntologySyntaxError(f"{artifact.file}: {exc}", exc.line, exc.column, exc.token) from None
        deps = artifact.pom.dependencies if artifact.pom is not None else ()
        enqueue(coord, (*item.chain, coord), item.depth, deps, imports)

    for key, losers in conflict_losers.items():
        winner = result.selected[key]
        result.conflicts.append(Conflict(key, winner.coordinate.version, tuple(losers)))
    return result


def emit_catalog(result: ResolutionResult, path) -> Catalog:
    """Write ``catalog.xml`` redirecting each import IRI to its cached file."""
    entries: list[CatalogEntry] = []
    seen: set[str] = set()
    for edge in result.import_edges:
        if edge.iri in seen:
            continue
        artifact: ResolvedArtifact | None = result.artifacts.get(edge.coordinate.key)
        if artifact is None:
            continue
        seen.add(edge.iri)
        entries.append(CatalogEntry(edge.iri, str(artifact.file.resolve())))
    path = Path(path)
    catalog = Catalog(tuple(entries), path.parent)
    write_catalog(catalog, path)
    return catalog


def load_with_catalog(
    ontology: Ontology,
    catalog: Catalog,
    *,
    transport: Transport | None = None,
    offline: bool = False,
) -> list[tuple[str, Ontology]]:
    """Load the transitive import closure, preferring catalog entries.

    Each IRI is loaded at most once, so cyclic imports terminate.
    """
    loaded: list[tuple[str, Ontology]] = []
    visited: set[str] = set()
    queue = deque(ontology.imports)
    while queue:
        iri = queue.popleft()
        if iri in visited:
            continue
        visited.add(iri)
        path = catalog.lookup(iri)
        if path is not None and path.is_file():
            text = path.read_text(encoding="utf-8")
        elif offline:
            raise UnmappableImport(iri, "no catalog entry and offline")
        else:
            transport = transport if transport is not None else UrlTransport()
            try:
                data = transport.get(normalize_url(iri))
            except TransportError as exc:
                raise UnmappableImport(iri, str(exc.cause)) from None
            if data is None:
                raise UnmappableImport(iri, "not found")
            text = data.decode("utf-8")
        imported = parse_ontology(text, lax=True)
        loaded.append((iri, imported))
        queue.extend(imported.imports)
    return loaded


def merge(ontology: Ontology, closure) -> Ontology:
    """One ontology holding the axioms of ``ontology`` and its imports."""
    axioms = list(ontology.axioms)
    for _, imported in closure:
        axioms.extend(imported.axioms)
    return Ontology(ontology.iri, ontology.imports, tuple(axioms), ontology.description)


def version_key(version: str) -> tuple:
    """Sort key: numeric dot segments, a snapshot sorting below its release."""
    base, snapshot = (version[: -len("-SNAPSHOT")], True) if version.endswith("-SNAPSHOT") else (version, False)
    segments = []
    for part in re.split(r"[.-]", base):
        segments.append((0, int(part), "") if part.isdigit() else (1, 0, part))
    return (tuple(segments), 0 if snapshot else 1)
