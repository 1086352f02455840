"""Local artifact cache and remote repositories in the Maven directory layout.

An artifact ``g:a:v[:type[:classifier]]`` lives at::

    g/with/dots/as/dirs/a/v/a-v[-classifier].type

next to ``a-v[-classifier].pom`` and a ``.sha1`` sidecar for each file.
Remote repositories expose the same layout over HTTP GET/PUT.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath
from typing import Protocol

from .errors import (
    ChecksumMismatch,
    MissingOntologyFile,
    MissingPom,
    NotFound,
    RemoteRejected,
    TransportError,
)
from .pom import ArtifactCoordinate, ProjectDescriptor, RepositoryDecl, load_pom, parse_pom

log = logging.getLogger(__name__)

DEFAULT_LOCAL_REPOSITORY = Path("~/.ontomvn/repository")
REPO_ENV = "ONTOMVN_REPO"
IMPORT_GOAL = "owlimport"


def default_local_root() -> Path:
    env = os.environ.get(REPO_ENV)
    return Path(env) if env else DEFAULT_LOCAL_REPOSITORY.expanduser()


# -- layout --------------------------------------------------------------------


def artifact_path(coord: ArtifactCoordinate) -> PurePosixPath:
    stem = f"{coord.artifact_id}-{coord.version}"
    if coord.classifier:
        stem += f"-{coord.classifier}"
    return PurePosixPath(*coord.group_id.split("."), coord.artifact_id, coord.version, f"{stem}.{coord.type}")


def pom_path(coord: ArtifactCoordinate) -> PurePosixPath:
    return artifact_path(coord).with_suffix(".pom")


def coordinate_from_path(path) -> ArtifactCoordinate:
    """Inverse of :func:`artifact_path`."""
    parts = PurePosixPath(path).parts
    if len(parts) < 4:
        raise ValueError(f"not an artifact path: {path}")
    *group, artifact, version, filename = parts
    prefix = f"{artifact}-{version}"
    if not filename.startswith(prefix):
        raise ValueError(f"file name {filename!r} does not match {artifact}/{version}")
    rest, _, type_ = filename[len(prefix) :].rpartition(".")
    if rest and not rest.startswith("-"):
        raise ValueError(f"not an artifact path: {path}")
    return ArtifactCoordinate(".".join(group), artifact, version, type_, rest[1:] or None)


def sha1_hex(data: bytes) -> str:
    return hashlib.sha1(data).hexdigest()


def parse_sha1(content: bytes) -> str:
    # Maven sidecars sometimes carry "digest  filename"
    text = content.decode("ascii", "replace").strip()
    return text.split()[0].lower() if text else ""


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


@dataclass(frozen=True)
class ResolvedArtifact:
    coordinate: ArtifactCoordinate
    file: Path
    pom: ProjectDescriptor | None
    origin: str  # "local" or the serving repository id


class LocalRepository:
    def __init__(self, root):
        self.root = Path(root)

    def __repr__(self) -> str:
        return f"LocalRepository({str(self.root)!r})"

    def path_for(self, coord: ArtifactCoordinate) -> Path:
        return self.root / artifact_path(coord)

    def pom_path_for(self, coord: ArtifactCoordinate) -> Path:
        return self.root / pom_path(coord)

    def contains(self, coord: ArtifactCoordinate) -> bool:
        return self.path_for(coord).is_file()

    def write(self, path: Path, data: bytes) -> None:
        """Write ``data`` and its ``.sha1`` sidecar."""
        atomic_write(path, data)
        atomic_write(path.with_name(path.name + ".sha1"), sha1_hex(data).encode("ascii"))

    def store(self, coord: ArtifactCoordinate, data: bytes, pom: bytes | None = None) -> Path:
        target = self.path_for(coord)
        if pom is not None:
            self.write(self.pom_path_for(coord), pom)
        self.write(target, data)
        return target

    def verify(self, path: Path) -> None:
        """Raise ChecksumMismatch unless ``path`` matches its sidecar."""
        sidecar = path.with_name(path.name + ".sha1")
        actual = sha1_hex(path.read_bytes())
        expected = parse_sha1(sidecar.read_bytes()) if sidecar.is_file() else None
        if expected != actual:
            raise ChecksumMismatch(str(path), expected, actual)

    def read_pom(self, coord: ArtifactCoordinate) -> ProjectDescriptor | None:
        path = self.pom_path_for(coord)
        return load_pom(path) if path.is_file() else None

    def resolved(self, coord: ArtifactCoordinate) -> ResolvedArtifact:
        path = self.path_for(coord)
        self.verify(path)
        return ResolvedArtifact(coord, path, self.read_pom(coord), "local")


# -- transports ---------------------------------------------------------------


class Transport(Protocol):
    def get(self, url: str) -> bytes | None:
        """Body of ``url``; None when the server answers 404."""

    def put(self, url: str, data: bytes) -> None: ...


class UrlTransport:
    """HTTP (and file:) transport on top of urllib."""

    def __init__(self, timeout: float = 10.0):
        self.timeout = timeout

    def get(self, url: str) -> bytes | None:
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                return resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code in (404, 410):
                return None
            raise TransportError(url, f"HTTP {exc.code}") from None
        except FileNotFoundError:
            return None
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, FileNotFoundError):
                return None
            raise TransportError(url, exc.reason) from None
        except (OSError, ValueError) as exc:
            raise TransportError(url, exc) from None

    def put(self, url: str, data: bytes) -> None:
        req = urllib.request.Request(url, data=data, method="PUT")
        req.add_header("Content-Type", "application/octet-stream")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                resp.read()
        except urllib.error.HTTPError as exc:
            raise RemoteRejected(exc.code, url) from None
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise TransportError(url, getattr(exc, "reason", exc)) from None


class RecordingTransport:
    """Wraps another transport and records every request as ``(method, url)``."""

    def __init__(self, inner: Transport | None = None):
        self.inner = inner if inner is not None else UrlTransport()
        self.calls: list[tuple[str, str]] = []

    @property
    def count(self) -> int:
        return len(self.calls)

    def get(self, url: str) -> bytes | None:
        self.calls.append(("GET", url))
        return self.inner.get(url)

    def put(self, url: str, data: bytes) -> None:
        self.calls.append(("PUT", url))
        self.inner.put(url, data)


@dataclass
class RemoteRepository:
    decl: RepositoryDecl
    transport: Transport = field(default_factory=UrlTransport)

    @property
    def id(self) -> str:
        return self.decl.id

    def url_for(self, relpath) -> str:
        return self.decl.url.rstrip("/") + "/" + str(relpath)


# -- operations -------------------------------------------------------------------


def _checked_get(repo: RemoteRepository, url: str, warnings: list[str]) -> bytes | None:
    data = repo.transport.get(url)
    if data is None:
        return None
    sidecar = repo.transport.get(url + ".sha1")
    if sidecar is None:
        msg = f"no checksum published for {url}"
        log.warning(msg)
        warnings.append(msg)
    else:
        expected, actual = parse_sha1(sidecar), sha1_hex(data)
        if expected != actual:
            raise ChecksumMismatch(url, expected, actual)
    return data


def fetch(
    coord: ArtifactCoordinate,
    repos,
    local: LocalRepository,
    *,
    warnings: list[str] | None = None,
) -> ResolvedArtifact:
    """Resolve ``coord`` into ``local``, downloading it when needed.

    Released versions already in the cache are returned without touching
    the network.  Snapshots are always re-checked against the remotes and
    fall back to the cached copy when no remote serves them.
    """
    warnings = warnings if warnings is not None else []
    cached = local.contains(coord)
    if cached and not coord.snapshot:
        return local.resolved(coord)

    tried: list[str] = []
    failures: list[TransportError] = []
    for repo in repos:
        url = repo.url_for(artifact_path(coord))
        tried.append(url)
        try:
            data = _checked_get(repo, url, warnings)
            if data is None:
                continue
            pom_bytes = _checked_get(repo, repo.url_for(pom_path(coord)), warnings)
        except TransportError as exc:
            log.warning("%s", exc)
            failures.append(exc)
            continue
        path = local.store(coord, data, pom_bytes)
        log.info("fetched %s from %s", coord, repo.id)
        return ResolvedArtifact(coord, path, parse_pom(pom_bytes) if pom_bytes is not None else None, repo.id)

    if cached:
        return local.resolved(coord)
    if failures and len(failures) == len(tried):
        raise failures[0]
    raise NotFound(coord, tried)


def ontology_file(project_dir, project: ProjectDescriptor) -> Path:
    """The project's ontology document.

    Defaults to ``src/main/owl/{artifactId}.owl``; the ``owlfile`` setting
    of a plugin bound to the import goal overrides it.
    """
    project_dir = Path(project_dir)
    for plugin in project.plugins_with_goal(IMPORT_GOAL):
        if plugin.configuration.get("owlfile"):
            return project_dir / plugin.configuration["owlfile"]
    return project_dir / "src" / "main" / "owl" / f"{project.coordinate.artifact_id}.owl"


def load_project(project_dir) -> ProjectDescriptor:
    pom = Path(project_dir) / "pom.xml"
    if not pom.is_file():
        raise MissingPom(f"no pom.xml in {project_dir}")
    return load_pom(pom)


def _project_files(project_dir) -> tuple[ProjectDescriptor, bytes, bytes]:
    project = load_project(project_dir)
    owl = ontology_file(project_dir, project)
    if not owl.is_file():
        raise MissingOntologyFile(f"ontology file {owl} not found")
    return project, owl.read_bytes(), (Path(project_dir) / "pom.xml").read_bytes()


def install(project_dir, local: LocalRepository) -> ResolvedArtifact:
    """Copy the project's ontology and pom into ``local``."""
    project, data, pom = _project_files(project_dir)
    path = local.store(project.coordinate, data, pom)
    log.info("installed %s to %s", project.coordinate, path)
    return ResolvedArtifact(project.coordinate, path, project, "local")


@dataclass(frozen=True)
class DeployReceipt:
    coordinate: ArtifactCoordinate
    urls: tuple


def deploy(project_dir, target: RemoteRepository) -> DeployReceipt:
    """Upload ontology, pom and both checksums to ``target`` with HTTP PUT."""
    project, data, pom = _project_files(project_dir)
    coord = project.coordinate
    uploads = [
        (artifact_path(coord), data),
        (pom_path(coord), pom),
    ]
    urls = []
    for rel, body in uploads:
        for url, payload in (
            (target.url_for(rel), body),
            (target.url_for(rel) + ".sha1", sha1_hex(body).encode("ascii")),
        ):
            target.transport.put(url, payload)
            urls.append(url)
    log.info("deployed %s to %s", coord, target.id)
    return DeployReceipt(coord, tuple(urls))


# -- search fallback ---------------------------------------------------------------


class SearchEngine(Protocol):
    name: str

    def search(self, coord: ArtifactCoordinate) -> list[str]: ...


class FixtureSearchEngine:
    """Answers from a static mapping of artifact id to candidate URLs."""

    def __init__(self, mapping: dict, name: str = "fixture"):
        self.mapping = mapping
        self.name = name

    @classmethod
    def from_json(cls, path, name: str | None = None) -> "FixtureSearchEngine":
        path = Path(path)
        return cls(json.loads(path.read_text(encoding="utf-8")), name or path.stem)

    def search(self, coord: ArtifactCoordinate) -> list[str]:
        found = self.mapping.get(coord.artifact_id, [])
        return [found] if isinstance(found, str) else list(found)


@dataclass(frozen=True)
class SearchResult:
    candidates: tuple = ()
    warnings: tuple = ()


def search_fallback(coord: ArtifactCoordinate, engines=()) -> SearchResult:
    """Ask each search engine in turn for candidate locations of ``coord``."""
    candidates: list[str] = []
    warnings: list[str] = []
    for engine in engines:
        try:
            results = engine.search(coord)
        except Exception as exc:  # an engine is an external service; keep going
            warnings.append(f"search engine {getattr(engine, 'name', engine)!s} failed: {exc}")
            continue
        for url in results:
            if url not in candidates:
                candidates.append(url)
    return SearchResult(tuple(candidates), tuple(warnings))
