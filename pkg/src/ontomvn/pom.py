"""Project descriptor: the subset of Maven's ``pom.xml`` that ontomvn reads.

Only the elements below are understood; anything else is skipped and
reported through :attr:`ProjectDescriptor.warnings`::

    project/{groupId,artifactId,version,description,inceptionYear}
    dependencies/dependency/{groupId,artifactId,version,type,classifier}
    repositories/repository/{id,name,url,snapshots/enabled}
    profiles/profile/{id,activation/activeByDefault,repositories}
    build/plugins/plugin/{groupId,artifactId,version,configuration,executions/execution/goals/goal}
    reporting/plugins/plugin/reportSets/reportSet/reports/report
    organization/{name,url}, licenses/license/{name,url}
    developers/developer/{name,email,organization,organizationUrl,roles/role}
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaError, XmlError

DEFAULT_TYPE = "owl"
SNAPSHOT_SUFFIX = "-SNAPSHOT"

_BAD_CHARS = re.compile(r"[/\s:]")


@dataclass(frozen=True, order=True)
class ArtifactCoordinate:
    group_id: str
    artifact_id: str
    version: str
    type: str = DEFAULT_TYPE
    classifier: str | None = None

    def __post_init__(self):
        for name in ("group_id", "artifact_id", "version", "type"):
            value = getattr(self, name)
            if not value or _BAD_CHARS.search(value):
                raise ValueError(f"invalid {name} {value!r}")
        if self.classifier is not None and (not self.classifier or _BAD_CHARS.search(self.classifier)):
            raise ValueError(f"invalid classifier {self.classifier!r}")

    @property
    def snapshot(self) -> bool:
        return self.version.endswith(SNAPSHOT_SUFFIX)

    @property
    def key(self) -> tuple[str, str]:
        return (self.group_id, self.artifact_id)

    def with_version(self, version: str) -> "ArtifactCoordinate":
        return ArtifactCoordinate(self.group_id, self.artifact_id, version, self.type, self.classifier)

    def __str__(self) -> str:
        parts = [self.group_id, self.artifact_id, self.version]
        if self.type != DEFAULT_TYPE or self.classifier:
            parts.append(self.type)
        if self.classifier:
            parts.append(self.classifier)
        return ":".join(parts)

    @classmethod
    def parse(cls, text: str) -> "ArtifactCoordinate":
        """Parse ``group:artifact:version[:type[:classifier]]``."""
        parts = text.strip().split(":")
        if not 3 <= len(parts) <= 5:
            raise ValueError(f"expected group:artifact:version[:type[:classifier]], got {text!r}")
        return cls(*parts)


@dataclass(frozen=True)
class DependencyDecl:
    coordinate: ArtifactCoordinate


@dataclass(frozen=True)
class RepositoryDecl:
    id: str
    url: str
    name: str | None = None
    snapshots_enabled: bool = False

    def __post_init__(self):
        if not self.id or not self.url:
            raise ValueError("repository needs an id and a url")


@dataclass(frozen=True)
class Profile:
    id: str
    active_by_default: bool = False
    repositories: tuple = ()


@dataclass(frozen=True)
class PluginConfig:
    group_id: str | None
    artifact_id: str
    version: str | None = None
    configuration: dict = field(default_factory=dict)
    goals: tuple = ()
    reports: tuple = ()


@dataclass(frozen=True)
class Organization:
    name: str | None = None
    url: str | None = None


@dataclass(frozen=True)
class License:
    name: str | None = None
    url: str | None = None


@dataclass(frozen=True)
class Developer:
    name: str | None = None
    email: str | None = None
    organization: str | None = None
    organization_url: str | None = None
    roles: tuple = ()


@dataclass(frozen=True)
class ProjectMetadata:
    description: str | None = None
    organization: Organization | None = None
    inception_year: str | None = None
    licenses: tuple = ()
    developers: tuple = ()

    @property
    def empty(self) -> bool:
        return self == ProjectMetadata()


@dataclass(frozen=True)
class ProjectDescriptor:
    coordinate: ArtifactCoordinate
    dependencies: tuple = ()
    repositories: tuple = ()
    profiles: tuple = ()
    plugins: tuple = ()
    reporting: tuple = ()
    metadata: ProjectMetadata = ProjectMetadata()
    warnings: tuple = field(default=(), compare=False)

    def plugins_with_goal(self, goal: str) -> list[PluginConfig]:
        return [p for p in self.plugins if goal in p.goals]


def effective_repositories(project: ProjectDescriptor) -> list[RepositoryDecl]:
    """Top-level repositories, then those of default-active profiles; first id wins."""
    seen: set[str] = set()
    result: list[RepositoryDecl] = []
    candidates = list(project.repositories)
    for profile in project.profiles:
        if profile.active_by_default:
            candidates.extend(profile.repositories)
    for repo in candidates:
        if repo.id not in seen:
            seen.add(repo.id)
            result.append(repo)
    return result


def normalize_url(url: str) -> str:
    """Prefix ``http://`` when ``url`` has no scheme."""
    if re.match(r"^[A-Za-z][A-Za-z0-9+.-]*://", url) or url.startswith("file:"):
        return url
    return "http://" + url


# -- parsing --------------------------------------------------------------------


def _local(tag) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _prose(el: ET.Element) -> str:
    return " ".join((el.text or "").split())


def _token(el: ET.Element) -> str:
    # values wrapped across lines are joined without the line break
    return re.sub(r"\s*\n\s*", "", el.text or "").strip()


class _PomReader:
    def __init__(self):
        self.warnings: list[str] = []

    def children(self, el: ET.Element, path: str, known: set[str]) -> dict[str, list[ET.Element]]:
        found: dict[str, list[ET.Element]] = {}
        for child in el:
            name = _local(child.tag)
            if not name:  # comments, processing instructions
                continue
            if name in known:
                found.setdefault(name, []).append(child)
            else:
                self.warnings.append(f"ignored element {path}/{name}")
        return found

    def single(self, found, name, conv=_token):
        els = found.get(name)
        if not els:
            return None
        value = conv(els[0])
        return value if value != "" else None

    def coordinate(self, el: ET.Element, path: str) -> ArtifactCoordinate:
        found = self.children(el, path, {"groupId", "artifactId", "version", "type", "classifier"})
        return self.coordinate_from(found, path)

    def coordinate_from(self, found, path: str) -> ArtifactCoordinate:
        values = {}
        for name in ("groupId", "artifactId", "version"):
            values[name] = self.single(found, name)
            if values[name] is None:
                raise SchemaError(f"missing <{name}>", path)
        try:
            return ArtifactCoordinate(
                values["groupId"],
                values["artifactId"],
                values["version"],
                self.single(found, "type") or DEFAULT_TYPE,
                self.single(found, "classifier"),
            )
        except ValueError as exc:
            raise SchemaError(str(exc), path) from None

    def repository(self, el: ET.Element, path: str) -> RepositoryDecl:
        found = self.children(el, path, {"id", "name", "url", "snapshots"})
        rid, url = self.single(found, "id"), self.single(found, "url")
        if rid is None or url is None:
            raise SchemaError("repository needs <id> and <url>", path)
        enabled = False
        for snap in found.get("snapshots", []):
            sub = self.children(snap, path + "/snapshots", {"enabled"})
            enabled = (self.single(sub, "enabled") or "false").lower() == "true"
        return RepositoryDecl(rid, normalize_url(url), self.single(found, "name", _prose), enabled)

    def repositories(self, els, path: str) -> tuple:
        repos = []
        for container in els or []:
            for repo in self.children(container, path, {"repository"}).get("repository", []):
                repos.append(self.repository(repo, path + "/repository"))
        return tuple(repos)

    def profile(self, el: ET.Element, path: str) -> Profile:
        found = self.children(el, path, {"id", "activation", "repositories"})
        active = False
        for act in found.get("activation", []):
            sub = self.children(act, path + "/activation", {"activeByDefault"})
            active = (self.single(sub, "activeByDefault") or "false").lower() == "true"
        pid = self.single(found, "id")
        if pid is None:
            raise SchemaError("profile needs an <id>", path)
        return Profile(pid, active, self.repositories(found.get("repositories"), path + "/repositories"))

    def plugin(self, el: ET.Element, path: str, *, reporting: bool) -> PluginConfig:
        known = {"groupId", "artifactId", "version", "configuration"}
        known.add("reportSets" if reporting else "executions")
        found = self.children(el, path, known)
        artifact = self.single(found, "artifactId")
        if artifact is None:
            raise SchemaError("plugin needs an <artifactId>", path)
        config: dict[str, str] = {}
        for conf in found.get("configuration", []):
            for item in conf:
                if _local(item.tag):
                    config[_local(item.tag)] = _token(item)
        goals: list[str] = []
        for execs in found.get("executions", []):
            for ex in self.children(execs, path + "/executions", {"execution"}).get("execution", []):
                ex_found = self.children(ex, path + "/executions/execution", {"goals"})
                for gs in ex_found.get("goals", []):
                    for g in self.children(gs, path + "/executions/execution/goals", {"goal"}).get("goal", []):
                        goals.append(_token(g))
        reports: list[str] = []
        for sets in found.get("reportSets", []):
            rpath = path + "/reportSets/reportSet"
            for rs in self.children(sets, path + "/reportSets", {"reportSet"}).get("reportSet", []):
                rs_found = self.children(rs, rpath, {"reports", "configuration"})
                for rep in rs_found.get("reports", []):
                    for r in self.children(rep, rpath + "/reports", {"report"}).get("report", []):
                        reports.append(_token(r))
        return PluginConfig(
            self.single(found, "groupId"),
            artifact,
            self.single(found, "version"),
            config,
            tuple(goals),
            tuple(reports),
        )

    def plugins(self, els, path: str, *, reporting: bool) -> tuple:
        result = []
        for container in els or []:
            found = self.children(container, path, {"plugins"})
            for plugins in found.get("plugins", []):
                for p in self.children(plugins, path + "/plugins", {"plugin"}).get("plugin", []):
                    result.append(self.plugin(p, path + "/plugins/plugin", reporting=reporting))
        return tuple(result)

    def metadata(self, found, path: str) -> ProjectMetadata:
        org = None
        for el in found.get("organization", []):
            sub = self.children(el, path + "/organization", {"name", "url"})
            org = Organization(self.single(sub, "name", _prose), self.single(sub, "url"))
        licenses = []
        for el in found.get("licenses", []):
            for lic in self.children(el, path + "/licenses", {"license"}).get("license", []):
                sub = self.children(lic, path + "/licenses/license", {"name", "url"})
                licenses.append(License(self.single(sub, "name", _prose), self.single(sub, "url")))
        developers = []
        for el in found.get("developers", []):
            for dev in self.children(el, path + "/developers", {"developer"}).get("developer", []):
                dpath = path + "/developers/developer"
                sub = self.children(dev, dpath, {"name", "email", "organization", "organizationUrl", "roles"})
                roles = []
                for rs in sub.get("roles", []):
                    roles += [_token(r) for r in self.children(rs, dpath + "/roles", {"role"}).get("role", [])]
                developers.append(
                    Developer(
                        self.single(sub, "name", _prose),
                        self.single(sub, "email"),
                        self.single(sub, "organization", _prose),
                        self.single(sub, "organizationUrl"),
                        tuple(roles),
                    )
                )
        return ProjectMetadata(
            self.single(found, "description", _prose),
            org,
            self.single(found, "inceptionYear"),
            tuple(licenses),
            tuple(developers),
        )

    def project(self, root: ET.Element) -> ProjectDescriptor:
        if _local(root.tag) != "project":
            raise SchemaError(f"root element must be <project>, not <{_local(root.tag)}>", _local(root.tag))
        known = {
            "modelVersion", "groupId", "artifactId", "version", "dependencies", "repositories",
            "profiles", "build", "reporting", "description", "organization", "inceptionYear",
            "licenses", "developers",
        }  # fmt: skip
        found = self.children(root, "project", known)
        coordinate = self.coordinate_from(found, "project")
        deps = []
        seen: dict[tuple[str, str], str] = {}
        for container in found.get("dependencies", []):
            for dep in self.children(container, "project/dependencies", {"dependency"}).get("dependency", []):
                coord = self.coordinate(dep, "project/dependencies/dependency")
                if coord.key in seen:
                    raise SchemaError(
                        f"duplicate dependency {coord.group_id}:{coord.artifact_id}", "project/dependencies"
                    )
                seen[coord.key] = coord.version
                deps.append(DependencyDecl(coord))
        profiles = []
        for container in found.get("profiles", []):
            for prof in self.children(container, "project/profiles", {"profile"}).get("profile", []):
                profiles.append(self.profile(prof, "project/profiles/profile"))
        return ProjectDescriptor(
            coordinate=coordinate,
            dependencies=tuple(deps),
            repositories=self.repositories(found.get("repositories"), "project/repositories"),
            profiles=tuple(profiles),
            plugins=self.plugins(found.get("build"), "project/build", reporting=False),
            reporting=self.plugins(found.get("reporting"), "project/reporting", reporting=True),
            metadata=self.metadata(found, "project"),
            warnings=tuple(self.warnings),
        )


def parse_pom(text: str | bytes) -> ProjectDescriptor:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlError(f"malformed XML: {exc}") from None
    return _PomReader().project(root)


def load_pom(path) -> ProjectDescriptor:
    path = Path(path)
    try:
        return parse_pom(path.read_bytes())
    except (XmlError, SchemaError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


# -- serialization ----------------------------------------------------------------


def _add(parent: ET.Element, tag: str, text: str | None = None) -> ET.Element:
    el = ET.SubElement(parent, tag)
    if text is not None:
        el.text = text
    return el


def _add_coordinate(parent: ET.Element, coord: ArtifactCoordinate, *, with_type: bool) -> None:
    _add(parent, "groupId", coord.group_id)
    _add(parent, "artifactId", coord.artifact_id)
    _add(parent, "version", coord.version)
    if with_type:
        _add(parent, "type", coord.type)
    if coord.classifier:
        _add(parent, "classifier", coord.classifier)


def _add_repositories(parent: ET.Element, repos) -> None:
    if not repos:
        return
    container = _add(parent, "repositories")
    for repo in repos:
        el = _add(container, "repository")
        if repo.snapshots_enabled:
            _add(_add(el, "snapshots"), "enabled", "true")
        _add(el, "id", repo.id)
        if repo.name:
            _add(el, "name", repo.name)
        _add(el, "url", repo.url)


def _add_plugins(parent: ET.Element, tag: str, plugins, *, reporting: bool) -> None:
    if not plugins:
        return
    container = _add(_add(parent, tag), "plugins")
    for plugin in plugins:
        el = _add(container, "plugin")
        if plugin.group_id:
            _add(el, "groupId", plugin.group_id)
        _add(el, "artifactId", plugin.artifact_id)
        if plugin.version:
            _add(el, "version", plugin.version)
        if plugin.configuration:
            conf = _add(el, "configuration")
            for key, value in plugin.configuration.items():
                _add(conf, key, value)
        if reporting and plugin.reports:
            reports = _add(_add(_add(el, "reportSets"), "reportSet"), "reports")
            for report in plugin.reports:
                _add(reports, "report", report)
        if not reporting and plugin.goals:
            goals = _add(_add(_add(el, "executions"), "execution"), "goals")
            for goal in plugin.goals:
                _add(goals, "goal", goal)


def serialize_pom(project: ProjectDescriptor) -> str:
    root = ET.Element("project")
    _add_coordinate(root, project.coordinate, with_type=False)
    meta = project.metadata
    if meta.description:
        _add(root, "description", meta.description)
    if meta.organization:
        org = _add(root, "organization")
        if meta.organization.name:
            _add(org, "name", meta.organization.name)
        if meta.organization.url:
            _add(org, "url", meta.organization.url)
    if meta.inception_year:
        _add(root, "inceptionYear", meta.inception_year)
    if meta.licenses:
        lics = _add(root, "licenses")
        for lic in meta.licenses:
            el = _add(lics, "license")
            if lic.name:
                _add(el, "name", lic.name)
            if lic.url:
                _add(el, "url", lic.url)
    if meta.developers:
        devs = _add(root, "developers")
        for dev in meta.developers:
            el = _add(devs, "developer")
            for tag, value in (
                ("name", dev.name),
                ("email", dev.email),
                ("organization", dev.organization),
                ("organizationUrl", dev.organization_url),
            ):
                if value:
                    _add(el, tag, value)
            if dev.roles:
                roles = _add(el, "roles")
                for role in dev.roles:
                    _add(roles, "role", role)
    _add_repositories(root, project.repositories)
    if project.profiles:
        profs = _add(root, "profiles")
        for prof in project.profiles:
            el = _add(profs, "profile")
            _add(el, "id", prof.id)
            if prof.active_by_default:
                _add(_add(el, "activation"), "activeByDefault", "true")
            _add_repositories(el, prof.repositories)
    if project.dependencies:
        deps = _add(root, "dependencies")
        for dep in project.dependencies:
            _add_coordinate(_add(deps, "dependency"), dep.coordinate, with_type=True)
    _add_plugins(root, "build", project.plugins, reporting=False)
    _add_plugins(root, "reporting", project.reporting, reporting=True)
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
