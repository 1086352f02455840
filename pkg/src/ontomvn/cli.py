"""Command-line front end: one subcommand per lifecycle goal.

Exit codes: 0 success, 1 domain failure (failed tests or gate, changes
found by ``diff --check``, missing artifacts), 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

from . import reporting, testrunner
from .errors import ConfigError, MissingOntologyFile, NonEmptyDirectory, OntoMvnError
from .ontology import load_ontology
from .pom import ArtifactCoordinate, ProjectDescriptor, RepositoryDecl, effective_repositories, serialize_pom
from .repository import (
    IMPORT_GOAL,
    REPO_ENV,
    LocalRepository,
    RemoteRepository,
    UrlTransport,
    default_local_root,
    deploy,
    install,
    load_project,
    ontology_file,
)
from .resolver import (
    CATALOG_FILE,
    REGISTRY_FILE,
    ImportRegistry,
    emit_catalog,
    load_catalog,
    load_registry,
    resolve,
    write_registry,
)
from .server import serve
from .versioning import checkout, diff_ontologies, render_diff, status

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DIFF_FILE = Path("target") / "diff" / "diff.txt"
TEST_REPORT = Path("target") / "test-reports" / "report.xml"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


class Context:
    """Everything a command needs besides its own flags."""

    def __init__(self, args, transport=None):
        self.args = args
        self.project_dir = Path(args.project_dir).resolve()
        self.offline = args.offline
        self.transport = transport if transport is not None else UrlTransport()
        root = args.local_repo or os.environ.get(REPO_ENV)
        self.local = LocalRepository(Path(root) if root else default_local_root())
        self._project: ProjectDescriptor | None = None

    @property
    def project(self) -> ProjectDescriptor:
        if self._project is None:
            self._project = load_project(self.project_dir)
            for warning in self._project.warnings:
                log.warning("pom.xml: %s", warning)
        return self._project

    def repositories(self) -> list[RemoteRepository]:
        """Effective pom repositories followed by ``--repo`` flags; none offline."""
        if self.offline:
            return []
        decls = effective_repositories(self.project)
        for entry in self.args.repo or ():
            rid, _, url = entry.partition("=")
            if not url:
                raise _UsageError(f"--repo expects id=url, got {entry!r}")
            decls.append(RepositoryDecl(rid, url))
        return [RemoteRepository(d, self.transport) for d in decls]

    def import_settings(self) -> dict:
        plugins = self.project.plugins_with_goal(IMPORT_GOAL)
        return dict(plugins[0].configuration) if plugins else {}

    def resolve(self):
        return resolve(
            self.project,
            self.repositories(),
            self.local,
            project_dir=self.project_dir,
            registry=load_registry(self.project_dir / REGISTRY_FILE),
            catalog=load_catalog(self.project_dir / CATALOG_FILE),
            transport=self.transport,
            offline=self.offline,
        )


# -- commands ------------------------------------------------------------------------------


def cmd_init(ctx: Context) -> int:
    coord = ArtifactCoordinate.parse(ctx.args.coordinate)
    target = ctx.project_dir
    if target.exists() and (not target.is_dir() or any(target.iterdir())):
        raise NonEmptyDirectory(f"{target} is not empty")
    owl = target / "src" / "main" / "owl" / f"{coord.artifact_id}.owl"
    owl.parent.mkdir(parents=True, exist_ok=True)
    (target / "pom.xml").write_text(serialize_pom(ProjectDescriptor(coord)), encoding="utf-8")
    owl.write_text("Ontology()\n", encoding="utf-8")
    write_registry(ImportRegistry(), target / REGISTRY_FILE)
    print(f"created {coord} in {target}")
    return EXIT_OK


def cmd_resolve(ctx: Context) -> int:
    result = ctx.resolve()
    print(f"{result.root}")
    for key in result.order:
        node = result.selected[key]
        via = ", ".join(str(p) for p in node.requested_by)
        print(f"{'  ' * node.depth}{node.coordinate} ({node.edge_kind}, via {via})")
    for conflict in result.conflicts:
        losers = ", ".join(f"{v} at depth {d}" for v, d in conflict.losers)
        print(f"conflict {':'.join(conflict.key)}: {conflict.winner} wins over {losers}")
    for cycle in result.cycles:
        print("cycle " + " -> ".join(str(c) for c in cycle))
    return EXIT_OK


def cmd_import(ctx: Context) -> int:
    result = ctx.resolve()
    settings = ctx.import_settings()
    for edge in result.import_edges:
        print(f"{edge.iri} -> {edge.coordinate} ({edge.source})")
    registry_path = ctx.project_dir / REGISTRY_FILE
    registry = load_registry(registry_path)
    added = False
    for edge in result.import_edges:
        if edge.iri not in registry.entries:
            registry.entries[edge.iri] = edge.coordinate
            added = True
    if added or not registry_path.exists():
        write_registry(registry, registry_path)
    if settings.get("local", "true").strip().lower() == "true":
        catalog = emit_catalog(result, ctx.project_dir / CATALOG_FILE)
        print(f"wrote {CATALOG_FILE} with {len(catalog.entries)} entries")
    else:
        print("local=false: imports verified, catalog left unchanged")
    return EXIT_OK


def _working(ctx: Context) -> Path:
    path = ontology_file(ctx.project_dir, ctx.project)
    if not path.is_file():
        raise MissingOntologyFile(f"ontology file {path} does not exist")
    return path


def _compared(ctx: Context) -> ArtifactCoordinate:
    against = ctx.args.against
    return ArtifactCoordinate.parse(against) if against else ctx.project.coordinate


def cmd_status(ctx: Context) -> int:
    working = _working(ctx)
    verdict = status(working, _compared(ctx), ctx.repositories(), ctx.local)
    print(f"{verdict.message} (compared with {verdict.compared_version})")
    return EXIT_OK


def cmd_diff(ctx: Context) -> int:
    working_path = _working(ctx)
    working = load_ontology(working_path, lax=True)
    with tempfile.TemporaryDirectory(prefix="ontomvn-checkout-") as tmp:
        base = load_ontology(checkout(_compared(ctx), ctx.repositories(), ctx.local, tmp), lax=True)
    try:
        shown = working_path.relative_to(ctx.project_dir).as_posix()
    except ValueError:
        shown = str(working_path)
    report = diff_ontologies(working, base, shown)
    text = render_diff(report)
    out = ctx.project_dir / DIFF_FILE
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_FAILURE if ctx.args.check and report.changed else EXIT_OK


def cmd_test(ctx: Context) -> int:
    report = testrunner.run_suite(
        ctx.project,
        ctx.project_dir,
        compliancemode=ctx.args.compliancemode,
        transport=ctx.transport,
        offline=ctx.offline,
    )
    testrunner.write_report(report, ctx.project_dir / TEST_REPORT)
    sys.stdout.write(testrunner.render_report_text(report))
    return EXIT_OK if report.success else EXIT_FAILURE


def cmd_site(ctx: Context) -> int:
    reports = None
    if ctx.args.reports is not None:
        reports = [r.strip() for r in ctx.args.reports.split(",") if r.strip()]
        unknown = set(reports) - set(reporting.REPORTS)
        if unknown:
            raise _UsageError(f"unknown report(s): {', '.join(sorted(unknown))}")
    if ctx.args.groups is not None and ctx.args.groups < 1:
        raise _UsageError("--groups must be at least 1")
    written = reporting.site(ctx.project_dir, reports, ctx.args.groups, svg=ctx.args.svg)
    for path in written:
        print(path.relative_to(ctx.project_dir).as_posix())
    return EXIT_OK


def _gate(ctx: Context) -> bool:
    """Syntax and consistency checks on the project ontology."""
    owl = _working(ctx)
    relative = os.path.relpath(owl, ctx.project_dir)
    mode = ctx.args.compliancemode or testrunner.STRICT
    cases = [
        testrunner.TestCase(testrunner.SYNTAX, {"owlfile": relative}, mode, "gate"),
        testrunner.TestCase(testrunner.CONSISTENCY, {"owlfile": relative}, mode, "gate"),
    ]
    report = testrunner.run_cases(cases, ctx.project_dir, transport=ctx.transport, offline=ctx.offline)
    if not report.success:
        sys.stdout.write(testrunner.render_report_text(report))
    return report.success


def cmd_install(ctx: Context) -> int:
    ctx.resolve()
    if not _gate(ctx):
        print("install aborted: the ontology failed its checks")
        return EXIT_FAILURE
    artifact = install(ctx.project_dir, ctx.local)
    print(f"installed {artifact.coordinate} to {artifact.file}")
    return EXIT_OK


def cmd_deploy(ctx: Context) -> int:
    if ctx.offline:
        raise _UsageError("deploy needs the network; drop --offline")
    target = ctx.args.to
    decls = {r.id: r for r in effective_repositories(ctx.project)}
    decl = decls.get(target) or RepositoryDecl("deploy", target)
    ctx.resolve()
    if not _gate(ctx):
        print("deploy aborted: the ontology failed its checks")
        return EXIT_FAILURE
    receipt = deploy(ctx.project_dir, RemoteRepository(decl, ctx.transport))
    for url in receipt.urls:
        print(f"uploaded {url}")
    return EXIT_OK


def _bind(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    try:
        return host or "127.0.0.1", int(port)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected host:port, got {text!r}") from None


def cmd_serve(ctx: Context) -> int:
    root = Path(ctx.args.root) if ctx.args.root else ctx.local.root
    root.mkdir(parents=True, exist_ok=True)
    handle = serve(root, ctx.args.bind, read_only=ctx.args.read_only)
    print(f"serving {root} at {handle.url}", flush=True)
    try:
        handle.wait()
    except KeyboardInterrupt:
        pass
    finally:
        handle.shutdown()
    return EXIT_OK


def cmd_clean(ctx: Context) -> int:
    target = ctx.project_dir / "target"
    if target.is_dir():
        shutil.rmtree(target)
        print(f"removed {target}")
    return EXIT_OK


NEEDS_POM = {"resolve", "import", "status", "diff", "test", "site", "install", "deploy", "clean"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ontomvn", description="Package manager and lifecycle tool for ontology artifacts.")
    parser.add_argument("-C", "--project-dir", default=".", help="project directory (default: current)")
    parser.add_argument("--local-repo", help=f"local repository root (default: ${REPO_ENV} or ~/.ontomvn/repository)")
    parser.add_argument("--offline", action="store_true", help="never touch the network")
    parser.add_argument("--repo", action="append", metavar="ID=URL", help="extra remote repository (repeatable)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("init", help="scaffold a new ontology project")
    p.add_argument("coordinate", help="groupId:artifactId:version")
    p.set_defaults(func=cmd_init)

    sub.add_parser("resolve", help="resolve dependencies and imports").set_defaults(func=cmd_resolve)
    sub.add_parser("import", help="cache imports and write catalog.xml").set_defaults(func=cmd_import)

    for name, func, text in (
        ("status", cmd_status, "compare the working ontology with a stored version"),
        ("diff", cmd_diff, "semantic diff against a stored version"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--against", metavar="COORD", help="stored version to compare (default: the project's own)")
        if name == "diff":
            p.add_argument("--check", action="store_true", help="exit 1 when there are changes")
        p.set_defaults(func=func)

    p = sub.add_parser("test", help="run the configured ontology tests")
    p.add_argument("--compliancemode", choices=(testrunner.STRICT, testrunner.LAX))
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("site", help="generate documentation into target/site")
    p.add_argument("--reports", metavar="LIST", help="comma list of ontologyreport, technicalreport, visualizer")
    p.add_argument("--groups", type=int, metavar="K", help="number of concept groups")
    p.add_argument("--svg", action="store_true", help="also render SVG when Graphviz is installed")
    p.set_defaults(func=cmd_site)

    p = sub.add_parser("install", help="check and store the artifact in the local repository")
    p.add_argument("--compliancemode", choices=(testrunner.STRICT, testrunner.LAX))
    p.set_defaults(func=cmd_install)

    p = sub.add_parser("deploy", help="check and upload the artifact to a remote repository")
    p.add_argument("--to", required=True, metavar="ID|URL", help="repository id from pom.xml or a URL")
    p.add_argument("--compliancemode", choices=(testrunner.STRICT, testrunner.LAX))
    p.set_defaults(func=cmd_deploy)

    p = sub.add_parser("serve", help="serve a repository directory over HTTP")
    p.add_argument("root", nargs="?", help="directory to serve (default: the local repository)")
    p.add_argument("--bind", type=_bind, default=("127.0.0.1", 8080), metavar="HOST:PORT")
    p.add_argument("--read-only", action="store_true", help="reject uploads")
    p.set_defaults(func=cmd_serve)

    sub.add_parser("clean", help="delete target/").set_defaults(func=cmd_clean)
    return parser


def main(argv=None, *, transport=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"ontomvn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        ctx = Context(args, transport)
        if args.command in NEEDS_POM:
            ctx.project  # noqa: B018  fail early on a missing or broken pom.xml
        return args.func(ctx)
    except _UsageError as exc:
        print(f"ontomvn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"ontomvn: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"ontomvn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OntoMvnError as exc:
        print(f"ontomvn: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
