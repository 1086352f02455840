"""Ontology test cases: syntax/profile, consistency and entailment checks.

Test cases come from plugin blocks in the project descriptor.  The goal
of each execution selects the kind of test and the plugin configuration
names the input files::

    owltest        consistency   owlfile
    test-syntax    syntax        owlfile
    owlentailment  entailment    premise_file, conclusion_file
"""

from __future__ import annotations

import time
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import OntologySyntaxError, SuiteError, UnmappableImport
from .ontology import check_profile, parse_ontology, render_axiom
from .pom import ProjectDescriptor
from .reasoner import INCONSISTENT, UNKNOWN, consistent, entails_axioms
from .resolver import CATALOG_FILE, Catalog, load_catalog, load_with_catalog, merge

SYNTAX = "syntax"
CONSISTENCY = "consistency"
ENTAILMENT = "entailment"

STRICT = "strict"
LAX = "lax"

ENTAILED = "Entailment"
NOT_ENTAILED = "NoEntailment"
SYNTAX_FAILURE = "failure"

GOALS = {"owltest": CONSISTENCY, "test-syntax": SYNTAX, "owlentailment": ENTAILMENT}
REQUIRED_INPUTS = {SYNTAX: ("owlfile",), CONSISTENCY: ("owlfile",), ENTAILMENT: ("premise_file", "conclusion_file")}


@dataclass(frozen=True)
class TestCase:
    kind: str
    inputs: dict
    compliancemode: str = STRICT
    name: str = ""

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.kind not in REQUIRED_INPUTS:
            raise ValueError(f"unknown test kind {self.kind!r}")
        missing = [k for k in REQUIRED_INPUTS[self.kind] if not self.inputs.get(k)]
        if missing:
            raise ValueError(f"{self.kind} test needs {', '.join(missing)}")
        if self.compliancemode not in (STRICT, LAX):
            raise ValueError(f"compliancemode must be strict or lax, not {self.compliancemode!r}")

    @property
    def label(self) -> str:
        files = " vs ".join(self.inputs[k] for k in REQUIRED_INPUTS[self.kind])
        return f"{self.name + ': ' if self.name else ''}{self.kind} {files}"


@dataclass(frozen=True)
class TestOutcome:
    case: TestCase
    verdict: str
    failed: bool
    details: tuple = ()
    duration: float = 0.0

    __test__ = False

    @property
    def status(self) -> str:
        if self.failed:
            return "failed"
        return "unknown" if self.verdict == UNKNOWN else "passed"


@dataclass
class _Context:
    base_dir: Path
    catalog: Catalog = field(default_factory=Catalog)
    transport: object = None
    offline: bool = False


def _read(ctx: _Context, relative: str) -> tuple[str | None, str | None]:
    path = ctx.base_dir / relative
    if not path.is_file():
        return None, f"file not found: {path}"
    return path.read_text(encoding="utf-8"), None


def _with_imports(ctx: _Context, ontology):
    closure = load_with_catalog(ontology, ctx.catalog, transport=ctx.transport, offline=ctx.offline)
    return merge(ontology, closure)


def run_syntax(case: TestCase, ctx: _Context) -> TestOutcome:
    text, problem = _read(ctx, case.inputs["owlfile"])
    if text is None:
        return TestOutcome(case, UNKNOWN, False, (problem,))
    try:
        ontology = parse_ontology(text, lax=True)
    except OntologySyntaxError as exc:
        return TestOutcome(case, SYNTAX_FAILURE, True, (f"SyntaxError: {exc}",))
    report = check_profile(ontology)
    details = tuple(f"axiom {index + 1}: {reason}" for index, reason in report.violations)
    if report.violations and case.compliancemode == STRICT:
        return TestOutcome(case, SYNTAX_FAILURE, True, details)
    if report.violations:
        details = tuple(f"warning: {d}" for d in details)
    return TestOutcome(case, report.profile_name, False, details)


def run_consistency(case: TestCase, ctx: _Context) -> TestOutcome:
    text, problem = _read(ctx, case.inputs["owlfile"])
    if text is None:
        return TestOutcome(case, UNKNOWN, False, (problem,))
    try:
        ontology = _with_imports(ctx, parse_ontology(text, lax=True))
    except OntologySyntaxError as exc:
        return TestOutcome(case, UNKNOWN, False, (f"SyntaxError: {exc}",))
    except UnmappableImport as exc:
        return TestOutcome(case, UNKNOWN, False, (f"UnmappableImport: {exc}",))
    verdict = consistent(ontology)
    details = verdict.witnesses + ((verdict.reason,) if verdict.reason else ())
    return TestOutcome(case, verdict.status, verdict.status == INCONSISTENT, details)


def run_entailment(case: TestCase, ctx: _Context) -> TestOutcome:
    premise_text, problem = _read(ctx, case.inputs["premise_file"])
    conclusion_text, problem2 = _read(ctx, case.inputs["conclusion_file"])
    if premise_text is None or conclusion_text is None:
        return TestOutcome(case, UNKNOWN, False, tuple(p for p in (problem, problem2) if p))
    try:
        premise = _with_imports(ctx, parse_ontology(premise_text, lax=True))
        conclusion = parse_ontology(conclusion_text, lax=True)
    except OntologySyntaxError as exc:
        return TestOutcome(case, UNKNOWN, False, (f"SyntaxError: {exc}",))
    except UnmappableImport as exc:
        return TestOutcome(case, UNKNOWN, False, (f"UnmappableImport: {exc}",))
    if conclusion.unsupported_axioms:
        constructs = ", ".join(sorted({a.construct for a in conclusion.unsupported_axioms}))
        return TestOutcome(case, UNKNOWN, False, (f"conclusion uses constructs outside the EL subset: {constructs}",))
    answers = entails_axioms(premise, conclusion.axioms)
    for axiom, answer in zip(conclusion.axioms, answers):
        if answer is False:
            return TestOutcome(case, NOT_ENTAILED, True, (f"not entailed: {render_axiom(axiom)}",))
    undecided = [render_axiom(a) for a, answer in zip(conclusion.axioms, answers) if answer is None]
    if undecided:
        return TestOutcome(case, UNKNOWN, False, tuple(f"undecided: {a}" for a in undecided))
    return TestOutcome(case, ENTAILED, False)


_RUNNERS = {SYNTAX: run_syntax, CONSISTENCY: run_consistency, ENTAILMENT: run_entailment}


def run_case(case: TestCase, ctx: _Context) -> TestOutcome:
    start = time.perf_counter()
    outcome = _RUNNERS[case.kind](case, ctx)
    return TestOutcome(outcome.case, outcome.verdict, outcome.failed, outcome.details, time.perf_counter() - start)


@dataclass(frozen=True)
class TestReport:
    outcomes: tuple = ()

    __test__ = False

    @property
    def failed(self) -> int:
        return sum(o.failed for o in self.outcomes)

    @property
    def passed(self) -> int:
        return sum(o.status == "passed" for o in self.outcomes)

    @property
    def unknown(self) -> int:
        return sum(o.status == "unknown" for o in self.outcomes)

    @property
    def success(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return (
            f"Tests run: {len(self.outcomes)}, passed: {self.passed}, "
            f"failed: {self.failed}, unknown: {self.unknown}"
        )


def cases_from_project(project: ProjectDescriptor, compliancemode: str | None = None) -> list[TestCase]:
    """Test cases in plugin and goal declaration order.

    ``compliancemode`` (a command-line flag) overrides the plugin setting.
    """
    cases = []
    for plugin in project.plugins:
        for goal in plugin.goals:
            kind = GOALS.get(goal)
            if kind is None:
                continue
            config = plugin.configuration
            mode = compliancemode or config.get("compliancemode") or STRICT
            inputs = {k: config.get(k, "") for k in REQUIRED_INPUTS[kind]}
            try:
                cases.append(TestCase(kind, inputs, mode, plugin.artifact_id))
            except ValueError as exc:
                raise SuiteError(f"plugin {plugin.group_id}:{plugin.artifact_id} goal {goal}: {exc}") from None
    return cases


def run_cases(cases, base_dir, *, catalog: Catalog | None = None, transport=None, offline: bool = False) -> TestReport:
    base_dir = Path(base_dir)
    if catalog is None:
        catalog = load_catalog(base_dir / CATALOG_FILE)
    ctx = _Context(base_dir, catalog, transport, offline)
    with ThreadPoolExecutor(max_workers=4) as pool:
        outcomes = tuple(pool.map(lambda c: run_case(c, ctx), cases))
    return TestReport(outcomes)


def run_suite(
    project: ProjectDescriptor,
    project_dir,
    *,
    compliancemode: str | None = None,
    catalog: Catalog | None = None,
    transport=None,
    offline: bool = False,
) -> TestReport:
    cases = cases_from_project(project, compliancemode)
    return run_cases(cases, project_dir, catalog=catalog, transport=transport, offline=offline)


def render_report_xml(report: TestReport) -> str:
    root = ET.Element(
        "testsuite",
        {
            "tests": str(len(report.outcomes)),
            "passed": str(report.passed),
            "failures": str(report.failed),
            "unknown": str(report.unknown),
        },
    )
    for outcome in report.outcomes:
        case = outcome.case
        el = ET.SubElement(
            root,
            "testcase",
            {
                "name": case.name,
                "kind": case.kind,
                "verdict": outcome.verdict,
                "status": outcome.status,
                "compliancemode": case.compliancemode,
                **{k: v for k, v in case.inputs.items()},
            },
        )
        for detail in outcome.details:
            ET.SubElement(el, "detail").text = detail
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_report(report: TestReport, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report_xml(report), encoding="utf-8")
    return path


def render_report_text(report: TestReport) -> str:
    lines = []
    for outcome in report.outcomes:
        lines.append(f"[{outcome.status.upper()}] {outcome.case.label}: {outcome.verdict}")
        lines.extend(f"    {d}" for d in outcome.details)
    lines.append(report.summary())
    return "\n".join(lines) + "\n"
