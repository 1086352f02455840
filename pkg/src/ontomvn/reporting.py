"""Static documentation for an ontology project.

Four documents are produced under ``target/site``: the project page built
from the descriptor metadata, an ontology summary, a technical listing of
classes and properties, and a DOT graph of the classes clustered by a
structure-based concept grouping.
"""

from __future__ import annotations

import logging
import shutil
import subprocess
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .ontology import (
    NOTHING_IRI,
    ClassAssertion,
    DataPropertyDomain,
    DataPropertyRange,
    EquivalentClasses,
    IntersectionOf,
    Named,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    SubClassOf,
    SubObjectPropertyOf,
    axiom_classes,
    check_profile,
    class_names,
    load_ontology,
    render_axiom,
    render_expression,
    short_name,
    signature,
    subexpressions,
)
from .pom import ProjectDescriptor
from .reasoner import classify_ontology, subsumption_set
from .repository import atomic_write, load_project, ontology_file

log = logging.getLogger(__name__)

FORMAT = "OWL 2 Functional-Style Syntax subset"

ONTOLOGY_REPORT = "ontologyreport"
TECHNICAL_REPORT = "technicalreport"
VISUALIZER = "visualizer"
REPORTS = (ONTOLOGY_REPORT, TECHNICAL_REPORT, VISUALIZER)

INDEX_FILE = "index.html"
REPORT_FILES = {
    ONTOLOGY_REPORT: "ontology-report.html",
    TECHNICAL_REPORT: "technical-report.html",
    VISUALIZER: "visualization.dot",
}
MENU = (
    ("Project Documentation", INDEX_FILE, None),
    ("Ontology Report", REPORT_FILES[ONTOLOGY_REPORT], ONTOLOGY_REPORT),
    ("Technical Report", REPORT_FILES[TECHNICAL_REPORT], TECHNICAL_REPORT),
    ("Visualization", REPORT_FILES[VISUALIZER], VISUALIZER),
)


# -- statistics -------------------------------------------------------------------


@dataclass(frozen=True)
class OntologyStats:
    class_count: int
    object_property_count: int
    data_property_count: int
    individual_count: int
    axiom_count: int
    imports: tuple
    profile: str
    description: str | None = None


def ontology_stats(o: Ontology) -> OntologyStats:
    sig = signature(o)
    return OntologyStats(
        class_count=len(sig.classes),
        object_property_count=len(sig.object_properties),
        data_property_count=len(sig.data_properties),
        individual_count=len(sig.individuals),
        axiom_count=len(o.axioms),
        imports=tuple(o.imports),
        profile=check_profile(o).profile_name,
        description=o.description,
    )


# -- html helpers ---------------------------------------------------------------------


def _el(parent, tag: str, text: str | None = None, **attrs) -> ET.Element:
    el = ET.SubElement(parent, tag, {k.rstrip("_"): v for k, v in attrs.items()})
    if text is not None:
        el.text = text
    return el


def _page(title: str, menu=None) -> tuple[ET.Element, ET.Element]:
    html = ET.Element("html", {"lang": "en"})
    head = _el(html, "head")
    _el(head, "title", title)
    body = _el(html, "body")
    if menu:
        nav = _el(body, "nav")
        ul = _el(nav, "ul")
        for label, href in menu:
            _el(_el(ul, "li"), "a", label, href=href)
    _el(body, "h1", title)
    return html, body


def _render(html: ET.Element) -> str:
    ET.indent(html, space="  ")
    text = ET.tostring(html, encoding="unicode", short_empty_elements=False)
    # character references keep the files independent of a declared charset
    return "<!DOCTYPE html>\n" + text.encode("ascii", "xmlcharrefreplace").decode("ascii") + "\n"


def _list(parent, items, empty: str = "none") -> None:
    items = list(items)
    if not items:
        _el(parent, "p", empty)
        return
    ul = _el(parent, "ul")
    for item in items:
        _el(ul, "li", item)


def _menu(documents) -> list[tuple[str, str]]:
    return [(label, href) for label, href, report in MENU if report is None or report in documents]


# -- ontology report ------------------------------------------------------------------


def ontology_report(o: Ontology, menu=None) -> str:
    stats = ontology_stats(o)
    html, body = _page(f"Ontology Report: {o.iri or 'anonymous ontology'}", menu)
    _el(body, "h2", "Description")
    _el(body, "p", stats.description or "No description.")
    _el(body, "h2", "Format")
    _el(body, "p", FORMAT)
    _el(body, "h2", "Semantic Profile")
    _el(body, "p", stats.profile)
    skipped = sorted({a.construct for a in o.unsupported_axioms})
    if skipped:
        _el(body, "p", "Constructs outside the EL subset: " + ", ".join(skipped))
    _el(body, "h2", "Imported Ontologies")
    _list(body, stats.imports)
    _el(body, "h2", "Statistics")
    table = _el(body, "table")
    for label, value in (
        ("Classes", stats.class_count),
        ("Object properties", stats.object_property_count),
        ("Datatype properties", stats.data_property_count),
        ("Individuals", stats.individual_count),
        ("Axioms", stats.axiom_count),
    ):
        row = _el(table, "tr")
        _el(row, "th", label)
        _el(row, "td", str(value))
    return _render(html)


# -- technical report -----------------------------------------------------------------


def _anchor(prefix: str, index: int) -> str:
    return f"{prefix}-{index}"


def _named_subclass_edges(o: Ontology):
    """(sub, sup) for SubClassOf with a named subclass and a named
    superclass or named conjunct of the superclass."""
    for axiom in o.axioms:
        if isinstance(axiom, SubClassOf) and isinstance(axiom.sub, Named):
            sup = axiom.sup
            operands = sup.operands if isinstance(sup, IntersectionOf) else (sup,)
            for op in operands:
                if isinstance(op, Named) and op.iri != axiom.sub.iri:
                    yield axiom.sub.iri, op.iri


def _asserted_supers(o: Ontology, cls: str) -> set[str]:
    return {sup for sub, sup in _named_subclass_edges(o) if sub == cls}


def technical_report(o: Ontology, menu=None) -> str:
    sig = signature(o)
    classes = sorted(sig.classes)
    properties = sorted(sig.object_properties | sig.data_properties)
    pairs = subsumption_set(classify_ontology(o), sig.classes)
    entailed: dict[str, set[str]] = {}
    for sub, sup in pairs:
        entailed.setdefault(sub, set()).add(sup)

    html, body = _page(f"Technical Report: {o.iri or 'anonymous ontology'}", menu)
    class_ids = {c: _anchor("class", i) for i, c in enumerate(classes)}
    prop_ids = {p: _anchor("property", i) for i, p in enumerate(properties)}

    _el(body, "h2", "Classes")
    _index(body, classes, class_ids)
    _el(body, "h2", "Properties")
    _index(body, properties, prop_ids)

    for cls in classes:
        section = _el(body, "section", id=class_ids[cls])
        _el(section, "h3", f"Class {short_name(cls)}")
        _el(section, "p", cls)
        asserted = _asserted_supers(o, cls)
        inferred = entailed.get(cls, set()) - asserted
        _el(section, "h4", "Asserted superclasses")
        _list(section, sorted(asserted))
        _el(section, "h4", "Inferred superclasses")
        _list(section, sorted(inferred))
        if NOTHING_IRI in inferred:
            _el(section, "p", "This class is unsatisfiable.")
        _el(section, "h4", "Referencing axioms")
        _list(section, sorted(render_axiom(a) for a in o.axioms if cls in axiom_classes(a)))

    for prop in properties:
        kind = "Object property" if prop in sig.object_properties else "Datatype property"
        section = _el(body, "section", id=prop_ids[prop])
        _el(section, "h3", f"{kind} {short_name(prop)}")
        _el(section, "p", prop)
        domains, ranges, supers, refs = [], [], [], []
        for axiom in o.axioms:
            if getattr(axiom, "property", None) == prop or (
                isinstance(axiom, SubObjectPropertyOf) and prop in (axiom.sub, axiom.sup)
            ):
                refs.append(render_axiom(axiom))
            elif any(
                getattr(sub, "property", None) == prop
                for expr in _expressions(axiom)
                for sub in subexpressions(expr)
            ):
                refs.append(render_axiom(axiom))
            if isinstance(axiom, (ObjectPropertyDomain, DataPropertyDomain)) and axiom.property == prop:
                domains.append(render_expression(axiom.domain))
            elif isinstance(axiom, ObjectPropertyRange) and axiom.property == prop:
                ranges.append(render_expression(axiom.range))
            elif isinstance(axiom, DataPropertyRange) and axiom.property == prop:
                ranges.append(axiom.datatype)
            elif isinstance(axiom, SubObjectPropertyOf) and axiom.sub == prop:
                supers.append(axiom.sup)
        _el(section, "h4", "Domain")
        _list(section, sorted(set(domains)))
        _el(section, "h4", "Range")
        _list(section, sorted(set(ranges)))
        if prop in sig.object_properties:
            _el(section, "h4", "Super-properties")
            _list(section, sorted(set(supers)))
        _el(section, "h4", "Referencing axioms")
        _list(section, sorted(set(refs)))
    return _render(html)


def _expressions(axiom) -> tuple:
    if isinstance(axiom, SubClassOf):
        return axiom.sub, axiom.sup
    if isinstance(axiom, EquivalentClasses):
        return axiom.first, axiom.second
    if isinstance(axiom, (ObjectPropertyDomain, DataPropertyDomain)):
        return (axiom.domain,)
    if isinstance(axiom, ObjectPropertyRange):
        return (axiom.range,)
    if isinstance(axiom, ClassAssertion):
        return (axiom.cls,)
    return ()


def _index(body, names, ids) -> None:
    if not names:
        _el(body, "p", "none")
        return
    ul = _el(body, "ul")
    for name in names:
        _el(_el(ul, "li"), "a", short_name(name), href="#" + ids[name])


# -- concept grouping -------------------------------------------------------------------


@dataclass(frozen=True)
class ConceptGroup:
    seed: str
    members: frozenset


@dataclass(frozen=True)
class ConceptGrouping:
    groups: tuple = ()
    ungrouped: frozenset = frozenset()

    def group_of(self, cls: str) -> ConceptGroup | None:
        return next((g for g in self.groups if cls in g.members), None)


def class_graph(o: Ontology) -> dict[str, set[str]]:
    """Undirected adjacency over named classes.

    Edges join a named subclass to its named superclasses (including named
    conjuncts of the superclass), the named operands of one intersection,
    and each domain class of an object property with each of its range
    classes.
    """
    classes = signature(o).classes
    graph: dict[str, set[str]] = {c: set() for c in classes}

    def link(a: str, b: str) -> None:
        if a != b and a in graph and b in graph:
            graph[a].add(b)
            graph[b].add(a)

    domains: dict[str, set[str]] = {}
    ranges: dict[str, set[str]] = {}
    for sub, sup in _named_subclass_edges(o):
        link(sub, sup)
    for axiom in o.axioms:
        if isinstance(axiom, ObjectPropertyDomain):
            domains.setdefault(axiom.property, set()).update(class_names(axiom.domain))
        elif isinstance(axiom, ObjectPropertyRange):
            ranges.setdefault(axiom.property, set()).update(class_names(axiom.range))
        for expr in _expressions(axiom):
            for sub in subexpressions(expr):
                if isinstance(sub, IntersectionOf):
                    named = [op.iri for op in sub.operands if isinstance(op, Named)]
                    for i, a in enumerate(named):
                        for b in named[i + 1 :]:
                            link(a, b)
    for prop in domains:
        for a in domains[prop]:
            for b in ranges.get(prop, ()):
                link(a, b)
    return graph


def concept_grouping(o: Ontology, k: int | None = None) -> ConceptGrouping:
    """Partition classes around the ``k`` best-connected seeds.

    Every class joins the seed with the shortest path to it (the smaller
    seed IRI wins ties); classes no seed reaches stay ungrouped.
    """
    graph = class_graph(o)
    if k is None:
        k = min(5, len(graph))
    elif k < 1:
        raise ValueError("the number of groups must be at least 1")
    if not graph:
        return ConceptGrouping()
    seeds = sorted(graph, key=lambda c: (-len(graph[c]), c))[:k]

    best: dict[str, tuple[int, str]] = {}
    for seed in seeds:
        dist = {seed: 0}
        queue = deque([seed])
        while queue:
            node = queue.popleft()
            for nxt in graph[node]:
                if nxt not in dist:
                    dist[nxt] = dist[node] + 1
                    queue.append(nxt)
        for node, d in dist.items():
            if node not in best or (d, seed) < best[node]:
                best[node] = (d, seed)
    members: dict[str, set[str]] = {seed: set() for seed in seeds}
    for node, (_, seed) in best.items():
        members[seed].add(node)
    groups = tuple(ConceptGroup(seed, frozenset(members[seed])) for seed in seeds)
    return ConceptGrouping(groups, frozenset(graph) - frozenset(best))


# -- visualization ----------------------------------------------------------------------


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def visualize(o: Ontology, grouping: ConceptGrouping | None = None) -> str:
    """DOT graph: clustered class nodes, subclass edges, property edges."""
    if grouping is None:
        grouping = concept_grouping(o)
    classes = sorted(signature(o).classes)
    lines = ["digraph ontology {"]
    if classes:
        lines += ["  rankdir=BT;", "  node [shape=box];"]

    def node(cls: str, indent: str) -> str:
        return f"{indent}{_dot_id(cls)} [label={_dot_id(short_name(cls))}];"

    for i, group in enumerate(grouping.groups):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f"    label={_dot_id('group ' + short_name(group.seed))};")
        lines.extend(node(c, "    ") for c in sorted(group.members))
        lines.append("  }")
    lines.extend(node(c, "  ") for c in sorted(grouping.ungrouped))

    edges = {(sub, sup, "subClassOf", False) for sub, sup in _named_subclass_edges(o)}
    domains: dict[str, set[str]] = {}
    ranges: dict[str, set[str]] = {}
    for axiom in o.axioms:
        if isinstance(axiom, ObjectPropertyDomain):
            domains.setdefault(axiom.property, set()).update(class_names(axiom.domain))
        elif isinstance(axiom, ObjectPropertyRange):
            ranges.setdefault(axiom.property, set()).update(class_names(axiom.range))
    for prop, sources in domains.items():
        for a in sources:
            for b in ranges.get(prop, ()):
                edges.add((a, b, short_name(prop), True))
    known = set(classes)
    for a, b, label, dashed in sorted(edges):
        if a in known and b in known:
            style = ", style=dashed" if dashed else ""
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [label={_dot_id(label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- project documentation ----------------------------------------------------------------


def project_documentation(p: ProjectDescriptor, documents=REPORTS) -> str:
    c = p.coordinate
    html, body = _page(f"{c.artifact_id} {c.version}", _menu(documents))
    _el(body, "p", f"{c.group_id}:{c.artifact_id}:{c.version}")
    meta = p.metadata
    if meta.description:
        _el(body, "h2", "Description")
        _el(body, "p", meta.description)
    if meta.organization:
        _el(body, "h2", "Organization")
        _el(body, "p", " ".join(x for x in (meta.organization.name, meta.organization.url) if x))
    if meta.inception_year:
        _el(body, "h2", "Inception Year")
        _el(body, "p", meta.inception_year)
    if meta.licenses:
        _el(body, "h2", "Licenses")
        _list(body, [" ".join(x for x in (lic.name, lic.url) if x) for lic in meta.licenses])
    if meta.developers:
        _el(body, "h2", "Developers")
        table = _el(body, "table")
        header = _el(table, "tr")
        columns = ("Name", "Email", "Organization", "Organization URL", "Roles")
        for title in columns:
            _el(header, "th", title)
        for dev in meta.developers:
            row = _el(table, "tr")
            for value in (dev.name, dev.email, dev.organization, dev.organization_url, ", ".join(dev.roles)):
                _el(row, "td", value or "")
    if p.dependencies:
        _el(body, "h2", "Dependencies")
        _list(body, [str(d.coordinate) for d in p.dependencies])
    return _render(html)


# -- site -------------------------------------------------------------------------------


def selected_reports(p: ProjectDescriptor) -> tuple:
    """Reports named in the descriptor's reporting section, all three if absent."""
    if not p.reporting:
        return REPORTS
    named = {r for plugin in p.reporting for r in plugin.reports}
    return tuple(r for r in REPORTS if r in named)


def site(project_dir, reports=None, groups: int | None = None, svg: bool = False) -> list[Path]:
    """Write the documentation set into ``target/site``; returns the files written."""
    project_dir = Path(project_dir)
    project = load_project(project_dir)
    if reports is None:
        reports = selected_reports(project)
    unknown = set(reports) - set(REPORTS)
    if unknown:
        raise ValueError(f"unknown report(s): {', '.join(sorted(unknown))}")
    reports = tuple(r for r in REPORTS if r in reports)
    out = project_dir / "target" / "site"
    written = []

    def write(name: str, text: str) -> None:
        path = out / name
        atomic_write(path, text.encode("utf-8"))
        written.append(path)

    write(INDEX_FILE, project_documentation(project, reports))
    if not reports:
        return written
    ontology = load_ontology(ontology_file(project_dir, project), lax=True)
    menu = _menu(reports)
    if ONTOLOGY_REPORT in reports:
        write(REPORT_FILES[ONTOLOGY_REPORT], ontology_report(ontology, menu))
    if TECHNICAL_REPORT in reports:
        write(REPORT_FILES[TECHNICAL_REPORT], technical_report(ontology, menu))
    if VISUALIZER in reports:
        dot = visualize(ontology, concept_grouping(ontology, groups))
        write(REPORT_FILES[VISUALIZER], dot)
        if svg:
            rendered = render_svg(dot)
            if rendered is not None:
                write("visualization.svg", rendered)
    return written


def render_svg(dot: str) -> str | None:
    """SVG via the Graphviz ``dot`` binary when it is installed."""
    binary = shutil.which("dot")
    if binary is None:
        log.warning("Graphviz 'dot' not found; skipping SVG rendering")
        return None
    done = subprocess.run([binary, "-Tsvg"], input=dot, capture_output=True, text=True, check=False)
    if done.returncode != 0:
        log.warning("dot failed: %s", done.stderr.strip())
        return None
    return done.stdout
