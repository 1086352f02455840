"""Status and semantic diff between a working ontology and a stored version.

The diff has three layers: the syntactic axiom delta, the delta of entailed
subsumptions between named classes, and a dependency analysis listing the
domain, range and subclass axioms that mention a changed class.
"""

from __future__ import annotations

import logging
import shutil
import tempfile
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .ontology import (
    NOTHING_IRI,
    THING_IRI,
    DataPropertyDomain,
    EquivalentClasses,
    Named,
    Nothing,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    SubClassOf,
    UnsupportedAxiom,
    axiom_classes,
    class_names,
    load_ontology,
    render_axiom,
    short_name,
    signature,
)
from .pom import ArtifactCoordinate
from .reasoner import classify_ontology, subsumption_set
from .repository import LocalRepository, fetch

log = logging.getLogger(__name__)

IDENTICAL = "identical"
CHANGED = "changed"

DATA_DOMAIN = "DataProperty (Domain)"
OBJECT_DOMAIN = "ObjectProperty (Domain)"
OBJECT_RANGE = "ObjectProperty (Range)"
SUBCLASS = "SubClassOf"
EQUIVALENT = "EquivalentClasses"


# -- status ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VersionStatus:
    verdict: str
    compared_version: ArtifactCoordinate

    @property
    def message(self) -> str:
        return "ontology is up-to-date" if self.verdict == IDENTICAL else "ontology changed"


def same_content(a: Ontology, b: Ontology) -> bool:
    """Equal axiom multisets and import sets; order and layout do not matter."""
    return Counter(a.axioms) == Counter(b.axioms) and sorted(a.imports) == sorted(b.imports)


def checkout(coord: ArtifactCoordinate, repos, local: LocalRepository, workdir) -> Path:
    """Copy the stored ontology of ``coord`` into ``workdir``."""
    artifact = fetch(coord, repos, local)
    target = Path(workdir) / artifact.file.name
    shutil.copyfile(artifact.file, target)
    return target


def status(working, coord: ArtifactCoordinate, repos, local: LocalRepository) -> VersionStatus:
    current = load_ontology(working, lax=True)
    with tempfile.TemporaryDirectory(prefix="ontomvn-checkout-") as tmp:
        stored = load_ontology(checkout(coord, repos, local, tmp), lax=True)
    return VersionStatus(IDENTICAL if same_content(current, stored) else CHANGED, coord)


# -- diff -----------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DependencyNote:
    entity: str
    axiom_kind: str
    related: str

    def render(self) -> str:
        return f"{short_name(self.related)} <------ {self.axiom_kind}"


@dataclass(frozen=True)
class DiffReport:
    ontology_file: str
    added_axioms: tuple = ()
    removed_axioms: tuple = ()
    added_entailments: frozenset = frozenset()
    removed_entailments: frozenset = frozenset()
    dependency_notes: tuple = ()
    syntactic_only: tuple = field(default=())  # changed axioms outside the EL subset

    @property
    def changed(self) -> bool:
        return bool(self.added_axioms or self.removed_axioms or self.added_entailments or self.removed_entailments)


def _multiset_minus(a, b) -> list:
    remaining = Counter(b)
    out = []
    for axiom in a:
        if remaining[axiom]:
            remaining[axiom] -= 1
        else:
            out.append(axiom)
    return sorted(out, key=render_axiom)


def semantic_diff(working: Ontology, base: Ontology, ontology_file: str = "") -> DiffReport:
    """Axiom and entailment deltas; "added" means present in ``working`` only."""
    added = _multiset_minus(working.axioms, base.axioms)
    removed = _multiset_minus(base.axioms, working.axioms)
    classes = signature(working).classes | signature(base).classes
    new = subsumption_set(classify_ontology(working), classes)
    old = subsumption_set(classify_ontology(base), classes)
    flagged = tuple(a for a in added + removed if isinstance(a, UnsupportedAxiom))
    return DiffReport(
        ontology_file=str(ontology_file),
        added_axioms=tuple(added),
        removed_axioms=tuple(removed),
        added_entailments=new - old,
        removed_entailments=old - new,
        syntactic_only=flagged,
    )


def _mentions(expr, cls: str) -> bool:
    return cls in set(class_names(expr))


def _notes_for(axiom, cls: str):
    if isinstance(axiom, DataPropertyDomain) and _mentions(axiom.domain, cls):
        yield DependencyNote(cls, DATA_DOMAIN, axiom.property)
    elif isinstance(axiom, ObjectPropertyDomain) and _mentions(axiom.domain, cls):
        yield DependencyNote(cls, OBJECT_DOMAIN, axiom.property)
    elif isinstance(axiom, ObjectPropertyRange) and _mentions(axiom.range, cls):
        yield DependencyNote(cls, OBJECT_RANGE, axiom.property)
    elif isinstance(axiom, (SubClassOf, EquivalentClasses)):
        kind = SUBCLASS if isinstance(axiom, SubClassOf) else EQUIVALENT
        left, right = (axiom.sub, axiom.sup) if kind == SUBCLASS else (axiom.first, axiom.second)
        for here, there in ((left, right), (right, left)):
            if _mentions(here, cls):
                for other in class_names(there):
                    if other != cls:
                        yield DependencyNote(cls, kind, other)


def dependency_analysis(report: DiffReport, working: Ontology, base: Ontology) -> DiffReport:
    """Attach notes on unchanged axioms that refer to a changed class."""
    changed = set(report.added_axioms) | set(report.removed_axioms)
    classes: set[str] = set()
    for axiom in changed:
        classes |= axiom_classes(axiom)
    classes -= {THING_IRI, NOTHING_IRI}
    notes: set[DependencyNote] = set()
    for ontology in (working, base):
        for axiom in ontology.axioms:
            if axiom in changed:
                continue
            for cls in classes:
                notes.update(_notes_for(axiom, cls))
    return replace(report, dependency_notes=tuple(sorted(notes)))


def diff_ontologies(working: Ontology, base: Ontology, ontology_file: str = "") -> DiffReport:
    return dependency_analysis(semantic_diff(working, base, ontology_file), working, base)


# -- rendering --------------------------------------------------------------------------

HEADER = "-------------------------- DIFF INFORMATION --------------------"
CHANGES = "================== ACTUAL CHANGES =========================="
CHANGES_END = "======================================================================="
MORE_INFO = "--------- MORE INFO --------------------------------"
FOOTER = "--------------------------------------------------------------------"


def _pair_axiom(pair) -> str:
    sub, sup = pair
    return render_axiom(SubClassOf(Named(sub), Nothing() if sup == NOTHING_IRI else Named(sup)))


def render_diff(report: DiffReport) -> str:
    lines = [HEADER, f"Ontology File : {report.ontology_file}", CHANGES]
    sections = [
        ("Axioms in the working copy that the compared version lacks:", [render_axiom(a) for a in report.added_axioms]),
        ("Axioms in the compared version that the working copy lacks:", [render_axiom(a) for a in report.removed_axioms]),
        ("Subsumptions entailed only by the working copy:", sorted(map(_pair_axiom, report.added_entailments))),
        ("Subsumptions entailed only by the compared version:", sorted(map(_pair_axiom, report.removed_entailments))),
    ]
    if not any(body for _, body in sections):
        lines.append("No changes.")
    for title, body in sections:
        if body:
            lines.append(title)
            lines.extend(body)
    if report.syntactic_only:
        lines.append("Compared syntactically only (outside the EL subset):")
        lines.extend(sorted(render_axiom(a) for a in report.syntactic_only))
    lines.append(CHANGES_END)
    if report.dependency_notes:
        lines.append(MORE_INFO)
        lines.append("Other axioms that refer to the changed classes:")
        entity = None
        for note in report.dependency_notes:
            if note.entity != entity:
                entity = note.entity
                lines.append(f"Dependencies of <{entity}>:")
            lines.append(note.render())
        lines.append(FOOTER)
    return "\n".join(lines) + "\n"
