"""EL classification by normalization and completion rules.

Axioms are first rewritten into four normal forms over concept names
(``owl:Thing`` and ``owl:Nothing`` count as names here)::

    NF1  A ⊑ B          NF3  A ⊑ ∃r.B
    NF2  A1 ⊓ A2 ⊑ B    NF4  ∃r.A ⊑ B

and then saturated: ``S(A)`` collects the subsumers of every name ``A`` and
``R(r)`` the pairs linked by role ``r``, closed under the usual six
completion rules (including ⊥ propagation and the role hierarchy).

Object property ranges are compiled away after normalization: every
successor ``A ⊑ ∃r.B`` is redirected to a fresh ``X ⊑ B`` that also sits
below the ranges of ``r`` and its super-roles.  Class assertions are
handled by giving each individual a fresh concept name that is subsumed
by every class asserted for it.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field

from .errors import OntologySyntaxError, UnsupportedConstruct
from .ontology import (
    NOTHING_IRI,
    THING_IRI,
    ClassAssertion,
    ClassExpression,
    DataPropertyDomain,
    DataPropertyRange,
    Declaration,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Nothing,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    Thing,
    UnsupportedAxiom,
    check_profile,
    parse_ontology,
    render_expression,
    signature,
)

log = logging.getLogger(__name__)

FRESH_PREFIX = "urn:ontomvn:nnf#X"


def is_fresh(name: str) -> bool:
    return name.startswith(FRESH_PREFIX)


@dataclass(frozen=True)
class NormalizedTBox:
    nf1: tuple = ()  # (A, B)
    nf2: tuple = ()  # (A1, A2, B)
    nf3: tuple = ()  # (A, r, B)
    nf4: tuple = ()  # (r, A, B)
    role_hierarchy: frozenset = frozenset()  # (r, s) for r ⊑ s
    fresh_names: tuple = ()
    concept_names: frozenset = frozenset()
    individuals: tuple = ()  # (individual IRI, fresh concept name)
    skipped: tuple = ()


class Normalizer:
    """Accumulates normal-form axioms; fresh names are numbered in first-use order."""

    def __init__(self):
        self.nf1: list = []
        self.nf2: list = []
        self.nf3: list = []
        self.nf4: list = []
        self.roles: list = []
        self.fresh_names: list[str] = []
        self.names: set[str] = {THING_IRI, NOTHING_IRI}
        self.individuals: dict[str, str] = {}
        self.ranges: list = []  # (role, class expression)
        self.skipped: list = []

    def fresh(self) -> str:
        name = f"{FRESH_PREFIX}{len(self.fresh_names) + 1}"
        self.fresh_names.append(name)
        self.names.add(name)
        return name

    def _emit(self, target: list, item: tuple) -> None:
        if item not in target:
            target.append(item)

    @staticmethod
    def basic(expr: ClassExpression) -> str | None:
        if isinstance(expr, Named):
            return expr.iri
        if isinstance(expr, Thing):
            return THING_IRI
        if isinstance(expr, Nothing):
            return NOTHING_IRI
        return None

    def left(self, expr: ClassExpression) -> str:
        """Name N with ``expr ⊑ N`` guaranteed by the emitted axioms."""
        name = self.basic(expr)
        if name is not None:
            self.names.add(name)
            return name
        if isinstance(expr, IntersectionOf):
            parts = [self.left(op) for op in expr.operands]
            acc = parts[0]
            for part in parts[1:]:
                x = self.fresh()
                self._emit(self.nf2, (acc, part, x))
                acc = x
            return acc
        if isinstance(expr, SomeValuesFrom):
            filler = self.left(expr.filler)
            x = self.fresh()
            self._emit(self.nf4, (expr.property, filler, x))
            return x
        raise UnsupportedConstruct(type(expr).__name__)

    def right(self, expr: ClassExpression) -> str:
        """Name N with ``N ⊑ expr`` guaranteed by the emitted axioms."""
        name = self.basic(expr)
        if name is not None:
            self.names.add(name)
            return name
        x = self.fresh()
        self.add_gci(Named(x), expr)
        return x

    def add_gci(self, sub: ClassExpression, sup: ClassExpression) -> None:
        if isinstance(sup, Thing) or isinstance(sub, Nothing):
            return
        if isinstance(sup, IntersectionOf):
            a = self.left(sub)
            for op in sup.operands:
                self.add_gci(Named(a), op)
            return
        if isinstance(sup, SomeValuesFrom):
            a = self.left(sub)
            b = self.right(sup.filler)
            self._emit(self.nf3, (a, sup.property, b))
            return
        b = self.right(sup)
        if isinstance(sub, IntersectionOf):
            parts = [self.left(op) for op in sub.operands]
            acc = parts[0]
            for part in parts[1:-1]:
                x = self.fresh()
                self._emit(self.nf2, (acc, part, x))
                acc = x
            self._emit(self.nf2, (acc, parts[-1], b))
        elif isinstance(sub, SomeValuesFrom):
            self._emit(self.nf4, (sub.property, self.left(sub.filler), b))
        else:
            self._emit(self.nf1, (self.left(sub), b))

    def add_axiom(self, axiom, *, skip_unsupported: bool = False) -> None:
        if isinstance(axiom, SubClassOf):
            self.add_gci(axiom.sub, axiom.sup)
        elif isinstance(axiom, EquivalentClasses):
            self.add_gci(axiom.first, axiom.second)
            self.add_gci(axiom.second, axiom.first)
        elif isinstance(axiom, ObjectPropertyDomain):
            self.add_gci(SomeValuesFrom(axiom.property, Thing()), axiom.domain)
        elif isinstance(axiom, SubObjectPropertyOf):
            if (axiom.sub, axiom.sup) not in self.roles:
                self.roles.append((axiom.sub, axiom.sup))
        elif isinstance(axiom, Declaration):
            if axiom.kind == "Class":
                self.names.add(axiom.iri)
        elif isinstance(axiom, ClassAssertion):
            x = self.individuals.get(axiom.individual)
            if x is None:
                x = self.individuals[axiom.individual] = self.fresh()
            self.add_gci(Named(x), axiom.cls)
        elif isinstance(axiom, ObjectPropertyRange):
            self.ranges.append((axiom.property, axiom.range))
        elif isinstance(axiom, (DataPropertyDomain, DataPropertyRange)):
            # data properties never occur in class expressions
            pass
        elif isinstance(axiom, UnsupportedAxiom):
            if not skip_unsupported:
                raise UnsupportedConstruct(axiom.construct)
            self.skipped.append(axiom)
        else:
            raise UnsupportedConstruct(type(axiom).__name__)

    def _internalize_ranges(self) -> None:
        if not self.ranges:
            return
        range_names: dict[str, str] = {}
        for role, expr in self.ranges:
            if role not in range_names:
                range_names[role] = self.fresh()
            self.add_gci(Named(range_names[role]), expr)
        roles = {r for r, _ in self.ranges} | {r for _, r, _ in self.nf3}
        supers = _role_closure(roles, self.roles)
        successors: dict[tuple[str, str], str] = {}
        rewritten = []
        # range normalization above may have appended to nf3; those are covered too
        for a, r, b in self.nf3:
            bounds = [range_names[s] for s in sorted(supers.get(r, {r})) if s in range_names]
            if not bounds:
                rewritten.append((a, r, b))
                continue
            x = successors.get((r, b))
            if x is None:
                x = successors[(r, b)] = self.fresh()
                for bound in [b, *bounds]:
                    self._emit(self.nf1, (x, bound))
            self._emit(rewritten, (a, r, x))
        self.nf3 = rewritten
        self.ranges = []

    def build(self) -> NormalizedTBox:
        self._internalize_ranges()
        return NormalizedTBox(
            nf1=tuple(self.nf1),
            nf2=tuple(self.nf2),
            nf3=tuple(self.nf3),
            nf4=tuple(self.nf4),
            role_hierarchy=frozenset(self.roles),
            fresh_names=tuple(self.fresh_names),
            concept_names=frozenset(self.names),
            individuals=tuple(self.individuals.items()),
            skipped=tuple(self.skipped),
        )


def normalize(ontology: Ontology, *, skip_unsupported: bool = False) -> NormalizedTBox:
    """Rewrite the EL axioms of ``ontology`` into normal form.

    TBox axioms are processed before class assertions so that fresh-name
    numbering does not depend on where assertions appear in the document.
    """
    norm = Normalizer()
    norm.names.update(signature(ontology).classes)
    assertions = []
    for axiom in ontology.axioms:
        if isinstance(axiom, ClassAssertion):
            assertions.append(axiom)
        else:
            norm.add_axiom(axiom, skip_unsupported=skip_unsupported)
    for axiom in assertions:
        norm.add_axiom(axiom)
    return norm.build()


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationResult:
    subsumers: dict  # name -> frozenset of names (S)
    links: dict  # role -> frozenset of (name, name) (R)
    unsatisfiable: frozenset
    role_closure: dict = field(default_factory=dict)  # role -> frozenset of super-roles
    fresh_names: tuple = ()
    individuals: tuple = ()
    skipped: tuple = ()

    @property
    def top_unsatisfiable(self) -> bool:
        return NOTHING_IRI in self.subsumers.get(THING_IRI, ())

    @property
    def inconsistent(self) -> bool:
        return self.top_unsatisfiable or any(x in self.unsatisfiable for _, x in self.individuals)

    @property
    def complete(self) -> bool:
        """False when axioms outside the EL subset were skipped."""
        return not self.skipped


def _role_closure(roles, hierarchy) -> dict[str, frozenset]:
    supers: dict[str, set[str]] = {r: {r} for r in roles}
    for sub, sup in hierarchy:
        supers.setdefault(sub, {sub}).add(sup)
        supers.setdefault(sup, {sup})
    changed = True
    while changed:
        changed = False
        for r, ss in supers.items():
            extra = set().union(*(supers[s] for s in ss)) - ss
            if extra:
                ss |= extra
                changed = True
    return {r: frozenset(ss) for r, ss in supers.items()}


def classify(tbox: NormalizedTBox) -> ClassificationResult:
    nf1 = defaultdict(list)
    nf2 = defaultdict(list)
    nf3 = defaultdict(list)
    nf4 = defaultdict(list)
    for a, b in tbox.nf1:
        nf1[a].append(b)
    for a1, a2, b in tbox.nf2:
        nf2[a1].append((a2, b))
        nf2[a2].append((a1, b))
    for a, r, b in tbox.nf3:
        nf3[a].append((r, b))
    for r, a, b in tbox.nf4:
        nf4[(r, a)].append(b)

    names = set(tbox.concept_names)
    for a, _, b in tbox.nf3:
        names.update((a, b))
    roles = {r for _, r, _ in tbox.nf3} | {r for r, _, _ in tbox.nf4}
    closure = _role_closure(roles, tbox.role_hierarchy)

    S: dict[str, set[str]] = {a: set() for a in names}
    R: dict[str, set[tuple[str, str]]] = defaultdict(set)
    preds: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
    queue: deque = deque()

    def add_s(a: str, x: str) -> None:
        if x not in S[a]:
            S[a].add(x)
            queue.append((0, a, x))

    def add_r(r: str, a: str, b: str) -> None:
        for s in closure.get(r, (r,)):
            if (a, b) not in R[s]:
                R[s].add((a, b))
                preds[s][b].add(a)
                queue.append((1, s, a, b))

    for a in sorted(names):
        add_s(a, a)
        add_s(a, THING_IRI)

    while queue:
        item = queue.popleft()
        if item[0] == 0:
            _, a, x = item
            for b in nf1.get(x, ()):
                add_s(a, b)  # CR1
            for other, b in nf2.get(x, ()):
                if other in S[a]:
                    add_s(a, b)  # CR2
            for r, b in nf3.get(x, ()):
                add_r(r, a, b)  # CR3 (+CR6)
            for r, by_target in list(preds.items()):
                sources = by_target.get(a)
                if not sources:
                    continue
                for c in nf4.get((r, x), ()):
                    for p in list(sources):
                        add_s(p, c)  # CR4
                if x == NOTHING_IRI:
                    for p in list(sources):
                        add_s(p, NOTHING_IRI)  # CR5
        else:
            _, r, a, b = item
            for x in list(S[b]):
                for c in nf4.get((r, x), ()):
                    add_s(a, c)  # CR4
            if NOTHING_IRI in S[b]:
                add_s(a, NOTHING_IRI)  # CR5

    return ClassificationResult(
        subsumers={a: frozenset(xs) for a, xs in S.items()},
        links={r: frozenset(pairs) for r, pairs in R.items()},
        unsatisfiable=frozenset(a for a, xs in S.items() if NOTHING_IRI in xs),
        role_closure=closure,
        fresh_names=tbox.fresh_names,
        individuals=tbox.individuals,
        skipped=tbox.skipped,
    )


def classify_ontology(ontology: Ontology) -> ClassificationResult:
    """Classify the EL part of ``ontology``; unsupported axioms are skipped."""
    return classify(normalize(ontology, skip_unsupported=True))


def entails(result: ClassificationResult, sub: str, sup: str) -> bool:
    """Whether ``sub ⊑ sup`` follows, for concept names (built-ins allowed).

    An inconsistent ontology entails every subsumption.
    """
    if sub == sup or sup == THING_IRI or sub == NOTHING_IRI:
        return True
    if result.inconsistent:
        return True
    subsumers = result.subsumers.get(sub)
    if subsumers is None:
        return False
    return sup in subsumers or NOTHING_IRI in subsumers


def subsumption_set(result: ClassificationResult, classes) -> frozenset:
    """Entailed (sub, sup) pairs among ``classes``.

    Reflexive pairs and pairs targeting ``owl:Thing`` are left out;
    unsatisfiable classes show up as pairs ``(A, owl:Nothing)``.
    """
    classes = sorted(c for c in classes if c not in (THING_IRI, NOTHING_IRI))
    pairs = set()
    for a in classes:
        for b in classes + [NOTHING_IRI]:
            if a != b and entails(result, a, b):
                pairs.add((a, b))
    return frozenset(pairs)


# -- consistency ----------------------------------------------------------------


CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: str
    witnesses: tuple = ()
    reason: str | None = None

    def __str__(self) -> str:
        return self.status


def consistent(ontology) -> ConsistencyVerdict:
    """Consistency of an ontology (or of functional-syntax text).

    Parse failures give ``unknown``.  Skipped non-EL axioms only matter when
    the EL part is consistent, in which case the answer is ``unknown`` too.
    """
    if isinstance(ontology, str):
        try:
            ontology = parse_ontology(ontology, lax=True)
        except OntologySyntaxError as exc:
            return ConsistencyVerdict(UNKNOWN, reason=str(exc))
    result = classify_ontology(ontology)
    witnesses: list[str] = []
    if result.top_unsatisfiable:
        witnesses.append("owl:Thing is unsatisfiable")
    for cls in sorted(signature(ontology).classes):
        if cls in result.unsatisfiable:
            witnesses.append(f"unsatisfiable class <{cls}>")
    assertions = defaultdict(list)
    for axiom in ontology.axioms:
        if isinstance(axiom, ClassAssertion):
            assertions[axiom.individual].append(axiom.cls)
    for individual, concept in result.individuals:
        if concept in result.unsatisfiable:
            classes = " ".join(render_expression(c) for c in assertions[individual])
            witnesses.append(f"individual <{individual}> cannot belong to {classes}")
    if result.inconsistent:
        return ConsistencyVerdict(INCONSISTENT, tuple(witnesses))
    report = check_profile(ontology)
    if not report.in_profile:
        constructs = ", ".join(sorted({a.construct for a in ontology.unsupported_axioms}))
        return ConsistencyVerdict(UNKNOWN, tuple(witnesses), reason=f"UnsupportedConstruct: {constructs}")
    return ConsistencyVerdict(CONSISTENT, tuple(witnesses))


# -- axiom entailment -----------------------------------------------------------


def entails_axioms(premise: Ontology, conclusions) -> list:
    """Check each conclusion axiom against ``premise``.

    Returns one entry per conclusion: True, False, or None when the answer
    is outside what this reasoner can decide.  Complex subsumptions C ⊑ D
    are reduced to names with fresh X ⊑ C and D ⊑ Y, then checking X ⊑ Y.
    """
    norm = Normalizer()
    norm.names.update(signature(premise).classes)
    assertions = [a for a in premise.axioms if isinstance(a, ClassAssertion)]
    for axiom in premise.axioms:
        if not isinstance(axiom, ClassAssertion):
            norm.add_axiom(axiom, skip_unsupported=True)
    for axiom in assertions:
        norm.add_axiom(axiom)
    individuals = dict(norm.individuals)

    def query(sub: ClassExpression, sup: ClassExpression) -> tuple[str, str]:
        a = norm.basic(sub)
        if a is None:
            a = norm.fresh()
            norm.add_gci(Named(a), sub)
        b = norm.basic(sup)
        if b is None:
            b = norm.fresh()
            norm.add_gci(sup, Named(b))
        return a, b

    plans: list = []
    for axiom in conclusions:
        if isinstance(axiom, Declaration):
            plans.append(True)
        elif isinstance(axiom, SubClassOf):
            plans.append([query(axiom.sub, axiom.sup)])
        elif isinstance(axiom, EquivalentClasses):
            plans.append([query(axiom.first, axiom.second), query(axiom.second, axiom.first)])
        elif isinstance(axiom, ObjectPropertyDomain):
            plans.append([query(SomeValuesFrom(axiom.property, Thing()), axiom.domain)])
        elif isinstance(axiom, SubObjectPropertyOf):
            plans.append(("role", axiom.sub, axiom.sup))
        elif isinstance(axiom, ClassAssertion):
            concept = individuals.get(axiom.individual)
            sub = Named(concept) if concept else Thing()
            plans.append([query(sub, axiom.cls)])
        elif isinstance(axiom, (ObjectPropertyRange, DataPropertyDomain)):
            kind = type(axiom)
            target = axiom.range if isinstance(axiom, ObjectPropertyRange) else axiom.domain
            stated = [
                p.range if isinstance(p, ObjectPropertyRange) else p.domain
                for p in premise.axioms
                if isinstance(p, kind) and p.property == axiom.property
            ]
            plans.append(("any", [query(s, target) for s in stated]))
        elif isinstance(axiom, DataPropertyRange):
            plans.append(True if axiom in premise.axioms else None)
        else:
            plans.append(None)

    result = classify(norm.build())
    answers: list = []
    for plan in plans:
        if plan is True or plan is None:
            answers.append(plan)
            continue
        if isinstance(plan, tuple) and plan[0] == "role":
            _, r, s = plan
            ok = r == s or s in result.role_closure.get(r, ()) or result.inconsistent
        elif isinstance(plan, tuple) and plan[0] == "any":
            ok = any(entails(result, a, b) for a, b in plan[1]) or result.inconsistent
            if not ok:
                answers.append(None)
                continue
        else:
            ok = all(entails(result, a, b) for a, b in plan)
        answers.append(True if ok else (False if result.complete else None))
    return answers
