"""Auditing finite GSEMs against the SEM axiom schemas.

``check_axioms`` enumerates every instantiable instance of the schemas over
the model's signature and reports, per schema, one of:

* ``valid`` -- every instance evaluates to true in every context;
* ``counterexample`` -- a concrete instance plus the context it fails in
  (the instance re-evaluates to false with ``formula.eval_formula``);
* ``not-instantiable`` -- the allowed-intervention set admits no instance
  (distinct from ``valid`` in the report);
* ``propositional`` -- holds structurally (D0, D7, D8, and the rule MP).

Instances that would mention a non-allowed intervention are skipped, since
formulas may only mention allowed interventions.  The recursiveness schema
is checked through the "affects" relation: a cycle of affects edges in some
context yields the counterexample.

``recover_sem`` rebuilds a structural-equations model from any audited
GSEM with universal interventions, reading each equation value off the
unique outcome under the complete intervention on the other variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Assignment,
    FiniteGsem,
    FiniteSem,
    Intervention,
    Signature,
    compose,
)
from .errors import AxiomsFail, NotUniversal, TooLarge, max_enum
from .formula import (
    AndF,
    Box,
    CausalFormula,
    Diamond,
    Eq,
    NotE,
    NotF,
    OrE,
    TrueEvent,
    conjunction,
    implies,
)

AXIOM_NAMES = ("D0", "D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9", "MP")
PROPOSITIONAL = {"D0": "tautologies", "D7": "distribution", "D8": "generalization", "MP": "modus ponens"}


@dataclass(frozen=True)
class Counterexample:
    context: Assignment
    formula: CausalFormula
    note: str = ""


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    status: str  # valid | counterexample | not-instantiable | propositional
    instances: int = 0
    counterexample: Optional[Counterexample] = None


@dataclass
class AxiomReport:
    system: str
    verdicts: dict[str, AxiomVerdict] = field(default_factory=dict)

    @property
    def all_valid(self) -> bool:
        return all(v.status != "counterexample" for v in self.verdicts.values())

    def failing(self) -> list[str]:
        return [n for n, v in self.verdicts.items() if v.status == "counterexample"]

    def to_dict(self) -> dict:
        from .formula import format_formula

        out: dict = {"system": self.system, "all_valid": self.all_valid, "axioms": {}}
        for name in AXIOM_NAMES:
            if name not in self.verdicts:
                continue
            v = self.verdicts[name]
            entry: dict = {"status": v.status, "instances": v.instances}
            if v.counterexample is not None:
                entry["counterexample"] = {
                    "context": v.counterexample.context.as_dict(),
                    "formula": format_formula(v.counterexample.formula),
                    "note": v.counterexample.note,
                }
            out["axioms"][name] = entry
        return out


class _Audit:
    """One audit pass over a finite GSEM, with flat tuple-level evaluation."""

    def __init__(self, model: FiniteGsem):
        self.model = model
        self.sig = model.signature
        self.endo = self.sig.endogenous
        self.index = {var: i for i, var in enumerate(self.endo)}
        self.allowed = list(self.sig.interventions())
        self.contexts = list(self.sig.contexts())
        self.allowed_set = None if self.sig.universal else set(self.allowed)

    def outs(self, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
        return self.model.outcomes(u, ivn)

    def is_allowed(self, ivn: Intervention) -> bool:
        if self.allowed_set is None:
            return self.sig.valid_intervention(ivn)
        return ivn in self.allowed_set

    # -- individual schemas -------------------------------------------------

    def check_d1(self) -> AxiomVerdict:
        count = 0
        for u in self.contexts:
            for ivn in self.allowed:
                outcomes = self.outs(u, ivn)
                for var in self.endo:
                    values = self.sig.ranges[var]
                    pairs = [(x, x2) for x in values for x2 in values if x != x2]
                    count += len(pairs)
                    i = self.index[var]
                    for x, x2 in pairs:
                        if any(v.values[i] == x and v.values[i] == x2 for v in outcomes):
                            formula = Box(ivn, implies_event(var, x, x2))
                            return AxiomVerdict(
                                "D1", "counterexample", count,
                                Counterexample(u, formula, "a variable took two values"),
                            )
        return _verdict("D1", count)

    def check_d2(self) -> AxiomVerdict:
        count = 0
        for u in self.contexts:
            for ivn in self.allowed:
                outcomes = self.outs(u, ivn)
                for var in self.endo:
                    count += 1
                    i = self.index[var]
                    allowed_values = set(self.sig.ranges[var])
                    bad = next((v for v in outcomes if v.values[i] not in allowed_values), None)
                    if bad is not None:
                        formula = Box(ivn, OrE(*[Eq(var, x) for x in self.sig.ranges[var]]))
                        return AxiomVerdict(
                            "D2", "counterexample", count,
                            Counterexample(u, formula, "an outcome left the range"),
                        )
        return _verdict("D2", count)

    def check_d3(self) -> AxiomVerdict:
        # For each witness outcome v of <I>, pinning W to v[W] must preserve
        # v's values on the untouched variables in some outcome of I;W<-w.
        # Checking the full restriction covers every partial conjunction.
        count = 0
        skipped = 0
        for u in self.contexts:
            for ivn in self.allowed:
                dom = ivn.variables
                rest = [x for x in self.endo if x not in dom]
                outcomes = self.outs(u, ivn)
                for var in self.endo:
                    for w in self.sig.ranges[var]:
                        composed = compose(ivn, Intervention.of({var: w}))
                        if not self.is_allowed(composed):
                            skipped += 1
                            continue
                        count += 1
                        hits = [v for v in outcomes if v[var] == w]
                        if not hits:
                            continue
                        targets = [x for x in rest if x != var]
                        idxs = [self.index[x] for x in targets]
                        pool = self.outs(u, composed)
                        for v in hits:
                            wanted = tuple(v.values[i] for i in idxs)
                            if not any(
                                tuple(p.values[i] for i in idxs) == wanted for p in pool
                            ):
                                premise = Diamond(
                                    ivn,
                                    conjunction(
                                        [(var, w)] + [(x, v[x]) for x in targets]
                                    ),
                                )
                                conclusion = Diamond(
                                    composed, conjunction([(x, v[x]) for x in targets])
                                )
                                return AxiomVerdict(
                                    "D3", "counterexample", count,
                                    Counterexample(u, implies(premise, conclusion)),
                                )
        if count == 0 and skipped > 0:
            return AxiomVerdict("D3", "not-instantiable", 0)
        return _verdict("D3", count)

    def check_d4(self) -> AxiomVerdict:
        count = 0
        for u in self.contexts:
            for ivn in self.allowed:
                outcomes = self.outs(u, ivn)
                for var, x in ivn.pairs:
                    count += 1
                    i = self.index[var]
                    if any(v.values[i] != x for v in outcomes):
                        formula = Box(ivn, Eq(var, x))
                        return AxiomVerdict(
                            "D4", "counterexample", count,
                            Counterexample(u, formula, "intervened value not taken"),
                        )
        return _verdict("D4", count)

    def check_d5(self) -> AxiomVerdict:
        count = 0
        skipped = 0
        for u in self.contexts:
            for ivn in self.allowed:
                dom = ivn.variables
                rest = [x for x in self.endo if x not in dom]
                if len(rest) < 2:
                    continue
                for w_var, y_var in itertools.permutations(rest, 2):
                    z_vars = [x for x in rest if x not in (w_var, y_var)]
                    z_idx = [self.index[x] for x in z_vars]
                    w_idx, y_idx = self.index[w_var], self.index[y_var]
                    conclusion_outs = self.outs(u, ivn)
                    conclusion_proj = {
                        (v.values[w_idx], v.values[y_idx], tuple(v.values[i] for i in z_idx))
                        for v in conclusion_outs
                    }
                    for y in self.sig.ranges[y_var]:
                        with_y = compose(ivn, Intervention.of({y_var: y}))
                        if not self.is_allowed(with_y):
                            skipped += len(self.sig.ranges[w_var])
                            continue
                        proj_y = {
                            (v.values[w_idx], tuple(v.values[i] for i in z_idx))
                            for v in self.outs(u, with_y)
                        }
                        for w, zs in proj_y:
                            with_w = compose(ivn, Intervention.of({w_var: w}))
                            if not self.is_allowed(with_w):
                                skipped += 1
                                continue
                            count += 1
                            second = any(
                                v.values[y_idx] == y
                                and tuple(v.values[i] for i in z_idx) == zs
                                for v in self.outs(u, with_w)
                            )
                            if second and (w, y, zs) not in conclusion_proj:
                                z_pairs = list(zip(z_vars, zs))
                                p1 = Diamond(with_y, conjunction([(w_var, w)] + z_pairs))
                                p2 = Diamond(with_w, conjunction([(y_var, y)] + z_pairs))
                                concl = Diamond(
                                    ivn,
                                    conjunction([(w_var, w), (y_var, y)] + z_pairs),
                                )
                                return AxiomVerdict(
                                    "D5", "counterexample", count,
                                    Counterexample(u, implies(AndF(p1, p2), concl)),
                                )
        if count == 0 and skipped > 0:
            return AxiomVerdict("D5", "not-instantiable", 0)
        return _verdict("D5", count)

    def check_d9(self) -> AxiomVerdict:
        count = 0
        skipped = 0
        for u in self.contexts:
            for var in self.endo:
                if len(self.sig.ranges[var]) < 2:
                    continue  # the schema needs two distinct values of var
                others = tuple(x for x in self.endo if x != var)
                i = self.index[var]
                for values in itertools.product(*[self.sig.ranges[x] for x in others]):
                    complete = Intervention(tuple(zip(others, values)))
                    if not self.is_allowed(complete):
                        skipped += 1
                        continue
                    count += 1
                    outcomes = self.outs(u, complete)
                    taken = {v.values[i] for v in outcomes}
                    if len(taken) == 1:
                        continue
                    if not taken:
                        formula = AndF(
                            Diamond(complete, TrueEvent()),
                            implies(
                                Diamond(complete, Eq(var, self.sig.ranges[var][0])),
                                NotF(Diamond(complete, Eq(var, self.sig.ranges[var][-1]))),
                            ),
                        )
                        note = "no outcome under a complete intervention"
                    else:
                        x, x2 = sorted(taken, key=str)[:2]
                        formula = AndF(
                            Diamond(complete, TrueEvent()),
                            implies(
                                Diamond(complete, Eq(var, x)),
                                NotF(Diamond(complete, Eq(var, x2))),
                            ),
                        )
                        note = "two outcome values under a complete intervention"
                    return AxiomVerdict(
                        "D9", "counterexample", count, Counterexample(u, formula, note)
                    )
        if count == 0:
            return AxiomVerdict("D9", "not-instantiable", 0)
        return _verdict("D9", count)

    # -- the affects relation and recursiveness -----------------------------

    def _summarize(self, outcomes, z_idx):
        """None for an empty outcome set, the value if unique, else False."""
        taken = {v.values[z_idx] for v in outcomes}
        if not taken:
            return None
        if len(taken) == 1:
            return next(iter(taken))
        return False

    def affects_edge(self, u: Assignment, y_var: str, z_var: str):
        """A witness that y affects z in context u, or None.

        Returns ``(base, with_y, z, z2)`` such that ``[base](z_var = z)`` and
        ``[base; y_var <- y](z_var = z2)`` both hold with ``z != z2``.
        """
        z_idx = self.index[z_var]
        z_range = self.sig.ranges[z_var]
        for base in self.allowed:
            s1 = self._summarize(self.outs(u, base), z_idx)
            if s1 is False:
                continue
            for y in self.sig.ranges[y_var]:
                with_y = compose(base, Intervention.of({y_var: y}))
                if not self.is_allowed(with_y):
                    continue
                s2 = self._summarize(self.outs(u, with_y), z_idx)
                if s2 is False:
                    continue
                if s1 is None and s2 is None:
                    if len(z_range) >= 2:
                        return base, with_y, z_range[0], z_range[1]
                    continue
                if s1 is None:
                    picks = [z for z in z_range if z != s2]
                    if picks:
                        return base, with_y, picks[0], s2
                    continue
                if s2 is None:
                    picks = [z for z in z_range if z != s1]
                    if picks:
                        return base, with_y, s1, picks[0]
                    continue
                if s1 != s2:
                    return base, with_y, s1, s2
        return None

    def affects_graph(self, u: Assignment) -> dict[tuple[str, str], tuple]:
        edges = {}
        for y_var, z_var in itertools.permutations(self.endo, 2):
            witness = self.affects_edge(u, y_var, z_var)
            if witness is not None:
                edges[(y_var, z_var)] = witness
        return edges

    def check_d6(self) -> AxiomVerdict:
        count = 0
        for u in self.contexts:
            edges = self.affects_graph(u)
            count += len(self.endo) * (len(self.endo) - 1)
            cycle = _find_cycle({pair for pair in edges})
            if cycle is None:
                continue
            witnesses = []
            for a, b in zip(cycle, cycle[1:]):
                base, with_y, z, z2 = edges[(a, b)]
                witnesses.append(AndF(Box(base, Eq(b, z)), Box(with_y, Eq(b, z2))))
            formula = implies(AndF(*witnesses[:-1]), NotF(witnesses[-1]))
            chain = " ~> ".join(cycle)
            return AxiomVerdict(
                "D6", "counterexample", count,
                Counterexample(u, formula, f"affects cycle {chain}"),
            )
        return _verdict("D6", count)


def implies_event(var, x, x2):
    return OrE(NotE(Eq(var, x)), NotE(Eq(var, x2)))


def _verdict(name: str, count: int) -> AxiomVerdict:
    if count == 0:
        return AxiomVerdict(name, "not-instantiable", 0)
    return AxiomVerdict(name, "valid", count)


def _find_cycle(edges: set[tuple[str, str]]) -> Optional[list[str]]:
    """A node cycle [n0, n1, ..., n0] in a directed graph, if one exists."""
    graph: dict[str, list[str]] = {}
    for a, b in edges:
        graph.setdefault(a, []).append(b)
        graph.setdefault(b, [])
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in graph}
    stack: list[str] = []

    def visit(node):
        color[node] = GRAY
        stack.append(node)
        for succ in sorted(graph[node]):
            if color[succ] == GRAY:
                start = stack.index(succ)
                return stack[start:] + [succ]
            if color[succ] == WHITE:
                found = visit(succ)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for node in sorted(graph):
        if color[node] == WHITE:
            found = visit(node)
            if found:
                return found
    return None


def affects(model: FiniteGsem, y_var: str, z_var: str) -> bool:
    """True iff some intervention setting of y changes z in some context."""
    if y_var == z_var:
        raise ValueError("affects is defined for distinct variables")
    audit = _Audit(model)
    _estimate_guard(audit)
    return any(
        audit.affects_edge(u, y_var, z_var) is not None for u in audit.contexts
    )


def _estimate_guard(audit: _Audit) -> None:
    n_cells = len(audit.contexts) * len(audit.allowed)
    if n_cells * audit.sig.outcome_space_size() > max_enum():
        raise TooLarge("axiom audit would enumerate too many instances")


def check_axioms(model: FiniteGsem, system: str = "AX+") -> AxiomReport:
    """Audit every schema of ``AX+`` (or ``AX+_rec``) on a finite GSEM."""
    if system not in ("AX+", "AX+_rec"):
        raise ValueError(f"unknown axiom system {system!r}")
    audit = _Audit(model)
    _estimate_guard(audit)
    report = AxiomReport(system=system)
    for name, what in PROPOSITIONAL.items():
        report.verdicts[name] = AxiomVerdict(name, "propositional")
    report.verdicts["D1"] = audit.check_d1()
    report.verdicts["D2"] = audit.check_d2()
    report.verdicts["D3"] = audit.check_d3()
    report.verdicts["D4"] = audit.check_d4()
    report.verdicts["D5"] = audit.check_d5()
    if system == "AX+_rec":
        report.verdicts["D6"] = audit.check_d6()
    report.verdicts["D9"] = audit.check_d9()
    return report


def recover_sem(model: FiniteGsem) -> FiniteSem:
    """Rebuild an equivalent SEM from an audited universal-intervention GSEM.

    Each equation value is the unique outcome value of the variable under
    the complete intervention pinning all the others; uniqueness (and
    existence) is exactly what the audit's D9 verdict guarantees.
    """
    sig = model.signature
    if not sig.universal:
        raise NotUniversal("recovery needs the universal allowed set")
    report = check_axioms(model, "AX+")
    if not report.all_valid:
        raise AxiomsFail(report.failing()[0])
    equations: dict[str, dict[tuple, object]] = {}
    for var in sig.endogenous:
        others = tuple(x for x in sig.endogenous if x != var)
        table: dict[tuple, object] = {}
        for u in sig.contexts():
            for values in itertools.product(*[sig.ranges[x] for x in others]):
                complete = Intervention(tuple(zip(others, values)))
                outcomes = model.outcomes(u, complete)
                if len(outcomes) != 1:
                    raise AxiomsFail("D9", "no unique outcome under a complete intervention")
                value = next(iter(outcomes))[var]
                table[u.values + values] = value
        equations[var] = table
    return FiniteSem(Signature(sig.exogenous, sig.endogenous, sig.ranges, sig.allowed), equations)
