"""Causal constraints models and their round trip with finite GSEMs.

A constraint is a Boolean predicate over (context, outcome) pairs together
with a set of intervention targets that activate it.  The outcomes of an
intervention X<-x are the assignments that agree with x and satisfy every
constraint whose activation set contains the target set X.

The two conversions below witness that this representation and the direct
outcome-table one can express exactly the same models: a GSEM becomes a CCM
with one constraint per allowed intervention, and a CCM is tabulated back
by enumeration.  Intervened CCMs are defined through that round trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import (
    Assignment,
    FiniteGsem,
    Intervention,
    Signature,
)
from .errors import NotAllowed, ValidationError


@dataclass(frozen=True)
class Constraint:
    """A predicate table plus the intervention target sets activating it."""

    table: Mapping[tuple[tuple, tuple], int]
    targets: frozenset[frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(
            self, "targets", frozenset(frozenset(t) for t in self.targets)
        )

    def holds(self, u: Assignment, v: Assignment) -> bool:
        key = (u.values, v.values)
        if key not in self.table:
            raise ValidationError("constraint table is not total")
        return bool(self.table[key])

    def active_for(self, target: frozenset[str]) -> bool:
        return target in self.targets


@dataclass(frozen=True)
class Ccm:
    """A signature plus a list of causal constraints."""

    signature: Signature
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def outcomes(self, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
        return ccm_outcomes(self, u, ivn)

    def intervene(self, ivn: Intervention) -> "Ccm":
        return ccm_intervene(self, ivn)


def ccm_outcomes(model: Ccm, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
    """Assignments matching the intervention and all active constraints."""
    sig = model.signature
    if not sig.allows(ivn):
        raise NotAllowed(f"intervention {ivn} is not allowed")
    sig.validate_context(u)
    target = ivn.variables
    active = [c for c in model.constraints if c.active_for(target)]
    result = []
    for v in sig.outcome_space():
        if not v.satisfies(ivn):
            continue
        if all(c.holds(u, v) for c in active):
            result.append(v)
    return frozenset(result)


def gsem_to_ccm(model: FiniteGsem) -> Ccm:
    """One constraint per allowed intervention X<-x.

    The constraint for X<-x is activated by the target set X alone and
    accepts (u, v) when v either disagrees with x somewhere (so the
    constraint is mute for that outcome) or is one of the tabulated
    outcomes for (u, X<-x).
    """
    sig = model.signature
    constraints = []
    for ivn in sig.interventions():
        table: dict[tuple[tuple, tuple], int] = {}
        for u in sig.contexts():
            outs = model.outcomes(u, ivn)
            for v in sig.outcome_space():
                ok = (not v.satisfies(ivn)) or v in outs
                table[(u.values, v.values)] = int(ok)
        constraints.append(Constraint(table, frozenset({ivn.variables})))
    return Ccm(sig, tuple(constraints))


def ccm_to_gsem(model: Ccm) -> FiniteGsem:
    """Tabulate the constraint semantics into an explicit outcome table."""
    sig = model.signature
    table = {}
    for u in sig.contexts():
        for ivn in sig.interventions():
            table[(u, ivn)] = ccm_outcomes(model, u, ivn)
    return FiniteGsem(sig, table)


def ccm_intervene(model: Ccm, ivn: Intervention) -> Ccm:
    """The intervened CCM, via the GSEM round trip."""
    return gsem_to_ccm(ccm_to_gsem(model).intervene(ivn))
