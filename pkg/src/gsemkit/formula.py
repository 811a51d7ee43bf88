"""The causal-formula language over a signature.

Events are Boolean combinations of primitive equalities ``X = x`` over
endogenous variables; causal formulas are Boolean combinations of atoms
``[Y<-y] event``, read "after intervening Y<-y, every outcome satisfies the
event".  The dual ``<Y<-y> event`` ("some outcome satisfies it") is sugar
for ``not [Y<-y] not event``.  A box over an empty outcome set is vacuously
true; the dual diamond is then false.

Formulas may only mention allowed interventions.  A text syntax is provided
for the command line::

    (box ((S1 1)) (= Z 1))
    (diamond ((S2 1)) (and (= S1 1) (not (= Z 1))))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .core import Assignment, Intervention, Signature, sorted_outcomes
from .errors import NotAllowed, UnboundVariable, ValidationError


# ---------------------------------------------------------------------------
# events


class Event:
    """Base class for Boolean event trees."""

    def holds_in(self, v: Assignment) -> bool:
        return eval_event(v, self)


@dataclass(frozen=True)
class Eq(Event):
    var: str
    value: object


@dataclass(frozen=True)
class TrueEvent(Event):
    pass


@dataclass(frozen=True)
class NotE(Event):
    child: Event


@dataclass(frozen=True)
class AndE(Event):
    children: tuple[Event, ...]

    def __init__(self, *children: Event):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class OrE(Event):
    children: tuple[Event, ...]

    def __init__(self, *children: Event):
        object.__setattr__(self, "children", tuple(children))


def eval_event(v: Assignment, event: Event) -> bool:
    """Standard Boolean semantics over ``v[X] = x`` checks."""
    if isinstance(event, TrueEvent):
        return True
    if isinstance(event, Eq):
        if event.var not in v:
            raise UnboundVariable(f"variable {event.var} not bound by {v}")
        return v[event.var] == event.value
    if isinstance(event, NotE):
        return not eval_event(v, event.child)
    if isinstance(event, AndE):
        return all(eval_event(v, c) for c in event.children)
    if isinstance(event, OrE):
        return any(eval_event(v, c) for c in event.children)
    raise TypeError(f"not an event: {event!r}")


def conjunction(pairs) -> Event:
    """``And(X1 = x1, ..., Xn = xn)``; the empty conjunction is true."""
    atoms = [Eq(var, val) for var, val in pairs]
    if not atoms:
        return TrueEvent()
    if len(atoms) == 1:
        return atoms[0]
    return AndE(*atoms)


# ---------------------------------------------------------------------------
# causal formulas


class CausalFormula:
    """Base class for Boolean trees over intervention atoms."""


@dataclass(frozen=True)
class Box(CausalFormula):
    intervention: Intervention
    event: Event


@dataclass(frozen=True)
class Diamond(CausalFormula):
    intervention: Intervention
    event: Event


@dataclass(frozen=True)
class NotF(CausalFormula):
    child: CausalFormula


@dataclass(frozen=True)
class AndF(CausalFormula):
    children: tuple[CausalFormula, ...]

    def __init__(self, *children: CausalFormula):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class OrF(CausalFormula):
    children: tuple[CausalFormula, ...]

    def __init__(self, *children: CausalFormula):
        object.__setattr__(self, "children", tuple(children))


def implies(a: CausalFormula, b: CausalFormula) -> CausalFormula:
    return OrF(NotF(a), b)


def eval_formula(model, u: Assignment, formula: CausalFormula) -> bool:
    """Truth of a causal formula in ``(model, u)``.

    ``model`` may be any causal model exposing ``outcomes(u, intervention)``
    and a ``signature``; atoms mentioning non-allowed interventions raise
    ``NotAllowed``.
    """
    sig: Signature = model.signature
    if isinstance(formula, (Box, Diamond)):
        if not sig.allows(formula.intervention):
            raise NotAllowed(
                f"formula mentions non-allowed intervention {formula.intervention}"
            )
        outs = model.outcomes(u, formula.intervention)
        if isinstance(formula, Box):
            return all(eval_event(v, formula.event) for v in outs)
        return any(eval_event(v, formula.event) for v in outs)
    if isinstance(formula, NotF):
        return not eval_formula(model, u, formula.child)
    if isinstance(formula, AndF):
        return all(eval_formula(model, u, c) for c in formula.children)
    if isinstance(formula, OrF):
        return any(eval_formula(model, u, c) for c in formula.children)
    raise TypeError(f"not a causal formula: {formula!r}")


# ---------------------------------------------------------------------------
# distinguishing formulas and the agreement basis


def distinguishing_formula(a, b, u: Assignment) -> Optional[CausalFormula]:
    """A formula true in exactly one of two models at context ``u``.

    Searches the allowed interventions for an outcome-set difference and,
    when one exists, returns ``<I>(X1 = v[X1] and ... and Xn = v[Xn])``
    where ``v`` is an outcome of one model that the other lacks and each
    conjunct separates ``v`` from one of the other model's outcomes.
    Returns ``None`` when the models agree at ``u`` on every allowed
    intervention.
    """
    sig = a.signature
    for ivn in sig.interventions():
        outs_a = a.outcomes(u, ivn)
        outs_b = b.outcomes(u, ivn)
        if outs_a == outs_b:
            continue
        extra = sorted_outcomes(outs_a - outs_b)
        other = b
        if not extra:
            extra = sorted_outcomes(outs_b - outs_a)
            other = a
        v = extra[0]
        conjuncts = []
        for w in sorted_outcomes(other.outcomes(u, ivn)):
            sep = next(x for x in sig.endogenous if v[x] != w[x])
            conjuncts.append((sep, v[sep]))
        seen = set()
        unique = [p for p in conjuncts if not (p in seen or seen.add(p))]
        return Diamond(ivn, conjunction(unique))
    return None


def distinguish_anywhere(a, b) -> Optional[tuple[Assignment, CausalFormula]]:
    """First (context, formula) pair separating two models, if any."""
    for u in a.signature.contexts():
        formula = distinguishing_formula(a, b, u)
        if formula is not None:
            return u, formula
    return None


def formula_basis(model_a, model_b) -> Iterator[tuple[Assignment, CausalFormula]]:
    """A finite family of formulas whose joint truth pins down the outcomes.

    Contains every atom ``[I](X = x)`` plus, for each model and each
    outcome ``v`` of it, the formula ``<I>(conjunction of v)``.  Two
    finite-outcome models agree on all causal formulas iff they agree on
    this family.
    """
    sig = model_a.signature
    for u in sig.contexts():
        for ivn in sig.interventions():
            for var in sig.endogenous:
                for val in sig.ranges[var]:
                    yield u, Box(ivn, Eq(var, val))
            for model in (model_a, model_b):
                for v in sorted_outcomes(model.outcomes(u, ivn)):
                    yield u, Diamond(
                        ivn, conjunction(zip(sig.endogenous, v.values))
                    )


def agree_on_basis(a, b) -> bool:
    """True iff the two models satisfy the same basis formulas."""
    for u, formula in formula_basis(a, b):
        if eval_formula(a, u, formula) != eval_formula(b, u, formula):
            return False
    return True


# ---------------------------------------------------------------------------
# text syntax


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise ValidationError("unexpected end of formula text")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _read(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise ValidationError("unbalanced parentheses in formula text")
        return items, pos + 1
    if tok == ")":
        raise ValidationError("unexpected ')' in formula text")
    return tok, pos + 1


def _atom_value(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def _parse_event(sexp) -> Event:
    if sexp == "true":
        return TrueEvent()
    if not isinstance(sexp, list) or not sexp:
        raise ValidationError(f"bad event syntax: {sexp!r}")
    head = sexp[0]
    if head == "=":
        if len(sexp) != 3 or not isinstance(sexp[1], str):
            raise ValidationError(f"bad equality: {sexp!r}")
        return Eq(sexp[1], _atom_value(sexp[2]))
    if head == "not":
        if len(sexp) != 2:
            raise ValidationError(f"'not' takes one argument: {sexp!r}")
        return NotE(_parse_event(sexp[1]))
    if head == "and":
        return AndE(*[_parse_event(s) for s in sexp[1:]])
    if head == "or":
        return OrE(*[_parse_event(s) for s in sexp[1:]])
    raise ValidationError(f"unknown event operator {head!r}")


def _parse_intervention(sexp) -> Intervention:
    if not isinstance(sexp, list):
        raise ValidationError(f"bad intervention list: {sexp!r}")
    pairs = []
    for item in sexp:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str):
            raise ValidationError(f"bad intervention pair: {item!r}")
        pairs.append((item[0], _atom_value(item[1])))
    return Intervention(tuple(pairs))


def _parse_formula(sexp) -> CausalFormula:
    if not isinstance(sexp, list) or not sexp:
        raise ValidationError(f"bad formula syntax: {sexp!r}")
    head = sexp[0]
    if head in ("box", "diamond"):
        if len(sexp) != 3:
            raise ValidationError(f"{head} takes an intervention and an event")
        ivn = _parse_intervention(sexp[1])
        event = _parse_event(sexp[2])
        return Box(ivn, event) if head == "box" else Diamond(ivn, event)
    if head == "not":
        if len(sexp) != 2:
            raise ValidationError(f"'not' takes one argument: {sexp!r}")
        return NotF(_parse_formula(sexp[1]))
    if head == "and":
        return AndF(*[_parse_formula(s) for s in sexp[1:]])
    if head == "or":
        return OrF(*[_parse_formula(s) for s in sexp[1:]])
    raise ValidationError(f"unknown formula operator {head!r}")


def parse_formula(text: str) -> CausalFormula:
    tokens = _tokenize(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ValidationError("trailing tokens after formula")
    return _parse_formula(sexp)


def parse_event(text: str) -> Event:
    tokens = _tokenize(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ValidationError("trailing tokens after event")
    return _parse_event(sexp)


def format_event(event: Event) -> str:
    if isinstance(event, TrueEvent):
        return "true"
    if isinstance(event, Eq):
        return f"(= {event.var} {event.value})"
    if isinstance(event, NotE):
        return f"(not {format_event(event.child)})"
    if isinstance(event, AndE):
        return "(and " + " ".join(format_event(c) for c in event.children) + ")"
    if isinstance(event, OrE):
        return "(or " + " ".join(format_event(c) for c in event.children) + ")"
    raise TypeError(f"not an event: {event!r}")


def format_formula(formula: CausalFormula) -> str:
    if isinstance(formula, (Box, Diamond)):
        head = "box" if isinstance(formula, Box) else "diamond"
        ivn = " ".join(f"({v} {x})" for v, x in formula.intervention.pairs)
        return f"({head} ({ivn}) {format_event(formula.event)})"
    if isinstance(formula, NotF):
        return f"(not {format_formula(formula.child)})"
    if isinstance(formula, AndF):
        return "(and " + " ".join(format_formula(c) for c in formula.children) + ")"
    if isinstance(formula, OrF):
        return "(or " + " ".join(format_formula(c) for c in formula.children) + ")"
    raise TypeError(f"not a causal formula: {formula!r}")
