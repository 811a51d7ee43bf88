"""Finite causal models.

A signature fixes exogenous/endogenous variables, their finite ranges, and
the set of allowed interventions.  Two finite model kinds live here:

* ``FiniteSem`` -- one structural equation per endogenous variable, stored
  as an explicit table.  Outcomes are computed by exhaustive enumeration of
  the endogenous assignment space, which is correct for cyclic equation
  systems and doubles as the brute-force oracle for everything else.
* ``FiniteGsem`` -- a direct table from (context, allowed intervention) to a
  set of outcomes, with the effectiveness requirement (outcomes agree with
  the intervened values) enforced on every cell.

Intervening, composing interventions, converting SEMs to GSEMs, and model
equivalence are all defined over these types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Mapping

from .errors import (
    NotAllowed,
    SignatureMismatch,
    TooLarge,
    ValidationError,
    max_enum,
)

Value = Any


class _Universal:
    """Marker for the set of all interventions; membership is computed."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNIVERSAL"


UNIVERSAL = _Universal()


@dataclass(frozen=True)
class Intervention:
    """A partial assignment to endogenous variables.

    ``pairs`` is kept sorted by variable name so that equal interventions
    compare and hash equal.  The empty intervention is a valid value and
    acts as the identity for composition.
    """

    pairs: tuple[tuple[str, Value], ...] = ()

    def __post_init__(self):
        names = [var for var, _ in self.pairs]
        if len(set(names)) != len(names):
            raise ValidationError(f"variable bound twice in intervention {self.pairs}")
        ordered = tuple(sorted(self.pairs, key=lambda p: p[0]))
        object.__setattr__(self, "pairs", ordered)

    @classmethod
    def of(cls, bindings: Mapping[str, Value] | None = None, **kw: Value) -> "Intervention":
        merged = dict(bindings or {})
        merged.update(kw)
        return cls(tuple(merged.items()))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(var for var, _ in self.pairs)

    def as_dict(self) -> dict[str, Value]:
        return dict(self.pairs)

    def __getitem__(self, var: str) -> Value:
        for name, value in self.pairs:
            if name == var:
                return value
        raise KeyError(var)

    def __contains__(self, var: str) -> bool:
        return any(name == var for name, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self):
        if not self.pairs:
            return "Intervention()"
        body = ", ".join(f"{v}<-{x!r}" for v, x in self.pairs)
        return f"Intervention({body})"


EMPTY_INTERVENTION = Intervention()


def intervention_sort_key(ivn: Intervention):
    return tuple((var, str(val)) for var, val in ivn.pairs)


def compose(first: Intervention, second: Intervention) -> Intervention:
    """Sequential composition; the second intervention wins on overlap."""
    merged = first.as_dict()
    merged.update(second.as_dict())
    return Intervention.of(merged)


@dataclass(frozen=True)
class Assignment:
    """A total map from a fixed, ordered variable tuple to values."""

    variables: tuple[str, ...]
    values: tuple[Value, ...]

    def __post_init__(self):
        if len(self.variables) != len(self.values):
            raise ValidationError("assignment variables and values differ in length")

    @classmethod
    def of(cls, mapping: Mapping[str, Value], order: Iterable[str] | None = None) -> "Assignment":
        names = tuple(order) if order is not None else tuple(sorted(mapping))
        missing = [v for v in names if v not in mapping]
        if missing:
            raise ValidationError(f"assignment missing variables {missing}")
        return cls(names, tuple(mapping[v] for v in names))

    def __getitem__(self, var: str) -> Value:
        try:
            return self.values[self.variables.index(var)]
        except ValueError:
            raise KeyError(var) from None

    def __contains__(self, var: str) -> bool:
        return var in self.variables

    def as_dict(self) -> dict[str, Value]:
        return dict(zip(self.variables, self.values))

    def restrict(self, variables: Iterable[str]) -> "Assignment":
        """Projection onto a subset of this assignment's variables."""
        names = tuple(variables)
        return Assignment(names, tuple(self[v] for v in names))

    def satisfies(self, intervention: Intervention) -> bool:
        return all(var in self and self[var] == val for var, val in intervention.pairs)

    def __repr__(self):
        body = ", ".join(f"{v}={x!r}" for v, x in zip(self.variables, self.values))
        return f"({body})"


def _sort_key(a: Assignment):
    return tuple(str(x) for x in a.values)


def sorted_outcomes(outcomes: Iterable[Assignment]) -> tuple[Assignment, ...]:
    """Canonical deterministic ordering of an outcome set."""
    return tuple(sorted(outcomes, key=_sort_key))


@dataclass(frozen=True)
class Signature:
    """Variable sets, ranges, and the allowed interventions.

    ``allowed`` is either an explicit frozenset of interventions or the
    ``UNIVERSAL`` marker, in which case membership is computed rather than
    materialized.
    """

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: Mapping[str, tuple[Value, ...]]
    allowed: frozenset[Intervention] | _Universal = UNIVERSAL

    def __post_init__(self):
        exo = tuple(self.exogenous)
        endo = tuple(self.endogenous)
        object.__setattr__(self, "exogenous", exo)
        object.__setattr__(self, "endogenous", endo)
        if set(exo) & set(endo):
            raise ValidationError("exogenous and endogenous variables overlap")
        ranges = {v: tuple(r) for v, r in dict(self.ranges).items()}
        object.__setattr__(self, "ranges", ranges)
        for var in exo + endo:
            if var not in ranges or not ranges[var]:
                raise ValidationError(f"variable {var} lacks a nonempty range")
        if not isinstance(self.allowed, _Universal):
            allowed = frozenset(self.allowed)
            object.__setattr__(self, "allowed", allowed)
            for ivn in allowed:
                self._check_intervention(ivn)

    def _check_intervention(self, ivn: Intervention) -> None:
        for var, val in ivn.pairs:
            if var not in self.endogenous:
                raise ValidationError(f"intervention on non-endogenous variable {var}")
            if val not in self.ranges[var]:
                raise ValidationError(f"value {val!r} outside range of {var}")

    @property
    def universal(self) -> bool:
        return isinstance(self.allowed, _Universal)

    def allows(self, ivn: Intervention) -> bool:
        if self.universal:
            try:
                self._check_intervention(ivn)
            except ValidationError:
                return False
            return True
        return ivn in self.allowed

    def valid_intervention(self, ivn: Intervention) -> bool:
        """Well-formedness over this signature, ignoring the allowed set."""
        try:
            self._check_intervention(ivn)
        except ValidationError:
            return False
        return True

    def contexts(self) -> Iterator[Assignment]:
        """All contexts, i.e. total assignments to the exogenous variables."""
        yield from _iter_assignments(self.exogenous, self.ranges)

    def outcome_space(self) -> Iterator[Assignment]:
        """All total assignments to the endogenous variables."""
        yield from _iter_assignments(self.endogenous, self.ranges)

    def outcome_space_size(self) -> int:
        size = 1
        for var in self.endogenous:
            size *= len(self.ranges[var])
        return size

    def interventions(self) -> Iterator[Intervention]:
        """The allowed interventions, enumerated (universal sets are expanded)."""
        if not self.universal:
            yield from sorted(self.allowed, key=intervention_sort_key)
            return
        count = 1
        for var in self.endogenous:
            count *= 1 + len(self.ranges[var])
        if count > max_enum():
            raise TooLarge(
                f"universal intervention set has {count} members, over the cap"
            )
        options = [
            [(var, None)] + [(var, val) for val in self.ranges[var]]
            for var in self.endogenous
        ]
        for combo in itertools.product(*options):
            pairs = tuple((var, val) for var, val in combo if val is not None)
            yield Intervention(pairs)

    def context_of(self, mapping: Mapping[str, Value]) -> Assignment:
        return Assignment.of(mapping, order=self.exogenous)

    def outcome_of(self, mapping: Mapping[str, Value]) -> Assignment:
        return Assignment.of(mapping, order=self.endogenous)

    def validate_context(self, u: Assignment) -> None:
        if tuple(u.variables) != self.exogenous:
            raise ValidationError(
                f"expected a context over {self.exogenous}, got {u.variables}"
            )
        for var, val in zip(u.variables, u.values):
            if val not in self.ranges[var]:
                raise ValidationError(f"context value {val!r} outside range of {var}")

    def validate_outcome(self, v: Assignment) -> None:
        if tuple(v.variables) != self.endogenous:
            raise ValidationError(
                f"expected an outcome over {self.endogenous}, got {v.variables}"
            )
        for var, val in zip(v.variables, v.values):
            if val not in self.ranges[var]:
                raise ValidationError(f"outcome value {val!r} outside range of {var}")


def _iter_assignments(variables: tuple[str, ...], ranges: Mapping[str, tuple[Value, ...]]):
    spaces = [ranges[v] for v in variables]
    size = 1
    for s in spaces:
        size *= len(s)
    if size > max_enum():
        raise TooLarge(f"assignment space has {size} members, over the cap")
    for values in itertools.product(*spaces):
        yield Assignment(variables, values)


@dataclass(frozen=True)
class FiniteSem:
    """A finite structural-equations model.

    ``equations[X]`` is a total table from values of the other variables
    (exogenous first, then the remaining endogenous variables, both in
    signature order) to a value for ``X``.
    """

    signature: Signature
    equations: Mapping[str, Mapping[tuple, Value]]

    def __post_init__(self):
        eqs = {var: dict(tbl) for var, tbl in dict(self.equations).items()}
        object.__setattr__(self, "equations", eqs)
        sig = self.signature
        if set(eqs) != set(sig.endogenous):
            raise ValidationError("need exactly one equation per endogenous variable")
        for var in sig.endogenous:
            args = self.equation_args(var)
            expected = 1
            for a in args:
                expected *= len(sig.ranges[a])
            table = eqs[var]
            if len(table) != expected:
                raise ValidationError(f"equation table for {var} is not total")
            for key, value in table.items():
                if len(key) != len(args):
                    raise ValidationError(f"bad key arity in equation for {var}")
                if value not in sig.ranges[var]:
                    raise ValidationError(f"equation for {var} returns {value!r}, out of range")

    def equation_args(self, var: str) -> tuple[str, ...]:
        sig = self.signature
        return sig.exogenous + tuple(x for x in sig.endogenous if x != var)

    @classmethod
    def from_callable(
        cls, signature: Signature, fns: Mapping[str, Callable[[Mapping[str, Value]], Value]]
    ) -> "FiniteSem":
        """Tabulate ``fns[X](env)`` over the argument space of each equation."""
        equations: dict[str, dict[tuple, Value]] = {}
        for var in signature.endogenous:
            args = signature.exogenous + tuple(x for x in signature.endogenous if x != var)
            table = {}
            for assignment in _iter_assignments(args, signature.ranges):
                table[assignment.values] = fns[var](assignment.as_dict())
            equations[var] = table
        return cls(signature, equations)

    def evaluate(self, var: str, env: Mapping[str, Value]) -> Value:
        args = self.equation_args(var)
        return self.equations[var][tuple(env[a] for a in args)]

    def outcomes(self, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
        return sem_outcomes(self, u, ivn)

    def intervene(self, ivn: Intervention) -> "FiniteSem":
        return sem_intervene(self, ivn)


def sem_outcomes(model: FiniteSem, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
    """All endogenous assignments satisfying the intervened equations.

    Computed by exhaustive enumeration of the endogenous space, so cyclic
    equation systems (zero or many solutions) are handled correctly.
    """
    sig = model.signature
    sig.validate_context(u)
    bound = ivn.as_dict()
    results = []
    for v in sig.outcome_space():
        env = u.as_dict()
        env.update(v.as_dict())
        ok = True
        for var in sig.endogenous:
            wanted = bound[var] if var in bound else model.evaluate(var, env)
            if env[var] != wanted:
                ok = False
                break
        if ok:
            results.append(v)
    return frozenset(results)


def derived_allowed(
    allowed: frozenset[Intervention] | _Universal, ivn: Intervention
) -> frozenset[Intervention] | _Universal:
    """The allowed set of an intervened model: all J with I;J allowed."""
    if isinstance(allowed, _Universal):
        return UNIVERSAL
    result: set[Intervention] = set()
    for target in allowed:
        tdom = target.as_dict()
        idom = ivn.as_dict()
        if not set(idom) <= set(tdom):
            continue
        mandatory = {
            var for var in tdom if var not in idom or idom[var] != tdom[var]
        }
        optional = sorted(set(tdom) - mandatory)
        if 2 ** len(optional) > max_enum():
            raise TooLarge("derived allowed set is too large to materialize")
        for k in range(len(optional) + 1):
            for extra in itertools.combinations(optional, k):
                dom = mandatory | set(extra)
                result.add(Intervention(tuple((v, tdom[v]) for v in dom)))
    return frozenset(result)


def sem_intervene(model: FiniteSem, ivn: Intervention) -> FiniteSem:
    """Replace the equations of intervened variables with constants.

    Well defined for any intervention over the signature, allowed or not;
    the result's allowed set is the derived one (all J with I;J allowed).
    """
    sig = model.signature
    sig._check_intervention(ivn)
    new_sig = Signature(
        sig.exogenous, sig.endogenous, sig.ranges, derived_allowed(sig.allowed, ivn)
    )
    equations = {}
    for var in sig.endogenous:
        if var in ivn:
            args = model.equation_args(var)
            space = 1
            for a in args:
                space *= len(sig.ranges[a])
            if space > max_enum():
                raise TooLarge("constant equation table too large to materialize")
            table = {}
            for key in itertools.product(*[sig.ranges[a] for a in args]):
                table[key] = ivn[var]
            equations[var] = table
        else:
            equations[var] = model.equations[var]
    return FiniteSem(new_sig, equations)


class FiniteGsem:
    """An outcome table: (context, allowed intervention) -> set of outcomes.

    Cells may be given explicitly or computed on demand from a backing
    function (used for SEM conversions and intervened models, where the
    table is defined for the full allowed set but rarely visited in full).
    Every cell, however produced, is checked for effectiveness.
    """

    def __init__(
        self,
        signature: Signature,
        table: Mapping[tuple[Assignment, Intervention], Iterable[Assignment]] | None = None,
        backing: Callable[[Assignment, Intervention], Iterable[Assignment]] | None = None,
    ):
        if table is None and backing is None:
            raise ValidationError("a GSEM needs a table or a backing function")
        self.signature = signature
        self._backing = backing
        self._cells: dict[tuple[Assignment, Intervention], frozenset[Assignment]] = {}
        if table is not None:
            for (u, ivn), outs in table.items():
                self._cells[(u, ivn)] = self._validated_cell(u, ivn, outs)
            if backing is None:
                self._check_complete()

    def _validated_cell(self, u, ivn, outs) -> frozenset[Assignment]:
        sig = self.signature
        sig.validate_context(u)
        if not sig.allows(ivn):
            raise ValidationError(f"table cell for non-allowed intervention {ivn}")
        cell = frozenset(outs)
        for v in cell:
            sig.validate_outcome(v)
            if not v.satisfies(ivn):
                raise ValidationError(
                    f"effectiveness violated: outcome {v} under {ivn}"
                )
        return cell

    def _check_complete(self) -> None:
        for u in self.signature.contexts():
            for ivn in self.signature.interventions():
                if (u, ivn) not in self._cells:
                    raise ValidationError(f"table missing cell ({u}, {ivn})")

    @classmethod
    def from_function(
        cls,
        signature: Signature,
        fn: Callable[[Assignment, Intervention], Iterable[Assignment]],
    ) -> "FiniteGsem":
        return cls(signature, backing=fn)

    def outcomes(self, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
        if not self.signature.allows(ivn):
            raise NotAllowed(f"intervention {ivn} is not allowed")
        key = (u, ivn)
        if key not in self._cells:
            if self._backing is None:
                self.signature.validate_context(u)
                raise ValidationError(f"table has no cell for ({u}, {ivn})")
            self._cells[key] = self._validated_cell(u, ivn, self._backing(u, ivn))
        return self._cells[key]

    def intervene(self, ivn: Intervention) -> "FiniteGsem":
        return gsem_intervene(self, ivn)

    def cells(self) -> Iterator[tuple[Assignment, Intervention, frozenset[Assignment]]]:
        """Materialize and iterate every (context, intervention, outcomes) cell."""
        for u in self.signature.contexts():
            for ivn in self.signature.interventions():
                yield u, ivn, self.outcomes(u, ivn)


def sem_to_gsem(model: FiniteSem) -> FiniteGsem:
    """The outcome-table view of a SEM; equivalent to it by construction."""
    return FiniteGsem.from_function(
        model.signature, lambda u, ivn: sem_outcomes(model, u, ivn)
    )


def gsem_outcomes(model: FiniteGsem, u: Assignment, ivn: Intervention) -> frozenset[Assignment]:
    return model.outcomes(u, ivn)


def gsem_intervene(model: FiniteGsem, ivn: Intervention) -> FiniteGsem:
    """The intervened model: table'(u, J) = table(u, I;J)."""
    sig = model.signature
    if not sig.allows(ivn):
        raise NotAllowed(f"intervention {ivn} is not allowed")
    new_sig = Signature(
        sig.exogenous, sig.endogenous, sig.ranges, derived_allowed(sig.allowed, ivn)
    )
    def backing(u: Assignment, j: Intervention) -> frozenset[Assignment]:
        return model.outcomes(u, compose(ivn, j))
    return FiniteGsem(new_sig, backing=backing)


def equivalent(a, b) -> bool:
    """Outcome-for-outcome agreement over every context and allowed intervention.

    Works across model kinds (SEM, GSEM, CCM): anything with a ``signature``
    and an ``outcomes(context, intervention)`` method qualifies.
    """
    sig_a, sig_b = a.signature, b.signature
    same = (
        sig_a.exogenous == sig_b.exogenous
        and sig_a.endogenous == sig_b.endogenous
        and sig_a.ranges == sig_b.ranges
        and sig_a.universal == sig_b.universal
        and (sig_a.universal or sig_a.allowed == sig_b.allowed)
    )
    if not same:
        raise SignatureMismatch("models do not share a signature")
    for u in sig_a.contexts():
        for ivn in sig_a.interventions():
            if a.outcomes(u, ivn) != b.outcomes(u, ivn):
                return False
    return True


def semantic_dependencies(model: FiniteSem, u: Assignment) -> dict[str, set[str]]:
    """For each endogenous X, the variables its equation actually varies with."""
    sig = model.signature
    deps: dict[str, set[str]] = {var: set() for var in sig.endogenous}
    for var in sig.endogenous:
        args = model.equation_args(var)
        others = [a for a in args if a in sig.endogenous]
        for other in others:
            idx = args.index(other)
            found = False
            for key in itertools.product(*[sig.ranges[a] for a in args]):
                if tuple(key[: len(sig.exogenous)]) != u.values:
                    continue
                base = model.equations[var][key]
                for alt in sig.ranges[other]:
                    if alt == key[idx]:
                        continue
                    mod = key[:idx] + (alt,) + key[idx + 1 :]
                    if model.equations[var][mod] != base:
                        found = True
                        break
                if found:
                    break
            if found:
                deps[var].add(other)
    return deps


def sem_is_acyclic(model: FiniteSem) -> bool:
    """True if, in every context, the depends-on relation can be ordered.

    This is the equation-table route to acyclicity (topological sort of
    actual dependencies), independent of the formula-based audit.
    """
    for u in model.signature.contexts():
        deps = semantic_dependencies(model, u)
        if _has_cycle(deps):
            return False
    return True


def _has_cycle(graph: Mapping[str, set[str]]) -> bool:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in graph}

    def visit(node: str) -> bool:
        color[node] = GRAY
        for succ in graph[node]:
            if color[succ] == GRAY:
                return True
            if color[succ] == WHITE and visit(succ):
                return True
        color[node] = BLACK
        return False

    return any(color[n] == WHITE and visit(n) for n in list(graph))
