import pytest

from gsemkit.core import (
    Assignment,
    EMPTY_INTERVENTION,
    FiniteGsem,
    FiniteSem,
    Intervention,
    Signature,
    compose,
    derived_allowed,
    equivalent,
    sem_intervene,
    sem_is_acyclic,
    sem_outcomes,
    sem_to_gsem,
    semantic_dependencies,
)
from gsemkit.errors import NotAllowed, SignatureMismatch, ValidationError
from gsemkit.presets import chain_sem, mutual_copy_sem, shell_game


def ivn(**kw):
    return Intervention.of(kw)


class TestCompose:
    def test_second_overrides(self):
        assert compose(ivn(X=1), ivn(X=2, Y=3)) == ivn(X=2, Y=3)

    def test_empty_is_identity(self):
        assert compose(ivn(X=1), EMPTY_INTERVENTION) == ivn(X=1)
        assert compose(EMPTY_INTERVENTION, ivn(X=1)) == ivn(X=1)

    def test_disjoint_union(self):
        assert compose(ivn(X=1, Z=0), ivn(Y=1)) == ivn(X=1, Y=1, Z=0)


class TestSemOutcomes:
    def test_acyclic_forward(self):
        m = chain_sem()
        u = m.signature.context_of({"U": 1})
        outs = sem_outcomes(m, u, EMPTY_INTERVENTION)
        assert outs == {m.signature.outcome_of({"Y": 1, "Z": 1})}

    def test_cyclic_two_fixed_points(self):
        m = mutual_copy_sem()
        u = m.signature.context_of({"U": 0})
        outs = sem_outcomes(m, u, EMPTY_INTERVENTION)
        expect = {
            m.signature.outcome_of({"X1": 0, "X2": 0}),
            m.signature.outcome_of({"X1": 1, "X2": 1}),
        }
        assert outs == expect

    def test_cyclic_pinned_by_intervention(self):
        m = mutual_copy_sem()
        u = m.signature.context_of({"U": 0})
        outs = sem_outcomes(m, u, ivn(X1=1))
        assert outs == {m.signature.outcome_of({"X1": 1, "X2": 1})}

    def test_contradictory_cycle_has_no_outcome(self):
        sig = Signature(("U",), ("A", "B"), {"U": (0,), "A": (0, 1), "B": (0, 1)})
        m = FiniteSem.from_callable(
            sig, {"A": lambda e: 1 - e["B"], "B": lambda e: e["A"]}
        )
        u = sig.context_of({"U": 0})
        assert sem_outcomes(m, u, EMPTY_INTERVENTION) == frozenset()


class TestSemIntervene:
    def test_constant_replacement(self):
        m = chain_sem()
        m0 = sem_intervene(m, ivn(Y=0))
        for u in m.signature.contexts():
            outs = m0.outcomes(u, EMPTY_INTERVENTION)
            assert outs == {m.signature.outcome_of({"Y": 0, "Z": 0})}

    def test_empty_intervention_is_noop(self):
        m = chain_sem()
        assert sem_intervene(m, EMPTY_INTERVENTION).equations == m.equations

    def test_composition_law_matches_outcomes(self):
        m = mutual_copy_sem()
        u = m.signature.context_of({"U": 0})
        i, j = ivn(X1=0), ivn(X1=1, X2=1)
        lhs = sem_outcomes(sem_intervene(m, i), u, j)
        rhs = sem_outcomes(m, u, compose(i, j))
        assert lhs == rhs


class TestShellGame:
    def test_outcomes_from_table(self):
        m = shell_game()
        u = m.signature.context_of({"U": 0})
        assert m.outcomes(u, ivn(S1=1)) == {
            m.signature.outcome_of({"S1": 1, "S2": 1, "Z": 1})
        }
        assert m.outcomes(u, ivn(S2=1)) == {
            m.signature.outcome_of({"S1": 1, "S2": 1, "Z": 0})
        }

    def test_joint_flip_not_allowed(self):
        m = shell_game()
        u = m.signature.context_of({"U": 0})
        with pytest.raises(NotAllowed):
            m.outcomes(u, ivn(S1=1, S2=1))

    def test_no_sem_matches_both_rows(self):
        # Exhaustive search over every equation triple on the signature.
        import itertools

        m = shell_game()
        sig = m.signature
        u = sig.context_of({"U": 0})
        flip1, flip2 = ivn(S1=1), ivn(S2=1)
        row1, row2 = m.outcomes(u, flip1), m.outcomes(u, flip2)
        found = 0
        arg_space = list(itertools.product((0, 1), (0, 1)))
        tables = list(itertools.product((0, 1), repeat=4))
        assert len(tables) == 16
        for tz in tables:
            for ts1 in tables:
                for ts2 in tables:
                    eqs = {
                        "S1": {(0,) + a: v for a, v in zip(arg_space, ts1)},
                        "S2": {(0,) + a: v for a, v in zip(arg_space, ts2)},
                        "Z": {(0,) + a: v for a, v in zip(arg_space, tz)},
                    }
                    cand = FiniteSem(sig, eqs)
                    if (
                        sem_outcomes(cand, u, flip1) == row1
                        and sem_outcomes(cand, u, flip2) == row2
                    ):
                        found += 1
        assert found == 0


class TestGsem:
    def test_effectiveness_enforced_on_construction(self):
        sig = Signature(
            ("U",), ("X",), {"U": (0,), "X": (0, 1)},
            allowed=frozenset({ivn(X=1)}),
        )
        u = sig.context_of({"U": 0})
        bad = {(u, ivn(X=1)): {sig.outcome_of({"X": 0})}}
        with pytest.raises(ValidationError):
            FiniteGsem(sig, bad)

    def test_table_must_be_complete(self):
        sig = Signature(
            ("U",), ("X",), {"U": (0,), "X": (0, 1)},
            allowed=frozenset({ivn(X=0), ivn(X=1)}),
        )
        u = sig.context_of({"U": 0})
        partial = {(u, ivn(X=1)): {sig.outcome_of({"X": 1})}}
        with pytest.raises(ValidationError):
            FiniteGsem(sig, partial)

    def test_sem_to_gsem_matches_pointwise(self):
        m = chain_sem()
        g = sem_to_gsem(m)
        for u in m.signature.contexts():
            for i in m.signature.interventions():
                assert g.outcomes(u, i) == sem_outcomes(m, u, i)

    def test_sem_to_gsem_cyclic_table(self):
        m = mutual_copy_sem()
        g = sem_to_gsem(m)
        u = m.signature.context_of({"U": 0})
        assert g.outcomes(u, EMPTY_INTERVENTION) == {
            m.signature.outcome_of({"X1": 0, "X2": 0}),
            m.signature.outcome_of({"X1": 1, "X2": 1}),
        }

    def test_intervened_gsem_shifts_table(self):
        m = sem_to_gsem(mutual_copy_sem())
        u = m.signature.context_of({"U": 0})
        mi = m.intervene(ivn(X1=1))
        assert mi.outcomes(u, EMPTY_INTERVENTION) == m.outcomes(u, ivn(X1=1))
        assert mi.outcomes(u, ivn(X1=0)) == m.outcomes(u, ivn(X1=0))

    def test_intervene_requires_allowed(self):
        m = shell_game()
        with pytest.raises(NotAllowed):
            m.intervene(ivn(S1=1, S2=1))


class TestDerivedAllowed:
    def test_universal_stays_universal(self):
        sig = chain_sem().signature
        assert derived_allowed(sig.allowed, ivn(Y=1)) is sig.allowed or str(
            derived_allowed(sig.allowed, ivn(Y=1))
        ) == "UNIVERSAL"

    def test_explicit_set(self):
        allowed = frozenset({ivn(X=1, Y=2)})
        js = derived_allowed(allowed, ivn(X=1))
        # I;J must equal {X<-1, Y<-2}: J needs Y<-2 and may re-pin X<-1.
        assert js == frozenset({ivn(Y=2), ivn(X=1, Y=2)})

    def test_value_conflict_forces_override(self):
        allowed = frozenset({ivn(X=2)})
        js = derived_allowed(allowed, ivn(X=1))
        assert js == frozenset({ivn(X=2)})


class TestEquivalent:
    def test_sem_equals_its_gsem(self):
        m = chain_sem()
        assert equivalent(m, sem_to_gsem(m))

    def test_one_cell_difference(self):
        m = shell_game()
        sig = m.signature
        u = sig.context_of({"U": 0})
        flip1, flip2 = ivn(S1=1), ivn(S2=1)
        table = {
            (u, flip1): {sig.outcome_of({"S1": 1, "S2": 1, "Z": 0})},
            (u, flip2): {sig.outcome_of({"S1": 1, "S2": 1, "Z": 0})},
        }
        other = FiniteGsem(sig, table)
        assert not equivalent(m, other)

    def test_signature_mismatch(self):
        with pytest.raises(SignatureMismatch):
            equivalent(chain_sem(), mutual_copy_sem())


class TestAcyclicity:
    def test_chain_is_acyclic(self):
        assert sem_is_acyclic(chain_sem())

    def test_mutual_copy_is_cyclic(self):
        assert not sem_is_acyclic(mutual_copy_sem())

    def test_dependencies_reported(self):
        m = chain_sem()
        u = m.signature.context_of({"U": 0})
        deps = semantic_dependencies(m, u)
        assert deps == {"Y": set(), "Z": {"Y"}}


class TestAssignment:
    def test_restrict_projects(self):
        a = Assignment(("X", "Y", "Z"), (1, 2, 3))
        assert a.restrict(("Z", "X")).as_dict() == {"Z": 3, "X": 1}

    def test_context_outcome_mixing_is_checked(self):
        m = chain_sem()
        v = m.signature.outcome_of({"Y": 0, "Z": 0})
        with pytest.raises(ValidationError):
            sem_outcomes(m, v, EMPTY_INTERVENTION)
