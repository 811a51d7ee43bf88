import random

import pytest

from gsemkit.axioms import AxiomReport, affects, check_axioms, recover_sem
from gsemkit.core import (
    FiniteGsem,
    Intervention,
    Signature,
    equivalent,
    sem_is_acyclic,
    sem_to_gsem,
)
from gsemkit.errors import AxiomsFail, NotUniversal
from gsemkit.formula import eval_formula
from gsemkit.presets import chain_sem, mutual_copy_sem, shell_game

from generators import random_acyclic_sem, random_cyclic_sem, random_sem


def ivn(**kw):
    return Intervention.of(kw)


class TestAffects:
    def test_direct_dependence(self):
        g = sem_to_gsem(chain_sem())
        assert affects(g, "Y", "Z")

    def test_no_reverse_dependence(self):
        g = sem_to_gsem(chain_sem())
        assert not affects(g, "Z", "Y")

    def test_constant_model(self):
        sig = Signature(("U",), ("A", "B"), {"U": (0,), "A": (0, 1), "B": (0, 1)})
        from gsemkit.core import FiniteSem

        m = FiniteSem.from_callable(sig, {"A": lambda e: 0, "B": lambda e: 1})
        g = sem_to_gsem(m)
        assert not affects(g, "A", "B")
        assert not affects(g, "B", "A")

    def test_same_variable_rejected(self):
        with pytest.raises(ValueError):
            affects(sem_to_gsem(chain_sem()), "Y", "Y")


class TestCheckAxioms:
    def test_shell_game_satisfies_all(self):
        report = check_axioms(shell_game(), "AX+")
        assert report.all_valid
        assert report.verdicts["D9"].status == "not-instantiable"
        assert report.verdicts["D4"].status == "valid"
        assert report.verdicts["D0"].status == "propositional"

    def test_acyclic_sems_pass_recursive_system(self):
        rng = random.Random(7)
        for _ in range(10):
            m = random_acyclic_sem(rng)
            report = check_axioms(sem_to_gsem(m), "AX+_rec")
            assert report.all_valid, report.failing()

    def test_cyclic_sem_fails_d6(self):
        g = sem_to_gsem(mutual_copy_sem())
        report = check_axioms(g, "AX+_rec")
        assert report.verdicts["D6"].status == "counterexample"
        assert "X1" in report.verdicts["D6"].counterexample.note

    def test_counterexamples_reevaluate_false(self):
        g = sem_to_gsem(mutual_copy_sem())
        report = check_axioms(g, "AX+_rec")
        ce = report.verdicts["D6"].counterexample
        assert eval_formula(g, ce.context, ce.formula) is False

    def test_d9_counterexample_on_double_outcome(self):
        sig = Signature(
            ("U",), ("A", "B"), {"U": (0,), "A": (0, 1), "B": (0, 1)}
        )
        u = sig.context_of({"U": 0})
        table = {}
        for i in sig.interventions():
            cands = [v for v in sig.outcome_space() if v.satisfies(i)]
            table[(u, i)] = cands  # every compatible outcome, so D9 fails
        g = FiniteGsem(sig, table)
        report = check_axioms(g, "AX+")
        assert report.verdicts["D9"].status == "counterexample"
        ce = report.verdicts["D9"].counterexample
        assert eval_formula(g, ce.context, ce.formula) is False

    def test_effectiveness_verdict_present_everywhere(self):
        rng = random.Random(21)
        for _ in range(5):
            g = sem_to_gsem(random_sem(rng))
            report = check_axioms(g, "AX+")
            assert report.verdicts["D4"].status in ("valid", "not-instantiable")

    def test_report_serializes(self):
        report = check_axioms(shell_game(), "AX+")
        data = report.to_dict()
        assert data["all_valid"] is True
        assert data["axioms"]["D9"]["status"] == "not-instantiable"


class TestRecoverSem:
    def test_round_trip_random_sems(self):
        rng = random.Random(3)
        for _ in range(15):
            m = random_sem(rng)
            g = sem_to_gsem(m)
            recovered = recover_sem(g)
            assert equivalent(recovered, m)

    def test_rejects_non_universal(self):
        with pytest.raises(NotUniversal):
            recover_sem(shell_game())

    def test_rejects_d9_violation(self):
        sig = Signature(("U",), ("A",), {"U": (0,), "A": (0, 1)})
        u = sig.context_of({"U": 0})
        table = {}
        for i in sig.interventions():
            cands = [v for v in sig.outcome_space() if v.satisfies(i)]
            table[(u, i)] = cands
        g = FiniteGsem(sig, table)
        with pytest.raises(AxiomsFail) as err:
            recover_sem(g)
        assert err.value.axiom == "D9"

    def test_recursive_validity_means_acyclic_recovery(self):
        rng = random.Random(11)
        for _ in range(10):
            m = random_acyclic_sem(rng)
            g = sem_to_gsem(m)
            assert check_axioms(g, "AX+_rec").all_valid
            assert sem_is_acyclic(recover_sem(g))

    def test_cyclic_sems_flagged(self):
        rng = random.Random(13)
        for _ in range(5):
            m = random_cyclic_sem(rng, max_endo=3)
            report = check_axioms(sem_to_gsem(m), "AX+_rec")
            assert report.verdicts["D6"].status == "counterexample"
