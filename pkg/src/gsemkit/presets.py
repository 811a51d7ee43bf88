"""Small ready-made finite models used by the demos, CLI, and tests."""

from __future__ import annotations

from .core import Assignment, FiniteGsem, FiniteSem, Intervention, Signature


def shell_game() -> FiniteGsem:
    """Two shells, one dollar: a finite GSEM no SEM can reproduce.

    Flipping shell 1 makes the house flip shell 2 and wins the dollar;
    flipping shell 2 makes the house flip shell 1 and wins nothing.  Only
    the two single-shell flips are allowed, and the payoff depends on which
    shell was flipped rather than on the final state of the shells.
    """
    flip1 = Intervention.of({"S1": 1})
    flip2 = Intervention.of({"S2": 1})
    sig = Signature(
        exogenous=("U",),
        endogenous=("S1", "S2", "Z"),
        ranges={"U": (0,), "S1": (0, 1), "S2": (0, 1), "Z": (0, 1)},
        allowed=frozenset({flip1, flip2}),
    )
    u = sig.context_of({"U": 0})
    table = {
        (u, flip1): {sig.outcome_of({"S1": 1, "S2": 1, "Z": 1})},
        (u, flip2): {sig.outcome_of({"S1": 1, "S2": 1, "Z": 0})},
    }
    return FiniteGsem(sig, table)


def chain_sem() -> FiniteSem:
    """Acyclic two-step chain: Y copies the context, Z copies Y."""
    sig = Signature(
        exogenous=("U",),
        endogenous=("Y", "Z"),
        ranges={"U": (0, 1), "Y": (0, 1), "Z": (0, 1)},
    )
    return FiniteSem.from_callable(
        sig, {"Y": lambda env: env["U"], "Z": lambda env: env["Y"]}
    )


def mutual_copy_sem() -> FiniteSem:
    """Cyclic pair: X1 copies X2 and X2 copies X1 (two fixed points)."""
    sig = Signature(
        exogenous=("U",),
        endogenous=("X1", "X2"),
        ranges={"U": (0,), "X1": (0, 1), "X2": (0, 1)},
    )
    return FiniteSem.from_callable(
        sig, {"X1": lambda env: env["X2"], "X2": lambda env: env["X1"]}
    )
