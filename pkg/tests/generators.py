"""Random finite models for the law and round-trip tests."""

import itertools
import random

from gsemkit.core import (
    FiniteGsem,
    FiniteSem,
    Intervention,
    Signature,
    sem_is_acyclic,
)


def random_signature(rng: random.Random, max_endo: int = 4, n_contexts: int = 2) -> Signature:
    n = rng.randint(1, max_endo)
    endo = tuple(f"X{i}" for i in range(1, n + 1))
    ranges = {"U": tuple(range(n_contexts))}
    ranges.update({v: (0, 1) for v in endo})
    return Signature(("U",), endo, ranges)


def random_sem(rng: random.Random, sig: Signature | None = None) -> FiniteSem:
    sig = sig or random_signature(rng)
    equations = {}
    for var in sig.endogenous:
        args = sig.exogenous + tuple(x for x in sig.endogenous if x != var)
        table = {}
        for key in itertools.product(*[sig.ranges[a] for a in args]):
            table[key] = rng.choice(sig.ranges[var])
        equations[var] = table
    return FiniteSem(sig, equations)


def random_acyclic_sem(rng: random.Random, sig: Signature | None = None) -> FiniteSem:
    """Equations that only read the context and earlier variables."""
    sig = sig or random_signature(rng)
    order = list(sig.endogenous)
    rng.shuffle(order)
    earlier: dict[str, tuple[str, ...]] = {}
    seen: list[str] = []
    for var in order:
        earlier[var] = tuple(seen)
        seen.append(var)
    equations = {}
    for var in sig.endogenous:
        args = sig.exogenous + tuple(x for x in sig.endogenous if x != var)
        reads = sig.exogenous + earlier[var]
        read_idx = [args.index(a) for a in reads]
        sub_table = {
            key: rng.choice(sig.ranges[var])
            for key in itertools.product(*[sig.ranges[a] for a in reads])
        }
        table = {}
        for key in itertools.product(*[sig.ranges[a] for a in args]):
            table[key] = sub_table[tuple(key[i] for i in read_idx)]
        equations[var] = table
    return FiniteSem(sig, equations)


def random_cyclic_sem(rng: random.Random, max_endo: int = 4) -> FiniteSem:
    """Rejection-sample until the depends-on relation has a cycle."""
    while True:
        n = rng.randint(2, max_endo)
        endo = tuple(f"X{i}" for i in range(1, n + 1))
        ranges = {"U": (0, 1)}
        ranges.update({v: (0, 1) for v in endo})
        sig = Signature(("U",), endo, ranges)
        m = random_sem(rng, sig)
        if not sem_is_acyclic(m):
            return m


def random_gsem(
    rng: random.Random,
    sig: Signature | None = None,
    nonempty: bool = False,
) -> FiniteGsem:
    """A random explicit outcome table; every cell respects effectiveness."""
    sig = sig or random_signature(rng, max_endo=3)
    table = {}
    space = list(sig.outcome_space())
    for u in sig.contexts():
        for ivn in sig.interventions():
            candidates = [v for v in space if v.satisfies(ivn)]
            k_min = 1 if nonempty else 0
            k = rng.randint(k_min, min(len(candidates), 3))
            table[(u, ivn)] = rng.sample(candidates, k)
    return FiniteGsem(sig, table)


def small_allowed_signature(rng: random.Random, max_endo: int = 3) -> Signature:
    """A signature with a small explicit allowed set (empty composition kept)."""
    base = random_signature(rng, max_endo=max_endo)
    all_ivns = list(base.interventions())
    chosen = set(rng.sample(all_ivns, rng.randint(1, min(4, len(all_ivns)))))
    chosen.add(Intervention())
    return Signature(base.exogenous, base.endogenous, base.ranges, frozenset(chosen))


def perturb_gsem(rng: random.Random, model: FiniteGsem) -> FiniteGsem:
    """Copy a GSEM and flip one table cell (still effective)."""
    sig = model.signature
    cells = {}
    for u, ivn, outs in model.cells():
        cells[(u, ivn)] = set(outs)
    keys = sorted(cells, key=lambda k: (str(k[0]), str(k[1])))
    space = list(sig.outcome_space())
    for _ in range(200):
        u, ivn = rng.choice(keys)
        candidates = [v for v in space if v.satisfies(ivn)]
        if not candidates:
            continue
        v = rng.choice(candidates)
        cell = set(cells[(u, ivn)])
        if v in cell:
            cell.discard(v)
        else:
            cell.add(v)
        cells[(u, ivn)] = cell
        return FiniteGsem(sig, cells)
    raise AssertionError("could not perturb the table")
