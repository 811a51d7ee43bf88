"""Causal models that map interventions directly to sets of outcomes."""

from .core import (
    Assignment,
    EMPTY_INTERVENTION,
    FiniteGsem,
    FiniteSem,
    Intervention,
    Signature,
    UNIVERSAL,
    compose,
    equivalent,
    gsem_intervene,
    gsem_outcomes,
    sem_intervene,
    sem_is_acyclic,
    sem_outcomes,
    sem_to_gsem,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "EMPTY_INTERVENTION",
    "FiniteGsem",
    "FiniteSem",
    "Intervention",
    "Signature",
    "UNIVERSAL",
    "compose",
    "equivalent",
    "gsem_intervene",
    "gsem_outcomes",
    "sem_intervene",
    "sem_is_acyclic",
    "sem_outcomes",
    "sem_to_gsem",
    "__version__",
]
