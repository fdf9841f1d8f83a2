"""Tolerance constants shared by the numerical routines."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-12
    derived: float = 1e-9
    group: float = 1e-10
    degenerate_gram: float = 1e-8
    flat: float = 1e-10
    positive: float = 1e-6


TOL = Tolerances()
