"""Compact wave scheme laboratory.

Thin wrapper around the compiled core: non-uniform meshes, the pencil
spectrum that decides whether the scheme grows, scalar modal analysis,
and the time stepper itself.
"""

from ._core import (
    Mesh,
    amplification,
    bump_experiment,
    charpoly_roots,
    growth_rate,
    necessary_conditions,
    quartic_bump,
    run_scheme,
    spectrum,
    step_ratio_range,
)

__all__ = [
    "Mesh",
    "amplification",
    "bump_experiment",
    "charpoly_roots",
    "growth_rate",
    "necessary_conditions",
    "quartic_bump",
    "run_scheme",
    "spectrum",
    "step_ratio_range",
]
