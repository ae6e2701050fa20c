"""Closing an absorbing chain with repair transitions back to the initial state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelValidationError
from .model import (CtmcModel, RateMatrix, StateClassification, Transition,
                    _reach, generator_matrix)

DEFAULT_MU = 1.0
# Ratio between mu and the geometric mean of the base rates beyond which the
# solve is flagged as potentially ill-conditioned.
CONDITIONING_RATIO = 1e6


@dataclass(frozen=True)
class AugmentedModel:
    base: CtmcModel
    mu: float
    repair_transitions: tuple[Transition, ...]

    @property
    def order(self) -> tuple[str, ...]:
        return self.base.states

    @property
    def transitions(self) -> tuple[Transition, ...]:
        return self.base.transitions + self.repair_transitions

    def generator(self) -> RateMatrix:
        return generator_matrix(
            CtmcModel(self.base.states, self.base.initial, self.transitions))


def augment_with_repairs(model: CtmcModel, classification: StateClassification,
                         mu: float = DEFAULT_MU) -> AugmentedModel:
    """Add one rate-``mu`` transition from every absorbing state to the initial state.

    Unreachable states are dropped first.  The result is checked to be
    irreducible by graph search in both directions from the initial state.
    """
    if not (isinstance(mu, (int, float)) and math.isfinite(mu) and mu > 0):
        raise ModelValidationError(f"repair rate must be positive and finite, got {mu!r}",
                                   code="invalid-repair-rate")
    if classification.trapped_transient:
        names = ", ".join(sorted(classification.trapped_transient))
        raise ModelValidationError(
            f"states [{names}] cannot reach any absorbing state; MTTF is infinite",
            code="infinite-mttf")

    base = model.restrict(classification.reachable_transient | classification.absorbing)
    repairs = tuple(Transition(f, base.initial, float(mu))
                    for f in base.states if f in classification.absorbing)
    aug = AugmentedModel(base, float(mu), repairs)

    succ = {s: [] for s in base.states}
    pred = {s: [] for s in base.states}
    for t in aug.transitions:
        succ[t.source].append(t.target)
        pred[t.target].append(t.source)
    everything = set(base.states)
    if _reach([base.initial], succ) != everything or _reach([base.initial], pred) != everything:
        raise ModelValidationError("augmented chain is not irreducible; MTTF is infinite",
                                   code="infinite-mttf")
    return aug


def conditioning_warning(model: CtmcModel, mu: float) -> str | None:
    """Warn when ``mu`` is far (more than 1e6x) from the geometric mean of the base rates."""
    rates = [t.rate for t in model.transitions]
    if not rates:
        return None
    gmean = float(np.exp(np.mean(np.log(rates))))
    ratio = max(mu / gmean, gmean / mu)
    if ratio > CONDITIONING_RATIO:
        return (f"repair rate mu={mu!r} differs from the geometric mean of the "
                f"model rates ({gmean:.6g}) by a factor of {ratio:.3g}; "
                "the steady-state solve may lose accuracy")
    return None
