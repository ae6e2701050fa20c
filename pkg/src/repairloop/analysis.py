"""MTTF and related measures from the steady state of the repair-loop chain."""

from __future__ import annotations

from dataclasses import dataclass, field

from .augment import DEFAULT_MU, augment_with_repairs, conditioning_warning
from .errors import DegenerateAvailability
from .model import CtmcModel, StateClassification, classify_states
from .solve import DEFAULT_TOLERANCE, SteadyState, steady_state

REPAIR_LOOP = "repair-loop"
FUNDAMENTAL_MATRIX = "fundamental-matrix"
MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class AnalysisReport:
    mttf: float
    mttr: float
    availability: float
    unavailability: float
    mu: float
    holding_times: dict[str, float]
    absorption_probabilities: dict[str, float]
    method: str = REPAIR_LOOP
    residual: float = 0.0
    warnings: tuple[str, ...] = field(default=())


def _split(pi: SteadyState, classification: StateClassification):
    up = [(s, float(p)) for s, p in zip(pi.order, pi.pi)
          if s in classification.reachable_transient]
    down = [(s, float(p)) for s, p in zip(pi.order, pi.pi)
            if s in classification.absorbing]
    return up, down


def availability(pi: SteadyState, classification: StateClassification) -> tuple[float, float]:
    """Return ``(A', U')``: steady-state mass on operational and on fault states.

    Both sums are taken directly over the probability vector, so a tiny
    ``U'`` keeps its relative accuracy instead of being formed as ``1 - A'``.
    """
    up, down = _split(pi, classification)
    return sum(p for _, p in up), sum(p for _, p in down)


def mttr(mu: float) -> float:
    if mu <= 0:
        raise ValueError("mu must be positive")
    return 1.0 / mu


def mttf_from_availability(avail: float, mu: float, unavail: float | None = None) -> float:
    """MTTF of the original chain from the availability of the closed chain.

    Inverts ``A' = MTTF / (MTTF + 1/mu)``.  Pass ``unavail`` when it was
    summed independently; otherwise ``1 - avail`` is used.
    """
    if unavail is None:
        unavail = 1.0 - avail
    if not (0.0 < avail < 1.0) or unavail <= 0.0:
        raise DegenerateAvailability(
            f"availability {avail!r} outside (0, 1); no mass on fault states")
    return avail * mttr(mu) / unavail


def holding_times(pi: SteadyState, classification: StateClassification,
                  mttf: float) -> dict[str, float]:
    up, _ = _split(pi, classification)
    a = sum(p for _, p in up)
    return {s: mttf * p / a for s, p in up}


def absorption_probabilities(pi: SteadyState,
                             classification: StateClassification) -> dict[str, float]:
    _, down = _split(pi, classification)
    u = sum(p for _, p in down)
    return {s: p / u for s, p in down}


def analyze(model: CtmcModel, mu: float = DEFAULT_MU,
            tolerance: float = DEFAULT_TOLERANCE, solver: str = "gth") -> AnalysisReport:
    """Run the full repair-loop pipeline on ``model``.

    classify -> augment -> steady state -> A', U' -> MTTF, MTTR, tau, rho.
    Every upstream error propagates unchanged.
    """
    classification = classify_states(model)
    aug = augment_with_repairs(model, classification, mu)
    pi = steady_state(aug, tolerance, solver)
    a, u = availability(pi, classification)
    mttf = mttf_from_availability(a, aug.mu, u)

    warnings = []
    if classification.unreachable:
        warnings.append("dropped unreachable states: "
                        + ", ".join(sorted(classification.unreachable)))
    w = conditioning_warning(aug.base, aug.mu)
    if w:
        warnings.append(w)

    return AnalysisReport(
        mttf=mttf,
        mttr=mttr(aug.mu),
        availability=a,
        unavailability=u,
        mu=aug.mu,
        holding_times=holding_times(pi, classification, mttf),
        absorption_probabilities=absorption_probabilities(pi, classification),
        method=REPAIR_LOOP,
        residual=pi.residual,
        warnings=tuple(warnings),
    )
