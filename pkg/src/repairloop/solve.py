"""Steady-state distribution of the closed (augmented) chain.

Two direct solvers for the global balance equations ``pi Q = 0``:

``"gth"`` (default)
    Grassmann-Taksar-Heyman state reduction.  Gaussian elimination on the
    generator in which every pivot is recomputed as the sum of the remaining
    off-diagonal rates, so no subtraction ever happens.  Small probabilities
    keep full relative accuracy, which the holding times and absorption
    probabilities of rarely visited states depend on.
``"gauss"``
    Transpose the generator, overwrite the equation of the fastest state
    with the normalisation row ``sum(pi) = 1`` and run Gaussian elimination
    with partial pivoting.  Accurate in norm only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .augment import AugmentedModel
from .errors import SolverFailure

DEFAULT_TOLERANCE = 1e-10
CLAMP = 1e-12


@dataclass(frozen=True)
class SteadyState:
    order: tuple[str, ...]
    pi: np.ndarray
    residual: float

    def __post_init__(self):
        self.pi.setflags(write=False)

    def as_dict(self) -> dict[str, float]:
        return {s: float(p) for s, p in zip(self.order, self.pi)}


def gauss_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` by Gaussian elimination with partial pivoting.

    Inputs are not modified.  Raises :class:`SolverFailure` on an exactly
    singular pivot.
    """
    a = np.array(a, dtype=float)
    x = np.array(b, dtype=float)
    n = len(x)
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            raise SolverFailure("singular balance system")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        lam = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(lam, a[k, k:])
        x[k + 1:] -= lam * x[k]
    if a[n - 1, n - 1] == 0.0:
        raise SolverFailure("singular balance system")
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def gth_solve(q: np.ndarray) -> np.ndarray:
    """Unnormalised stationary vector of an irreducible generator ``q``."""
    p = np.array(q, dtype=float)
    np.fill_diagonal(p, 0.0)
    n = p.shape[0]
    for k in range(n - 1, 0, -1):
        out = p[k, :k].sum()
        if not out > 0.0:
            raise SolverFailure("reducible chain: state has no exit to the remaining states")
        p[:k, k] /= out
        p[:k, :k] += np.outer(p[:k, k], p[k, :k])
    x = np.zeros(n)
    x[0] = 1.0
    for k in range(1, n):
        x[k] = x[:k] @ p[:k, k]
    return x


def _gauss_steady(q: np.ndarray) -> np.ndarray:
    n = q.shape[0]
    a = q.T.copy()
    # largest exit rate gives the best-conditioned equation to sacrifice
    r = int(np.argmax(-np.diag(q)))
    a[r, :] = 1.0
    b = np.zeros(n)
    b[r] = 1.0
    return gauss_solve(a, b)


SOLVERS = {"gth": gth_solve, "gauss": _gauss_steady}


def balance_residual(aug: AugmentedModel, candidate) -> float:
    """Infinity norm of ``candidate @ Q'`` for the augmented generator ``Q'``."""
    q = aug.generator().entries
    v = np.asarray(candidate, dtype=float)
    if v.shape != (q.shape[0],):
        raise ValueError(f"candidate has shape {v.shape}, expected ({q.shape[0]},)")
    return float(np.max(np.abs(v @ q)))


def steady_state(aug: AugmentedModel, tolerance: float = DEFAULT_TOLERANCE,
                 method: str = "gth") -> SteadyState:
    """Solve for the stationary distribution of ``aug``.

    Raises :class:`SolverFailure` if the system is singular, a probability
    comes out below ``-1e-12``, or the balance residual exceeds ``tolerance``.
    """
    try:
        solver = SOLVERS[method]
    except KeyError:
        raise ValueError(f"unknown solver {method!r}; choose from {sorted(SOLVERS)}") from None
    q = aug.generator().entries
    pi = solver(q)
    if not np.all(np.isfinite(pi)):
        raise SolverFailure("non-finite steady-state solution")
    if pi.min() < -CLAMP:
        raise SolverFailure(f"negative steady-state probability {pi.min():.3e}",
                            residual=float(np.max(np.abs(pi @ q))))
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()

    residual = float(np.max(np.abs(pi @ q)))
    if residual > tolerance:
        raise SolverFailure(f"balance residual above tolerance {tolerance:g}", residual)
    return SteadyState(aug.order, pi, residual)
