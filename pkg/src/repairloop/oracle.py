"""Independent checks of the repair-loop results.

Two routes that share nothing with :mod:`repairloop.solve` beyond the model
types:

* the classical fundamental matrix ``N = (-Q_T)^-1`` of the transient block,
  factored with LAPACK (``numpy.linalg.solve``), and
* a Monte Carlo simulator of the jump chain.

Random streams
--------------
Trajectory ``k`` under seed ``s`` draws from its own Philox4x64-10 stream
(numpy's ``Philox`` bit generator) with the 128-bit key ``(s mod 2**64, k)``
and counter starting at zero.  Raw 64-bit outputs ``x`` become uniforms on
the open interval (0, 1) via ``((x >> 11) + 0.5) * 2**-53``.  Each jump
consumes two uniforms in order: ``u1`` for the holding time ``-ln(u1) / rate``
and ``u2`` for the successor, chosen as the first transition (in model
order) whose cumulative probability exceeds ``u2``.  Since streams depend
only on ``(seed, k)``, any split of the trajectories across workers gives
bit-identical estimates.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ModelValidationError, OracleFailure
from .model import CtmcModel, StateClassification, generator_matrix

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 100_000

_MASK64 = (1 << 64) - 1
_BUFFER = 64


@dataclass(frozen=True)
class FundamentalResult:
    mttf: float
    tau: dict[str, float]
    rho: dict[str, float]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    absorption_counts: dict[str, int]

    def absorption_fraction(self, state: str) -> float:
        return self.absorption_counts.get(state, 0) / self.samples


def _require_finite(classification: StateClassification) -> None:
    if classification.trapped_transient:
        names = ", ".join(sorted(classification.trapped_transient))
        raise ModelValidationError(
            f"states [{names}] cannot reach any absorbing state; MTTF is infinite",
            code="infinite-mttf")


def fundamental_matrix_mttf(model: CtmcModel,
                            classification: StateClassification) -> FundamentalResult:
    """Mean time to absorption from the fundamental matrix of the transient block."""
    _require_finite(classification)
    transient = [s for s in model.states if s in classification.reachable_transient]
    absorbing = [s for s in model.states if s in classification.absorbing]
    q = generator_matrix(model).entries
    ti = [model.index(s) for s in transient]
    fi = [model.index(s) for s in absorbing]
    q_t = q[np.ix_(ti, ti)]
    r = q[np.ix_(ti, fi)]

    e = np.zeros(len(ti))
    e[transient.index(model.initial)] = 1.0
    try:
        # row of N for the initial state: N^T e_init = (-Q_T)^T \ e_init
        row = np.linalg.solve(-q_t.T, e)
    except np.linalg.LinAlgError as exc:
        raise OracleFailure(f"singular transient block: {exc}") from None
    if not np.all(np.isfinite(row)):
        raise OracleFailure("non-finite fundamental matrix row")

    rho = row @ r
    return FundamentalResult(
        mttf=float(row.sum()),
        tau={s: float(v) for s, v in zip(transient, row)},
        rho={s: float(v) for s, v in zip(absorbing, rho)},
    )


def trajectory_stream(seed: int, index: int) -> np.random.Philox:
    return np.random.Philox(key=(seed & _MASK64) | (index << 64))


def _jump_tables(model: CtmcModel, classification: StateClassification):
    """Per-state (exit rate, successor indices, cumulative probabilities)."""
    succ: dict[str, list] = {s: [] for s in model.states}
    for t in model.transitions:
        succ[t.source].append((t.target, t.rate))
    tables = []
    for s in model.states:
        out = succ[s]
        if not out:
            tables.append(None)
            continue
        total = math.fsum(r for _, r in out)
        cum, acc = [], 0.0
        for _, r in out:
            acc += r
            cum.append(acc / total)
        cum[-1] = 1.0
        tables.append((total, [model.index(t) for t, _ in out], cum))
    return tables


def _simulate_range(tables, start_index: int, seed: int, first: int, stop: int):
    times = []
    finals = []
    scale = 2.0 ** -53
    for k in range(first, stop):
        raw = trajectory_stream(seed, k).random_raw
        buf = raw(_BUFFER).tolist()
        pos = 0
        state = start_index
        elapsed = 0.0
        while True:
            entry = tables[state]
            if entry is None:
                break
            if pos + 2 > len(buf):
                buf = raw(_BUFFER).tolist()
                pos = 0
            u1 = ((buf[pos] >> 11) + 0.5) * scale
            u2 = ((buf[pos + 1] >> 11) + 0.5) * scale
            pos += 2
            rate, targets, cum = entry
            elapsed += -math.log(u1) / rate
            j = 0
            while cum[j] <= u2:
                j += 1
            state = targets[j]
        times.append(elapsed)
        finals.append(state)
    return times, finals


def monte_carlo_mttf(model: CtmcModel, classification: StateClassification,
                     samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                     workers: int = 1) -> McEstimate:
    """Estimate the MTTF by simulating ``samples`` trajectories from the initial state.

    ``workers > 1`` splits the trajectories over processes; the result is
    identical to a serial run.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    _require_finite(classification)
    tables = _jump_tables(model, classification)
    start = model.index(model.initial)

    if workers <= 1:
        times, finals = _simulate_range(tables, start, seed, 0, samples)
    else:
        bounds = np.linspace(0, samples, workers + 1).astype(int)
        times, finals = [], []
        with ProcessPoolExecutor(workers) as pool:
            jobs = [pool.submit(_simulate_range, tables, start, seed, int(a), int(b))
                    for a, b in zip(bounds[:-1], bounds[1:])]
            for job in jobs:
                t, f = job.result()
                times.extend(t)
                finals.extend(f)

    arr = np.array(times)
    mean = math.fsum(times) / samples
    if samples > 1:
        std = math.sqrt(math.fsum((arr - mean) ** 2) / (samples - 1))
        std_error = std / math.sqrt(samples)
    else:
        std_error = 0.0

    counts = {s: 0 for s in model.states if s in classification.absorbing}
    for idx in finals:
        counts[model.states[idx]] += 1
    return McEstimate(mean=mean, std_error=std_error, samples=samples,
                      absorption_counts=counts)
