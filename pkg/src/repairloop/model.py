"""Absorbing CTMC models: parsing, validation, classification, generators."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ModelSyntaxError, ModelValidationError

_TOP_LEVEL_KEYS = {"states", "initial", "transitions"}
_TRANSITION_KEYS = {"from", "to", "rate"}


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    rate: float


@dataclass(frozen=True)
class CtmcModel:
    """An absorbing chain: named states, an initial state and positive rates.

    Construction validates every invariant, so any instance in hand is a
    valid model.  Use :func:`parse_model` for documents and
    :meth:`from_edges` for quick programmatic construction.
    """

    states: tuple[str, ...]
    initial: str
    transitions: tuple[Transition, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        index = {}
        for i, name in enumerate(self.states):
            if not isinstance(name, str) or not name:
                raise ModelValidationError(
                    f"state name must be a non-empty string, got {name!r}",
                    code="invalid-state", location=f"states[{i}]")
            if name in index:
                raise ModelValidationError(
                    f"duplicate state {name!r}", code="duplicate-state",
                    location=f"states[{i}]")
            index[name] = i
        object.__setattr__(self, "_index", index)

        if self.initial not in index:
            raise ModelValidationError(
                f"initial state {self.initial!r} is not a declared state",
                code="unknown-state", location="initial")

        seen = set()
        for k, t in enumerate(self.transitions):
            where = f"transitions[{k}]"
            for name, part in ((t.source, "from"), (t.target, "to")):
                if name not in index:
                    raise ModelValidationError(
                        f"unknown state {name!r}", code="unknown-state",
                        location=f"{where}.{part}")
            if t.source == t.target:
                raise ModelValidationError(
                    f"self-loop on state {t.source!r}", code="self-loop",
                    location=where)
            if not (isinstance(t.rate, (int, float)) and math.isfinite(t.rate)
                    and t.rate > 0):
                raise ModelValidationError(
                    f"non-positive rate {t.rate!r} on {t.source}->{t.target}",
                    code="non-positive-rate", location=f"{where}.rate")
            if (t.source, t.target) in seen:
                raise ModelValidationError(
                    f"duplicate transition {t.source}->{t.target}",
                    code="duplicate-transition", location=where)
            seen.add((t.source, t.target))

    @classmethod
    def from_edges(cls, states: Sequence[str], initial: str,
                   edges: Iterable[tuple[str, str, float]]) -> "CtmcModel":
        return cls(tuple(states), initial,
                   tuple(Transition(a, b, float(r)) for a, b, r in edges))

    def index(self, state: str) -> int:
        return self._index[state]

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {s: [] for s in self.states}
        for t in self.transitions:
            out[t.source].append(t.target)
        return out

    def restrict(self, keep: Iterable[str]) -> "CtmcModel":
        """Sub-model on ``keep`` (original order), dropping dangling transitions."""
        keep = set(keep)
        return CtmcModel(
            tuple(s for s in self.states if s in keep),
            self.initial,
            tuple(t for t in self.transitions
                  if t.source in keep and t.target in keep),
        )

    def scaled(self, factor: float) -> "CtmcModel":
        return CtmcModel(self.states, self.initial,
                         tuple(Transition(t.source, t.target, t.rate * factor)
                               for t in self.transitions))


@dataclass(frozen=True)
class StateClassification:
    reachable_transient: frozenset[str]
    absorbing: frozenset[str]
    unreachable: frozenset[str]
    trapped_transient: frozenset[str]

    @property
    def has_finite_mttf(self) -> bool:
        return not self.trapped_transient

    @property
    def reachable(self) -> frozenset[str]:
        return self.reachable_transient | self.absorbing | self.trapped_transient


@dataclass(frozen=True)
class RateMatrix:
    order: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)


def _syntax(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise ModelSyntaxError(message, location)


def parse_model(document: str | bytes) -> CtmcModel:
    """Parse a JSON model document into a validated :class:`CtmcModel`.

    Structural problems (invalid JSON, missing or unknown keys, wrong value
    types) raise :class:`ModelSyntaxError`; well-formed documents that break
    a model invariant raise :class:`ModelValidationError`.  Both carry the
    offending location.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelSyntaxError(f"document is not UTF-8: {exc}") from None
    try:
        data = json.loads(document, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    except ValueError as exc:
        raise ModelSyntaxError(str(exc)) from None

    _syntax(isinstance(data, dict), "document must be a JSON object", "$")
    unknown = sorted(set(data) - _TOP_LEVEL_KEYS)
    _syntax(not unknown, f"unknown top-level key(s) {unknown}", "$")
    for key in ("states", "initial"):
        _syntax(key in data, f"missing required key {key!r}", "$")

    states = data["states"]
    _syntax(isinstance(states, list), "'states' must be an array", "states")
    for i, s in enumerate(states):
        _syntax(isinstance(s, str), "state name must be a string", f"states[{i}]")
    _syntax(isinstance(data["initial"], str), "'initial' must be a string", "initial")

    raw = data.get("transitions", [])
    _syntax(isinstance(raw, list), "'transitions' must be an array", "transitions")
    transitions = []
    for k, item in enumerate(raw):
        where = f"transitions[{k}]"
        _syntax(isinstance(item, dict), "transition must be an object", where)
        extra = sorted(set(item) - _TRANSITION_KEYS)
        _syntax(not extra, f"unknown key(s) {extra}", where)
        missing = sorted(_TRANSITION_KEYS - set(item))
        _syntax(not missing, f"missing key(s) {missing}", where)
        for part in ("from", "to"):
            _syntax(isinstance(item[part], str), f"'{part}' must be a string",
                    f"{where}.{part}")
        rate = item["rate"]
        _syntax(isinstance(rate, (int, float)) and not isinstance(rate, bool),
                "'rate' must be a number", f"{where}.rate")
        transitions.append(Transition(item["from"], item["to"], float(rate)))

    return CtmcModel(tuple(states), data["initial"], tuple(transitions))


def _reject_constant(name: str):
    raise ValueError(f"non-standard JSON constant {name}")


def dump_model(model: CtmcModel) -> str:
    """Serialize ``model`` to the document format read by :func:`parse_model`."""
    return json.dumps({
        "states": list(model.states),
        "initial": model.initial,
        "transitions": [{"from": t.source, "to": t.target, "rate": t.rate}
                        for t in model.transitions],
    }, indent=2)


def _reach(start: Iterable[str], adjacency: dict[str, list[str]]) -> set[str]:
    seen = set(start)
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        for nxt in adjacency[s]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def classify_states(model: CtmcModel) -> StateClassification:
    """Partition the states by reachability from the initial state.

    Raises ``initial-state-absorbing`` if the initial state has no exits and
    ``no-absorbing-state`` if no absorbing state is reachable.  Reachable
    states that cannot reach any absorbing state are reported as trapped;
    deciding what to do about them is left to the caller.
    """
    succ = model.successors()
    if not succ[model.initial]:
        raise ModelValidationError(
            f"initial state {model.initial!r} is absorbing; MTTF is 0 by definition",
            code="initial-state-absorbing", location="initial")

    reachable = _reach([model.initial], succ)
    absorbing = {s for s in reachable if not succ[s]}
    if not absorbing:
        raise ModelValidationError(
            "no absorbing state is reachable from the initial state",
            code="no-absorbing-state")

    pred: dict[str, list[str]] = {s: [] for s in model.states}
    for t in model.transitions:
        pred[t.target].append(t.source)
    escaping = _reach(absorbing, pred)
    trapped = reachable - escaping

    return StateClassification(
        reachable_transient=frozenset(reachable - absorbing - trapped),
        absorbing=frozenset(absorbing),
        unreachable=frozenset(set(model.states) - reachable),
        trapped_transient=frozenset(trapped),
    )


def generator_matrix(model: CtmcModel, order: Sequence[str] | None = None) -> RateMatrix:
    order = tuple(model.states if order is None else order)
    if sorted(order) != sorted(model.states):
        raise ValueError("order must be a permutation of the model states")
    pos = {s: i for i, s in enumerate(order)}
    q = np.zeros((len(order), len(order)))
    for t in model.transitions:
        q[pos[t.source], pos[t.target]] = t.rate
    # correctly rounded row sums keep the diagonal exact to half an ulp
    np.fill_diagonal(q, [-math.fsum(row) for row in q])
    return RateMatrix(order, q)
