import pytest

from repairloop.augment import augment_with_repairs, conditioning_warning
from repairloop.errors import ModelValidationError
from repairloop.model import CtmcModel, Transition, classify_states


def test_single_repair(single):
    aug = augment_with_repairs(single, classify_states(single), 1.0)
    assert aug.repair_transitions == (Transition("s1", "s0", 1.0),)
    assert aug.generator().entries.tolist() == [[-2, 2], [1, -1]]


def test_one_repair_per_fault_state(competing):
    aug = augment_with_repairs(competing, classify_states(competing), 1.0)
    assert set(aug.repair_transitions) == {Transition("s1", "s0", 1.0), Transition("s2", "s0", 1.0)}


def test_closed_chain_and_base_untouched(competing):
    aug = augment_with_repairs(competing, classify_states(competing), 2.5)
    q = aug.generator().entries
    assert abs(q.sum(axis=1)).max() == 0
    assert all(abs(row).sum() > 0 for row in q)
    assert aug.base.transitions == competing.transitions


def test_unreachable_states_are_dropped():
    m = CtmcModel.from_edges(["s0", "s1", "s9"], "s0", [("s0", "s1", 1), ("s9", "s1", 1)])
    aug = augment_with_repairs(m, classify_states(m))
    assert aug.order == ("s0", "s1")
    assert aug.mu == 1.0


def test_trapped_is_infinite_mttf(trapped):
    with pytest.raises(ModelValidationError, match="infinite-mttf"):
        augment_with_repairs(trapped, classify_states(trapped))


@pytest.mark.parametrize("mu", [0.0, -1.0, float("inf"), float("nan")])
def test_invalid_mu(single, mu):
    with pytest.raises(ModelValidationError, match="invalid-repair-rate"):
        augment_with_repairs(single, classify_states(single), mu)


def test_conditioning_warning(series):
    # geometric mean of (1, 2) is sqrt(2)
    assert conditioning_warning(series, 1.0) is None
    assert conditioning_warning(series, 1e6) is None
    assert "geometric mean" in conditioning_warning(series, 1e7)
    assert conditioning_warning(series, 1e-7) is not None
