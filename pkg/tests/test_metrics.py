import numpy as np
import pytest

from data.model import GroundTruth
from metrics import score
from utils.exceptions import NumericDomainError


def test_worked_example():
    card = score([1, 2, 2, 2], GroundTruth(np.array([1, 1, 2, 2])))
    assert card.per_class[1]['f1'] == pytest.approx(2 / 3)
    assert card.per_class[2]['f1'] == pytest.approx(4 / 5)
    assert card.macro_f1 == pytest.approx(0.7333, abs=1e-4)
    assert card.micro_f1 == pytest.approx(0.75)
    assert card.n_evaluated == 4


def test_perfect_prediction():
    card = score([1, 3, 2], GroundTruth(np.array([1, 3, 2])))
    assert card.accuracy == card.micro_f1 == card.macro_f1 == 1.0


def test_constant_prediction():
    card = score([1, 1, 1, 1], GroundTruth(np.array([1, 1, 2, 2])))
    assert card.per_class[2]['f1'] == 0.0
    assert card.macro_f1 == pytest.approx(1 / 3)
    assert card.micro_f1 == pytest.approx(0.5)


def test_unknown_items_skipped():
    card = score([2, 1, 1], GroundTruth(np.array([0, 1, 1])))
    assert card.n_evaluated == 2
    assert card.accuracy == 1.0


def test_absent_class_flagged():
    card = score([1, 2], GroundTruth(np.array([1, 2])), n_classes=3)
    assert card.absent_classes == [3]
    assert card.macro_f1 == pytest.approx(2 / 3)


def test_micro_equals_accuracy():
    rng = np.random.default_rng(17)
    for _ in range(100):
        truth = rng.integers(1, 5, size=30)
        pred = rng.integers(1, 5, size=30)
        card = score(pred, GroundTruth(truth), n_classes=4)
        assert card.micro_f1 == pytest.approx(card.accuracy, abs=1e-15)


def test_permutation_invariant():
    truth = np.array([1, 2, 3, 3, 2, 1, 1])
    pred = np.array([1, 3, 3, 2, 2, 1, 2])
    relabel = np.array([0, 3, 1, 2])
    first = score(pred, GroundTruth(truth))
    second = score(relabel[pred], GroundTruth(relabel[truth]))
    assert first.macro_f1 == pytest.approx(second.macro_f1)
    assert first.micro_f1 == pytest.approx(second.micro_f1)


def test_no_known_truth():
    with pytest.raises(NumericDomainError):
        score([1, 2], GroundTruth(np.array([0, 0])))


def test_length_mismatch():
    with pytest.raises(NumericDomainError):
        score([1, 2, 1], GroundTruth(np.array([1, 2])))


def test_to_dict_keys():
    payload = score([1, 2], GroundTruth(np.array([1, 1]))).to_dict()
    assert set(payload['per_class']) == {'1', '2'}
