import numpy as np
import pytest
from sklearn.metrics import balanced_accuracy_score

from dcf.nn import ModelSpec, confidence, evaluate, init_state, predict_batch
from dcf.nn.layers import softmax
from dcf.synthdata import Item

SPEC = ModelSpec(input_side=12, stem_channels=3, stage_channels=(3,), blocks_per_stage=1, dtype="float64")


def _items(labels, seed=0):
    rng = np.random.default_rng(seed)
    return [
        Item(image=rng.integers(0, 256, (6, 14, 3), dtype=np.uint8), label=lab, timestamp=i)
        for i, lab in enumerate(labels)
    ]


def _constant_predictor(cls):
    # logits are (b0, b1) for every input: head zeroed except bias
    state = init_state(SPEC, 0)
    state.params["head.w"][:] = 0.0
    state.params["head.b"][:] = (1.0, -1.0) if cls == 0 else (-1.0, 1.0)
    return state


def test_constant_predictor_balanced_is_fifty():
    state = _constant_predictor(0)
    items = _items(["F1"] * 10 + ["F2"] * 2)
    f1, f2, bal = evaluate(state, items, "zero")
    assert (f1, f2, bal) == (100.0, 0.0, 50.0)
    # weighted accuracy would be 10/12; balanced must ignore imbalance
    items = _items(["F1"] * 2 + ["F2"] * 10)
    f1, f2, bal = evaluate(state, items, "zero")
    assert (f1, f2, bal) == (100.0, 0.0, 50.0)


def test_balanced_matches_sklearn_oracle():
    state = init_state(SPEC, 3)
    items = _items(["F1"] * 9 + ["F2"] * 5, seed=4)
    f1, f2, bal = evaluate(state, items, "grey")
    probs = predict_batch(state, [i.image for i in items], "grey")
    pred = np.where(probs[:, 1] > probs[:, 0], "F2", "F1")
    truth = np.array([i.label for i in items])
    assert bal == pytest.approx(100.0 * balanced_accuracy_score(truth, pred), abs=1e-9)
    assert bal == pytest.approx((f1 + f2) / 2.0, abs=1e-12)


def test_evaluate_rejects_missing_label():
    state = init_state(SPEC, 1)
    with pytest.raises(ValueError):
        evaluate(state, _items(["F1"] * 4), "zero")
    with pytest.raises(ValueError):
        evaluate(state, [], "zero")


def test_all_correct_is_hundred():
    items = _items(["F1"] * 3 + ["F2"] * 3)
    state = _constant_predictor(0)
    # force correctness by label-matched constant predictors per half
    f1_state = _constant_predictor(0)
    f1, _, _ = evaluate(f1_state, items, "zero")
    assert f1 == 100.0
    f2_state = _constant_predictor(1)
    _, f2, _ = evaluate(f2_state, items, "zero")
    assert f2 == 100.0


def test_confidence_equal_logits_breaks_to_f1():
    state = init_state(SPEC, 0)
    state.params["head.w"][:] = 0.0
    state.params["head.b"][:] = 0.0
    img = np.zeros((6, 14, 3), np.uint8)
    label, prob = confidence(state, img, "zero")
    assert label == "F1"
    assert prob == pytest.approx(0.5, abs=1e-12)


def test_confidence_frozen_value():
    state = _constant_predictor(0)
    state.params["head.b"][:] = (2.0, 0.0)
    img = np.zeros((6, 14, 3), np.uint8)
    label, prob = confidence(state, img, "zero")
    assert label == "F1"
    assert prob == pytest.approx(np.e**2 / (1 + np.e**2), abs=1e-12)


def test_confidence_always_at_least_half():
    state = init_state(SPEC, 9)
    rng = np.random.default_rng(5)
    for _ in range(10):
        img = rng.integers(0, 256, (7, 18, 3), dtype=np.uint8)
        _, prob = confidence(state, img, "reflection")
        assert 0.5 <= prob < 1.0


def test_predict_batch_chunking_consistent():
    state = init_state(SPEC, 11)
    rng = np.random.default_rng(6)
    imgs = [rng.integers(0, 256, (6, 15, 3), dtype=np.uint8) for _ in range(70)]
    probs = predict_batch(state, imgs, "zero")
    assert probs.shape == (70, 2)
    solo = predict_batch(state, imgs[64:66], "zero")
    assert np.abs(probs[64:66] - solo).max() < 1e-12
