import numpy as np
import pytest

from dcf.nn import ResidualNetClassifier


def _separable_data(n_per_class=10, seed=0):
    rng = np.random.default_rng(seed)
    X, y = [], []
    for i in range(n_per_class):
        for label, base in (("F1", 190), ("F2", 70)):
            img = np.clip(rng.normal(base, 15, (8, 20, 3)), 0, 255).astype(np.uint8)
            X.append(img)
            y.append(label)
    return X, y


def _clf(**kw):
    base = dict(
        input_side=16,
        stem_channels=3,
        stage_channels=(3, 4),
        epochs=12,
        learning_rate=1e-2,
        batch_size=8,
        augment=False,
        seed=0,
    )
    base.update(kw)
    return ResidualNetClassifier(**base)


def test_fit_predict_score():
    X, y = _separable_data()
    clf = _clf().fit(X, y)
    assert hasattr(clf, "state_")
    assert list(clf.classes_) == ["F1", "F2"]
    preds = clf.predict(X)
    assert set(preds) <= {"F1", "F2"}
    assert clf.score(X, y) > 0.9


def test_predict_proba_shape_and_sum():
    X, y = _separable_data(6)
    clf = _clf(epochs=2).fit(X, y)
    probs = clf.predict_proba(X)
    assert probs.shape == (len(X), 2)
    assert np.abs(probs.sum(axis=1) - 1).max() < 1e-9


def test_unfitted_raises():
    with pytest.raises(RuntimeError):
        _clf().predict_proba([np.zeros((4, 8, 3), np.uint8)])


def test_rejects_unknown_labels():
    X, _ = _separable_data(4)
    with pytest.raises(ValueError):
        _clf().fit(X, ["cat"] * len(X))


def test_get_set_params_roundtrip():
    clf = _clf()
    params = clf.get_params()
    assert params["padding"] == "reflection"
    clf.set_params(padding="zero", epochs=1)
    assert clf.padding == "zero" and clf.epochs == 1


def test_fit_is_seed_deterministic():
    X, y = _separable_data(6)
    c1 = _clf(epochs=3).fit(X, y)
    c2 = _clf(epochs=3).fit(X, y)
    for k in c1.state_.params:
        assert np.array_equal(c1.state_.params[k], c2.state_.params[k])
