# Copyright 2026 The synaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import synaudit


def test_array_files_interoperate_with_numpy(tmp_path):
    a = np.arange(24, dtype=np.float32).reshape(2, 3, 4) / 7
    path = tmp_path / "a.npy"
    synaudit.write_array(a, path)
    np.testing.assert_array_equal(np.load(path), a)
    np.save(tmp_path / "b.npy", a.astype(np.float64))
    np.testing.assert_array_equal(synaudit.read_array(tmp_path / "b.npy"), a)


def test_truncated_array_raises(tmp_path):
    path = tmp_path / "bad.npy"
    np.save(path, np.zeros(10, dtype=np.float32))
    path.write_bytes(path.read_bytes()[:-4])
    with pytest.raises(synaudit.SynauditError, match="TruncatedPayload"):
        synaudit.read_array(path)


def test_leaky_fixture_copies_training_samples():
    f = synaudit.make_fixture("leaky", train=20, val=10, test=10, epsilon=0.0,
                              shape=(1, 4, 4), seed=3)
    synth = f["synthetic"]
    assert synth["pixels"].shape == (24, 1, 4, 4)
    np.testing.assert_array_equal(synth["pixels"][:20], f["train"]["pixels"])
    assert synth["provenance"][0] == "leaky:copy-of:" + f["train"]["ids"][0]


def test_pairwise_attack_finds_copies():
    f = synaudit.make_fixture("leaky", train=30, val=30, test=30, epsilon=0.0,
                              shape=(1, 4, 4), seed=5)
    rows = lambda split: f[split]["pixels"].reshape(len(f[split]["ids"]), -1)
    cands = np.vstack([rows("train"), rows("val")])
    dist, _ = synaudit.min_distances(cands, rows("synthetic"))
    assert max(dist[:30]) == 0.0
    origins = ["train"] * 30 + ["val"] * 30
    table = synaudit.cutoff_table(dist, origins, [30], "smallest")
    assert table[0]["train"] == 1.0
    assert synaudit.attack_auc(dist, origins) == 1.0


def test_roc_matches_rank_statistic():
    scores = [0.1, 0.4, 0.35, 0.8]
    labels = [0, 0, 1, 1]
    _, _, auc = synaudit.roc_curve(scores, labels)
    assert auc == pytest.approx(0.75)
    assert synaudit.auc_rank(scores, labels) == pytest.approx(0.75)


def test_embedding_components_are_orthonormal():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 12))
    model = synaudit.fit_embedding(x, 5)
    c = model.components
    np.testing.assert_allclose(c @ c.T, np.eye(5), atol=1e-10)
    assert model.transform(x).shape == (40, 5)


def test_morph_schedule_endpoints():
    steps = synaudit.morph_schedule(0, 2, 4)
    assert steps[0] == synaudit.one_hot(0)
    assert steps[-1] == synaudit.one_hot(2)
    assert synaudit.morph_step(0, 2, 2, 1) == [0.5, 0.0, 0.5]


def test_bca_interval_brackets_the_mean():
    rng = np.random.default_rng(1)
    data = list(rng.normal(size=50))
    ci = synaudit.bca_interval(data, lambda v: sum(v) / len(v), n_resamples=500, seed=2)
    assert ci["lower"] < ci["estimate"] < ci["upper"]
    assert synaudit.normal_quantile(0.975) == pytest.approx(1.959963985, abs=1e-9)


def test_classifier_learns_separable_blobs():
    rng = np.random.default_rng(2)
    x = np.vstack([rng.normal(-2, 0.5, size=(50, 2)), rng.normal(2, 0.5, size=(50, 2))])
    y = [0] * 50 + [1] * 50
    model = synaudit.train_classifier(x, y, learning_rate=0.1, seed=4)
    assert model.loss_history[-1] < model.loss_history[0]
    assert model.loss_history[0] == pytest.approx(math.log(3))
    p = model.predict_proba(x)
    assert np.mean(np.argmax(p, axis=1) == np.array(y)) >= 0.95
