"""End-to-end scheme and pathway searches on tiny synthetic inputs."""

import json

import numpy as np
import pytest

from dcf.nn import ModelSpec, TrainConfig, load_checkpoint, train_run
from dcf.pathways import (
    PSA_CSV,
    PSA_REPORT,
    TPS_REPORT,
    TrainJob,
    aggregate,
    choose_best,
    execute_job,
    map_jobs,
    read_runs_csv,
    resolve_workers,
    run_psa,
    run_tps,
    tps_csv_name,
)
from dcf.synthdata import Item

SPEC = ModelSpec(
    input_side=16, stem_channels=4, stage_channels=(4,), blocks_per_stage=1,
    dtype="float32",
)
CFG = TrainConfig(learning_rate=1e-3, batch_size=8, epochs=1, augment=False)


def _items(n, seed, bright=180, dark=90):
    rng = np.random.default_rng(seed)
    items = []
    for i in range(n):
        label = "F1" if i % 2 == 0 else "F2"
        base = bright if label == "F1" else dark
        img = np.clip(rng.normal(base, 25, size=(10, 20, 3)), 0, 255).astype(np.uint8)
        items.append(Item(image=img, label=label, timestamp=i))
    return items


def _splits(seed, bright=180, dark=90):
    return {
        "train": _items(12, seed, bright, dark),
        "val": _items(4, seed + 100, bright, dark),
        "test": _items(6, seed + 200, bright, dark),
    }


@pytest.fixture(scope="module")
def splits_a():
    return _splits(0)


@pytest.fixture(scope="module")
def splits_b():
    # second collection shifts both label means
    return _splits(50, bright=150, dark=70)


class TestRunPsa:
    def test_report_consistency(self, tmp_path, splits_a, splits_b):
        res = run_psa(
            SPEC, CFG, splits_a, splits_b, tmp_path,
            base_seed=3, schemes=("zero", "reflection"), workers=1,
        )
        assert res.seeds == (4, 5, 6, 7, 8)
        assert [(r.setting, r.run) for r in res.records] == [
            (s, r) for s in ("zero", "reflection") for r in range(1, 6)
        ]
        for rec in res.records:
            rec.validate()

        # chosen entries must be re-derivable from the records
        aggs = {
            s: aggregate([r for r in res.records if r.setting == s])
            for s in res.schemes
        }
        assert res.aggregates == aggs
        assert res.chosen_scheme == choose_best(aggs[s] for s in res.schemes)
        assert res.chosen_run == aggs[res.chosen_scheme].peak_run
        peak_rec = next(
            r
            for r in res.records
            if r.setting == res.chosen_scheme and r.run == res.chosen_run
        )
        assert res.chosen_checkpoint == peak_rec.checkpoint

        # shared backbones: run r rows point at one checkpoint across schemes
        for r in range(1, 6):
            paths = {rec.checkpoint for rec in res.records if rec.run == r}
            assert paths == {f"psa/backbone_run{r}.ckpt"}
            assert (tmp_path / f"psa/backbone_run{r}.ckpt").is_file()

        state = load_checkpoint(tmp_path / res.chosen_checkpoint)
        assert state.spec == SPEC

        payload = json.loads((tmp_path / PSA_REPORT).read_text())
        assert set(payload) == {"config", "seeds", "records", "aggregates", "chosen"}
        assert payload["seeds"] == [4, 5, 6, 7, 8]
        assert payload["chosen"]["scheme"] == res.chosen_scheme
        assert payload["records"] == [r.to_dict() for r in res.records]

        rows = read_runs_csv(tmp_path / PSA_CSV)
        assert len(rows) == 10
        for row, rec in zip(rows, res.records):
            assert row["setting"] == rec.setting
            assert row["run"] == rec.run
            assert row["balanced_A"] == rec.balanced_a
            assert row["balanced_B"] == rec.balanced_b

    def test_replay_is_byte_identical(self, tmp_path, splits_a, splits_b):
        kw = dict(base_seed=1, schemes=("zero",), workers=1)
        run_psa(SPEC, CFG, splits_a, splits_b, tmp_path / "one", **kw)
        run_psa(SPEC, CFG, splits_a, splits_b, tmp_path / "two", **kw)
        for name in (PSA_REPORT, PSA_CSV, "psa/backbone_run1.ckpt"):
            a = (tmp_path / "one" / name).read_bytes()
            b = (tmp_path / "two" / name).read_bytes()
            assert a == b, name

    def test_train_per_scheme_backbones(self, tmp_path, splits_a, splits_b):
        res = run_psa(
            SPEC, CFG, splits_a, splits_b, tmp_path,
            schemes=("zero", "white"), train_per_scheme=True, workers=1,
        )
        for scheme in ("zero", "white"):
            for r in range(1, 6):
                rel = f"psa/{scheme}_run{r}.ckpt"
                assert (tmp_path / rel).is_file()
            recs = [rec for rec in res.records if rec.setting == scheme]
            assert [rec.checkpoint for rec in recs] == [
                f"psa/{scheme}_run{r}.ckpt" for r in range(1, 6)
            ]

    def test_partial_report_on_failure(self, tmp_path, splits_a, splits_b):
        broken = dict(splits_b)
        broken["test"] = []
        with pytest.raises(ValueError):
            run_psa(SPEC, CFG, splits_a, broken, tmp_path, workers=1)
        payload = json.loads((tmp_path / PSA_REPORT).read_text())
        assert payload["chosen"] is None
        assert "failed" in payload and payload["failed"]["error"]

    def test_unknown_scheme_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="unknown padding scheme"):
            run_psa(SPEC, CFG, splits_a, splits_b, tmp_path, schemes=("mirror",))

    def test_duplicate_scheme_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="duplicate"):
            run_psa(SPEC, CFG, splits_a, splits_b, tmp_path, schemes=("zero", "zero"))

    def test_bad_objective_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="objective"):
            run_psa(SPEC, CFG, splits_a, splits_b, tmp_path, objective="best")


@pytest.fixture(scope="module")
def result(tmp_path_factory, splits_a, splits_b):
    out = tmp_path_factory.mktemp("tps")
    res = run_tps(
        {"tiny": SPEC}, CFG, splits_a, splits_b, "reflection", out,
        base_seed=1, workers=1,
    )
    return out, res


class TestRunTps:
    def test_record_grid(self, result):
        _, res = result
        arch = res.architectures["tiny"]
        assert [(r.setting, r.run) for r in arch.records] == [
            (s, r) for s in ("S1", "S2", "S3", "S4", "S5") for r in range(1, 6)
        ]
        for rec in arch.records:
            rec.validate()
            assert rec.checkpoint == f"tps/tiny/{rec.setting}_run{rec.run}.ckpt"

    def test_chosen_is_rederivable(self, result):
        out, res = result
        arch = res.architectures["tiny"]
        aggs = {
            s: aggregate([r for r in arch.records if r.setting == s])
            for s in res.settings
        }
        assert arch.aggregates == aggs
        assert arch.chosen_setting == choose_best(aggs[s] for s in res.settings)
        assert arch.chosen_run == aggs[arch.chosen_setting].peak_run
        assert (out / arch.chosen_checkpoint).is_file()

    def test_fine_tuning_keeps_frozen_prefix(self, result):
        out, res = result
        arch = res.architectures["tiny"]
        for tuned, source in (("S2", "S1"), ("S5", "S4")):
            peak = arch.aggregates[source].peak_run
            base = load_checkpoint(out / f"tps/tiny/{source}_run{peak}.ckpt")
            for r in range(1, 6):
                state = load_checkpoint(out / f"tps/tiny/{tuned}_run{r}.ckpt")
                assert state.frozen == {"stem": True, "s0b0": False, "head": False}
                assert np.array_equal(
                    state.params["stem.conv.w"], base.params["stem.conv.w"]
                )
                assert np.array_equal(state.bn_mean["stem.bn"], base.bn_mean["stem.bn"])
                assert not np.array_equal(state.params["head.w"], base.params["head.w"])

    def test_report_files(self, result):
        out, res = result
        payload = json.loads((out / TPS_REPORT).read_text())
        assert set(payload) == {"config", "seeds", "records", "aggregates", "chosen"}
        assert list(payload["records"]) == ["tiny"]
        assert payload["chosen"]["tiny"]["setting"] == res.architectures["tiny"].chosen_setting
        assert payload["config"]["freeze_tail"] == 2
        rows = read_runs_csv(out / tps_csv_name("tiny"))
        assert len(rows) == 25

    def test_missing_prerequisite_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="include S1"):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
                settings=("S2",),
            )
        with pytest.raises(ValueError, match="include S4"):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
                settings=("S1", "S2", "S5"),
            )

    def test_source_override(self, tmp_path, splits_a, splits_b):
        from dcf.nn import save_checkpoint

        state, _ = train_run(SPEC, splits_a["train"], splits_a["val"], CFG, "zero")
        src = tmp_path / "seed.ckpt"
        save_checkpoint(state, src)
        res = run_tps(
            {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path / "out",
            settings=("S2",), s2_source=src, workers=1,
        )
        arch = res.architectures["tiny"]
        assert {r.setting for r in arch.records} == {"S2"}
        # a lone setting leaves nothing to choose between
        assert arch.chosen_setting is None
        payload = json.loads((tmp_path / "out" / TPS_REPORT).read_text())
        assert payload["chosen"]["tiny"] is None

    def test_two_settings_pick_a_pathway(self, tmp_path, splits_a, splits_b):
        res = run_tps(
            {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
            settings=("S1", "S4"), workers=1,
        )
        arch = res.architectures["tiny"]
        assert arch.chosen_setting in ("S1", "S4")
        assert arch.chosen_checkpoint is not None

    def test_scheme_override_changes_training(self, tmp_path, splits_a, splits_b):
        plain = run_tps(
            {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path / "p",
            settings=("S1", "S4"), workers=1,
        )
        mixed = run_tps(
            {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path / "m",
            settings=("S1", "S4"), scheme_overrides={"S4": "white"}, workers=1,
        )
        recs_p = {(r.setting, r.run): r for r in plain.architectures["tiny"].records}
        recs_m = {(r.setting, r.run): r for r in mixed.architectures["tiny"].records}
        # S1 untouched by the override; S4 weights actually trained differently
        for r in range(1, 6):
            assert recs_p[("S1", r)] == recs_m[("S1", r)]
        a = load_checkpoint(tmp_path / "p" / recs_p[("S4", 1)].checkpoint)
        b = load_checkpoint(tmp_path / "m" / recs_m[("S4", 1)].checkpoint)
        assert not np.array_equal(a.params["head.w"], b.params["head.w"])

    def test_bad_scheme_override_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="unknown setting"):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
                scheme_overrides={"S9": "zero"},
            )

    def test_source_spec_mismatch_rejected(self, tmp_path, splits_a, splits_b):
        from dcf.nn import init_state, save_checkpoint

        other = ModelSpec(
            input_side=16, stem_channels=8, stage_channels=(8,),
            blocks_per_stage=1, dtype="float32",
        )
        src = tmp_path / "other.ckpt"
        save_checkpoint(init_state(other, 0), src)
        with pytest.raises(ValueError, match="different architecture"):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path / "out",
                settings=("S2",), s2_source=src, workers=1,
            )

    def test_missing_source_file_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(FileNotFoundError):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
                settings=("S2",), s2_source=tmp_path / "nope.ckpt",
            )

    def test_bad_arch_name_rejected(self, tmp_path, splits_a, splits_b):
        with pytest.raises(ValueError, match="filename-safe"):
            run_tps(
                {"a/b": SPEC}, CFG, splits_a, splits_b, "zero", tmp_path,
            )

    def test_partial_report_on_failure(self, tmp_path, splits_a, splits_b):
        broken = dict(splits_b)
        broken["test"] = []
        with pytest.raises(ValueError):
            run_tps(
                {"tiny": SPEC}, CFG, splits_a, broken, "zero", tmp_path,
                settings=("S1",), workers=1,
            )
        payload = json.loads((tmp_path / TPS_REPORT).read_text())
        assert payload["chosen"] is None
        assert "failed" in payload


class TestWorkers:
    def test_resolve_from_env(self, monkeypatch):
        monkeypatch.setenv("DCF_THREADS", "3")
        assert resolve_workers(None) == 3
        assert resolve_workers(2) == 2

    def test_resolve_default(self, monkeypatch):
        monkeypatch.delenv("DCF_THREADS", raising=False)
        assert resolve_workers(None) == 1

    def test_bad_env_rejected(self, monkeypatch):
        monkeypatch.setenv("DCF_THREADS", "many")
        with pytest.raises(ValueError, match="DCF_THREADS"):
            resolve_workers(None)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError, match=">= 1"):
            resolve_workers(0)

    def test_pool_matches_sequential(self, splits_a):
        jobs = [
            TrainJob(
                SPEC, tuple(splits_a["train"]), tuple(splits_a["val"]),
                CFG, "zero", seed,
            )
            for seed in (1, 2)
        ]
        seq = [execute_job(j) for j in jobs]
        par = map_jobs(jobs, workers=2)
        for a, b in zip(seq, par):
            for k in a.params:
                assert np.array_equal(a.params[k], b.params[k]), k
            for k in a.bn_mean:
                assert np.array_equal(a.bn_mean[k], b.bn_mean[k])
