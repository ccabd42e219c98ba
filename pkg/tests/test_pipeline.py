import json

import numpy as np
import pytest

from mtsaug import (
    BUILTIN_CODES,
    ConfigError,
    CutParams,
    LabeledExample,
    MixupParams,
    PipelineConfig,
    PipelineStep,
    RandomStream,
    Series,
    WarpParams,
    apply_pipeline,
    builtin_pipeline,
    one_hot,
    parse_pipeline_config,
    serialize_pipeline_config,
)
from synth import random_batch


def step_summary(step):
    p = step.params
    if step.kind in ("cutout", "cutmix"):
        return (step.kind, p.p_apply, p.channel_prob)
    if step.kind == "mixup":
        return (step.kind, p.p_apply)
    return (step.kind, p.p_apply, p.scale)


# Shipped preset catalog, spelled out step by step.
EXPECTED_PRESETS = {
    "None": [],
    "A": [("cutmix", 0.8, 0.5), ("cutout", 0.8, 0.5), ("mixup", 0.8)],
    "B": [("cutmix", 0.8, 0.2), ("cutmix", 0.8, 0.2), ("cutout", 0.8, 0.2), ("mixup", 0.8)],
    "C": [("cutout", 0.5, 0.3), ("cutout", 0.5, 0.3)],
    "D": [("mixup", 0.5), ("mixup", 0.5)],
    "E": [("cutmix", 0.5, 0.3), ("cutmix", 0.5, 0.3)],
    "F": [("window_warp", 0.5, 0.5), ("window_warp", 0.5, 2.0)],
    "G": [
        ("cutmix", 0.8, 0.2),
        ("cutout", 0.8, 0.2),
        ("cutout", 0.8, 0.2),
        ("mixup", 0.8),
        ("window_warp", 0.5, 0.5),
        ("window_warp", 0.5, 2.0),
    ],
}


class TestBuiltinPresets:
    @pytest.mark.parametrize("code", BUILTIN_CODES)
    def test_step_lists_exact(self, code):
        cfg = builtin_pipeline(code)
        assert cfg.code == code
        assert [step_summary(s) for s in cfg.steps] == EXPECTED_PRESETS[code]

    def test_cut_steps_use_half_to_full_fractions(self):
        for code in ("A", "B", "C", "E", "G"):
            for step in builtin_pipeline(code).steps:
                if step.kind in ("cutout", "cutmix"):
                    assert (step.params.len_frac_min, step.params.len_frac_max) == (0.5, 1.0)

    def test_warp_steps_use_eighth_to_third_fractions(self):
        for step in builtin_pipeline("F").steps:
            assert step.params.len_frac_min == 1 / 8
            assert step.params.len_frac_max == 1 / 3

    def test_unknown_code_lists_valid_ones(self):
        with pytest.raises(ValueError, match="A, B, C, D, E, F, G"):
            builtin_pipeline("Z")

    def test_f_scales(self):
        scales = {s.params.scale for s in builtin_pipeline("F").steps}
        assert scales == {0.5, 2.0}


class TestApplyPipeline:
    def test_none_is_identity(self):
        batch = random_batch(RandomStream(1), 6, 2, 16)
        out = apply_pipeline(batch, builtin_pipeline("None"), RandomStream(2))
        assert all(a is b for a, b in zip(out, batch))

    def test_all_p_zero_is_identity(self):
        batch = random_batch(RandomStream(3), 5, 2, 16)
        cfg = PipelineConfig(
            "quiet",
            (
                PipelineStep("cutmix", CutParams(0.0, 0.5)),
                PipelineStep("cutout", CutParams(0.0, 0.5)),
                PipelineStep("mixup", MixupParams(0.0)),
                PipelineStep("window_warp", WarpParams(0.0, 2.0)),
            ),
        )
        out = apply_pipeline(batch, cfg, RandomStream(4))
        assert all(a is b for a, b in zip(out, batch))

    def test_deterministic_and_thread_invariant(self):
        batch = random_batch(RandomStream(5), 8, 3, 24)
        cfg = builtin_pipeline("G")
        a = apply_pipeline(batch, cfg, RandomStream(6))
        b = apply_pipeline(batch, cfg, RandomStream(6))
        c = apply_pipeline(batch, cfg, RandomStream(6), workers=4)
        assert all(x == y for x, y in zip(a, b))
        assert all(x == y for x, y in zip(a, c))

    def test_shapes_preserved_for_every_code(self):
        batch = random_batch(RandomStream(7), 6, 3, 40)
        for code in BUILTIN_CODES:
            out = apply_pipeline(batch, builtin_pipeline(code), RandomStream(8))
            assert len(out) == len(batch)
            assert all(o.series.values.shape == (3, 40) for o in out)

    def test_heterogeneous_batch_rejected(self):
        a = LabeledExample(Series([[1.0, 2.0]]), one_hot(0, 2))
        b = LabeledExample(Series([[1.0, 2.0, 3.0]]), one_hot(0, 2))
        with pytest.raises(ValueError):
            apply_pipeline([a, b], builtin_pipeline("C"), RandomStream(0))

    def test_empty_batch_rejected(self):
        with pytest.raises(ValueError):
            apply_pipeline([], builtin_pipeline("C"), RandomStream(0))

    def test_single_example_batch_self_pairs(self):
        x = LabeledExample(Series([[1.0, 2.0, 3.0, 4.0]]), one_hot(0, 2))
        cfg = PipelineConfig("solo", (PipelineStep("mixup", MixupParams(1.0)),))
        out = apply_pipeline([x], cfg, RandomStream(9))
        assert np.array_equal(out[0].series.values, x.series.values)

    def test_order_matters_regression(self):
        batch = [
            LabeledExample(Series([[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]]), one_hot(0, 2)),
            LabeledExample(Series([[8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0]]), one_hot(1, 2)),
        ]
        cut = PipelineStep("cutout", CutParams(1.0, 1.0, len_frac_min=0.5, len_frac_max=0.5))
        mix = PipelineStep("mixup", MixupParams(1.0, m_min=0.5, m_max=0.5))
        ab = apply_pipeline(batch, PipelineConfig("cut-then-mix", (cut, mix)), RandomStream(99))
        ba = apply_pipeline(batch, PipelineConfig("mix-then-cut", (mix, cut)), RandomStream(99))
        # frozen regression pins
        assert ab[0].series.values.tolist() == [[4.5, 1.0, 1.5, 0.0, 0.0, 1.5, 1.0, 4.5]]
        assert ab[1].series.values.tolist() == [[4.5, 1.0, 1.5, 0.0, 0.0, 1.5, 1.0, 4.5]]
        assert ba[0].series.values.tolist() == [[4.5, 4.5, 4.5, 0.0, 0.0, 0.0, 0.0, 4.5]]
        assert ba[1].series.values.tolist() == [[0.0, 0.0, 0.0, 0.0, 4.5, 4.5, 4.5, 4.5]]
        assert any(
            not np.array_equal(x.series.values, y.series.values) for x, y in zip(ab, ba)
        )

    def test_partners_come_from_pre_step_snapshot(self):
        # one full-cover cutmix step: every example must be rebuilt from
        # ORIGINAL partners, never from an already-transformed one
        batch = [
            LabeledExample(Series(np.full((1, 4), float(i))), one_hot(0, 2)) for i in range(4)
        ]
        cfg = PipelineConfig(
            "swap",
            (PipelineStep("cutmix", CutParams(1.0, 1.0, len_frac_min=1.0, len_frac_max=1.0)),),
        )
        out = apply_pipeline(batch, cfg, RandomStream(10))
        originals = {float(i) for i in range(4)}
        for i, ex in enumerate(out):
            val = float(ex.series.values[0, 0])
            assert val in originals and val != float(i)


class TestConfigDocuments:
    @pytest.mark.parametrize("code", BUILTIN_CODES)
    def test_round_trip_builtin(self, code):
        cfg = builtin_pipeline(code)
        assert parse_pipeline_config(serialize_pipeline_config(cfg)) == cfg

    def test_parse_serialize_parse_identity(self):
        text = serialize_pipeline_config(builtin_pipeline("B"))
        once = parse_pipeline_config(text)
        again = parse_pipeline_config(serialize_pipeline_config(once))
        assert once == again

    def test_out_of_range_probability_names_field(self):
        doc = {"code": "x", "steps": [{"kind": "mixup", "p": 1.5}]}
        with pytest.raises(ConfigError, match=r"steps\[0\]\.p"):
            parse_pipeline_config(json.dumps(doc))

    def test_unknown_kind(self):
        doc = {"code": "x", "steps": [{"kind": "jitter", "p": 0.5}]}
        with pytest.raises(ConfigError, match="jitter"):
            parse_pipeline_config(json.dumps(doc))

    def test_unknown_key(self):
        doc = {"code": "x", "steps": [{"kind": "mixup", "p": 0.5, "cp": 0.5}]}
        with pytest.raises(ConfigError, match=r"steps\[0\]\.cp"):
            parse_pipeline_config(json.dumps(doc))

    def test_nonpositive_scale(self):
        doc = {"code": "x", "steps": [{"kind": "window_warp", "p": 0.5, "s": 0.0}]}
        with pytest.raises(ConfigError, match=r"steps\[0\]\.s"):
            parse_pipeline_config(json.dumps(doc))

    def test_missing_cp_means_all_channels(self):
        doc = {"code": "x", "steps": [{"kind": "cutout", "p": 0.5}]}
        cfg = parse_pipeline_config(json.dumps(doc))
        assert cfg.steps[0].params.channel_prob == 1.0

    def test_invalid_json(self):
        with pytest.raises(ConfigError, match="invalid JSON"):
            parse_pipeline_config("{nope")

    def test_none_code_requires_empty_steps(self):
        doc = {"code": "None", "steps": [{"kind": "mixup", "p": 0.5}]}
        with pytest.raises(ConfigError):
            parse_pipeline_config(json.dumps(doc))
        with pytest.raises(ConfigError):
            parse_pipeline_config(json.dumps({"code": "mine", "steps": []}))

    def test_shipped_documents_match_builtins(self, pytestconfig):
        configs_dir = pytestconfig.rootpath / "configs"
        for code in BUILTIN_CODES:
            text = (configs_dir / f"{code}.json").read_text()
            assert parse_pipeline_config(text) == builtin_pipeline(code)
