"""Ordered composition of augmentation steps, with shipped presets A-G.

A pipeline applies its steps top to bottom, per example. Pairwise steps
(cutmix, mixup) draw their partner from the batch state at entry to that
step, so per-example application is order-independent and parallelizable.
Every (example, step) pair gets its own derived random stream:

    step_stream = batch_stream.derive(example_index).derive(step_index)

For pairwise steps the partner index is drawn from the step stream before
the kernel runs; self-pairing is excluded whenever the batch has more than
one example.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .augment import (
    CutParams,
    MixupParams,
    WarpParams,
    cutmix,
    cutout,
    mixup,
    window_warp,
)
from .core import LabeledExample, RandomStream

STEP_KINDS = ("cutout", "cutmix", "mixup", "window_warp")

BUILTIN_CODES = ("None", "A", "B", "C", "D", "E", "F", "G")


class ConfigError(ValueError):
    """A pipeline config document failed validation; ``path`` locates the field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class PipelineStep:
    kind: str
    params: CutParams | MixupParams | WarpParams

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}, expected one of {STEP_KINDS}")
        expected = {
            "cutout": CutParams,
            "cutmix": CutParams,
            "mixup": MixupParams,
            "window_warp": WarpParams,
        }[self.kind]
        if not isinstance(self.params, expected):
            raise ValueError(f"step kind {self.kind!r} needs {expected.__name__}")


@dataclass(frozen=True)
class PipelineConfig:
    code: str
    steps: tuple[PipelineStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.code == "None":
            if self.steps:
                raise ValueError('code "None" must have an empty step list')
        elif not self.steps:
            raise ValueError(f"pipeline {self.code!r} must have at least one step")


def _cutmix(p: float, cp: float) -> PipelineStep:
    return PipelineStep("cutmix", CutParams(p_apply=p, channel_prob=cp))


def _cutout(p: float, cp: float) -> PipelineStep:
    return PipelineStep("cutout", CutParams(p_apply=p, channel_prob=cp))


def _mixup(p: float) -> PipelineStep:
    return PipelineStep("mixup", MixupParams(p_apply=p))


def _warp(p: float, s: float) -> PipelineStep:
    return PipelineStep("window_warp", WarpParams(p_apply=p, scale=s))


def builtin_pipeline(code: str) -> PipelineConfig:
    """The shipped preset for one of the codes None, A..G."""
    presets = {
        "None": (),
        "A": (_cutmix(0.8, 0.5), _cutout(0.8, 0.5), _mixup(0.8)),
        "B": (_cutmix(0.8, 0.2), _cutmix(0.8, 0.2), _cutout(0.8, 0.2), _mixup(0.8)),
        "C": (_cutout(0.5, 0.3), _cutout(0.5, 0.3)),
        "D": (_mixup(0.5), _mixup(0.5)),
        "E": (_cutmix(0.5, 0.3), _cutmix(0.5, 0.3)),
        "F": (_warp(0.5, 0.5), _warp(0.5, 2.0)),
        "G": (
            _cutmix(0.8, 0.2),
            _cutout(0.8, 0.2),
            _cutout(0.8, 0.2),
            _mixup(0.8),
            _warp(0.5, 0.5),
            _warp(0.5, 2.0),
        ),
    }
    if code not in presets:
        raise ValueError(f"unknown pipeline code {code!r}; valid codes: {', '.join(BUILTIN_CODES)}")
    return PipelineConfig(code, presets[code])


def _check_batch(batch: list[LabeledExample]) -> None:
    if not batch:
        raise ValueError("batch must be nonempty")
    shape = batch[0].series.values.shape
    k = batch[0].n_classes
    for i, ex in enumerate(batch):
        if ex.series.values.shape != shape:
            raise ValueError(f"batch example {i} has shape {ex.series.values.shape}, expected {shape}")
        if ex.n_classes != k:
            raise ValueError(f"batch example {i} has {ex.n_classes} classes, expected {k}")


def apply_pipeline(
    batch,
    config: PipelineConfig,
    stream: RandomStream,
    workers: int = 1,
) -> list[LabeledExample]:
    """Apply every step of ``config`` to every example of ``batch``.

    Deterministic in (batch, config, stream seed) and independent of
    ``workers``: each example/step uses its own derived stream, and pairwise
    partners come from a snapshot of the batch taken at entry to the step.
    """
    batch = list(batch)
    _check_batch(batch)
    n = len(batch)
    current = batch
    for step_index, step in enumerate(config.steps):
        snapshot = current

        def transform(i: int, _step=step, _idx=step_index, _snap=snapshot) -> LabeledExample:
            s = stream.derive(i).derive(_idx)
            x = _snap[i]
            if _step.kind == "cutout":
                return cutout(x, _step.params, s)
            if _step.kind == "window_warp":
                return window_warp(x, _step.params, s)
            # pairwise: partner drawn first, from the pre-step snapshot
            if n == 1:
                partner = _snap[0]
            else:
                j = s.uniform_int(0, n - 2)
                if j >= i:
                    j += 1
                partner = _snap[j]
            if _step.kind == "cutmix":
                return cutmix(x, partner, _step.params, s)
            return mixup(x, partner, _step.params, s)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                current = list(pool.map(transform, range(n)))
        else:
            current = [transform(i) for i in range(n)]
    return current


_COMMON_KEYS = {"kind", "p"}
_STEP_KEYS = {
    "cutout": _COMMON_KEYS | {"cp"},
    "cutmix": _COMMON_KEYS | {"cp", "label_mode"},
    "mixup": _COMMON_KEYS | {"m_min", "m_max"},
    "window_warp": _COMMON_KEYS | {"s"},
}


def _require_number(value, path: str, lo: float | None = None, hi: float | None = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    v = float(value)
    if lo is not None and v < lo or hi is not None and v > hi:
        raise ConfigError(path, f"must be in [{lo}, {hi}], got {value!r}")
    return v


def _step_from_dict(doc, path: str) -> PipelineStep:
    if not isinstance(doc, dict):
        raise ConfigError(path, f"expected an object, got {type(doc).__name__}")
    kind = doc.get("kind")
    if kind not in STEP_KINDS:
        raise ConfigError(f"{path}.kind", f"unknown kind {kind!r}, expected one of {STEP_KINDS}")
    allowed = _STEP_KEYS[kind]
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", f"unknown key for kind {kind!r}")
    if "p" not in doc:
        raise ConfigError(f"{path}.p", "missing application probability")
    p = _require_number(doc["p"], f"{path}.p", 0.0, 1.0)
    if kind in ("cutout", "cutmix"):
        # absent cp means the step applies to all channels
        cp = _require_number(doc.get("cp", 1.0), f"{path}.cp", 0.0, 1.0)
        label_mode = doc.get("label_mode", "keep_first")
        if label_mode not in ("keep_first", "average"):
            raise ConfigError(f"{path}.label_mode", f"expected keep_first or average, got {label_mode!r}")
        return PipelineStep(kind, CutParams(p_apply=p, channel_prob=cp, label_mode=label_mode))
    if kind == "mixup":
        m_min = _require_number(doc.get("m_min", 0.0), f"{path}.m_min", 0.0, 1.0)
        m_max = _require_number(doc.get("m_max", 1.0), f"{path}.m_max", 0.0, 1.0)
        if m_min > m_max:
            raise ConfigError(f"{path}.m_min", f"m_min {m_min} exceeds m_max {m_max}")
        return PipelineStep(kind, MixupParams(p_apply=p, m_min=m_min, m_max=m_max))
    if "s" not in doc:
        raise ConfigError(f"{path}.s", "window_warp needs a scale factor")
    s = _require_number(doc["s"], f"{path}.s")
    if s <= 0:
        raise ConfigError(f"{path}.s", f"scale must be > 0, got {s}")
    return PipelineStep(kind, WarpParams(p_apply=p, scale=s))


def pipeline_config_from_dict(doc) -> PipelineConfig:
    if not isinstance(doc, dict):
        raise ConfigError("", f"expected a top-level object, got {type(doc).__name__}")
    for key in doc:
        if key not in ("code", "steps"):
            raise ConfigError(key, "unknown top-level key")
    code = doc.get("code")
    if not isinstance(code, str) or not code:
        raise ConfigError("code", f"expected a nonempty string, got {code!r}")
    steps_doc = doc.get("steps")
    if not isinstance(steps_doc, list):
        raise ConfigError("steps", "expected a list of steps")
    steps = tuple(_step_from_dict(s, f"steps[{i}]") for i, s in enumerate(steps_doc))
    try:
        return PipelineConfig(code, steps)
    except ValueError as exc:
        raise ConfigError("steps", str(exc)) from exc


def pipeline_config_to_dict(config: PipelineConfig) -> dict:
    steps = []
    for step in config.steps:
        p = step.params
        if step.kind in ("cutout", "cutmix"):
            doc = {"kind": step.kind, "p": p.p_apply, "cp": p.channel_prob}
            if step.kind == "cutmix":
                doc["label_mode"] = p.label_mode
        elif step.kind == "mixup":
            doc = {"kind": step.kind, "p": p.p_apply, "m_min": p.m_min, "m_max": p.m_max}
        else:
            doc = {"kind": step.kind, "p": p.p_apply, "s": p.scale}
        steps.append(doc)
    return {"code": config.code, "steps": steps}


def parse_pipeline_config(text: str) -> PipelineConfig:
    """Parse a JSON pipeline config document. parse -> serialize -> parse is identity."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from exc
    return pipeline_config_from_dict(doc)


def serialize_pipeline_config(config: PipelineConfig) -> str:
    return json.dumps(pipeline_config_to_dict(config), indent=2) + "\n"
