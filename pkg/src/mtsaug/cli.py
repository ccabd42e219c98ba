"""Command-line surface: augment, resample, preview, stats, validate.

Every command with identical arguments and seed produces byte-identical
primary outputs; a JSON manifest written next to each output records the
command, seed, config and tool version (only its wall_time_s field varies
between runs). Exit codes: 0 success, 2 usage error, 3 data error. The
default seed comes from $MTSAUG_SEED when set.
"""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

import click

from . import __version__
from .core import Dataset, RandomStream
from .ingest import (
    export_csv,
    load_dataset,
    save_binary,
    validate_meta,
)
from .metadata import dataset_meta
from .pipeline import (
    BUILTIN_CODES,
    PipelineConfig,
    apply_pipeline,
    builtin_pipeline,
    parse_pipeline_config,
    pipeline_config_to_dict,
)
from .resample import resample_indices
from .stats import (
    best_vs_reference,
    read_accuracy_csv,
    read_reference_csv,
    significance_table,
)

CONFIG_DIR = Path("configs")


class DataError(click.ClickException):
    exit_code = 3


def _default_seed() -> int:
    return int(os.environ.get("MTSAUG_SEED", "0"))


def _load(path: str) -> Dataset:
    try:
        return load_dataset(path)
    except (ValueError, OSError) as exc:
        raise DataError(f"{path}: {exc}") from exc


def _resolve_pipeline(spec: str) -> PipelineConfig:
    """A builtin code, a config file path, or a name under ./configs/."""
    if spec in BUILTIN_CODES:
        return builtin_pipeline(spec)
    candidates = [Path(spec)]
    if "/" not in spec and not spec.endswith(".json"):
        candidates.append(CONFIG_DIR / f"{spec}.json")
    for path in candidates:
        if path.is_file():
            try:
                return parse_pipeline_config(path.read_text(encoding="utf-8"))
            except ValueError as exc:
                raise DataError(f"{path}: {exc}") from exc
    raise DataError(
        f"unknown pipeline {spec!r}: not a builtin code ({', '.join(BUILTIN_CODES)}), "
        f"not a config file, and {CONFIG_DIR / (spec + '.json')} does not exist"
    )


def _write_manifest(target: Path, payload: dict) -> None:
    payload = {"tool_version": __version__, **payload}
    target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


@click.group()
@click.version_option(version=__version__, prog_name="mtsaug")
def main():
    """Deterministic multivariate time-series augmentation toolkit."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="Dataset (.ts or .mtsb).")
@click.option("--pipeline", "pipeline_spec", required=True, help="Builtin code (None, A..G) or config file.")
@click.option("--seed", type=int, default=_default_seed, show_default="$MTSAUG_SEED or 0")
@click.option("--epoch-multiplier", "multiplier", type=click.IntRange(min=1), default=1,
              show_default=True, help="Number of augmented passes over the input to materialize.")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output (.mtsb or .csv).")
def augment(input_path, pipeline_spec, seed, multiplier, threads, out_path):
    """Write an augmented copy of a dataset (deterministic in --seed)."""
    started = time.perf_counter()
    ds = _load(input_path)
    config = _resolve_pipeline(pipeline_spec)
    root = RandomStream(seed)
    out_examples = []
    for pass_index in range(multiplier):
        out_examples.extend(apply_pipeline(ds.examples, config, root.derive(pass_index), workers=threads))
    out = Path(out_path)
    augmented = Dataset(ds.name, ds.class_names, out_examples)
    if out.suffix == ".mtsb":
        save_binary(augmented, out)
    elif out.suffix == ".csv":
        _write_text(out, export_csv(out_examples))
    else:
        raise DataError(f"unsupported output extension {out.suffix!r} (expected .mtsb or .csv)")
    _write_manifest(Path(str(out) + ".manifest.json"), {
        "command": "augment",
        "input": str(input_path),
        "output": str(out),
        "pipeline": pipeline_config_to_dict(config),
        "seed": seed,
        "epoch_multiplier": multiplier,
        "threads": threads,
        "wall_time_s": time.perf_counter() - started,
    })
    click.echo(f"wrote {out} ({augmented.n_examples} examples)")


@main.command()
@click.option("--train", "train_path", required=True, type=click.Path())
@click.option("--test", "test_path", required=True, type=click.Path())
@click.option("--folds", type=click.IntRange(min=0), default=29, show_default=True,
              help="Highest fold index to generate; fold 0 is the original split.")
@click.option("--seed", type=int, default=_default_seed, show_default="$MTSAUG_SEED or 0")
@click.option("--outdir", required=True, type=click.Path())
@click.option("--materialize", is_flag=True, help="Also write fold datasets as .mtsb files.")
def resample(train_path, test_path, folds, seed, outdir, materialize):
    """Regenerate train/test splits with per-class counts preserved.

    Emits fold_K.train.idx / fold_K.test.idx for K = 0..folds; indices refer
    to the concatenated train-then-test example order.
    """
    started = time.perf_counter()
    train = _load(train_path)
    test = _load(test_path)
    if train.class_names != test.class_names:
        raise DataError("train and test class sets differ")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    pool = train.examples + test.examples
    for fold in range(folds + 1):
        train_idx, test_idx = resample_indices(
            train.hard_labels(), test.hard_labels(), train.n_classes, fold, seed
        )
        _write_text(out / f"fold_{fold}.train.idx", "".join(f"{i}\n" for i in train_idx))
        _write_text(out / f"fold_{fold}.test.idx", "".join(f"{i}\n" for i in test_idx))
        if materialize:
            save_binary(
                Dataset(train.name, train.class_names, [pool[i] for i in train_idx]),
                out / f"fold_{fold}.train.mtsb",
            )
            save_binary(
                Dataset(test.name, test.class_names, [pool[i] for i in test_idx]),
                out / f"fold_{fold}.test.mtsb",
            )
    _write_manifest(out / "resample.manifest.json", {
        "command": "resample",
        "train": str(train_path),
        "test": str(test_path),
        "folds": folds,
        "seed": seed,
        "materialize": materialize,
        "wall_time_s": time.perf_counter() - started,
    })
    click.echo(f"wrote folds 0..{folds} to {out}")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--pipeline", "pipeline_spec", required=True)
@click.option("--seed", type=int, default=_default_seed, show_default="$MTSAUG_SEED or 0")
@click.option("--example", "example_index", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def preview(input_path, pipeline_spec, seed, example_index, out_path):
    """Export one example before/after augmentation as CSV.

    Columns: time, per-channel original, per-channel augmented, and a 0/1
    changed flag per channel.
    """
    started = time.perf_counter()
    ds = _load(input_path)
    config = _resolve_pipeline(pipeline_spec)
    if not 0 <= example_index < ds.n_examples:
        raise DataError(f"example index {example_index} out of range [0, {ds.n_examples})")
    augmented = apply_pipeline(ds.examples, config, RandomStream(seed).derive(0))
    orig = ds.examples[example_index].series.values
    aug = augmented[example_index].series.values
    changed = orig != aug
    c, l = orig.shape
    header = (
        ["time"]
        + [f"ch{j}_orig" for j in range(c)]
        + [f"ch{j}_aug" for j in range(c)]
        + [f"ch{j}_changed" for j in range(c)]
    )
    lines = [",".join(header)]
    for t in range(l):
        row = [str(t)]
        row += [f"{float(orig[j, t]):.9g}" for j in range(c)]
        row += [f"{float(aug[j, t]):.9g}" for j in range(c)]
        row += [str(int(changed[j, t])) for j in range(c)]
        lines.append(",".join(row))
    out = Path(out_path)
    _write_text(out, "\n".join(lines) + "\n")
    _write_manifest(Path(str(out) + ".manifest.json"), {
        "command": "preview",
        "input": str(input_path),
        "output": str(out),
        "pipeline": pipeline_config_to_dict(config),
        "seed": seed,
        "example": example_index,
        "wall_time_s": time.perf_counter() - started,
    })
    click.echo(f"wrote {out}")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(),
              help="CSV with columns dataset,model,aug_code,fold,accuracy (fractions).")
@click.option("--baseline", default="None", show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--reference", "reference_path", type=click.Path(), default=None,
              help="Optional dataset,accuracy,algorithm CSV for a best-vs-reference report.")
@click.option("--out", "out_prefix", default=None,
              help="Write <out>.csv and <out>.txt (plus <out>.best.* with --reference); "
                   "otherwise print the text report.")
def stats(records_path, baseline, alpha, reference_path, out_prefix):
    """Welch t-test significance report against a baseline aug code."""
    started = time.perf_counter()
    try:
        records = read_accuracy_csv(Path(records_path).read_text(encoding="utf-8"))
        report = significance_table(records, baseline, alpha=alpha)
    except (ValueError, OSError) as exc:
        raise DataError(str(exc)) from exc
    best = None
    if reference_path is not None:
        try:
            reference = read_reference_csv(Path(reference_path).read_text(encoding="utf-8"))
            best = best_vs_reference(records, reference)
        except (ValueError, OSError) as exc:
            raise DataError(str(exc)) from exc
    if out_prefix is None:
        click.echo(report.to_text(), nl=False)
        if best is not None:
            click.echo(best.to_text(), nl=False)
        return
    _write_text(Path(out_prefix + ".csv"), report.to_csv())
    _write_text(Path(out_prefix + ".txt"), report.to_text())
    outputs = [str(Path(out_prefix + ".csv")), str(Path(out_prefix + ".txt"))]
    if best is not None:
        _write_text(Path(out_prefix + ".best.csv"), best.to_csv())
        _write_text(Path(out_prefix + ".best.txt"), best.to_text())
        outputs += [str(Path(out_prefix + ".best.csv")), str(Path(out_prefix + ".best.txt"))]
    _write_manifest(Path(out_prefix + ".manifest.json"), {
        "command": "stats",
        "records": str(records_path),
        "baseline": baseline,
        "alpha": alpha,
        "reference": None if reference_path is None else str(reference_path),
        "outputs": outputs,
        "wall_time_s": time.perf_counter() - started,
    })
    click.echo("wrote " + ", ".join(outputs))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--meta", "meta_name", required=True,
              help="Archive dataset name or short code (e.g. BasicMotions or BM).")
@click.option("--split", type=click.Choice(["train", "test"]), default=None,
              help="Check the size against one split only.")
def validate(input_path, meta_name, split):
    """Check a dataset against the shipped archive summary table."""
    try:
        meta = dataset_meta(meta_name)
    except KeyError as exc:
        raise click.BadParameter(str(exc.args[0]), param_hint="--meta") from exc
    ds = _load(input_path)
    report = validate_meta(ds, meta, split=split)
    click.echo(report.to_text(), nl=False)
    if not report.passed:
        raise DataError(f"{input_path} does not match metadata for {meta.name}")


if __name__ == "__main__":
    main()
