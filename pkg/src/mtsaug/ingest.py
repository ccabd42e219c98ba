"""Dataset I/O: UEA ``.ts`` text format, ``.mtsb`` binary format, CSV export.

The ``.ts`` reader covers the equal-length multivariate subset of the format:
``@``-prefixed header lines (case-insensitive keys problemName, timeStamps,
univariate, equalLength, seriesLength, classLabel), then ``@data``, then one
line per case with ``:``-separated channels of comma-separated values and the
class label as the final ``:``-field. Timestamped and variable-length
variants are rejected, as are missing values. Values are parsed as decimal
floats (binary64) and stored as float32.

``.mtsb`` is this package's compact little-endian interchange format; the
bit-exact layout lives in docs/formats.md. write -> read -> write is
byte-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Dataset, DatasetMeta, LabeledExample, Series, one_hot

MTSB_MAGIC = b"MTSB"
MTSB_VERSION = 1

_CSV_FMT = "{:.9g}"  # 9 significant digits round-trips float32 exactly


class TsParseError(ValueError):
    """A .ts document is malformed; carries the 1-based line number."""

    def __init__(self, line_no: int | None, message: str):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class BinaryFormatError(ValueError):
    """A .mtsb byte stream is malformed or truncated."""


@dataclass(frozen=True)
class TsHeader:
    problem_name: str
    equal_length: bool
    series_length: int
    class_labels: tuple[str, ...]
    univariate: bool


def _parse_bool(token: str, line_no: int, key: str) -> bool:
    low = token.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    raise TsParseError(line_no, f"@{key} expects true or false, got {token!r}")


def _parse_header(lines: list[str]):
    """Consume header lines up to and including @data; returns (header, data_start)."""
    problem_name = None
    timestamps = None
    univariate = None
    equal_length = None
    series_length = None
    class_labels = None
    for idx, raw in enumerate(lines):
        line = raw.strip()
        line_no = idx + 1
        if not line or line.startswith("#"):
            continue
        if not line.startswith("@"):
            raise TsParseError(line_no, "expected an @-prefixed header line before @data")
        tokens = line.split()
        key = tokens[0][1:].lower()
        if key == "data":
            if len(tokens) != 1:
                raise TsParseError(line_no, "@data takes no value")
            if equal_length is False:
                raise TsParseError(line_no, "only equal-length datasets are supported (equalLength false)")
            if timestamps is True:
                raise TsParseError(line_no, "timestamped .ts variants are not supported")
            if series_length is None:
                raise TsParseError(line_no, "@seriesLength is required for equal-length data")
            if not class_labels:
                raise TsParseError(line_no, "@classLabel true <labels...> is required")
            header = TsHeader(
                problem_name=problem_name or "unnamed",
                equal_length=True,
                series_length=series_length,
                class_labels=tuple(class_labels),
                univariate=bool(univariate),
            )
            return header, idx + 1
        if key == "problemname":
            if len(tokens) < 2:
                raise TsParseError(line_no, "@problemName needs a value")
            problem_name = tokens[1]
        elif key == "timestamps":
            if len(tokens) != 2:
                raise TsParseError(line_no, "@timeStamps expects one boolean")
            timestamps = _parse_bool(tokens[1], line_no, "timeStamps")
        elif key == "univariate":
            if len(tokens) != 2:
                raise TsParseError(line_no, "@univariate expects one boolean")
            univariate = _parse_bool(tokens[1], line_no, "univariate")
        elif key == "equallength":
            if len(tokens) != 2:
                raise TsParseError(line_no, "@equalLength expects one boolean")
            equal_length = _parse_bool(tokens[1], line_no, "equalLength")
        elif key == "serieslength":
            if len(tokens) != 2:
                raise TsParseError(line_no, "@seriesLength expects one integer")
            try:
                series_length = int(tokens[1])
            except ValueError:
                raise TsParseError(line_no, f"@seriesLength expects an integer, got {tokens[1]!r}")
            if series_length <= 0:
                raise TsParseError(line_no, f"@seriesLength must be > 0, got {series_length}")
        elif key == "classlabel":
            if len(tokens) < 2:
                raise TsParseError(line_no, "@classLabel needs a boolean")
            if not _parse_bool(tokens[1], line_no, "classLabel"):
                raise TsParseError(line_no, "datasets without class labels are not supported")
            if len(tokens) < 3:
                raise TsParseError(line_no, "@classLabel true must list the class labels")
            class_labels = tokens[2:]
        # unknown header keys (e.g. @missing, @dimensions) are tolerated
    raise TsParseError(None, "missing @data tag")


def _parse_channel(text: str, line_no: int, expected_len: int) -> np.ndarray:
    tokens = text.split(",")
    if "?" in (t.strip() for t in tokens):
        raise TsParseError(line_no, "missing values ('?') are not supported")
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError:
        raise TsParseError(line_no, f"could not parse channel values: {text[:60]!r}")
    if values.shape[0] != expected_len:
        raise TsParseError(
            line_no,
            f"ragged channel: got {values.shape[0]} values, expected seriesLength {expected_len}",
        )
    if not np.all(np.isfinite(values)):
        raise TsParseError(line_no, "non-finite channel values")
    return values.astype(np.float32)


def parse_ts(text: str) -> Dataset:
    """Parse an equal-length multivariate .ts document into a Dataset.

    Labels come out one-hot over the header's class list. Raises
    :class:`TsParseError` with a line number for any malformed input.
    """
    lines = text.splitlines()
    header, data_start = _parse_header(lines)
    label_index = {lab: i for i, lab in enumerate(header.class_labels)}
    examples = []
    channels = None
    for idx in range(data_start, len(lines)):
        line = lines[idx].strip()
        line_no = idx + 1
        if not line or line.startswith("#"):
            continue
        fields = line.split(":")
        if len(fields) < 2:
            raise TsParseError(line_no, "case line needs at least one channel and a class label")
        label_token = fields[-1].strip()
        if label_token not in label_index:
            raise TsParseError(
                line_no,
                f"unknown class label {label_token!r}; expected one of {list(header.class_labels)}",
            )
        chans = [_parse_channel(f, line_no, header.series_length) for f in fields[:-1]]
        if channels is None:
            channels = len(chans)
            if header.univariate and channels != 1:
                raise TsParseError(line_no, f"@univariate true but case has {channels} channels")
        elif len(chans) != channels:
            raise TsParseError(
                line_no, f"case has {len(chans)} channels, expected {channels} from the first case"
            )
        series = Series(np.stack(chans))
        label = one_hot(label_index[label_token], len(header.class_labels))
        examples.append(LabeledExample(series, label))
    if not examples:
        raise TsParseError(None, "no data cases found after @data")
    return Dataset(header.problem_name, list(header.class_labels), examples)


def serialize_ts(ds: Dataset) -> str:
    """Render a Dataset back to .ts text; parse_ts round-trips it exactly."""
    out = [
        f"@problemName {ds.name}",
        "@timeStamps false",
        f"@univariate {'true' if ds.channels == 1 else 'false'}",
        "@equalLength true",
        f"@seriesLength {ds.length}",
        "@classLabel true " + " ".join(ds.class_names),
        "@data",
    ]
    for ex in ds.examples:
        chans = [",".join(repr(float(v)) for v in row) for row in ex.series.values]
        out.append(":".join(chans) + ":" + ds.class_names[ex.hard_label()])
    return "\n".join(out) + "\n"


def load_ts(path) -> Dataset:
    return parse_ts(Path(path).read_text(encoding="utf-8"))


def save_ts(ds: Dataset, path) -> None:
    Path(path).write_text(serialize_ts(ds), encoding="utf-8", newline="\n")


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError(f"string too long for format: {len(raw)} bytes")
    return struct.pack("<H", len(raw)) + raw


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if n < 0 or self.pos + n > len(self.buf):
            raise BinaryFormatError(f"truncated stream while reading {what}")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def string(self, what: str) -> str:
        n = self.u16(what)
        raw = self.take(n, what)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BinaryFormatError(f"invalid UTF-8 in {what}") from exc

    def f32_array(self, count: int, what: str) -> np.ndarray:
        raw = self.take(count * 4, what)
        return np.frombuffer(raw, dtype="<f4").copy()


def write_binary(ds: Dataset) -> bytes:
    """Serialize to the .mtsb layout (see docs/formats.md)."""
    parts = [MTSB_MAGIC, struct.pack("<H", MTSB_VERSION), _pack_str(ds.name)]
    parts.append(struct.pack("<IIII", ds.n_classes, ds.channels, ds.length, ds.n_examples))
    for name in ds.class_names:
        parts.append(_pack_str(name))
    values = ds.values_array()
    labels = ds.labels_array()
    parts.append(np.ascontiguousarray(values, dtype="<f4").tobytes())
    parts.append(np.ascontiguousarray(labels, dtype="<f4").tobytes())
    return b"".join(parts)


def read_binary(data: bytes) -> Dataset:
    """Parse .mtsb bytes; raises :class:`BinaryFormatError` on any defect."""
    r = _Reader(bytes(data))
    if r.take(4, "magic") != MTSB_MAGIC:
        raise BinaryFormatError("bad magic; not a .mtsb stream")
    version = r.u16("version")
    if version != MTSB_VERSION:
        raise BinaryFormatError(f"unsupported version {version}, expected {MTSB_VERSION}")
    name = r.string("dataset name")
    k = r.u32("class count")
    c = r.u32("channel count")
    l = r.u32("series length")
    n = r.u32("example count")
    if k < 1 or c < 1 or l < 1 or n < 1:
        raise BinaryFormatError(f"invalid dimensions k={k} c={c} l={l} n={n}")
    class_names = [r.string(f"class name {i}") for i in range(k)]
    # size check up front so fuzzed headers cannot trigger huge allocations
    need = n * c * l * 4 + n * k * 4
    if r.pos + need > len(r.buf):
        raise BinaryFormatError("truncated stream while reading value/label tables")
    values = r.f32_array(n * c * l, "values").reshape(n, c, l)
    labels = r.f32_array(n * k, "labels").reshape(n, k)
    if r.pos != len(r.buf):
        raise BinaryFormatError(f"{len(r.buf) - r.pos} trailing bytes after label table")
    try:
        examples = [
            LabeledExample(Series(values[i]), labels[i]) for i in range(n)
        ]
        return Dataset(name, class_names, examples)
    except ValueError as exc:
        raise BinaryFormatError(f"invalid dataset content: {exc}") from exc


def load_binary(path) -> Dataset:
    return read_binary(Path(path).read_bytes())


def save_binary(ds: Dataset, path) -> None:
    Path(path).write_bytes(write_binary(ds))


def load_dataset(path) -> Dataset:
    """Load .ts or .mtsb by file extension."""
    p = Path(path)
    if p.suffix == ".ts":
        return load_ts(p)
    if p.suffix == ".mtsb":
        return load_binary(p)
    raise ValueError(f"unsupported dataset extension {p.suffix!r} (expected .ts or .mtsb)")


def export_csv(examples, mode: str = "wide-per-channel") -> str:
    """Wide CSV preview: header ``time,ch0..``, then per example one
    annotation row (``# example i label p0|p1|..``) followed by one row per
    time step. Numbers are written with 9 significant digits."""
    if mode != "wide-per-channel":
        raise ValueError(f"unknown export mode {mode!r}")
    examples = list(examples)
    if not examples:
        return "time\n"
    c = examples[0].series.channels
    lines = ["time," + ",".join(f"ch{j}" for j in range(c))]
    for i, ex in enumerate(examples):
        label = "|".join(_CSV_FMT.format(float(p)) for p in ex.label)
        lines.append(f"# example {i} label {label}")
        vals = ex.series.values
        for t in range(ex.series.length):
            row = ",".join(_CSV_FMT.format(float(vals[j, t])) for j in range(c))
            lines.append(f"{t},{row}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MetaCheck:
    field: str
    expected: str
    actual: str
    passed: bool


@dataclass(frozen=True)
class MetaReport:
    dataset: str
    checks: tuple[MetaCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        width = max(len(c.field) for c in self.checks)
        lines = [f"dataset {self.dataset}"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"  {c.field:<{width}}  {status}  expected {c.expected}, got {c.actual}")
        lines.append("overall: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def validate_meta(ds: Dataset, meta: DatasetMeta, split: str | None = None) -> MetaReport:
    """Check a loaded dataset against expected summary stats.

    ``split`` may be "train", "test", or None (size passes if it matches
    either split). The report carries one pass/fail entry per field.
    """
    if split not in (None, "train", "test"):
        raise ValueError(f"split must be train, test or None, got {split!r}")
    n = ds.n_examples
    if split == "train":
        size_ok = n == meta.train_size
        size_exp = f"{meta.train_size} (train)"
    elif split == "test":
        size_ok = n == meta.test_size
        size_exp = f"{meta.test_size} (test)"
    else:
        size_ok = n in (meta.train_size, meta.test_size)
        size_exp = f"{meta.train_size} (train) or {meta.test_size} (test)"
    checks = (
        MetaCheck("size", size_exp, str(n), size_ok),
        MetaCheck("dims", str(meta.dims), str(ds.channels), ds.channels == meta.dims),
        MetaCheck("length", str(meta.length), str(ds.length), ds.length == meta.length),
        MetaCheck("classes", str(meta.classes), str(ds.n_classes), ds.n_classes == meta.classes),
    )
    return MetaReport(ds.name, checks)
