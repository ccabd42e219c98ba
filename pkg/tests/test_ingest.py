import random
from pathlib import Path

import numpy as np
import pytest

from mtsaug import (
    BinaryFormatError,
    LabeledExample,
    RandomStream,
    Series,
    TsParseError,
    dataset_meta,
    export_csv,
    load_dataset,
    one_hot,
    parse_ts,
    read_binary,
    save_binary,
    serialize_ts,
    validate_meta,
    write_binary,
)
from synth import random_dataset

SMALL_TS = """\
@problemName tiny
@timeStamps false
@univariate false
@equalLength true
@seriesLength 2
@classLabel true a b
@data
1,2:3,4:a
5,6:7,8:b
"""


class TestParseTs:
    def test_small_document(self):
        ds = parse_ts(SMALL_TS)
        assert ds.name == "tiny"
        assert ds.class_names == ["a", "b"]
        assert ds.n_examples == 2 and ds.channels == 2 and ds.length == 2
        assert ds.examples[0].series.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]
        assert ds.examples[0].label.tolist() == [1.0, 0.0]
        assert ds.examples[1].label.tolist() == [0.0, 1.0]

    def test_header_keys_case_insensitive(self):
        text = SMALL_TS.replace("@problemName", "@PROBLEMNAME").replace("@seriesLength", "@SeriesLength")
        assert parse_ts(text).name == "tiny"

    def test_comments_and_blank_lines_ignored(self):
        text = "# archive comment\n\n" + SMALL_TS
        assert parse_ts(text).n_examples == 2

    def test_missing_data_tag(self):
        with pytest.raises(TsParseError, match="@data"):
            parse_ts(SMALL_TS.replace("@data\n", ""))

    def test_ragged_channel_reports_line(self):
        bad = SMALL_TS.replace("5,6:7,8:b", "5,6:7:b")
        with pytest.raises(TsParseError, match="line 9") as err:
            parse_ts(bad)
        assert "ragged" in str(err.value)

    def test_unknown_class_label(self):
        bad = SMALL_TS.replace("5,6:7,8:b", "5,6:7,8:zzz")
        with pytest.raises(TsParseError, match="zzz"):
            parse_ts(bad)

    def test_unequal_length_rejected(self):
        bad = SMALL_TS.replace("@equalLength true", "@equalLength false")
        with pytest.raises(TsParseError, match="equal"):
            parse_ts(bad)

    def test_timestamps_rejected(self):
        bad = SMALL_TS.replace("@timeStamps false", "@timeStamps true")
        with pytest.raises(TsParseError, match="timestamp"):
            parse_ts(bad)

    def test_missing_values_rejected(self):
        bad = SMALL_TS.replace("1,2:3,4:a", "1,?:3,4:a")
        with pytest.raises(TsParseError, match="missing values"):
            parse_ts(bad)

    def test_inconsistent_channel_count(self):
        bad = SMALL_TS.replace("5,6:7,8:b", "5,6:b")
        with pytest.raises(TsParseError, match="channels"):
            parse_ts(bad)

    def test_no_cases(self):
        header_only = SMALL_TS.split("@data\n")[0] + "@data\n"
        with pytest.raises(TsParseError, match="no data"):
            parse_ts(header_only)

    def test_round_trip_generated_datasets(self):
        root = RandomStream(21)
        for case in range(10):
            s = root.derive(case)
            ds = random_dataset(s, n=s.uniform_int(2, 12), c=s.uniform_int(1, 4),
                                l=s.uniform_int(1, 16), k=s.uniform_int(2, 4))
            assert parse_ts(serialize_ts(ds)) == ds

    def test_archive_file_if_present(self):
        path = Path("data/BasicMotions_TRAIN.ts")
        if not path.exists():
            pytest.skip("BasicMotions_TRAIN.ts not on disk")
        ds = parse_ts(path.read_text())
        assert (ds.n_examples, ds.channels, ds.length, ds.n_classes) == (40, 6, 100, 4)


class TestBinaryFormat:
    def test_round_trip_bitwise(self):
        ds = random_dataset(RandomStream(22), n=7, c=3, l=11, k=3)
        blob = write_binary(ds)
        back = read_binary(blob)
        assert back == ds
        assert write_binary(back) == blob

    def test_bad_magic(self):
        blob = bytearray(write_binary(random_dataset(RandomStream(23), 2, 1, 4)))
        blob[:4] = b"NOPE"
        with pytest.raises(BinaryFormatError, match="magic"):
            read_binary(bytes(blob))

    def test_unsupported_version(self):
        blob = bytearray(write_binary(random_dataset(RandomStream(24), 2, 1, 4)))
        blob[4] = 99
        with pytest.raises(BinaryFormatError, match="version"):
            read_binary(bytes(blob))

    def test_truncation(self):
        blob = write_binary(random_dataset(RandomStream(25), 3, 2, 8))
        with pytest.raises(BinaryFormatError, match="truncated"):
            read_binary(blob[:-5])

    def test_trailing_bytes(self):
        blob = write_binary(random_dataset(RandomStream(26), 2, 1, 4))
        with pytest.raises(BinaryFormatError, match="trailing"):
            read_binary(blob + b"\x00")

    def test_load_dataset_by_extension(self, tmp_path):
        ds = random_dataset(RandomStream(27), 3, 2, 6)
        save_binary(ds, tmp_path / "x.mtsb")
        assert load_dataset(tmp_path / "x.mtsb") == ds
        (tmp_path / "y.ts").write_text(serialize_ts(ds))
        assert load_dataset(tmp_path / "y.ts") == ds
        with pytest.raises(ValueError, match="extension"):
            load_dataset(tmp_path / "z.json")


class TestFuzzing:
    def test_ts_parser_only_raises_parse_errors(self):
        rng = random.Random(12345)
        alphabet = "@daclsb:,.0123456789 \n\t?#eqtrunfxyz-"
        for _ in range(300):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 2000)))
            try:
                parse_ts(text)
            except TsParseError:
                pass

    def test_mutated_valid_ts_never_crashes(self):
        rng = random.Random(54321)
        base = SMALL_TS
        for _ in range(300):
            chars = list(base)
            for _ in range(rng.randint(1, 8)):
                pos = rng.randrange(len(chars))
                op = rng.random()
                if op < 0.4:
                    chars[pos] = rng.choice("@:,?xX9 \n")
                elif op < 0.7:
                    del chars[pos]
                else:
                    chars.insert(pos, rng.choice("@:,?xX9 \n"))
            try:
                parse_ts("".join(chars))
            except TsParseError:
                pass

    def test_megabyte_scale_inputs_error_cleanly(self):
        rng = random.Random(77)
        big_text = "".join(rng.choice("@data\n123,:ab ") for _ in range(1_000_000))
        with pytest.raises(TsParseError):
            parse_ts(big_text)
        big_bytes = bytes(rng.randrange(256) for _ in range(1_000_000))
        with pytest.raises(BinaryFormatError):
            read_binary(big_bytes)

    def test_huge_header_dims_rejected_before_allocation(self):
        import struct

        from mtsaug.ingest import MTSB_MAGIC, MTSB_VERSION

        blob = (
            MTSB_MAGIC
            + struct.pack("<H", MTSB_VERSION)
            + struct.pack("<H", 0)  # empty dataset name
            + struct.pack("<IIII", 2, 0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF)
            + struct.pack("<H", 0) * 2  # two empty class names
        )
        with pytest.raises(BinaryFormatError, match="truncated"):
            read_binary(blob)

    def test_binary_reader_only_raises_format_errors(self):
        rng = random.Random(999)
        valid = write_binary(random_dataset(RandomStream(28), 3, 2, 5))
        for _ in range(300):
            if rng.random() < 0.5:
                blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 400)))
            else:
                blob = bytearray(valid)
                for _ in range(rng.randint(1, 10)):
                    blob[rng.randrange(len(blob))] = rng.randrange(256)
                blob = bytes(blob[: rng.randint(0, len(blob))])
            try:
                read_binary(blob)
            except BinaryFormatError:
                pass


class TestExportCsv:
    def test_empty_list_header_only(self):
        assert export_csv([]) == "time\n"

    def test_single_value_series_two_line_body(self):
        ex = LabeledExample(Series([[3.5]]), [1.0])
        text = export_csv([ex])
        lines = text.strip().split("\n")
        assert lines[0] == "time,ch0"
        assert lines[1].startswith("# example 0 label ")
        assert lines[2] == "0,3.5"
        assert len(lines) == 3

    def test_block_per_example(self):
        exs = [
            LabeledExample(Series([[1.0, 2.0], [3.0, 4.0]]), one_hot(i % 2, 2))
            for i in range(3)
        ]
        lines = export_csv(exs).strip().split("\n")
        assert lines[0] == "time,ch0,ch1"
        assert len(lines) == 1 + 3 * (1 + 2)
        assert sum(1 for l in lines if l.startswith("# example")) == 3

    def test_nine_significant_digits_round_trip_float32(self):
        val = np.float32(0.123456789)
        ex = LabeledExample(Series([[val]]), [1.0])
        text = export_csv([ex])
        cell = text.strip().split("\n")[-1].split(",")[1]
        assert np.float32(float(cell)) == val

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            export_csv([], mode="long")


class TestValidateMeta:
    def test_self_consistent_dataset_passes(self):
        ds = random_dataset(RandomStream(29), n=15, c=2, l=640, k=3, name="AtrialFibrillation")
        meta = dataset_meta("AtrialFibrillation")
        report = validate_meta(ds, meta)
        assert report.passed
        assert {c.field for c in report.checks} == {"size", "dims", "length", "classes"}

    def test_af_expectations(self):
        meta = dataset_meta("AF")
        assert (meta.train_size, meta.test_size, meta.dims, meta.length, meta.classes) == (
            15, 15, 2, 640, 3,
        )

    def test_length_mismatch_fails(self):
        ds = random_dataset(RandomStream(30), n=15, c=2, l=99, k=3)
        report = validate_meta(ds, dataset_meta("AtrialFibrillation"))
        failed = {c.field for c in report.checks if not c.passed}
        assert "length" in failed
        assert not report.passed
        assert "FAIL" in report.to_text()

    def test_split_specific_size(self):
        ds = random_dataset(RandomStream(31), n=40, c=6, l=100, k=4)
        meta = dataset_meta("BasicMotions")
        assert validate_meta(ds, meta, split="train").passed
        ds_bad = random_dataset(RandomStream(32), n=41, c=6, l=100, k=4)
        assert not validate_meta(ds_bad, meta, split="train").passed

    def test_unknown_dataset_name(self):
        with pytest.raises(KeyError, match="unknown dataset"):
            dataset_meta("NotADataset")

    def test_all_26_entries_present(self):
        from mtsaug import ARCHIVE_METADATA
        assert len(ARCHIVE_METADATA) == 26
        assert dataset_meta("BM").name == "BasicMotions"
