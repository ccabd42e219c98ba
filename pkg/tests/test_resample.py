from collections import Counter

import pytest

from mtsaug import Dataset, RandomStream, resample_indices, resample_split, split_spec
from synth import random_dataset


def label_counts(ds: Dataset) -> Counter:
    return Counter(int(v) for v in ds.hard_labels())


def multiset_of_values(ds: Dataset):
    return Counter((ex.series.values.tobytes(), ex.label.tobytes()) for ex in ds.examples)


@pytest.fixture
def toy_split():
    train = random_dataset(RandomStream(100), n=9, c=2, l=8, k=3, name="toy")
    test = random_dataset(RandomStream(101), n=6, c=2, l=8, k=3, name="toy")
    return train, test


class TestResampleSplit:
    def test_fold_zero_is_original(self, toy_split):
        train, test = toy_split
        new_train, new_test = resample_split(train, test, 0, seed=7)
        assert new_train is train and new_test is test

    def test_counts_and_multiset_preserved(self, toy_split):
        train, test = toy_split
        for fold in range(1, 8):
            new_train, new_test = resample_split(train, test, fold, seed=7)
            assert label_counts(new_train) == label_counts(train)
            assert label_counts(new_test) == label_counts(test)
            combined = multiset_of_values(new_train) + multiset_of_values(new_test)
            assert combined == multiset_of_values(train) + multiset_of_values(test)
            assert new_train.n_examples == train.n_examples
            assert new_test.n_examples == test.n_examples

    def test_deterministic_across_runs(self, toy_split):
        train, test = toy_split
        runs = [
            [resample_indices(train.hard_labels(), test.hard_labels(), 3, f, 42) for f in range(1, 30)]
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_folds_differ_from_each_other(self, toy_split):
        train, test = toy_split
        assignments = {
            tuple(resample_indices(train.hard_labels(), test.hard_labels(), 3, f, 42)[0])
            for f in range(1, 30)
        }
        assert len(assignments) > 1

    def test_seed_changes_assignment(self, toy_split):
        train, test = toy_split
        a = resample_indices(train.hard_labels(), test.hard_labels(), 3, 1, 1)
        b = resample_indices(train.hard_labels(), test.hard_labels(), 3, 1, 2)
        assert a != b

    def test_no_overlap_and_full_cover(self, toy_split):
        train, test = toy_split
        n = train.n_examples + test.n_examples
        for fold in range(5):
            tr, te = resample_indices(train.hard_labels(), test.hard_labels(), 3, fold, 9)
            assert not set(tr) & set(te)
            assert sorted(tr + te) == list(range(n))

    def test_mismatched_class_sets_rejected(self):
        train = random_dataset(RandomStream(102), n=4, c=1, l=4, k=2)
        test = random_dataset(RandomStream(103), n=4, c=1, l=4, k=3)
        with pytest.raises(ValueError):
            resample_split(train, test, 1, 0)

    def test_mismatched_shapes_rejected(self):
        train = random_dataset(RandomStream(104), n=4, c=1, l=4, k=2)
        test = random_dataset(RandomStream(105), n=4, c=1, l=5, k=2)
        with pytest.raises(ValueError):
            resample_split(train, test, 1, 0)

    def test_negative_fold_rejected(self, toy_split):
        train, test = toy_split
        with pytest.raises(ValueError):
            resample_indices(train.hard_labels(), test.hard_labels(), 3, -1, 0)

    def test_out_of_range_label_rejected(self):
        with pytest.raises(ValueError):
            resample_indices([0, 5], [0], 3, 1, 0)


class TestSplitSpec:
    def test_spec_counts(self, toy_split):
        train, test = toy_split
        spec = split_spec(train, test, 4, 99)
        assert spec.fold_index == 4 and spec.seed == 99
        assert spec.per_class_train_counts == dict(label_counts(train))
        assert spec.per_class_test_counts == dict(label_counts(test))
