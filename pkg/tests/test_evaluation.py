import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import planted_dataset
from ordfuzzy import OrdinalizationSpec, accuracy, ordinalize, run_benchmark


def brute_accuracy(pred, truth):
    labels_p, labels_t = sorted(set(pred)), sorted(set(truth))
    K = max(len(labels_p), len(labels_t))
    targets = labels_t + [None] * (K - len(labels_t))
    best = 0
    for perm in itertools.permutations(targets, len(labels_p)):
        mapping = dict(zip(labels_p, perm))
        best = max(best, sum(mapping[p] == t for p, t in zip(pred, truth)))
    return best / len(pred)


def test_quantile_median_split():
    assert ordinalize([1, 2, 3, 4], OrdinalizationSpec(2)).values[:, 0].tolist() == [1, 1, 2, 2]


def test_equal_width_endpoints():
    assert ordinalize([0, 10], OrdinalizationSpec(2, "equal-width")).values[:, 0].tolist() == [1, 2]


def test_boundary_goes_to_lower_rank():
    assert ordinalize([1, 1, 1, 9], OrdinalizationSpec(2)).values[:, 0].tolist() == [1, 1, 1, 2]


def test_constant_feature_warns(caplog):
    ds = ordinalize([[3.0], [3.0], [3.0]], OrdinalizationSpec(3))
    assert ds.values[:, 0].tolist() == [1, 1, 1]
    assert "constant" in caplog.text


def test_spec_validation():
    with pytest.raises(ValueError):
        OrdinalizationSpec(1)
    with pytest.raises(ValueError):
        OrdinalizationSpec(3, "kmeans")


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=60), st.integers(2, 8),
       st.sampled_from(["quantile", "equal-width"]))
def test_ordinalize_is_monotone(col, m, strategy):
    ranks = ordinalize(col, OrdinalizationSpec(m, strategy)).values[:, 0]
    order = np.argsort(col, kind="stable")
    assert np.all(np.diff(ranks[order]) >= 0)
    assert ranks.min() >= 1 and ranks.max() <= m


def test_accuracy_examples():
    assert accuracy([0, 1, 2], [0, 1, 2]) == 1.0
    assert accuracy([1, 0, 2], [0, 1, 2]) == 1.0
    assert accuracy([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75
    with pytest.raises(ValueError, match="length mismatch"):
        accuracy([0, 1], [0])


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=40))
def test_accuracy_matches_bruteforce(pairs):
    pred, truth = map(list, zip(*pairs))
    assert accuracy(pred, truth) == pytest.approx(brute_accuracy(pred, truth))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=40), st.permutations(range(5)))
def test_accuracy_permutation_invariant(pred, perm):
    truth = [(x * 7 + 3) % 3 for x in range(len(pred))]
    relabelled = [perm[x] for x in pred]
    assert accuracy(relabelled, truth) == accuracy(pred, truth)


def test_large_cluster_count_uses_assignment():
    rng = np.random.default_rng(0)
    truth = rng.integers(0, 10, 200)
    perm = rng.permutation(10)
    assert accuracy(perm[truth], truth) == 1.0


def test_benchmark_single_trial():
    report = run_benchmark(planted_dataset(), trials=1, c=2)
    for s in report.methods.values():
        assert s.avg == s.min == s.max


def test_benchmark_planted_groups_perfect():
    report = run_benchmark(planted_dataset(per_group=10), trials=10, c=2)
    for s in report.methods.values():
        assert s.avg == 1.0 and s.failures == 0


def test_benchmark_deterministic_and_aggregates():
    ds = ordinalize(np.random.default_rng(1).normal(size=(30, 3)), labels=np.arange(30) % 3)
    a = run_benchmark(ds, trials=5, base_seed=9, c=3).to_dict()
    b = run_benchmark(ds, trials=5, base_seed=9, c=3).to_dict()
    assert a == b
    for m in a["methods"].values():
        ok = [x for x in m["accuracies"] if x is not None]
        assert m["avg"] == pytest.approx(sum(ok) / len(ok))
        assert m["min"] == min(ok) and m["max"] == max(ok)
        assert m["seeds"] == list(range(9, 14))


def test_benchmark_records_failures():
    # three identical observations: FCM degenerates and must be counted, not raised
    from ordfuzzy import OrdinalDataset
    ds = OrdinalDataset.from_ranks(np.ones((3, 2), dtype=int), labels=[0, 1, 1])
    report = run_benchmark(ds, methods=("fcm",), trials=2, c=2)
    assert report.methods["fcm"].failures == 2
    assert all("Degenerate" in e for e in report.methods["fcm"].errors)


def test_benchmark_parallel_matches_serial():
    ds = planted_dataset()
    a = run_benchmark(ds, trials=4, c=2, jobs=1).to_dict()
    b = run_benchmark(ds, trials=4, c=2, jobs=2).to_dict()
    assert a == b


def test_benchmark_requires_labels():
    with pytest.raises(ValueError):
        run_benchmark(planted_dataset().unlabeled(), trials=1)
