import json

import numpy as np
import pytest

from ordfuzzy import DataError, OrdinalizationSpec, ordinalize
from ordfuzzy.cli import SCHEMA, RunConfig, load_csv, main, parse_scales, read_result, run


@pytest.fixture
def graded(tmp_path):
    csv_path = tmp_path / "grades.csv"
    csv_path.write_text("course1,course2\nA,C\nC,A\n", encoding="utf-8")
    scales = tmp_path / "scales.txt"
    scales.write_text("# grade scales\ncourse1: A < B < C\ncourse2: A < B < C\n", encoding="utf-8")
    return csv_path, scales


@pytest.fixture
def planted_csv(tmp_path):
    path = tmp_path / "planted.csv"
    rows = ["a,b,c,label"] + ["1,1,1,low"] * 10 + ["3,3,3,high"] * 10
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def numeric_csv(tmp_path):
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(0, 1, (15, 2)), rng.normal(6, 1, (15, 2))])
    path = tmp_path / "numeric.csv"
    lines = ["u,v,label"] + [f"{x:.6f},{y:.6f},{int(j >= 15)}" for j, (x, y) in enumerate(X)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path, X


def test_load_with_scales(graded):
    csv_path, scales = graded
    ds = load_csv(csv_path, parse_scales(scales.read_text()))
    assert ds.values.tolist() == [[1, 3], [3, 1]]
    assert ds.feature_names == ("course1", "course2")


def test_unknown_category_names_row(tmp_path, graded):
    _, scales = graded
    bad = tmp_path / "bad.csv"
    bad.write_text("course1,course2\nD,A\n", encoding="utf-8")
    with pytest.raises(DataError, match="row 1"):
        load_csv(bad, parse_scales(scales.read_text()))


def test_ragged_rows(tmp_path):
    bad = tmp_path / "ragged.csv"
    bad.write_text("a,b\n1,2\n1\n", encoding="utf-8")
    with pytest.raises(DataError, match="row 2"):
        load_csv(bad)


def test_numeric_ordinalized(numeric_csv):
    path, X = numeric_csv
    ds = load_csv(path, ordinal_spec=OrdinalizationSpec(5))
    expected = ordinalize(np.round(X, 6), OrdinalizationSpec(5)).values
    np.testing.assert_array_equal(ds.values, expected)
    assert ds.labels.tolist() == [0] * 15 + [1] * 15


def test_labels_read(planted_csv):
    ds = load_csv(planted_csv)
    assert ds.n == 3 and ds.N == 20
    assert sorted(set(ds.labels.tolist())) == [0, 1]


def test_cluster_recovers_planted_groups(planted_csv, tmp_path):
    out = tmp_path / "out.json"
    assert main(["cluster", "--input", str(planted_csv), "--seed", "4", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == SCHEMA
    assert doc["config"]["seed"] == 4
    a = doc["result"]["assignment"]
    assert len(set(a[:10])) == 1 and len(set(a[10:])) == 1 and a[0] != a[10]


@pytest.mark.parametrize("method", ["lmfcm", "fcm"])
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_cluster_deterministic_and_round_trips(planted_csv, tmp_path, method, fmt):
    out = tmp_path / f"r.{fmt}"
    blobs = []
    for _ in range(2):
        assert main(["cluster", "--input", str(planted_csv), "--method", method, "--seed", "1",
                     "--format", fmt, "--output", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]
    doc = read_result(out)
    assert doc["schema"] == SCHEMA
    assert doc["config"]["method"] == [method]
    assert doc["memberships"].shape == (20, 2)


def test_round_trip_is_exact(tmp_path, numeric_csv):
    path, _ = numeric_csv
    for fmt in ("json", "csv"):
        out = tmp_path / f"soft.{fmt}"
        assert main(["cluster", "--input", str(path), "--ordinalize", "m=4", "--no-neighbor-rule",
                     "--seed", "2", "--format", fmt, "--output", str(out)]) == 0
        if fmt == "json":
            stored = np.array(json.loads(out.read_text())["result"]["memberships"])
            reference = stored
        assert read_result(out)["memberships"].tobytes() == reference.tobytes()


def test_fuzzify_command(graded, tmp_path):
    csv_path, scales = graded
    out = tmp_path / "fz.json"
    assert main(["fuzzify", "--input", str(csv_path), "--scales", str(scales), "--seed", "0",
                 "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    feat = doc["result"]["features"][0]
    assert feat["levels"] == ["A", "B", "C"]
    assert feat["counts"] == [1, 0, 1]
    assert doc["result"]["fuzzified"] == [[0.25, 0.75], [0.75, 0.25]]


def test_benchmark_single_trial(planted_csv, tmp_path):
    out = tmp_path / "bench.json"
    assert main(["benchmark", "--input", str(planted_csv), "--trials", "1", "--seed", "0",
                 "--output", str(out)]) == 0
    methods = json.loads(out.read_text())["result"]["methods"]
    assert set(methods) == {"fcm", "lmfcm"}
    for m in methods.values():
        assert m["avg"] == m["min"] == m["max"] == 1.0
        assert "seconds" not in m


def test_benchmark_deterministic(planted_csv, tmp_path):
    out = tmp_path / "b.json"
    blobs = []
    for _ in range(2):
        assert main(["benchmark", "--input", str(planted_csv), "--trials", "3", "--seed", "5",
                     "--output", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_missing_seed_is_embedded(planted_csv, tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["cluster", "--input", str(planted_csv), "--output", str(out)]) == 0
    seed = json.loads(out.read_text())["config"]["seed"]
    assert isinstance(seed, int)
    assert f"seed: {seed}" in capsys.readouterr().err


def test_exit_codes(planted_csv, tmp_path, graded):
    assert main(["cluster", "--input", str(planted_csv), "--beta", "1.0"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["cluster"])
    assert exc.value.code == 1
    assert main(["cluster", "--input", str(tmp_path / "missing.csv"), "--seed", "0"]) == 2
    csv_path, _ = graded
    assert main(["cluster", "--input", str(csv_path), "--seed", "0"]) == 2  # letters without scales
    # two profiles, three clusters: every restart empties a cluster
    assert main(["cluster", "--input", str(planted_csv), "--clusters", "3", "--no-neighbor-rule",
                 "--seed", "0", "--output", str(tmp_path / "x.json")]) == 3
    assert main(["benchmark", "--input", str(csv_path), "--seed", "0",
                 "--scales", str(graded[1])]) == 2  # no label column


def test_run_accepts_config_object(planted_csv, tmp_path):
    cfg = RunConfig(command="cluster", input=str(planted_csv), seed=0, output=str(tmp_path / "o.json"))
    assert run(cfg) == 0
