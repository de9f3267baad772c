"""Multi-trial accuracy comparison (avg / max / min over seeded trials) on Iris, Wine and optionally Nursery.

    python scripts/run_table3.py --trials 50 --bins 5
    python scripts/run_table3.py --nursery path/to/nursery.data

Iris and Wine come bundled with scikit-learn and are ordinalized by quantile
binning. Nursery (UCI) is natively ordinal; pass the raw ``nursery.data``
file to include it.
"""

import argparse
import json
import sys

import numpy as np
from sklearn.datasets import load_iris, load_wine

from ordfuzzy import OrdinalDataset, OrdinalizationSpec, RankScale, ordinalize, run_benchmark

NURSERY_SCALES = [
    ("parents", "great_pret < pretentious < usual"),
    ("has_nurs", "very_crit < critical < improper < less_proper < proper"),
    ("form", "foster < incomplete < completed < complete"),
    ("children", "1 < 2 < 3 < more"),
    ("housing", "critical < less_conv < convenient"),
    ("finance", "inconv < convenient"),
    ("social", "problematic < slightly_prob < nonprob"),
    ("health", "not_recom < priority < recommended"),
]


def load_nursery(path):
    scales = [RankScale(tuple(s.strip() for s in spec.split("<"))) for _, spec in NURSERY_SCALES]
    rows, target = [], []
    with open(path) as fh:
        for line in fh:
            cells = line.strip().split(",")
            # the two "recommend" rows are dropped, leaving 12958 rows in 4 classes
            if len(cells) != 9 or cells[8] == "recommend":
                continue
            rows.append(cells[:8])
            target.append(cells[8])
    classes = sorted(set(target))
    labels = np.array([classes.index(t) for t in target])
    return OrdinalDataset.from_labels(rows, scales, labels, [name for name, _ in NURSERY_SCALES]), len(classes)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--bins", type=int, default=5)
    ap.add_argument("--strategy", default="quantile", choices=("quantile", "equal-width"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--nursery", help="path to UCI nursery.data")
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args(argv)

    spec = OrdinalizationSpec(args.bins, args.strategy)
    datasets = []
    for name, loader in (("iris", load_iris), ("wine", load_wine)):
        data = loader()
        datasets.append((name, ordinalize(data.data, spec, labels=data.target), 3))
    if args.nursery:
        ds, c = load_nursery(args.nursery)
        datasets.append(("nursery", ds, c))

    reports = {}
    for name, ds, c in datasets:
        report = run_benchmark(ds, ("fcm", "lmfcm"), args.trials, args.seed, c=c, jobs=args.jobs)
        reports[name] = report.to_dict()
        print(f"== {name} (N={ds.N}, n={ds.n}, c={c}, trials={args.trials})")
        print(report.table())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
