"""Command-line front end: ``ordfuzzy {fuzzify,cluster,benchmark}``.

Input is a UTF-8 CSV with a header row and an optional final ``label``
column. Categorical cells are mapped through a scales file with lines like

    grade: D < C < B < A

Features without a scale are read as integer ranks, or binned with
``--ordinalize m=5[,strategy=quantile|equal-width]`` when they are numeric.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ordfuzzy.core import DataError, OrdinalDataset, RankScale, hard_assignment
from ordfuzzy.evaluation import METHODS, OrdinalizationSpec, ordinalize, run_benchmark
from ordfuzzy.fcm import DegenerateClusterError, FcmConfig, fcm_run
from ordfuzzy.fuzzify import build_tables, fuzzify_dataset
from ordfuzzy.lmfcm import LmfcmConfig, lmfcm_run

SCHEMA = "ordfuzzy.result/1"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ENGINE = 0, 1, 2, 3

log = logging.getLogger("ordfuzzy")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    scales: str | None = None
    method: list[str] = field(default_factory=lambda: ["lmfcm"])
    clusters: int = 2
    beta: float = 2.0
    epsilon: float | None = None
    max_iters: int = 300
    seed: int | None = None
    p_floor: float = 1e-6
    neighbor_rule: bool = True
    ordinalize: str | None = None  # e.g. "m=5,strategy=quantile"
    trials: int = 50
    jobs: int = 1
    output: str | None = None
    format: str = "json"
    timings: bool = False

    def lmfcm(self) -> LmfcmConfig:
        eps = {} if self.epsilon is None else {"epsilon": self.epsilon}
        return LmfcmConfig(c=self.clusters, beta=self.beta, max_iters=self.max_iters, seed=self.seed,
                           p_floor=self.p_floor, neighbor_rule=self.neighbor_rule, **eps)

    def fcm(self) -> FcmConfig:
        eps = {} if self.epsilon is None else {"epsilon": self.epsilon}
        return FcmConfig(c=self.clusters, beta=self.beta, max_iters=self.max_iters, seed=self.seed, **eps)


def parse_scales(text: str) -> dict[str, RankScale]:
    scales = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        if not sep:
            raise DataError(f"scales line {lineno}: expected 'feature: a < b < ...'")
        scales[name.strip()] = RankScale(tuple(x.strip() for x in rest.split("<")))
    return scales


def parse_ordinalize(text: str | None) -> OrdinalizationSpec | None:
    if not text:
        return None
    opts = dict(item.split("=", 1) for item in text.split(",") if "=" in item)
    try:
        return OrdinalizationSpec(int(opts.get("m", 5)), opts.get("strategy", "quantile"))
    except ValueError as exc:
        raise UsageError(f"bad --ordinalize value {text!r}: {exc}") from None


def load_csv(path, scales: dict[str, RankScale] | None = None,
             ordinal_spec: OrdinalizationSpec | None = None) -> OrdinalDataset:
    """Read a header-row CSV into an ordinal dataset (label column optional, last)."""
    scales = scales or {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    for i, row in enumerate(body, 1):
        if len(row) != len(header):
            raise DataError(f"row {i}: expected {len(header)} cells, got {len(row)}")
    has_label = header[-1].lower() == "label"
    names = header[:-1] if has_label else header
    labels = None
    if has_label:
        raw = [r[-1].strip() for r in body]
        classes = sorted(set(raw), key=lambda s: (not _is_int(s), int(s) if _is_int(s) else 0, s))
        labels = np.array([classes.index(s) for s in raw])
    n = len(names)
    if not body:
        raise DataError(f"{path}: no observations")

    numeric_cols = [k for k, name in enumerate(names) if name not in scales]
    if ordinal_spec is not None and numeric_cols:
        try:
            raw = np.array([[float(r[k]) for k in numeric_cols] for r in body])
        except ValueError as exc:
            raise DataError(f"non-numeric cell in a feature without scale: {exc}") from None
        binned = ordinalize(raw, ordinal_spec).values
    values = np.zeros((len(body), n), dtype=np.int64)
    out_scales = []
    for k, name in enumerate(names):
        if name in scales:
            scale = scales[name]
            for i, row in enumerate(body, 1):
                try:
                    values[i - 1, k] = scale.rank(row[k].strip())
                except DataError:
                    raise DataError(f"row {i}, column {name!r}: unknown category {row[k].strip()!r}") from None
        elif ordinal_spec is not None:
            values[:, k] = binned[:, numeric_cols.index(k)]
            scale = RankScale.numeric(ordinal_spec.bins_per_feature)
        else:
            for i, row in enumerate(body, 1):
                if not _is_int(row[k].strip()) or int(row[k]) < 1:
                    raise DataError(f"row {i}, column {name!r}: {row[k]!r} is not a rank >= 1")
                values[i - 1, k] = int(row[k])
            scale = RankScale.numeric(int(values[:, k].max()))
        out_scales.append(scale)
    ds = OrdinalDataset(values, tuple(out_scales), labels, tuple(names))
    ds.check()
    return ds


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def _config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d.pop("timings")
    return d


def cmd_fuzzify(ds: OrdinalDataset, cfg: RunConfig) -> dict:
    tables = build_tables(ds)
    return {
        "features": [dict(name=name, levels=list(s.levels), **t.to_dict())
                     for name, s, t in zip(ds.feature_names, ds.scales, tables)],
        "fuzzified": fuzzify_dataset(ds, tables).tolist(),
    }


def cmd_cluster(ds: OrdinalDataset, cfg: RunConfig) -> dict:
    if len(cfg.method) != 1:
        raise UsageError("cluster takes exactly one --method")
    method = cfg.method[0]
    if method == "lmfcm":
        res = lmfcm_run(ds.unlabeled(), cfg.lmfcm())
        out = {"modes": res.state.modes.tolist(), "cluster_order": res.state.cluster_order.tolist(),
               "fuzzy_memberships": res.fuzzy_memberships.tolist(), "restarts": res.restarts,
               "coincident_modes": res.coincident_modes}
    else:
        res = fcm_run(ds.values.astype(float), cfg.fcm())
        out = {"centroids": res.centroids.tolist()}
    out.update(memberships=res.memberships.tolist(), assignment=hard_assignment(res.memberships).tolist(),
               objective_trace=list(res.objective_trace), iterations=res.iterations, converged=res.converged)
    return out


def cmd_benchmark(ds: OrdinalDataset, cfg: RunConfig) -> dict:
    if ds.labels is None:
        raise DataError("benchmark needs a 'label' column")
    kwargs = {} if cfg.epsilon is None else {"epsilon": cfg.epsilon, "fcm_epsilon": cfg.epsilon}
    report = run_benchmark(ds, cfg.method, cfg.trials, cfg.seed, c=cfg.clusters, beta=cfg.beta,
                           max_iters=cfg.max_iters, p_floor=cfg.p_floor, neighbor_rule=cfg.neighbor_rule,
                           jobs=cfg.jobs, **kwargs)
    log.info("\n%s", report.table())
    return report.to_dict(timings=cfg.timings)


COMMANDS = {"fuzzify": cmd_fuzzify, "cluster": cmd_cluster, "benchmark": cmd_benchmark}


def _csv_text(cfg: RunConfig, result: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n# config: {json.dumps(_config_dict(cfg), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    if cfg.command == "fuzzify":
        writer.writerow([f["name"] for f in result["features"]])
        writer.writerows(result["fuzzified"])
    elif cfg.command == "cluster":
        c = len(result["memberships"][0])
        writer.writerow(["observation", "assignment"] + [f"w{i}" for i in range(c)])
        for j, (a, row) in enumerate(zip(result["assignment"], result["memberships"])):
            writer.writerow([j, a] + row)
    else:
        writer.writerow(["method", "trial", "seed", "accuracy", "iterations", "error"])
        for name, m in result["methods"].items():
            for t, (seed, acc, it, err) in enumerate(zip(m["seeds"], m["accuracies"], m["iterations"],
                                                         m["errors"])):
                writer.writerow([name, t, seed, "" if acc is None else acc, "" if it is None else it, err or ""])
    return buf.getvalue()


def render(cfg: RunConfig, result: dict) -> str:
    if cfg.format == "csv":
        return _csv_text(cfg, result)
    doc = {"schema": SCHEMA, "command": cfg.command, "config": _config_dict(cfg), "result": result}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def read_result(path) -> dict:
    """Load a result file written by :func:`run`; memberships come back as an array."""
    text = Path(path).read_text(encoding="utf-8")
    if text.startswith("# schema:"):
        lines = text.splitlines()
        schema = lines[0].split(":", 1)[1].strip()
        config = json.loads(lines[1].split(":", 1)[1])
        rows = list(csv.reader(lines[2:]))
        header, body = rows[0], rows[1:]
        doc = {"schema": schema, "config": config, "header": header, "rows": body}
        if header[:2] == ["observation", "assignment"]:
            doc["assignment"] = np.array([int(r[1]) for r in body])
            doc["memberships"] = np.array([[float(x) for x in r[2:]] for r in body])
        return doc
    doc = json.loads(text)
    if "memberships" in doc.get("result", {}):
        doc["memberships"] = np.array(doc["result"]["memberships"])
    return doc


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        if cfg.command not in COMMANDS:
            raise UsageError(f"unknown command {cfg.command!r}")
        if cfg.format not in ("json", "csv"):
            raise UsageError(f"unknown format {cfg.format!r}")
        for m in cfg.method:
            if m not in METHODS:
                raise UsageError(f"unknown method {m!r}")
        try:
            cfg.lmfcm()
            if cfg.clusters >= 2:
                cfg.fcm()
            spec = parse_ordinalize(cfg.ordinalize)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if cfg.trials < 1 or cfg.jobs < 1:
            raise UsageError("--trials and --jobs must be >= 1")
        if cfg.seed is None:
            cfg.seed = int(np.random.SeedSequence().entropy % 2**32)
            print(f"seed: {cfg.seed}", file=sys.stderr)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        scales = parse_scales(Path(cfg.scales).read_text(encoding="utf-8")) if cfg.scales else None
        ds = load_csv(cfg.input, scales, spec)
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return EXIT_DATA

    try:
        result = COMMANDS[cfg.command](ds, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return EXIT_DATA
    except (DegenerateClusterError, ValueError, RuntimeError) as exc:
        print(json.dumps({"error": "engine", "type": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_ENGINE

    text = render(cfg, result)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="CSV file with header row")
    common.add_argument("--scales", help="scales file, one 'feature: a < b < c' per line")
    common.add_argument("--method", default=None,
                        help="fcm or lmfcm (benchmark: comma list, default fcm,lmfcm)")
    common.add_argument("--clusters", type=int, default=2)
    common.add_argument("--beta", type=float, default=2.0)
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--max-iters", type=int, default=300)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--p-floor", type=float, default=1e-6)
    common.add_argument("--neighbor-rule", action=argparse.BooleanOptionalAction, default=True)
    common.add_argument("--ordinalize", default=None, metavar="m=5[,strategy=quantile]")
    common.add_argument("--trials", type=int, default=50)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--output", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true", help="include wall-clock times in benchmark output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ordfuzzy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("fuzzify", parents=[common], help="emit fuzzification tables and fuzzified data")
    sub.add_parser("cluster", parents=[common], help="run one clustering engine")
    sub.add_parser("benchmark", parents=[common], help="multi-trial accuracy benchmark")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.method is None:
        methods = list(METHODS) if args.command == "benchmark" else ["lmfcm"]
    else:
        methods = [m.strip() for m in args.method.split(",") if m.strip()]
    cfg = RunConfig(command=args.command, input=args.input, scales=args.scales, method=methods,
                    clusters=args.clusters, beta=args.beta, epsilon=args.epsilon, max_iters=args.max_iters,
                    seed=args.seed, p_floor=args.p_floor, neighbor_rule=args.neighbor_rule,
                    ordinalize=args.ordinalize, trials=args.trials,
                    jobs=args.jobs, output=args.output, format=args.format, timings=args.timings)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
