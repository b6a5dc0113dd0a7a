"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataprep import (
    DataFormatError,
    PreprocessSpec,
    find_first_csv,
    prepare,
)
from .harness import DataSourceError, ExperimentConfig, resolve_data, run_experiment
from .learners import KINDS
from .metrics import evaluate_results
from .pu import PuConfig, PuModel, fit_pu, scar_label
from .report import FORMATS, canonical_json, render_markdown
from .synth import SynthConfig, write_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3

log = logging.getLogger("pudetect")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _add_prep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--label-col", type=int, default=None,
                   help="label column index (default: last)")
    p.add_argument("--positive", default="Benign", help="label text mapped to class 1")
    p.add_argument("--threshold", type=int, default=10**15,
                   help="magnitude above which numbers are replaced by their hash")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prepared", action="store_true",
                   help="data is an already prepared integer CSV (label last)")
    _add_prep_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pudetect", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prepare", help="clean a raw flow CSV into an integer CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path)
    src.add_argument("--discover", type=Path, help="use the first CSV in this directory")
    p.add_argument("--output", type=Path, required=True)
    _add_prep_flags(p)

    p = sub.add_parser("synth", help="write a synthetic labeled flow CSV")
    p.add_argument("--rows", type=int, default=10_000)
    p.add_argument("--features", type=int, default=20)
    p.add_argument("--alpha", type=float, default=0.5, help="positive (benign) prevalence")
    p.add_argument("--delta", type=float, default=2.0, help="class mean separation")
    p.add_argument("--categorical", type=int, default=None)
    p.add_argument("--heavy-tail", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("compare", help="fit every PU model and write comparison reports")
    p.add_argument("--data", type=Path, required=True, help="CSV file or directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scar-c", type=float, default=0.5)
    p.add_argument("--holdout", type=float, default=0.1)
    p.add_argument("--models", type=_csv_list, default=KINDS)
    p.add_argument("--split", type=float, default=0.8)
    p.add_argument("--report-dir", type=Path, required=True)
    p.add_argument("--formats", type=_csv_list, default=("json", "csv", "md"))
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="threads for forest training")
    p.add_argument("--timings", action="store_true",
                   help="record wall-clock training time (makes JSON non-reproducible)")
    _add_data_flags(p)

    p = sub.add_parser("train", help="fit one PU model and save it as JSON")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--model", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--scar-c", type=float, default=0.5)
    p.add_argument("--holdout", type=float, default=0.1)
    p.add_argument("--jobs", type=int, default=1)
    _add_data_flags(p)

    p = sub.add_parser("predict", help="score a dataset with a saved PU model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    _add_data_flags(p)

    p = sub.add_parser("eval", help="metrics for a prediction file against true labels")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--truth", type=Path, required=True)
    return parser


def _spec(args) -> PreprocessSpec:
    try:
        return PreprocessSpec(label_column=args.label_col,
                              positive_label_text=args.positive,
                              extreme_threshold=args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args, spec: PreprocessSpec):
    try:
        return resolve_data(args.data, spec, args.prepared)
    except (DataFormatError, DataSourceError, OSError, UnicodeDecodeError) as exc:
        raise DataError(str(exc)) from None


def cmd_prepare(args) -> int:
    spec = _spec(args)
    if args.discover is not None:
        if not args.discover.is_dir():
            raise DataError(f"not a directory: {args.discover}")
        path = find_first_csv(args.discover)
        if path is None:
            raise DataError(f"no CSV file found in {args.discover}")
    else:
        path = args.input
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    try:
        ds = prepare(path, spec)
    except (DataFormatError, OSError, UnicodeDecodeError, ValueError) as exc:
        raise DataError(f"{path}: {exc}") from None
    args.output.write_text(ds.to_csv(), encoding="utf-8")
    print(f"{path}: {ds.n_rows} rows, {ds.feature_count} features, "
          f"{int(ds.y.sum())} positive -> {args.output}")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        cfg = SynthConfig(n_rows=args.rows, n_features=args.features, alpha=args.alpha,
                          delta=args.delta, n_categorical_like=args.categorical,
                          n_heavy_tail=args.heavy_tail, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_csv(cfg, args.output)
    print(f"wrote {cfg.n_rows} rows x {cfg.n_features} features to {args.output}")
    return EXIT_OK


def _pu_config(args) -> PuConfig:
    try:
        return PuConfig(hold_out_ratio=args.holdout, seed=args.seed, n_jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_compare(args) -> int:
    spec = _spec(args)
    unknown = [f for f in args.formats if f not in FORMATS]
    if unknown:
        raise UsageError(f"unknown report formats: {', '.join(unknown)}")
    try:
        config = ExperimentConfig(seed=args.seed, split_ratio=args.split, scar_c=args.scar_c,
                                  pu=_pu_config(args), models=tuple(args.models),
                                  formats=tuple(args.formats), repeats=args.repeats,
                                  record_timings=args.timings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        report = run_experiment(args.data, config, args.report_dir, spec, args.prepared)
    except (DataFormatError, DataSourceError, OSError, UnicodeDecodeError) as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:  # split/labeling preconditions on the data
        raise DataError(str(exc)) from None
    for r in report.results:
        status = f"c_hat={r.c_hat:.4f}" if r.error is None else f"FAILED ({r.error})"
        print(f"# {r.model}: {status}", file=sys.stderr)
    sys.stdout.write(render_markdown(report))
    return EXIT_OK


def cmd_train(args) -> int:
    spec = _spec(args)
    config = _pu_config(args)
    if not 0 < args.scar_c <= 1:
        raise UsageError("--scar-c must be in (0, 1]")
    ds = _load(args, spec)
    try:
        view = scar_label(ds.y, args.scar_c, args.seed)
        model = fit_pu(ds.x, view.s, config, args.model)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    args.output.write_text(model.dumps(), encoding="utf-8")
    print(f"{args.model}: c_hat={model.c:.6f}, holdout={model.holdout_size} -> {args.output}")
    return EXIT_OK


def cmd_predict(args) -> int:
    spec = _spec(args)
    try:
        model = PuModel.loads(args.model.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(str(exc)) from None
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"{args.model}: not a PU model file ({exc})") from None
    ds = _load(args, spec)
    if ds.feature_count != model.n_features:
        raise DataError(f"model expects {model.n_features} features, "
                        f"{args.data} has {ds.feature_count}")
    prob = model.predict_proba(ds.x)
    label = model.predict(ds.x)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write("prob,label\n")
        for p, y in zip(prob.tolist(), label.tolist()):
            fh.write(f"{p:.9f},{y}\n")
    print(f"wrote {len(prob)} predictions to {args.output}")
    return EXIT_OK


def read_predictions(path: Path) -> tuple[np.ndarray, np.ndarray]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "prob,label":
        raise DataFormatError(f"{path}: expected header 'prob,label'")
    prob, label = [], []
    for i, line in enumerate(lines[1:], start=2):
        try:
            p, y = line.split(",")
            prob.append(float(p))
            label.append(int(y))
        except ValueError:
            raise DataFormatError(f"{path}: malformed line {i}") from None
    return np.array(prob), np.array(label, dtype=np.int64)


def read_truth(path: Path) -> np.ndarray:
    """Labels from the last column of a headerless CSV (prepared file or bare labels)."""
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln]
    try:
        y = np.array([int(ln.rsplit(",", 1)[-1]) for ln in lines], dtype=np.int64)
    except ValueError:
        raise DataFormatError(f"{path}: truth labels must be 0/1 integers") from None
    if not np.isin(y, (0, 1)).all():
        raise DataFormatError(f"{path}: truth labels must be 0/1 integers")
    return y


def cmd_eval(args) -> int:
    try:
        prob, label = read_predictions(args.pred)
        y = read_truth(args.truth)
    except (DataFormatError, OSError, UnicodeDecodeError) as exc:
        raise DataError(str(exc)) from None
    if len(y) != len(label):
        raise DataError(f"{len(label)} predictions but {len(y)} truth labels")
    try:
        report = evaluate_results(y, label, scores=prob)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    sys.stdout.write(canonical_json(report.as_dict()))
    return EXIT_OK


COMMANDS = {
    "prepare": cmd_prepare,
    "synth": cmd_synth,
    "compare": cmd_compare,
    "train": cmd_train,
    "predict": cmd_predict,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pudetect {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"pudetect {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"pudetect {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
