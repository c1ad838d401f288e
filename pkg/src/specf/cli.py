"""Command-line interface: ``specf {gen,detect,eval,sweep,ts}``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from . import io as fio
from .detector import DetectionConfig, run_specf
from .errors import ConvergenceError, DisconnectedGraphError, InputError
from .evaluation import evaluate, pr_curve, roc_curve
from .generators import RNG_ALGORITHM, AnomalySpec, PlantedGraphSpec, make_benchmark
from .graph import Partition
from .sweep import SweepConfig, default_jobs, rows_to_csv, run_sweep
from .timeseries import MultiSeries, WindowPlan, windowed_detection

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4
EXIT_PARTIAL = 5

EXIT_CODES_HELP = """\
exit codes:
  0  success
  2  usage error (bad flag or parameter value)
  3  input format error (unparsable file, size or node-set mismatch)
  4  numerical failure (disconnected graph, eigensolver failure)
  5  sweep finished but some runs failed (see the 'error' column)
"""


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _unit_open(text):
    """Float in (0, 1]."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1], got {v}")
    return v


def _prob(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"expected a probability, got {v}")
    return v


def _k_choice(text):
    if text == "auto":
        return "eigengap"
    if text == "partition":
        return text
    return _positive_int(text)


def _filter_choice(text):
    if text == "ideal":
        return ("ideal", None)
    if text.startswith("poly:"):
        return ("polynomial", _nonneg_int(text[5:]))
    raise argparse.ArgumentTypeError(f"expected 'ideal' or 'poly:<degree>', got {text!r}")


def _multiplier(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError("multiplier must be finite and nonnegative")
    return v


def _add_detection_flags(sp):
    sp.add_argument("--matrix", choices=("adjacency", "expanded"), default="expanded")
    sp.add_argument("--k", type=_k_choice, default="partition", help="auto | partition | <int> (default: partition)")
    sp.add_argument("--filter", type=_filter_choice, default=("ideal", None), help="ideal | poly:<degree>")
    sp.add_argument("--multiplier", type=_multiplier, default=2.0, help="std multiplier of the flag threshold")


def _config(args) -> DetectionConfig:
    mode, degree = args.filter
    return DetectionConfig(
        matrix_mode=args.matrix,
        k=args.k,
        filter_mode=mode,
        poly_degree=degree,
        threshold_multiplier=args.multiplier,
    )


def cmd_gen(args):
    if args.p_out >= args.p_in:
        raise _Usage("--p-out must be smaller than --p-in")
    if args.k > args.n:
        raise _Usage("--k must not exceed --n")
    bm = make_benchmark(
        PlantedGraphSpec(args.n, args.k, args.p_in, args.p_out, args.seed),
        AnomalySpec(args.an, args.theta, args.seed if args.anomaly_seed is None else args.anomaly_seed),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fio.write_edge_list(out / "edges.tsv", bm.graph)
    fio.write_partition(out / "partition.tsv", bm.partition)
    fio.write_signal(out / "signal.csv", bm.anomalous)
    fio.write_labels(out / "labels.csv", bm.labels)
    fio.atomic_write_text(out / "metadata.json", fio.dump_json(bm.metadata))
    return EXIT_OK


def cmd_detect(args):
    g, index = fio.read_edge_list(args.graph)
    p, _ = fio.read_partition(args.partition, index)
    b = fio.read_signal(args.signal, index)
    report = run_specf(g, b, p, _config(args))
    text = fio.dump_json(report.to_dict())
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        fio.atomic_write_text(args.out, text)
    return EXIT_OK


def _curve_csv(header, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def cmd_eval(args):
    report = fio.read_json(args.report)
    try:
        scores, flags = report["scores"], report["flags"]
    except (KeyError, TypeError):
        raise InputError(f"{args.report}: not a detection report") from None
    labels = fio.read_labels(args.labels)
    if len(labels) != len(scores) or len(flags) != len(scores):
        raise InputError(f"report covers {len(scores)} nodes but labels cover {len(labels)}")
    metrics = evaluate(scores, flags, labels)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fio.atomic_write_text(out / "metrics.json", fio.dump_json(metrics))
    fpr, tpr, thr = roc_curve(scores, labels)
    fio.atomic_write_text(out / "roc.csv", _curve_csv(["threshold", "fpr", "tpr"], [thr, fpr, tpr]))
    prec, rec, thr = pr_curve(scores, labels)
    fio.atomic_write_text(out / "pr.csv", _curve_csv(["threshold", "precision", "recall"], [thr, prec, rec]))
    return EXIT_OK


def cmd_sweep(args):
    raw = fio.read_json(args.config)
    if not isinstance(raw, dict):
        raise InputError("sweep config must be a JSON object")
    if args.out:
        raw["output"] = args.out
    try:
        cfg = SweepConfig.from_dict(raw)
    except InputError as exc:
        raise _Usage(str(exc)) from None
    runs, aggs = run_sweep(cfg, jobs=args.jobs)
    out = Path(cfg.output)
    fio.atomic_write_text(out / "results.csv", rows_to_csv(runs + aggs))
    fio.atomic_write_text(
        out / "sweep.json",
        fio.dump_json({
            "config": {
                "n": list(cfg.n), "k": list(cfg.k), "edge_probs": [list(pq) for pq in cfg.edge_probs],
                "an": list(cfg.an), "theta": list(cfg.theta), "matrix": list(cfg.matrix),
                "seeds": cfg.seeds, "base_seed": cfg.base_seed,
            },
            "rng": RNG_ALGORITHM,
            "runs": len(runs),
            "failed": sum(1 for r in runs if r["error"]),
        }),
    )  # fmt: skip
    return EXIT_PARTIAL if any(r["error"] for r in runs) else EXIT_OK


def cmd_ts(args):
    sample_period = args.sample_period
    try:
        if args.window_len is not None:
            plan = WindowPlan(args.window_len, args.stride)
        else:
            plan = WindowPlan.from_seconds(args.window_seconds, sample_period)
            if args.stride is not None:
                plan = WindowPlan(plan.window_len, args.stride)
    except InputError as exc:
        raise _Usage(str(exc)) from None
    ms = MultiSeries(fio.read_multiseries(args.csv), sample_period)
    index = fio.NodeIndex([str(i) for i in range(ms.n_sensors)])
    if args.partition:
        p, _ = fio.read_partition(args.partition, index)
    else:
        p = Partition([0] * ms.n_sensors)
    graph = fio.read_edge_list(args.graph, index)[0] if args.graph else None
    result = windowed_detection(ms, plan, p, _config(args), graph=graph, threshold=args.threshold, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for ws, report in zip(result.windows, result.reports):
        doc = {"window": {"index": ws.index, "start": ws.start, "stop": ws.stop}, "report": report.to_dict()}
        fio.atomic_write_text(out / f"window_{ws.index:05d}.json", fio.dump_json(doc))
    summary = {
        "sensors": ms.n_sensors,
        "steps": ms.n_steps,
        "sample_period": sample_period,
        "window_len": plan.window_len,
        "stride": plan.stride,
        "correlation_threshold": args.threshold,
        "graph": "file" if args.graph else "correlation",
        "dtw": {"local_cost": "absolute", "normalization": "none", "window_constraint": "none"},
        "windows": [
            {"index": ws.index, "start": ws.start, "stop": ws.stop, "flagged": [int(i) for i in r.anomalous_nodes]}
            for ws, r in zip(result.windows, result.reports)
        ],
        "union": [int(i) for i, f in enumerate(result.union) if f],
        "total_flags": int(result.flags.sum()),
    }
    fio.atomic_write_text(out / "summary.json", fio.dump_json(summary))
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specf",
        description="Community-aware spectral anomaly detection on attributed graphs.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    sp = sub.add_parser("gen", help="generate a planted-partition benchmark", epilog=EXIT_CODES_HELP, formatter_class=fmt)
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--k", type=_positive_int, required=True)
    sp.add_argument("--p-in", type=_prob, required=True)
    sp.add_argument("--p-out", type=_prob, required=True)
    sp.add_argument("--an", type=_unit_open, required=True, help="fraction of nodes to corrupt, in (0, 1]")
    sp.add_argument("--theta", type=_unit_open, required=True, help="anomaly intensity, in (0, 1]")
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--anomaly-seed", type=_nonneg_int, default=None, help="defaults to --seed")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("detect", help="run the detector on graph/signal/partition files", epilog=EXIT_CODES_HELP, formatter_class=fmt)
    sp.add_argument("--graph", required=True, help="edge list (src<TAB>dst[<TAB>weight])")
    sp.add_argument("--signal", required=True, help="CSV node,value")
    sp.add_argument("--partition", required=True, help="node<TAB>community")
    _add_detection_flags(sp)
    sp.add_argument("--out", default=None, help="report path (default: standard output)")
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("eval", help="score a detection report against labels", epilog=EXIT_CODES_HELP, formatter_class=fmt)
    sp.add_argument("--report", required=True)
    sp.add_argument("--labels", required=True, help="CSV node,label")
    sp.add_argument("--out", required=True, help="output directory for metrics.json, roc.csv, pr.csv")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sweep", help="run a seeded parameter sweep from a JSON config", epilog=EXIT_CODES_HELP, formatter_class=fmt)
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None, help="overrides the config's output directory")
    sp.add_argument("--jobs", type=_positive_int, default=default_jobs(), help="parallel workers (env SPECF_JOBS)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("ts", help="windowed detection on multi-sensor time series", epilog=EXIT_CODES_HELP, formatter_class=fmt)
    sp.add_argument("--csv", required=True, help="CSV with header sensor_0..sensor_{m-1}")
    sp.add_argument("--sample-period", type=float, default=1.0, help="seconds per row")
    sp.add_argument("--window-seconds", type=float, default=30.0)
    sp.add_argument("--window-len", type=_positive_int, default=None, help="window length in steps (overrides --window-seconds)")
    sp.add_argument("--stride", type=_positive_int, default=None, help="steps between windows (default: window length)")
    sp.add_argument("--partition", default=None, help="sensor<TAB>community (default: one community)")
    sp.add_argument("--graph", default=None, help="edge list to use instead of the correlation graph")
    sp.add_argument("--threshold", type=float, default=0.5, help="correlation threshold for edges")
    sp.add_argument("--jobs", type=_positive_int, default=default_jobs())
    _add_detection_flags(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_ts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sample_period", 1.0) <= 0:
        parser.error("--sample-period must be positive")
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (DisconnectedGraphError, ConvergenceError) as exc:
        print(f"specf: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InputError as exc:
        print(f"specf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
