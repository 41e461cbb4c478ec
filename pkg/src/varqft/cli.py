"""Command-line entry point: ``varqft {train,eval,sweep,histogram,report}``.

Exit codes: 0 on success, 1 for configuration or input errors, 2 for
numerical failures (the partial training trace is dumped when available).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import calibration, experiments
from .calibration import CalibrationError
from .circuits import CircuitError
from .experiments import ConfigError, ExperimentConfig, ExperimentReport
from .matcore import LinAlgError
from .metrics import MetricError
from .optimizer import OptimizerError
from .states import StateError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="experiment config (JSON)")
    p.add_argument("--scenario", help="scenario kind, e.g. noiseless, depolarizing, thermal, crosstalk, all")
    p.add_argument("--seed", type=int, help="optimizer seed")
    p.add_argument("--iters", type=int, help="maximum gradient-descent iterations")
    p.add_argument("--lr", type=float, help="learning rate")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--calibration", type=Path, help="calibration CSV (defaults to the bundled device data)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varqft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the ansatz; writes params.json and trace.csv")
    _common(p)

    p = sub.add_parser("eval", help="evaluate trained parameters against the QFT; writes report.json")
    _common(p)
    p.add_argument("--params", type=Path, required=True, help="params.json or report.json with trained_params")

    p = sub.add_parser("report", help="train and evaluate; writes report.json, trace.csv and histogram.csv")
    _common(p)
    p.add_argument("--bins", type=int, default=50)

    p = sub.add_parser("sweep", help="retrain over depolarizing strengths; writes sweep.csv")
    _common(p)
    p.add_argument("--eps", type=float, nargs="+", default=list(experiments.SWEEP_EPSILONS))
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("histogram", help="bin the random-state fidelities of a report; writes histogram.csv")
    p.add_argument("--report", type=Path, required=True)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--out", type=Path)
    return parser


def load_config(args) -> ExperimentConfig:
    records = calibration.load_calibration(args.calibration) if args.calibration else None
    if args.config is not None:
        data = _read_json(args.config)
        if args.scenario is not None:
            data["scenario"] = args.scenario
        cfg = ExperimentConfig.from_dict(data, records)
    else:
        cfg = ExperimentConfig.for_scenario(args.scenario or "noiseless", records=records)
    opt = cfg.optimizer
    if args.seed is not None:
        opt = replace(opt, seed=args.seed)
    if args.iters is not None:
        opt = replace(opt, max_iterations=args.iters)
    if args.lr is not None:
        opt = replace(opt, learning_rate=args.lr)
    out = str(args.out) if args.out is not None else cfg.output_dir
    return replace(cfg, optimizer=opt, output_dir=out)


def _read_json(path: Path) -> dict:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return data


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_train(args) -> int:
    cfg = load_config(args)
    params, trace = experiments.train(cfg)
    out = _out_dir(cfg)
    doc = {"trained_params": [float(x) for x in params], "trace_summary": trace.summary(), "config": cfg.to_dict()}
    (out / "params.json").write_text(json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n")
    (out / "trace.csv").write_text(trace.to_csv())
    print(f"final cost {trace.final_cost:.6e} ({trace.stop_reason}); wrote {out / 'params.json'}")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = load_config(args)
    doc = _read_json(args.params)
    if "trained_params" not in doc:
        raise ConfigError(f"{args.params} has no trained_params")
    rep = experiments.report_for(doc["trained_params"], cfg)
    rep.trace_summary = doc.get("trace_summary", {})
    path = rep.write(_out_dir(cfg))
    _print_summary(rep)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = load_config(args)
    cfg = replace(cfg, output_dir=str(_out_dir(cfg)))
    rep = experiments.run_experiment(cfg)
    experiments.histogram_export(rep, args.bins, Path(cfg.output_dir) / "histogram.csv")
    _print_summary(rep)
    print(f"wrote {cfg.output_dir}/report.json, trace.csv, histogram.csv")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    if cfg.scenario.is_noiseless:
        raise ConfigError("sweep needs a noisy scenario")
    max_iter = args.iters if args.iters is not None else experiments.SWEEP_MAX_ITERATIONS
    points = experiments.sweep_epsilon(cfg, args.eps, max_iter, workers=args.workers)
    path = _out_dir(cfg) / "sweep.csv"
    path.write_text(experiments.sweep_to_csv(points))
    for p in points:
        flag = "  (maximally mixed)" if p.maximally_mixed else ""
        print(f"eps={p.epsilon:.0e}  {p.convention}={p.difference:+.6f}{flag}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_histogram(args) -> int:
    rep = ExperimentReport.from_dict(_read_json(args.report))
    out = args.out or args.report.parent
    out.mkdir(parents=True, exist_ok=True)
    h = experiments.histogram_export(rep, args.bins, out / "histogram.csv")
    print(f"mean variational {h.mean_var:.6f}, mean QFT {h.mean_qft:.6f}; wrote {out / 'histogram.csv'}")
    return EXIT_OK


def _print_summary(rep: ExperimentReport):
    m, r = rep.fidelity_mub, rep.fidelity_random
    print(f"scenario {rep.scenario.kind}")
    print(f"  MUB     QFT {m['qft'].mean:.5f} +- {m['qft'].std_dev:.5f}   "
          f"variational {m['variational'].mean:.5f} +- {m['variational'].std_dev:.5f}")
    print(f"  random  QFT {r['qft'].mean:.5f} +- {r['qft'].std_dev:.5f}   "
          f"variational {r['variational'].mean:.5f} +- {r['variational'].std_dev:.5f}")
    if rep.suppression_factor is not None:
        print(f"  infidelity suppression {rep.suppression_factor:.3f}")


COMMANDS = {"train": cmd_train, "eval": cmd_eval, "report": cmd_report, "sweep": cmd_sweep, "histogram": cmd_histogram}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, CalibrationError, CircuitError, OSError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OptimizerError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        if exc.trace is not None and exc.trace.iterations:
            dump = Path(getattr(args, "out", None) or ".") / "failed_trace.csv"
            dump.parent.mkdir(parents=True, exist_ok=True)
            dump.write_text(exc.trace.to_csv())
            print(f"trace written to {dump}", file=sys.stderr)
        return EXIT_NUMERIC
    except (MetricError, LinAlgError, StateError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
