"""Command line entry points: run, ablate, simulate, serve.

`run` replays a scenario suite (built-in by default, or a directory of
script JSON files) through the tracker and writes metrics.json,
latency.json, timeline.csv, and summary.txt.  `ablate` repeats one long
drifting read with calibration on and off across many seeds.  `simulate`
dumps a ground-truth gaze trace as CSV.  `serve` starts the WebSocket
stream service.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .errormodels import (
    DriftModel,
    load_range_model,
    load_vector_model,
    synth_default_models,
)
from .geometry import LayoutConfig, layout_document
from .harness import ablate, latency_write, report_write, run_suite
from .llm import MockProvider, ProviderConfig, make_provider
from .scenarios import TEXT_A, ablation_script, scenario_suite_default
from .simulator import read_script_json, simulate, write_trace_csv


def _load_models(args):
    if args.models:
        range_model = load_range_model(os.path.join(args.models, "range_model.json"))
        vec_model = load_vector_model(os.path.join(args.models, "vector_model.csv"))
        return range_model, vec_model
    return synth_default_models(args.synth_seed)


def _provider(args):
    if args.llm == "external":
        return make_provider(ProviderConfig(provider="external"))
    return MockProvider()


def _load_scripts(args):
    if args.scenarios:
        paths = sorted(glob.glob(os.path.join(args.scenarios, "*.json")))
        if not paths:
            raise SystemExit(f"no scenario scripts found in {args.scenarios}")
        return [read_script_json(p) for p in paths]
    return scenario_suite_default()


def cmd_run(args) -> int:
    range_model, vec_model = _load_models(args)
    scripts = _load_scripts(args)
    drift = DriftModel() if args.drift == "on" else None
    report, latency, _ = run_suite(
        scripts,
        range_model,
        vec_model,
        _provider(args),
        drift=drift,
        calibration_on=(args.calibration == "on"),
    )
    paths = report_write(report, args.out)
    paths["latency"] = latency_write(latency, args.out)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


def cmd_ablate(args) -> int:
    range_model, vec_model = _load_models(args)
    provider = _provider(args)
    seeds = list(range(args.seed_base, args.seed_base + args.seeds))
    arms = ablate(
        ablation_script, seeds, range_model, vec_model, provider,
        drift=DriftModel(),
    )
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "ablation.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(arms, fh, indent=2, sort_keys=True)
        fh.write("\n")
    cal = arms["calibrated"]["mean_abs_y_error_cm"]
    unc = arms["uncalibrated"]["mean_abs_y_error_cm"]
    print(f"calibrated mean |y| error:   {cal:.4f} cm")
    print(f"uncalibrated mean |y| error: {unc:.4f} cm")
    print(f"report: {path}")
    return 0


def cmd_simulate(args) -> int:
    _, vec_model = _load_models(args)
    if args.script:
        script = read_script_json(args.script)
    else:
        script = scenario_suite_default()[0]
    layout = layout_document(script.document, LayoutConfig())
    drift = DriftModel() if args.drift == "on" else None
    trace = simulate(script, layout, vec_model, drift)
    write_trace_csv(trace, args.out)
    print(f"trace: {args.out} ({len(trace.samples)} samples)")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    if args.document:
        with open(args.document, encoding="utf-8") as fh:
            document = fh.read()
    else:
        document = TEXT_A
    serve(document, host=args.host, port=args.port)
    return 0


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--models", help="directory with range_model.json and vector_model.csv")
    p.add_argument("--synth-seed", type=int, default=7,
                   help="seed for synthetic error models (ignored with --models)")
    p.add_argument("--llm", choices=("mock", "external"), default="mock")
    p.add_argument("--drift", choices=("on", "off"), default="off")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="readtrack")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a scenario suite and write metrics")
    p_run.add_argument("--scenarios", help="directory of scenario script JSON files")
    p_run.add_argument("--calibration", choices=("on", "off"), default="on")
    p_run.add_argument("--out", required=True)
    _add_model_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_abl = sub.add_parser("ablate", help="compare calibration on vs off under drift")
    p_abl.add_argument("--seeds", type=int, default=20)
    p_abl.add_argument("--seed-base", type=int, default=9000)
    p_abl.add_argument("--out", required=True)
    _add_model_flags(p_abl)
    p_abl.set_defaults(func=cmd_ablate)

    p_sim = sub.add_parser("simulate", help="write a ground-truth gaze trace as CSV")
    p_sim.add_argument("--script", help="scenario script JSON (default: built-in)")
    p_sim.add_argument("--out", required=True)
    _add_model_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_srv = sub.add_parser("serve", help="start the WebSocket stream service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8765)
    p_srv.add_argument("--document", help="text file to lay out (default: built-in)")
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
