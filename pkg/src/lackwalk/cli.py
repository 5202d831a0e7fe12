"""Command-line experiment harness.

Subcommands: ``evolve`` (CSV trace), ``predict`` (JSON), ``compare``
(prediction vs simulation over a JSON config), ``figure`` (CSV data for the
published figures) and ``eigen`` (reduced eigensystem as JSON).

Exit codes: 0 success, 1 tolerance failure in ``compare``, 2 invalid flags or
config, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import ctqw, fullspace, subspace
from .analytics import eigen_system, predict
from .errors import CapacityExceeded, DomainError
from .instance import CoinKind, SearchInstance, WalkKind, make_instance
from .trace import CtqwTrace, EvolutionTrace

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

DEFAULT_TOLERANCES = {"runtime": 1.0, "probability": 5e-3}
SKW_REACH_THRESHOLD = 0.5 - 1e-3


class ConfigError(DomainError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trace_csv(trace: Union[EvolutionTrace, CtqwTrace]) -> str:
    buf = io.StringIO()
    if isinstance(trace, EvolutionTrace):
        buf.write("step,success_probability\n")
        for s, p in zip(trace.steps, trace.probabilities):
            buf.write(f"{int(s)},{_fmt(p)}\n")
    else:
        buf.write("time,success_probability\n")
        for t, p in zip(trace.times, trace.probabilities):
            buf.write(f"{_fmt(t)},{_fmt(p)}\n")
    return buf.getvalue()


def parse_gamma(value: Union[str, float, None], instance: SearchInstance) -> float:
    if value is None or (isinstance(value, str) and value.lower() == "critical"):
        return ctqw.critical_gamma(instance)
    try:
        gamma = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"gamma must be 'critical' or a number, got {value!r}") from None
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    return gamma


# --- running one experiment -------------------------------------------------


@dataclass
class RunSpec:
    instance: SearchInstance
    walk: WalkKind = WalkKind.DISCRETE_SUBSPACE
    gamma: Union[str, float, None] = "critical"
    max_steps: Optional[int] = None
    times: Optional[np.ndarray] = None
    label: str = ""
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def resolved_gamma(self) -> float:
        return parse_gamma(self.gamma, self.instance)


def default_steps(instance: SearchInstance) -> int:
    return subspace.default_max_steps(instance)


def run(spec: RunSpec) -> Union[EvolutionTrace, CtqwTrace]:
    inst = spec.instance
    if spec.walk.continuous:
        gamma = spec.resolved_gamma()
        times = spec.times if spec.times is not None else ctqw.default_times(inst, gamma)
        if spec.walk is WalkKind.CONTINUOUS_FULL:
            return ctqw.ctqw_full_evolve(inst, gamma, times)
        return ctqw.ctqw_evolve(ctqw.build_hamiltonian(inst, gamma), times)
    steps = spec.max_steps if spec.max_steps is not None else default_steps(inst)
    if spec.walk is WalkKind.DISCRETE_FULL:
        return fullspace.full_evolve(inst, steps)
    return subspace.evolve(inst, steps)


def compare_one(spec: RunSpec) -> dict:
    inst = spec.instance
    gamma = spec.resolved_gamma() if spec.walk.continuous else None
    pred = predict(inst, spec.walk, gamma)
    trace = run(spec)
    tol_t = float(spec.tolerances.get("runtime", DEFAULT_TOLERANCES["runtime"]))
    tol_p = float(spec.tolerances.get("probability", DEFAULT_TOLERANCES["probability"]))
    if isinstance(trace, EvolutionTrace):
        sim_at = float(trace.peak_step)
    else:
        sim_at = trace.peak_time
    dev_t = abs(pred.runtime - sim_at)
    dev_p = abs(pred.peak_probability - trace.peak_probability)
    row = {
        "label": spec.label,
        "instance": {"n": inst.N, "loops": inst.l, "marked": inst.k, "coin": inst.coin.value},
        "walk": spec.walk.value,
        "gamma": gamma,
        "predicted": {"runtime": pred.runtime, "peak_probability": pred.peak_probability},
        "simulated": {"peak_at": sim_at, "peak_probability": trace.peak_probability},
        "deviation": {"runtime": dev_t, "peak_probability": dev_p},
        "tolerances": {"runtime": tol_t, "probability": tol_p},
        "pass": bool(dev_t <= tol_t and dev_p <= tol_p),
    }
    if isinstance(trace, EvolutionTrace):
        at, val = trace.envelope_peak()
        row["diagnostics"] = {
            "envelope_peak_at": at,
            "envelope_peak_probability": val,
            "first_reach_half": trace.first_reach(SKW_REACH_THRESHOLD),
        }
    return row


# --- config -------------------------------------------------------------------


def _spec_from_dict(entry: dict, defaults: dict, index: int) -> RunSpec:
    if not isinstance(entry, dict):
        raise ConfigError(f"instances[{index}] must be an object")
    try:
        inst = make_instance(
            int(entry["n"]), int(entry.get("loops", 0)), int(entry.get("marked", 1)), entry.get("coin", "flip")
        )
    except KeyError as exc:
        raise ConfigError(f"instances[{index}] missing {exc}") from None
    walk = WalkKind.from_flags(entry.get("walk", "discrete"), entry.get("engine", "subspace"))
    times = entry.get("times")
    if times is not None:
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) < 0) or np.any(times < 0):
            raise ConfigError(f"instances[{index}].times must be a sorted non-negative list")
    elif "tmax" in entry:
        times = np.linspace(0.0, float(entry["tmax"]), int(entry.get("samples", 1000)))
    max_steps = entry.get("max_steps")
    tolerances = dict(defaults)
    tolerances.update(entry.get("tolerances", {}))
    return RunSpec(
        instance=inst,
        walk=walk,
        gamma=entry.get("gamma", "critical"),
        max_steps=None if max_steps is None else int(max_steps),
        times=times,
        label=str(entry.get("label", f"#{index}")),
        tolerances=tolerances,
    )


def load_config(path: Union[str, Path]) -> tuple[list[RunSpec], dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    entries = doc.get("instances")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("config needs a non-empty 'instances' list")
    defaults = dict(DEFAULT_TOLERANCES)
    defaults.update(doc.get("tolerances", {}))
    formats = doc.get("formats", ["json"])
    if not set(formats) <= {"csv", "json"} or not formats:
        raise ConfigError(f"formats must be a non-empty subset of ['csv', 'json'], got {formats}")
    specs = [_spec_from_dict(e, defaults, i) for i, e in enumerate(entries)]
    meta = {"output_path": doc.get("output_path"), "formats": formats}
    return specs, meta


def run_compare(specs: Sequence[RunSpec], jobs: int = 1) -> dict:
    """Run every instance; results keep config order regardless of completion order."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(compare_one, specs))
    else:
        results = [compare_one(s) for s in specs]
    return {"all_pass": all(r["pass"] for r in results), "results": results}


def report_csv(report: dict) -> str:
    cols = [
        "label", "n", "loops", "marked", "coin", "walk", "predicted_runtime", "simulated_peak_at",
        "predicted_peak", "simulated_peak", "runtime_deviation", "peak_deviation", "pass",
    ]
    lines = [",".join(cols)]
    for r in report["results"]:
        i = r["instance"]
        vals = [
            r["label"], i["n"], i["loops"], i["marked"], i["coin"], r["walk"],
            _fmt(r["predicted"]["runtime"]), _fmt(r["simulated"]["peak_at"]),
            _fmt(r["predicted"]["peak_probability"]), _fmt(r["simulated"]["peak_probability"]),
            _fmt(r["deviation"]["runtime"]), _fmt(r["deviation"]["peak_probability"]),
            str(r["pass"]).lower(),
        ]
        lines.append(",".join(str(v) for v in vals))
    return "\n".join(lines) + "\n"


# --- figures ------------------------------------------------------------------

FIGURES: dict[str, list[tuple[tuple[int, int, int, str], WalkKind]]] = {
    "fig2": [((1024, 0, 1, "flip"), WalkKind.DISCRETE_SUBSPACE), ((2048, 0, 1, "flip"), WalkKind.DISCRETE_SUBSPACE)],
    "fig3": [((1024, 0, 1, "flip"), WalkKind.CONTINUOUS_SUBSPACE), ((2048, 0, 1, "flip"), WalkKind.CONTINUOUS_SUBSPACE)],
    "fig4": [((1024, l, 1, "flip"), WalkKind.DISCRETE_SUBSPACE) for l in (1, 2, 3)]
    + [((2048, 2, 1, "flip"), WalkKind.DISCRETE_SUBSPACE)],
    "fig5": [((1024, l, 1, "skw"), WalkKind.DISCRETE_SUBSPACE) for l in (0, 32, 2048, 32768)],
    "fig6": [((1024, l, 16, "flip"), WalkKind.DISCRETE_SUBSPACE) for l in (1, 32)],
    "fig7": [((1024, l, 16, "skw"), WalkKind.DISCRETE_SUBSPACE) for l in (1, 32, 2048)],
}

FIG7_NOTE = """\
fig7: N = 1024, k = 16, SKW coin (-I at marked vertices).

The l = 1 and l = 32 curves use the SKW operator. A runtime of about 15 steps,
sometimes quoted for this setting, corresponds to l = 2N = 2048 rather than
l = 32; the exact formula gives about 9 steps for l = 32. The l = 2048 curve is
included so both readings can be compared.
"""


def curve_name(fig: str, instance: SearchInstance, walk: WalkKind) -> str:
    kind = "ctqw" if walk.continuous else instance.coin.value
    return f"{fig}_N{instance.N}_l{instance.l}_k{instance.k}_{kind}.csv"


def write_figure(name: str, out_dir: Union[str, Path], samples: int = 1000) -> list[Path]:
    if name not in FIGURES:
        raise DomainError(f"unknown figure {name!r}; expected one of {sorted(FIGURES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = [(make_instance(*params), walk) for params, walk in FIGURES[name]]
    horizon = max(predict(inst, walk).runtime for inst, walk in curves)
    written = []
    for inst, walk in curves:
        if walk.continuous:
            spec = RunSpec(inst, walk, times=np.linspace(0.0, math.ceil(2.0 * horizon), samples))
        else:
            spec = RunSpec(inst, walk, max_steps=math.ceil(4.0 * horizon))
        path = out_dir / curve_name(name, inst, walk)
        path.write_text(trace_csv(run(spec)))
        written.append(path)
    if name == "fig7":
        note = out_dir / "fig7_NOTE.txt"
        note.write_text(FIG7_NOTE)
        written.append(note)
    return written


# --- argument parsing ---------------------------------------------------------


def _instance_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, required=True, help="number of vertices N")
    p.add_argument("--loops", type=int, default=0, help="self-loops per vertex l")
    p.add_argument("--marked", type=int, default=1, help="number of marked vertices k")
    p.add_argument("--coin", choices=[c.value for c in CoinKind], default="flip")
    p.add_argument("--walk", choices=["discrete", "ctqw"], default="discrete")
    p.add_argument("--engine", choices=["subspace", "full"], default="subspace")
    p.add_argument("--gamma", default="critical", help="'critical' (1/N) or a positive number")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lackwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    inst = _instance_parent()

    ev = sub.add_parser("evolve", parents=[inst], help="write a success-probability trace")
    ev.add_argument("--steps", type=int, help="discrete steps (default ceil(4 x predicted runtime))")
    ev.add_argument("--tmax", type=float, help="continuous end time (default two predicted runtimes)")
    ev.add_argument("--samples", type=int, default=1000, help="continuous sample count")
    ev.add_argument("--out", help="output file (default stdout)")
    ev.add_argument("--format", choices=["csv", "json"], default="csv")

    pr = sub.add_parser("predict", parents=[inst], help="closed-form runtime and peak")
    pr.add_argument("--out")
    pr.add_argument("--format", choices=["json"], default="json")

    eg = sub.add_parser("eigen", parents=[inst], help="reduced eigensystem as JSON")
    eg.add_argument("--out")
    eg.add_argument("--format", choices=["json"], default="json")

    cp = sub.add_parser("compare", help="prediction vs simulation over a config file")
    cp.add_argument("config", help="JSON experiment config")
    cp.add_argument("--out", help="report path (overrides config output_path)")
    cp.add_argument("--jobs", type=int, default=1)

    fg = sub.add_parser("figure", help="CSV data for one figure")
    fg.add_argument("name", help="fig2 .. fig7")
    fg.add_argument("--out", default=".", help="output directory")
    fg.add_argument("--samples", type=int, default=1000)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _instance_from_args(args) -> tuple[SearchInstance, WalkKind]:
    inst = make_instance(args.n, args.loops, args.marked, args.coin)
    return inst, WalkKind.from_flags(args.walk, args.engine)


def _cmd_evolve(args) -> int:
    inst, walk = _instance_from_args(args)
    if args.steps is not None and args.steps < 1:
        raise DomainError("--steps must be >= 1")
    if args.samples < 1:
        raise DomainError("--samples must be >= 1")
    times = None
    if walk.continuous and args.tmax is not None:
        if args.tmax < 0:
            raise DomainError("--tmax must be non-negative")
        times = np.linspace(0.0, args.tmax, args.samples)
    elif walk.continuous:
        times = ctqw.default_times(inst, parse_gamma(args.gamma, inst), args.samples)
    trace = run(RunSpec(inst, walk, gamma=args.gamma, max_steps=args.steps, times=times))
    if args.format == "csv":
        _emit(trace_csv(trace), args.out)
    else:
        if isinstance(trace, EvolutionTrace):
            body = {"peak_step": trace.peak_step, "peak_probability": trace.peak_probability,
                    "samples": trace.samples}
        else:
            body = {"peak_time": trace.peak_time, "peak_probability": trace.peak_probability,
                    "samples": trace.samples}
        _emit(json.dumps(body, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_predict(args) -> int:
    inst, walk = _instance_from_args(args)
    gamma = parse_gamma(args.gamma, inst) if walk.continuous else None
    _emit(json.dumps(predict(inst, walk, gamma).as_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_eigen(args) -> int:
    inst, walk = _instance_from_args(args)
    if walk.continuous:
        raise DomainError("eigen applies to the discrete-time walk only")
    system = eigen_system(inst)
    body = system.as_dict()
    body["residuals"] = system.residuals(subspace.build_operator(inst))
    _emit(json.dumps(body, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_compare(args) -> int:
    specs, meta = load_config(args.config)
    report = run_compare(specs, jobs=max(1, args.jobs))
    out = args.out or meta["output_path"]
    text = json.dumps(report, indent=2) + "\n"
    if "json" in meta["formats"]:
        _emit(text, out)
    if "csv" in meta["formats"]:
        csv_out = str(Path(out).with_suffix(".csv")) if out else None
        _emit(report_csv(report), csv_out)
    return EXIT_OK if report["all_pass"] else EXIT_TOLERANCE


def _cmd_figure(args) -> int:
    for path in write_figure(args.name, args.out, args.samples):
        print(path)
    return EXIT_OK


COMMANDS = {
    "evolve": _cmd_evolve,
    "predict": _cmd_predict,
    "eigen": _cmd_eigen,
    "compare": _cmd_compare,
    "figure": _cmd_figure,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapacityExceeded as exc:
        print(f"lackwalk: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"lackwalk: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
