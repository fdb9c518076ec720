"""Command-line harness: experiments, timing, rate accounting, service.

Each subcommand runs one study, prints a one-line verdict per threshold,
and exits 0 only when all thresholds for that run pass, so the tool can
gate CI. With --out-dir the full report is written as schema-validated
JSON plus plot-ready CSVs, and --svg adds rendered figures (matplotlib is
imported only then).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import MwcError
from .frontend import MwcConfig, validate_config
from .harness import (
    ExperimentReport,
    report_csvs,
    run_mixture_demo,
    run_monte_carlo,
    run_sweep,
    time_sensing,
)
from .presets import demo_scenario, prototype_config
from .serialization import config_from_json, scenario_from_json, validate_report

SWEEP_MIN_SUCCESS = 0.99
TIME_BUDGET_S = 0.050


def _load_config(path: str | None) -> MwcConfig:
    if path is None:
        return prototype_config()
    return config_from_json(Path(path).read_text())


def _emit(report: ExperimentReport, out_dir: str | None, svg: bool) -> None:
    doc = report.to_dict()
    validate_report(doc)
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(doc, indent=2) + "\n")
    for name, text in report_csvs(report).items():
        (out / name).write_text(text)
    if svg:
        _render_svg(report, out)
    print(f"wrote {out / 'report.json'}")


def _render_svg(report: ExperimentReport, out: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3.2))
    if report.kind == "sweep":
        freqs = [t.carrier_true_hz / 1e6 for t in report.trials]
        errs = [t.carrier_error_hz for t in report.trials]
        ok = [t.success for t in report.trials]
        ax.semilogy(
            [f for f, s in zip(freqs, ok) if s],
            [max(e, 1e-9) for e, s in zip(errs, ok) if s],
            ".", label="carrier error (Hz)",
        )
        bad = [f for f, s in zip(freqs, ok) if not s]
        for f in bad:
            ax.axvline(f, color="red", alpha=0.4)
        ax.set_xlabel("tone frequency (MHz)")
        ax.set_ylabel("carrier error (Hz)")
        ax.set_title(f"tone sweep, success {report.aggregates['success_rate']:.3f}")
        ax.legend()
    elif report.kind == "monte_carlo":
        pts = [p for p in report.aggregates["points"] if not p.get("rejected")]
        xs = [p["value"] for p in pts]
        ys = [p["success_rate"] for p in pts]
        lo = [p["success_rate"] - p["success_ci95"][0] for p in pts]
        hi = [p["success_ci95"][1] - p["success_rate"] for p in pts]
        ax.errorbar(xs, ys, yerr=[lo, hi], marker="o")
        ax.set_xlabel(report.aggregates["axis"])
        ax.set_ylabel("support success rate")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title("Monte Carlo support recovery")
    elif report.kind == "mixture":
        detail = report.trials[0].detail
        offs = [o / 1e6 for o in detail["baseband_offsets_hz"]]
        peaks = [o / 1e6 for o in detail["overlay_peak_offsets_hz"]]
        ax.stem(offs, [1.0] * len(offs), basefmt=" ", label="expected fold")
        if peaks:
            ax.plot(peaks, [1.02] * len(peaks), "rv", label="periodogram peak")
        ax.set_xlabel("baseband offset (MHz)")
        ax.set_yticks([])
        ax.set_title("aliased carriers on the shared baseband")
        ax.legend()
    elif report.kind == "timing":
        times = [t.wall_time_s * 1e3 for t in report.trials]
        ax.hist(times, bins=min(20, len(times)))
        ax.set_xlabel("sensing wall time (ms)")
        ax.set_ylabel("count")
        ax.set_title(f"median {report.aggregates['median_s'] * 1e3:.1f} ms")
    fig.tight_layout()
    fig.savefig(out / f"{report.kind}.svg")
    plt.close(fig)


def _verdict(label: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def _cmd_sweep(args: argparse.Namespace) -> int:
    report = run_sweep(
        config=_load_config(args.config) if args.config else None,
        f_start=args.f_start,
        f_stop=args.f_stop,
        f_step=args.f_step,
        seed=args.seed,
        bank_seed=args.bank_seed,
        carrier_tol_hz=args.tol_hz,
        snr_db=args.snr_db,
        workers=args.workers,
    )
    agg = report.aggregates
    _emit(report, args.out_dir, args.svg)
    ok = _verdict(
        "sweep support+carrier success",
        agg["success_rate"] >= SWEEP_MIN_SUCCESS,
        f"{agg['n_success']}/{agg['n_trials']} = {agg['success_rate']:.4f} "
        f"(threshold {SWEEP_MIN_SUCCESS}), outliers "
        f"{[o['frequency_hz'] for o in agg['outliers']]}",
    )
    return 0 if ok else 1


def _cmd_mixture(args: argparse.Namespace) -> int:
    report = run_mixture_demo(
        config=_load_config(args.config) if args.config else None,
        seed=args.seed,
        bank_seed=args.bank_seed,
        snr_db=args.snr_db,
    )
    agg = report.aggregates
    _emit(report, args.out_dir, args.svg)
    ok = True
    ok &= _verdict("mixture exact support", agg["exact_support"], str(agg["exact_support"]))
    ok &= _verdict(
        "mixture carriers within tolerance",
        agg["carrier_error_hz_max"] is not None
        and agg["carrier_error_hz_max"] <= report.config["carrier_tol_hz"],
        f"max error {agg['carrier_error_hz_max']} Hz",
    )
    ok &= _verdict(
        "AM envelope correlation",
        agg["am_envelope_correlation"] >= report.config["envelope_corr_min"],
        f"{agg['am_envelope_correlation']:.4f}",
    )
    return 0 if ok else 1


def _cmd_montecarlo(args: argparse.Namespace) -> int:
    grid = [float(v) if args.axis == "snr_db" else int(v) for v in args.grid.split(",")]
    report = run_monte_carlo(
        axis=args.axis,
        grid=grid,
        trials_per_point=args.trials,
        seed=args.seed,
        config=_load_config(args.config) if args.config else None,
        bank_seed=args.bank_seed,
        f_max=args.f_max,
        n_bands=args.n_bands,
        snr_db=args.snr_db,
        workers=args.workers,
    )
    _emit(report, args.out_dir, args.svg)
    points = report.aggregates["points"]
    ok = True
    rejected = [p for p in points if p.get("rejected")]
    ok &= _verdict(
        "all grid points ran",
        not rejected,
        f"{len(points) - len(rejected)}/{len(points)} points",
    )
    for p in points:
        if not p.get("rejected"):
            print(
                f"  {args.axis}={p['value']}: {p['n_success']}/{p['n_trials']}"
                f" = {p['success_rate']:.3f}"
            )
    if args.axis == "m" and not rejected:
        rates = [p["success_rate"] for p in points]
        ok &= _verdict(
            "success non-decreasing in m",
            all(b >= a for a, b in zip(rates, rates[1:])),
            str(rates),
        )
    return 0 if ok else 1


def _cmd_time(args: argparse.Namespace) -> int:
    report = time_sensing(
        config=_load_config(args.config) if args.config else None,
        repetitions=args.repetitions,
        seed=args.seed,
        bank_seed=args.bank_seed,
    )
    agg = report.aggregates
    _emit(report, args.out_dir, args.svg)
    ok = _verdict(
        "sensing median wall time",
        agg["median_s"] <= args.budget_ms / 1e3,
        f"{agg['median_s'] * 1e3:.2f} ms (budget {args.budget_ms} ms) at "
        f"{agg['matrix_shape'][0]}x{agg['matrix_shape'][1]}",
    )
    return 0 if ok else 1


def _cmd_validate_config(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    if args.scenario:
        scenario = scenario_from_json(Path(args.scenario).read_text())
    else:
        scenario = demo_scenario()
    report = validate_config(config, scenario)
    print(json.dumps(report.to_dict(), indent=2))
    ok = True
    ok &= _verdict("chip rate covers f_max", report.chip_rate_pass, f"notes {report.notes}")
    ok &= _verdict(
        "slices cover the band",
        report.coverage_pass,
        f"total {report.total_sample_rate_hz / 1e6:.0f} MHz, "
        f"ratio {report.ratio_to_nyquist:.4f} of Nyquist",
    )
    return 0 if ok else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(store_dir=args.store_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="MWC config JSON file (default: prototype preset)")
    p.add_argument("--seed", type=int, default=0, help="experiment seed")
    p.add_argument("--bank-seed", type=int, default=0, help="waveform bank seed")
    p.add_argument("--out-dir", help="write report.json, CSVs, and figures here")
    p.add_argument("--svg", action="store_true", help="also render SVG figures")
    p.add_argument("--workers", type=int, default=0, help="worker processes (0 = in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwcsense",
        description="Sub-Nyquist spectrum sensing experiments (exit 0 iff thresholds pass)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="single-tone frequency sweep")
    _add_common(p)
    p.add_argument("--f-start", type=float, default=100e6)
    p.add_argument("--f-stop", type=float, default=1100e6)
    p.add_argument("--f-step", type=float, default=5e6)
    p.add_argument("--tol-hz", type=float, default=10e3, help="carrier error tolerance")
    p.add_argument("--snr-db", type=float, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("mixture", help="AM + FM + sine demonstration")
    _add_common(p)
    p.set_defaults(func=_cmd_mixture, seed=7)
    p.add_argument("--snr-db", type=float, default=None)

    p = sub.add_parser("montecarlo", help="success-rate curve along one axis")
    _add_common(p)
    p.add_argument("--axis", choices=["m", "snr_db", "n_snapshots", "sparsity"], default="m")
    p.add_argument("--grid", default="3,4,5", help="comma-separated axis values")
    p.add_argument("--trials", type=int, default=50, help="trials per grid point")
    p.add_argument("--n-bands", type=int, default=5, help="transmissions per scenario")
    p.add_argument("--f-max", type=float, default=1e9)
    p.add_argument("--snr-db", type=float, default=None, help="base SNR for non-snr axes")
    p.set_defaults(func=_cmd_montecarlo)

    p = sub.add_parser("time", help="digital sensing wall-time distribution")
    _add_common(p)
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--budget-ms", type=float, default=TIME_BUDGET_S * 1e3)
    p.set_defaults(func=_cmd_time, seed=7)

    p = sub.add_parser("validate-config", help="rate accounting for a config + scenario")
    p.add_argument("--config", help="MWC config JSON file (default: prototype preset)")
    p.add_argument("--scenario", help="scenario JSON file (default: demo mixture)")
    p.set_defaults(func=_cmd_validate_config)

    p = sub.add_parser("serve", help="run the HTTP sensing service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store-dir", help="persist runs to this directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MwcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(exc, "details", None):
            print(json.dumps(exc.details, indent=2, default=str), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
