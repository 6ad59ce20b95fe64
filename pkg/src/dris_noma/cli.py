"""Command-line entry point: ``dris-noma {op-sweep,ec-sweep,fit,validate}``."""

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .channels import simulate_gains
from .experiments import (AXES, DEFAULT_TRIALS, SweepSpec, apply_overrides, emit_csv,
                          load_config, load_preset, run_sweeps)
from .fitting import (DegenerateFitError, closed_form_indoor, closed_form_outdoor,
                      fit_h_indoor, fit_h_outdoor, indoor_moments, ks_distance,
                      outdoor_moments)

KS_LIMIT = 0.03


def parse_values(text):
    """``"0,10,20"`` or ``"0:50:5"`` (inclusive stop) to a list of floats."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse values {text!r}") from None


def _override(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def _base_config(args):
    cfg = load_config(args.config) if args.config else load_preset(args.preset)
    if args.set:
        cfg = apply_overrides(cfg, dict(args.set))
    if getattr(args, "phase_design", None):
        cfg = replace(cfg, phase_design=args.phase_design)
    return cfg


def _scenarios(args, cfg):
    if not args.scenario:
        return [cfg.scenario]
    return [s.strip() for s in args.scenario.split(",") if s.strip()]


def _out_path(out, label, many):
    out = Path(out)
    if not many:
        return out
    return out.with_name(f"{out.stem}_{label}{out.suffix or '.csv'}")


def _sweep(args, outputs):
    base = _base_config(args)
    values = list(args.values)
    if args.with_baselines:
        if args.axis != "eta":
            raise ValueError("--with-baselines only applies to --axis eta")
        values = sorted(set(values) | {0.0, 1.0})
    scenarios = _scenarios(args, base)
    specs = [SweepSpec(args.axis, values, replace(base, scenario=sc), args.trials,
                       args.seed, outputs) for sc in scenarios]
    results = run_sweeps(specs, workers=args.workers)
    for sc, res in zip(scenarios, results):
        path = _out_path(args.out, sc, len(scenarios) > 1)
        emit_csv(res, path)
        for idx, msg in sorted(res.errors.items()):
            print(f"warning: row {idx} quarantined: {msg}", file=sys.stderr)
        print(f"wrote {len(res.rows)} rows to {path}")
    return 0


def cmd_fit(args):
    cfg = _base_config(args)
    print(f"N = {cfg.n_total}  N_C = {cfg.n_c}  N_S = {cfg.n_s}  scenario {cfg.scenario}")
    for user, fit, moments, closed in (("indoor", fit_h_indoor, indoor_moments, closed_form_indoor),
                                       ("outdoor", fit_h_outdoor, outdoor_moments, closed_form_outdoor)):
        try:
            p = fit(cfg)
        except DegenerateFitError as e:
            print(f"{user:8s} degenerate: {e}")
            continue
        mean, var = moments(cfg)
        c = closed(cfg)
        print(f"{user:8s} k = {p.shape:.9g}  theta = {p.scale:.9g}  "
              f"mean = {mean:.9g}  var = {var:.9g}  "
              f"(closed form k = {c.shape:.9g}, theta = {c.scale:.9g})")
    return 0


def cmd_validate(args):
    cfg = _base_config(args)
    h_i, h_o = simulate_gains(cfg, args.trials, args.seed, args.workers)
    checks = []
    for user, fit, moments, h in (("indoor", fit_h_indoor, indoor_moments, h_i),
                                  ("outdoor", fit_h_outdoor, outdoor_moments, h_o)):
        try:
            p = fit(cfg)
        except DegenerateFitError as e:
            checks.append((f"{user} fit", False, str(e)))
            continue
        mean, var = moments(cfg)
        rel = max(abs(p.mean - mean) / mean, abs(p.variance - var) / var)
        checks.append((f"{user} moment identity", rel <= 1e-12, f"rel err {rel:.2e} <= 1e-12"))
        ks = ks_distance(p, h)
        checks.append((f"{user} KS distance", ks <= KS_LIMIT, f"{ks:.4f} <= {KS_LIMIT}"))
        z = (np.mean(h) - mean) / (np.std(h, ddof=1) / math.sqrt(len(h)))
        checks.append((f"{user} MC mean vs fit", True, f"z = {z:+.2f} (informational)"))
    width = max(len(c[0]) for c in checks)
    ok = True
    for name, passed, detail in checks:
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name:<{width}}  {detail}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dris-noma",
        description="Double-RIS NOMA outage and ergodic-rate sweeps under Nakagami-m fading.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=True):
        p.add_argument("--config", help="config file (default: bundled preset)")
        p.add_argument("--preset", default="table1",
                       help="bundled preset when --config is absent (table1, table1_normalized)")
        p.add_argument("--set", action="append", type=_override, metavar="KEY=VALUE",
                       help="override one config key, e.g. links.t.alpha=2.8")
        p.add_argument("--scenario", help="A, B or C; comma list writes one CSV per scenario")
        p.add_argument("--phase-design", choices=("coherent", "random"))
        if trials:
            p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=1)

    for name, help_ in (("op-sweep", "outage probability sweep"),
                        ("ec-sweep", "ergodic rate sweep")):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument("--axis", choices=AXES, required=True)
        p.add_argument("--values", type=parse_values, required=True,
                       help="comma list or start:stop:step")
        p.add_argument("--out", required=True, help="CSV path")
        p.add_argument("--with-baselines", action="store_true",
                       help="add the single-RIS endpoints eta=0 and eta=1")

    p = sub.add_parser("fit", help="print the fitted Gamma parameters")
    common(p, trials=False)
    p = sub.add_parser("validate", help="KS and moment checks against Monte Carlo")
    common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command in ("fit", "validate") and args.scenario:
            args.set = (args.set or []) + [("scenario", args.scenario)]
        if args.command == "op-sweep":
            return _sweep(args, ["op_i", "op_o"])
        if args.command == "ec-sweep":
            return _sweep(args, ["ec_i", "ec_o", "sum_rate"])
        if args.command == "fit":
            return cmd_fit(args)
        return cmd_validate(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
