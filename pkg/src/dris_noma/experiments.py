"""Configuration files, parameter sweeps and CSV output.

Config files are flat ``key = value`` text, one key per line, ``#`` starts a
comment.  Link parameters use dotted keys such as ``links.t.alpha``.  SINR
thresholds are given either directly (``gamma_th_i``) or as a target rate in
bits per channel use (``target_rate_i``).
"""

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .channels import (LINK_NAMES, ConfigError, LinkParams, SystemConfig,
                       fading_signature, simulate_gains)
from .metrics import (ec_analytical, op_indoor_analytical, op_outdoor_analytical,
                      outage_from_gains, rates_from_gains, threshold_from_rate)

log = logging.getLogger(__name__)

AXES = ("eta", "rho_db", "n_total")
METRICS = ("op_i", "op_o", "ec_i", "ec_o", "sum_rate")
AXIS_COLUMNS = ("axis_name", "axis_value", "n_c", "n_s")
METRIC_COLUMNS = {
    "op_i": ("op_i_ana", "op_i_mc", "op_i_se"),
    "op_o": ("op_o_ana", "op_o_mc", "op_o_se"),
    "ec_i": ("ec_i_ana", "ec_i_mc", "ec_i_se"),
    "ec_o": ("ec_o_ana", "ec_o_mc", "ec_o_se"),
    "sum_rate": ("sum_rate_ana", "sum_rate_mc"),
}
DEFAULT_TRIALS = 100_000

_SCALAR_KEYS = {
    "n_total": int, "split_factor": float, "xi": float, "lambda_i": float,
    "lambda_o": float, "rho_db": float, "gamma_th_i": float, "gamma_th_o": float,
    "target_rate_i": float, "target_rate_o": float, "scenario": str,
    "phase_design": str, "star_alignment": str, "d0": float,
}
_LINK_ATTRS = ("m", "omega", "distance", "alpha")
_REQUIRED = ("n_total", "split_factor", "lambda_i", "lambda_o", "rho_db")


# -- configuration files ----------------------------------------------------

def _convert(key, raw, where):
    kind = float if key.startswith("links.") else _SCALAR_KEYS.get(key)
    if kind is None:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot read {key} = {raw!r} as {kind.__name__}") from None


def _build(items, source):
    links = {}
    scalars = {}
    for key, (value, where) in items.items():
        if key.startswith("links."):
            parts = key.split(".")
            if len(parts) != 3 or parts[1] not in LINK_NAMES or parts[2] not in _LINK_ATTRS:
                raise ConfigError(f"{where}: unknown link key {key!r}")
            links.setdefault(parts[1], {})[parts[2]] = value
        else:
            scalars[key] = value

    for key in _REQUIRED:
        if key not in scalars:
            raise ConfigError(f"{source}: missing required key {key!r}")
    for user in ("i", "o"):
        th, rate = f"gamma_th_{user}", f"target_rate_{user}"
        if th in scalars and rate in scalars:
            raise ConfigError(f"{source}: give either {th} or {rate}, not both")
        if rate in scalars:
            scalars[th] = threshold_from_rate(scalars.pop(rate))
        if th not in scalars:
            raise ConfigError(f"{source}: missing {th} (or {rate})")

    built = {}
    for name in LINK_NAMES:
        got = links.get(name, {})
        missing = [a for a in _LINK_ATTRS if a not in got]
        if missing:
            raise ConfigError(f"{source}: link {name!r} is missing "
                              + ", ".join(f"links.{name}.{a}" for a in missing))
        try:
            built[name] = LinkParams(**got)
        except ConfigError as e:
            raise ConfigError(f"{source}: link {name!r}: {e}") from None
    try:
        return SystemConfig(links=built, **scalars)
    except ConfigError as e:
        raise ConfigError(f"{source}: {e}") from None


def _parse_lines(text, source):
    items = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key or not raw:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        if key in items:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        items[key] = (_convert(key, raw, where), where)
    return items


def parse_config(text, source="<string>"):
    return _build(_parse_lines(text, source), source)


def load_config(path):
    """Read and validate a config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config(text, str(path))


def load_preset(name="table1"):
    """A bundled preset: ``table1`` or ``table1_normalized``."""
    ref = resources.files("dris_noma").joinpath("presets", f"{name}.preset")
    if not ref.is_file():
        raise ConfigError(f"no bundled preset named {name!r}")
    return parse_config(ref.read_text(), f"preset:{name}")


def config_items(cfg):
    """Flat ``key -> value`` mapping that :func:`parse_config` accepts."""
    out = {k: getattr(cfg, k) for k in _SCALAR_KEYS if hasattr(cfg, k)}
    for name in LINK_NAMES:
        for attr in _LINK_ATTRS:
            out[f"links.{name}.{attr}"] = getattr(cfg.links[name], attr)
    return out


def dump_config(cfg):
    return "".join(f"{k} = {v!r}\n" if isinstance(v, float) else f"{k} = {v}\n"
                   for k, v in config_items(cfg).items())


def apply_overrides(cfg, overrides):
    """Copy of ``cfg`` with ``{key: text}`` overrides in config-file syntax."""
    items = {k: (v, "<base>") for k, v in config_items(cfg).items()}
    for key, raw in overrides.items():
        where = f"override {key}"
        value = _convert(key, str(raw), where)
        if key.startswith("target_rate_"):
            items.pop("gamma_th_" + key[-1], None)
        items[key] = (value, where)
    return _build(items, "overrides")


# -- sweeps -----------------------------------------------------------------

@dataclass
class SweepSpec:
    axis: str
    values: list
    base: SystemConfig
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    outputs: list = field(default_factory=lambda: list(METRICS))

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        self.values = [float(v) for v in self.values]
        if not self.values:
            raise ValueError("sweep values must be nonempty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        bad = [m for m in self.outputs if m not in METRICS]
        if bad:
            raise ValueError(f"unknown metrics {bad}; choose from {METRICS}")

    def config_at(self, value):
        if self.axis == "eta":
            return replace(self.base, split_factor=value)
        if self.axis == "rho_db":
            return replace(self.base, rho_db=value)
        if value != int(value):
            raise ConfigError(f"n_total must be an integer, got {value}")
        return replace(self.base, n_total=int(value))

    @property
    def columns(self):
        cols = list(AXIS_COLUMNS)
        for m in METRICS:
            if m in self.outputs:
                cols.extend(METRIC_COLUMNS[m])
        return cols


@dataclass
class SweepResult:
    axis: str
    columns: list
    rows: list
    errors: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([row[name] for row in self.rows], dtype=float)


def _gain_key(cfg):
    return (fading_signature(cfg), tuple(sorted(cfg.betas().items())),
            cfg.xi, cfg.star_alignment)


def _analytic(cfg, outputs):
    row = {}
    if cfg.phase_design != "coherent":
        # the Gamma fits describe coherent phases only
        return row
    if "op_i" in outputs:
        row["op_i_ana"] = op_indoor_analytical(cfg)
    if "op_o" in outputs:
        row["op_o_ana"] = op_outdoor_analytical(cfg)
    if {"ec_i", "ec_o", "sum_rate"} & set(outputs):
        r = ec_analytical(cfg)
        row.update(ec_i_ana=r.rate_indoor, ec_o_ana=r.rate_outdoor, sum_rate_ana=r.sum_rate)
    return row


def _empirical(h_i, h_o, cfg, outputs):
    row = {}
    if "op_i" in outputs or "op_o" in outputs:
        op = outage_from_gains(h_i, h_o, cfg)
        row.update(op_i_mc=op.op_indoor, op_i_se=op.se_indoor,
                   op_o_mc=op.op_outdoor, op_o_se=op.se_outdoor)
    if {"ec_i", "ec_o", "sum_rate"} & set(outputs):
        r = rates_from_gains(h_i, h_o, cfg)
        row.update(ec_i_mc=r.rate_indoor, ec_i_se=r.se_indoor,
                   ec_o_mc=r.rate_outdoor, ec_o_se=r.se_outdoor, sum_rate_mc=r.sum_rate)
    return row


def run_sweeps(specs, workers=1):
    """Evaluate several sweeps, sharing fading draws wherever possible.

    Every grid point draws from its spec's seed alone, so a point's values do
    not depend on which other points are in the sweep.
    """
    specs = list(specs)
    results = []
    pending = {}    # (gain key, trials, seed) -> list of (result, row, cfg, outputs)
    for spec in specs:
        res = SweepResult(spec.axis, spec.columns, [])
        for idx, value in enumerate(spec.values):
            row = {"axis_name": spec.axis, "axis_value": value}
            try:
                cfg = spec.config_at(value)
                row.update(n_c=cfg.n_c, n_s=cfg.n_s)
                row.update(_analytic(cfg, spec.outputs))
                if spec.outputs:
                    key = (_gain_key(cfg), spec.trials, spec.seed)
                    pending.setdefault(key, []).append((res, idx, cfg, spec.outputs))
            except (ValueError, ArithmeticError) as e:
                res.errors[idx] = str(e)
                log.warning("sweep %s=%g quarantined: %s", spec.axis, value, e)
            res.rows.append(row)
        results.append(res)

    # one simulation per distinct draw set, one combine per distinct gain config
    by_signature = {}
    for key, users in pending.items():
        (sig, _, _, _), trials, seed = key
        by_signature.setdefault((sig, trials, seed), []).append((key, users))
    for (_, trials, seed), group in by_signature.items():
        cfgs = [users[0][2] for _, users in group]
        try:
            gains = simulate_gains(cfgs, trials, seed, workers)
        except (ValueError, ArithmeticError) as e:
            for _, users in group:
                for res, idx, _, _ in users:
                    res.errors[idx] = str(e)
            continue
        for (_, users), (h_i, h_o) in zip(group, gains):
            for res, idx, cfg, outputs in users:
                res.rows[idx].update(_empirical(h_i, h_o, cfg, outputs))

    for res in results:
        for row in res.rows:
            for col in res.columns:
                row.setdefault(col, math.nan)
    return results


def run_sweep(spec, workers=1):
    return run_sweeps([spec], workers)[0]


def emit_csv(result, path):
    """Write a sweep as CSV; floats use 9 significant digits."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(result.columns)
            for row in result.rows:
                writer.writerow([_fmt(row[c]) for c in result.columns])
    except OSError as e:
        raise OSError(f"cannot write sweep CSV to {path}: {e}") from e


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".9g")


def read_csv(path):
    """Rows of a sweep CSV as dicts, numeric fields converted to float."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for k, v in row.items():
            if k != "axis_name":
                row[k] = float(v)
    return rows


# -- figure grids -----------------------------------------------------------

FIG2_ETAS = [round(0.05 * i, 2) for i in range(1, 20)]
FIG4_ETAS = [round(0.05 * i, 2) for i in range(0, 21)]
FIG_RHOS = [float(r) for r in range(0, 51, 5)]


def figure_sweeps(figure, base=None, trials=DEFAULT_TRIALS, seed=0):
    """``{label: SweepSpec}`` reproducing one of the figure grids (2 to 5)."""
    base = load_preset("table1") if base is None else base
    fig5 = replace(base, gamma_th_i=0.5, gamma_th_o=0.5)
    ops = ["op_i", "op_o"]
    ecs = ["ec_i", "ec_o", "sum_rate"]
    if figure == 2:
        cfg = replace(fig5, n_total=200, rho_db=25.0).with_link("t", alpha=3.4)
        return {"fig2": SweepSpec("eta", FIG2_ETAS, cfg, trials, seed, ops)}
    if figure == 3:
        cfg = replace(base, n_total=200, split_factor=0.35).with_link("t", alpha=3.4)
        return {f"fig3_{sc}": SweepSpec("rho_db", FIG_RHOS, replace(cfg, scenario=sc),
                                        trials, seed, ecs)
                for sc in "ABC"}
    if figure == 4:
        cfg = replace(base, n_total=200, rho_db=35.0)
        return {f"fig4_alpha{a}": SweepSpec("eta", FIG4_ETAS, cfg.with_link("t", alpha=a),
                                            trials, seed, ecs)
                for a in (2.8, 3.1, 3.4)}
    if figure == 5:
        cfg = fig5.with_link("t", alpha=3.4)
        specs = {f"fig5_N{n}": SweepSpec("rho_db", FIG_RHOS, replace(cfg, n_total=n),
                                         trials, seed, ops)
                 for n in (50, 100, 200)}
        specs["fig5_N200_random"] = SweepSpec(
            "rho_db", FIG_RHOS, replace(cfg, n_total=200, phase_design="random"),
            trials, seed, ops)
        return specs
    raise ValueError(f"no sweep defined for figure {figure}")
