"""Command-line harness: monopoly, race, reflect, ks and verify campaigns.

Every mode writes ``results.csv`` and ``summary.json`` into the output
directory.  Both files depend only on the configuration and the seed;
wall-clock timings go to a separate ``timing.json``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import shutil
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from urnlab import dp, explosion, reflected
from urnlab.errors import ConfigError, UrnlabError
from urnlab.feedback import BinState, FeedbackParams, RaceSpec, monopoly_prob_mc
from urnlab.stats import ks_statistic

SCHEMA_VERSION = "urnlab-results/1"
MODES = ("monopoly", "race", "reflect", "verify", "ks")

EXIT_OK, EXIT_CONFIG, EXIT_INCONSISTENT = 0, 2, 3

RESULT_COLUMNS = {
    "monopoly": ["replica", "winner", "steps"],
    "race": ["multiplier", "cap1", "cap2", "probability", "delta"],
    "reflect": ["run", "attachment", "lower_gap_min", "lower_gap_max", "upper_gap_min",
                "upper_gap_max", "reflect_up", "reflect_right"],
    "ks": ["n", "statistic"],
}

DEFAULTS = {
    "seed": 0,
    "replicas": 10_000,
    "cap_mult": 50,
    "method": "auto",
    "steps": 10**6,
    "runs": 1,
    "r": 5.0,
    "window_fraction": 0.5,
    "samples": 10_000,
    "exact_terms": 10_000,
    "block_frac": 0.01,
    "budget": dp.STREAMING_BUDGET,
}

# key -> type used both for JSON validation and argparse
FIELDS = {
    "beta1": float, "beta2": float, "beta": float,
    "x0": int, "y0": int,
    "curve_alpha": float, "curve_nu": float, "curve_mu": float, "curve_delta": float,
    "critical": bool,
    "cap1": int, "cap2": int, "cap_mult": int, "multipliers": list,
    "replicas": int, "method": str,
    "alpha": float, "gamma": float,
    "lower_coeff": float, "lower_exp": float, "lower_corr_coeff": float, "lower_corr_exp": float,
    "upper_coeff": float, "upper_exp": float, "upper_corr_coeff": float, "upper_corr_exp": float,
    "start_on": str, "start_x": int,
    "steps": int, "runs": int, "r": float, "window_fraction": float,
    "k": int, "samples": int, "truncation_K": int, "exact_terms": int, "block_frac": float,
    "budget": int, "seed": int, "out_dir": str, "preset": str, "checks": list,
    "dump_table": bool, "dump_trajectory": int, "threads": int,
}


@dataclass
class ExperimentConfig:
    mode: str
    values: dict = field(default_factory=dict)

    def get(self, key, default=None):
        v = self.values.get(key)
        return DEFAULTS.get(key, default) if v is None else v

    def require(self, *keys):
        missing = [k for k in keys if self.values.get(k) is None and k not in DEFAULTS]
        if missing:
            raise ConfigError(f"mode {self.mode!r} requires: {', '.join(missing)}")
        return [self.get(k) for k in keys]

    def params(self) -> FeedbackParams:
        if self.values.get("beta") is not None:
            b = self.values["beta"]
            return FeedbackParams(self.get("beta1", b), self.get("beta2", b))
        b1, b2 = self.require("beta1", "beta2")
        return FeedbackParams(b1, b2)

    def curve(self, params: FeedbackParams):
        if self.get("critical"):
            return explosion.InitialCurveSpec.on_critical_curve(
                params, self.get("curve_mu", 0.0), self.get("curve_delta", 0.0))
        if self.values.get("curve_alpha") is not None:
            return explosion.InitialCurveSpec(self.get("curve_alpha"), self.get("curve_nu", 1.0),
                                              self.get("curve_mu", 0.0), self.get("curve_delta", 0.0))
        return None

    def start(self, params: FeedbackParams) -> BinState:
        (x0,) = self.require("x0")
        if self.values.get("y0") is not None:
            return BinState(x0, self.values["y0"])
        curve = self.curve(params)
        if curve is None:
            raise ConfigError("give y0, or an initial curve (curve_alpha/curve_nu or critical)")
        y, _ = explosion.initial_y(x0, curve)
        return BinState(x0, y)

    def boundary(self) -> reflected.BoundarySpec:
        def side(name, power):
            c = self.values.get(f"{name}_coeff")
            e = self.values.get(f"{name}_exp")
            if e is None:
                if power is None:
                    raise ConfigError(f"give {'alpha' if name == 'lower' else 'gamma'} or {name}_exp")
                return reflected.CurveSpec.power(power)
            return reflected.CurveSpec(1.0 if c is None else c, e,
                                       self.get(f"{name}_corr_coeff", 0.0),
                                       self.get(f"{name}_corr_exp", 0.0))

        return reflected.BoundarySpec(side("lower", self.values.get("alpha")),
                                      side("upper", self.values.get("gamma")))


def _json_value(raw: str):
    return json.loads(raw)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with flat keys mirroring the flags")
    for key, typ in FIELDS.items():
        flag = "--" + key.replace("_", "-")
        if typ is bool:
            common.add_argument(flag, dest=key, action="store_const", const=True, default=None)
        elif typ is list:
            common.add_argument(flag, dest=key, type=_json_value, default=None,
                                help="JSON list")
        else:
            common.add_argument(flag, dest=key, type=typ, default=None)
    p = argparse.ArgumentParser(prog="urnlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="mode", required=True)
    for m in MODES:
        sub.add_parser(m, parents=[common])
    return p


def load_config(argv) -> ExperimentConfig:
    ns = _parser().parse_args(argv)
    values: dict = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from exc
        unknown = sorted(set(data) - set(FIELDS) - {"mode"})
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values.update({k: v for k, v in data.items() if k != "mode"})
    values.update({k: v for k, v in vars(ns).items() if k in FIELDS and v is not None})
    for k, v in values.items():
        typ = FIELDS[k]
        if typ is float and isinstance(v, int) and not isinstance(v, bool):
            values[k] = float(v)
        elif typ is not float and not isinstance(v, typ):
            raise ConfigError(f"{k}: expected {typ.__name__}, got {v!r}")
    return ExperimentConfig(ns.mode, values)


# ---------------------------------------------------------------------------
# modes: each returns (rows, summary)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def _params_dict(p: FeedbackParams) -> dict:
    return {"beta1": p.beta1, "beta2": p.beta2}


def run_monopoly(cfg: ExperimentConfig):
    params = cfg.params()
    start = cfg.start(params)
    if cfg.values.get("cap1") is not None or cfg.values.get("cap2") is not None:
        c1, c2 = cfg.require("cap1", "cap2")
        spec = RaceSpec(c1, c2)
    else:
        spec = RaceSpec.from_multiplier(start, cfg.get("cap_mult"))
    spec.validate(start)
    seed = cfg.get("seed")
    est = monopoly_prob_mc(params, start, spec, cfg.get("replicas"), seed, cfg.get("method"),
                           exact_terms=cfg.get("exact_terms"), block_frac=cfg.get("block_frac"))
    rows = [
        {"replica": i, "winner": 1 if w else 2,
         "steps": None if est.steps is None else int(est.steps[i])}
        for i, w in enumerate(est.winners)
    ]
    prediction: dict = {}
    if 1 < params.beta1 <= params.beta2:
        prediction["normal_approximation"] = explosion.monopoly_prob_normal(params, start)
        curve = cfg.curve(params)
        if curve is not None:
            try:
                pred = explosion.classify_unreflected(params, curve)
                prediction["limit"] = {"kind": pred.kind.value, "value": pred.limit, "rho": pred.rho}
            except UrnlabError as exc:
                prediction["limit"] = {"error": str(exc)}
    budget = cfg.get("budget")
    if (spec.cap1 - start.x + 1) * (spec.cap2 - start.y + 1) <= budget:
        prediction["dp_exact"] = dp.race_prob_exact(params, start, spec.cap1, spec.cap2, budget)
    if cfg.values.get("cap1") is None:
        # finite-cap proxy stability, exact where the grid fits
        stab = []
        for m in (25, 50, 100):
            cells = (m * start.x - start.x + 1) * (m * start.y - start.y + 1)
            if cells <= budget:
                stab.append({"multiplier": m, "dp_exact":
                             dp.race_prob_exact(params, start, m * start.x, m * start.y, budget)})
        prediction["cap_stability"] = stab
    summary = {
        "mode": "monopoly",
        "params": _params_dict(params),
        "start": [start.x, start.y],
        "caps": [spec.cap1, spec.cap2],
        "replicas": est.replicas,
        "method": est.method,
        "prediction": prediction,
        "estimate": est.estimate,
        "std_error": est.std_error,
        "verdict": None,
        "seed": seed,
    }
    return rows, summary


def run_race(cfg: ExperimentConfig, out: Path):
    params = cfg.params()
    start = cfg.start(params)
    budget = cfg.get("budget")
    if cfg.values.get("multipliers") is not None:
        sweep = dp.race_prob_cap_sweep(params, start, cfg.get("multipliers"), budget)
        rows = [{"multiplier": r.multiplier, "cap1": r.cap1, "cap2": r.cap2,
                 "probability": r.probability, "delta": r.delta} for r in sweep]
    else:
        if cfg.values.get("cap1") is not None:
            c1, c2 = cfg.require("cap1", "cap2")
            mult = None
        else:
            mult = cfg.get("cap_mult")
            c1, c2 = mult * start.x, mult * start.y
        p = dp.race_prob_exact(params, start, c1, c2, budget)
        rows = [{"multiplier": mult, "cap1": c1, "cap2": c2, "probability": p, "delta": None}]
        if cfg.get("dump_table"):
            dp.race_table(params, c1, c2).to_csv(out / "table.csv")
    final = rows[-1]["probability"]
    prediction = {}
    if 1 < params.beta1 <= params.beta2:
        prediction["normal_approximation"] = explosion.monopoly_prob_normal(params, start)
    summary = {
        "mode": "race",
        "params": _params_dict(params),
        "start": [start.x, start.y],
        "prediction": prediction,
        "estimate": final,
        "std_error": 0.0,
        "verdict": None,
        "seed": cfg.get("seed"),
    }
    return rows, summary


def _reflect_start(cfg: ExperimentConfig, params, boundary) -> BinState:
    where = cfg.values.get("start_on")
    if where is None:
        return cfg.start(params)
    (x,) = cfg.require("start_x")
    if where == "lower":
        return boundary.lower_start(x)
    if where == "upper":
        return boundary.upper_start(x)
    raise ConfigError(f"start_on must be 'lower' or 'upper', got {where!r}")


def run_reflect(cfg: ExperimentConfig, out: Path):
    params = cfg.params()
    boundary = cfg.boundary()
    start = _reflect_start(cfg, params, boundary)
    seed = cfg.get("seed")
    steps, runs, r, wf = cfg.get("steps"), cfg.get("runs"), cfg.get("r"), cfg.get("window_fraction")
    stats = reflected.run_many(params, boundary, start, steps, runs, seed, r, window_fraction=wf)
    rows = [
        {"run": i, "attachment": s.attachment.value,
         "lower_gap_min": s.lower_gap_min, "lower_gap_max": s.lower_gap_max,
         "upper_gap_min": s.upper_gap_min, "upper_gap_max": s.upper_gap_max,
         "reflect_up": s.reflect_up_count, "reflect_right": s.reflect_right_count}
        for i, s in enumerate(stats)
    ]
    thin = cfg.get("dump_trajectory")
    if thin:
        one = reflected.run_with_stats(params, boundary, start, steps, r, seed=seed, stream=0,
                                       record_every=thin, window_fraction=wf)
        one.write_trajectory_csv(out / "trajectory_run0.csv")
        _write_json(out / "trajectory_run0_stats.json", one.summary())
    prediction = None
    if boundary.is_power_law:
        try:
            prediction = reflected.predict_regime(params, boundary.alpha, boundary.gamma).as_dict()
        except UrnlabError as exc:
            prediction = {"error": str(exc)}
    counts = {a.value: sum(s.attachment is a for s in stats) for a in reflected.Attachment}
    summary = {
        "mode": "reflect",
        "params": _params_dict(params),
        "boundary": {"lower": list(boundary.lower.as_tuple()), "upper": list(boundary.upper.as_tuple())},
        "start": [start.x, start.y],
        "steps": steps,
        "runs": runs,
        "tail_window": list(stats[0].tail_window),
        "upper_gap_form": stats[0].upper_gap_form,
        "prediction": prediction,
        "attachment_counts": counts,
        "s_histogram_total": np.sum([s.jump_up_counts_per_interval for s in stats], axis=0).tolist(),
        "estimate": None,
        "std_error": None,
        "verdict": None,
        "seed": seed,
    }
    return rows, summary


def run_ks(cfg: ExperimentConfig):
    beta = cfg.values.get("beta", cfg.values.get("beta1"))
    if beta is None:
        raise ConfigError("mode 'ks' requires beta")
    (k,) = cfg.require("k")
    spec = explosion.BirthProcessSpec(beta, k)
    n = cfg.get("samples")
    seed = cfg.get("seed")
    draws = explosion.sample_explosion_times(spec, n, seed, cfg.values.get("truncation_K"),
                                             cfg.get("exact_terms"), cfg.get("block_frac"))
    m = explosion.explosion_moments(spec)
    stat = ks_statistic((draws.samples - m.mean) / m.std)
    summary = {
        "mode": "ks",
        "params": {"beta": beta, "start_k": k},
        "truncation_K": draws.truncation_K,
        "tail_std": draws.tail_std,
        "exact_sampling": draws.exact,
        "prediction": {"mean": m.mean, "std": m.std},
        "estimate": stat,
        "std_error": None,
        "verdict": None,
        "seed": seed,
    }
    return [{"n": n, "statistic": stat}], summary


# ---------------------------------------------------------------------------
# verify

PRESETS = {
    "symmetric-race": {
        "mode": "monopoly",
        "config": {"beta1": 2.0, "beta2": 2.0, "x0": 5, "y0": 5, "cap_mult": 50, "replicas": 100_000, "seed": 7},
        "checks": [{"name": "mc_vs_half", "kind": "proportion", "column": "winner", "value": 1,
                    "reference": 0.5, "k_se": 4.0}],
    },
    "hand-race": {
        "mode": "monopoly",
        "config": {"beta1": 1.0, "beta2": 1.0, "x0": 1, "y0": 1, "cap1": 3, "cap2": 2, "replicas": 100_000, "seed": 7},
        "checks": [{"name": "mc_vs_third", "kind": "proportion", "column": "winner", "value": 1,
                    "reference": 1 / 3, "k_se": 4.0}],
    },
    "offset-normal": {
        "mode": "race",
        "config": {"beta1": 2.0, "beta2": 2.0, "x0": 400, "y0": 388, "multipliers": [10, 25, 50],
                   "budget": 500_000_000},
        "checks": [{"name": "dp_vs_phi_rho", "kind": "value", "column": "probability", "row": -1,
                    "reference": 0.8413447460685429, "abs_tol": 0.05}],
    },
    "main-sym-k2": {
        "mode": "reflect",
        "config": {"beta1": 2.0, "beta2": 2.0, "alpha": 0.5, "gamma": 2.0, "start_on": "lower",
                   "start_x": 10_000, "steps": 10**6, "runs": 20, "seed": 8},
        "checks": [{"name": "lower_strip_width_2", "kind": "rows", "min_count": 18,
                    "all": [["lower_gap_min", "<=", 0.2], ["lower_gap_max", ">", 1.0],
                            ["lower_gap_max", "<=", 2.2]]}],
    },
    "main-sym-upper": {
        "mode": "reflect",
        "config": {"beta1": 2.0, "beta2": 2.0, "alpha": 0.5, "gamma": 2.0, "start_on": "upper",
                   "start_x": 10_000, "steps": 10**6, "runs": 20, "seed": 8},
        "checks": [{"name": "upper_strip_width_2", "kind": "rows", "min_count": 18,
                    "all": [["upper_gap_min", "<=", 0.2], ["upper_gap_max", ">", 1.0],
                            ["upper_gap_max", "<=", 2.2]]}],
    },
    "asym-sublinear": {
        "mode": "reflect",
        "config": {"beta1": 2.0, "beta2": 3.0, "alpha": 0.25, "gamma": 0.75, "start_on": "upper",
                   "start_x": 10_000, "steps": 10**6, "runs": 20, "seed": 9},
        "checks": [{"name": "hug_upper_edge", "kind": "rows", "min_count": 18,
                    "all": [["upper_gap_min", ">=", -0.2], ["upper_gap_max", "<=", 1.2]]}],
    },
    "bisector-zigzag": {
        "mode": "reflect",
        "config": {"beta1": 2.0, "beta2": 3.5, "alpha": 0.25, "gamma": 1.0, "x0": 10_000, "y0": 10_000,
                   "steps": 10**5, "runs": 100, "seed": 10},
        "checks": [{"name": "zigzag", "kind": "rows", "min_count": 99,
                    "all": [["upper_gap_min", ">=", 0.0], ["upper_gap_max", "<=", 1.0]]}],
    },
    "bisector-k2": {
        "mode": "reflect",
        "config": {"beta1": 2.0, "beta2": 3.0, "alpha": 0.25, "gamma": 1.0, "x0": 10_000, "y0": 10_000,
                   "steps": 10**5, "runs": 20, "seed": 11},
        "checks": [{"name": "max_reaches_2", "kind": "rows", "min_count": 15,
                    "all": [["upper_gap_max", "==", 2.0]]},
                   {"name": "max_never_above_2", "kind": "rows", "min_count": 20,
                    "all": [["upper_gap_max", "<=", 2.0]]}],
    },
    "explosion-ks": {
        "mode": "ks",
        "config": {"beta": 2.0, "k": 10_000, "samples": 10_000, "truncation_K": 10**7, "seed": 12},
        "checks": [{"name": "ks_distance", "kind": "value", "column": "statistic", "row": 0,
                    "reference": 0.0, "abs_tol": 0.05}],
    },
}

_OPS = {
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b, ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b, "==": lambda a, b: a == b,
}


def _num(v):
    return float(v) if v not in ("", None) else math.nan


def evaluate_checks(rows: list[dict], checks: list[dict]) -> tuple[str, list[dict]]:
    """Verdict from result rows (CSV strings or numbers) and check specs."""
    outcomes = []
    for chk in checks:
        kind = chk["kind"]
        if kind == "rows":
            ok_rows = sum(all(_OPS[op](_num(r[col]), thr) for col, op, thr in chk["all"]) for r in rows)
            passed = ok_rows >= chk["min_count"]
            outcomes.append({**chk, "observed_count": ok_rows, "total": len(rows), "passed": passed})
        elif kind == "proportion":
            n = len(rows)
            p = sum(int(_num(r[chk["column"]])) == chk["value"] for r in rows) / n
            se = math.sqrt(p * (1 - p) / n)
            tol = max(chk.get("k_se", 0.0) * se, chk.get("abs_tol", 0.0))
            passed = abs(p - chk["reference"]) <= tol
            outcomes.append({**chk, "observed": p, "std_error": se, "tolerance": tol, "passed": passed})
        elif kind == "value":
            v = _num(rows[chk["row"]][chk["column"]])
            passed = abs(v - chk["reference"]) <= chk["abs_tol"]
            outcomes.append({**chk, "observed": v, "passed": passed})
        else:
            raise ConfigError(f"unknown check kind {kind!r}")
    verdict = "Consistent" if all(o["passed"] for o in outcomes) else "Inconsistent"
    return verdict, outcomes


def run_verify(cfg: ExperimentConfig, out: Path):
    name = cfg.values.get("preset")
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        preset = PRESETS[name]
        values = dict(preset["config"])
        # explicit flags/config keys override the preset
        values.update({k: v for k, v in cfg.values.items() if k not in ("preset", "checks")})
        mode = preset["mode"]
        checks = cfg.values.get("checks") or preset["checks"]
    else:
        checks = cfg.values.get("checks")
        if not checks:
            raise ConfigError("verify needs a preset or a list of checks")
        values = dict(cfg.values)
        mode = values.pop("verify_mode", None) or _infer_mode(values)
    inner = ExperimentConfig(mode, values)
    rows, summary = _dispatch(inner, out)
    verdict, outcomes = evaluate_checks([{k: _fmt(v) for k, v in r.items()} for r in rows], checks)
    summary["verify"] = {"preset": name, "mode": mode, "checks": outcomes}
    summary["verdict"] = verdict
    summary["mode"] = "verify"
    summary["inner_mode"] = mode
    return rows, summary, mode


def _infer_mode(values: dict) -> str:
    if values.get("alpha") is not None or values.get("lower_exp") is not None:
        return "reflect"
    if values.get("k") is not None:
        return "ks"
    return "monopoly"


def _dispatch(cfg: ExperimentConfig, out: Path):
    if cfg.mode == "monopoly":
        return run_monopoly(cfg)
    if cfg.mode == "race":
        return run_race(cfg, out)
    if cfg.mode == "reflect":
        return run_reflect(cfg, out)
    if cfg.mode == "ks":
        return run_ks(cfg)
    raise ConfigError(f"unknown mode {cfg.mode!r}")


# ---------------------------------------------------------------------------
# output


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])


def _out_dir(cfg: ExperimentConfig) -> Path:
    d = cfg.values.get("out_dir") or os.environ.get("URNLAB_OUT_DIR") or "urnlab_out"
    return Path(d)


def execute(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.values.get("threads"):
        import numba

        numba.set_num_threads(cfg.values["threads"])
    stage = Path(tempfile.mkdtemp(prefix=".partial-", dir=out))
    t0 = time.perf_counter()
    try:
        if cfg.mode == "verify":
            rows, summary, inner = run_verify(cfg, stage)
        else:
            rows, summary = _dispatch(cfg, stage)
            inner = cfg.mode
        summary["schema_version"] = SCHEMA_VERSION
        summary["config"] = {k: cfg.values[k] for k in sorted(cfg.values) if k not in ("out_dir", "threads")}
        summary["columns"] = RESULT_COLUMNS[inner]
        _write_csv(stage / "results.csv", RESULT_COLUMNS[inner], rows)
        _write_json(stage / "summary.json", summary)
        _write_json(stage / "timing.json", {"wall_seconds": time.perf_counter() - t0})
        for f in stage.iterdir():
            os.replace(f, out / f.name)
    finally:
        shutil.rmtree(stage, ignore_errors=True)
    _report(summary)
    if summary.get("verdict") == "Inconsistent":
        return EXIT_INCONSISTENT
    return EXIT_OK


def _report(summary: dict) -> None:
    mode = summary["mode"]
    if mode == "verify":
        for c in summary["verify"]["checks"]:
            obs = c.get("observed", c.get("observed_count"))
            print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: observed {obs}")
        print(f"verdict: {summary['verdict']}")
    elif mode == "race":
        print(f"P(bin 1 first) = {summary['estimate']:.12f}")
    elif mode == "reflect":
        print(f"attachment: {summary['attachment_counts']}")
    elif mode == "ks":
        print(f"KS statistic = {summary['estimate']:.6f}")
    else:
        print(f"estimate = {summary['estimate']:.6f} +/- {summary['std_error']:.6f}")


def run_cli(argv=None) -> int:
    try:
        cfg = load_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code else EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return execute(cfg)
    except (ConfigError, UrnlabError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
