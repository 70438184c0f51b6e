"""Command-line entry point: evaluators, simulation and verification suites.

Exit codes: 0 success, 1 a verification gate failed, 2 usage or configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import inspect
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import subordinator_sampler as ss
from .free_kernel import eval_free, eval_free_green
from .killed_mc import HorizonError, killed_green_occupation, simulate_exits, summarize
from .model import ExteriorBallDomain, ProcessParams, SpaceTimePoint
from .special_functions import QuadratureError
from .subordinator_sampler import SeedSpec, StepPolicy
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


_SECTIONS = {
    "process": {"d", "alpha", "m"},
    "domain": {"radius"},
    "grid": {"t", "r", "x", "y", "points"},
    "estimator": {"n_replicates", "eps", "horizon_tol", "kappa", "lam", "dt_min", "dt_max",
                  "dt_max_fraction", "diffusive_scale"},
    "output": {"dir"},
    "verify": None,
}
_TOP_LEVEL = {"seed", "spread_cap"}


@dataclass
class ExperimentConfig:
    params: ProcessParams = field(default_factory=ProcessParams)
    domain: ExteriorBallDomain | None = None
    times: list[float] = field(default_factory=list)
    radii: list[float] = field(default_factory=list)
    points: list[SpaceTimePoint] = field(default_factory=list)
    n_replicates: int = 1000
    eps: float | None = None
    horizon_tol: float = 1e-3
    step_policy: StepPolicy = field(default_factory=StepPolicy)
    seed: int = 0
    spread_cap: float = 10.0
    out_dir: str = "relheat_out"
    suite_options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the parsed config and effective seed."""
        body = json.dumps({"config": self.raw, "seed": self.seed}, sort_keys=True,
                          separators=(",", ":"), default=str)
        return hashlib.sha256(body.encode()).hexdigest()

    @classmethod
    def from_toml(cls, path: str | Path) -> "ExperimentConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        for key, value in data.items():
            if key in _TOP_LEVEL:
                continue
            if key not in _SECTIONS:
                raise ConfigError(f"unknown config key {key!r}")
            if not isinstance(value, dict):
                raise ConfigError(f"config key {key!r} must be a table")
            allowed = _SECTIONS[key]
            if allowed is not None:
                for sub in value:
                    if sub not in allowed:
                        raise ConfigError(f"unknown config key '{key}.{sub}'")
        cfg = cls(raw=data)
        proc = data.get("process", {})
        try:
            cfg.params = ProcessParams(int(proc.get("d", 3)), float(proc.get("alpha", 1.0)),
                                       float(proc.get("m", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"process: {exc}") from None
        if "domain" in data:
            radius = _number(data["domain"], "radius", "domain", required=True)
            if not radius > 0:
                raise ConfigError("'domain.radius' must be positive")
            cfg.domain = ExteriorBallDomain(radius)
        grid = data.get("grid", {})
        cfg.times = [_positive(v, "grid.t") for v in _list(grid, "t")]
        cfg.radii = [_nonneg(v, "grid.r") for v in _list(grid, "r")]
        d = cfg.params.d
        xs = [_vector(v, d, "grid.x") for v in _list(grid, "x")]
        ys = [_vector(v, d, "grid.y") for v in _list(grid, "y")]
        for t in cfg.times:
            for x in xs:
                for y in ys or [tuple([0.0] * d)]:
                    cfg.points.append(SpaceTimePoint(t, x, y))
        for i, entry in enumerate(_list(grid, "points")):
            if not isinstance(entry, dict):
                raise ConfigError(f"'grid.points[{i}]' must be a table with t, x, y")
            unknown = set(entry) - {"t", "x", "y"}
            if unknown:
                raise ConfigError(f"unknown config key 'grid.points[{i}].{sorted(unknown)[0]}'")
            t = _positive(entry.get("t", math.inf), f"grid.points[{i}].t")
            x = _vector(entry.get("x"), d, f"grid.points[{i}].x")
            y = _vector(entry.get("y", [0.0] * d), d, f"grid.points[{i}].y")
            cfg.points.append(SpaceTimePoint(t, x, y))
        est = data.get("estimator", {})
        cfg.n_replicates = int(_number(est, "n_replicates", "estimator", default=1000))
        if cfg.n_replicates < 1:
            raise ConfigError("'estimator.n_replicates' must be at least 1")
        if "eps" in est:
            cfg.eps = _positive(est["eps"], "estimator.eps")
        cfg.horizon_tol = _positive(est.get("horizon_tol", 1e-3), "estimator.horizon_tol")
        policy = {k: est[k] for k in ("kappa", "lam", "dt_min", "dt_max", "dt_max_fraction",
                                      "diffusive_scale") if k in est}
        try:
            cfg.step_policy = StepPolicy(**policy)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"estimator: {exc}") from None
        if "seed" in data:
            seed = data["seed"]
            if not isinstance(seed, int) or not 0 <= seed < 2**64:
                raise ConfigError("'seed' must be an unsigned 64-bit integer")
            cfg.seed = seed
        cfg.spread_cap = _positive(data.get("spread_cap", 10.0), "spread_cap")
        cfg.out_dir = str(data.get("output", {}).get("dir", cfg.out_dir))
        cfg.suite_options = {k: _tuplify(v) for k, v in data.get("verify", {}).items()}
        for suite, opts in cfg.suite_options.items():
            if suite not in SUITES:
                raise ConfigError(f"unknown config key 'verify.{suite}' (no such suite)")
            if not isinstance(opts, dict):
                raise ConfigError(f"'verify.{suite}' must be a table")
            accepted = set(inspect.signature(SUITES[suite]).parameters) - {"seed", "threads"}
            for key in opts:
                if key not in accepted:
                    raise ConfigError(f"unknown config key 'verify.{suite}.{key}'")
        return cfg


def _number(table: dict, key: str, section: str, default=None, required: bool = False) -> float:
    if key not in table:
        if required:
            raise ConfigError(f"missing config key '{section}.{key}'")
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config key '{section}.{key}' must be a number")
    return v


def _list(table: dict, key: str) -> list:
    v = table.get(key, [])
    if not isinstance(v, list):
        raise ConfigError(f"config key 'grid.{key}' must be an array")
    return v


def _positive(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
        raise ConfigError(f"config key '{name}' must be a positive number")
    return float(v)


def _nonneg(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v >= 0:
        raise ConfigError(f"config key '{name}' must be a nonnegative number")
    return float(v)


def _vector(v, d: int, name: str) -> tuple:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return (float(v),) + (0.0,) * (d - 1)
    if not isinstance(v, list) or len(v) != d:
        raise ConfigError(f"config key '{name}' must be a number or an array of length {d}")
    try:
        return tuple(float(c) for c in v)
    except (TypeError, ValueError):
        raise ConfigError(f"config key '{name}' must hold numbers") from None


def _tuplify(v):
    if isinstance(v, list):
        return tuple(_tuplify(e) for e in v)
    if isinstance(v, dict):
        return {k: _tuplify(e) for k, e in v.items()}
    return v


# ---------------------------------------------------------------------------
# output


def fmt(v) -> str:
    """17 significant digits for floats so that values round-trip exactly."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _clean(o):
    # JSON has no infinities; they become strings so the file stays standard JSON
    if isinstance(o, float) and not math.isfinite(o):
        return "nan" if math.isnan(o) else ("inf" if o > 0 else "-inf")
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def write_json(path: Path, obj) -> None:
    text = json.dumps(_clean(json.loads(json.dumps(obj, default=_json_default,
                                                   allow_nan=True))),
                      indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")


def _table_rows(rows: list[dict]) -> tuple[list[str], list[list]]:
    header: list[str] = []
    flat_rows = []
    for row in rows:
        flat = {}
        for k, v in row.items():
            if isinstance(v, (list, tuple)):
                for i, c in enumerate(v):
                    flat[f"{k}{i}"] = c
            else:
                flat[k] = v
        for k in flat:
            if k not in header:
                header.append(k)
        flat_rows.append(flat)
    return header, [[r.get(k, "") for k in header] for r in flat_rows]


# ---------------------------------------------------------------------------
# commands


def _out_dir(args, cfg: ExperimentConfig | None) -> Path:
    out = Path(args.out or (cfg.out_dir if cfg else "relheat_out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args, required: bool = True) -> ExperimentConfig | None:
    if args.config is None:
        if required:
            raise ConfigError("this command needs --config")
        cfg = ExperimentConfig.from_dict({})
    else:
        cfg = ExperimentConfig.from_toml(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        cfg.seed = args.seed
    return cfg


def _radial_points(cfg: ExperimentConfig) -> list[tuple[float, float]]:
    if cfg.points:
        return [(p.t, p.separation) for p in cfg.points]
    if not (cfg.times and cfg.radii):
        raise ConfigError("kernel-eval needs 'grid.t' and 'grid.r' or 'grid.points'")
    return [(t, r) for t in cfg.times for r in cfg.radii]


def cmd_kernel_eval(args) -> int:
    cfg = _load(args)
    rows = []
    for t, r in _radial_points(cfg):
        if math.isinf(t):
            raise ConfigError("kernel-eval needs finite times")
        v = eval_free(cfg.params, t, r)
        rows.append([t, r, v.value, v.est_error, v.method, cfg.config_hash])
    write_csv(_out_dir(args, cfg) / "kernel_eval.csv",
              ["t", "r", "p", "quad_error", "method", "config_hash"], rows)
    return EXIT_OK


def cmd_green_eval(args) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg)
    radii = list(cfg.radii) or [p.separation for p in cfg.points]
    if not radii:
        raise ConfigError("green-eval needs 'grid.r' or 'grid.points'")
    cfg.params.require_transient()
    rows = []
    for r in radii:
        if not r > 0:
            raise ConfigError("green-eval radii must be positive")
        v = eval_free_green(cfg.params, r)
        rows.append([r, v.value, v.est_error, cfg.config_hash])
    write_csv(out / "green_eval.csv", ["r", "G", "quad_error", "config_hash"], rows)
    if cfg.domain is not None and cfg.points:
        rows = []
        for k, p in enumerate(cfg.points):
            est = killed_green_occupation(cfg.params, cfg.domain, p.x, p.y, cfg.n_replicates,
                                          SeedSpec(cfg.seed, k), eps=cfg.eps,
                                          horizon_tol=cfg.horizon_tol, threads=args.threads)
            rows.append([*p.x, *p.y, est.value, est.std_error, est.n_replicates,
                         est.diagnostics["bias_bound"], cfg.config_hash])
        d = cfg.params.d
        write_csv(out / "killed_green.csv",
                  [f"x{i}" for i in range(d)] + [f"y{i}" for i in range(d)]
                  + ["G_D", "std_error", "n", "bias_bound", "config_hash"], rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    if cfg.domain is None:
        raise ConfigError("simulate needs a [domain] section")
    if not cfg.points:
        raise ConfigError("simulate needs start points ('grid.points' or 'grid.t' with 'grid.x')")
    out = _out_dir(args, cfg)
    d = cfg.params.d
    per_rep, summary = [], []
    status_name = {ss.ST_ALIVE: "alive", ss.ST_EXITED: "exited"}
    for k, p in enumerate(cfg.points):
        if math.isinf(p.t):
            raise ConfigError("simulate needs finite times")
        rows = simulate_exits(cfg.params, cfg.domain, p.x, p.t, cfg.n_replicates,
                              SeedSpec(cfg.seed, k), cfg.step_policy, args.threads)
        exited = rows[:, ss.C_STATUS] == ss.ST_EXITED
        for i, row in enumerate(rows):
            per_rep.append([k, i, status_name[int(row[ss.C_STATUS])], int(exited[i]),
                            row[ss.C_TPREV], row[ss.C_TEXIT], row[ss.C_EXITNORM],
                            row[ss.C_FINALNORM], int(row[ss.C_NSTEPS])])
        value, se = summarize((~exited).astype(float))
        summary.append([k, p.t, *p.x, value, se, cfg.n_replicates, cfg.config_hash])
    write_csv(out / "simulate.csv",
              ["point", "replicate", "status", "exited", "t_bracket_lo", "t_bracket_hi",
               "exit_norm", "final_norm", "n_steps"], per_rep)
    write_csv(out / "simulate_summary.csv",
              ["point", "t"] + [f"x{i}" for i in range(d)]
              + ["survival", "std_error", "n", "config_hash"], summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"relheat: unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}",
              file=sys.stderr)
        return EXIT_USAGE
    cfg = _load(args, required=False)
    out = _out_dir(args, cfg)
    opts = cfg.suite_options.get(args.suite, {})
    start = time.perf_counter()
    result = run_suite(args.suite, seed=cfg.seed, threads=args.threads, **opts)
    wall = time.perf_counter() - start
    report = result.to_dict()
    report.update({"config_hash": cfg.config_hash, "root_seed": cfg.seed, "options": opts})
    write_json(out / f"{args.suite}.json", report)
    for name, rows in result.tables.items():
        header, body = _table_rows(rows)
        write_csv(out / f"{args.suite}_{name}.csv", header, body)
    # wall time lives in a sidecar so the report itself stays byte-identical
    write_json(out / f"{args.suite}.timing.json", {"suite": args.suite, "wall_time_s": wall})
    for g in result.gates:
        print(f"{args.suite}: {g.name} = {fmt(g.value)} (threshold {fmt(g.threshold)}) "
              f"{'PASS' if g.passed else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_report_merge(args) -> int:
    paths = [Path(p) for p in args.reports]
    if not paths:
        base = Path(args.out or "relheat_out")
        paths = sorted(p for p in base.glob("*.json")
                       if not p.name.endswith(".timing.json") and p.name != "merged.json")
    if not paths:
        raise ConfigError("report-merge found no reports")
    merged, rows = [], []
    for p in paths:
        try:
            rep = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read report {p}: {exc}") from None
        if "suite" not in rep or "gates" not in rep:
            raise ConfigError(f"{p} is not a suite report")
        merged.append({"suite": rep["suite"], "pass": rep["pass"],
                       "config_hash": rep.get("config_hash"), "root_seed": rep.get("root_seed"),
                       "gates": rep["gates"], "fitted_constants": rep.get("fitted_constants", {})})
        for g in rep["gates"]:
            rows.append([rep["suite"], g["name"], g["value"], g["threshold"], g["pass"]])
    merged.sort(key=lambda r: r["suite"])
    rows.sort(key=lambda r: (r[0], r[1]))
    out = Path(args.out or "relheat_out")
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "merged.json", {"reports": merged,
                                     "pass": all(r["pass"] for r in merged)})
    write_csv(out / "merged.csv", ["suite", "gate", "value", "threshold", "pass"], rows)
    return EXIT_OK if all(r["pass"] for r in merged) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML experiment config")
    common.add_argument("--seed", type=int, help="root seed (overrides the config)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int,
                        help="worker threads (default: RELHEAT_THREADS or 1); never changes results")
    parser = argparse.ArgumentParser(prog="relheat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("kernel-eval", parents=[common], help="free heat kernel on a grid")
    sub.add_parser("green-eval", parents=[common], help="free (and killed) Green function")
    sub.add_parser("simulate", parents=[common], help="per-replicate exit statistics")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", help=", ".join(sorted(SUITES)))
    m = sub.add_parser("report-merge", parents=[common], help="merge suite reports")
    m.add_argument("reports", nargs="*", help="report files (default: all in --out)")
    return parser


_COMMANDS = {
    "kernel-eval": cmd_kernel_eval,
    "green-eval": cmd_green_eval,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "report-merge": cmd_report_merge,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if args.threads is not None and args.threads < 1:
        print("relheat: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"relheat: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, HorizonError, ArithmeticError) as exc:
        print(f"relheat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"relheat: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
