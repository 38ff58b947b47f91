"""Command-line front end.

    sobmorrey [--config FILE] COMMAND [--key value ...]

Every setting can come from a ``key = value`` file (``#`` starts a comment)
or from a ``--key`` flag; flags win. Each run writes a data table
(``<command>.csv`` or ``<command>.json``) and a ``<command>.report.json``
with the config echo and one boolean per check. Timings go to stderr only,
so repeated runs produce identical files.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad config, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import baselines, bumptrain, cex, experiments
from .maxops import ROutOfRange
from .paramlab import (Mode, ValidationError, admissible_range, scaling_exponent,
                       scaling_exponent_expanded, validate)
from .reporting import atomic_write, csv_text, fmt, json_text, read_csv

OUT_ENV = "SOBMORREY_OUT"
DEFAULT_OUT = "results"

COMMANDS = ("validate", "sigma", "verify-lemma1", "verify-sobolev", "verify-holder",
            "verify-maximal", "verify-poincare", "cex-norms", "cex-fit", "report")
PARAM_COMMANDS = {"validate", "sigma", "verify-lemma1", "verify-sobolev", "verify-holder",
                  "cex-norms", "cex-fit"}
VERIFY_COMMANDS = {"verify-lemma1", "verify-sobolev", "verify-holder"}

# per-command defaults for seeds, grids, n windows and r lists
_GRIDS = {
    "verify-lemma1": experiments.LEMMA1_GRID,
    "verify-sobolev": experiments.LEMMA1_GRID,
    "verify-holder": experiments.HOLDER_GRID,
    "verify-maximal": experiments.MAXIMAL_GRID,
    "verify-poincare": experiments.POINCARE_GRID,
}
_SEED_COUNTS = {"verify-holder": 100}
_N_DEFAULTS = {"sigma": (10, 14), "cex-norms": (30, 44), "cex-fit": (30, 44)}
_R_DEFAULT = ("2.5", "3", "4", "6")
_PILOT_PARAMS = ("2", "1.5", "2", "1.5")


class ConfigError(Exception):
    """Bad configuration; ``code`` is one of UnknownKey, MissingRequired,
    TypeMismatch or a parameter validation code."""

    def __init__(self, code: str, key: str, message: str):
        self.code, self.key = code, key
        super().__init__(f"{code}: {key}: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    d: Optional[str] = None
    p: Optional[str] = None
    q: Optional[str] = None
    q1: Optional[str] = None
    mode: str = "counterexample"
    n: Optional[Tuple[int, int]] = None
    r: Tuple[str, ...] = ()
    seed: int = experiments.DEFAULT_SEED
    seeds: int = 50
    cells: int = 0
    padding: int = 0
    out: str = DEFAULT_OUT
    format: str = "csv"

    def to_text(self) -> str:
        """Canonical ``key = value`` form; parsing it gives back this config."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or value == ():
                continue
            lines.append(f"{f.name} = {_show(f.name, value)}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> Dict[str, str]:
        return {f.name: _show(f.name, getattr(self, f.name)) for f in fields(self)
                if getattr(self, f.name) not in (None, ())}

    @property
    def stem(self) -> str:
        return self.command.replace("-", "_")

    @property
    def params(self):
        return self.d, self.p, self.q, self.q1

    def grid(self) -> experiments.GridSettings:
        return replace(_GRIDS[self.command], cells=self.cells, padding=self.padding)

    def seed_values(self) -> List[int]:
        return experiments.seed_list(self.seed, self.seeds)

    def r_fractions(self) -> List[Fraction]:
        return [Fraction(x) for x in self.r]


def _show(key, value) -> str:
    if key == "n":
        return f"{value[0]}:{value[1]}"
    if key == "r":
        return ",".join(value)
    return str(value)


KEYS = tuple(f.name for f in fields(RunConfig))


# ---------------------------------------------------------------------------
# parsing

def _int(key, text) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError("TypeMismatch", key, f"expected an integer, got {text!r}") from None


def _number(key, text) -> str:
    text = str(text).strip()
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError("TypeMismatch", key, f"expected a number, got {text!r}") from None
    return text


def _n_range(text) -> Tuple[int, int]:
    parts = str(text).split(":")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise ConfigError("TypeMismatch", "n", f"expected N or LO:HI, got {text!r}")
    lo, hi = _int("n", parts[0]), _int("n", parts[1])
    if lo > hi:
        raise ConfigError("TypeMismatch", "n", f"empty range {text!r}")
    return lo, hi


def _r_list(text) -> Tuple[str, ...]:
    items = tuple(x.strip() for x in str(text).split(",") if x.strip())
    if not items:
        raise ConfigError("TypeMismatch", "r", "empty list")
    return tuple(_number("r", x) for x in items)


def read_config_file(path) -> Dict[str, str]:
    entries = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("MissingRequired", "config", f"cannot read {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("TypeMismatch", f"line {lineno}", f"expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError("UnknownKey", key, f"not a config key (line {lineno})")
        entries[key] = value
    return entries


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        key = "argv"
        if "unrecognized arguments" in message:
            key = message.split(":", 1)[1].strip().split()[0].lstrip("-")
            raise ConfigError("UnknownKey", key, message)
        raise ConfigError("TypeMismatch", key, message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sobmorrey", description=__doc__.split("\n\n")[0],
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", help="key = value file; flags override its entries")
    ap.add_argument("--d", help="dimension (integer >= 2)")
    ap.add_argument("--p", help="gradient exponent, 1 < p < d")
    ap.add_argument("--q", help="Morrey exponent, 1 < q < p*")
    ap.add_argument("--q1", help="Morrey integrability exponent, 1 <= q1 <= q")
    ap.add_argument("--mode", help="counterexample or verification")
    ap.add_argument("--n", help="n window LO:HI (or a single n)")
    ap.add_argument("--r", help="comma-separated exponents, e.g. 2.5,3,4,6")
    ap.add_argument("--seed", help=f"first seed (default {experiments.DEFAULT_SEED})")
    ap.add_argument("--seeds", help="number of consecutive seeds")
    ap.add_argument("--cells", help="grid cells per axis")
    ap.add_argument("--padding", help="zero margin in cells")
    ap.add_argument("--out", help=f"output directory (default ${OUT_ENV} or {DEFAULT_OUT})")
    ap.add_argument("--format", help="csv or json for the data table")
    return ap


def parse_config(argv: Sequence[str], config_file=None) -> RunConfig:
    """Merge defaults, the config file and flags (in that order of precedence)."""
    ns = build_parser().parse_args(list(argv))
    raw: Dict[str, str] = {}
    path = config_file or ns.config
    if path:
        raw.update(read_config_file(path))
    for key in KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            raw[key] = value

    command = raw.get("command")
    if command is None:
        raise ConfigError("MissingRequired", "command", "no command given")
    if command not in COMMANDS:
        raise ConfigError("TypeMismatch", "command", f"unknown command {command!r}")

    kw = {"command": command}
    for key in ("d", "p", "q", "q1"):
        if key in raw:
            kw[key] = _number(key, raw[key])
        elif command in PARAM_COMMANDS:
            raise ConfigError("MissingRequired", key, f"{command} needs {key}")
    mode = raw.get("mode", "verification" if command in VERIFY_COMMANDS else "counterexample")
    if mode not in ("counterexample", "verification"):
        raise ConfigError("TypeMismatch", "mode", f"expected counterexample or verification, got {mode!r}")
    kw["mode"] = mode

    if "n" in raw:
        kw["n"] = _n_range(raw["n"])
    elif command in _N_DEFAULTS:
        kw["n"] = _N_DEFAULTS[command]
    if "r" in raw:
        kw["r"] = _r_list(raw["r"])
    elif command in ("validate", "sigma", "cex-norms", "cex-fit"):
        kw["r"] = _R_DEFAULT

    kw["seed"] = _int("seed", raw.get("seed", experiments.DEFAULT_SEED))
    kw["seeds"] = _int("seeds", raw.get("seeds", _SEED_COUNTS.get(command, 50)))
    grid = _GRIDS.get(command)
    kw["cells"] = _int("cells", raw.get("cells", grid.cells if grid else 0))
    kw["padding"] = _int("padding", raw.get("padding", grid.padding if grid else 0))
    if kw["seeds"] < 1:
        raise ConfigError("TypeMismatch", "seeds", "need at least one seed")
    kw["out"] = str(raw.get("out", os.environ.get(OUT_ENV, DEFAULT_OUT)))
    kw["format"] = raw.get("format", "csv")
    if kw["format"] not in ("csv", "json"):
        raise ConfigError("TypeMismatch", "format", f"expected csv or json, got {kw['format']!r}")

    cfg = RunConfig(**kw)
    if command in PARAM_COMMANDS:
        param_set(cfg)  # surface validation errors at parse time
    if command == "verify-holder" and cfg.r:
        ps = param_set(cfg)
        for r in cfg.r_fractions():
            if r not in admissible_range(ps):
                lo, hi = admissible_range(ps).as_floats()
                raise ConfigError("ROutOfRange", "r", f"r={r} outside [{lo}, {hi}]")
    return cfg


def param_set(cfg: RunConfig):
    try:
        return validate(*cfg.params, mode=Mode(cfg.mode))
    except ValidationError as exc:
        raise ConfigError(exc.codes[0], "params", str(exc)) from None


# ---------------------------------------------------------------------------
# running

@dataclass
class Check:
    name: str
    passed: bool
    value: float
    limit: float


@dataclass
class Table:
    columns: Tuple[str, ...]
    rows: list


@dataclass
class RunReport:
    config: RunConfig
    checks: List[Check] = field(default_factory=list)
    tables: Dict[str, Table] = field(default_factory=dict)
    values: Dict[str, object] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name, passed, value, limit):
        self.checks.append(Check(name, bool(passed), value, limit))

    def as_dict(self):
        # timings are left out on purpose: reports must be byte-stable
        return {
            "command": self.config.command,
            "config": self.config.as_dict(),
            "values": self.values,
            "checks": [{"name": c.name, "passed": c.passed, "value": c.value, "limit": c.limit}
                       for c in self.checks],
            "passed": self.passed,
            "tables": sorted(self.tables),
        }


def _max(rows, key):
    return max(float(r[key]) for r in rows)


def _finite(rows, keys):
    return all(math.isfinite(float(r[k])) for r in rows for k in keys)


def _scale_drift(rows):
    return max(abs(r["ratio_scaled"] / r["ratio"] - 1.0) for r in rows)


def _is_pilot(cfg: RunConfig, with_params: bool = True) -> bool:
    grid = _GRIDS[cfg.command]
    same = (cfg.seed == experiments.DEFAULT_SEED and cfg.seeds == 50
            and cfg.cells == grid.cells and cfg.padding == grid.padding)
    if with_params:
        ps, pilot = param_set(cfg), validate(*_PILOT_PARAMS, mode=Mode.VERIFICATION)
        same = same and (ps.d, ps.p, ps.q, ps.q1) == (pilot.d, pilot.p, pilot.q, pilot.q1)
    return same


def _baseline_check(rep, name, value, baseline):
    rep.check(name, baselines.within(value, baseline), value, baseline * (1 + baselines.TOLERANCE))


def run_validate(cfg, rep):
    ps = param_set(cfg)
    rep.values.update(ps.as_dict())
    lo, hi = admissible_range(ps).as_floats()
    rep.values.update({"admissible_low": lo, "admissible_high": hi})
    rows = []
    for r in cfg.r_fractions():
        exact = scaling_exponent(ps, r, exact=True)
        rows.append((float(r), exact, scaling_exponent_expanded(ps, float(r)),
                     "BlowUp" if exact > 0 else "Bounded"))
    rep.tables["validate"] = Table(("r", "e", "e_expanded", "verdict"), rows)
    drift = max(abs(float(e) - ex) for _, e, ex, _ in rows)
    rep.check("exponent_identity", drift <= 1e-12, drift, 1e-12)


def run_sigma(cfg, rep):
    ps = param_set(cfg)
    lo, hi = cfg.n
    sched, norms, worst = [], [], 0.0
    failures = bumptrain.check_schedule(bumptrain.make_schedule(ps.theta, lo), 60)
    for n in range(lo, hi + 1):
        train = bumptrain.make_train(ps.theta, n)
        sched.extend(bumptrain.schedule_rows(train.schedule))
        failures += bumptrain.check_schedule(train.schedule)
        for r in cfg.r_fractions():
            closed = bumptrain.sigma_lr_norm_closed(train, float(r))
            row = [float(ps.theta), n, float(r), closed, float("nan")]
            if n <= 14:
                quad = bumptrain.sigma_lr_norm_quadrature(train, float(r))
                row[4] = quad
                worst = max(worst, abs(quad / closed - 1.0))
            norms.append(tuple(row))
    rep.tables["sigma_schedule"] = Table(("theta", "n", "k", "gap", "count"), sched)
    rep.tables["sigma_norms"] = Table(("theta", "n", "r", "closed", "quadrature"), norms)
    rep.check("schedule_containment_and_gaps", not failures, float(len(failures)), 0.0)
    if any(n <= 14 for n in range(lo, hi + 1)):
        rep.check("closed_vs_quadrature", worst <= 1e-6, worst, 1e-6)


def run_lemma1(cfg, rep):
    ps = param_set(cfg)
    rows = experiments.run_lemma1(ps, cfg.seed_values(), cfg.grid())
    rep.tables["verify_lemma1"] = Table(
        ("seed", "lhs", "rhs_grad", "rhs_morrey", "ratio", "ratio_scaled"), rows)
    rep.check("ratio_finite", _finite(rows, ("ratio",)), _max(rows, "ratio"), math.inf)
    rep.check("amplitude_invariance", _scale_drift(rows) <= 1e-10, _scale_drift(rows), 1e-10)
    if _is_pilot(cfg):
        _baseline_check(rep, "baseline", _max(rows, "ratio"), baselines.LEMMA1_RATIO)


def run_sobolev(cfg, rep):
    ps = param_set(cfg)
    rows = experiments.run_sobolev(ps, cfg.seed_values(), cfg.grid())
    rep.tables["verify_sobolev"] = Table(("seed", "ratio", "ratio_scaled"), rows)
    rep.check("ratio_finite", _finite(rows, ("ratio",)), _max(rows, "ratio"), math.inf)
    rep.check("amplitude_invariance", _scale_drift(rows) <= 1e-10, _scale_drift(rows), 1e-10)
    if _is_pilot(cfg):
        _baseline_check(rep, "baseline", _max(rows, "ratio"), baselines.SOBOLEV_RATIO)


def run_holder(cfg, rep):
    ps = param_set(cfg)
    r_list = cfg.r_fractions() or experiments.holder_sample_points(ps)
    rows = experiments.run_holder(ps, cfg.seed_values(), r_list, cfg.grid())
    rep.tables["verify_holder"] = Table(("seed", "r", "lhs", "bound", "slack", "weight"), rows)
    worst = min(r["slack"] / r["bound"] for r in rows)
    rep.check("slack_nonnegative", worst >= -1e-12, worst, -1e-12)
    ends = {float(ps.r_low), float(ps.sobolev_exp)}
    end_rows = [r for r in rows if r["r"] in ends]
    if end_rows:
        top = max(abs(r["slack"]) for r in end_rows)
        rep.check("endpoint_slack_zero", top == 0.0, top, 0.0)


def run_maximal(cfg, rep):
    seeds = cfg.seed_values()
    rows = experiments.run_maximal(seeds, cfg.grid())
    kernel = experiments.run_kernel_checks(seeds)
    rep.tables["verify_maximal"] = Table(
        ("seed", "dominates", "sublinear_gap", "sharp_over_2hl", "r1", "r2", "r3", "r4"), rows)
    rep.tables["verify_maximal_kernels"] = Table(("seed", "hl_diff", "sharp_diff"), kernel)
    rep.check("hl_dominates", all(r["dominates"] for r in rows), 1.0, 1.0)
    plateau = experiments.constant_plateau_sharp()
    rep.check("sharp_of_constant_zero", plateau == 0.0, plateau, 0.0)
    gap = _max(rows, "sublinear_gap")
    rep.check("sublinear", gap <= 1e-12, gap, 1e-12)
    sharp = _max(rows, "sharp_over_2hl")
    rep.check("sharp_le_2hl", sharp <= 1e-12, sharp, 1e-12)
    diff = max(_max(kernel, "hl_diff"), _max(kernel, "sharp_diff"))
    rep.check("prefix_vs_bruteforce", diff <= 1e-13, diff, 1e-13)
    keys = ("r1", "r2", "r3", "r4")
    rep.check("fs_finite", _finite(rows, keys), max(_max(rows, k) for k in keys), math.inf)
    if _is_pilot(cfg, with_params=False):
        for k in keys:
            _baseline_check(rep, f"baseline_{k}", _max(rows, k), baselines.FS_RATIOS[k])


def run_poincare(cfg, rep):
    rows = experiments.run_poincare(cfg.seed_values(), cfg.grid())
    rep.tables["verify_poincare"] = Table(("seed", "coarse", "fine", "change"), rows)
    coarse, fine = _max(rows, "coarse"), _max(rows, "fine")
    rep.values.update({"max_coarse": coarse, "max_fine": fine})
    change = fine / coarse - 1.0
    rep.check("refinement_stable", abs(change) <= 0.10, change, 0.10)
    if _is_pilot(cfg, with_params=False):
        _baseline_check(rep, "baseline", coarse, baselines.POINCARE_RATIO)


def run_cex_norms(cfg, rep):
    ps = param_set(cfg)
    lo, hi = cfg.n
    ns = range(lo, hi + 1)
    fam = cex.normalize(cex.make_family(ps), ns)
    rep.values["normalization"] = fam.normalization
    rows, lr_rows = [], []
    for n in ns:
        m = cex.morrey_sup(fam, n)
        rows.append((n, cex.grad_lp_norm(fam, n), cex.log2_grad_lp_norm(fam, n),
                     m.sup, m.lower, m.t0, m.rho))
        for r in cfg.r_fractions():
            lr_rows.append((n, float(r), cex.lr_norm(fam, n, float(r)),
                            cex.log2_lr_norm(fam, n, float(r))))
    rep.tables["cex_norms"] = Table(
        ("n", "grad_lp", "log2_grad_lp", "morrey_sup", "morrey_lower", "morrey_t0", "morrey_rho"), rows)
    rep.tables["cex_norms_lr"] = Table(("n", "r", "lr_integral", "log2_lr_integral"), lr_rows)
    grad = max(r[1] for r in rows)
    rep.check("grad_le_1", grad <= 1.0, grad, 1.0)
    morrey = [r[3] for r in rows]
    rep.check("morrey_le_1", max(morrey) <= 1.0, max(morrey), 1.0)
    spread = max(morrey) / min(morrey)
    rep.check("morrey_spread", spread <= 4.0, spread, 4.0)
    late = [r[2] for r in rows if r[0] >= 30]
    if len(late) >= 2:
        inc = float(np.max(np.abs(np.diff(late))))
        rep.check("grad_log2_increments", inc <= 0.02, inc, 0.02)


def run_cex_fit(cfg, rep):
    ps = param_set(cfg)
    fam = cex.make_family(ps)
    try:
        report = cex.sharpness_report(fam, [float(r) for r in cfg.r_fractions()], cfg.n)
    except ValueError as exc:
        raise ConfigError("WindowTooShort", "n", str(exc)) from None
    rows = [(row.r, row.slope, row.predicted, row.slope - row.predicted, row.verdict, row.agrees)
            for row in report]
    rep.tables["cex_fit"] = Table(("r", "slope", "predicted", "error", "verdict", "agrees"), rows)
    rep.check("verdicts_agree", all(r[5] for r in rows), float(sum(r[5] for r in rows)), float(len(rows)))
    r_low = float(ps.r_low)
    for r, _, _, err, _, _ in rows:
        tol = 0.02 if r == r_low else 0.05
        rep.check(f"slope_r{fmt(r)}", abs(err) <= tol, err, tol)


def run_report(cfg, rep):
    out = Path(cfg.out)
    if not out.is_dir():
        raise OSError(f"output directory {out} does not exist")
    reports = {}
    for path in sorted(out.glob("*.report.json")):
        data = json.loads(path.read_text())
        reports[data["command"]] = data
    tables = {path.stem: read_csv(path) for path in sorted(out.glob("*.csv"))}
    rep.values["summary"] = {
        "reports": {cmd: {"passed": d["passed"], "checks": d["checks"], "config": d["config"]}
                    for cmd, d in reports.items()},
        "tables": tables,
    }
    for cmd, data in reports.items():
        rep.check(cmd, data["passed"], float(data["passed"]), 1.0)


RUNNERS = {
    "validate": run_validate,
    "sigma": run_sigma,
    "verify-lemma1": run_lemma1,
    "verify-sobolev": run_sobolev,
    "verify-holder": run_holder,
    "verify-maximal": run_maximal,
    "verify-poincare": run_poincare,
    "cex-norms": run_cex_norms,
    "cex-fit": run_cex_fit,
    "report": run_report,
}


def _table_text(cfg, table: Table) -> str:
    if cfg.format == "csv":
        return csv_text(table.columns, table.rows)
    rows = [dict(zip(table.columns, r)) if not isinstance(r, dict) else {c: r[c] for c in table.columns}
            for r in table.rows]
    return json_text({"columns": list(table.columns), "rows": rows})


def write_outputs(rep: RunReport) -> List[Path]:
    """Render everything first, then write each file atomically."""
    cfg = rep.config
    out = Path(cfg.out)
    ext = "csv" if cfg.format == "csv" else "json"
    texts = {out / f"{name}.{ext}": _table_text(cfg, t) for name, t in rep.tables.items()}
    if cfg.command == "report":
        summary = {"passed": rep.passed, **rep.values["summary"]}
        texts[out / "summary.json"] = json_text(summary)
    else:
        texts[out / f"{cfg.stem}.report.json"] = json_text(rep.as_dict())
    for path, text in texts.items():
        atomic_write(path, text)
    return list(texts)


def run(cfg: RunConfig) -> Tuple[RunReport, int]:
    rep = RunReport(cfg)
    t0 = time.perf_counter()
    RUNNERS[cfg.command](cfg, rep)
    rep.timings["compute"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    write_outputs(rep)
    rep.timings["write"] = time.perf_counter() - t1
    return rep, 0 if rep.passed else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
        rep, code = run(cfg)
    except ConfigError as exc:
        print(f"sobmorrey: {exc}", file=sys.stderr)
        return 2
    except (ROutOfRange, ValidationError) as exc:
        print(f"sobmorrey: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sobmorrey: IoError: {exc}", file=sys.stderr)
        return 3
    print(f"seed = {cfg.seed}", file=sys.stderr)
    for stage, seconds in rep.timings.items():
        print(f"time[{stage}] = {seconds:.3f}s", file=sys.stderr)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {cfg.command} {c.name} value={fmt(c.value)} limit={fmt(c.limit)}")
    return code


if __name__ == "__main__":
    sys.exit(main())
