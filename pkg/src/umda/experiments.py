"""Experiment harness: lambda sweeps, scaling studies, phase-transition probes.

Output files are semicolon-separated with a fixed column layout (lambda,
average evaluations, average lower-border hits, success fraction, average
generations); decimals carry 6 significant digits in fixed notation.  Runs
are dispatched to a worker pool, but per-run streams are derived from
(master seed, setting, run index) and aggregation folds results in run-index
order, so results never depend on scheduling.
"""

from __future__ import annotations

import ast
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .core import UmdaConfig, run


# ---------------------------------------------------------------------------
# number formatting / CSV layout


def format_decimal(x: float) -> str:
    """Fixed-notation decimal with 6 significant digits, e.g. 41000.0."""
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    s = f"{x:.6g}"
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    if "." not in s:
        s += ".0"
    return s


@dataclass(frozen=True)
class SweepRow:
    """Aggregated outcome for one lambda; averages cover successful runs."""

    lam: int
    avg_evaluations: float
    avg_lower_border_hits: float
    success_fraction: float
    avg_generations: float


CSV_COLUMNS = (
    "lambda",
    "avg_evaluations",
    "avg_lower_border_hits",
    "success_fraction",
    "avg_generations",
)


def emit_csv(rows, path: str, header: bool = False) -> None:
    """Write sweep rows as semicolon-separated lines, column 0 = lambda."""
    with open(path, "w", newline="\n") as fh:
        if header:
            fh.write(";".join(CSV_COLUMNS) + "\n")
        for row in rows:
            cells = [
                str(row.lam),
                format_decimal(row.avg_evaluations),
                format_decimal(row.avg_lower_border_hits),
                format_decimal(row.success_fraction),
                format_decimal(row.avg_generations),
            ]
            fh.write(";".join(cells) + "\n")


def parse_csv(path: str) -> list[SweepRow]:
    """Read back a sweep file produced by emit_csv."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith(CSV_COLUMNS[0]):
                continue
            cells = line.split(";")
            rows.append(
                SweepRow(
                    lam=int(cells[0]),
                    avg_evaluations=float(cells[1]),
                    avg_lower_border_hits=float(cells[2]),
                    success_fraction=float(cells[3]),
                    avg_generations=float(cells[4]),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# parameter rules (small arithmetic expressions over n / lam / mu)

_RULE_FUNCTIONS = {
    "sqrt": math.sqrt,
    "log": math.log,
    "log2": math.log2,
    "ceil": math.ceil,
    "floor": math.floor,
    "min": min,
    "max": max,
}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.FloorDiv, ast.Pow)


def evaluate_rule(expr: str, **variables: float) -> float:
    """Evaluate a parameter rule like ``"3*sqrt(n)*log(n)"`` or ``"lam/2"``.

    Only numeric literals, the given variables, sqrt/log/log2/ceil/floor/
    min/max, and the basic arithmetic operators are allowed.
    """

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id in variables:
                return variables[node.id]
            raise ValueError(f"unknown name {node.id!r} in rule {expr!r}")
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = ev(node.left), ev(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            if isinstance(op, ast.Div):
                return left / right
            if isinstance(op, ast.FloorDiv):
                return left // right
            return left**right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = ev(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = _RULE_FUNCTIONS.get(node.func.id)
            if fn is None or node.keywords:
                raise ValueError(f"unsupported call in rule {expr!r}")
            return fn(*[ev(a) for a in node.args])
        raise ValueError(f"unsupported syntax in rule {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse rule {expr!r}: {exc}") from exc
    return float(ev(tree))


def int_rule(expr: str, **variables: float) -> int:
    """Rule value as an integer: exact integers kept, fractions rounded up."""
    value = evaluate_rule(expr, **variables)
    nearest = round(value)
    if abs(value - nearest) < 1e-9:
        return int(nearest)
    return int(math.ceil(value))


def derive_stream(setting: int, run_index: int) -> int:
    """Stream id for (swept setting, run index): injective, order-stable.

    Adding settings to a sweep or appending runs never perturbs the streams
    of existing runs.
    """
    if not 0 <= run_index < 1 << 32:
        raise ValueError("run_index must fit in 32 bits")
    return (setting << 32) | run_index


# ---------------------------------------------------------------------------
# sweep


@dataclass
class SweepConfig:
    """A lambda sweep: for each lambda, runs_per_setting independent runs."""

    n: int
    lambda_values: tuple[int, int, int]  # (start, stop, step), stop inclusive
    mu_rule: str = "lam/2"
    borders: bool = True
    runs_per_setting: int = 100
    master_seed: int = 0
    max_generations: int | None = None
    output_path: str | None = None

    def __post_init__(self):
        start, stop, step = self.lambda_values
        if step < 1:
            raise ValueError(f"lambda step must be >= 1, got {step}")
        if start > stop:
            raise ValueError(f"empty lambda range {self.lambda_values}")
        if self.runs_per_setting < 1:
            raise ValueError("runs_per_setting must be >= 1")
        for lam in self.lambdas():
            mu = self.mu_for(lam)
            if not 1 <= mu < lam:
                raise ValueError(
                    f"mu rule {self.mu_rule!r} gives mu={mu} for lambda={lam}"
                )

    def lambdas(self) -> list[int]:
        start, stop, step = self.lambda_values
        return list(range(start, stop + 1, step))

    def mu_for(self, lam: int) -> int:
        return int_rule(self.mu_rule, lam=lam, n=self.n)


def _run_summary(cfg: UmdaConfig) -> tuple[str, int, int, int, int]:
    result = run(cfg)
    return (
        result.verdict,
        result.generations,
        result.evaluations,
        result.telemetry.total_lower_border_hits,
        result.telemetry.total_upper_border_hits,
    )


def _execute(configs: list[UmdaConfig], threads: int | None):
    threads = threads if threads is not None else (os.cpu_count() or 1)
    if threads <= 1 or len(configs) <= 1:
        return [_run_summary(cfg) for cfg in configs]
    chunk = max(1, len(configs) // (8 * threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_summary, configs, chunksize=chunk))


def _mean_over(values, mask) -> float:
    picked = [v for v, keep in zip(values, mask) if keep]
    return float(np.mean(picked)) if picked else float("nan")


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> list[SweepRow]:
    """Execute the sweep and aggregate one row per lambda.

    Runs that end without sampling the optimum (budget exhausted, or
    stagnated in borderless mode) are excluded from the averages and show up
    in success_fraction instead.
    """
    configs = []
    for lam in cfg.lambdas():
        mu = cfg.mu_for(lam)
        for k in range(cfg.runs_per_setting):
            configs.append(
                UmdaConfig(
                    n=cfg.n,
                    mu=mu,
                    lam=lam,
                    borders=cfg.borders,
                    max_generations=cfg.max_generations,
                    master_seed=cfg.master_seed,
                    run_index=derive_stream(lam, k),
                    record_telemetry=False,
                )
            )
    summaries = _execute(configs, threads)
    rows = []
    per = cfg.runs_per_setting
    for i, lam in enumerate(cfg.lambdas()):
        batch = summaries[i * per : (i + 1) * per]
        ok = [s[0] == "optimum_found" for s in batch]
        rows.append(
            SweepRow(
                lam=lam,
                avg_evaluations=_mean_over([s[2] for s in batch], ok),
                avg_lower_border_hits=_mean_over([s[3] for s in batch], ok),
                success_fraction=float(np.mean(ok)),
                avg_generations=_mean_over([s[1] for s in batch], ok),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# scaling study


@dataclass(frozen=True)
class ScalingRow:
    n: int
    mu: int
    lam: int
    runs: int
    success_fraction: float
    median_generations: float
    median_evaluations: float


@dataclass(frozen=True)
class ScalingResult:
    rows: list[ScalingRow]
    #: Least-squares slope of log(median generations) vs log(n); None when
    #: fewer than two problem sizes produced a finite median.
    slope_generations: float | None


def run_scaling_study(
    n_values,
    mu_rule: str,
    lambda_rule: str = "2*mu",
    runs: int = 50,
    master_seed: int = 0,
    borders: bool = True,
    max_generations: int | None = None,
    threads: int | None = None,
) -> ScalingResult:
    """Median generations per problem size plus a log-log slope fit."""
    n_values = list(n_values)
    if sorted(n_values) != n_values:
        raise ValueError("n_values must be monotone increasing")
    rows = []
    for n in n_values:
        mu = int_rule(mu_rule, n=n)
        lam = int_rule(lambda_rule, n=n, mu=mu)
        configs = [
            UmdaConfig(
                n=n,
                mu=mu,
                lam=lam,
                borders=borders,
                max_generations=max_generations,
                master_seed=master_seed,
                run_index=derive_stream(n, k),
                record_telemetry=False,
            )
            for k in range(runs)
        ]
        summaries = _execute(configs, threads)
        ok = [s[0] == "optimum_found" for s in summaries]
        gens = [s[1] for s, good in zip(summaries, ok) if good]
        evals = [s[2] for s, good in zip(summaries, ok) if good]
        rows.append(
            ScalingRow(
                n=n,
                mu=mu,
                lam=lam,
                runs=runs,
                success_fraction=float(np.mean(ok)),
                median_generations=float(np.median(gens)) if gens else float("nan"),
                median_evaluations=float(np.median(evals)) if evals else float("nan"),
            )
        )
    finite = [
        (row.n, row.median_generations)
        for row in rows
        if math.isfinite(row.median_generations)
    ]
    slope = None
    if len(finite) >= 2:
        xs = np.log([f[0] for f in finite])
        ys = np.log([f[1] for f in finite])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return ScalingResult(rows=rows, slope_generations=slope)


# ---------------------------------------------------------------------------
# phase-transition probe (borderless variant)


@dataclass(frozen=True)
class PhaseOutcome:
    mu: int
    lam: int
    runs: int
    stagnated_fraction: float
    success_fraction: float
    budget_fraction: float


def _probe_one(
    n: int,
    mu: int,
    runs: int,
    master_seed: int,
    max_generations: int | None,
    threads: int | None,
    lambda_rule: str,
) -> PhaseOutcome:
    lam = int_rule(lambda_rule, n=n, mu=mu)
    configs = [
        UmdaConfig(
            n=n,
            mu=mu,
            lam=lam,
            borders=False,
            max_generations=max_generations,
            master_seed=master_seed,
            run_index=derive_stream(mu, k),
            record_telemetry=False,
        )
        for k in range(runs)
    ]
    summaries = _execute(configs, threads)
    verdicts = [s[0] for s in summaries]
    return PhaseOutcome(
        mu=mu,
        lam=lam,
        runs=runs,
        stagnated_fraction=verdicts.count("stagnated") / runs,
        success_fraction=verdicts.count("optimum_found") / runs,
        budget_fraction=verdicts.count("budget_exhausted") / runs,
    )


def run_phase_transition_probe(
    n: int,
    mu_small: int,
    mu_large: int,
    runs: int = 100,
    master_seed: int = 0,
    max_generations: int | None = None,
    threads: int | None = None,
    lambda_rule: str = "2*mu",
) -> tuple[PhaseOutcome, PhaseOutcome]:
    """Borderless-run verdict fractions at a small and a large parent count.

    Below the phase transition nearly every run stagnates with a frequency
    stuck at the wrong absorbing value; above it, most runs find the optimum.
    """
    if not mu_small < mu_large:
        raise ValueError("need mu_small < mu_large")
    args = (runs, master_seed, max_generations, threads, lambda_rule)
    return _probe_one(n, mu_small, *args), _probe_one(n, mu_large, *args)


# ---------------------------------------------------------------------------
# curve diagnostics


def moving_average(values, window: int = 5) -> np.ndarray:
    """Centered moving average; output is len(values) - window + 1 long."""
    values = np.asarray(values, dtype=np.float64)
    if window < 1 or window > values.size:
        raise ValueError(f"window {window} invalid for {values.size} points")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(values, kernel, mode="valid")


def has_interior_min_then_max(values) -> bool:
    """True when a strict interior local minimum precedes a strict interior
    local maximum, the multimodality signature of the runtime-vs-lambda curve.
    """
    y = np.asarray(values, dtype=np.float64)
    first_min = None
    for i in range(1, y.size - 1):
        if first_min is None and y[i] < y[i - 1] and y[i] < y[i + 1]:
            first_min = i
        elif first_min is not None and y[i] > y[i - 1] and y[i] > y[i + 1]:
            return True
    return False


# ---------------------------------------------------------------------------
# config files (one `key = value` per line)


def parse_config_file(path: str) -> dict[str, str]:
    mapping = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`")
            key, value = line.split("=", 1)
            mapping[key.strip()] = value.strip()
    return mapping


def _parse_lambda_values(text: str) -> tuple[int, int, int]:
    parts = text.replace(",", ":").split(":")
    if len(parts) != 3:
        raise ValueError(f"lambda_values must be start:stop:step, got {text!r}")
    start, stop, step = (int(p) for p in parts)
    return start, stop, step


def _parse_borders(text: str) -> bool:
    value = text.strip().lower()
    if value in ("restricted", "true", "on", "1"):
        return True
    if value in ("unrestricted", "false", "off", "0"):
        return False
    raise ValueError(f"borders must be restricted or unrestricted, got {text!r}")


def sweep_config_from_mapping(mapping: dict[str, str]) -> SweepConfig:
    """Build a SweepConfig from config-file keys (all values are strings)."""
    known = {
        "n",
        "lambda_values",
        "mu_rule",
        "borders",
        "runs_per_setting",
        "master_seed",
        "max_generations",
        "output_path",
    }
    unknown = set(mapping) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "n" not in mapping or "lambda_values" not in mapping:
        raise ValueError("config requires at least `n` and `lambda_values`")
    kwargs: dict = {
        "n": int(mapping["n"]),
        "lambda_values": _parse_lambda_values(mapping["lambda_values"]),
    }
    if "mu_rule" in mapping:
        kwargs["mu_rule"] = mapping["mu_rule"]
    if "borders" in mapping:
        kwargs["borders"] = _parse_borders(mapping["borders"])
    if "runs_per_setting" in mapping:
        kwargs["runs_per_setting"] = int(mapping["runs_per_setting"])
    if "master_seed" in mapping:
        kwargs["master_seed"] = int(mapping["master_seed"])
    if "max_generations" in mapping and mapping["max_generations"]:
        kwargs["max_generations"] = int(mapping["max_generations"])
    if "output_path" in mapping:
        kwargs["output_path"] = mapping["output_path"]
    return SweepConfig(**kwargs)
