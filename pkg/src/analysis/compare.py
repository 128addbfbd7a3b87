"""
Paired policy comparisons, replicate experiments and output files.

Every policy in a comparison runs on the same seed, so capacities and the
job stream are identical across policies and differences in the traces come
from scheduling alone.
"""

import hashlib
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import yaml
from pydantic import BaseModel
from scipy import stats

from src.analysis.metrics import RunSummary, TraceRecord, crossover_step
from src.schemas.config import ExperimentConfig, ScenarioConfig
from src.simulation.engine import RunResult, run
from src.utils.constants import (
    CONFIG_ECHO_FILE,
    CSV_FLOAT_FORMAT,
    DESK_PRESETS,
    MANIFEST_FILE,
    POLICY_CLDS,
    POLICY_DMMS,
    POLICY_LLS,
    POLICY_RS,
    PRESET_ORIGIN_DESK,
    PRESET_ORIGIN_REFERENCE,
    REPLICATES_FILE,
    SUMMARY_FILE,
    TRACE_COLUMNS,
)

logger = logging.getLogger(__name__)

# RS is expected to stay at least this many times above CLDS under heavy load
RS_OVER_CLDS_FACTOR = 3.0


class PairCrossover(BaseModel):
    """Crossover of policy A below policy B."""

    a: str
    b: str
    window: int
    step: Optional[int] = None


class ReplicateStats(BaseModel):
    """Late-window mean ALoR of one policy across seeds."""

    policy: str
    replicates: int
    mean: float
    stderr: float


class OrderingCounts(BaseModel):
    """How many replicates show each expected ordering (None when a policy is missing)."""

    replicates: int
    lls_le_clds_le_dmms: Optional[int] = None
    rs_ge_3x_clds: Optional[int] = None
    clds_dmms_crossover: Optional[int] = None


class ComparisonReport(BaseModel):
    """Structured report written as summary.json."""

    config: Dict[str, Any]
    origin: Optional[str] = None
    summaries: Dict[str, RunSummary]
    crossovers: List[PairCrossover] = []
    replicate_stats: List[ReplicateStats] = []
    ordering: Optional[OrderingCounts] = None


@dataclass
class ComparisonResult:
    """Traces of the primary seed, the report and the optional replicate table."""

    config: ExperimentConfig
    traces: Dict[str, List[TraceRecord]]
    report: ComparisonReport
    replicates: Optional[pd.DataFrame] = None


def preset_origin(preset: Optional[str]) -> Optional[str]:
    """Label a preset as a reference experiment or a desk-scale addition."""
    if preset is None:
        return None
    return PRESET_ORIGIN_DESK if preset in DESK_PRESETS else PRESET_ORIGIN_REFERENCE


def _run_all(scenarios: Sequence[ScenarioConfig], workers: int) -> List[RunResult]:
    if workers <= 1 or len(scenarios) <= 1:
        return [run(scenario) for scenario in scenarios]
    # map() keeps input order, so parallel output matches sequential output
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, scenarios))


def pairwise_crossovers(traces: Dict[str, List[TraceRecord]], window: int) -> List[PairCrossover]:
    """Crossover steps for every ordered pair of distinct policies."""
    return [
        PairCrossover(a=a, b=b, window=window, step=crossover_step(traces[a], traces[b], window))
        for a, b in permutations(traces, 2)
    ]


def run_compare(
    config: ExperimentConfig,
    policies: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> ComparisonResult:
    """
    Run a scenario under several policies with paired seeds.

    With config.replicates = K > 1 the comparison is repeated on seeds
    seed .. seed+K-1; traces and crossovers in the result belong to the
    first seed, and the replicate table holds the late-window mean ALoR of
    every (seed, policy) pair.

    Args:
        config: Experiment configuration
        policies: Policies to compare; defaults to config.policies
        workers: Processes for the per-policy runs (1 runs sequentially)

    Returns:
        ComparisonResult with per-policy traces and the comparison report
    """
    policies = [p.upper() for p in (policies or config.policies)]
    seeds = [config.seed + k for k in range(config.replicates)]
    scenarios = [config.scenario(policy, seed=seed) for seed in seeds for policy in policies]
    logger.info(
        "Comparing %s over %d seed(s) with %d worker(s)", ", ".join(policies), len(seeds), workers
    )
    results = _run_all(scenarios, workers)

    by_seed: Dict[int, Dict[str, RunResult]] = {}
    for scenario, result in zip(scenarios, results):
        by_seed.setdefault(scenario.seed, {})[scenario.policy] = result

    primary = by_seed[config.seed]
    traces = {policy: primary[policy].trace for policy in policies}
    report = ComparisonReport(
        config=config.to_echo(),
        origin=preset_origin(config.preset),
        summaries={policy: primary[policy].summary for policy in policies},
        crossovers=pairwise_crossovers(traces, config.window),
    )

    table = None
    if config.replicates > 1:
        table = replicate_table(by_seed, policies)
        report.replicate_stats = replicate_stats(table)
        report.ordering = ordering_counts(by_seed, config.window)
    return ComparisonResult(config=config, traces=traces, report=report, replicates=table)


def replicate_table(by_seed: Dict[int, Dict[str, RunResult]], policies: Sequence[str]) -> pd.DataFrame:
    """One row per seed, one column per policy: late-window mean ALoR."""
    rows = []
    for seed, runs in by_seed.items():
        row: Dict[str, Any] = {"seed": seed}
        for policy in policies:
            row[policy] = runs[policy].summary.late_mean_alor
        rows.append(row)
    return pd.DataFrame(rows, columns=["seed", *policies])


def replicate_stats(table: pd.DataFrame) -> List[ReplicateStats]:
    """Mean and standard error of each policy column."""
    result = []
    for policy in table.columns.drop("seed"):
        values = table[policy].to_numpy(dtype=float)
        result.append(
            ReplicateStats(
                policy=policy,
                replicates=len(values),
                mean=float(values.mean()),
                stderr=float(stats.sem(values)) if len(values) > 1 else 0.0,
            )
        )
    return result


def ordering_counts(by_seed: Dict[int, Dict[str, RunResult]], window: int) -> OrderingCounts:
    """
    Count replicates showing LLS <= CLDS <= DMMS, RS >= 3x CLDS and a CLDS/DMMS crossover.

    Each count is None when one of its policies was not run.
    """
    counts = OrderingCounts(replicates=len(by_seed))
    policies = set(next(iter(by_seed.values())))

    def late(runs: Dict[str, RunResult], policy: str) -> float:
        return runs[policy].summary.late_mean_alor

    if {POLICY_LLS, POLICY_CLDS, POLICY_DMMS} <= policies:
        counts.lls_le_clds_le_dmms = sum(
            late(runs, POLICY_LLS) <= late(runs, POLICY_CLDS) <= late(runs, POLICY_DMMS)
            for runs in by_seed.values()
        )
    if {POLICY_RS, POLICY_CLDS} <= policies:
        counts.rs_ge_3x_clds = sum(
            late(runs, POLICY_RS) >= RS_OVER_CLDS_FACTOR * late(runs, POLICY_CLDS)
            for runs in by_seed.values()
        )
    if {POLICY_CLDS, POLICY_DMMS} <= policies:
        counts.clds_dmms_crossover = sum(
            crossover_step(runs[POLICY_CLDS].trace, runs[POLICY_DMMS].trace, window) is not None
            for runs in by_seed.values()
        )
    return counts


def trace_frame(trace: Sequence[TraceRecord]) -> pd.DataFrame:
    """Trace as a DataFrame with the fixed CSV columns."""
    frame = pd.DataFrame([record.to_dict() for record in trace], columns=TRACE_COLUMNS + ["policy"])
    return frame[TRACE_COLUMNS]


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def emit_outputs(result: ComparisonResult, out_dir: Path) -> List[Path]:
    """
    Write traces, summary, resolved config and manifest.

    Files: one <POLICY>.csv per policy, summary.json, config.yaml,
    replicates.csv when replicates were run, and MANIFEST.sha256 listing
    every other file with its SHA-256 hash.

    Args:
        result: Comparison result
        out_dir: Output directory (created if missing)

    Returns:
        Paths written, manifest last

    Raises:
        OSError: If a file cannot be written; the message names the path
    """
    out_dir = Path(out_dir)
    written: List[Path] = []
    path = out_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)

        for policy, trace in result.traces.items():
            path = out_dir / f"{policy}.csv"
            trace_frame(trace).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
            written.append(path)

        if result.replicates is not None:
            path = out_dir / REPLICATES_FILE
            result.replicates.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
            written.append(path)

        path = out_dir / SUMMARY_FILE
        path.write_text(result.report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        written.append(path)

        path = out_dir / CONFIG_ECHO_FILE
        path.write_text(dump_config(result.config), encoding="utf-8")
        written.append(path)

        path = out_dir / MANIFEST_FILE
        lines = [f"{_sha256(p)}  {p.name}\n" for p in written]
        path.write_text("".join(lines), encoding="utf-8")
        written.append(path)
    except OSError as e:
        raise OSError(f"Failed to write {path}: {e.strerror or e}") from e

    logger.info("Wrote %d files to %s", len(written), out_dir)
    return written


def dump_config(config: ExperimentConfig) -> str:
    """Resolved configuration as YAML, loadable again with --config."""
    return yaml.safe_dump(config.to_echo(), sort_keys=False)
