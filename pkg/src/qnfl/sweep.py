"""Parameter sweeps over (r, m, N) grids and their CSV artifacts.

Every trial draws from a stream keyed by the master seed, the grid point and
the trial indices, so results are independent of scheduling: a sweep run with
8 workers writes the byte-identical CSV a serial run writes.  Rows are
emitted in canonical order (grid point, then trial indices) and floats are
serialized at 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .learner import TrialConfig, TrialRecord, run_trial
from .rng import Rng

log = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "n", "d", "r", "m", "N", "ortho", "trial_u", "trial_d",
    "k_star", "k_hat", "error_indicator", "risk", "normalized_error", "seed_hash",
)
SUMMARY_COLUMNS = (
    "n", "d", "r", "m", "N", "ortho", "trials",
    "mean_risk", "stderr_risk", "mean_normalized_error", "stderr_normalized_error",
)

CANDIDATE_SHOT_MODES = ("same_as_m", "exact")


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep; the YAML config mirrors these fields."""

    n: int
    r_list: tuple[int, ...]
    m_list: tuple[int | float, ...]
    N_list: tuple[int, ...]
    ortho: bool = False
    trials_unitary: int = 4
    trials_data: int = 10
    candidate_shots_mode: str = "same_as_m"
    master_seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.candidate_shots_mode not in CANDIDATE_SHOT_MODES:
            raise ValueError(
                f"candidate_shots_mode {self.candidate_shots_mode!r} not in {CANDIDATE_SHOT_MODES}"
            )
        if self.trials_unitary < 1 or self.trials_data < 1:
            raise ValueError("trials_unitary and trials_data must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        if not self.r_list or not self.m_list or not self.N_list:
            raise ValueError("r_list, m_list and N_list must be non-empty")
        object.__setattr__(self, "r_list", tuple(int(r) for r in self.r_list))
        object.__setattr__(self, "N_list", tuple(int(N) for N in self.N_list))
        object.__setattr__(self, "m_list", tuple(_parse_m(m) for m in self.m_list))

    @property
    def d(self) -> int:
        return 2**self.n


def _parse_m(value) -> int | float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", ".inf"):
            return math.inf
        value = int(value)
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        if not value.is_integer():
            raise ValueError(f"m={value} must be a positive integer or inf")
        value = int(value)
    if not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"m={value!r} must be a positive integer or inf")
    return int(value)


def load_sweep_config(path: str | Path) -> SweepConfig:
    """Read a sweep description from a YAML file; unknown keys are an error."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a mapping at the top level")
    known = set(SweepConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return SweepConfig(**raw)


def sweep_grid(config: SweepConfig) -> list[tuple[int, int | float, int]]:
    """The (r, m, N) points a sweep visits, with invalid ortho points dropped."""
    points = []
    for r in config.r_list:
        for m in config.m_list:
            for N in config.N_list:
                if config.ortho and r * N > config.d:
                    log.warning(
                        "skipping grid point r=%d, m=%s, N=%d: orthogonal families need r*N <= d=%d",
                        r, m, N, config.d,
                    )
                    continue
                points.append((r, m, N))
    return points


def _m_label(m: int | float) -> str:
    return "inf" if math.isinf(m) else str(int(m))


def _point_records(config: SweepConfig, point: tuple[int, int | float, int]) -> list[TrialRecord]:
    r, m, N = point
    candidate_shots = math.inf if config.candidate_shots_mode == "exact" else None
    trial_config = TrialConfig(n=config.n, r=r, m=m, N=N, ortho=config.ortho, candidate_shots=candidate_shots)
    master = Rng(config.master_seed)
    records = []
    for tu in range(config.trials_unitary):
        target_rng = master.child("target", r, _m_label(m), N, config.ortho, tu)
        for td in range(config.trials_data):
            data_rng = master.child("trial", r, _m_label(m), N, config.ortho, tu, td)
            records.append(run_trial(trial_config, data_rng, target_rng=target_rng, trial_u=tu, trial_d=td))
    return records


def run_sweep(config: SweepConfig, jobs: int | None = None) -> list[TrialRecord]:
    """Run all trials of a sweep, in parallel when jobs > 1.

    The output is sorted canonically and does not depend on the worker count.
    """
    jobs = config.jobs if jobs is None else jobs
    if jobs < 1:
        raise ValueError("jobs must be positive")
    points = sweep_grid(config)
    if jobs == 1 or len(points) <= 1:
        chunks = [_point_records(config, p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(points))) as pool:
            chunks = list(pool.map(_point_records, [config] * len(points), points))
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda t: (t.r, t.m, t.N, t.trial_u, t.trial_d))
    return records


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def record_to_row(rec: TrialRecord) -> list[str]:
    return [
        str(rec.n), str(rec.d), str(rec.r), _m_label(rec.m), str(rec.N),
        "true" if rec.ortho else "false",
        str(rec.trial_u), str(rec.trial_d), str(rec.k_star), str(rec.k_hat),
        str(rec.error_indicator), _fmt_float(rec.risk), _fmt_float(rec.normalized_error),
        str(rec.seed_hash),
    ]


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for rec in records:
        writer.writerow(record_to_row(rec))
    return buf.getvalue()


def write_results_csv(records: list[TrialRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def _parse_results(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != RESULT_COLUMNS:
        missing = set(RESULT_COLUMNS) - set(header or ())
        raise ValueError(f"results CSV header mismatch; missing columns: {sorted(missing)}")
    rows = []
    for line in reader:
        if not line:
            continue
        row = dict(zip(RESULT_COLUMNS, line))
        rows.append(
            {
                "n": int(row["n"]),
                "d": int(row["d"]),
                "r": int(row["r"]),
                "m": math.inf if row["m"] == "inf" else int(row["m"]),
                "N": int(row["N"]),
                "ortho": row["ortho"] == "true",
                "risk": float(row["risk"]),
                "normalized_error": float(row["normalized_error"]),
            }
        )
    return rows


def aggregate_csv(results_text: str) -> str:
    """Aggregate a results CSV into the per-grid-point summary CSV.

    Groups rows by (n, d, r, m, N, ortho) and reports the count, mean and
    standard error of the risk and of the normalized error.  The standard
    error of fewer than two rows is 0, as is that of identical rows.
    """
    groups: dict[tuple, list[tuple[float, float]]] = {}
    for row in _parse_results(results_text):
        key = (row["n"], row["d"], row["r"], row["m"], row["N"], row["ortho"])
        groups.setdefault(key, []).append((row["risk"], row["normalized_error"]))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], k[3], k[4], k[5])):
        n, d, r, m, N, ortho = key
        risks = np.array([v[0] for v in groups[key]])
        norms = np.array([v[1] for v in groups[key]])
        k = risks.size
        se_risk = float(risks.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
        se_norm = float(norms.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
        writer.writerow(
            [
                str(n), str(d), str(r), _m_label(m), str(N),
                "true" if ortho else "false", str(k),
                _fmt_float(float(risks.mean())), _fmt_float(se_risk),
                _fmt_float(float(norms.mean())), _fmt_float(se_norm),
            ]
        )
    return buf.getvalue()


def aggregate_file(in_path: str | Path, out_path: str | Path) -> None:
    text = Path(in_path).read_text(encoding="utf-8")
    Path(out_path).write_text(aggregate_csv(text), encoding="utf-8")


def config_with_overrides(config: SweepConfig, *, master_seed: int | None = None, jobs: int | None = None) -> SweepConfig:
    if master_seed is not None:
        config = replace(config, master_seed=master_seed)
    if jobs is not None:
        config = replace(config, jobs=jobs)
    return config
