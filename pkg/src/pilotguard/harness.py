"""Deterministic Monte Carlo experiment runner.

An :class:`ExperimentSpec` names an experiment kind, a base scenario, one
swept parameter, and the trial budget.  The runner executes every sweep
point end to end (sample channels, synthesize training, estimate, detect,
beamform, measure), attaches closed-form companion values where the theory
module provides them, and emits rows suitable for a delimited report.

Reproducibility contract: all randomness derives from ``master_seed``.
Trials are executed in fixed-size blocks; each block consumes its own
substream addressed by ``(master_seed, sweep index, block index)``, and the
block grid is fixed by the experiment description alone, so results are
bit-identical across reruns and across worker counts.  Substream addresses
are collected and checked for uniqueness on every run.

Experiment kinds
----------------
* ``snr_curves``     — single-training-phase link: average legitimate and
                       attacker SNRs under MRT on the (possibly spoofed)
                       pilot estimate, with closed-form companions.
* ``roc``            — spoofing detector operating points: empirical
                       false-alarm and detection rates at the calibrated
                       threshold for each false-alarm target, from one pool
                       of no-attack statistics and one pool of attack
                       statistics.
* ``pd_vs_n``        — detection rate versus training length (``n_train``
                       sweeps both phase lengths together).
* ``pd_vs_m``        — detection rate versus antenna count.
* ``pd_vs_pe``       — detection rate versus spoofing power.
* ``mse_vs_n``       — normalized channel-estimation error of the pilot-only
                       estimate, the all-bits-known benchmark, and the
                       enhanced two-phase estimate.
* ``secrecy_vs_pa``  — ergodic secrecy rates of MRT and of ZF/GED secure
                       beamformers with true and with estimated channels.
* ``theory_table``   — closed-form average-SNR values only (no trials).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .beamforming import (
    DegenerateGeometryError,
    ged_beamformer,
    instantaneous_snr,
    mrt_beamformer,
    secrecy_rate,
    zf_beamformer,
)
from .channel import sample_channels
from .detector import (
    PIPELINES,
    DetectorConfig,
    calibrate_threshold,
    estimate_pair,
    test_statistic,
    theoretical_pd,
)
from .estimation import cee_estimate, ls_estimate, normalized_mse
from .numerics import substream
from .theory import (
    TheoryPoint,
    avg_snr_bob_no_spoof,
    avg_snr_bob_spoofed,
    avg_snr_eve_spoofed,
)
from .training import Scenario, make_pilot_bits, synthesize, synthesize_pilot_phase

__all__ = [
    "KINDS",
    "DETECTOR_KINDS",
    "SWEEP_PARAMS",
    "TRIAL_CHUNK",
    "ExperimentSpec",
    "ResultRow",
    "scenario_with",
    "run_experiment",
    "write_csv",
    "run_and_write",
]

KINDS = (
    "snr_curves",
    "roc",
    "pd_vs_n",
    "pd_vs_m",
    "pd_vs_pe",
    "mse_vs_n",
    "secrecy_vs_pa",
    "theory_table",
)
DETECTOR_KINDS = frozenset({"roc", "pd_vs_n", "pd_vs_m", "pd_vs_pe"})
SWEEP_PARAMS = (
    "m_antennas",
    "n_pilot",
    "n_random",
    "n_train",
    "p_b",
    "p_e",
    "p_er",
    "p_a",
)

# Trials per execution block.  The block grid is part of the reproducibility
# contract (it addresses substreams), so this is a fixed constant rather
# than a tuning knob.
TRIAL_CHUNK = 2048

# Substream address tags (first path component).
_TAG_TRIALS = 0
_TAG_PILOT = 1


@dataclass(frozen=True)
class ExperimentSpec:
    """A complete, runnable experiment description."""

    kind: str
    base: Scenario
    sweep_param: str
    sweep_values: Tuple[float, ...]
    trials: int = 100_000
    master_seed: int = 0
    pfa_targets: Tuple[float, ...] = ()
    output_path: Optional[str] = None
    pipeline: str = "realistic"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(
                f"unknown sweep parameter {self.sweep_param!r}; "
                f"expected one of {SWEEP_PARAMS}"
            )
        values = tuple(float(v) for v in self.sweep_values)
        if not values:
            raise ValueError("sweep_values must be nonempty")
        object.__setattr__(self, "sweep_values", values)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        targets = tuple(float(t) for t in self.pfa_targets)
        for target in targets:
            if not (0.0 < target < 1.0):
                raise ValueError(f"pfa target must lie in (0, 1), got {target}")
        object.__setattr__(self, "pfa_targets", targets)
        if self.kind in DETECTOR_KINDS and not targets:
            raise ValueError(f"kind {self.kind!r} requires nonempty pfa_targets")
        if self.pipeline not in PIPELINES:
            raise ValueError(
                f"pipeline must be one of {PIPELINES}, got {self.pipeline!r}"
            )
        # Fail fast if any sweep point yields an invalid scenario.
        for value in values:
            scenario_with(self.base, self.sweep_param, value)


@dataclass(frozen=True)
class ResultRow:
    """One aggregated measurement: a metric at one sweep value, with its
    Monte Carlo standard error and, when available, the closed-form value."""

    sweep_value: float
    metric: str
    empirical: float
    theoretical: Optional[float]
    trials: int
    stderr: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.empirical):
            raise ValueError(f"empirical value must be finite, got {self.empirical}")
        if self.stderr < 0.0:
            raise ValueError(f"stderr must be >= 0, got {self.stderr}")


def scenario_with(base: Scenario, param: str, value: float) -> Scenario:
    """Return ``base`` with one swept parameter replaced.

    ``n_train`` sets ``n_pilot`` and ``n_random`` together; ``m_antennas``
    rebuilds the channel model; other parameters replace directly.
    """
    if param == "m_antennas":
        return replace(base, model=replace(base.model, m_antennas=int(value)))
    if param == "n_train":
        return replace(base, n_pilot=int(value), n_random=int(value))
    if param in ("n_pilot", "n_random"):
        return replace(base, **{param: int(value)})
    if param in ("p_b", "p_e", "p_er", "p_a"):
        return replace(base, **{param: float(value)})
    raise ValueError(f"unknown sweep parameter {param!r}")


def _is_attacked(scenario: Scenario) -> bool:
    """True when the scenario deviates from the no-attack null in any phase."""
    random_phase = (
        scenario.random_phase_attack != "none" and scenario.p_er > 0.0
    )
    return scenario.p_e > 0.0 or random_phase


def _null_scenario(scenario: Scenario) -> Scenario:
    return replace(scenario, p_e=0.0, p_er=0.0, random_phase_attack="none")


def _chunk_grid(trials: int) -> List[Tuple[int, int]]:
    """Fixed (block index, block size) decomposition of the trial budget."""
    grid = []
    start = 0
    index = 0
    while start < trials:
        count = min(TRIAL_CHUNK, trials - start)
        grid.append((index, count))
        start += count
        index += 1
    return grid


# ---------------------------------------------------------------------------
# Per-block simulation kernels.  Each runs `count` full trials vectorized
# over a leading batch axis, consuming exactly one substream, and returns a
# dict of per-trial measurement arrays.  They are module-level functions so
# a process pool can ship them to workers.
# ---------------------------------------------------------------------------


def _block_snr(
    scenario: Scenario,
    pilot_bits: np.ndarray,
    master_seed: int,
    sweep_idx: int,
    block_idx: int,
    count: int,
    pipeline: str,
) -> Dict[str, np.ndarray]:
    stream = substream(master_seed, _TAG_TRIALS, sweep_idx, block_idx)
    realization = sample_channels(scenario.model, stream, size=count)
    y_p, b_p = synthesize_pilot_phase(scenario, realization, stream, pilot_bits)
    h_hat = ls_estimate(y_p, b_p)
    norms = np.linalg.norm(h_hat, axis=-1, keepdims=True)
    w = h_hat / norms
    gain_b = np.abs(np.einsum("...m,...m->...", np.conj(realization.h_b), w)) ** 2
    gain_e = np.abs(np.einsum("...m,...m->...", np.conj(realization.h_e), w)) ** 2
    return {
        "snr_bob": scenario.p_a * gain_b / scenario.sigma2_b,
        "snr_eve": scenario.p_a * gain_e / scenario.sigma2_e,
    }


def _detector_statistics(
    scenario: Scenario,
    pilot_bits: np.ndarray,
    stream: np.random.Generator,
    count: int,
    pipeline: str,
) -> np.ndarray:
    realization = sample_channels(scenario.model, stream, size=count)
    obs = synthesize(scenario, realization, stream, pilot_bits)
    h_bp, h_br, _, _ = estimate_pair(obs, pipeline=pipeline)
    return np.asarray(test_statistic(h_bp, h_br))


def _block_detector(
    scenario: Scenario,
    pilot_bits: np.ndarray,
    master_seed: int,
    sweep_idx: int,
    block_idx: int,
    count: int,
    pipeline: str,
    include_null: bool,
) -> Dict[str, np.ndarray]:
    stream = substream(master_seed, _TAG_TRIALS, sweep_idx, block_idx)
    out = {
        "t1": _detector_statistics(scenario, pilot_bits, stream, count, pipeline)
    }
    if include_null:
        out["t0"] = _detector_statistics(
            _null_scenario(scenario), pilot_bits, stream, count, pipeline
        )
    return out


def _block_mse(
    scenario: Scenario,
    pilot_bits: np.ndarray,
    master_seed: int,
    sweep_idx: int,
    block_idx: int,
    count: int,
    pipeline: str,
) -> Dict[str, np.ndarray]:
    stream = substream(master_seed, _TAG_TRIALS, sweep_idx, block_idx)
    realization = sample_channels(scenario.model, stream, size=count)
    obs = synthesize(scenario, realization, stream, pilot_bits)
    h_pilot = ls_estimate(obs.y_p, obs.b_p)
    # Benchmark: every transmitted bit known in advance (both phases pilot).
    y_all = np.concatenate([obs.y_p, obs.y_r], axis=-1)
    b_all = np.concatenate(
        [np.broadcast_to(obs.b_p, obs.b_r.shape[:-1] + obs.b_p.shape[-1:]), obs.b_r],
        axis=-1,
    )
    h_known = ls_estimate(y_all, b_all)
    h_enhanced, _ = cee_estimate(h_pilot, obs.y_p, obs.y_r, obs.b_p)
    truth = realization.h_b
    return {
        "mse_pilot_only": np.asarray(normalized_mse(truth, h_pilot)),
        "mse_known_bits": np.asarray(normalized_mse(truth, h_known)),
        "mse_enhanced": np.asarray(normalized_mse(truth, h_enhanced)),
    }


def _secrecy_of(
    h_b: np.ndarray,
    h_e: np.ndarray,
    w: np.ndarray,
    p_a: float,
    sigma2_b: float,
    sigma2_e: float,
) -> float:
    return secrecy_rate(
        instantaneous_snr(h_b, w, p_a, sigma2_b),
        instantaneous_snr(h_e, w, p_a, sigma2_e),
    )


def _block_secrecy(
    scenario: Scenario,
    pilot_bits: np.ndarray,
    master_seed: int,
    sweep_idx: int,
    block_idx: int,
    count: int,
    pipeline: str,
) -> Dict[str, np.ndarray]:
    stream = substream(master_seed, _TAG_TRIALS, sweep_idx, block_idx)
    realization = sample_channels(scenario.model, stream, size=count)
    obs = synthesize(scenario, realization, stream, pilot_bits)
    h_bp, h_br, _, _ = estimate_pair(obs, pipeline=pipeline)
    h_e_hat = h_bp - h_br

    phi = scenario.p_a / scenario.sigma2_b
    psi = scenario.p_a / scenario.sigma2_e
    names = (
        "secrecy_mrt",
        "secrecy_zf_true",
        "secrecy_zf_est",
        "secrecy_ged_true",
        "secrecy_ged_est",
    )
    rates = {name: np.empty(count) for name in names}
    for i in range(count):
        h_b = realization.h_b[i]
        h_e = realization.h_e[i]

        # Undefended baseline: beam straight along the (spoofed) pilot
        # estimate, handing the attacker her captured array gain.
        w_mrt = mrt_beamformer(h_bp[i])
        rates["secrecy_mrt"][i] = _secrecy_of(
            h_b, h_e, w_mrt, scenario.p_a, scenario.sigma2_b, scenario.sigma2_e
        )

        for name, args in (
            ("secrecy_zf_true", (h_b, h_e)),
            ("secrecy_zf_est", (h_br[i], h_e_hat[i])),
        ):
            try:
                w = zf_beamformer(*args)
            except DegenerateGeometryError:
                # Parallel estimates: transmission is abandoned this trial.
                rates[name][i] = 0.0
                continue
            rates[name][i] = _secrecy_of(
                h_b, h_e, w, scenario.p_a, scenario.sigma2_b, scenario.sigma2_e
            )

        for name, args in (
            ("secrecy_ged_true", (h_b, h_e)),
            ("secrecy_ged_est", (h_br[i], h_e_hat[i])),
        ):
            w = ged_beamformer(*args, phi, psi)
            rates[name][i] = _secrecy_of(
                h_b, h_e, w, scenario.p_a, scenario.sigma2_b, scenario.sigma2_e
            )
    return rates


_BLOCK_RUNNERS = {
    "snr_curves": _block_snr,
    "mse_vs_n": _block_mse,
    "secrecy_vs_pa": _block_secrecy,
}


def _run_block(payload: Tuple) -> Dict[str, np.ndarray]:
    """Process-pool entry point: run one block from its pickled payload."""
    kind, scenario, pilot_bits, master_seed, sweep_idx, block_idx, count, pipeline, extra = payload
    if kind in DETECTOR_KINDS:
        return _block_detector(
            scenario,
            pilot_bits,
            master_seed,
            sweep_idx,
            block_idx,
            count,
            pipeline,
            include_null=extra,
        )
    return _BLOCK_RUNNERS[kind](
        scenario, pilot_bits, master_seed, sweep_idx, block_idx, count, pipeline
    )


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


def _rate_row(
    sweep_value: float,
    metric: str,
    pool: np.ndarray,
    threshold: float,
    theoretical: Optional[float],
) -> ResultRow:
    n = pool.shape[0]
    rate = float(np.count_nonzero(pool > threshold)) / n
    stderr = math.sqrt(rate * (1.0 - rate) / n)
    return ResultRow(
        sweep_value=sweep_value,
        metric=metric,
        empirical=rate,
        theoretical=theoretical,
        trials=n,
        stderr=stderr,
    )


def _mean_row(
    sweep_value: float,
    metric: str,
    samples: np.ndarray,
    theoretical: Optional[float],
) -> ResultRow:
    n = samples.shape[0]
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return ResultRow(
        sweep_value=sweep_value,
        metric=metric,
        empirical=mean,
        theoretical=theoretical,
        trials=n,
        stderr=stderr,
    )


def _detector_rows(
    spec: ExperimentSpec,
    scenario: Scenario,
    sweep_value: float,
    pools: Dict[str, np.ndarray],
) -> List[ResultRow]:
    rows: List[ResultRow] = []
    t1 = pools["t1"]
    t0 = pools.get("t0", t1)  # without any attack the two pools coincide
    for target in spec.pfa_targets:
        cfg = DetectorConfig(
            m_antennas=scenario.model.m_antennas,
            n_pilot=scenario.n_pilot,
            n_random=scenario.n_random,
            sigma2_a=scenario.sigma2_a,
            target_pfa=target,
        )
        gamma = calibrate_threshold(cfg)
        suffix = f"@target={target:g}"
        if spec.kind == "roc":
            rows.append(
                _rate_row(sweep_value, "pfa" + suffix, t0, gamma, target)
            )
        rows.append(
            _rate_row(
                sweep_value,
                "pd" + suffix,
                t1,
                gamma,
                theoretical_pd(cfg, gamma, scenario.spoof_energy),
            )
        )
    return rows


def _theory_rows(scenario: Scenario, sweep_value: float) -> List[ResultRow]:
    pt = TheoryPoint(scenario=scenario, n_train=scenario.n_pilot)
    rows = []
    for metric, value in (
        ("avg_snr_bob_no_spoof", avg_snr_bob_no_spoof(pt)),
        ("avg_snr_bob_spoofed", avg_snr_bob_spoofed(pt)),
        ("avg_snr_eve_spoofed", avg_snr_eve_spoofed(pt)),
    ):
        rows.append(
            ResultRow(
                sweep_value=sweep_value,
                metric=metric,
                empirical=value,
                theoretical=value,
                trials=0,
                stderr=0.0,
            )
        )
    return rows


def _snr_rows(
    scenario: Scenario,
    sweep_value: float,
    pools: Dict[str, np.ndarray],
) -> List[ResultRow]:
    pt = TheoryPoint(scenario=scenario, n_train=scenario.n_pilot)
    return [
        _mean_row(sweep_value, "snr_bob", pools["snr_bob"], avg_snr_bob_spoofed(pt)),
        _mean_row(sweep_value, "snr_eve", pools["snr_eve"], avg_snr_eve_spoofed(pt)),
    ]


def _plain_mean_rows(
    sweep_value: float,
    pools: Dict[str, np.ndarray],
) -> List[ResultRow]:
    return [
        _mean_row(sweep_value, metric, samples, None)
        for metric, samples in pools.items()
    ]


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> List[ResultRow]:
    """Run every sweep point of an experiment and return its result rows.

    ``workers > 1`` distributes blocks over a process pool; outputs are
    identical to the sequential run because block substreams are addressed
    by the experiment description alone and reduction follows the fixed
    block order.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    rows: List[ResultRow] = []
    used_addresses: set = set()
    pool_executor: Optional[ProcessPoolExecutor] = None
    try:
        if workers > 1:
            pool_executor = ProcessPoolExecutor(max_workers=workers)
        for sweep_idx, sweep_value in enumerate(spec.sweep_values):
            scenario = scenario_with(spec.base, spec.sweep_param, sweep_value)
            if spec.kind == "theory_table":
                rows.extend(_theory_rows(scenario, sweep_value))
                continue

            pilot_address = (_TAG_PILOT, sweep_idx)
            assert pilot_address not in used_addresses, "substream address reused"
            used_addresses.add(pilot_address)
            pilot_bits = make_pilot_bits(
                scenario.n_pilot, substream(spec.master_seed, *pilot_address)
            )

            include_null = spec.kind == "roc" and _is_attacked(scenario)
            payloads = []
            for block_idx, count in _chunk_grid(spec.trials):
                address = (_TAG_TRIALS, sweep_idx, block_idx)
                assert address not in used_addresses, "substream address reused"
                used_addresses.add(address)
                payloads.append(
                    (
                        spec.kind,
                        scenario,
                        pilot_bits,
                        spec.master_seed,
                        sweep_idx,
                        block_idx,
                        count,
                        spec.pipeline,
                        include_null,
                    )
                )

            if pool_executor is not None:
                block_results = list(pool_executor.map(_run_block, payloads))
            else:
                block_results = [_run_block(p) for p in payloads]
            pools = {
                metric: np.concatenate([b[metric] for b in block_results])
                for metric in block_results[0]
            }

            if spec.kind in DETECTOR_KINDS:
                rows.extend(_detector_rows(spec, scenario, sweep_value, pools))
            elif spec.kind == "snr_curves":
                rows.extend(_snr_rows(scenario, sweep_value, pools))
            else:
                rows.extend(_plain_mean_rows(sweep_value, pools))
    finally:
        if pool_executor is not None:
            pool_executor.shutdown()
    return rows


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

CSV_HEADER = "sweep_value,metric,empirical,theoretical,trials,stderr"


def _fmt(value: float) -> str:
    return "%.9g" % value


def write_csv(rows: Sequence[ResultRow], path: str) -> None:
    """Write rows as UTF-8 CSV with LF line endings and 9-significant-digit
    floats; identical rows always produce byte-identical files."""
    lines = [CSV_HEADER]
    for row in rows:
        theoretical = "" if row.theoretical is None else _fmt(row.theoretical)
        lines.append(
            ",".join(
                (
                    _fmt(row.sweep_value),
                    row.metric,
                    _fmt(row.empirical),
                    theoretical,
                    str(row.trials),
                    _fmt(row.stderr),
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def run_and_write(
    spec: ExperimentSpec,
    workers: int = 1,
    render_figure: bool = True,
) -> Tuple[List[ResultRow], str, Optional[str]]:
    """Run an experiment and write its CSV (and, by default, a rendered
    figure next to it).  Returns ``(rows, csv_path, figure_path)``."""
    rows = run_experiment(spec, workers=workers)
    csv_path = spec.output_path or f"{spec.kind}.csv"
    write_csv(rows, csv_path)
    figure_path: Optional[str] = None
    if render_figure:
        from .figures import render_figure as _render

        figure_path = _render(rows, spec, csv_path)
    return rows, csv_path, figure_path
