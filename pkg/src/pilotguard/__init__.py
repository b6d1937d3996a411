"""pilotguard: Monte Carlo study of a random-training-assisted
pilot-spoofing detector with secure beamforming for MISO wiretap links.

The package is organized as a small simulation stack:

* :mod:`pilotguard.numerics`    — random streams, complex Gaussian sampling,
  even-degree chi-square CDF/quantile.
* :mod:`pilotguard.channel`     — flat-fading channel model and sampling.
* :mod:`pilotguard.training`    — pilot/random training-phase synthesis
  under configurable attacks.
* :mod:`pilotguard.estimation`  — LS, blind iterative LS, and two-phase
  enhanced channel estimation.
* :mod:`pilotguard.detector`    — chi-square spoofing detector with analytic
  threshold calibration.
* :mod:`pilotguard.beamforming` — MRT, attacker-nulling, and secrecy-optimal
  beamformers plus rate bookkeeping.
* :mod:`pilotguard.theory`      — closed-form average-SNR formulas.
* :mod:`pilotguard.harness`     — deterministic Monte Carlo runner and CSV
  writer; :mod:`pilotguard.figures` renders companion plots;
  :mod:`pilotguard.config` parses experiment files;
  :mod:`pilotguard.cli` is the command-line entry point.
"""

from .channel import ChannelModel, ChannelRealization, sample_channels
from .detector import (
    DetectionOutcome,
    DetectorConfig,
    calibrate_threshold,
    correlation_diagnostics,
    decide,
    estimate_pair,
    run_detection,
    test_statistic,
    theoretical_pd,
    theoretical_pfa,
)
from .beamforming import (
    DegenerateGeometryError,
    ged_beamformer,
    instantaneous_snr,
    mrt_beamformer,
    secrecy_rate,
    zf_beamformer,
)
from .estimation import (
    align_sign,
    cee_estimate,
    ils_estimate,
    ls_estimate,
    normalized_mse,
)
from .harness import (
    ExperimentSpec,
    ResultRow,
    run_and_write,
    run_experiment,
    scenario_with,
    write_csv,
)
from .config import ConfigError, parse_spec
from .numerics import (
    chi2_even_cdf,
    chi2_even_quantile,
    hermitian_inner,
    make_stream,
    sample_cscg,
    substream,
)
from .theory import (
    TheoryPoint,
    avg_snr_bob_no_spoof,
    avg_snr_bob_spoofed,
    avg_snr_eve_spoofed,
)
from .training import (
    Scenario,
    TrainingObservation,
    make_pilot_bits,
    synthesize,
    synthesize_pilot_phase,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # numerics
    "make_stream",
    "substream",
    "sample_cscg",
    "hermitian_inner",
    "chi2_even_cdf",
    "chi2_even_quantile",
    # channel
    "ChannelModel",
    "ChannelRealization",
    "sample_channels",
    # training
    "Scenario",
    "TrainingObservation",
    "make_pilot_bits",
    "synthesize",
    "synthesize_pilot_phase",
    # estimation
    "ls_estimate",
    "ils_estimate",
    "cee_estimate",
    "align_sign",
    "normalized_mse",
    # detector
    "DetectorConfig",
    "DetectionOutcome",
    "test_statistic",
    "calibrate_threshold",
    "decide",
    "theoretical_pfa",
    "theoretical_pd",
    "estimate_pair",
    "run_detection",
    "correlation_diagnostics",
    # beamforming
    "DegenerateGeometryError",
    "mrt_beamformer",
    "zf_beamformer",
    "ged_beamformer",
    "instantaneous_snr",
    "secrecy_rate",
    # theory
    "TheoryPoint",
    "avg_snr_bob_no_spoof",
    "avg_snr_bob_spoofed",
    "avg_snr_eve_spoofed",
    # harness / config
    "ExperimentSpec",
    "ResultRow",
    "scenario_with",
    "run_experiment",
    "run_and_write",
    "write_csv",
    "ConfigError",
    "parse_spec",
]
