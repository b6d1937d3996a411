"""Plain-text experiment configuration.

The format is flat ``key = value`` lines with ``#`` comments.  Keys are the
scenario and experiment field names in lower_snake_case.  Power values
(``p_b``, ``p_e``, ``p_er``, ``p_a``) accept an optional ``dB`` suffix,
converted as ``x dB -> 10**(x/10)``.  The parameter sweep is declared as::

    sweep = <param>: v1, v2, v3

where ``<param>`` is one of the sweepable scenario fields (``n_train``
sweeps ``n_pilot`` and ``n_random`` together) and power sweeps may use dB
values too.  Detector experiments additionally need ``pfa_targets``, a
comma-separated list of false-alarm probabilities.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .channel import ChannelModel
from .detector import PIPELINES
from .harness import (
    DETECTOR_KINDS,
    KINDS,
    SWEEP_PARAMS,
    ExperimentSpec,
)
from .training import RANDOM_PHASE_ATTACKS, Scenario

__all__ = ["ConfigError", "parse_spec"]

_POWER_KEYS = frozenset({"p_b", "p_e", "p_er", "p_a"})
_FLOAT_KEYS = frozenset(
    {"alpha_b", "alpha_e", "sigma2_a", "sigma2_b", "sigma2_e"}
) | _POWER_KEYS
_INT_KEYS = frozenset({"m_antennas", "n_pilot", "n_random", "trials", "master_seed"})
_ENUM_KEYS = {
    "kind": tuple(KINDS),
    "random_phase_attack": RANDOM_PHASE_ATTACKS,
    "pipeline": PIPELINES,
}
_STRING_KEYS = frozenset({"output_path"})
_LIST_KEYS = frozenset({"pfa_targets"})
_INT_SWEEP_PARAMS = frozenset({"m_antennas", "n_pilot", "n_random", "n_train"})

_ALL_KEYS = (
    _FLOAT_KEYS
    | _INT_KEYS
    | set(_ENUM_KEYS)
    | _STRING_KEYS
    | _LIST_KEYS
    | {"sweep"}
)


class ConfigError(Exception):
    """A configuration problem, reporting the offending key and line."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"key '{key}': "
        super().__init__(prefix + message)


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    if cut >= 0:
        raw = raw[:cut]
    return raw.strip()


def _parse_power(token: str, key: str, line: int) -> float:
    """Parse a power value, honoring an optional dB suffix."""
    text = token.strip()
    lowered = text.lower()
    is_db = lowered.endswith("db")
    if is_db:
        text = text[:-2].strip()
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"malformed number {token!r}", key=key, line=line) from None
    if is_db:
        return 10.0 ** (value / 10.0)
    return value


def _parse_float(token: str, key: str, line: int) -> float:
    if token.strip().lower().endswith("db"):
        raise ConfigError(
            "dB suffix is only valid for power keys (p_b, p_e, p_er, p_a)",
            key=key,
            line=line,
        )
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"malformed number {token!r}", key=key, line=line) from None


def _parse_int(token: str, key: str, line: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise ConfigError(f"malformed integer {token!r}", key=key, line=line) from None


def _parse_sweep(value: str, line: int) -> Tuple[str, Tuple[float, ...]]:
    if ":" not in value:
        raise ConfigError(
            "expected 'sweep = <param>: v1, v2, ...'", key="sweep", line=line
        )
    param, _, rest = value.partition(":")
    param = param.strip()
    if param not in SWEEP_PARAMS:
        raise ConfigError(
            f"unknown sweep parameter {param!r}; expected one of {sorted(SWEEP_PARAMS)}",
            key="sweep",
            line=line,
        )
    tokens = [t.strip() for t in rest.split(",")]
    tokens = [t for t in tokens if t]
    if not tokens:
        raise ConfigError("sweep value list is empty", key="sweep", line=line)
    values: List[float] = []
    for token in tokens:
        if param in _INT_SWEEP_PARAMS:
            values.append(float(_parse_int(token, "sweep", line)))
        elif param in _POWER_KEYS:
            values.append(_parse_power(token, "sweep", line))
        else:
            values.append(_parse_float(token, "sweep", line))
    return param, tuple(values)


def _parse_pfa_targets(value: str, line: int) -> Tuple[float, ...]:
    tokens = [t.strip() for t in value.split(",")]
    tokens = [t for t in tokens if t]
    if not tokens:
        raise ConfigError("pfa_targets list is empty", key="pfa_targets", line=line)
    targets: List[float] = []
    for token in tokens:
        target = _parse_float(token, "pfa_targets", line)
        if not (0.0 < target < 1.0):
            raise ConfigError(
                f"false-alarm target must lie in (0, 1), got {token!r}",
                key="pfa_targets",
                line=line,
            )
        targets.append(target)
    return tuple(targets)


def parse_spec(text: str, kind: Optional[str] = None) -> ExperimentSpec:
    """Parse configuration text into a validated experiment description.

    ``kind`` supplies the experiment type when invoked through a CLI
    subcommand; a ``kind`` key in the file must agree with it.
    """
    entries: Dict[str, object] = {}
    lines_seen: Dict[str, int] = {}
    sweep: Optional[Tuple[str, Tuple[float, ...]]] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw)
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"expected 'key = value', got {stripped!r}", line=line_no
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", key=key, line=line_no)
        if key in lines_seen:
            raise ConfigError(
                f"duplicate key (first set on line {lines_seen[key]})",
                key=key,
                line=line_no,
            )
        lines_seen[key] = line_no
        if not value:
            raise ConfigError("missing value", key=key, line=line_no)

        if key == "sweep":
            sweep = _parse_sweep(value, line_no)
        elif key in _LIST_KEYS:
            entries[key] = _parse_pfa_targets(value, line_no)
        elif key in _ENUM_KEYS:
            allowed = _ENUM_KEYS[key]
            if value not in allowed:
                raise ConfigError(
                    f"invalid value {value!r}; expected one of {list(allowed)}",
                    key=key,
                    line=line_no,
                )
            entries[key] = value
        elif key in _INT_KEYS:
            entries[key] = _parse_int(value, key, line_no)
        elif key in _POWER_KEYS:
            entries[key] = _parse_power(value, key, line_no)
        elif key in _FLOAT_KEYS:
            entries[key] = _parse_float(value, key, line_no)
        else:  # string keys
            entries[key] = value

    config_kind = entries.get("kind")
    if kind is None and config_kind is None:
        raise ConfigError("missing required key", key="kind")
    if kind is not None and config_kind is not None and kind != config_kind:
        raise ConfigError(
            f"config kind {config_kind!r} conflicts with requested kind {kind!r}",
            key="kind",
            line=lines_seen.get("kind"),
        )
    final_kind = str(config_kind or kind)

    for required in ("m_antennas", "n_pilot", "p_b"):
        if required not in entries:
            raise ConfigError("missing required key", key=required)
    if sweep is None:
        raise ConfigError("missing required key", key="sweep")
    if final_kind in DETECTOR_KINDS and "pfa_targets" not in entries:
        raise ConfigError(
            f"missing required key for kind {final_kind!r}", key="pfa_targets"
        )

    try:
        model = ChannelModel(
            m_antennas=int(entries["m_antennas"]),
            alpha_b=float(entries.get("alpha_b", 1.0)),
            alpha_e=float(entries.get("alpha_e", 1.0)),
        )
        base = Scenario(
            model=model,
            n_pilot=int(entries["n_pilot"]),
            n_random=int(entries.get("n_random", entries["n_pilot"])),
            p_b=float(entries["p_b"]),
            p_e=float(entries.get("p_e", 0.0)),
            p_er=float(entries.get("p_er", 0.0)),
            random_phase_attack=str(entries.get("random_phase_attack", "none")),
            sigma2_a=float(entries.get("sigma2_a", 1.0)),
            sigma2_b=float(entries.get("sigma2_b", 1.0)),
            sigma2_e=float(entries.get("sigma2_e", 1.0)),
            p_a=float(entries.get("p_a", 1.0)),
        )
        return ExperimentSpec(
            kind=final_kind,
            base=base,
            sweep_param=sweep[0],
            sweep_values=sweep[1],
            trials=int(entries.get("trials", 100_000)),
            master_seed=int(entries.get("master_seed", 0)),
            pfa_targets=tuple(entries.get("pfa_targets", ())),
            output_path=entries.get("output_path"),
            pipeline=str(entries.get("pipeline", "realistic")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
