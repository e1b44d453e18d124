"""Scenario configuration: a flat, typed ``key = value`` text format.

One assignment per line; ``#`` starts a comment.  Values are Python
literals (numbers, quoted strings, lists, ``True``/``False``/``None``); a
bare word is read as a string, so ``process = ua`` works.  Example::

    process = ua
    c1 = -5e-4
    c2 = 1e-4
    sweep_key = S0
    sweep_values = [1.0, 1.3, 1.6, 1.9]

Each process accepts its own key set (see :data:`PROCESS_KEYS`); anything
else is rejected with the list of accepted keys.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .errors import ConfigError

__all__ = [
    "ScenarioConfig",
    "PROCESSES",
    "PROCESS_KEYS",
    "parse_config_text",
    "load_config",
    "format_config",
    "validate",
]

PROCESSES = ("ua", "sr", "creep", "necking", "ring", "varcheck")

_FLOAT, _INT, _STR, _BOOL, _LIST, _OPT_FLOAT = "float", "int", "str", "bool", "list", "float|None"

# key -> (type, default); a default of ... marks a required key.
_COMMON = {
    "process": (_STR, ...),
    "name": (_STR, None),
    "sweep_key": (_STR, None),
    "sweep_values": (_LIST, None),
    "csv_name": (_STR, None),
    "svg_name": (_STR, None),
}
_ROD_INTEGRATOR = {
    "tol": (_FLOAT, 1e-10),
    "horizon": (_FLOAT, ...),
    "samples": (_INT, 401),
}
_SR_COMMON = {
    "q1": (_FLOAT, ...),
    "q2": (_FLOAT, ...),
    "b0": (_FLOAT, ...),
    "b1": (_FLOAT, ...),
    "a1": (_FLOAT, ...),
    "Y": (_FLOAT, ...),
    "nu": (_FLOAT, 0.3),
    "dissipation": (_STR, "exponential"),
    "D": (_FLOAT, 1.0),
    "beta": (_FLOAT, 1.0),
    "c": (_FLOAT, 0.0),
    "S0": (_FLOAT, 1.0),
    "eta0": (_FLOAT, 0.0),
}

PROCESS_KEYS: Dict[str, Dict[str, Tuple[str, Any]]] = {
    "ua": {
        **_COMMON,
        "c1": (_FLOAT, ...),
        "c2": (_FLOAT, ...),
        "p": (_FLOAT, ...),
        "k": (_FLOAT, ...),
        "alpha": (_FLOAT, -1.0),
        "S0": (_FLOAT, 1.0),
        "xi0": (_FLOAT, 0.0),
        **_ROD_INTEGRATOR,
    },
    "sr": {**_COMMON, **_SR_COMMON, "eta_star": (_FLOAT, ...), **_ROD_INTEGRATOR},
    "creep": {
        **_COMMON,
        **_SR_COMMON,
        "force": (_FLOAT, ...),
        "A0": (_FLOAT, 1.0),
        "load_coupling": (_OPT_FLOAT, None),
        "eta_cap": (_FLOAT, 5.0),
        **_ROD_INTEGRATOR,
    },
    "necking": {
        **_COMMON,
        "a": (_FLOAT, 1.0),
        "b": (_FLOAT, 1.0),
        "lambda0": (_FLOAT, 1.0),
        "lambda1": (_FLOAT, 2.0),
        "force_per_area": (_OPT_FLOAT, None),
        "speed": (_FLOAT, 1.0),
        "alpha": (_FLOAT, 1.0),
        "n_points": (_INT, 801),
        "search_load": (_BOOL, True),
    },
    "ring": {
        **_COMMON,
        "r_outer": (_FLOAT, ...),
        "r_inner": (_FLOAT, ...),
        "r_degraded": (_FLOAT, ...),
        "density_jump": (_FLOAT, ...),
        "Y": (_FLOAT, 1.0),
        "nu": (_FLOAT, 0.3),
        "n_grid": (_INT, 1000),
        "exact": (_BOOL, True),
    },
    "varcheck": {
        **_COMMON,
        "samples": (_INT, 100),
        "seed": (_INT, 0),
        "h": (_FLOAT, 1e-5),
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario: the process and every resolved parameter.

    ``values`` holds all keys of the process, defaults filled in, so the
    resolved set can be written verbatim into output headers.
    """

    process: str
    values: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    @property
    def name(self) -> str:
        return self.values.get("name") or self.process

    @property
    def sweep(self) -> Optional[Tuple[str, List[Any]]]:
        key = self.values.get("sweep_key")
        if key is None:
            return None
        return key, list(self.values["sweep_values"])

    def with_values(self, **updates) -> "ScenarioConfig":
        """Copy with some keys replaced and re-validated."""
        merged = dict(self.values)
        merged.update(updates)
        return validate(merged)

    def single_run(self, value=None) -> "ScenarioConfig":
        """The configuration of one sweep member (or of a plain run)."""
        merged = dict(self.values)
        if value is not None:
            merged[merged["sweep_key"]] = value
        merged["sweep_key"] = None
        merged["sweep_values"] = None
        return validate(merged)


def _strip_comment(line: str) -> str:
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _parse_value(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        if text.replace("_", "").replace("-", "").isalnum():
            return text
        raise ConfigError(f"cannot parse value {text!r}") from None


def _coerce(key: str, kind: str, value):
    if kind in (_FLOAT, _OPT_FLOAT):
        if value is None and kind == _OPT_FLOAT:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise ConfigError(f"{key} must be finite, got {value!r}")
        return v
    if kind == _INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return int(value)
    if kind == _BOOL:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be True or False, got {value!r}")
        return value
    if kind == _STR:
        if value is None:
            return None
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        return value
    if kind == _LIST:
        if value is None:
            return None
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key} must be a list, got {value!r}")
        return list(value)
    raise AssertionError(kind)


def validate(raw: Dict[str, Any]) -> ScenarioConfig:
    """Check keys and types and fill defaults.

    Raises
    ------
    ConfigError
        On an unknown process, an unknown or inapplicable key, a missing
        required key, a wrong type or an invalid sweep.
    """
    process = raw.get("process")
    if process not in PROCESSES:
        raise ConfigError(f"process must be one of {', '.join(PROCESSES)}; got {process!r}")
    schema = PROCESS_KEYS[process]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(
            f"unknown key(s) for process {process}: {', '.join(unknown)}; "
            f"accepted keys: {', '.join(sorted(schema))}"
        )
    values: Dict[str, Any] = {}
    for key, (kind, default) in schema.items():
        if key in raw:
            values[key] = _coerce(key, kind, raw[key])
        elif default is ...:
            raise ConfigError(f"missing required key {key!r} for process {process}")
        else:
            values[key] = default
    key, vals = values["sweep_key"], values["sweep_values"]
    if (key is None) != (vals is None):
        raise ConfigError("sweep_key and sweep_values must be given together")
    if key is not None:
        if key not in schema or schema[key][0] not in (_FLOAT, _OPT_FLOAT, _INT):
            numeric = sorted(k for k, (t, _) in schema.items() if t in (_FLOAT, _OPT_FLOAT, _INT))
            raise ConfigError(f"sweep_key {key!r} is not a numeric key; choose one of {', '.join(numeric)}")
        if not vals:
            raise ConfigError("sweep_values must be a nonempty list")
        values["sweep_values"] = [_coerce(key, schema[key][0], v) for v in vals]
    return ScenarioConfig(process, values)


def parse_config_text(text: str) -> ScenarioConfig:
    """Parse and validate configuration text."""
    raw: Dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line).strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, value = body.partition("=")
        key = key.strip()
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: invalid key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = _parse_value(value.strip())
    return validate(raw)


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def format_config(cfg: ScenarioConfig) -> List[str]:
    """Resolved configuration as ``key = value`` lines in sorted key order."""
    return [f"{k} = {cfg.values[k]!r}" for k in sorted(cfg.values)]
