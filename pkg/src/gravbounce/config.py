"""Run configuration for the command-line interface.

A :class:`RunConfig` is assembled from defaults, an optional ``key = value``
file and command-line flags (later sources win).  Quantities accept explicit
unit suffixes and are stored in canonical units:

* lengths in um (``um``, ``nm``, ``mm``, ``m``),
* energies in peV (``peV``, ``neV``, ``eV``),
* times in s (``s``, ``ms``, ``us``; bare numbers are read as ms; a list
  item ``start:stop:count`` is an evenly spaced range),
* wavenumbers in 1/um (``/um``, ``1/um``).

Single-mirror grids (``system = single`` or ``superposition``) live in the
scaled variables ``zeta = z/z0`` and ``k z0``; bare numbers are taken as scaled
values and suffixed lengths or wavenumbers are converted with ``z0``.
"""
from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import ConfigError
from .gravity_states import STANDARD_GRAVITY, make_scales

COMMANDS = ("levels", "modes", "wavefunction", "spectrum", "wigner", "evolve", "mixture", "yukawa")
SYSTEMS = ("single", "superposition", "double", "region2")
SCALED_SYSTEMS = ("single", "superposition")
QUANTITIES = ("position", "momentum", "levels", "delta-position", "delta-momentum", "coefficients", "potential")
_COMMAND_QUANTITIES = {
    "evolve": ("position", "momentum", "coefficients"),
    "yukawa": ("levels", "position", "momentum", "delta-position", "delta-momentum", "potential"),
}
MIXTURES = ("coherent", "incoherent")
EXPORT_MARKER = "# gravbounce export"

_LENGTH = {"um": 1.0, "nm": 1e-3, "mm": 1e3, "m": 1e6}
_ENERGY = {"peV": 1.0, "neV": 1e3, "eV": 1e12}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6}
_WAVENUMBER = {"/um": 1.0, "1/um": 1.0}
_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/0-9]*)\s*$")


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI invocation (canonical units)."""

    command: str
    system: str = "single"
    n: int = 1
    n1: int = 1
    n2: int = 2
    n_max: int = 6
    L: float = 28.0
    h: float = 27.0
    m: int = 1
    m_max: int = 6
    N: int = 15
    p1: float = 0.7
    p2: float = 0.3
    mixture: str = "coherent"
    quantity: str = "position"
    W0: float = -1.0
    delta: float = 10.0
    g: float = STANDARD_GRAVITY
    z_min: float = 0.0
    z_max: float = 10.0
    z_samples: int = 201
    k_min: float = -6.0
    k_max: float = 6.0
    k_samples: int = 201
    times: tuple = (0.0,)
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    output: str = "-"

    @property
    def scaled_axes(self):
        return self.system in SCALED_SYSTEMS


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))
_INT_KEYS = ("n", "n1", "n2", "n_max", "m", "m_max", "N", "z_samples", "k_samples")
_FLOAT_KEYS = ("p1", "p2", "g", "abs_tol", "rel_tol")
_LENGTH_KEYS = ("L", "h", "delta")
_AXIS_Z = ("z_min", "z_max")
_AXIS_K = ("k_min", "k_max")
_CHOICES = {"command": COMMANDS, "system": SYSTEMS, "quantity": QUANTITIES, "mixture": MIXTURES}


def _split_number(key, text):
    match = _NUMBER.match(str(text))
    if not match:
        raise ConfigError(f"{key}: malformed number {text!r}", key)
    value = float(match.group(1))
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", key)
    return value, match.group(2)


def _with_unit(key, text, table, default_unit):
    value, unit = _split_number(key, text)
    unit = unit or default_unit
    if unit not in table:
        raise ConfigError(f"{key}: unknown unit {unit!r}; accepted: {', '.join(table)}", key)
    return value * table[unit]


def parse_length(key, text):
    """Length in um."""
    return _with_unit(key, text, _LENGTH, "um")


def parse_energy(key, text):
    """Energy in peV."""
    return _with_unit(key, text, _ENERGY, "peV")


def parse_time(key, text):
    """Time in s; bare numbers are milliseconds."""
    return _with_unit(key, text, _TIME, "ms")


def parse_times(key, text):
    """Comma-separated times in s; an item ``start:stop:count`` expands to an even grid."""
    items = [s for s in str(text).split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{key}: at least one time is required", key)
    out = []
    for item in items:
        parts = item.split(":")
        if len(parts) == 1:
            out.append(parse_time(key, item))
            continue
        if len(parts) != 3:
            raise ConfigError(f"{key}: a range is written start:stop:count, got {item!r}", key)
        lo, hi = parse_time(key, parts[0]), parse_time(key, parts[1])
        count = _parse_int(key, parts[2])
        if count < 2 or not hi > lo:
            raise ConfigError(f"{key}: a range needs stop > start and count >= 2, got {item!r}", key)
        out.extend(float(v) for v in np.linspace(lo, hi, count))
    return tuple(out)


def _parse_int(key, text):
    try:
        value = float(str(text).strip())
    except ValueError:
        raise ConfigError(f"{key}: malformed integer {text!r}", key) from None
    if not value.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {text!r}", key)
    return int(value)


def _parse_axis(key, text, scaled, z0):
    value, unit = _split_number(key, text)
    is_z = key in _AXIS_Z
    table = _LENGTH if is_z else _WAVENUMBER
    if not unit:
        return value
    if unit not in table:
        raise ConfigError(f"{key}: unknown unit {unit!r}; accepted: {', '.join(table)}", key)
    value *= table[unit]
    if scaled:
        # physical value converted to the scaled variable
        value = value / z0 if is_z else value * z0
    return value


def _system_defaults(system, L):
    if system in SCALED_SYSTEMS:
        return {"z_min": 0.0, "z_max": 10.0, "k_min": -6.0, "k_max": 6.0}
    if system == "double":
        return {"z_min": 0.0, "z_max": L, "k_min": -3.0, "k_max": 3.0}
    return {"z_min": 0.0, "z_max": 80.0, "k_min": -3.0, "k_max": 3.0}


def _command_defaults(command):
    if command == "yukawa":
        return {"system": "region2", "quantity": "delta-position", "times": "0,1.5,3,6,9"}
    if command in ("evolve", "mixture"):
        return {"system": "region2", "times": "0:10:201"}
    return {}


def build_config(values: dict) -> RunConfig:
    """Validate textual ``values`` (keys as in :class:`RunConfig`) into a config.

    Raises
    ------
    ConfigError
        For unknown keys, malformed numbers or violated constraints; the
        exception carries the offending key.
    """
    for key in values:
        if key not in FIELD_NAMES:
            raise ConfigError(f"unknown key {key!r}", key)
    if "command" not in values:
        raise ConfigError("command: a command is required", "command")
    raw = dict(_command_defaults(str(values["command"]).strip()))
    raw.update({k: v for k, v in values.items() if v is not None})

    out = {}
    for key, choices in _CHOICES.items():
        if key in raw:
            val = str(raw[key]).strip()
            if val not in choices:
                raise ConfigError(f"{key}: {val!r} is not one of {', '.join(choices)}", key)
            out[key] = val
    for key in _INT_KEYS:
        if key in raw:
            out[key] = _parse_int(key, raw[key])
    for key in _FLOAT_KEYS:
        if key in raw:
            out[key] = _split_number(key, raw[key])[0]
    for key in _LENGTH_KEYS:
        if key in raw:
            out[key] = parse_length(key, raw[key])
    if "W0" in raw:
        out["W0"] = parse_energy("W0", raw["W0"])
    if "times" in raw:
        out["times"] = raw["times"] if isinstance(raw["times"], tuple) else parse_times("times", raw["times"])
    if "output" in raw:
        out["output"] = str(raw["output"]).strip() or "-"

    cfg = RunConfig(**out)
    if not cfg.g > 0.0:
        raise ConfigError("g: must be positive", "g")
    scaled = cfg.system in SCALED_SYSTEMS
    z0 = make_scales(g=cfg.g).z0
    axes = _system_defaults(cfg.system, cfg.L)
    for key in _AXIS_Z + _AXIS_K:
        if key in raw:
            val = raw[key]
            axes[key] = float(val) if isinstance(val, float) else _parse_axis(key, val, scaled, z0)
    cfg = replace(cfg, **axes)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    """Check ranges and cross-field constraints of a config."""

    def need(ok, key, msg):
        if not ok:
            raise ConfigError(f"{key}: {msg}", key)

    need(cfg.n >= 1, "n", "must be >= 1")
    need(cfg.n1 >= 1 and cfg.n2 >= 1 and cfg.n1 != cfg.n2, "n1", "n1 and n2 must be distinct levels >= 1")
    need(1 <= cfg.n_max <= 200, "n_max", "must be in [1, 200]")
    need(cfg.L > 0.0, "L", "must be a positive length")
    need(cfg.h >= 0.0, "h", "must be a non-negative length")
    need(1 <= cfg.m <= 20, "m", "must be in [1, 20]")
    need(1 <= cfg.m_max <= 20, "m_max", "must be in [1, 20]")
    need(1 <= cfg.N <= 30, "N", "must be in [1, 30]")
    need(cfg.p1 >= 0.0, "p1", "must be in [0, 1]")
    need(cfg.p2 >= 0.0, "p2", "must be in [0, 1]")
    need(abs(cfg.p1 + cfg.p2 - 1.0) <= 1e-12, "p2", "probabilities must sum to 1 (p1 + p2 = 1)")
    need(cfg.delta > 0.0, "delta", "must be a positive length")
    need(cfg.z_samples >= 1, "z_samples", "must be >= 1")
    need(cfg.k_samples >= 1, "k_samples", "must be >= 1")
    need(cfg.z_max > cfg.z_min or cfg.z_samples == 1, "z_max", "must exceed z_min")
    need(cfg.k_max > cfg.k_min or cfg.k_samples == 1, "k_max", "must exceed k_min")
    need(cfg.abs_tol > 0.0, "abs_tol", "must be positive")
    need(cfg.rel_tol > 0.0, "rel_tol", "must be positive")
    need(all(math.isfinite(t) and t >= 0.0 for t in cfg.times), "times", "must be finite and >= 0")
    if cfg.command == "wigner":
        need(len(cfg.times) == 1, "times", "a Wigner grid takes exactly one time")
    allowed = _COMMAND_QUANTITIES.get(cfg.command, ("position", "momentum"))
    need(cfg.quantity in allowed, "quantity", f"must be one of {', '.join(allowed)} for {cfg.command}")
    if cfg.command in ("evolve", "yukawa"):
        need(cfg.system == "region2", "system", "must be region2 for this command")
    if cfg.command == "mixture":
        need(cfg.system in ("superposition", "region2"), "system", "must be superposition or region2 for mixture")


def _format_float(x):
    return format(float(x), ".17g")


def emit_config(cfg: RunConfig):
    """``key = value`` lines (canonical units) that parse back to ``cfg``."""
    lines = []
    for key, value in asdict(cfg).items():
        if key in _LENGTH_KEYS:
            text = _format_float(value) + "um"
        elif key == "W0":
            text = _format_float(value) + "peV"
        elif key == "times":
            text = ",".join(_format_float(t) + "s" for t in value)
        elif key in _AXIS_Z:
            text = _format_float(value) + ("" if cfg.scaled_axes else "um")
        elif key in _AXIS_K:
            text = _format_float(value) + ("" if cfg.scaled_axes else "/um")
        elif isinstance(value, float):
            text = _format_float(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return lines


def read_key_values(text, source="<config>"):
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped.

    A previous export (first line :data:`EXPORT_MARKER`) is accepted as well:
    its ``# key = value`` metadata lines are read and the data rows ignored.
    """
    lines = text.splitlines()
    is_export = bool(lines) and lines[0].strip() == EXPORT_MARKER
    values = {}
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if is_export:
            if not s.startswith("#"):
                break
            s = s[1:].strip()
            if "=" not in s or s.startswith("meta."):
                continue
        elif not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}", None)
        key, value = (p.strip() for p in s.split("=", 1))
        values[key] = value
    return values


def parse_config(args: dict, config_text=None, source="<config>") -> RunConfig:
    """Merge file values with flag values (flags win) and validate."""
    values = read_key_values(config_text, source) if config_text else {}
    values.update({k: v for k, v in args.items() if v is not None})
    return build_config(values)
