"""Run configuration: a flat ``key = value`` text format with ``#`` comments.

Nested settings use dotted keys::

    lattice_size = 16
    steps = 8
    phi = pi/4.882
    initial.shape = sinusoid      # sinusoid | gaussian | custom
    initial.mean = 1.0
    initial.amplitude = 0.4
    error.model = coupled         # ideal | coupled
    error.pulse_duration_us = 20
    error.j_hz = 214
    modulation = z4               # none | z4
    seed = 0
    output = run.csv
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from qlg_burgers.core import PHI_DEFAULT
from qlg_burgers.errors import ConfigError
from qlg_burgers.nmr import DEFAULT_PULSE_DURATION, J_CHLOROFORM, ErrorModel

SHAPES = ("sinusoid", "gaussian", "custom")
ERROR_MODELS = ("ideal", "coupled")
MODULATIONS = ("none", "z4")


@dataclass(frozen=True)
class InitialProfile:
    shape: str = "sinusoid"
    mean: float = 1.0
    amplitude: float = 0.4
    width: float | None = None
    values: tuple = ()

    def profile(self, n):
        """Density at each of the ``n`` sites."""
        x = np.arange(n, dtype=np.float64)
        if self.shape == "sinusoid":
            return self.mean + self.amplitude * np.sin(2 * np.pi * x / n)
        if self.shape == "gaussian":
            width = self.width if self.width is not None else n / 8.0
            return self.mean + self.amplitude * np.exp(-0.5 * ((x - n / 2) / width) ** 2)
        return np.array(self.values, dtype=np.float64)


@dataclass(frozen=True)
class RunConfig:
    lattice_size: int = 16
    steps: int = 8
    phi: float = PHI_DEFAULT
    initial: InitialProfile = field(default_factory=InitialProfile)
    error_model: str = "ideal"
    pulse_duration_us: float = DEFAULT_PULSE_DURATION * 1e6
    j_hz: float = J_CHLOROFORM
    modulation: str = "none"
    seed: int = 0
    output: str = ""

    def __post_init__(self):
        validate(self)

    def error(self):
        if self.error_model == "ideal":
            return ErrorModel.ideal()
        return ErrorModel.coupled(self.pulse_duration_us * 1e-6)

    def initial_density(self):
        return self.initial.profile(self.lattice_size)

    def with_overrides(self, **changes):
        return replace(self, **changes)


def validate(cfg):
    if cfg.lattice_size < 2:
        raise ConfigError("lattice_size", "must be >= 2")
    if cfg.steps < 0:
        raise ConfigError("steps", "must be >= 0")
    if not math.isfinite(cfg.phi):
        raise ConfigError("phi", "must be finite")
    init = cfg.initial
    if init.shape not in SHAPES:
        raise ConfigError("initial.shape", f"expected one of {SHAPES}, got {init.shape!r}")
    if init.shape == "custom" and len(init.values) != cfg.lattice_size:
        raise ConfigError(
            "initial.values",
            f"has {len(init.values)} entries, lattice_size is {cfg.lattice_size}",
        )
    if init.width is not None and not init.width > 0:
        raise ConfigError("initial.width", "must be positive")
    rho = init.profile(cfg.lattice_size)
    if not np.all(np.isfinite(rho)) or np.any(rho < 0.0) or np.any(rho > 2.0):
        key = "initial.values" if init.shape == "custom" else "initial.amplitude"
        raise ConfigError(key, "initial density leaves [0, 2]")
    if cfg.error_model not in ERROR_MODELS:
        raise ConfigError("error.model", f"expected one of {ERROR_MODELS}, got {cfg.error_model!r}")
    if not cfg.pulse_duration_us > 0:
        raise ConfigError("error.pulse_duration_us", "must be positive")
    if not cfg.j_hz > 0:
        raise ConfigError("error.j_hz", "must be positive")
    if cfg.modulation not in MODULATIONS:
        raise ConfigError("modulation", f"expected one of {MODULATIONS}, got {cfg.modulation!r}")


_PI_EXPR = re.compile(r"^\s*(?:([-+0-9.eE]+)\s*\*\s*)?pi(?:\s*/\s*([-+0-9.eE]+))?\s*$")


def _parse_angle(text):
    """Float, or ``pi``, ``a*pi``, ``pi/b``, ``a*pi/b``."""
    m = _PI_EXPR.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    return float(text)


def _as_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def _as_float(key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _parse_pairs(text):
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in pairs:
            raise ConfigError(key, "given more than once")
        pairs[key] = value
    return pairs


def parse_config(text):
    pairs = _parse_pairs(text)
    top = {}
    init = {}
    for key, value in pairs.items():
        if key == "lattice_size":
            top[key] = _as_int(key, value)
        elif key == "steps":
            top[key] = _as_int(key, value)
        elif key == "seed":
            top[key] = _as_int(key, value)
        elif key == "phi":
            try:
                top[key] = _parse_angle(value)
            except ValueError:
                raise ConfigError(key, f"expected a number or pi expression, got {value!r}") from None
        elif key == "modulation":
            top[key] = value
        elif key == "output":
            top[key] = value
        elif key == "error.model":
            top["error_model"] = value
        elif key == "error.pulse_duration_us":
            top["pulse_duration_us"] = _as_float(key, value)
        elif key == "error.j_hz":
            top["j_hz"] = _as_float(key, value)
        elif key == "initial.shape":
            init["shape"] = value
        elif key in ("initial.mean", "initial.amplitude", "initial.width"):
            init[key.split(".", 1)[1]] = _as_float(key, value)
        elif key == "initial.values":
            items = [v for v in value.replace(",", " ").split() if v]
            init["values"] = tuple(_as_float(key, v) for v in items)
        else:
            raise ConfigError(key, "unknown key")
    if "values" in init and "shape" not in init:
        init["shape"] = "custom"
    return RunConfig(initial=InitialProfile(**init), **top)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg):
    """Serialise to the text format; ``parse_config(dump_config(c)) == c``."""
    init = cfg.initial
    lines = [
        f"lattice_size = {cfg.lattice_size}",
        f"steps = {cfg.steps}",
        f"phi = {cfg.phi!r}",
        f"initial.shape = {init.shape}",
        f"initial.mean = {init.mean!r}",
        f"initial.amplitude = {init.amplitude!r}",
    ]
    if init.width is not None:
        lines.append(f"initial.width = {init.width!r}")
    if init.values:
        lines.append("initial.values = " + ", ".join(repr(float(v)) for v in init.values))
    lines += [
        f"error.model = {cfg.error_model}",
        f"error.pulse_duration_us = {cfg.pulse_duration_us!r}",
        f"error.j_hz = {cfg.j_hz!r}",
        f"modulation = {cfg.modulation}",
        f"seed = {cfg.seed}",
    ]
    if cfg.output:
        lines.append(f"output = {cfg.output}")
    return "\n".join(lines) + "\n"
