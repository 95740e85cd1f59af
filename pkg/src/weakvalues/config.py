"""Scenario configuration files.

A config is an INI-style file with one section per scenario::

    [theta_sweep]
    family = pulse
    sigma = 1
    omega = 4
    eigenvalues = 0, 1
    f = 0.9238795325,0; -0.3826834324,0
    eta = 0.12, zero:0.39, 0.75
    sweep = theta
    params = 0, 3.14159265359, 181

Complex numbers are ``re,im`` pairs separated by ``;``.  A strength written
``zero:<guess>`` means the D_10 zero crossing nearest ``guess``.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .hilbert import MeasuredObservable, SystemState
from .pointers import Kind, PointerFamily

FAMILIES = tuple(k.value for k in Kind)


@dataclass
class ScenarioConfig:
    name: str = "default"
    families: tuple[str, ...] = FAMILIES
    sigma: float = 1.0
    omega: float = 4.0
    cep: float = 0.0
    eigenvalues: tuple[float, ...] = (0.0, 1.0)
    psi: tuple[complex, ...] = (2 ** -0.5, 2 ** -0.5)
    f: tuple[complex, ...] = (np.cos(-np.pi / 8), np.sin(-np.pi / 8))
    eta: tuple[str, ...] = ()
    eta_range: tuple[float, float, float] | None = None
    sweep: str = "theta"
    params: tuple[float, float, int] = (0.0, np.pi, 181)
    eta_bar: float | None = None
    eta_eff: float | None = None
    scan_range: tuple[float, float] = (0.0, 8.0)
    exclude_origin: float = 0.1
    threshold: float | None = None
    trials: int = 20
    seed: int = 0
    gamma_file: str | None = None
    grid_points: int | None = None
    domain_halfwidth: float | None = None

    def family_objects(self) -> list[PointerFamily]:
        return [PointerFamily(k, sigma=self.sigma, omega=self.omega, cep=self.cep)
                for k in self.families]

    @property
    def observable(self) -> MeasuredObservable:
        return MeasuredObservable(self.eigenvalues)

    @property
    def psi_state(self) -> SystemState:
        return SystemState.normalized(self.psi)

    @property
    def f_state(self) -> SystemState:
        return SystemState.normalized(self.f)

    def eta_tokens(self) -> list[str]:
        """Strength list as written; ``eta_range`` expands inclusively."""
        if self.eta_range is not None:
            lo, hi, step = self.eta_range
            n = int(round((hi - lo) / step)) + 1
            return [repr(float(lo + i * step)) for i in range(n)]
        return list(self.eta)

    def param_values(self) -> np.ndarray:
        lo, hi, n = self.params
        return np.linspace(lo, hi, int(n))


def _floats(text, n=None):
    vals = [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} numbers, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise ValueError("values must be finite")
    return tuple(vals)


def _complexes(text):
    out = []
    for pair in text.split(";"):
        parts = [p for p in pair.split(",") if p.strip()]
        if len(parts) == 1:
            parts.append("0")
        if len(parts) != 2:
            raise ValueError(f"expected 're,im' pair, got {pair.strip()!r}")
        out.append(complex(float(parts[0]), float(parts[1])))
    if not all(np.isfinite(out)):
        raise ValueError("amplitudes must be finite")
    return tuple(out)


def _families(text):
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    if names == ["all"]:
        return FAMILIES
    bad = [n for n in names if n not in FAMILIES]
    if bad or not names:
        raise ValueError(f"unknown family {bad or text!r}; choose from {', '.join(FAMILIES)} or all")
    return tuple(names)


def _eta_list(text):
    toks = [t.strip() for t in text.split(",") if t.strip()]
    for t in toks:
        float(t.split(":", 1)[1]) if t.startswith("zero:") else float(t)
    if not toks:
        raise ValueError("empty strength list")
    return tuple(toks)


def _sweep(text):
    text = text.strip().lower()
    if text not in ("theta", "phi"):
        raise ValueError("sweep must be theta or phi")
    return text


def _params(text):
    lo, hi, n = _floats(text, 3)
    if n < 1 or n != int(n):
        raise ValueError("point count must be a positive integer")
    return lo, hi, int(n)


def _positive(conv):
    def parse(text):
        v = conv(text)
        if not v > 0:
            raise ValueError("must be positive")
        return v
    return parse


def _eta_range(text):
    lo, hi, step = _floats(text, 3)
    if not step > 0 or hi < lo:
        raise ValueError("need start <= stop and a positive step")
    return lo, hi, step


PARSERS = {
    "family": ("families", _families),
    "families": ("families", _families),
    "sigma": ("sigma", _positive(float)),
    "omega": ("omega", _positive(float)),
    "cep": ("cep", float),
    "eigenvalues": ("eigenvalues", _floats),
    "psi": ("psi", _complexes),
    "f": ("f", _complexes),
    "eta": ("eta", _eta_list),
    "eta_range": ("eta_range", _eta_range),
    "sweep": ("sweep", _sweep),
    "params": ("params", _params),
    "eta_bar": ("eta_bar", float),
    "eta_eff": ("eta_eff", float),
    "scan_range": ("scan_range", lambda t: _floats(t, 2)),
    "exclude_origin": ("exclude_origin", float),
    "threshold": ("threshold", float),
    "trials": ("trials", _positive(int)),
    "seed": ("seed", int),
    "gamma_file": ("gamma_file", str.strip),
    "grid_points": ("grid_points", _positive(int)),
    "domain_halfwidth": ("domain_halfwidth", _positive(float)),
}


def _line_index(text: str) -> dict:
    """Map (section, key) -> 1-based line number."""
    index, section = {}, None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            section = m.group(1).strip()
            index[section, None] = lineno
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            index[section, m.group(1).strip().lower()] = lineno
    return index


def parse_config(text: str) -> list[ScenarioConfig]:
    """Parse a config file's contents into scenarios, one per section."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(str(exc).splitlines()[0], line) from None
    lines = _line_index(text)
    scenarios = []
    for section in parser.sections():
        cfg = ScenarioConfig(name=section)
        for key, raw in parser.items(section):
            line = lines.get((section, key))
            if key not in PARSERS:
                raise ConfigError(f"[{section}] unknown key {key!r}", line)
            attr, conv = PARSERS[key]
            try:
                setattr(cfg, attr, conv(raw))
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}", line) from None
        _validate(cfg, lambda key: lines.get((section, key), lines.get((section, None))))
        scenarios.append(cfg)
    if not scenarios:
        raise ConfigError("config has no scenario sections")
    return scenarios


def _validate(cfg: ScenarioConfig, line_of):
    dim = len(cfg.eigenvalues)
    if dim < 2:
        raise ConfigError(f"[{cfg.name}] eigenvalues: need at least two", line_of("eigenvalues"))
    for key in ("psi", "f"):
        amps = getattr(cfg, key)
        if len(amps) != dim:
            raise ConfigError(
                f"[{cfg.name}] {key}: {len(amps)} amplitudes for a {dim}-level system",
                line_of(key))
        if not any(amps):
            raise ConfigError(f"[{cfg.name}] {key}: zero vector", line_of(key))
    if cfg.grid_points is not None and (cfg.grid_points < 256 or cfg.grid_points % 2 == 0):
        raise ConfigError(f"[{cfg.name}] grid_points must be odd and >= 256",
                          line_of("grid_points"))


def load_config(path) -> list[ScenarioConfig]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)

