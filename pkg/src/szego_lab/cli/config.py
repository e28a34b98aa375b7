"""Experiment configuration: a sectioned ``key = value`` text file.

Example::

    [symbol]
    log_b0 = "0.2*cos(x)"
    bsub = "0.1"
    bsub_form = ratio

    [grid]
    n = 32, 48, 64, 96, 128, 192, 256
    buffer = 64

Every section is optional; missing keys take the defaults of
:class:`ExperimentConfig`.  Expressions are quoted.  ``bsub_form = ratio``
means the expression is ``bsub / b0`` rather than ``bsub`` itself.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..combinatorics import DEFAULT_CAP, StepDistribution
from .expr import parse_symbol_expr

DEFAULT_GRID = (32, 48, 64, 96, 128, 192, 256)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class WalkConfig:
    support: tuple[Fraction, ...] = (Fraction(-1), Fraction(1))
    probs: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 2))
    m: int = 6
    n: int = 3

    def distribution(self) -> StepDistribution:
        return StepDistribution(self.support, self.probs)


@dataclass(frozen=True)
class ProbeConfig:
    c1: str = "0"
    n_grid: tuple[int, ...] = DEFAULT_GRID
    buffer: int = 64


@dataclass(frozen=True)
class ExperimentConfig:
    log_b0: str = "0"
    bsub: str = "0"
    bsub_form: str = "absolute"
    n_grid: tuple[int, ...] = DEFAULT_GRID
    buffer: int | None = 64
    residue_L: int = 5
    residue_k_min: int | None = None
    series_tol: float = 1e-14
    phi_tol: float = 1e-13
    phi_reading: str = "y3"
    drift_check: bool = True
    enumeration_cap: int = DEFAULT_CAP
    walk: WalkConfig = field(default_factory=WalkConfig)
    probe: ProbeConfig = field(default_factory=ProbeConfig)

    def __post_init__(self):
        _check_grid(self.n_grid, "grid.n")
        if self.bsub_form not in ("absolute", "ratio"):
            raise ConfigError(f"bsub_form must be 'absolute' or 'ratio', got {self.bsub_form!r}")
        if self.phi_reading not in ("y3", "u3"):
            raise ConfigError(f"phi_reading must be 'y3' or 'u3', got {self.phi_reading!r}")
        if self.series_tol <= 0 or self.phi_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.buffer is not None and self.buffer < 0:
            raise ConfigError("buffer must be >= 0")
        if self.residue_L < 0:
            raise ConfigError("residues.L must be >= 0")
        for text in (self.log_b0, self.bsub):
            try:
                parse_symbol_expr(text)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict:
        """JSON-ready echo of the configuration (rationals as strings)."""

        def plain(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, tuple):
                return [plain(x) for x in v]
            if isinstance(v, dict):
                return {k: plain(x) for k, x in v.items()}
            return v

        return plain(dataclasses.asdict(self))


def _check_grid(ns, what: str) -> None:
    if len(ns) == 0:
        raise ConfigError(f"{what} is empty")
    if any(n < 1 for n in ns):
        raise ConfigError(f"{what} must hold positive integers")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError(f"{what} must be strictly increasing")


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _rationals(text: str, what: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t) for t in text.replace(",", " ").split())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _get(cp, section, key, conv, default):
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key)
    try:
        return conv(raw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: {exc}") from exc


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _optional_int(text: str):
    return None if text.strip().lower() in ("auto", "none", "") else int(text)


KNOWN = {
    "symbol": {"log_b0", "bsub", "bsub_form"},
    "grid": {"n", "buffer"},
    "residues": {"l", "k_min"},
    "tolerances": {"series", "phi"},
    "flags": {"phi_reading", "drift_check", "enumeration_cap"},
    "walk": {"support", "probs", "m", "n"},
    "probe": {"c1", "n", "buffer"},
}


def parse_config_text(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    for section in cp.sections():
        if section not in KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        extra = set(cp.options(section)) - KNOWN[section]
        if extra:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(extra))}")

    d = ExperimentConfig.__dataclass_fields__
    grid = _get(cp, "grid", "n", lambda s: _ints(s, "grid.n"), DEFAULT_GRID)
    _check_grid(grid, "grid.n")
    walk_default = WalkConfig()
    walk = WalkConfig(
        support=_get(cp, "walk", "support", lambda s: _rationals(s, "walk.support"), walk_default.support),
        probs=_get(cp, "walk", "probs", lambda s: _rationals(s, "walk.probs"), walk_default.probs),
        m=_get(cp, "walk", "m", int, walk_default.m),
        n=_get(cp, "walk", "n", int, walk_default.n),
    )
    try:
        walk.distribution()
    except ValueError as exc:
        raise ConfigError(f"walk: {exc}") from exc
    probe = ProbeConfig(
        c1=_get(cp, "probe", "c1", _unquote, "0"),
        n_grid=_get(cp, "probe", "n", lambda s: _ints(s, "probe.n"), grid),
        buffer=_get(cp, "probe", "buffer", int, ProbeConfig.buffer),
    )
    _check_grid(probe.n_grid, "probe.n")
    try:
        parse_symbol_expr(probe.c1)
    except ValueError as exc:
        raise ConfigError(f"probe.c1: {exc}") from exc

    return ExperimentConfig(
        log_b0=_get(cp, "symbol", "log_b0", _unquote, d["log_b0"].default),
        bsub=_get(cp, "symbol", "bsub", _unquote, d["bsub"].default),
        bsub_form=_get(cp, "symbol", "bsub_form", str.strip, d["bsub_form"].default),
        n_grid=grid,
        buffer=_get(cp, "grid", "buffer", _optional_int, d["buffer"].default),
        residue_L=_get(cp, "residues", "l", int, d["residue_L"].default),
        residue_k_min=_get(cp, "residues", "k_min", _optional_int, d["residue_k_min"].default),
        series_tol=_get(cp, "tolerances", "series", float, d["series_tol"].default),
        phi_tol=_get(cp, "tolerances", "phi", float, d["phi_tol"].default),
        phi_reading=_get(cp, "flags", "phi_reading", str.strip, d["phi_reading"].default),
        drift_check=_get(cp, "flags", "drift_check", _bool, d["drift_check"].default),
        enumeration_cap=_get(cp, "flags", "enumeration_cap", int, d["enumeration_cap"].default),
        walk=walk,
        probe=probe,
    )


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)
