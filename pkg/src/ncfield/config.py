"""Run configuration: a sectioned key/value (INI) file, one file per run.

Grammar (all sections optional, unknown sections or keys are errors)::

    [run]         units = working | si
    [params]      hbar, m, kappa, l0, m_osc, omega, g = <float>   (registered symbols only)
    [representation]  shift = <rational, default 1/2>
    [transform]   field = kappa | gravity | zero
    [spectrum]    n_max, n_max_cap = <int>; tolerance, meff_tolerance = <float>
                  k_grid = <float list>; direction = <k1>, <k2>; check_k = <float>
                  airy_levels = <int>; method = dense | sparse
    [particles]   <name> = <mass> | catalog
    [ep]          mode = derived | shared; reference = <particle name>
                  assert_recovered = <bool>; tolerance = <float>; trajectories = <bool>
    [freefall]    t_start, t_stop = <float>; n_t = <int>; position, velocity = <3 floats>
                  assert_coincide = <bool>; tolerance = <float>
    [output]      dir = <path>

Lists are comma separated.  In ``si`` units, unset ``l0``, ``omega`` and
``m_osc`` default to the Planck anchors and ``g`` to standard gravity.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .constants import PARTICLE_MASSES, ParticleSpec
from .opalg import is_registered

__all__ = ["ConfigError", "EPConfig", "FreefallConfig", "RunConfig", "SpectrumConfig", "load_config"]

STANDARD_GRAVITY = 9.80665


class ConfigError(ValueError):
    pass


@dataclass
class SpectrumConfig:
    n_max: int = 12
    n_max_cap: int | None = None
    tolerance: float = 1e-9
    meff_tolerance: float = 1e-6
    k_grid: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4)
    direction: tuple[float, float] = (1.0, 0.0)
    check_k: float = 1.0
    airy_levels: int = 5
    method: str = "dense"


@dataclass
class EPConfig:
    mode: str = "derived"
    reference: str = "electron"
    assert_recovered: bool = False
    tolerance: float = 1e-12
    trajectories: bool = False


@dataclass
class FreefallConfig:
    t_start: float = 0.0
    t_stop: float = 1.0
    n_t: int = 11
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    velocity: tuple[float, float, float] = (1.0, 0.0, 0.0)
    assert_coincide: bool = False
    tolerance: float = 1e-12


@dataclass
class RunConfig:
    units: str = "working"
    params: dict[str, float] = field(default_factory=dict)
    shift: Fraction = Fraction(1, 2)
    transform_field: str = "kappa"
    spectrum: SpectrumConfig = field(default_factory=SpectrumConfig)
    particles: list[ParticleSpec] = field(default_factory=list)
    ep: EPConfig = field(default_factory=EPConfig)
    freefall: FreefallConfig = field(default_factory=FreefallConfig)
    out_dir: str | None = None
    source: str | None = None

    def param(self, name: str, default: float) -> float:
        return self.params.get(name, default)


_SECTIONS = {"run", "params", "representation", "transform", "spectrum", "particles", "ep", "freefall", "output"}
_KEYS = {
    "run": {"units"},
    "representation": {"shift"},
    "transform": {"field"},
    "spectrum": {"n_max", "n_max_cap", "tolerance", "meff_tolerance", "k_grid", "direction",
                 "check_k", "airy_levels", "method"},
    "ep": {"mode", "reference", "assert_recovered", "tolerance", "trajectories"},
    "freefall": {"t_start", "t_stop", "n_t", "position", "velocity", "assert_coincide", "tolerance"},
    "output": {"dir"},
}


def _floats(text: str, n: int | None = None) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} values, got {text!r}")
    return vals


def _positive(name: str, v: float) -> float:
    if not v > 0:
        raise ConfigError(f"{name} must be positive")
    return v


def _get(sec, key, conv, name):
    try:
        return conv(sec[key])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {name}: {sec[key]!r}") from exc


def _bool(sec, key):
    try:
        return sec.getboolean(key)
    except ValueError as exc:
        raise ConfigError(f"bad boolean for {key}: {sec[key]!r}") from exc


def parse_config(text: str, source: str | None = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc

    unknown = set(cp.sections()) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for name, keys in _KEYS.items():
        if cp.has_section(name):
            extra = set(cp[name]) - keys
            if extra:
                raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(extra))}")

    cfg = RunConfig(source=source)
    if cp.has_section("run"):
        cfg.units = cp["run"].get("units", "working")
        if cfg.units not in ("working", "si"):
            raise ConfigError("units must be 'working' or 'si'")
    if cp.has_section("params"):
        for key, value in cp["params"].items():
            if not is_registered(key):
                raise ConfigError(f"unregistered parameter symbol {key!r}")
            cfg.params[key] = _get(cp["params"], key, float, key)
    if cp.has_section("representation") and "shift" in cp["representation"]:
        cfg.shift = _get(cp["representation"], "shift", Fraction, "shift")
    if cp.has_section("transform"):
        cfg.transform_field = cp["transform"].get("field", "kappa")
        if cfg.transform_field not in ("kappa", "gravity", "zero"):
            raise ConfigError("field must be kappa, gravity or zero")

    if cp.has_section("spectrum"):
        s, sc = cp["spectrum"], cfg.spectrum
        if "n_max" in s:
            sc.n_max = _get(s, "n_max", int, "n_max")
        if "n_max_cap" in s:
            sc.n_max_cap = _get(s, "n_max_cap", int, "n_max_cap")
        if "tolerance" in s:
            sc.tolerance = _positive("tolerance", _get(s, "tolerance", float, "tolerance"))
        if "meff_tolerance" in s:
            sc.meff_tolerance = _positive("meff_tolerance", _get(s, "meff_tolerance", float, "meff_tolerance"))
        if "k_grid" in s:
            sc.k_grid = _floats(s["k_grid"])
        if "direction" in s:
            sc.direction = _floats(s["direction"], 2)
        if "check_k" in s:
            sc.check_k = _get(s, "check_k", float, "check_k")
        if "airy_levels" in s:
            sc.airy_levels = _get(s, "airy_levels", int, "airy_levels")
        if "method" in s:
            sc.method = s["method"]
            if sc.method not in ("dense", "sparse"):
                raise ConfigError("method must be dense or sparse")
        if sc.n_max < 1:
            raise ConfigError("n_max must be >= 1")

    if cp.has_section("particles"):
        for name, value in cp["particles"].items():
            if value.strip() == "catalog":
                if name not in PARTICLE_MASSES:
                    raise ConfigError(f"no catalog mass for {name!r}")
                mass = PARTICLE_MASSES[name]
            else:
                mass = _get(cp["particles"], name, float, name)
            try:
                cfg.particles.append(ParticleSpec(name, mass))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc

    if cp.has_section("ep"):
        e, ec = cp["ep"], cfg.ep
        ec.mode = e.get("mode", ec.mode)
        if ec.mode not in ("derived", "shared"):
            raise ConfigError("ep mode must be derived or shared")
        ec.reference = e.get("reference", ec.reference)
        if "assert_recovered" in e:
            ec.assert_recovered = _bool(e, "assert_recovered")
        if "trajectories" in e:
            ec.trajectories = _bool(e, "trajectories")
        if "tolerance" in e:
            ec.tolerance = _positive("tolerance", _get(e, "tolerance", float, "tolerance"))

    if cp.has_section("freefall"):
        f, fc = cp["freefall"], cfg.freefall
        for key in ("t_start", "t_stop", "tolerance"):
            if key in f:
                setattr(fc, key, _get(f, key, float, key))
        if "n_t" in f:
            fc.n_t = _get(f, "n_t", int, "n_t")
        if "position" in f:
            fc.position = _floats(f["position"], 3)
        if "velocity" in f:
            fc.velocity = _floats(f["velocity"], 3)
        if "assert_coincide" in f:
            fc.assert_coincide = _bool(f, "assert_coincide")
        if fc.t_stop < fc.t_start or fc.n_t < 1:
            raise ConfigError("freefall time grid must be ascending with n_t >= 1")

    if cp.has_section("output"):
        cfg.out_dir = cp["output"].get("dir")
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    """Read a config file; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text, str(path))
