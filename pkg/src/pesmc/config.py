"""YAML run configurations and the figure-reproducing scenario presets.

Schema (all keys optional when a ``scenario`` preset supplies them)::

    scenario: fig1-closed-loop      # preset to start from, or "custom"
    params: {gamma: 0.25, rho: 0.3333333333333333, alpha: 0.25, beta: 0.5}
    grid_n: 200
    dt: 1.0e-4
    t_final: 10.0
    controller:                     # null for open loop
      gain: 2.0
      law: basic                    # basic | compensated
      sign_mode: {kind: saturation, eps: 1.0e-3}   # ideal | saturation | tanh
      psi: {kind: constant, value: 1.0}            # or polynomial/coefficients, tabulated/values
    disturbance: {kind: sinusoid, amplitude: 1.0, angular_frequency: 20.0, phase: 0.0}
    u0: {profile: sin, mode: 1, amplitude: 1.0}
    snapshot_stride: 0
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import yaml

from pesmc.control import ControllerConfig, SignMode, TestFunction
from pesmc.core import PhysicalParams, build_grid
from pesmc.disturbance import DisturbanceModel
from pesmc.errors import ConfigError, ValidationError
from pesmc.sim import InitialProfile, SimConfig

FIG1_PARAMS = {"gamma": 0.25, "rho": 1.0 / 3.0, "alpha": 0.25, "beta": 0.5}

_BASE = {
    "params": FIG1_PARAMS,
    "grid_n": 200,
    "dt": 1e-4,
    "t_final": 6.0,
    "controller": None,
    "disturbance": {"kind": "zero"},
    "u0": {"profile": "sin", "mode": 1, "amplitude": 1.0},
    "snapshot_stride": 0,
}
_SMC = {
    "gain": 2.0,
    "law": "basic",
    "sign_mode": {"kind": "saturation", "eps": 1e-3},
    "psi": {"kind": "constant", "value": 1.0},
}
_SIN20 = {"kind": "sinusoid", "amplitude": 1.0, "angular_frequency": 20.0, "phase": 0.0}


def _preset(**changes) -> dict:
    out = copy.deepcopy(_BASE)
    out.update(copy.deepcopy(changes))
    return out


PRESETS: dict[str, dict] = {
    "fig1-open-loop": _preset(snapshot_stride=1000),
    "fig1-closed-loop": _preset(t_final=10.0, controller=_SMC, disturbance=_SIN20, snapshot_stride=1000),
    "fig2-norms": _preset(t_final=10.0, controller=_SMC, disturbance=_SIN20),
    "fig3-control-surface": _preset(t_final=10.0, controller=_SMC, disturbance=_SIN20),
}
SCENARIOS = tuple(PRESETS) + ("custom",)

_TOP_KEYS = {"scenario", "params", "grid_n", "dt", "t_final", "controller", "disturbance", "u0", "snapshot_stride"}
_SUB_KEYS = {
    "params": {"gamma", "rho", "alpha", "beta"},
    "controller": {"gain", "law", "sign_mode", "psi"},
    "controller.sign_mode": {"kind", "eps"},
    "controller.psi": {"kind", "value", "coefficients", "values"},
    "disturbance": {"kind", "level", "amplitude", "angular_frequency", "phase", "seed", "hold_interval"},
    "u0": {"profile", "mode", "amplitude", "values"},
}


@dataclass(frozen=True)
class Scenario:
    name: str
    resolved: SimConfig


def _line_map(text: str) -> dict[str, int]:
    """Dotted key path -> 1-based line of the key in the YAML source."""
    lines: dict[str, int] = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
                lines[path] = key_node.start_mark.line + 1
                walk(value_node, path)

    try:
        walk(yaml.compose(text), "")
    except yaml.YAMLError:
        pass
    return lines


def _check_keys(data: dict, lines: dict[str, int]):
    def reject(path):
        where = f" (line {lines[path]})" if path in lines else ""
        raise ConfigError(f"unknown key {path!r}{where}")

    for key in data:
        if key not in _TOP_KEYS:
            reject(key)
    for section, allowed in _SUB_KEYS.items():
        node: Any = data
        for part in section.split("."):
            node = node.get(part) if isinstance(node, dict) else None
        if isinstance(node, dict):
            for key in node:
                if key not in allowed:
                    reject(f"{section}.{key}")


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _num(value, path: str) -> float:
    if isinstance(value, bool):
        raise ValidationError(path, f"expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(path, f"expected a number, got {value!r}") from None


def _int(value, path: str) -> int:
    x = _num(value, path)
    if x != int(x):
        raise ValidationError(path, f"expected an integer, got {value!r}")
    return int(x)


def _section(data: dict, key: str) -> dict:
    value = data.get(key)
    if not isinstance(value, dict):
        raise ValidationError(key, "missing or not a mapping")
    return value


def _require(section: dict, key: str, path: str):
    if key not in section:
        raise ValidationError(f"{path}.{key}", "missing")
    return section[key]


def _build(data: dict) -> SimConfig:
    p = _section(data, "params")
    try:
        params = PhysicalParams(**{k: _num(_require(p, k, "params"), f"params.{k}") for k in ("gamma", "rho", "alpha", "beta")})
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError("params", str(exc)) from None

    grid_n = _int(data.get("grid_n", 200), "grid_n")
    try:
        grid = build_grid(grid_n)
    except ValueError as exc:
        raise ValidationError("grid_n", str(exc)) from None

    controller = None
    c = data.get("controller")
    if c is not None:
        if not isinstance(c, dict):
            raise ValidationError("controller", "must be a mapping or null")
        sm = c.get("sign_mode", {"kind": "saturation", "eps": 1e-3})
        if isinstance(sm, str):
            sm = {"kind": sm}
        psi_spec = c.get("psi", {"kind": "constant", "value": 1.0})
        try:
            sign_mode = SignMode(str(sm.get("kind", "saturation")), _num(sm.get("eps", 1e-3), "controller.sign_mode.eps"))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError("controller.sign_mode", str(exc)) from None
        try:
            kind = psi_spec.get("kind", "constant")
            if kind == "constant":
                psi = TestFunction.constant(grid, _num(psi_spec.get("value", 1.0), "controller.psi.value"))
            elif kind == "polynomial":
                coefs = _require(psi_spec, "coefficients", "controller.psi")
                psi = TestFunction.polynomial(grid, [_num(x, "controller.psi.coefficients") for x in coefs])
            elif kind == "tabulated":
                vals = _require(psi_spec, "values", "controller.psi")
                psi = TestFunction.tabulated(grid, [_num(x, "controller.psi.values") for x in vals])
            else:
                raise ValidationError("controller.psi.kind", f"unknown kind {kind!r}")
        except ValidationError:
            raise
        except ValueError as exc:
            raise ValidationError("controller.psi", str(exc)) from None
        try:
            controller = ControllerConfig(
                gain=_num(_require(c, "gain", "controller"), "controller.gain"),
                psi=psi,
                law=str(c.get("law", "basic")),
                sign_mode=sign_mode,
            )
        except ValidationError:
            raise
        except ValueError as exc:
            raise ValidationError("controller", str(exc)) from None

    d = data.get("disturbance") or {"kind": "zero"}
    if not isinstance(d, dict):
        raise ValidationError("disturbance", "must be a mapping")
    try:
        kind = d.get("kind", "zero")
        if kind == "zero":
            disturbance = DisturbanceModel.zero()
        elif kind == "constant":
            disturbance = DisturbanceModel.constant(_num(d.get("level", 0.0), "disturbance.level"))
        elif kind == "sinusoid":
            disturbance = DisturbanceModel.sinusoid(
                _num(d.get("amplitude", 1.0), "disturbance.amplitude"),
                _num(d.get("angular_frequency", 20.0), "disturbance.angular_frequency"),
                _num(d.get("phase", 0.0), "disturbance.phase"),
            )
        elif kind == "noise":
            disturbance = DisturbanceModel.noise(
                _num(d.get("amplitude", 1.0), "disturbance.amplitude"),
                _int(d.get("seed", 0), "disturbance.seed"),
                _num(d.get("hold_interval", 0.01), "disturbance.hold_interval"),
            )
        else:
            raise ValidationError("disturbance.kind", f"unknown kind {kind!r}")
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError("disturbance", str(exc)) from None

    u = data.get("u0") or {}
    if not isinstance(u, dict):
        raise ValidationError("u0", "must be a mapping")
    values = u.get("values")
    u0 = InitialProfile(
        profile=str(u.get("profile", "sin")),
        mode=_int(u.get("mode", 1), "u0.mode"),
        amplitude=_num(u.get("amplitude", 1.0), "u0.amplitude"),
        values=None if values is None else tuple(_num(x, "u0.values") for x in values),
    )

    return SimConfig(
        params=params,
        grid_n=grid_n,
        dt=_num(data.get("dt", 1e-4), "dt"),
        t_final=_num(data.get("t_final", 10.0), "t_final"),
        controller=controller,
        disturbance=disturbance,
        u0=u0,
        snapshot_stride=_int(data.get("snapshot_stride", 0), "snapshot_stride"),
    )


def config_from_dict(data: dict, overrides: Optional[dict] = None, lines: Optional[dict] = None) -> SimConfig:
    """Validate a raw mapping (optionally based on a preset) into a SimConfig."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping at top level")
    lines = lines or {}
    _check_keys(data, lines)
    name = data.get("scenario", "custom")
    if name not in SCENARIOS:
        raise ValidationError("scenario", f"unknown scenario {name!r}; expected one of {SCENARIOS}")
    merged = {k: v for k, v in data.items() if k != "scenario"}
    if name != "custom":
        merged = _merge(PRESETS[name], merged)
    elif "params" not in merged:
        raise ValidationError("params", "custom scenario must define params")
    if overrides:
        _check_keys(overrides, {})
        merged = _merge(merged, overrides)
    return _build(merged)


def parse_overrides(items) -> dict:
    """Turn ``["controller.gain=3", "dt=5e-5"]`` into a nested mapping."""
    out: dict = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        value = yaml.safe_load(raw)
        node = out
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return out


def parse_config(path=None, overrides: Optional[dict] = None, scenario: Optional[str] = None) -> SimConfig:
    """Load and validate a YAML config file and/or a named scenario plus overrides."""
    data: dict = {}
    lines: dict[str, int] = {}
    if path is not None:
        text = Path(path).read_text()
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f" at line {mark.line + 1}" if mark is not None else ""
            raise ConfigError(f"{path}: malformed YAML{where}") from None
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        data = loaded
        lines = _line_map(text)
    if scenario is not None:
        data = {**data, "scenario": scenario}
    if path is None and scenario is None:
        raise ConfigError("need a config file or a scenario name")
    return config_from_dict(data, overrides, lines)


def resolve_scenario(name: str) -> Scenario:
    if name == "custom":
        raise ValidationError("scenario", "custom scenario requires a config file")
    if name not in PRESETS:
        raise ValidationError("scenario", f"unknown scenario {name!r}; expected one of {SCENARIOS}")
    return Scenario(name, config_from_dict({"scenario": name}))
