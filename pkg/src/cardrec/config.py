"""Strict JSON run configuration shared by the ``recover`` and ``sweep`` commands.

Example::

    {
      "dim": 1,
      "grid": 256,
      "family": {"kind": "gaussian", "params": [0.25, 0.5, 1, 2, 4, 8],
                 "allow_small_alpha": true},
      "windows": {"W": 3, "out_window": null, "J_s": 8},
      "tol": 1e-12,
      "path": "spectral",
      "test_function": [
        {"k": [0], "profile": "constant", "a": 1.0},
        {"k": [1], "profile": "constant", "a": 0.5},
        {"k": [-2], "profile": "cosine", "coeffs": [0, 1]}
      ],
      "eval_points": {"range": "-3:3:0.25"},
      "outputs": {"errors": "errors.csv", "points": "points.csv", "sweep": "sweep.csv"}
    }

Unknown keys anywhere are errors.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .families import InterpolatorFamily
from .modulation import PROFILES, STANDARD_TEST_FUNCTION, Profile

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "parse_range", "config_hash"]

TOP_KEYS = {"dim", "grid", "family", "windows", "tol", "path", "test_function",
            "eval_points", "outputs"}
FAMILY_KEYS = {"kind", "param", "params", "mq_exponent", "allow_small_alpha"}
WINDOW_KEYS = {"W", "out_window", "J_s"}
PROFILE_KEYS = {"k", "profile", "a", "coeffs", "beta"}
POINT_KEYS = {"points", "range"}
OUTPUT_KEYS = {"errors", "points", "sweep"}
FAMILY_KINDS = ("polyharmonic", "gaussian", "multiquadric")


class ConfigError(ValueError):
    """Configuration problems; ``problems`` lists every offending field."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def parse_range(text: str) -> np.ndarray:
    """``"a:b:step"`` -> inclusive arithmetic range."""
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError([f"range {text!r} is not of the form a:b:step"]) from None
    if not step > 0 or b < a:
        raise ConfigError([f"range {text!r} needs a <= b and step > 0"])
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class RunConfig:
    dim: int = 1
    grid: int = 256
    kind: str = "gaussian"
    params: list = field(default_factory=list)
    mq_exponent: float = 0.5
    allow_small_alpha: bool = False
    W: int = 3
    out_window: int | None = None
    J_s: int = 8
    tol: float = 1e-12
    path: str = "spectral"
    test_function: tuple = STANDARD_TEST_FUNCTION
    eval_points: np.ndarray | None = None
    outputs: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def digest(self) -> str:
        return config_hash(self.raw)

    def families(self) -> list:
        return [InterpolatorFamily(self.kind, self.dim, p,
                                   self.mq_exponent if self.kind == "multiquadric" else None,
                                   allow_small_alpha=self.allow_small_alpha)
                for p in self.params]


def _unknown(d: dict, allowed: set, where: str, problems: list):
    for key in sorted(set(d) - allowed):
        problems.append(f"{where}{key}: unknown key")


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON object and build a :class:`RunConfig`."""
    problems: list = []
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])
    _unknown(raw, TOP_KEYS, "", problems)
    cfg = RunConfig(raw=raw)

    dim = raw.get("dim", 1)
    if not _is_int(dim) or dim < 1:
        problems.append("dim: must be a positive integer")
    else:
        cfg.dim = dim
    grid = raw.get("grid", 256)
    if not _is_int(grid) or grid < 2 or grid % 2:
        problems.append("grid: must be an even integer >= 2")
    else:
        cfg.grid = grid

    fam = raw.get("family")
    if not isinstance(fam, dict):
        problems.append("family: required object")
    else:
        _unknown(fam, FAMILY_KEYS, "family.", problems)
        kind = fam.get("kind")
        if kind not in FAMILY_KINDS:
            problems.append(f"family.kind: must be one of {FAMILY_KINDS}")
        else:
            cfg.kind = kind
        if "param" in fam and "params" in fam:
            problems.append("family: give either param or params, not both")
        params = fam.get("params", [fam["param"]] if "param" in fam else None)
        if not isinstance(params, list) or not params or not all(_is_num(p) for p in params):
            problems.append("family.param(s): need a number or a nonempty list of numbers")
        else:
            cfg.params = [float(p) for p in params]
        beta = fam.get("mq_exponent", 0.5)
        if not _is_num(beta):
            problems.append("family.mq_exponent: must be a number")
        else:
            cfg.mq_exponent = float(beta)
        small = fam.get("allow_small_alpha", False)
        if not isinstance(small, bool):
            problems.append("family.allow_small_alpha: must be true or false")
        else:
            cfg.allow_small_alpha = small

    win = raw.get("windows", {})
    if not isinstance(win, dict):
        problems.append("windows: must be an object")
    else:
        _unknown(win, WINDOW_KEYS, "windows.", problems)
        W = win.get("W", 3)
        if not _is_int(W) or W < 1:
            problems.append("windows.W: must be a positive integer")
        else:
            cfg.W = W
        ow = win.get("out_window")
        if ow is not None and (not _is_int(ow) or ow < 0):
            problems.append("windows.out_window: must be a nonnegative integer or null")
        else:
            cfg.out_window = ow
        js = win.get("J_s", 8)
        if not _is_int(js) or js < 1:
            problems.append("windows.J_s: must be a positive integer")
        elif _is_int(grid) and js >= grid // 2:
            problems.append("windows.J_s: must be below grid/2")
        else:
            cfg.J_s = js

    tol = raw.get("tol", 1e-12)
    if not _is_num(tol) or not tol > 0:
        problems.append("tol: must be a positive number")
    else:
        cfg.tol = float(tol)
    path = raw.get("path", "spectral")
    if path not in ("spectral", "samples"):
        problems.append("path: must be 'spectral' or 'samples'")
    else:
        cfg.path = path

    tf = raw.get("test_function")
    if tf is not None:
        if not isinstance(tf, list) or not tf:
            problems.append("test_function: must be a nonempty list")
        else:
            profiles = []
            for i, item in enumerate(tf):
                where = f"test_function[{i}]."
                if not isinstance(item, dict):
                    problems.append(f"test_function[{i}]: must be an object")
                    continue
                _unknown(item, PROFILE_KEYS, where, problems)
                k = item.get("k")
                if not isinstance(k, list) or not all(_is_int(v) for v in k) or (
                        _is_int(dim) and len(k) != dim):
                    problems.append(f"{where}k: must be a list of {dim} integers")
                    continue
                prof = item.get("profile")
                if prof not in PROFILES:
                    problems.append(f"{where}profile: must be one of {PROFILES}")
                    continue
                coeffs = item.get("coeffs", [])
                if not isinstance(coeffs, list) or not all(_is_num(c) for c in coeffs):
                    problems.append(f"{where}coeffs: must be a list of numbers")
                    continue
                if prof == "cosine" and (not coeffs or (_is_int(grid) and len(coeffs) - 1 >= grid // 2)):
                    problems.append(f"{where}coeffs: need 1..grid/2 coefficients")
                    continue
                a, beta = item.get("a", 1.0), item.get("beta", 1.0)
                if not _is_num(a) or not _is_num(beta):
                    problems.append(f"{where}a/beta: must be numbers")
                    continue
                profiles.append(Profile(tuple(k), prof, a=float(a), coeffs=tuple(coeffs),
                                        beta=float(beta)))
            cfg.test_function = tuple(profiles)
    elif _is_int(dim) and dim != 1:
        problems.append("test_function: required when dim != 1")

    ep = raw.get("eval_points")
    if ep is not None:
        if not isinstance(ep, dict) or len(set(ep) & POINT_KEYS) != 1:
            problems.append("eval_points: object with exactly one of 'points' or 'range'")
        else:
            _unknown(ep, POINT_KEYS, "eval_points.", problems)
            try:
                if "points" in ep:
                    pts = np.asarray(ep["points"], dtype=float)
                    cfg.eval_points = pts.reshape(-1, cfg.dim)
                else:
                    spec = ep["range"]
                    ranges = [spec] * cfg.dim if isinstance(spec, str) else list(spec)
                    if len(ranges) != cfg.dim:
                        raise ConfigError(["eval_points.range: one range per axis"])
                    axes = [parse_range(r) for r in ranges]
                    mesh = np.meshgrid(*axes, indexing="ij")
                    cfg.eval_points = np.stack([m.ravel() for m in mesh], axis=-1)
            except ConfigError as exc:
                problems.extend(exc.problems)
            except (TypeError, ValueError):
                problems.append("eval_points.points: must be a list of coordinate lists")

    out = raw.get("outputs", {})
    if not isinstance(out, dict):
        problems.append("outputs: must be an object")
    else:
        _unknown(out, OUTPUT_KEYS, "outputs.", problems)
        if not all(isinstance(v, str) for v in out.values()):
            problems.append("outputs: paths must be strings")
        else:
            cfg.outputs = dict(out)

    if not problems:
        try:
            cfg.families()
        except ValueError as exc:
            problems.append(f"family: {exc}")
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read config: {exc}"]) from None
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from None
    return parse_config(raw)
