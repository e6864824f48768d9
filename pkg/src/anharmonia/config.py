"""Tolerances and orders used by every suite, with file and flag overrides.

Precedence: command-line flags, then the JSON file named by ANHARMONIA_CONFIG,
then the built-in defaults below.
"""
from __future__ import annotations

import json
import os

DEFAULTS = {
    "seed": 0,
    "cases": 100,
    "order": 32,
    "tol": 1e-8,
    "cross_ratio_tol": 1e-9,
    "drift_tol": 1e-6,
    "phi_tol": 1e-8,
    "fiber_tol": 1e-8,
    "steps": 4000,
    "p0_order": 40,
    "g3": 4,
}

ENV_VAR = "ANHARMONIA_CONFIG"


def load_config(overrides: dict | None = None, env: dict | None = None) -> dict:
    """Merge defaults, the config file (if any) and explicit overrides (None values ignored)."""
    env = os.environ if env is None else env
    cfg = dict(DEFAULTS)
    path = env.get(ENV_VAR)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        cfg.update(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            cfg[k] = v
    return cfg
