"""Gravity-capillary water waves in holomorphic coordinates."""

import json

from ._core import (
    BlowUp,
    ConfigError,
    Error,
    PhysicalParams,
    WaveState,
    __version__,
    dispersion_omega,
    empirical_constant,
    frequency_envelope,
    initial_state,
    simulate,
    state_from_eulerian,
    step,
    time_rescaled,
    verify,
)


def read_csv(path):
    """Read a holowave CSV: returns (config dict, column names, rows of floats)."""
    config, columns, rows = {}, None, []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("# config: "):
                config = json.loads(line[len("# config: "):])
            elif line.startswith("#"):
                continue
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append([_number(v) for v in line.split(",")])
    return config, columns, rows


def _number(text):
    try:
        return float(text)
    except ValueError:
        return text


__all__ = [
    "BlowUp",
    "ConfigError",
    "Error",
    "PhysicalParams",
    "WaveState",
    "__version__",
    "dispersion_omega",
    "empirical_constant",
    "frequency_envelope",
    "initial_state",
    "read_csv",
    "simulate",
    "state_from_eulerian",
    "step",
    "time_rescaled",
    "verify",
]
