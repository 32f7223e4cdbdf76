"""Named initial states and controls used by the CLI, scripts and tests."""

from __future__ import annotations

import numpy as np

from .grids import Grid, GridFunction
from .semigroup import ControlSignal


class PresetError(ValueError):
    pass


def _split(preset: str):
    parts = preset.split(":", 1)
    return parts[0], (parts[1] if len(parts) == 2 else None)


def initial_state(grid: Grid, preset: str) -> GridFunction:
    """Sample a named initial profile.

    ``one``, ``zero``, ``sinh_bc`` (sinh(1 - w), outflow-compatible),
    ``poly:k`` for (1 - w)^k, ``sine:k`` for sin(k pi w).
    """
    base, param = _split(preset)
    if base == "one":
        return GridFunction(grid, np.ones(grid.n))
    if base == "zero":
        return GridFunction(grid, np.zeros(grid.n))
    if base == "sinh_bc":
        return GridFunction(grid, np.sinh(1.0 - grid.nodes))
    if base == "poly":
        try:
            k = int(param)
        except (TypeError, ValueError):
            raise PresetError(f"invalid parameter in preset {preset!r}") from None
        if k < 1:
            raise PresetError(f"poly exponent must be >= 1, got {k}")
        return GridFunction(grid, (1.0 - grid.nodes) ** k)
    if base == "sine":
        try:
            k = int(param)
        except (TypeError, ValueError):
            raise PresetError(f"invalid parameter in preset {preset!r}") from None
        if k < 1:
            raise PresetError(f"sine frequency must be >= 1, got {k}")
        return GridFunction(grid, np.sin(k * np.pi * grid.nodes))
    raise PresetError(f"unknown initial-state preset {preset!r}")


def control_signal(preset: str, t_final: float, dt: float, m: int = 1) -> ControlSignal:
    """Build a named control: ``zero``, ``const:c`` or ``ramp:c``."""
    base, param = _split(preset)
    if base == "zero":
        return ControlSignal.zero(t_final, dt, m=m)
    if base in ("const", "ramp"):
        try:
            level = float(param)
        except (TypeError, ValueError):
            raise PresetError(f"invalid parameter in preset {preset!r}") from None
        if base == "const":
            return ControlSignal.constant(level, t_final, dt, m=m)
        return ControlSignal.ramp(level, t_final, dt, m=m)
    raise PresetError(f"unknown control preset {preset!r}")
