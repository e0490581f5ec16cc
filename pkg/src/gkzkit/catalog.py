"""Built-in regression configurations.

Covers the square case (as many points as dimensions), a confluent case, a
case whose cone is the whole line (no facets), the last-coordinate
hypersurface case, and a classical three-dimensional case.
"""

from __future__ import annotations

from .lattice import ParameterVector, PointConfig, validate_config

BUILTIN_POINTS: dict[str, list[tuple[int, ...]]] = {
    "single": [(1,)],
    "cusp": [(1,), (2,)],
    "bessel": [(1,), (-1,)],
    "trinomial": [(0, 1), (1, 1), (-1, 1)],
    "gauss": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)],
}

BUILTIN_ALPHA: dict[str, tuple[str, ...]] = {
    "single": ("1/2",),
    "cusp": ("1/2",),
    "bessel": ("1/2",),
    "trinomial": ("1/3", "1/5"),
    "gauss": ("1/2", "1/3", "1/5"),
}


def builtin_config(name: str) -> PointConfig:
    return validate_config(BUILTIN_POINTS[name])


def builtin_alpha(name: str) -> ParameterVector:
    return ParameterVector.of(*BUILTIN_ALPHA[name])


def builtin_names() -> list[str]:
    return list(BUILTIN_POINTS)
