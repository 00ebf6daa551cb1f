"""Globally optimal trilateration via small eigenvalue problems."""

from ._core import (
    TrilaterationError,
    calibrate_pathloss,
    cost,
    gradient,
    refine_ml,
    rss_to_distance_squared,
    solve,
    solve_linear,
    solve_simple,
    weights_rss,
    weights_toa,
)

__all__ = [
    "TrilaterationError",
    "calibrate_pathloss",
    "cost",
    "gradient",
    "refine_ml",
    "rss_to_distance_squared",
    "solve",
    "solve_linear",
    "solve_simple",
    "weights_rss",
    "weights_toa",
]
