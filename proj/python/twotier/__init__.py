"""Temporal team-network analytics: backbone members, communities and their evolution."""

from ._twotier import (
    ConfigError,
    Error,
    ParseError,
    __version__,
    betweenness,
    classify_events,
    density,
    detect,
    generate_log,
    modularity,
    run_pipeline,
    weighted_degree,
    wks_shells,
)

__all__ = [
    "ConfigError",
    "Error",
    "ParseError",
    "__version__",
    "betweenness",
    "classify_events",
    "density",
    "detect",
    "generate_log",
    "modularity",
    "run_pipeline",
    "weighted_degree",
    "wks_shells",
]
