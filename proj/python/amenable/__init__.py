"""Python access to the amenable C++ core."""

from ._amenable import (
    ConfigError,
    ResourceCapExceeded,
    RunOutcome,
    ball,
    boundary_ratio,
    cluster_statistics,
    experiments,
    k_boundary,
    r_boundary,
    resolve_config,
    run_file,
    run_json,
    verify,
    z_adjacency_ids,
)

__all__ = [
    "ConfigError",
    "ResourceCapExceeded",
    "RunOutcome",
    "ball",
    "boundary_ratio",
    "cluster_statistics",
    "experiments",
    "k_boundary",
    "r_boundary",
    "resolve_config",
    "run_file",
    "run_json",
    "verify",
    "z_adjacency_ids",
]
