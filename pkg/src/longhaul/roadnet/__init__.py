"""Synthetic road network, path queries and the GIS provider interface."""
from .network import (
    DEFAULT_SPEED_KMH,
    Edge,
    Network,
    NetworkError,
    NetworkSpec,
    Station,
    generate_network,
)
from .provider import (
    CachedProvider,
    Provider,
    RecordingProvider,
    ReplayMiss,
    ReplayProvider,
    SyntheticProvider,
)
from .routing import Router, Trajectory, make_trajectory

__all__ = [
    "DEFAULT_SPEED_KMH",
    "Edge",
    "Network",
    "NetworkError",
    "NetworkSpec",
    "Station",
    "generate_network",
    "CachedProvider",
    "Provider",
    "RecordingProvider",
    "ReplayMiss",
    "ReplayProvider",
    "SyntheticProvider",
    "Router",
    "Trajectory",
    "make_trajectory",
]
