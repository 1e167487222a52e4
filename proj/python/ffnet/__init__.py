"""Exact weights, variances and ideality verdicts for layered estimation networks."""

from ._core import (
    DEFAULT_SEED,
    Error,
    Network,
    analyze,
    final_estimate,
    is_ideal,
    loads,
    p_ideal,
    random_network,
    reduce,
    ring_network,
    ring_variance,
    simulate,
    w_motif,
)


def load(path):
    """Read a network file; returns (network, precisions)."""
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


__all__ = [
    "DEFAULT_SEED",
    "Error",
    "Network",
    "analyze",
    "final_estimate",
    "is_ideal",
    "load",
    "loads",
    "p_ideal",
    "random_network",
    "reduce",
    "ring_network",
    "ring_variance",
    "simulate",
    "w_motif",
]
