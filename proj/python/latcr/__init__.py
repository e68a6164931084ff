"""Listen-and-talk full-duplex cognitive radio: closed forms and simulator."""

from ._core import (
    LatcrError,
    __version__,
    analyze,
    optimal_power,
    q,
    q_inv,
    simulate,
    steady_state,
)

__all__ = [
    "LatcrError",
    "__version__",
    "analyze",
    "optimal_power",
    "q",
    "q_inv",
    "simulate",
    "steady_state",
]
