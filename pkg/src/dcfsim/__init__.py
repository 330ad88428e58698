"""Single-cell wireless simulator: contention MAC, adaptive rate control,
and reliability/latency/energy statistics versus distance."""

__version__ = "0.1.0"
