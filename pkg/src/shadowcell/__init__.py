"""Cellular QoS pre-metrics and blocking probability under log-normal
shadowing, on hexagonal and Poisson base-station layouts over a torus."""

__version__ = "0.1.0"
