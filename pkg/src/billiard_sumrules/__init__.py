"""Order-one spectral sum rules for two-dimensional quantum billiards."""

__version__ = "0.1.0"
