"""Convolutional network-error correcting codes over BSC-edge networks."""

__version__ = "1.0.0"
