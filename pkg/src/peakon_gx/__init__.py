"""Closed-form multipeakon solutions of the two-component Geng-Xue equation."""

__version__ = "0.1.0"
