"""Exact order-by-order verification of the Foldy-Wouthuysen transform in
weak, static, homogeneous electromagnetic fields."""

__version__ = "0.1.0"
