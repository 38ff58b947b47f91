"""Numerical study of a Sobolev-Morrey interpolation inequality and a family
showing that its integrability range cannot be extended."""

__version__ = "0.1.0"
