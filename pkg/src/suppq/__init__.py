"""suppq: reduction orders, divisibility conditions and point relations on
products of the multiplicative group and elliptic curves over Q."""

__version__ = "0.1.0"
