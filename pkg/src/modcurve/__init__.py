"""Exact computation with genus-zero congruence subgroups: hauptmoduls from
Siegel products, maps to the j-line, conic twists, and adelic group recovery."""

__version__ = "0.1.0"
