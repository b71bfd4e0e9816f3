"""Treating-interference-as-noise rate regions with mixed discrete and
Gaussian inputs for the two-user Gaussian interference channel."""

from . import constellation, mi_bounds, montecarlo, regions, sumset_geometry

__version__ = "0.1.0"

__all__ = ["constellation", "mi_bounds", "sumset_geometry", "regions", "montecarlo", "__version__"]
