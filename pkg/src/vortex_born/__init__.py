"""Born-approximation scattering of twisted electron wave-packets."""

__version__ = "0.1.0"
