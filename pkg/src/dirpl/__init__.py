"""Directional millimeter-wave path loss from omnidirectional models."""
__version__ = "0.1.0"
