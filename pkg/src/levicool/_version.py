"""Single source for the package version written into output headers."""

__version__ = "0.1.0"
