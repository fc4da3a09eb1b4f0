"""mubforge: exact constructions of mutually unbiased bases in prime-power dimensions."""

__all__ = ["__version__"]
__version__ = "0.1.0"
