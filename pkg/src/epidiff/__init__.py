"""epidiff - solver and verification harness for the SIRS-B cholera reaction-diffusion system."""

from importlib.metadata import version

__version__ = version("epidiff")
